#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>

#include "tvpvarx/chainio.hpp"
#include "tvpvarx/priors.hpp"
#include "tvpvarx/runconfig.hpp"
#include "tvpvarx/simulate.hpp"

using namespace tvpvarx;
namespace fs = std::filesystem;

namespace {

struct TempDir {
  fs::path path;
  TempDir() {
    path = fs::temp_directory_path() / ("tvpvarx_test_" + std::to_string(std::rand()));
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
  std::string file(const std::string& name) const { return (path / name).string(); }
};

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path);
  out << content;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  return std::string(std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>());
}

}  // namespace

TEST_CASE("157 level rows produce 156 log-differences") {
  TempDir dir;
  std::string csv = "date,er,gdp,oil\n";
  QuarterDate d{1980, 1};
  for (int r = 0; r < 157; ++r) {
    csv += d.str() + "," + std::to_string(100.0 + r) + "," + std::to_string(200.0 + r) + "," +
           std::to_string(50.0 + r) + "\n";
    d = d.next();
  }
  write_file(dir.file("data.csv"), csv);
  const Dataset data = ingest_csv(dir.file("data.csv"));
  CHECK(data.levels.rows() == 157);
  CHECK(data.size() == 156);
  CHECK(data.n() == 2);
  CHECK(data.names == std::vector<std::string>{"er", "gdp", "oil"});
}

TEST_CASE("log-difference arithmetic") {
  TempDir dir;
  write_file(dir.file("data.csv"),
             "date,a,x\n1995-Q1,100,10\n1995-Q2,110,10\n");
  const Dataset data = ingest_csv(dir.file("data.csv"));
  CHECK(data.y(0, 0) == doctest::Approx(std::log(1.1)).epsilon(1e-12));
  CHECK(data.y(0, 0) == doctest::Approx(0.09531).epsilon(1e-4));
  CHECK(data.x(0) == 0.0);
}

TEST_CASE("ingestion errors name the offending row") {
  TempDir dir;
  SUBCASE("non-positive level") {
    write_file(dir.file("bad.csv"), "date,a,x\n1995-Q1,100,10\n1995-Q2,0,10\n");
    try {
      ingest_csv(dir.file("bad.csv"));
      FAIL("expected NonPositiveLevel");
    } catch (const NonPositiveLevel& e) {
      CHECK(std::string(e.what()).find("row 1") != std::string::npos);
    }
  }
  SUBCASE("date gap") {
    write_file(dir.file("bad.csv"), "date,a,x\n1995-Q1,100,10\n1995-Q3,101,10\n");
    CHECK_THROWS_AS(ingest_csv(dir.file("bad.csv")), DateGap);
  }
  SUBCASE("missing column") {
    write_file(dir.file("bad.csv"), "date,a,x\n1995-Q1,100,10\n1995-Q2,101,10\n");
    ColumnMapping mapping;
    mapping.endogenous = {"missing"};
    CHECK_THROWS_AS(ingest_csv(dir.file("bad.csv"), mapping), MissingColumn);
  }
  SUBCASE("unparseable number") {
    write_file(dir.file("bad.csv"), "date,a,x\n1995-Q1,100,10\n1995-Q2,oops,10\n");
    try {
      ingest_csv(dir.file("bad.csv"));
      FAIL("expected ParseError");
    } catch (const ParseError& e) {
      CHECK(std::string(e.what()).find("row 2") != std::string::npos);
    }
  }
  SUBCASE("wrong field count") {
    write_file(dir.file("bad.csv"), "date,a,x\n1995-Q1,100,10\n1995-Q2,101\n");
    CHECK_THROWS_AS(ingest_csv(dir.file("bad.csv")), ParseError);
  }
  SUBCASE("bad date") {
    write_file(dir.file("bad.csv"), "date,a,x\nQ1/1995,100,10\n");
    CHECK_THROWS_AS(ingest_csv(dir.file("bad.csv")), ParseError);
  }
}

TEST_CASE("month dates map to quarters") {
  TempDir dir;
  write_file(dir.file("data.csv"),
             "date,a,x\n1995-01-01,100,10\n1995-04-01,110,11\n1995-07-15,120,12\n");
  const Dataset data = ingest_csv(dir.file("data.csv"));
  CHECK(data.dates[0] == QuarterDate{1995, 1});
  CHECK(data.dates[2] == QuarterDate{1995, 3});
}

TEST_CASE("csv write and ingest round trip") {
  DgpSpec spec;
  spec.n = 2;
  spec.k = 1;
  spec.h0 = Vector::Constant(2, std::log(0.01));
  RngStream rng(31);
  const auto sim = simulate_dgp(spec, 60, rng);
  TempDir dir;
  write_csv(sim.data, dir.file("roundtrip.csv"));
  const Dataset back = ingest_csv(dir.file("roundtrip.csv"));
  CHECK((back.levels - sim.data.levels).cwiseAbs().maxCoeff() == 0.0);
  CHECK(back.names == sim.data.names);
  CHECK(back.dates[0] == sim.data.dates[0]);
}

namespace {
Chain tiny_chain(std::uint64_t seed) {
  DgpSpec spec;
  spec.n = 2;
  spec.k = 1;
  Vector theta(2);
  theta << 0.05, 0.02;
  spec.theta = theta;
  spec.B0 = {0.3 * Matrix::Identity(2, 2)};
  spec.D_tail0 = {Vector::Constant(2, 0.01)};
  spec.h0 = Vector::Constant(2, std::log(0.01));
  RngStream rng(seed);
  const auto sim = simulate_dgp(spec, 60, rng);
  ModelConfig cfg;
  cfg.n = 2;
  cfg.k = 1;
  cfg.t0 = 40;
  cfg.seed = seed;
  cfg.mcmc = {30, 10, 2};
  const PriorSpec prior = calibrate(sim.data.y.topRows(40), sim.data.x.head(40), cfg, {});
  RngStream chain_rng(cfg.seed);
  Chain chain = run_chain(sim.data, cfg, prior, chain_rng);
  chain.config_hash = "cafe0123";
  return chain;
}
}  // namespace

TEST_CASE("chain file round trip is exact and rewriting is byte-identical") {
  const Chain chain = tiny_chain(41);
  TempDir dir;
  write_chain(chain, dir.file("chain.txt"));
  const Chain back = read_chain(dir.file("chain.txt"));
  REQUIRE(back.records.size() == chain.records.size());
  CHECK(back.cfg.n == chain.cfg.n);
  CHECK(back.cfg.t0 == chain.cfg.t0);
  CHECK(back.data_length == chain.data_length);
  CHECK(back.config_hash == "cafe0123");
  for (std::size_t i = 0; i < chain.records.size(); ++i) {
    CHECK(back.records[i].iteration == chain.records[i].iteration);
    CHECK((back.records[i].theta - chain.records[i].theta).cwiseAbs().maxCoeff() == 0.0);
    CHECK((back.records[i].coef_path - chain.records[i].coef_path).cwiseAbs().maxCoeff() == 0.0);
    CHECK((back.records[i].alpha_path - chain.records[i].alpha_path).cwiseAbs().maxCoeff() == 0.0);
    CHECK((back.records[i].h_path - chain.records[i].h_path).cwiseAbs().maxCoeff() == 0.0);
    CHECK((back.records[i].hyper.Q - chain.records[i].hyper.Q).cwiseAbs().maxCoeff() == 0.0);
    CHECK((back.records[i].hyper.W - chain.records[i].hyper.W).cwiseAbs().maxCoeff() == 0.0);
    CHECK(back.records[i].indicators == chain.records[i].indicators);
  }
  write_chain(back, dir.file("chain2.txt"));
  CHECK(read_file(dir.file("chain.txt")) == read_file(dir.file("chain2.txt")));
}

TEST_CASE("chain files from identical seeds are byte-identical") {
  const Chain a = tiny_chain(43);
  const Chain b = tiny_chain(43);
  TempDir dir;
  write_chain(a, dir.file("a.txt"));
  write_chain(b, dir.file("b.txt"));
  CHECK(read_file(dir.file("a.txt")) == read_file(dir.file("b.txt")));
}

TEST_CASE("chain reader rejects foreign files") {
  TempDir dir;
  write_file(dir.file("junk.txt"), "hello\nworld\n");
  CHECK_THROWS_AS(read_chain(dir.file("junk.txt")), ParseError);
}

TEST_CASE("config hash is canonical") {
  RunConfig a;
  a.seed = 5;
  RunConfig b;
  b.seed = 5;
  CHECK(a.hash() == b.hash());
  b.seed = 6;
  CHECK(a.hash() != b.hash());
  CHECK(a.hash().size() == 16);
}

TEST_CASE("manifest carries command, hash and seed") {
  RunConfig cfg;
  cfg.seed = 77;
  const std::string manifest = manifest_text(cfg, "estimate");
  CHECK(manifest.find("command=estimate") != std::string::npos);
  CHECK(manifest.find("config_hash=" + cfg.hash()) != std::string::npos);
  CHECK(manifest.find("seed=77") != std::string::npos);
}

TEST_CASE("time index resolution") {
  DgpSpec spec;
  spec.n = 1;
  spec.k = 1;
  spec.h0 = Vector::Constant(1, std::log(0.01));
  RngStream rng(47);
  const auto sim = simulate_dgp(spec, 20, rng);  // dates start 1980-Q1
  CHECK(resolve_time_index(sim.data, "7") == 7);
  CHECK(resolve_time_index(sim.data, "1980-Q2") == 0);  // second level row
  CHECK(resolve_time_index(sim.data, "1981-Q1") == 3);
  CHECK_THROWS_AS(resolve_time_index(sim.data, "2030-Q1"), ConfigError);
  CHECK_THROWS_AS(resolve_time_index(sim.data, "1980-Q1"), ConfigError);  // no log-diff yet
  CHECK_THROWS_AS(resolve_time_index(sim.data, "999"), ConfigError);
}

TEST_CASE("run config model plumbing") {
  RunConfig cfg;
  cfg.mode = "unconstrained";
  cfg.lags = 2;
  const ModelConfig model = cfg.model_config(2);
  CHECK_FALSE(model.constrained);
  CHECK(model.k == 2);
  cfg.mode = "bogus";
  CHECK_THROWS_AS(cfg.model_config(2), ConfigError);
  cfg.mode = "constrained";
  cfg.u0_diag = "0.1,0.2";
  const PriorOverrides overrides = cfg.prior_overrides(2);
  CHECK(overrides.u0_diag(1) == 0.2);
  cfg.u0_diag = "0.1,0.2,0.3";
  CHECK_THROWS_AS(cfg.prior_overrides(2), ConfigError);
}

TEST_CASE("table and grid writers produce the documented headers") {
  TempDir dir;
  BenchmarkResult result;
  result.variables = {"er", "gdp"};
  result.horizons = 5;
  auto fill = [&](ErrorTable& t) {
    t.variables = result.variables;
    t.horizons = 5;
    t.mean = Matrix::Constant(2, 5, 1.0);
    t.sd = Matrix::Constant(2, 5, 0.5);
  };
  fill(result.constrained);
  fill(result.constant_var);
  fill(result.unconstrained);
  write_error_tables(result, dir.file("errors.csv"));
  const std::string content = read_file(dir.file("errors.csv"));
  CHECK(content.find("variable,step,constrained_mean,constrained_std,var_mean,var_std,"
                     "tvpvarx_mean,tvpvarx_std") == 0);
  // 2 variables x 5 steps rows + header
  int lines = 0;
  for (char ch : content)
    if (ch == '\n') ++lines;
  CHECK(lines == 11);
}
