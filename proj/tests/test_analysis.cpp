#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "tvpvarx/analysis.hpp"
#include "tvpvarx/priors.hpp"
#include "tvpvarx/simulate.hpp"

using namespace tvpvarx;

namespace {

// Hand-built chain: every record holds one constant coefficient path.
struct FixtureSpec {
  Vector c, d1, theta;
  Matrix B;
  double log_sigma = std::log(1e-300);  // zero volatility unless overridden
};

Chain make_chain(int t0, int T, const std::vector<FixtureSpec>& draws) {
  const int n = static_cast<int>(draws.front().c.size());
  Chain chain;
  chain.cfg.n = n;
  chain.cfg.k = 1;
  chain.cfg.t0 = t0;
  chain.cfg.constrained = true;
  chain.data_length = T;
  const CoefLayout layout(n, 1, false);
  const int T_est = T - t0;
  int iter = 1;
  for (const auto& d : draws) {
    ChainRecord rec;
    rec.iteration = iter++;
    rec.theta = d.theta;
    Vector state(layout.dim());
    for (int e = 0; e < n; ++e) state(layout.c_index(e)) = d.c(e);
    for (int r = 0; r < n; ++r)
      for (int c = 0; c < n; ++c) state(layout.b_index(1, r, c)) = d.B(r, c);
    for (int e = 0; e < n; ++e) state(layout.d_index(1, e)) = d.d1(e);
    rec.coef_path = state.transpose().replicate(T_est, 1);
    rec.alpha_path = Matrix::Zero(T_est, n * (n - 1) / 2);
    rec.h_path = Matrix::Constant(T_est, n, d.log_sigma);
    rec.hyper.Q = Matrix::Zero(layout.cb_dim(), layout.cb_dim());
    rec.hyper.Qtilde = Matrix::Zero(layout.d_dim(), layout.d_dim());
    for (int i = 1; i < n; ++i) rec.hyper.G.push_back(Matrix::Zero(i, i));
    rec.hyper.W = Matrix::Zero(n, n);
    rec.indicators = Eigen::MatrixXi::Zero(T_est, n);
    chain.records.push_back(std::move(rec));
  }
  return chain;
}

FixtureSpec base_fixture() {
  FixtureSpec f;
  f.c = Vector::Constant(2, 0.004);
  f.B = Matrix(2, 2);
  f.B << 0.3, 0.05, -0.1, 0.25;
  f.theta = Vector(2);
  f.theta << 0.05, 0.02;
  f.d1 = Vector(2);
  f.d1 << 0.012, -0.004;
  return f;
}

}  // namespace

TEST_CASE("impulse response at horizon one is log(1.1) D0") {
  const auto f = base_fixture();
  const Vector d0 = implied_d0(f.theta, {f.B}, {f.d1});
  const Matrix irf = impulse_response({f.B}, {d0, f.d1}, 0.10, 5);
  CHECK((irf.row(0).transpose() - std::log(1.1) * d0).cwiseAbs().maxCoeff() <= 1e-14);
}

TEST_CASE("nilpotent dynamics freeze the cumulative response after two steps") {
  Vector d0(2), d1(2);
  d0 << 0.03, 0.01;
  d1 << -0.01, 0.02;
  const Matrix irf = impulse_response({Matrix::Zero(2, 2)}, {d0, d1}, 0.10, 6);
  const Vector expected = std::log(1.1) * (d0 + d1);
  for (int h = 2; h <= 6; ++h)
    CHECK((irf.row(h - 1).transpose() - expected).cwiseAbs().maxCoeff() <= 1e-14);
}

TEST_CASE("stable draws converge to log(1.1) theta at horizon 200") {
  const auto f = base_fixture();
  REQUIRE(companion_spectral_radius({f.B}) < 1.0);
  const Vector d0 = implied_d0(f.theta, {f.B}, {f.d1});
  const Matrix irf = impulse_response({f.B}, {d0, f.d1}, 0.10, 200);
  CHECK((irf.row(199).transpose() - std::log(1.1) * f.theta).cwiseAbs().maxCoeff() <= 1e-6);
}

TEST_CASE("companion spectral radius for a two-lag system") {
  Matrix B1 = 0.5 * Matrix::Identity(1, 1), B2 = 0.3 * Matrix::Identity(1, 1);
  // scalar AR(2): largest root of z^2 - 0.5 z - 0.3
  const double root = (0.5 + std::sqrt(0.25 + 1.2)) / 2.0;
  CHECK(companion_spectral_radius({B1, B2}) == doctest::Approx(root).epsilon(1e-10));
}

TEST_CASE("irf grid collapses to the single draw and repeats identical origins") {
  const auto f = base_fixture();
  const Chain chain = make_chain(10, 20, {f});
  const IrfGrid grid = irf_grid(chain, {0, 5}, 0.10, 4);
  const Vector d0 = implied_d0(f.theta, {f.B}, {f.d1});
  const Matrix irf = impulse_response({f.B}, {d0, f.d1}, 0.10, 4);
  for (int v = 0; v < 2; ++v)
    for (int h = 0; h < 4; ++h)
      for (int q = 0; q < 3; ++q) {
        CHECK(grid.at(v, 0, h, q) == doctest::Approx(irf(h, v)).epsilon(1e-12));
        CHECK(grid.at(v, 1, h, q) == grid.at(v, 0, h, q));
      }
}

TEST_CASE("irf grid rejects an empty chain") {
  Chain chain;
  chain.cfg.n = 2;
  chain.cfg.k = 1;
  chain.cfg.t0 = 10;
  chain.data_length = 20;
  CHECK_THROWS_AS(irf_grid(chain, {0}, 0.10, 4), EmptyChain);
}

TEST_CASE("long-run growth quantiles") {
  SUBCASE("zero B returns the annualized intercept") {
    auto f = base_fixture();
    f.B = Matrix::Zero(2, 2);
    const Chain chain = make_chain(10, 20, {f});
    const auto g = long_run_growth(chain, 0);
    for (int q = 0; q < 3; ++q) {
      CHECK(g.quantiles(0, q) == doctest::Approx(400.0 * 0.004).epsilon(1e-12));
      CHECK(g.quantiles(1, q) == doctest::Approx(400.0 * 0.004).epsilon(1e-12));
    }
    CHECK(g.excluded_draws == 0);
  }
  SUBCASE("scalar hand computation") {
    FixtureSpec f;
    f.c = Vector::Constant(1, 0.005);
    f.B = Matrix::Constant(1, 1, 0.5);
    f.theta = Vector::Constant(1, 0.05);
    f.d1 = Vector::Constant(1, 0.0);
    const Chain chain = make_chain(10, 20, {f});
    const auto g = long_run_growth(chain, 3);
    CHECK(g.quantiles(0, 1) == doctest::Approx(4.0).epsilon(1e-12));
  }
  SUBCASE("all draws singular") {
    auto f = base_fixture();
    f.B = Matrix::Identity(2, 2);
    const Chain chain = make_chain(10, 20, {f, f});
    CHECK_THROWS_AS(long_run_growth(chain, 0), NearSingularLongRun);
  }
  SUBCASE("singular draws are excluded and counted") {
    auto good = base_fixture();
    auto bad = base_fixture();
    bad.B = Matrix::Identity(2, 2);
    const Chain chain = make_chain(10, 20, {good, bad, good});
    const auto g = long_run_growth(chain, 0);
    CHECK(g.excluded_draws == 1);
  }
}

namespace {
SimulatedData fixture_data(std::uint64_t seed, int T) {
  DgpSpec spec;
  spec.n = 2;
  spec.k = 1;
  Vector theta(2);
  theta << 0.05, 0.02;
  spec.theta = theta;
  Matrix B(2, 2);
  B << 0.3, 0.05, -0.1, 0.25;
  spec.B0 = {B};
  spec.D_tail0 = {Vector::Constant(2, 0.01)};
  spec.c0 = Vector::Constant(2, 0.004);
  spec.h0 = Vector::Constant(2, std::log(0.01));
  RngStream rng(seed);
  return simulate_dgp(spec, T, rng);
}
}  // namespace

TEST_CASE("frozen-mode forecast with zero volatility is the deterministic iteration") {
  const auto sim = fixture_data(3, 30);
  auto f = base_fixture();
  Chain chain = make_chain(10, 30, {f});

  RngStream rng(7);
  const int origin = 20, h = 3;
  const auto fs = forecast(chain, sim.data, origin, h, ForecastMode::Frozen, rng);

  // hand iteration of the measurement equation
  const Vector d0 = implied_d0(f.theta, {f.B}, {f.d1});
  Vector lag = sim.data.y.row(origin).transpose();
  Vector cum = Vector::Zero(2);
  for (int step = 1; step <= h; ++step) {
    const int t = origin + step;
    Vector yhat = f.c + f.B * lag + d0 * sim.data.x(t) + f.d1 * sim.data.x(t - 1);
    cum += yhat;
    for (int v = 0; v < 2; ++v) {
      const double expected = sim.data.levels(origin + 1, v) * std::exp(cum(v));
      CHECK(fs.point(step - 1, v) == doctest::Approx(expected).epsilon(1e-12));
    }
    lag = yhat;
  }
  // realized values line up with the level rows
  for (int step = 1; step <= h; ++step)
    for (int v = 0; v < 2; ++v)
      CHECK(fs.realized(step - 1, v) == sim.data.levels(origin + 1 + step, v));
}

TEST_CASE("constant-series forecasts stay at the last level") {
  FixtureSpec f;
  f.c = Vector::Zero(2);
  f.B = Matrix::Zero(2, 2);
  f.theta = Vector::Zero(2);
  f.d1 = Vector::Zero(2);
  const auto sim = fixture_data(5, 30);
  Chain chain = make_chain(10, 30, {f});
  RngStream rng(9);
  const auto fs = forecast(chain, sim.data, 20, 4, ForecastMode::Frozen, rng);
  for (int step = 0; step < 4; ++step)
    for (int v = 0; v < 2; ++v)
      CHECK(fs.point(step, v) == doctest::Approx(sim.data.levels(21, v)).epsilon(1e-12));
}

TEST_CASE("shifting the intercept scales level forecasts by exp(delta * step)") {
  const auto sim = fixture_data(11, 30);
  auto f = base_fixture();
  f.B = Matrix::Zero(2, 2);  // no feedback: the shift passes through one-for-one
  const Chain base = make_chain(10, 30, {f});
  auto g = f;
  const double delta = 0.01;
  g.c = f.c.array() + delta;
  const Chain shifted = make_chain(10, 30, {g});
  RngStream r1(13), r2(13);
  const auto fa = forecast(base, sim.data, 20, 4, ForecastMode::Frozen, r1);
  const auto fb = forecast(shifted, sim.data, 20, 4, ForecastMode::Frozen, r2);
  for (int step = 1; step <= 4; ++step)
    for (int v = 0; v < 2; ++v)
      CHECK(fb.point(step - 1, v) / fa.point(step - 1, v) ==
            doctest::Approx(std::exp(delta * step)).epsilon(1e-10));
}

TEST_CASE("forecast fails fast when the exogenous path runs out") {
  const auto sim = fixture_data(15, 30);
  const Chain chain = make_chain(10, 30, {base_fixture()});
  RngStream rng(1);
  CHECK_THROWS_AS(forecast(chain, sim.data, 28, 5, ForecastMode::Frozen, rng), ExoPathTooShort);
  CHECK_THROWS_AS(forecast(chain, sim.data, 5, 2, ForecastMode::Frozen, rng), ConfigError);
}

TEST_CASE("walk-mode forecast spreads wider than frozen mode") {
  auto f = base_fixture();
  f.log_sigma = std::log(0.01);
  Chain chain = make_chain(10, 30, {f});
  auto& rec = chain.records.front();
  rec.hyper.Q = 1e-4 * Matrix::Identity(rec.hyper.Q.rows(), rec.hyper.Q.cols());
  rec.hyper.Qtilde = 1e-4 * Matrix::Identity(2, 2);
  rec.hyper.G = {1e-4 * Matrix::Identity(1, 1)};
  rec.hyper.W = 1e-2 * Matrix::Identity(2, 2);
  // many identical records so the draw clouds are comparable
  for (int i = 0; i < 400; ++i) chain.records.push_back(chain.records.front());

  const auto sim = fixture_data(17, 30);
  RngStream r1(19), r2(23);
  const auto frozen = forecast(chain, sim.data, 20, 5, ForecastMode::Frozen, r1);
  const auto walk = forecast(chain, sim.data, 20, 5, ForecastMode::Walk, r2);
  auto spread = [](const Matrix& draws) {
    const double mean = draws.col(0).mean();
    return std::sqrt((draws.col(0).array() - mean).square().mean());
  };
  CHECK(spread(walk.level_draws[4]) > spread(frozen.level_draws[4]));
}

TEST_CASE("error table statistics and invariances") {
  ForecastSet a, b;
  a.origin = 0;
  a.horizon = 2;
  a.point.resize(2, 1);
  a.realized.resize(2, 1);
  b = a;
  // |errors| at step 1: {1, 3}; step 2: {0, 0}
  a.point << 11.0, 5.0;
  a.realized << 10.0, 5.0;
  b.point << 7.0, 8.0;
  b.realized << 10.0, 8.0;

  const auto table = error_table({a, b}, {"v"});
  CHECK(table.mean(0, 0) == doctest::Approx(2.0));
  CHECK(table.sd(0, 0) == doctest::Approx(std::sqrt(2.0)));
  CHECK(table.mean(0, 1) == doctest::Approx(0.0));
  CHECK(table.sd(0, 1) == doctest::Approx(0.0));

  // permutation invariance over origins
  const auto swapped = error_table({b, a}, {"v"});
  CHECK(swapped.mean(0, 0) == table.mean(0, 0));
  CHECK(swapped.sd(0, 0) == table.sd(0, 0));

  // perfect forecasts give all zeros
  ForecastSet c = a;
  c.point = c.realized;
  const auto zero = error_table({c}, {"v"});
  CHECK(zero.mean.cwiseAbs().maxCoeff() == 0.0);

  CHECK_THROWS_AS(error_table({}, {"v"}), NoRealizedValues);
  ForecastSet nan_set = a;
  nan_set.realized.setConstant(quiet_nan());
  CHECK_THROWS_AS(error_table({nan_set}, {"v"}), NoRealizedValues);
}

TEST_CASE("one-step forecast bands cover about 80 percent of realizations") {
  // correctly specified constant-parameter DGP; one full-sample chain reused
  // across 200 origins
  const int T = 242;
  const auto sim = fixture_data(21, T);
  ModelConfig cfg;
  cfg.n = 2;
  cfg.k = 1;
  cfg.t0 = 40;
  cfg.mcmc = {500, 250, 2};
  cfg.vol_offset = 1e-8;  // keep the log-square offset negligible at this data scale
  const PriorSpec prior = calibrate(sim.data.y.topRows(40), sim.data.x.head(40), cfg, {});
  RngStream rng(25);
  const Chain chain = run_chain(sim.data, cfg, prior, rng);

  RngStream fc_rng(27);
  int covered = 0, total = 0;
  for (int origin = 40; origin < 240; ++origin) {
    const auto fs = forecast(chain, sim.data, origin, 1, ForecastMode::Frozen, fc_rng);
    for (int v = 0; v < 2; ++v) {
      std::vector<double> draws(fs.level_draws[0].rows());
      for (int d = 0; d < fs.level_draws[0].rows(); ++d) draws[d] = fs.level_draws[0](d, v);
      std::vector<double> lo_w = draws, hi_w = draws;
      const double lo = sample_quantile(lo_w, 0.1);
      const double hi = sample_quantile(hi_w, 0.9);
      const double realized = fs.realized(0, v);
      ++total;
      if (realized >= lo && realized <= hi) ++covered;
    }
  }
  const double coverage = double(covered) / total;
  CHECK(coverage >= 0.7);
  CHECK(coverage <= 0.9);
}
