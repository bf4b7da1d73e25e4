#include "tvpvarx/chainio.hpp"

#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>

namespace tvpvarx {

std::string format_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

void write_text(const std::string& content, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw DataError("cannot open '" + path + "' for writing");
  out << content;
}

namespace {

void put_matrix(std::ostream& os, const Matrix& m) {
  for (Eigen::Index r = 0; r < m.rows(); ++r)
    for (Eigen::Index c = 0; c < m.cols(); ++c) os << ' ' << format_double(m(r, c));
}

void get_matrix(std::istream& is, Matrix& m, Eigen::Index rows, Eigen::Index cols) {
  m.resize(rows, cols);
  for (Eigen::Index r = 0; r < rows; ++r)
    for (Eigen::Index c = 0; c < cols; ++c)
      if (!(is >> m(r, c))) throw ParseError("chain file: truncated record");
}

}  // namespace

void write_chain(const Chain& chain, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw DataError("cannot open '" + path + "' for writing");
  const CoefLayout layout = chain.layout();
  const ModelConfig& cfg = chain.cfg;
  const int T_est = chain.path_length();
  out << "tvpvarx-chain v1\n";
  out << "n=" << cfg.n << "\n";
  out << "k=" << cfg.k << "\n";
  out << "t0=" << cfg.t0 << "\n";
  out << "T=" << chain.data_length << "\n";
  out << "constrained=" << (cfg.constrained ? 1 : 0) << "\n";
  out << "seed=" << cfg.seed << "\n";
  out << "burn_in=" << cfg.mcmc.burn_in << "\n";
  out << "retained=" << cfg.mcmc.retained << "\n";
  out << "thin=" << cfg.mcmc.thin << "\n";
  out << "cond_threshold=" << format_double(cfg.cond_threshold) << "\n";
  out << "vol_offset=" << format_double(cfg.vol_offset) << "\n";
  out << "config_hash=" << chain.config_hash << "\n";
  out << "records=" << chain.records.size() << "\n";
  out << "state_order=c[n];B[lag-major,row-major];D[lag-major,d0_included="
      << (layout.includes_d0() ? 1 : 0) << "]\n";
  out << "record_fields=iter theta[n] coef[" << T_est << "x" << layout.dim() << "] alpha["
      << T_est << "x" << cfg.n * (cfg.n - 1) / 2 << "] h[" << T_est << "x" << cfg.n << "] Q["
      << layout.cb_dim() << "^2] Qtilde[" << layout.d_dim() << "^2] G[1^2..] W[" << cfg.n
      << "^2] s[" << T_est << "x" << cfg.n << "]\n";
  out << "end_header\n";
  for (const auto& rec : chain.records) {
    out << rec.iteration;
    for (Eigen::Index i = 0; i < rec.theta.size(); ++i)
      out << ' ' << format_double(rec.theta(i));
    put_matrix(out, rec.coef_path);
    put_matrix(out, rec.alpha_path);
    put_matrix(out, rec.h_path);
    put_matrix(out, rec.hyper.Q);
    put_matrix(out, rec.hyper.Qtilde);
    for (const auto& g : rec.hyper.G) put_matrix(out, g);
    put_matrix(out, rec.hyper.W);
    for (Eigen::Index r = 0; r < rec.indicators.rows(); ++r)
      for (Eigen::Index c = 0; c < rec.indicators.cols(); ++c)
        out << ' ' << rec.indicators(r, c);
    out << '\n';
  }
}

Chain read_chain(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open chain file '" + path + "'");
  std::string line;
  if (!std::getline(in, line) || line.rfind("tvpvarx-chain", 0) != 0)
    throw ParseError("'" + path + "' is not a tvpvarx chain file");
  std::map<std::string, std::string> kv;
  while (std::getline(in, line)) {
    if (line == "end_header") break;
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw ParseError("chain header: bad line '" + line + "'");
    kv[line.substr(0, eq)] = line.substr(eq + 1);
  }
  auto need = [&](const std::string& key) {
    const auto it = kv.find(key);
    if (it == kv.end()) throw ParseError("chain header: missing key '" + key + "'");
    return it->second;
  };
  Chain chain;
  chain.cfg.n = std::stoi(need("n"));
  chain.cfg.k = std::stoi(need("k"));
  chain.cfg.t0 = std::stoi(need("t0"));
  chain.data_length = std::stoi(need("T"));
  chain.cfg.constrained = std::stoi(need("constrained")) != 0;
  chain.cfg.seed = std::stoull(need("seed"));
  chain.cfg.mcmc.burn_in = std::stoi(need("burn_in"));
  chain.cfg.mcmc.retained = std::stoi(need("retained"));
  chain.cfg.mcmc.thin = std::stoi(need("thin"));
  chain.cfg.cond_threshold = std::stod(need("cond_threshold"));
  chain.cfg.vol_offset = std::stod(need("vol_offset"));
  chain.config_hash = need("config_hash");
  const int records = std::stoi(need("records"));

  const CoefLayout layout = chain.layout();
  const int T_est = chain.path_length();
  const int n = chain.cfg.n;
  const int a_dim = n * (n - 1) / 2;
  for (int r = 0; r < records; ++r) {
    ChainRecord rec;
    if (!(in >> rec.iteration)) throw ParseError("chain file: missing record " + std::to_string(r));
    rec.theta.resize(n);
    for (int i = 0; i < n; ++i)
      if (!(in >> rec.theta(i))) throw ParseError("chain file: truncated record");
    get_matrix(in, rec.coef_path, T_est, layout.dim());
    get_matrix(in, rec.alpha_path, T_est, a_dim);
    get_matrix(in, rec.h_path, T_est, n);
    get_matrix(in, rec.hyper.Q, layout.cb_dim(), layout.cb_dim());
    get_matrix(in, rec.hyper.Qtilde, layout.d_dim(), layout.d_dim());
    for (int i = 1; i < n; ++i) {
      Matrix g;
      get_matrix(in, g, i, i);
      rec.hyper.G.push_back(std::move(g));
    }
    get_matrix(in, rec.hyper.W, n, n);
    rec.indicators.resize(T_est, n);
    for (int rr = 0; rr < T_est; ++rr)
      for (int c = 0; c < n; ++c)
        if (!(in >> rec.indicators(rr, c))) throw ParseError("chain file: truncated record");
    chain.records.push_back(std::move(rec));
  }
  return chain;
}

void write_error_tables(const BenchmarkResult& result, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw DataError("cannot open '" + path + "' for writing");
  out << "variable,step,constrained_mean,constrained_std,var_mean,var_std,"
         "tvpvarx_mean,tvpvarx_std\n";
  for (std::size_t v = 0; v < result.variables.size(); ++v)
    for (int h = 0; h < result.horizons; ++h) {
      out << result.variables[v] << ',' << h + 1;
      out << ',' << format_double(result.constrained.mean(v, h)) << ','
          << format_double(result.constrained.sd(v, h));
      out << ',' << format_double(result.constant_var.mean(v, h)) << ','
          << format_double(result.constant_var.sd(v, h));
      out << ',' << format_double(result.unconstrained.mean(v, h)) << ','
          << format_double(result.unconstrained.sd(v, h));
      out << '\n';
    }
}

void write_irf_grid(const IrfGrid& grid, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw DataError("cannot open '" + path + "' for writing");
  out << "variable,origin,horizon";
  for (double q : grid.quantiles) out << ",q" << q;
  out << '\n';
  for (std::size_t v = 0; v < grid.variables.size(); ++v)
    for (std::size_t o = 0; o < grid.origins.size(); ++o)
      for (int h = 0; h < grid.horizons; ++h) {
        out << grid.variables[v] << ',' << grid.origins[o] << ',' << h + 1;
        for (std::size_t q = 0; q < grid.quantiles.size(); ++q)
          out << ',' << format_double(grid.at(static_cast<int>(v), static_cast<int>(o), h,
                                              static_cast<int>(q)));
        out << '\n';
      }
}

void write_growth(const std::vector<GrowthRow>& rows, const std::vector<std::string>& variables,
                  const std::string& path) {
  std::ofstream out(path);
  if (!out) throw DataError("cannot open '" + path + "' for writing");
  out << "origin,variable";
  if (!rows.empty())
    for (double p : rows.front().summary.probs) out << ",q" << p;
  out << ",excluded\n";
  for (const auto& row : rows)
    for (std::size_t v = 0; v < variables.size(); ++v) {
      out << row.origin << ',' << variables[v];
      for (int q = 0; q < row.summary.quantiles.cols(); ++q)
        out << ',' << format_double(row.summary.quantiles(static_cast<int>(v), q));
      out << ',' << row.summary.excluded_draws << '\n';
    }
}

void write_forecast(const ForecastSet& fs, const std::vector<std::string>& variables,
                    const std::string& path) {
  std::ofstream out(path);
  if (!out) throw DataError("cannot open '" + path + "' for writing");
  out << "variable,step,point,realized,band_lo_10,band_hi_90\n";
  for (std::size_t v = 0; v < variables.size(); ++v)
    for (int h = 0; h < fs.horizon; ++h) {
      double lo = quiet_nan(), hi = quiet_nan();
      if (!fs.level_draws.empty()) {
        std::vector<double> w(fs.level_draws[h].rows());
        for (int d = 0; d < fs.level_draws[h].rows(); ++d)
          w[d] = fs.level_draws[h](d, static_cast<int>(v));
        std::vector<double> w2 = w;
        lo = sample_quantile(w, 0.1);
        hi = sample_quantile(w2, 0.9);
      }
      out << variables[v] << ',' << h + 1 << ',' << format_double(fs.point(h, v)) << ','
          << format_double(fs.realized(h, v)) << ',' << format_double(lo) << ','
          << format_double(hi) << '\n';
    }
}

}  // namespace tvpvarx
