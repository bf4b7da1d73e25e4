#include "tvpvarx/runconfig.hpp"

#include <algorithm>
#include <sstream>

namespace tvpvarx {

namespace {
const char* kVersion = "0.1.0";
}

std::string fnv1a_hex(const std::string& text) {
  std::uint64_t h = 1469598103934665603ULL;
  for (unsigned char c : text) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

std::vector<double> parse_double_list(const std::string& text) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item.empty()) continue;
    try {
      out.push_back(std::stod(item));
    } catch (const std::exception&) {
      throw ConfigError("cannot parse '" + item + "' as a number");
    }
  }
  return out;
}

std::string RunConfig::canonical() const {
  // output locations are excluded: they do not affect what is estimated
  std::vector<std::pair<std::string, std::string>> kv = {
      {"data", data},
      {"endo", endo},
      {"exo", exo},
      {"lags", std::to_string(lags)},
      {"t0", std::to_string(t0)},
      {"mode", mode},
      {"burn_in", std::to_string(burn_in)},
      {"retained", std::to_string(retained)},
      {"thin", std::to_string(thin)},
      {"chains", std::to_string(chains)},
      {"workers", std::to_string(workers)},
      {"seed", std::to_string(seed)},
      {"cond_threshold", std::to_string(cond_threshold)},
      {"vol_offset", std::to_string(vol_offset)},
      {"u0_diag", u0_diag},
      {"kappa_q", std::to_string(kappa_q)},
      {"kappa_qtilde", std::to_string(kappa_qtilde)},
      {"kappa_g", std::to_string(kappa_g)},
      {"kappa_w", std::to_string(kappa_w)},
      {"origin", origin},
      {"horizon", std::to_string(horizon)},
      {"forecast_mode", forecast_mode},
      {"irf_origins", irf_origins},
      {"shock", std::to_string(shock)},
      {"irf_horizons", std::to_string(irf_horizons)},
      {"irf_quantiles", irf_quantiles},
      {"growth_quantiles", growth_quantiles},
      {"eval_start", eval_start},
      {"eval_end", eval_end},
      {"reestimate", reestimate ? "1" : "0"},
      {"sim_length", std::to_string(sim_length)},
      {"sim_theta", sim_theta},
      {"sim_sd_intercept", std::to_string(sim_sd_intercept)},
      {"sim_sd_coef", std::to_string(sim_sd_coef)},
      {"sim_sd_dcoef", std::to_string(sim_sd_dcoef)},
      {"sim_sd_h", std::to_string(sim_sd_h)},
      {"sim_x_sd", std::to_string(sim_x_sd)},
      {"sim_x_drift", std::to_string(sim_x_drift)},
  };
  std::sort(kv.begin(), kv.end());
  std::ostringstream os;
  for (const auto& [key, value] : kv) os << key << '=' << value << '\n';
  return os.str();
}

std::string RunConfig::hash() const { return fnv1a_hex(canonical()); }

ModelConfig RunConfig::model_config(int n) const {
  if (mode != "constrained" && mode != "unconstrained" && mode != "constant-var")
    throw ConfigError("mode must be constrained, unconstrained or constant-var");
  ModelConfig cfg;
  cfg.n = n;
  cfg.k = lags;
  cfg.t0 = t0;
  cfg.constrained = mode == "constrained";
  cfg.mcmc.burn_in = burn_in;
  cfg.mcmc.retained = retained;
  cfg.mcmc.thin = thin;
  cfg.seed = seed;
  cfg.cond_threshold = cond_threshold;
  cfg.vol_offset = vol_offset;
  return cfg;
}

PriorOverrides RunConfig::prior_overrides(int n) const {
  PriorOverrides overrides;
  overrides.kappa_q = kappa_q;
  overrides.kappa_qtilde = kappa_qtilde;
  overrides.kappa_g = kappa_g;
  overrides.kappa_w = kappa_w;
  const auto diag = parse_double_list(u0_diag);
  if (diag.size() == 1) {
    overrides.u0_diag = Vector::Constant(n, diag[0]);
  } else if (!diag.empty()) {
    if (static_cast<int>(diag.size()) != n)
      throw ConfigError("u0_diag needs 1 or n entries");
    overrides.u0_diag = Eigen::Map<const Vector>(diag.data(), n);
  }
  return overrides;
}

int resolve_time_index(const Dataset& data, const std::string& token) {
  if (token.find('-') != std::string::npos || token.find('Q') != std::string::npos ||
      token.find('q') != std::string::npos) {
    const QuarterDate date = QuarterDate::parse(token);
    for (std::size_t r = 0; r < data.dates.size(); ++r)
      if (data.dates[r] == date) {
        if (r == 0) throw ConfigError("'" + token + "' is the first level row; no log-difference");
        return static_cast<int>(r) - 1;
      }
    throw ConfigError("date '" + token + "' not found in the dataset");
  }
  try {
    const int idx = std::stoi(token);
    if (idx < 0 || idx >= data.size())
      throw ConfigError("time index " + token + " outside 0.." + std::to_string(data.size() - 1));
    return idx;
  } catch (const ConfigError&) {
    throw;
  } catch (const std::exception&) {
    throw ConfigError("cannot parse '" + token + "' as a date or index");
  }
}

std::string manifest_text(const RunConfig& cfg, const std::string& command) {
  std::ostringstream os;
  os << "command=" << command << '\n';
  os << "tvpvarx_version=" << kVersion << '\n';
  os << "config_hash=" << cfg.hash() << '\n';
  os << "seed=" << cfg.seed << '\n';
  os << cfg.canonical();
  return os.str();
}

}  // namespace tvpvarx
