// Python bindings for the main operations: data ingestion and simulation,
// prior calibration, the Gibbs sampler, chain persistence, impulse responses,
// long-run growth, forecasting, the benchmark suite, and the low-level
// filtering/sampling primitives.

#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "tvpvarx/benchmarks.hpp"
#include "tvpvarx/chainio.hpp"
#include "tvpvarx/simulate.hpp"
#include "tvpvarx/statespace.hpp"

namespace py = pybind11;
using namespace tvpvarx;

namespace {

Dataset dataset_from_levels(const std::vector<std::string>& dates, const Matrix& levels,
                            const std::vector<std::string>& names) {
  std::vector<QuarterDate> parsed;
  parsed.reserve(dates.size());
  for (const auto& d : dates) parsed.push_back(QuarterDate::parse(d));
  return Dataset::from_levels(std::move(parsed), levels, names);
}

ForecastMode parse_mode(const std::string& mode) {
  if (mode == "frozen") return ForecastMode::Frozen;
  if (mode == "walk") return ForecastMode::Walk;
  throw ConfigError("forecast mode must be 'frozen' or 'walk'");
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "TVP-VAR-X estimation with a time-invariant long-run multiplier constraint";

  py::register_exception<Error>(m, "TvpvarxError", PyExc_RuntimeError);

  // ----------------------------------------------------------- primitives
  py::class_<RngStream>(m, "RngStream")
      .def(py::init<std::uint64_t, std::uint64_t>(), py::arg("seed"), py::arg("stream") = 0)
      .def("uniform", &RngStream::uniform)
      .def("normal", &RngStream::normal)
      .def("gamma", &RngStream::gamma)
      .def("chi_squared", &RngStream::chi_squared);

  m.def("cholesky_lower", &cholesky_lower, py::arg("matrix"));
  m.def("cholesky_psd", &cholesky_psd, py::arg("matrix"));
  m.def("condition_number", &condition_number, py::arg("matrix"));
  m.def("sample_mvn", &sample_mvn, py::arg("mean"), py::arg("cov"), py::arg("rng"));
  m.def("sample_inverse_wishart", &sample_inverse_wishart, py::arg("scale"), py::arg("dof"),
        py::arg("rng"));
  m.def("sample_categorical", &sample_categorical, py::arg("weights"), py::arg("rng"));

  py::class_<LinearGaussianSystem>(m, "LinearGaussianSystem")
      .def(py::init<>())
      .def_readwrite("y", &LinearGaussianSystem::y)
      .def_readwrite("Z", &LinearGaussianSystem::Z)
      .def_readwrite("H", &LinearGaussianSystem::H)
      .def_readwrite("state_innovation", &LinearGaussianSystem::state_innovation)
      .def_readwrite("initial_mean", &LinearGaussianSystem::initial_mean)
      .def_readwrite("initial_cov", &LinearGaussianSystem::initial_cov);

  py::class_<FilterOutput>(m, "FilterOutput")
      .def_readonly("filtered_mean", &FilterOutput::filtered_mean)
      .def_readonly("filtered_cov", &FilterOutput::filtered_cov)
      .def_readonly("predicted_mean", &FilterOutput::predicted_mean)
      .def_readonly("predicted_cov", &FilterOutput::predicted_cov)
      .def_readonly("loglik", &FilterOutput::loglik)
      .def_readonly("total_loglik", &FilterOutput::total_loglik);

  m.def("kalman_filter", py::overload_cast<const LinearGaussianSystem&>(&kalman_filter),
        py::arg("system"));
  m.def(
      "simulation_smoother",
      [](const FilterOutput& filt, const Matrix& q, RngStream& rng) {
        return simulation_smoother(filt, q, rng);
      },
      py::arg("filter"), py::arg("state_innovation"), py::arg("rng"));

  // ------------------------------------------------------------- dataset
  py::class_<Dataset>(m, "Dataset")
      .def_static("from_levels", &dataset_from_levels, py::arg("dates"), py::arg("levels"),
                  py::arg("names"))
      .def_property_readonly("levels", [](const Dataset& d) { return d.levels; })
      .def_property_readonly("y", [](const Dataset& d) { return d.y; })
      .def_property_readonly("x", [](const Dataset& d) { return d.x; })
      .def_property_readonly("names", [](const Dataset& d) { return d.names; })
      .def_property_readonly("dates",
                             [](const Dataset& d) {
                               std::vector<std::string> out;
                               for (const auto& q : d.dates) out.push_back(q.str());
                               return out;
                             })
      .def_property_readonly("n", &Dataset::n)
      .def("__len__", &Dataset::size);

  py::class_<ColumnMapping>(m, "ColumnMapping")
      .def(py::init<>())
      .def_readwrite("endogenous", &ColumnMapping::endogenous)
      .def_readwrite("exogenous", &ColumnMapping::exogenous);

  m.def("ingest_csv", &ingest_csv, py::arg("path"), py::arg("mapping") = ColumnMapping{});
  m.def("write_csv", &write_csv, py::arg("dataset"), py::arg("path"));

  // ------------------------------------------------------------ modeling
  py::class_<McmcConfig>(m, "McmcConfig")
      .def(py::init<>())
      .def_readwrite("burn_in", &McmcConfig::burn_in)
      .def_readwrite("retained", &McmcConfig::retained)
      .def_readwrite("thin", &McmcConfig::thin)
      .def("total_iterations", &McmcConfig::total_iterations);

  py::class_<ModelConfig>(m, "ModelConfig")
      .def(py::init<>())
      .def_readwrite("n", &ModelConfig::n)
      .def_readwrite("k", &ModelConfig::k)
      .def_readwrite("t0", &ModelConfig::t0)
      .def_readwrite("constrained", &ModelConfig::constrained)
      .def_readwrite("mcmc", &ModelConfig::mcmc)
      .def_readwrite("seed", &ModelConfig::seed)
      .def_readwrite("cond_threshold", &ModelConfig::cond_threshold)
      .def_readwrite("vol_offset", &ModelConfig::vol_offset)
      .def("validate", &ModelConfig::validate);

  py::class_<CoefLayout>(m, "CoefLayout")
      .def(py::init<int, int, bool>(), py::arg("n"), py::arg("k"), py::arg("includes_d0"))
      .def("dim", &CoefLayout::dim)
      .def("c_index", &CoefLayout::c_index)
      .def("b_index", &CoefLayout::b_index)
      .def("d_index", &CoefLayout::d_index)
      .def("intercept",
           [](const CoefLayout& L, const Vector& s) { return L.intercept(s); })
      .def("b_block", [](const CoefLayout& L, const Vector& s, int lag) { return L.b_block(s, lag); })
      .def("d_block", [](const CoefLayout& L, const Vector& s, int lag) { return L.d_block(s, lag); });

  m.def("implied_d0", &implied_d0, py::arg("theta"), py::arg("B"), py::arg("D_tail"));
  m.def("long_run_multiplier", &long_run_multiplier, py::arg("B"), py::arg("D_all"),
        py::arg("cond_threshold") = 1e12);
  m.def(
      "transform_observation",
      [](const Vector& y_t, const Matrix& y_hist, double x_t, const Vector& x_hist,
         const Vector& theta) { return transform_observation(y_t, y_hist, x_t, x_hist, theta); },
      py::arg("y_t"), py::arg("y_hist"), py::arg("x_t"), py::arg("x_hist"), py::arg("theta"));

  py::class_<PriorOverrides>(m, "PriorOverrides")
      .def(py::init<>())
      .def_readwrite("u0_diag", &PriorOverrides::u0_diag)
      .def_readwrite("kappa_q", &PriorOverrides::kappa_q)
      .def_readwrite("kappa_qtilde", &PriorOverrides::kappa_qtilde)
      .def_readwrite("kappa_g", &PriorOverrides::kappa_g)
      .def_readwrite("kappa_w", &PriorOverrides::kappa_w);

  py::class_<PriorSpec>(m, "PriorSpec")
      .def_readonly("coef_mean", &PriorSpec::coef_mean)
      .def_readonly("coef_cov", &PriorSpec::coef_cov)
      .def_readonly("alpha_mean", &PriorSpec::alpha_mean)
      .def_readonly("logvol_mean", &PriorSpec::logvol_mean)
      .def_readonly("theta_mean", &PriorSpec::theta_mean)
      .def_readonly("theta_cov", &PriorSpec::theta_cov)
      .def("to_kv", &PriorSpec::to_kv);

  m.def(
      "calibrate",
      [](const Matrix& y_train, const Vector& x_train, const ModelConfig& cfg,
         const PriorOverrides& overrides) { return calibrate(y_train, x_train, cfg, overrides); },
      py::arg("y_train"), py::arg("x_train"), py::arg("config"),
      py::arg("overrides") = PriorOverrides{});

  // --------------------------------------------------------------- gibbs
  py::class_<Hyperparams>(m, "Hyperparams")
      .def_readonly("Q", &Hyperparams::Q)
      .def_readonly("Qtilde", &Hyperparams::Qtilde)
      .def_readonly("G", &Hyperparams::G)
      .def_readonly("W", &Hyperparams::W);

  py::class_<ChainRecord>(m, "ChainRecord")
      .def_readonly("iteration", &ChainRecord::iteration)
      .def_readonly("theta", &ChainRecord::theta)
      .def_readonly("coef_path", &ChainRecord::coef_path)
      .def_readonly("alpha_path", &ChainRecord::alpha_path)
      .def_readonly("h_path", &ChainRecord::h_path)
      .def_readonly("hyper", &ChainRecord::hyper)
      .def_readonly("indicators", &ChainRecord::indicators);

  py::class_<Chain>(m, "Chain")
      .def_readonly("cfg", &Chain::cfg)
      .def_readonly("data_length", &Chain::data_length)
      .def_readonly("config_hash", &Chain::config_hash)
      .def_readonly("records", &Chain::records)
      .def("layout", &Chain::layout)
      .def("path_length", &Chain::path_length)
      .def("theta_draws",
           [](const Chain& chain) {
             Matrix out(static_cast<int>(chain.records.size()), chain.cfg.n);
             for (std::size_t i = 0; i < chain.records.size(); ++i)
               out.row(static_cast<int>(i)) = chain.records[i].theta.transpose();
             return out;
           })
      .def("__len__", [](const Chain& chain) { return chain.records.size(); });

  m.def(
      "run_chain",
      [](const Dataset& data, const ModelConfig& cfg, const PriorSpec& prior,
         std::uint64_t stream) {
        RngStream rng(cfg.seed, stream);
        return run_chain(data, cfg, prior, rng);
      },
      py::arg("dataset"), py::arg("config"), py::arg("prior"), py::arg("stream") = 0,
      py::call_guard<py::gil_scoped_release>());

  m.def("write_chain", &write_chain, py::arg("chain"), py::arg("path"));
  m.def("read_chain", &read_chain, py::arg("path"));
  m.def("mixture_table", []() {
    const MixtureTable t = MixtureTable::ksc();
    return py::make_tuple(t.prob, t.mean, t.var);
  });

  // ------------------------------------------------------------ analysis
  m.def(
      "impulse_response",
      [](const std::vector<Matrix>& B, const std::vector<Vector>& D_all, double shock,
         int horizons) { return impulse_response(B, D_all, shock, horizons); },
      py::arg("B"), py::arg("D_all"), py::arg("shock"), py::arg("horizons"));
  m.def("companion_spectral_radius", &companion_spectral_radius, py::arg("B"));

  py::class_<IrfGrid>(m, "IrfGrid")
      .def_readonly("variables", &IrfGrid::variables)
      .def_readonly("origins", &IrfGrid::origins)
      .def_readonly("horizons", &IrfGrid::horizons)
      .def_readonly("quantiles", &IrfGrid::quantiles)
      .def("at", &IrfGrid::at, py::arg("variable"), py::arg("origin"), py::arg("horizon"),
           py::arg("quantile"));

  m.def("irf_grid", &irf_grid, py::arg("chain"), py::arg("origins"), py::arg("shock"),
        py::arg("horizons"), py::arg("quantiles") = std::vector<double>{0.16, 0.5, 0.84},
        py::arg("variable_names") = std::vector<std::string>{});
  m.def("write_irf_grid", &write_irf_grid, py::arg("grid"), py::arg("path"));

  py::class_<GrowthSummary>(m, "GrowthSummary")
      .def_readonly("quantiles", &GrowthSummary::quantiles)
      .def_readonly("probs", &GrowthSummary::probs)
      .def_readonly("excluded_draws", &GrowthSummary::excluded_draws);

  m.def("long_run_growth", &long_run_growth, py::arg("chain"), py::arg("origin"),
        py::arg("quantiles") = std::vector<double>{0.2, 0.5, 0.8});

  py::class_<ForecastSet>(m, "ForecastSet")
      .def_readonly("origin", &ForecastSet::origin)
      .def_readonly("horizon", &ForecastSet::horizon)
      .def_readonly("level_draws", &ForecastSet::level_draws)
      .def_readonly("point", &ForecastSet::point)
      .def_readonly("realized", &ForecastSet::realized);

  m.def(
      "forecast",
      [](const Chain& chain, const Dataset& data, int origin, int horizon,
         const std::string& mode, std::uint64_t seed) {
        RngStream rng(seed, 7);
        return forecast(chain, data, origin, horizon, parse_mode(mode), rng);
      },
      py::arg("chain"), py::arg("dataset"), py::arg("origin"), py::arg("horizon"),
      py::arg("mode") = "frozen", py::arg("seed") = 1);

  py::class_<ErrorTable>(m, "ErrorTable")
      .def_readonly("variables", &ErrorTable::variables)
      .def_readonly("horizons", &ErrorTable::horizons)
      .def_readonly("mean", &ErrorTable::mean)
      .def_readonly("sd", &ErrorTable::sd);

  m.def("error_table", &error_table, py::arg("forecasts"), py::arg("variables"));

  // ----------------------------------------------------------- benchmarks
  py::class_<ConstantVarx>(m, "ConstantVarx")
      .def_readonly("n", &ConstantVarx::n)
      .def_readonly("k", &ConstantVarx::k)
      .def_readonly("coef", &ConstantVarx::coef)
      .def_readonly("resid_cov", &ConstantVarx::resid_cov)
      .def("layout", &ConstantVarx::layout);

  m.def("fit_constant_varx", &fit_constant_varx, py::arg("y"), py::arg("x"), py::arg("k"));
  m.def("forecast_constant_varx", &forecast_constant_varx, py::arg("model"), py::arg("dataset"),
        py::arg("origin"), py::arg("horizon"));

  py::class_<BenchmarkOptions>(m, "BenchmarkOptions")
      .def(py::init<>())
      .def_readwrite("eval_start", &BenchmarkOptions::eval_start)
      .def_readwrite("eval_end", &BenchmarkOptions::eval_end)
      .def_readwrite("horizons", &BenchmarkOptions::horizons)
      .def_readwrite("reestimate", &BenchmarkOptions::reestimate)
      .def_readwrite("priors", &BenchmarkOptions::priors);

  py::class_<BenchmarkResult>(m, "BenchmarkResult")
      .def_readonly("variables", &BenchmarkResult::variables)
      .def_readonly("horizons", &BenchmarkResult::horizons)
      .def_readonly("origins", &BenchmarkResult::origins)
      .def_readonly("constrained", &BenchmarkResult::constrained)
      .def_readonly("constant_var", &BenchmarkResult::constant_var)
      .def_readonly("unconstrained", &BenchmarkResult::unconstrained);

  m.def("run_benchmark_suite", &run_benchmark_suite, py::arg("dataset"), py::arg("config"),
        py::arg("options") = BenchmarkOptions{}, py::call_guard<py::gil_scoped_release>());
  m.def("write_error_tables", &write_error_tables, py::arg("result"), py::arg("path"));

  // ------------------------------------------------------------- simulate
  py::class_<DgpSpec>(m, "DgpSpec")
      .def(py::init<>())
      .def_readwrite("n", &DgpSpec::n)
      .def_readwrite("k", &DgpSpec::k)
      .def_readwrite("c0", &DgpSpec::c0)
      .def_readwrite("B0", &DgpSpec::B0)
      .def_readwrite("D_tail0", &DgpSpec::D_tail0)
      .def_readwrite("theta", &DgpSpec::theta)
      .def_readwrite("D00", &DgpSpec::D00)
      .def_readwrite("sd_intercept", &DgpSpec::sd_intercept)
      .def_readwrite("sd_coef", &DgpSpec::sd_coef)
      .def_readwrite("sd_dcoef", &DgpSpec::sd_dcoef)
      .def_readwrite("alpha0", &DgpSpec::alpha0)
      .def_readwrite("sd_alpha", &DgpSpec::sd_alpha)
      .def_readwrite("h0", &DgpSpec::h0)
      .def_readwrite("sd_h", &DgpSpec::sd_h)
      .def_readwrite("x_drift", &DgpSpec::x_drift)
      .def_readwrite("x_sd", &DgpSpec::x_sd)
      .def_readwrite("x_path", &DgpSpec::x_path)
      .def_readwrite("base_level", &DgpSpec::base_level);

  py::class_<TruePaths>(m, "TruePaths")
      .def_readonly("coef", &TruePaths::coef)
      .def_readonly("alpha", &TruePaths::alpha)
      .def_readonly("h", &TruePaths::h)
      .def_readonly("x", &TruePaths::x)
      .def_readonly("y", &TruePaths::y);

  py::class_<SimulatedData>(m, "SimulatedData")
      .def_readonly("data", &SimulatedData::data)
      .def_readonly("truth", &SimulatedData::truth);

  m.def(
      "simulate_dgp",
      [](const DgpSpec& spec, int T, std::uint64_t seed, std::uint64_t stream) {
        RngStream rng(seed, stream);
        return simulate_dgp(spec, T, rng);
      },
      py::arg("spec"), py::arg("T"), py::arg("seed"), py::arg("stream") = 0);
}
