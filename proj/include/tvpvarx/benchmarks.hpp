#pragma once

// Comparison methods: constant-parameter VARX via OLS, and the unconstrained
// TVP-VAR-X (the Gibbs sampler with the constraint disabled), evaluated on
// identical rolling origins and exogenous paths.

#include "tvpvarx/analysis.hpp"
#include "tvpvarx/ols.hpp"
#include "tvpvarx/priors.hpp"

namespace tvpvarx {

struct ConstantVarx {
  int n = 0, k = 0;
  Vector coef;        // full coefficient layout (D_0 included)
  Matrix resid_cov;
  CoefLayout layout() const { return CoefLayout(n, k, true); }
};

// Equation-by-equation OLS over the whole sample.
ConstantVarx fit_constant_varx(const Matrix& y, const Vector& x, int k);

// Deterministic forward iteration with the same level-accumulation
// convention as the chain forecasts (level draws left empty).
ForecastSet forecast_constant_varx(const ConstantVarx& model, const Dataset& data,
                                   int origin_idx, int horizon);

struct BenchmarkOptions {
  int eval_start = -1;  // first forecast origin (log-difference index); -1: t0
  int eval_end = -1;    // last origin inclusive; -1: last usable for `horizons`
  int horizons = 5;
  bool reestimate = false;  // re-run the chains on data up to each origin
  PriorOverrides priors;
};

struct BenchmarkResult {
  std::vector<std::string> variables;
  int horizons = 0;
  std::vector<int> origins;
  ErrorTable constrained;   // the proposed method
  ErrorTable constant_var;  // VAR with constant parameters
  ErrorTable unconstrained; // TVP-VAR-X without the long-run constraint
};

// Rolling-origin evaluation of one forecaster over a fixed origin list; the
// suite feeds every method through this so the protocol is identical by
// construction.
using ForecasterFn = std::function<ForecastSet(int origin)>;
ErrorTable evaluate_forecasts(const std::vector<int>& origins, const ForecasterFn& forecaster,
                              const std::vector<std::string>& variables);

// Rolling-origin evaluation of the three methods. Chains are seeded from
// cfg.seed on distinct sub-streams; with reestimate=false one chain per
// method is estimated on the full sample and reused across origins.
BenchmarkResult run_benchmark_suite(const Dataset& data, const ModelConfig& cfg,
                                    const BenchmarkOptions& options);

}  // namespace tvpvarx
