#pragma once

// Impulse responses, long-run growth bands and forecasting from retained
// chains.

#include <limits>
#include <string>
#include <vector>

#include "tvpvarx/dataset.hpp"
#include "tvpvarx/gibbs.hpp"

namespace tvpvarx {

// Per-horizon cumulative log-level responses (K x n) to a one-time relative
// change `shock` in the exogenous level, with coefficients frozen. Horizon
// h (row h-1) is sum_{j<=h} delta_y; the shock magnitude is log(1+shock).
Matrix impulse_response(const std::vector<Matrix>& B, const std::vector<Vector>& D_all,
                        double shock, int horizons);
// origin_idx indexes the record's path (0 = first estimated time point).
Matrix impulse_response(const ChainRecord& record, const CoefLayout& layout, int origin_idx,
                        double shock, int horizons);

double companion_spectral_radius(const std::vector<Matrix>& B);

struct IrfGrid {
  std::vector<std::string> variables;
  std::vector<int> origins;  // path indices into the chain
  int horizons = 0;
  std::vector<double> quantiles;
  std::vector<double> values;  // [variable][origin][horizon][quantile], row-major

  double at(int v, int o, int h, int q) const {
    return values[((static_cast<std::size_t>(v) * origins.size() + o) * horizons + h) *
                      quantiles.size() +
                  q];
  }
};

IrfGrid irf_grid(const Chain& chain, const std::vector<int>& origins, double shock,
                 int horizons, const std::vector<double>& quantiles = {0.16, 0.5, 0.84},
                 const std::vector<std::string>& variable_names = {});

// Quantiles of the annualized long-run growth rate 400 * (I - sum B_t)^-1 c_t
// at one path index; draws failing the singularity guard are excluded and
// counted. Throws NearSingularLongRun when every draw is excluded.
struct GrowthSummary {
  Matrix quantiles;  // n x #quantiles, annualized percent
  std::vector<double> probs;
  int excluded_draws = 0;
};
GrowthSummary long_run_growth(const Chain& chain, int origin_idx,
                              const std::vector<double>& quantiles = {0.2, 0.5, 0.8});

enum class ForecastMode { Frozen, Walk };

struct ForecastSet {
  int origin = 0;   // log-difference time index of the forecast origin
  int horizon = 0;  // steps 1..horizon
  std::vector<Matrix> level_draws;  // per step: draws x n (empty for point methods)
  Matrix point;                     // horizon x n posterior-median levels
  Matrix realized;                  // horizon x n, NaN when beyond the data
};

// Iterates the measurement equation forward per retained draw, conditional on
// the realized exogenous path; parameters frozen at their origin values or
// propagated by their random walks. Throws ExoPathTooShort when the data does
// not cover origin+1..origin+horizon.
ForecastSet forecast(const Chain& chain, const Dataset& data, int origin_idx, int horizon,
                     ForecastMode mode, RngStream& rng);

struct ErrorTable {
  std::vector<std::string> variables;
  int horizons = 0;
  Matrix mean;  // n x horizons
  Matrix sd;    // n x horizons, sample standard deviation (n-1)
};

// Mean and standard deviation of the absolute level error of the point
// forecasts across origins. Throws NoRealizedValues when some horizon has no
// realized observation at any origin.
ErrorTable error_table(const std::vector<ForecastSet>& sets,
                       const std::vector<std::string>& variables);

// Interpolated sample quantile (sorts its argument).
double sample_quantile(std::vector<double>& values, double q);

inline double quiet_nan() { return std::numeric_limits<double>::quiet_NaN(); }

}  // namespace tvpvarx
