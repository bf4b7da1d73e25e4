#pragma once

// Gibbs sampler for the TVP-VAR-X model: coefficient block, covariance-factor
// block, volatility block with mixture indicators, hyperparameter block, and
// the long-run-multiplier block when the constraint is enabled. The
// unconstrained mode samples D_0 inside the coefficient state and skips the
// multiplier block; it is the TVP-VAR-X benchmark.

#include <functional>
#include <string>
#include <vector>

#include "tvpvarx/dataset.hpp"
#include "tvpvarx/mixture.hpp"
#include "tvpvarx/model.hpp"
#include "tvpvarx/priors.hpp"

namespace tvpvarx {

struct CovState {
  Matrix alpha_path;  // T_est x n(n-1)/2, rows stacked by time
  Matrix h_path;      // T_est x n log volatilities
};

struct ChainRecord {
  int iteration = 0;  // 1-based sweep index within the run
  Vector theta;
  Matrix coef_path;            // T_est x coef dim (mode layout)
  Matrix alpha_path;           // T_est x n(n-1)/2
  Matrix h_path;               // T_est x n
  Hyperparams hyper;
  Eigen::MatrixXi indicators;  // T_est x n mixture components
};

struct ChainDiagnostics {
  int redraw_attempts = 0;          // extra coefficient draws forced by the guard
  int iterations_with_redraw = 0;
  ElasticityState elasticity;       // latest conditional posterior of theta
};

struct Chain {
  ModelConfig cfg;
  int data_length = 0;  // log-difference observations backing the run
  std::string config_hash;
  std::vector<ChainRecord> records;
  ChainDiagnostics diag;

  CoefLayout layout() const { return CoefLayout(cfg.n, cfg.k, !cfg.constrained); }
  int path_length() const { return data_length - cfg.t0; }
  int origin_of_path_index(int idx) const { return cfg.t0 + idx; }  // log-diff time index
};

// --- individual blocks (one conditional draw each) ---

// Simulation-smoother draw of the full (c,B,exogenous) path, conditional on
// everything else. Observation covariance H_t = A_t^-1 Sigma_t Sigma_t^T A_t^-T,
// state innovation blockdiag(Q, Qtilde).
Matrix draw_coefficients(const Matrix& y, const Vector& x, const ModelConfig& cfg,
                         const CovState& cov, const Hyperparams& hyper, const Vector& theta,
                         const PriorSpec& prior, RngStream& rng);

// Per-equation time-varying regressions u_i = -sum_{j<i} alpha_ij u_j + sigma_i e_i;
// returns the sampled alpha path. No-op (empty path) for n = 1.
Matrix draw_covariance_factors(const Matrix& residuals, const Matrix& h_path,
                               const Hyperparams& hyper, const PriorSpec& prior, RngStream& rng);

// ystar(t,i) = log((A_t u_t)_i^2 + offset).
Matrix log_squared_observations(const Matrix& residuals, const Matrix& alpha_path, double offset);

// Component indicators drawn per (equation, time) with probability
// proportional to q_c N(ystar | 2h + m_c, v_c^2); log-space normalized.
Eigen::MatrixXi draw_mixture_indicators(const Matrix& ystar, const Matrix& h_path,
                                        const MixtureTable& table, RngStream& rng);

// Joint simulation-smoother draw of the log-volatility path given indicators.
Matrix draw_volatilities(const Matrix& ystar, const Eigen::MatrixXi& indicators,
                         const Matrix& W, const MixtureTable& table, const PriorSpec& prior,
                         RngStream& rng);

// IW(prior scale + sum of increment outer products, prior dof + #increments)
// for one random-walk block whose sampled path is given row-wise.
IwPrior iw_posterior(const IwPrior& prior, const Matrix& path);
Hyperparams draw_hyperparams(const Matrix& coef_path, const Matrix& alpha_path,
                             const Matrix& h_path, const ModelConfig& cfg,
                             const PriorSpec& prior, RngStream& rng);

// Conditional posterior of theta:
//   U_j^-1 = U_0^-1 + sum_t C_t^T H_t^-1 C_t,   C_t = x_t [I - sum_j B_{j,t}]
//   mu_j   = U_j (U_0^-1 mu_0 + sum_t C_t^T H_t^-1 Ytilde_t)
// with the sums over the estimation sample t0+1..T.
ElasticityState draw_elasticity(const Matrix& y, const Vector& x, const ModelConfig& cfg,
                                const Matrix& coef_path, const CovState& cov,
                                const PriorSpec& prior, RngStream& rng);

// Measurement residuals u_t over the estimation sample for a coefficient path.
Matrix measurement_residuals(const Matrix& y, const Vector& x, const ModelConfig& cfg,
                             const Matrix& coef_path, const Vector& theta);

// --- full chain ---

using ProgressFn = std::function<void(int iteration, int total)>;

Chain run_chain(const Dataset& data, const ModelConfig& cfg, const PriorSpec& prior,
                RngStream& rng, const ProgressFn& progress = nullptr);

}  // namespace tvpvarx
