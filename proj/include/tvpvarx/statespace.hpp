#pragma once

// Forward Kalman filter and backward simulation smoother for the
// linear-Gaussian random-walk state form every sampler block reduces to:
//
//   y_t = Z_t s_t + eps_t,   eps_t ~ N(0, H_t)
//   s_t = s_{t-1} + w_t,     w_t  ~ N(0, Q_state)
//   s_0 ~ N(initial_mean, initial_cov)
//
// Observation times are 1..T; the smoother returns the path at those times.

#include <vector>

#include "tvpvarx/numkit.hpp"

namespace tvpvarx {

struct LinearGaussianSystem {
  std::vector<Vector> y;   // T observation vectors
  std::vector<Matrix> Z;   // T design matrices (obs_dim x state_dim)
  std::vector<Matrix> H;   // T observation covariances (PSD)
  Matrix state_innovation; // Q_state (PSD)
  Vector initial_mean;
  Matrix initial_cov;

  int steps() const { return static_cast<int>(y.size()); }
  int state_dim() const { return static_cast<int>(initial_mean.size()); }
  void check_dimensions() const;  // throws DimensionMismatch
};

struct FilterOutput {
  std::vector<Vector> predicted_mean, filtered_mean;
  std::vector<Matrix> predicted_cov, filtered_cov;
  std::vector<double> loglik;  // per-step contributions
  double total_loglik = 0.0;
};

// Joseph-form updates; covariances symmetrized after every step. Throws
// SingularInnovationCovariance when Z P Z^T + H fails to factor.
FilterOutput kalman_filter(const LinearGaussianSystem& sys);
void kalman_filter(const LinearGaussianSystem& sys, FilterOutput& out);

// Carter-Kohn backward draw from p(s_1..s_T | y_1..y_T). Degenerate
// (semi-definite) covariances are handled by zero-pivot clamping, so
// Q_state = 0 yields an exactly constant path.
std::vector<Vector> simulation_smoother(const FilterOutput& filter, const Matrix& Q_state,
                                        RngStream& rng);
void simulation_smoother(const FilterOutput& filter, const Matrix& Q_state, RngStream& rng,
                         std::vector<Vector>& path);

}  // namespace tvpvarx
