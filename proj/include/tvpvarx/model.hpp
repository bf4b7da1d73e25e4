#pragma once

// Domain types for the constrained TVP-VAR-X model and the deterministic
// algebra linking the long-run multiplier theta to the B and D coefficients.
//
// Coefficient state ordering (fixed convention, used everywhere including
// chain files): intercept c (n entries), then vec(B_j) for lag j = 1..k in
// row-major order (n*n entries per lag), then the exogenous block. With the
// long-run constraint enabled the exogenous block is D_1..D_k (n entries per
// lag; D_0 is implied). Without it the block is D_0..D_k.

#include <cstdint>
#include <vector>

#include "tvpvarx/numkit.hpp"

namespace tvpvarx {

struct McmcConfig {
  int burn_in = 15000;
  int retained = 1500;
  int thin = 10;
  int total_iterations() const { return burn_in + retained * thin; }
};

struct ModelConfig {
  int n = 2;           // endogenous dimension
  int k = 1;           // lag order
  int t0 = 40;         // training-sample length (log-difference observations)
  bool constrained = true;
  McmcConfig mcmc;
  std::uint64_t seed = 0;
  double cond_threshold = 1e12;  // singularity guard on I - sum(B)
  double vol_offset = 1e-3;      // offset inside log((A u)^2 + offset)

  int min_t0() const { return k + 2 + n * (n * k + k + 2); }
  void validate() const;  // throws ConfigError on a broken invariant
};

// Index bookkeeping for the flat coefficient state vector.
class CoefLayout {
 public:
  CoefLayout() = default;
  CoefLayout(int n, int k, bool includes_d0) : n_(n), k_(k), includes_d0_(includes_d0) {}

  int n() const { return n_; }
  int k() const { return k_; }
  bool includes_d0() const { return includes_d0_; }

  int cb_dim() const { return n_ + k_ * n_ * n_; }     // intercept + B blocks
  int d_dim() const { return (includes_d0_ ? k_ + 1 : k_) * n_; }
  int dim() const { return cb_dim() + d_dim(); }

  int c_index(int eq) const { return eq; }
  int b_index(int lag, int row, int col) const {  // lag in 1..k
    return n_ + (lag - 1) * n_ * n_ + row * n_ + col;
  }
  // lag in 0..k when D0 is part of the state, else 1..k.
  int d_index(int lag, int eq) const {
    const int first = includes_d0_ ? 0 : 1;
    return cb_dim() + (lag - first) * n_ + eq;
  }

  Vector intercept(const Eigen::Ref<const Vector>& state) const;
  Matrix b_block(const Eigen::Ref<const Vector>& state, int lag) const;
  Vector d_block(const Eigen::Ref<const Vector>& state, int lag) const;
  std::vector<Matrix> b_blocks(const Eigen::Ref<const Vector>& state) const;
  // All k+1 exogenous coefficient vectors D_0..D_k; when D0 is not part of
  // the state it is implied from theta.
  std::vector<Vector> d_all(const Eigen::Ref<const Vector>& state, const Vector& theta) const;

 private:
  int n_ = 0, k_ = 0;
  bool includes_d0_ = false;
};

// D_0 = [I - sum_j B_j] theta - sum_{i=1..k} D_i
Vector implied_d0(const Vector& theta, const std::vector<Matrix>& B,
                  const std::vector<Vector>& D_tail);

// theta = [I - sum_j B_j]^-1 sum_{i=0..k} D_i; throws NearSingularLongRun
// when the condition number of I - sum(B) reaches cond_threshold.
Vector long_run_multiplier(const std::vector<Matrix>& B, const std::vector<Vector>& D_all,
                           double cond_threshold = 1e12);

// Constrained measurement transform for one time point:
//   y_t - theta x_t = c_t + sum_j B_{j,t} (y_{t-j} - theta x_t)
//                   + sum_{i=1..k} D_{i,t} (x_{t-i} - x_t) + u_t
// y_hist/x_hist hold the k lagged values in chronological order, i.e.
// row (k-j) of y_hist is y_{t-j}. Fills lhs (n) and the design matrix
// Z (n x layout.dim()) for the state ordering above. Pass theta = nullptr
// for the unconstrained form (lhs = y_t, x_t enters as the D_0 regressor).
void build_observation(const CoefLayout& layout, const Eigen::Ref<const Vector>& y_t,
                       const Eigen::Ref<const Matrix>& y_hist, double x_t,
                       const Eigen::Ref<const Vector>& x_hist, const Vector* theta,
                       Eigen::Ref<Vector> lhs, Eigen::Ref<Matrix> Z);

// Convenience wrapper returning (lhs, Z) for the constrained transform.
std::pair<Vector, Matrix> transform_observation(const Vector& y_t, const Matrix& y_hist,
                                                double x_t, const Vector& x_hist,
                                                const Vector& theta);

// Covariance-factor state: free elements of the unit lower triangular A_t
// stacked by rows, plus log volatilities h_t = log sigma_t.
Matrix unit_lower_from_alpha(const Eigen::Ref<const Vector>& alpha, int n);
Vector alpha_from_unit_lower(const Matrix& A);

// H_t = A^-1 diag(exp(2 h)) A^-T for one time step.
Matrix observation_covariance(const Eigen::Ref<const Vector>& alpha,
                              const Eigen::Ref<const Vector>& h, int n);

struct Hyperparams {
  Matrix Q;               // (c,B) innovation covariance
  Matrix Qtilde;          // exogenous-coefficient innovation covariance
  std::vector<Matrix> G;  // per-equation blocks for alpha rows 2..n
  Matrix W;               // log-volatility innovation covariance
};

struct ElasticityState {
  Vector theta;
  Vector prior_mean;   // mu_0
  Matrix prior_cov;    // U_0
  Vector post_mean;    // mu_j of the latest conditional posterior
  Matrix post_cov;     // U_j
};

}  // namespace tvpvarx
