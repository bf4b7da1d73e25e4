#include "tvpvarx/model.hpp"

#include <cmath>

namespace tvpvarx {

void ModelConfig::validate() const {
  if (n < 1) throw ConfigError("model: n must be >= 1");
  if (k < 1) throw ConfigError("model: lag order k must be >= 1");
  if (t0 < min_t0())
    throw ConfigError("model: t0 = " + std::to_string(t0) + " below minimum " +
                      std::to_string(min_t0()) + " for n = " + std::to_string(n) +
                      ", k = " + std::to_string(k));
  if (mcmc.burn_in < 0 || mcmc.retained < 1 || mcmc.thin < 1)
    throw ConfigError("model: mcmc settings require burn_in >= 0, retained >= 1, thin >= 1");
  if (!(cond_threshold > 1.0)) throw ConfigError("model: cond_threshold must exceed 1");
  if (!(vol_offset > 0.0)) throw ConfigError("model: vol_offset must be positive");
}

Vector CoefLayout::intercept(const Eigen::Ref<const Vector>& state) const {
  return state.segment(0, n_);
}

Matrix CoefLayout::b_block(const Eigen::Ref<const Vector>& state, int lag) const {
  Matrix B(n_, n_);
  for (int r = 0; r < n_; ++r)
    for (int c = 0; c < n_; ++c) B(r, c) = state(b_index(lag, r, c));
  return B;
}

Vector CoefLayout::d_block(const Eigen::Ref<const Vector>& state, int lag) const {
  Vector d(n_);
  for (int e = 0; e < n_; ++e) d(e) = state(d_index(lag, e));
  return d;
}

std::vector<Matrix> CoefLayout::b_blocks(const Eigen::Ref<const Vector>& state) const {
  std::vector<Matrix> out;
  out.reserve(k_);
  for (int j = 1; j <= k_; ++j) out.push_back(b_block(state, j));
  return out;
}

std::vector<Vector> CoefLayout::d_all(const Eigen::Ref<const Vector>& state,
                                      const Vector& theta) const {
  std::vector<Vector> out;
  out.reserve(k_ + 1);
  if (includes_d0_) {
    for (int i = 0; i <= k_; ++i) out.push_back(d_block(state, i));
    return out;
  }
  std::vector<Vector> tail;
  tail.reserve(k_);
  for (int i = 1; i <= k_; ++i) tail.push_back(d_block(state, i));
  out.push_back(implied_d0(theta, b_blocks(state), tail));
  for (auto& d : tail) out.push_back(std::move(d));
  return out;
}

Vector implied_d0(const Vector& theta, const std::vector<Matrix>& B,
                  const std::vector<Vector>& D_tail) {
  const Eigen::Index n = theta.size();
  Matrix M = Matrix::Identity(n, n);
  for (const auto& Bj : B) M -= Bj;
  Vector d0 = M * theta;
  for (const auto& Di : D_tail) d0 -= Di;
  return d0;
}

Vector long_run_multiplier(const std::vector<Matrix>& B, const std::vector<Vector>& D_all,
                           double cond_threshold) {
  if (B.empty() || D_all.empty()) throw DimensionMismatch("long_run_multiplier: empty input");
  const Eigen::Index n = B.front().rows();
  Matrix M = Matrix::Identity(n, n);
  for (const auto& Bj : B) M -= Bj;
  const double cond = condition_number(M);
  if (!(cond < cond_threshold))
    throw NearSingularLongRun("I - sum(B) condition number " + std::to_string(cond));
  Vector d = Vector::Zero(n);
  for (const auto& Di : D_all) d += Di;
  return M.fullPivLu().solve(d);
}

void build_observation(const CoefLayout& layout, const Eigen::Ref<const Vector>& y_t,
                       const Eigen::Ref<const Matrix>& y_hist, double x_t,
                       const Eigen::Ref<const Vector>& x_hist, const Vector* theta,
                       Eigen::Ref<Vector> lhs, Eigen::Ref<Matrix> Z) {
  const int n = layout.n();
  const int k = layout.k();
  if (y_hist.rows() != k || y_hist.cols() != n || x_hist.size() != k)
    throw DimensionMismatch("build_observation: lag history shape");
  if (theta != nullptr && layout.includes_d0())
    throw DimensionMismatch("build_observation: constrained transform needs a layout without D0");
  if (theta == nullptr && !layout.includes_d0())
    throw DimensionMismatch("build_observation: unconstrained transform needs D0 in the layout");

  Z.setZero();
  if (theta != nullptr) {
    lhs = y_t - (*theta) * x_t;
    for (int e = 0; e < n; ++e) {
      Z(e, layout.c_index(e)) = 1.0;
      for (int j = 1; j <= k; ++j)
        for (int c = 0; c < n; ++c)
          Z(e, layout.b_index(j, e, c)) = y_hist(k - j, c) - (*theta)(c) * x_t;
      for (int i = 1; i <= k; ++i) Z(e, layout.d_index(i, e)) = x_hist(k - i) - x_t;
    }
  } else {
    lhs = y_t;
    for (int e = 0; e < n; ++e) {
      Z(e, layout.c_index(e)) = 1.0;
      for (int j = 1; j <= k; ++j)
        for (int c = 0; c < n; ++c) Z(e, layout.b_index(j, e, c)) = y_hist(k - j, c);
      Z(e, layout.d_index(0, e)) = x_t;
      for (int i = 1; i <= k; ++i) Z(e, layout.d_index(i, e)) = x_hist(k - i);
    }
  }
}

std::pair<Vector, Matrix> transform_observation(const Vector& y_t, const Matrix& y_hist,
                                                double x_t, const Vector& x_hist,
                                                const Vector& theta) {
  const int n = static_cast<int>(y_t.size());
  const int k = static_cast<int>(x_hist.size());
  const CoefLayout layout(n, k, /*includes_d0=*/false);
  Vector lhs(n);
  Matrix Z(n, layout.dim());
  build_observation(layout, y_t, y_hist, x_t, x_hist, &theta, lhs, Z);
  return {lhs, Z};
}

Matrix unit_lower_from_alpha(const Eigen::Ref<const Vector>& alpha, int n) {
  if (alpha.size() != n * (n - 1) / 2) throw DimensionMismatch("unit_lower_from_alpha");
  Matrix A = Matrix::Identity(n, n);
  int idx = 0;
  for (int i = 1; i < n; ++i)
    for (int j = 0; j < i; ++j) A(i, j) = alpha(idx++);
  return A;
}

Vector alpha_from_unit_lower(const Matrix& A) {
  const int n = static_cast<int>(A.rows());
  Vector alpha(n * (n - 1) / 2);
  int idx = 0;
  for (int i = 1; i < n; ++i)
    for (int j = 0; j < i; ++j) alpha(idx++) = A(i, j);
  return alpha;
}

Matrix observation_covariance(const Eigen::Ref<const Vector>& alpha,
                              const Eigen::Ref<const Vector>& h, int n) {
  const Matrix A = unit_lower_from_alpha(alpha, n);
  // A^-1 diag(e^{2h}) A^-T via triangular solves
  Matrix Ainv = A.triangularView<Eigen::Lower>().solve(Matrix::Identity(n, n));
  for (int c = 0; c < n; ++c) Ainv.col(c) *= std::exp(h(c));
  return Ainv * Ainv.transpose();
}

}  // namespace tvpvarx
