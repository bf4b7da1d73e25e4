#include "tvpvarx/statespace.hpp"

#include <cmath>

namespace tvpvarx {

namespace {
constexpr double kLog2Pi = 1.8378770664093454836;

// (m + m^T)/2 with negative diagonal entries clamped to zero, in place.
void symmetrize_clamp(Matrix& m) {
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    for (Eigen::Index j = i + 1; j < m.cols(); ++j) {
      const double v = 0.5 * (m(i, j) + m(j, i));
      m(i, j) = v;
      m(j, i) = v;
    }
    if (m(i, i) < 0.0) m(i, i) = 0.0;
  }
}
}  // namespace

void LinearGaussianSystem::check_dimensions() const {
  const auto T = y.size();
  if (Z.size() != T || H.size() != T)
    throw DimensionMismatch("state space: y, Z, H lengths disagree");
  const Eigen::Index m = initial_mean.size();
  if (initial_cov.rows() != m || initial_cov.cols() != m)
    throw DimensionMismatch("state space: initial covariance dimension");
  if (state_innovation.rows() != m || state_innovation.cols() != m)
    throw DimensionMismatch("state space: state innovation dimension");
  for (std::size_t t = 0; t < T; ++t) {
    if (Z[t].cols() != m || Z[t].rows() != y[t].size())
      throw DimensionMismatch("state space: design matrix dimension at step " + std::to_string(t));
    if (H[t].rows() != y[t].size() || H[t].cols() != y[t].size())
      throw DimensionMismatch("state space: observation covariance at step " + std::to_string(t));
  }
}

void kalman_filter(const LinearGaussianSystem& sys, FilterOutput& out) {
  sys.check_dimensions();
  const int T = sys.steps();
  const Eigen::Index m = sys.initial_mean.size();
  out.predicted_mean.resize(T);
  out.filtered_mean.resize(T);
  out.predicted_cov.resize(T);
  out.filtered_cov.resize(T);
  out.loglik.assign(T, 0.0);
  out.total_loglik = 0.0;

  Vector state = sys.initial_mean;
  Matrix P = sys.initial_cov;
  const Matrix& Q = sys.state_innovation;

  // per-call workspace; shapes stay fixed across steps for a fixed obs dim
  Matrix P_pred(m, m), PZt, S, Ls, Kt, J(m, m), JP(m, m), KH;
  Vector v, sv;

  for (int t = 0; t < T; ++t) {
    P_pred = P;
    P_pred += Q;
    symmetrize_clamp(P_pred);

    const Matrix& Zt = sys.Z[t];
    const Matrix& Ht = sys.H[t];
    const Eigen::Index d = sys.y[t].size();
    v = sys.y[t];
    v.noalias() -= Zt * state;
    PZt.noalias() = P_pred * Zt.transpose();  // m x d
    S.noalias() = Zt * PZt;
    S += Ht;
    symmetrize_clamp(S);
    if (detail::cholesky_core(S, Ls, /*clamp=*/false) >= 0)
      throw SingularInnovationCovariance("innovation covariance singular at step " +
                                         std::to_string(t));
    // gain transposed: Kt = S^-1 Z P_pred  (d x m)
    Kt = PZt.transpose();
    Ls.triangularView<Eigen::Lower>().solveInPlace(Kt);
    sv = v;
    Ls.triangularView<Eigen::Lower>().solveInPlace(sv);
    double logdet = 0.0;
    for (Eigen::Index i = 0; i < d; ++i) logdet += std::log(Ls(i, i));
    out.loglik[t] = -0.5 * (static_cast<double>(d) * kLog2Pi + sv.squaredNorm()) - logdet;
    out.total_loglik += out.loglik[t];
    Ls.transpose().triangularView<Eigen::Upper>().solveInPlace(Kt);

    // Joseph form: (I - K Z) P (I - K Z)^T + K H K^T
    J.setIdentity();
    J.noalias() -= Kt.transpose() * Zt;
    JP.noalias() = J * P_pred;
    P.noalias() = JP * J.transpose();
    KH.noalias() = Kt.transpose() * Ht;
    P.noalias() += KH * Kt;
    symmetrize_clamp(P);

    out.predicted_mean[t] = state;
    out.predicted_cov[t] = P_pred;
    state.noalias() += Kt.transpose() * v;
    out.filtered_mean[t] = state;
    out.filtered_cov[t] = P;
  }
}

FilterOutput kalman_filter(const LinearGaussianSystem& sys) {
  FilterOutput out;
  kalman_filter(sys, out);
  return out;
}

void simulation_smoother(const FilterOutput& filter, const Matrix& Q_state, RngStream& rng,
                         std::vector<Vector>& path) {
  const int T = static_cast<int>(filter.filtered_mean.size());
  if (T == 0) throw DimensionMismatch("simulation smoother: empty filter output");
  const Eigen::Index m = filter.filtered_mean[0].size();
  path.resize(T);

  Matrix S(m, m), Ls, G, cov(m, m), L(m, m);
  Vector mean(m), z(m);
  auto draw_into = [&](const Vector& mu, Matrix& c, Vector& dest) {
    symmetrize_clamp(c);
    detail::cholesky_core(c, L, /*clamp=*/true);
    for (Eigen::Index i = 0; i < m; ++i) z(i) = rng.normal();
    dest = mu;
    dest.noalias() += L * z;
  };

  cov = filter.filtered_cov[T - 1];
  draw_into(filter.filtered_mean[T - 1], cov, path[T - 1]);
  for (int t = T - 2; t >= 0; --t) {
    const Matrix& P = filter.filtered_cov[t];
    S = P;
    S += Q_state;
    symmetrize_clamp(S);
    detail::cholesky_core(S, Ls, /*clamp=*/true);
    // G^T = S^-1 P with clamped pivots treated as zero information
    G = solve_psd_lower(Ls, P);  // G^T, m x m
    mean = filter.filtered_mean[t];
    mean.noalias() += G.transpose() * (path[t + 1] - filter.filtered_mean[t]);
    cov = P;
    cov.noalias() -= G.transpose() * P;
    draw_into(mean, cov, path[t]);
  }
}

std::vector<Vector> simulation_smoother(const FilterOutput& filter, const Matrix& Q_state,
                                        RngStream& rng) {
  std::vector<Vector> path;
  simulation_smoother(filter, Q_state, rng, path);
  return path;
}

}  // namespace tvpvarx
