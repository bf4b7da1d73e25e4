#include "tvpvarx/numkit.hpp"

#include <cmath>
#include <limits>

namespace tvpvarx {

namespace {

constexpr std::uint64_t kGolden = 0x9E3779B97F4A7C15ULL;

std::uint64_t splitmix64(std::uint64_t& x) {
  x += kGolden;
  std::uint64_t z = x;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

std::uint64_t rotl(std::uint64_t x, int k) { return (x << k) | (x >> (64 - k)); }

double pivot_tolerance(const Matrix& m) {
  double max_diag = 0.0;
  for (Eigen::Index i = 0; i < m.rows(); ++i) max_diag = std::max(max_diag, m(i, i));
  return kPdTol * max_diag;
}

}  // namespace

RngStream::RngStream(std::uint64_t seed, std::uint64_t stream) : seed_(seed), stream_(stream) {
  std::uint64_t x = seed ^ (kGolden * (stream + 1));
  for (auto& s : state_) s = splitmix64(x);
}

std::uint64_t RngStream::next_u64() {
  const std::uint64_t result = rotl(state_[0] + state_[3], 23) + state_[0];
  const std::uint64_t t = state_[1] << 17;
  state_[2] ^= state_[0];
  state_[3] ^= state_[1];
  state_[1] ^= state_[2];
  state_[0] ^= state_[3];
  state_[2] ^= t;
  state_[3] = rotl(state_[3], 45);
  return result;
}

double RngStream::uniform() {
  // 53-bit mantissa shifted to the open interval (0,1).
  return (static_cast<double>(next_u64() >> 11) + 0.5) * 0x1.0p-53;
}

double RngStream::normal() {
  if (have_spare_) {
    have_spare_ = false;
    return spare_normal_;
  }
  const double r = std::sqrt(-2.0 * std::log(uniform()));
  const double a = 2.0 * M_PI * uniform();
  spare_normal_ = r * std::sin(a);
  have_spare_ = true;
  return r * std::cos(a);
}

double RngStream::gamma(double shape) {
  if (!(shape > 0.0)) throw InvalidDof("gamma shape must be positive");
  if (shape < 1.0) {
    // Boost from shape+1 (Marsaglia-Tsang section 4).
    const double u = uniform();
    return gamma(shape + 1.0) * std::pow(u, 1.0 / shape);
  }
  const double d = shape - 1.0 / 3.0;
  const double c = 1.0 / std::sqrt(9.0 * d);
  for (;;) {
    double x;
    double v;
    do {
      x = normal();
      v = 1.0 + c * x;
    } while (v <= 0.0);
    v = v * v * v;
    const double u = uniform();
    if (u < 1.0 - 0.0331 * x * x * x * x) return d * v;
    if (std::log(u) < 0.5 * x * x + d * (1.0 - v + std::log(v))) return d * v;
  }
}

double RngStream::chi_squared(double dof) { return 2.0 * gamma(0.5 * dof); }

Matrix symmetrize(const Matrix& m) { return 0.5 * (m + m.transpose()); }

bool is_symmetric(const Matrix& m, double rel_tol) {
  if (m.rows() != m.cols()) return false;
  const double scale = std::max(1e-300, m.cwiseAbs().maxCoeff());
  return (m - m.transpose()).cwiseAbs().maxCoeff() <= rel_tol * scale;
}

namespace detail {

int cholesky_core(const Matrix& m, Matrix& L, bool clamp) {
  const Eigen::Index p = m.rows();
  const double tol = pivot_tolerance(m);
  if (L.rows() != p || L.cols() != p) L.resize(p, p);
  L.setZero();
  for (Eigen::Index j = 0; j < p; ++j) {
    double d = m(j, j);
    for (Eigen::Index k = 0; k < j; ++k) d -= L(j, k) * L(j, k);
    if (d <= tol) {
      if (!clamp) return static_cast<int>(j);
      continue;  // pivot and column stay zero
    }
    L(j, j) = std::sqrt(d);
    for (Eigen::Index i = j + 1; i < p; ++i) {
      double s = m(i, j);
      for (Eigen::Index k = 0; k < j; ++k) s -= L(i, k) * L(j, k);
      L(i, j) = s / L(j, j);
    }
  }
  return -1;
}

}  // namespace detail

Matrix cholesky_lower(const Matrix& m) {
  if (m.rows() != m.cols()) throw DimensionMismatch("cholesky: matrix not square");
  if (m.size() > 0 && !is_symmetric(m))
    throw NotPositiveDefinite("cholesky: matrix not symmetric");
  Matrix L;
  const int bad = detail::cholesky_core(m, L, /*clamp=*/false);
  if (bad >= 0)
    throw NotPositiveDefinite("pivot " + std::to_string(bad) + " at or below tolerance");
  return L;
}

Matrix cholesky_psd(const Matrix& m) {
  if (m.rows() != m.cols()) throw DimensionMismatch("cholesky_psd: matrix not square");
  Matrix L;
  detail::cholesky_core(m, L, /*clamp=*/true);
  return L;
}

Matrix solve_psd_lower(const Matrix& L, const Matrix& b) {
  if (L.rows() != b.rows()) throw DimensionMismatch("solve_psd_lower");
  const Eigen::Index p = L.rows();
  Matrix z = b;
  for (Eigen::Index j = 0; j < p; ++j) {
    if (L(j, j) == 0.0) {
      z.row(j).setZero();
      continue;
    }
    z.row(j) /= L(j, j);
    for (Eigen::Index i = j + 1; i < p; ++i) z.row(i) -= L(i, j) * z.row(j);
  }
  for (Eigen::Index j = p - 1; j >= 0; --j) {
    if (L(j, j) == 0.0) {
      z.row(j).setZero();
      continue;
    }
    z.row(j) /= L(j, j);
    for (Eigen::Index i = 0; i < j; ++i) z.row(i) -= L(j, i) * z.row(j);
  }
  return z;
}

double condition_number(const Matrix& m) {
  Eigen::JacobiSVD<Matrix> svd(m);
  const auto& sv = svd.singularValues();
  if (sv.size() == 0) return 1.0;
  const double smin = sv(sv.size() - 1);
  if (smin <= 0.0) return std::numeric_limits<double>::infinity();
  return sv(0) / smin;
}

Vector sample_mvn(const Vector& mean, const Matrix& cov, RngStream& rng) {
  if (cov.rows() != cov.cols() || mean.size() != cov.rows())
    throw DimensionMismatch("sample_mvn: mean/cov dimensions disagree");
  const Matrix L = cholesky_psd(cov);
  Vector z(mean.size());
  for (Eigen::Index i = 0; i < z.size(); ++i) z(i) = rng.normal();
  return mean + L * z;
}

Matrix sample_inverse_wishart(const Matrix& scale, double dof, RngStream& rng) {
  const Eigen::Index p = scale.rows();
  if (scale.cols() != p) throw DimensionMismatch("sample_inverse_wishart: scale not square");
  if (!(dof > static_cast<double>(p) - 1.0))
    throw InvalidDof("sample_inverse_wishart: dof must exceed dim - 1");
  const Matrix Ls = cholesky_lower(scale);
  // scale^-1 from the factor, then its own lower factor for Bartlett.
  const Matrix inv_scale =
      symmetrize(Ls.transpose().triangularView<Eigen::Upper>().solve(
          Matrix(Ls.triangularView<Eigen::Lower>().solve(Matrix::Identity(p, p)))));
  const Matrix G = cholesky_lower(inv_scale);
  Matrix A = Matrix::Zero(p, p);
  for (Eigen::Index i = 0; i < p; ++i) {
    A(i, i) = std::sqrt(rng.chi_squared(dof - static_cast<double>(i)));
    for (Eigen::Index j = 0; j < i; ++j) A(i, j) = rng.normal();
  }
  const Matrix X = G * A;                  // X X^T ~ Wishart(scale^-1, dof)
  const Matrix Lw = X;                     // already lower triangular
  const Matrix inv_factor = Lw.triangularView<Eigen::Lower>().solve(Matrix::Identity(p, p));
  return symmetrize(inv_factor.transpose() * inv_factor);
}

int sample_categorical(const Vector& weights, RngStream& rng) {
  if (weights.size() == 0) throw AllZeroWeights("sample_categorical: empty weight vector");
  double total = 0.0;
  for (Eigen::Index i = 0; i < weights.size(); ++i) {
    if (weights(i) < 0.0) throw NumericError("sample_categorical: negative weight");
    total += weights(i);
  }
  if (total <= 0.0) throw AllZeroWeights();
  const double u = rng.uniform() * total;
  double acc = 0.0;
  int last_positive = 0;
  for (Eigen::Index i = 0; i < weights.size(); ++i) {
    if (weights(i) > 0.0) last_positive = static_cast<int>(i);
    acc += weights(i);
    if (u <= acc && weights(i) > 0.0) return static_cast<int>(i);
  }
  return last_positive;
}

int sample_categorical_log(const Vector& log_weights, RngStream& rng) {
  if (log_weights.size() == 0) throw AllZeroWeights("sample_categorical_log: empty weight vector");
  const double m = log_weights.maxCoeff();
  if (!std::isfinite(m)) throw AllZeroWeights("sample_categorical_log: all weights underflow");
  Vector w(log_weights.size());
  for (Eigen::Index i = 0; i < w.size(); ++i) w(i) = std::exp(log_weights(i) - m);
  return sample_categorical(w, rng);
}

}  // namespace tvpvarx
