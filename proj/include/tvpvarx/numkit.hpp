#pragma once

// Dense linear algebra helpers and the sampling primitives used by every
// other module. Matrices are plain Eigen types; symmetric inputs are
// expected wherever a factorization is requested.

#include <Eigen/Dense>
#include <cstdint>

#include "tvpvarx/errors.hpp"

namespace tvpvarx {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

// Deterministic random stream. xoshiro256++ seeded through SplitMix64 from
// (seed, stream): distinct stream ids give independent sequences, so
// parallel chains never share state. Identical (seed, stream) reproduces
// the exact draw sequence on any platform.
class RngStream {
 public:
  explicit RngStream(std::uint64_t seed, std::uint64_t stream = 0);

  std::uint64_t next_u64();
  double uniform();  // open interval (0,1)
  double normal();
  double gamma(double shape);       // unit scale, shape > 0
  double chi_squared(double dof);   // dof > 0, real-valued

  std::uint64_t seed() const { return seed_; }
  std::uint64_t stream() const { return stream_; }

 private:
  std::uint64_t state_[4];
  std::uint64_t seed_ = 0;
  std::uint64_t stream_ = 0;
  double spare_normal_ = 0.0;
  bool have_spare_ = false;
};

// Relative pivot tolerance for positive-definiteness checks: tol = kPdTol * max diagonal.
inline constexpr double kPdTol = 1e-12;

// Lower Cholesky factor of a symmetric positive definite matrix.
// Throws NotPositiveDefinite when a pivot falls at or below the tolerance.
Matrix cholesky_lower(const Matrix& m);

// Lower factor for positive semi-definite matrices: pivots at or below the
// tolerance are clamped to zero (the rest of that column too). L*L^T
// reproduces the input for exactly semi-definite matrices.
Matrix cholesky_psd(const Matrix& m);

// Solve L L^T x = b where L came from cholesky_psd; zero pivots contribute
// zero components (pseudo-solve on the degenerate subspace).
Matrix solve_psd_lower(const Matrix& L, const Matrix& b);

Matrix symmetrize(const Matrix& m);
bool is_symmetric(const Matrix& m, double rel_tol = 1e-8);

// 2-norm condition number via SVD; returns +inf for exactly singular input.
double condition_number(const Matrix& m);

// mean + L z with z iid standard normal and L the clamped factor of cov.
Vector sample_mvn(const Vector& mean, const Matrix& cov, RngStream& rng);

// Inverse-Wishart(scale, dof) via the Bartlett factorization of
// Wishart(scale^-1, dof); requires dof > dim - 1 and scale positive definite.
// E[draw] = scale / (dof - dim - 1).
Matrix sample_inverse_wishart(const Matrix& scale, double dof, RngStream& rng);

// Index i with probability weights[i] / sum(weights); weights must be
// nonnegative with at least one positive entry.
int sample_categorical(const Vector& weights, RngStream& rng);

// Same draw from unnormalized log weights; invariant to adding a constant.
int sample_categorical_log(const Vector& log_weights, RngStream& rng);

namespace detail {
// Shared factorization core: fills L (resized, zeroed) with the lower factor.
// Returns the index of the first pivot at or below the tolerance, or -1 when
// every pivot passes; in clamp mode failing pivots zero their column and the
// return value is always -1.
int cholesky_core(const Matrix& m, Matrix& L, bool clamp);
}  // namespace detail

}  // namespace tvpvarx
