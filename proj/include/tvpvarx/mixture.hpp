#pragma once

// Gaussian mixture approximation of the log chi-squared(1) distribution,
// used to linearize the volatility measurement equation.

#include "tvpvarx/numkit.hpp"

namespace tvpvarx {

struct MixtureTable {
  Vector prob;  // component probabilities, sum to one
  Vector mean;  // component means (log chi2(1) location already folded in)
  Vector var;   // component variances

  int components() const { return static_cast<int>(prob.size()); }
  double mixture_mean() const;
  double mixture_variance() const;
  void validate() const;  // sizes, nonnegativity, sum of probabilities

  // The seven-component Kim-Shephard-Chib table.
  static MixtureTable ksc();
};

// Analytic moments of log chi-squared(1): mean = digamma(1/2) + log 2,
// variance = pi^2 / 2. Used as the test oracle for the table.
double log_chi2_mean();
double log_chi2_variance();

}  // namespace tvpvarx
