#include "tvpvarx/mixture.hpp"

#include <cmath>

namespace tvpvarx {

double MixtureTable::mixture_mean() const { return prob.dot(mean); }

double MixtureTable::mixture_variance() const {
  const double mu = mixture_mean();
  double v = 0.0;
  for (int i = 0; i < components(); ++i)
    v += prob(i) * (var(i) + (mean(i) - mu) * (mean(i) - mu));
  return v;
}

void MixtureTable::validate() const {
  if (prob.size() == 0 || prob.size() != mean.size() || prob.size() != var.size())
    throw DimensionMismatch("mixture table: component arrays disagree");
  double total = 0.0;
  for (int i = 0; i < components(); ++i) {
    if (prob(i) < 0.0 || var(i) < 0.0)
      throw NumericError("mixture table: negative probability or variance");
    total += prob(i);
  }
  if (std::abs(total - 1.0) > 1e-12)
    throw NumericError("mixture table: probabilities sum to " + std::to_string(total));
}

MixtureTable MixtureTable::ksc() {
  MixtureTable t;
  t.prob.resize(7);
  t.mean.resize(7);
  t.var.resize(7);
  // Kim, Shephard & Chib (1998), Table 4; the published means approximate
  // log chi2(1) + 1.2704, so the offset is subtracted here.
  const double q[7] = {0.00730, 0.10556, 0.00002, 0.04395, 0.34001, 0.24566, 0.25750};
  const double m[7] = {-10.12999, -3.97281, -8.56686, 2.77786, 0.61942, 1.79518, -1.08819};
  const double v[7] = {5.79596, 2.61369, 5.17950, 0.16735, 0.64009, 0.34023, 1.26261};
  for (int i = 0; i < 7; ++i) {
    t.prob(i) = q[i];
    t.mean(i) = m[i] - 1.2704;
    t.var(i) = v[i];
  }
  return t;
}

double log_chi2_mean() {
  // digamma(1/2) + log 2 = -gamma - 2 log 2 + log 2 = -gamma - log 2
  const double euler_gamma = 0.57721566490153286;
  return -euler_gamma - std::log(2.0);
}

double log_chi2_variance() { return M_PI * M_PI / 2.0; }

}  // namespace tvpvarx
