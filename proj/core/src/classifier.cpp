#include "ebir/classifier.hpp"

#include <cmath>
#include <stdexcept>

#include "ebir/special.hpp"

namespace ebir {

double TruePopulation::signal_strength() const {
  const Vector d = mean_difference();
  const Vector diag = cov.diagonal_elements();
  return (d.array().square() / diag.array()).sum();
}

std::vector<Index> TruePopulation::nonzero_support() const {
  std::vector<Index> support;
  for (Index j = 0; j < mu1.size(); ++j) {
    if (mu1[j] != mu2[j]) support.push_back(j);
  }
  return support;
}

LinearClassifier build_classifier(const SummaryStats& stats, EtaEstimate eta) {
  if (eta.values.size() != stats.p) {
    throw std::invalid_argument("build_classifier: eta dimension mismatch");
  }
  LinearClassifier c;
  c.mu_hat = stats.mu_hat;
  c.inv_sqrt_var = stats.var_hat.array().rsqrt();
  c.eta = std::move(eta);
  return c;
}

double score(const LinearClassifier& c, const Vector& x) {
  if (x.size() != c.dim()) {
    throw std::invalid_argument("score: input dimension mismatch");
  }
  if (!x.allFinite()) {
    throw std::invalid_argument("score: non-finite input");
  }
  return ((x - c.mu_hat).array() * c.inv_sqrt_var.array() *
          c.eta.values.array())
      .sum();
}

int predict(const LinearClassifier& c, const Vector& x) {
  return score(c, x) > 0.0 ? 1 : 2;
}

double theoretical_error(const LinearClassifier& c, const TruePopulation& pop) {
  if (pop.mu1.size() != c.dim() || pop.cov.dim() != c.dim()) {
    throw std::invalid_argument("theoretical_error: dimension mismatch");
  }
  const Vector v = (c.inv_sqrt_var.array() * c.eta.values.array()).matrix();
  if ((v.array() == 0.0).all()) {
    return 0.5;  // zero rule: random guessing
  }
  const double denom = std::sqrt(pop.cov.quadratic_form(v, v));
  const double psi1 = (pop.mu1 - c.mu_hat).dot(v) / denom;
  const double psi2 = -(pop.mu2 - c.mu_hat).dot(v) / denom;
  return 0.5 * (normal_cdf(-psi1) + normal_cdf(-psi2));
}

double empirical_error(const LinearClassifier& c, const LabeledDataset& test) {
  if (test.n_samples() < 1) {
    throw std::invalid_argument("empirical_error: empty test set");
  }
  if (test.n_features() != c.dim()) {
    throw std::invalid_argument("empirical_error: dimension mismatch");
  }
  Index wrong = 0;
  for (Index i = 0; i < test.n_samples(); ++i) {
    const int predicted = predict(c, test.features.row(i).transpose());
    if (predicted != test.labels[static_cast<std::size_t>(i)]) ++wrong;
  }
  return static_cast<double>(wrong) / static_cast<double>(test.n_samples());
}

double optimal_error(const TruePopulation& pop) {
  const Vector d = pop.mean_difference();
  const double q = pop.cov.inverse_quadratic_form(d, d);
  return normal_cdf(-0.5 * std::sqrt(q));
}

} // namespace ebir
