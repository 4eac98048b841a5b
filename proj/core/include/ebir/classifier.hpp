#pragma once

#include "ebir/covariance.hpp"
#include "ebir/dataset.hpp"
#include "ebir/prior.hpp"
#include "ebir/types.hpp"

namespace ebir {

/// Scaled independence rule: assigns x to class 1 iff
/// (x - mu_hat)^T D_hat^{-1/2} eta > 0.
struct LinearClassifier {
  Vector mu_hat;
  Vector inv_sqrt_var;  // 1 / sqrt(var_hat), strictly positive
  EtaEstimate eta;

  Index dim() const { return mu_hat.size(); }
};

/// Ground-truth population for theoretical and oracle evaluations.
struct TruePopulation {
  Vector mu1;
  Vector mu2;
  Covariance cov;

  Vector mean_difference() const { return mu1 - mu2; }

  /// C_p = d^T D^{-1} d with D = diag(Sigma).
  double signal_strength() const;

  /// Largest eigenvalue of the correlation matrix.
  double max_correlation_eigenvalue() const {
    return cov.max_correlation_eigenvalue();
  }

  /// 0-based indices where mu1 differs from mu2 exactly.
  std::vector<Index> nonzero_support() const;
};

LinearClassifier build_classifier(const SummaryStats& stats, EtaEstimate eta);

/// Decision score (x - mu_hat)^T D_hat^{-1/2} eta. Throws on non-finite
/// input or dimension mismatch.
double score(const LinearClassifier& c, const Vector& x);

/// Class 1 iff score > 0, else class 2 (the boundary goes to class 2).
int predict(const LinearClassifier& c, const Vector& x);

/// Exact misclassification rate of the fitted rule under the true
/// Gaussian population, averaged over both classes with equal priors:
///   1/2 Phi(-Psi_1) + 1/2 Phi(-Psi_2),
///   Psi_1 = (mu1 - mu_hat)^T v / sqrt(v^T Sigma v),
///   Psi_2 = -(mu2 - mu_hat)^T v / sqrt(v^T Sigma v),  v = D_hat^{-1/2} eta.
/// A zero eta degenerates to random guessing and reports 0.5.
double theoretical_error(const LinearClassifier& c, const TruePopulation& pop);

/// Fraction of misclassified rows.
double empirical_error(const LinearClassifier& c, const LabeledDataset& test);

/// Error of the optimal rule, Phi(-sqrt(d^T Sigma^{-1} d) / 2).
double optimal_error(const TruePopulation& pop);

} // namespace ebir
