#pragma once

#include <optional>
#include <string>
#include <vector>

#include "ebir/types.hpp"
#include "ebir/vb.hpp"

namespace ebir {

/// Discrete estimated prior: atom locations with weights summing to 1.
/// The zero atom is always present at index 0 (possibly with weight 0);
/// nonzero atoms are distinct (merged at 1e-9) and sorted ascending.
struct DiscretePrior {
  std::vector<double> atoms;
  std::vector<double> weights;

  std::size_t size() const { return atoms.size(); }
};

/// Builds a canonical DiscretePrior from (atom, weight) pairs: inserts
/// the zero atom if absent, merges atoms closer than 1e-9, sorts the
/// nonzero atoms. Weights must be nonnegative and sum to 1 within 1e-8
/// (renormalized exactly afterwards).
DiscretePrior make_prior(std::vector<std::pair<double, double>> atom_weights);

void validate(const DiscretePrior& prior);

enum class EtaMethod { DP, SparseDP, HardThresh, SampleMean, Oracle };

std::string method_name(EtaMethod m);
std::optional<EtaMethod> method_from_name(const std::string& name);

/// Estimated normalized mean difference plus the per-coordinate
/// posterior weight at zero it was derived from.
struct EtaEstimate {
  Vector values;
  Vector zero_weight;  // entries in [0,1]
  EtaMethod method = EtaMethod::SampleMean;
  std::optional<double> kappa;
};

/// MAP discrete prior from a fitted variational state: each coordinate
/// is assigned to its most probable posterior point value (ties go to
/// zero) and atom weights are the assignment frequencies.
DiscretePrior map_prior(const VBState& state);

/// Pointwise average of discrete priors, sum_i G_i / I. Throws on an
/// empty list.
DiscretePrior average_priors(const std::vector<DiscretePrior>& priors);

/// Seeded balanced partition of {0..p-1} into I folds (sizes differ by
/// at most one; the first p mod I folds are the larger ones).
std::vector<std::vector<Index>> partition_folds(Index p, int folds,
                                                std::uint64_t seed);

/// Batch refinement: partition the coordinates, fit the mixture per
/// fold (fold seeds derive from cfg.seed), average the per-fold MAP
/// priors. folds == 1 is exactly map_prior(vb_fit(y, cfg)). Folds may
/// be fitted concurrently; the result is identical for any worker
/// count. Throws if folds < 1 or folds > p.
DiscretePrior batch_fit(const Vector& y, int folds, const VBConfig& cfg,
                        unsigned workers = 1);

/// Posterior weight at the zero atom for each coordinate,
///   w_k0 = w0 exp(-y_k^2/2) / sum_t wt exp(-(y_k - m_t)^2/2),
/// evaluated through log-sum-exp.
Vector posterior_zero_weights(const DiscretePrior& prior, const Vector& y);

/// Posterior-mean estimate under the discrete prior (method DP).
EtaEstimate posterior_mean_estimate(const DiscretePrior& prior, const Vector& y);

/// Zeroes every coordinate whose posterior weight at zero strictly
/// exceeds kappa (method SparseDP). kappa must lie in (0,1).
EtaEstimate sparse_threshold(const EtaEstimate& dp, double kappa);

/// Keeps the raw y_k on the selected support, no shrinkage
/// (method HardThresh): values_k = y_k if zero_weight_k <= kappa else 0.
EtaEstimate hard_threshold_estimate(const Vector& y, const Vector& zero_weight,
                                    double kappa);

/// values = y (the plain independence rule input).
EtaEstimate sample_mean_estimate(const Vector& y);

/// values_k = y_k on the given support, 0 elsewhere. Indices are
/// 0-based; out-of-range indices throw.
EtaEstimate oracle_estimate(const Vector& y, const std::vector<Index>& support);

} // namespace ebir
