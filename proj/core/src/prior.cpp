#include "ebir/prior.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

#include "ebir/parallel.hpp"
#include "ebir/rng.hpp"

namespace ebir {

namespace {
constexpr double kAtomMergeTol = 1e-9;
}

DiscretePrior make_prior(std::vector<std::pair<double, double>> atom_weights) {
  double zero_weight = 0.0;
  std::vector<std::pair<double, double>> rest;
  rest.reserve(atom_weights.size());
  for (const auto& [atom, weight] : atom_weights) {
    if (weight < 0.0) {
      throw std::invalid_argument("prior: negative atom weight");
    }
    if (std::abs(atom) <= kAtomMergeTol) {
      zero_weight += weight;
    } else {
      rest.emplace_back(atom, weight);
    }
  }
  std::sort(rest.begin(), rest.end());

  DiscretePrior prior;
  prior.atoms.push_back(0.0);
  prior.weights.push_back(zero_weight);
  for (const auto& [atom, weight] : rest) {
    if (prior.atoms.size() > 1 && atom - prior.atoms.back() <= kAtomMergeTol) {
      prior.weights.back() += weight;
    } else {
      prior.atoms.push_back(atom);
      prior.weights.push_back(weight);
    }
  }

  const double total =
      std::accumulate(prior.weights.begin(), prior.weights.end(), 0.0);
  if (std::abs(total - 1.0) > 1e-8) {
    throw std::invalid_argument("prior: weights sum to " + std::to_string(total) +
                                ", expected 1");
  }
  for (double& w : prior.weights) w /= total;
  return prior;
}

void validate(const DiscretePrior& prior) {
  if (prior.atoms.empty() || prior.atoms.size() != prior.weights.size()) {
    throw std::invalid_argument("prior: atom/weight size mismatch");
  }
  if (prior.atoms[0] != 0.0) {
    throw std::invalid_argument("prior: index-0 atom must be exactly 0");
  }
  double total = 0.0;
  for (std::size_t i = 0; i < prior.weights.size(); ++i) {
    if (prior.weights[i] < 0.0) {
      throw std::invalid_argument("prior: negative weight");
    }
    total += prior.weights[i];
    if (i > 1 && prior.atoms[i] - prior.atoms[i - 1] <= kAtomMergeTol) {
      throw std::invalid_argument("prior: duplicate nonzero atoms");
    }
  }
  if (std::abs(total - 1.0) > 1e-10) {
    throw std::invalid_argument("prior: weights sum to " + std::to_string(total));
  }
}

std::string method_name(EtaMethod m) {
  switch (m) {
    case EtaMethod::DP: return "DP";
    case EtaMethod::SparseDP: return "SparseDP";
    case EtaMethod::HardThresh: return "HardThresh";
    case EtaMethod::SampleMean: return "SampleMean";
    case EtaMethod::Oracle: return "Oracle";
  }
  return "?";
}

std::optional<EtaMethod> method_from_name(const std::string& name) {
  if (name == "DP" || name == "dp") return EtaMethod::DP;
  if (name == "SparseDP" || name == "sdp" || name == "sparsedp")
    return EtaMethod::SparseDP;
  if (name == "HardThresh" || name == "ht" || name == "hardthresh")
    return EtaMethod::HardThresh;
  if (name == "SampleMean" || name == "ir" || name == "samplemean" ||
      name == "IR")
    return EtaMethod::SampleMean;
  if (name == "Oracle" || name == "oracle") return EtaMethod::Oracle;
  return std::nullopt;
}

DiscretePrior map_prior(const VBState& state) {
  const Index p = state.phi.rows();
  const Index T = state.phi.cols();

  // Per coordinate the approximate posterior over point values puts
  // sum_t phi_kt p_t on 0 and phi_kt (1-p_t) on m_t. MAP-assign each
  // coordinate; ties go to the zero atom.
  std::vector<Index> count(static_cast<std::size_t>(T), 0);
  Index zero_count = 0;
  for (Index k = 0; k < p; ++k) {
    double zero_mass = 0.0;
    double best_mass = -1.0;
    Index best_t = -1;
    for (Index t = 0; t < T; ++t) {
      const double slab = state.phi(k, t) * (1.0 - state.pspike[t]);
      zero_mass += state.phi(k, t) * state.pspike[t];
      if (slab > best_mass) {
        best_mass = slab;
        best_t = t;
      }
    }
    if (best_mass > zero_mass) {
      ++count[static_cast<std::size_t>(best_t)];
    } else {
      ++zero_count;
    }
  }

  std::vector<std::pair<double, double>> atom_weights;
  atom_weights.emplace_back(0.0, static_cast<double>(zero_count) /
                                     static_cast<double>(p));
  for (Index t = 0; t < T; ++t) {
    if (count[static_cast<std::size_t>(t)] > 0) {
      atom_weights.emplace_back(
          state.m[t], static_cast<double>(count[static_cast<std::size_t>(t)]) /
                          static_cast<double>(p));
    }
  }
  return make_prior(std::move(atom_weights));
}

DiscretePrior average_priors(const std::vector<DiscretePrior>& priors) {
  if (priors.empty()) {
    throw std::invalid_argument("average_priors: empty list");
  }
  const double inv = 1.0 / static_cast<double>(priors.size());
  std::vector<std::pair<double, double>> atom_weights;
  for (const auto& prior : priors) {
    for (std::size_t i = 0; i < prior.atoms.size(); ++i) {
      atom_weights.emplace_back(prior.atoms[i], prior.weights[i] * inv);
    }
  }
  return make_prior(std::move(atom_weights));
}

std::vector<std::vector<Index>> partition_folds(Index p, int folds,
                                                std::uint64_t seed) {
  if (folds < 1 || static_cast<Index>(folds) > p) {
    throw std::invalid_argument("partition_folds: need 1 <= folds <= p");
  }
  std::vector<Index> order(static_cast<std::size_t>(p));
  std::iota(order.begin(), order.end(), Index{0});
  auto eng = make_engine(derive_seed(seed, 0x706172 /* "par" */));
  for (Index i = p - 1; i > 0; --i) {
    const auto j = static_cast<Index>(
        uniform_below(eng, static_cast<std::uint64_t>(i + 1)));
    std::swap(order[static_cast<std::size_t>(i)],
              order[static_cast<std::size_t>(j)]);
  }

  const Index base = p / folds;
  const Index extra = p % folds;  // first `extra` folds get one more
  std::vector<std::vector<Index>> out(static_cast<std::size_t>(folds));
  std::size_t pos = 0;
  for (int f = 0; f < folds; ++f) {
    const Index size = base + (static_cast<Index>(f) < extra ? 1 : 0);
    auto& fold = out[static_cast<std::size_t>(f)];
    fold.assign(order.begin() + static_cast<std::ptrdiff_t>(pos),
                order.begin() + static_cast<std::ptrdiff_t>(pos + size));
    pos += static_cast<std::size_t>(size);
  }
  return out;
}

DiscretePrior batch_fit(const Vector& y, int folds, const VBConfig& cfg,
                        unsigned workers) {
  if (folds < 1 || static_cast<Index>(folds) > y.size()) {
    throw std::invalid_argument("batch_fit: need 1 <= folds <= p");
  }
  if (folds == 1) {
    return map_prior(vb_fit(y, cfg));
  }

  const auto assignment = partition_folds(y.size(), folds, cfg.seed);
  std::vector<DiscretePrior> priors(static_cast<std::size_t>(folds));
  parallel_for(static_cast<std::size_t>(folds), workers, [&](std::size_t f) {
    const auto& idx = assignment[f];
    Vector sub(static_cast<Index>(idx.size()));
    for (std::size_t i = 0; i < idx.size(); ++i) {
      sub[static_cast<Index>(i)] = y[idx[i]];
    }
    VBConfig fold_cfg = cfg;
    fold_cfg.seed = derive_seed(cfg.seed, f);
    priors[f] = map_prior(vb_fit(sub, fold_cfg));
  });
  return average_priors(priors);
}

Vector posterior_zero_weights(const DiscretePrior& prior, const Vector& y) {
  validate(prior);
  const Index p = y.size();
  Vector out(p);
  std::vector<double> logw(prior.size());
  for (std::size_t t = 0; t < prior.size(); ++t) {
    logw[t] = prior.weights[t] > 0.0 ? std::log(prior.weights[t])
                                     : -std::numeric_limits<double>::infinity();
  }
  std::vector<double> terms(prior.size());
  for (Index k = 0; k < p; ++k) {
    double max_term = -std::numeric_limits<double>::infinity();
    for (std::size_t t = 0; t < prior.size(); ++t) {
      const double d = y[k] - prior.atoms[t];
      terms[t] = logw[t] - 0.5 * d * d;
      max_term = std::max(max_term, terms[t]);
    }
    double denom = 0.0;
    for (std::size_t t = 0; t < prior.size(); ++t) {
      if (std::isfinite(terms[t])) denom += std::exp(terms[t] - max_term);
    }
    out[k] = std::isfinite(terms[0])
                 ? std::exp(terms[0] - max_term) / denom
                 : 0.0;
  }
  return out;
}

EtaEstimate posterior_mean_estimate(const DiscretePrior& prior,
                                    const Vector& y) {
  validate(prior);
  const Index p = y.size();
  EtaEstimate est;
  est.method = EtaMethod::DP;
  est.values.resize(p);
  est.zero_weight.resize(p);

  std::vector<double> logw(prior.size());
  for (std::size_t t = 0; t < prior.size(); ++t) {
    logw[t] = prior.weights[t] > 0.0 ? std::log(prior.weights[t])
                                     : -std::numeric_limits<double>::infinity();
  }
  std::vector<double> terms(prior.size());
  for (Index k = 0; k < p; ++k) {
    double max_term = -std::numeric_limits<double>::infinity();
    for (std::size_t t = 0; t < prior.size(); ++t) {
      const double d = y[k] - prior.atoms[t];
      terms[t] = logw[t] - 0.5 * d * d;
      max_term = std::max(max_term, terms[t]);
    }
    double denom = 0.0;
    double mean = 0.0;
    for (std::size_t t = 0; t < prior.size(); ++t) {
      if (!std::isfinite(terms[t])) continue;
      const double wt = std::exp(terms[t] - max_term);
      denom += wt;
      mean += wt * prior.atoms[t];
    }
    est.values[k] = mean / denom;
    est.zero_weight[k] =
        std::isfinite(terms[0]) ? std::exp(terms[0] - max_term) / denom : 0.0;
  }
  return est;
}

EtaEstimate sparse_threshold(const EtaEstimate& dp, double kappa) {
  if (dp.method != EtaMethod::DP) {
    throw std::invalid_argument("sparse_threshold: input must be a DP estimate");
  }
  if (!(kappa > 0.0 && kappa < 1.0)) {
    throw std::invalid_argument("sparse_threshold: kappa must lie in (0,1)");
  }
  EtaEstimate est = dp;
  est.method = EtaMethod::SparseDP;
  est.kappa = kappa;
  for (Index k = 0; k < est.values.size(); ++k) {
    if (est.zero_weight[k] > kappa) est.values[k] = 0.0;
  }
  return est;
}

EtaEstimate hard_threshold_estimate(const Vector& y, const Vector& zero_weight,
                                    double kappa) {
  if (y.size() != zero_weight.size()) {
    throw std::invalid_argument("hard_threshold_estimate: length mismatch");
  }
  EtaEstimate est;
  est.method = EtaMethod::HardThresh;
  est.kappa = kappa;
  est.zero_weight = zero_weight;
  est.values = Vector::Zero(y.size());
  for (Index k = 0; k < y.size(); ++k) {
    if (zero_weight[k] <= kappa) est.values[k] = y[k];
  }
  return est;
}

EtaEstimate sample_mean_estimate(const Vector& y) {
  EtaEstimate est;
  est.method = EtaMethod::SampleMean;
  est.values = y;
  est.zero_weight = Vector::Zero(y.size());
  return est;
}

EtaEstimate oracle_estimate(const Vector& y, const std::vector<Index>& support) {
  EtaEstimate est;
  est.method = EtaMethod::Oracle;
  est.values = Vector::Zero(y.size());
  est.zero_weight = Vector::Zero(y.size());
  for (const Index k : support) {
    if (k < 0 || k >= y.size()) {
      throw std::invalid_argument("oracle_estimate: support index out of range");
    }
    est.values[k] = y[k];
  }
  return est;
}

} // namespace ebir
