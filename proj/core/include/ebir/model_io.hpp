#pragma once

#include <iosfwd>
#include <string>

#include "ebir/classifier.hpp"
#include "ebir/dataset.hpp"
#include "ebir/prior.hpp"
#include "ebir/vb.hpp"

namespace ebir {

/// Serialized model: everything needed to rebuild the classifier plus
/// the fitted prior and the configuration that produced it. Stored as
/// JSON; numeric round trips are lossless.
struct ModelFile {
  static constexpr int kFormatVersion = 1;

  int version = kFormatVersion;
  Index n1 = 0, n2 = 0;
  Vector mu_hat;
  Vector var_hat;
  DiscretePrior prior;
  EtaEstimate eta;
  VBConfig vb;
  int folds = 1;
};

ModelFile make_model(const SummaryStats& stats, DiscretePrior prior,
                     EtaEstimate eta, const VBConfig& vb, int folds);

LinearClassifier classifier_from_model(const ModelFile& model);

std::string model_to_json(const ModelFile& model);
ModelFile model_from_json(const std::string& text);

void save_model(const std::string& path, const ModelFile& model);
ModelFile load_model(const std::string& path);

} // namespace ebir
