#include "ebir/model_io.hpp"

#include <fstream>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

namespace ebir {

namespace {

using nlohmann::json;

json vector_to_json(const Vector& v) {
  json arr = json::array();
  for (Index i = 0; i < v.size(); ++i) arr.push_back(v[i]);
  return arr;
}

Vector vector_from_json(const json& arr, const char* field) {
  if (!arr.is_array()) {
    throw std::invalid_argument(std::string("model: '") + field +
                                "' must be an array");
  }
  Vector v(static_cast<Index>(arr.size()));
  for (std::size_t i = 0; i < arr.size(); ++i) {
    v[static_cast<Index>(i)] = arr[i].get<double>();
  }
  return v;
}

const json& require(const json& obj, const char* key) {
  const auto it = obj.find(key);
  if (it == obj.end()) {
    throw std::invalid_argument(std::string("model: missing key '") + key + "'");
  }
  return *it;
}

} // namespace

ModelFile make_model(const SummaryStats& stats, DiscretePrior prior,
                     EtaEstimate eta, const VBConfig& vb, int folds) {
  ModelFile model;
  model.n1 = stats.n1;
  model.n2 = stats.n2;
  model.mu_hat = stats.mu_hat;
  model.var_hat = stats.var_hat;
  model.prior = std::move(prior);
  model.eta = std::move(eta);
  model.vb = vb;
  model.folds = folds;
  return model;
}

LinearClassifier classifier_from_model(const ModelFile& model) {
  LinearClassifier c;
  c.mu_hat = model.mu_hat;
  c.inv_sqrt_var = model.var_hat.array().rsqrt();
  c.eta = model.eta;
  return c;
}

std::string model_to_json(const ModelFile& model) {
  json doc;
  doc["format_version"] = model.version;
  doc["stats"] = {{"n1", model.n1},
                  {"n2", model.n2},
                  {"mu_hat", vector_to_json(model.mu_hat)},
                  {"var_hat", vector_to_json(model.var_hat)}};
  doc["prior"] = {{"atoms", model.prior.atoms},
                  {"weights", model.prior.weights}};
  json eta = {{"method", method_name(model.eta.method)},
              {"values", vector_to_json(model.eta.values)},
              {"zero_weight", vector_to_json(model.eta.zero_weight)}};
  if (model.eta.kappa) eta["kappa"] = *model.eta.kappa;
  doc["eta"] = std::move(eta);
  doc["vb"] = {{"alpha", model.vb.alpha}, {"sigma2", model.vb.sigma2},
               {"w", model.vb.w},         {"T", model.vb.T},
               {"tol", model.vb.tol},     {"max_iter", model.vb.max_iter},
               {"seed", model.vb.seed}};
  doc["folds"] = model.folds;
  return doc.dump(2) + "\n";
}

ModelFile model_from_json(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw std::invalid_argument(std::string("model: invalid JSON: ") + e.what());
  }

  ModelFile model;
  model.version = require(doc, "format_version").get<int>();
  if (model.version != ModelFile::kFormatVersion) {
    throw std::invalid_argument("model: unsupported format_version " +
                                std::to_string(model.version));
  }
  const json& stats = require(doc, "stats");
  model.n1 = require(stats, "n1").get<Index>();
  model.n2 = require(stats, "n2").get<Index>();
  model.mu_hat = vector_from_json(require(stats, "mu_hat"), "mu_hat");
  model.var_hat = vector_from_json(require(stats, "var_hat"), "var_hat");
  if (model.var_hat.size() != model.mu_hat.size()) {
    throw std::invalid_argument("model: mu_hat/var_hat length mismatch");
  }
  if ((model.var_hat.array() <= 0.0).any()) {
    throw std::invalid_argument("model: var_hat entries must be positive");
  }

  const json& prior = require(doc, "prior");
  model.prior.atoms = require(prior, "atoms").get<std::vector<double>>();
  model.prior.weights = require(prior, "weights").get<std::vector<double>>();
  validate(model.prior);

  const json& eta = require(doc, "eta");
  const std::string method = require(eta, "method").get<std::string>();
  const auto parsed = method_from_name(method);
  if (!parsed) {
    throw std::invalid_argument("model: unknown eta method '" + method + "'");
  }
  model.eta.method = *parsed;
  model.eta.values = vector_from_json(require(eta, "values"), "values");
  model.eta.zero_weight =
      vector_from_json(require(eta, "zero_weight"), "zero_weight");
  if (eta.contains("kappa")) model.eta.kappa = eta["kappa"].get<double>();
  if (model.eta.values.size() != model.mu_hat.size() ||
      model.eta.zero_weight.size() != model.mu_hat.size()) {
    throw std::invalid_argument("model: eta length mismatch");
  }

  const json& vb = require(doc, "vb");
  model.vb.alpha = require(vb, "alpha").get<double>();
  model.vb.sigma2 = require(vb, "sigma2").get<double>();
  model.vb.w = require(vb, "w").get<double>();
  model.vb.T = require(vb, "T").get<Index>();
  model.vb.tol = require(vb, "tol").get<double>();
  model.vb.max_iter = require(vb, "max_iter").get<int>();
  model.vb.seed = require(vb, "seed").get<std::uint64_t>();

  model.folds = require(doc, "folds").get<int>();
  return model;
}

void save_model(const std::string& path, const ModelFile& model) {
  std::ofstream out(path);
  if (!out) {
    throw std::runtime_error("cannot write model file: " + path);
  }
  out << model_to_json(model);
  if (!out) {
    throw std::runtime_error("failed while writing model file: " + path);
  }
}

ModelFile load_model(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    throw std::invalid_argument("cannot open model file: " + path);
  }
  std::stringstream ss;
  ss << in.rdbuf();
  return model_from_json(ss.str());
}

} // namespace ebir
