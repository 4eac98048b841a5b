#include "ebir/simulate.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <stdexcept>

#include <Eigen/Cholesky>

#include "ebir/parallel.hpp"
#include "ebir/rng.hpp"

namespace ebir {

namespace {

constexpr std::uint64_t kVbSalt = 0x7662;    // "vb"
constexpr std::uint64_t kTestSalt = 0x7e57;  // test-set stream

Vector build_mean(Index p, const MeanSpec& mean, std::mt19937_64& eng) {
  Vector mu = Vector::Zero(p);
  Index pos = 0;
  for (const auto& block : mean.blocks) {
    if (block.count < 0 || pos + block.count > p) {
      throw std::invalid_argument("mean spec: blocks exceed dimension");
    }
    mu.segment(pos, block.count).setConstant(block.value);
    pos += block.count;
  }
  if (mean.tail == TailMode::GaussianNoise) {
    std::normal_distribution<double> noise(0.0, 0.1);
    for (Index j = pos; j < p; ++j) mu[j] = noise(eng);
  }
  return mu;
}

double laplace_rate2(std::mt19937_64& eng) {
  const double u = uniform01(eng) - 0.5;
  const double mag = std::max(1.0 - 2.0 * std::abs(u), 1e-300);
  const double x = -0.5 * std::log(mag);
  return u < 0.0 ? -x : x;
}

// (chi^2_6 - 6) / sqrt(12): mean 0, variance 1.
double centered_chisq6(std::normal_distribution<double>& normal,
                       std::mt19937_64& eng) {
  double sum = 0.0;
  for (int i = 0; i < 6; ++i) {
    const double z = normal(eng);
    sum += z * z;
  }
  return (sum - 6.0) / std::sqrt(12.0);
}

std::string fmt_num(double x) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%g", x);
  return buf;
}

std::string fmt_full(double x) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", x);
  return buf;
}

} // namespace

TruePopulation make_study1_population(Index p, const MeanSpec& mean, double s2,
                                      std::mt19937_64& eng) {
  TruePopulation pop;
  pop.mu1 = build_mean(p, mean, eng);
  pop.mu2 = Vector::Zero(p);
  pop.cov = Covariance::diagonal(Vector::Constant(p, s2));
  return pop;
}

TruePopulation make_study2_population(Index p, double rho, const MeanSpec& mean,
                                      double s2, std::mt19937_64& eng) {
  TruePopulation pop;
  pop.mu1 = build_mean(p, mean, eng);
  pop.mu2 = Vector::Zero(p);
  pop.cov = Covariance::ar1(rho, s2, p);
  return pop;
}

TruePopulation make_study3_population(Index p, double c, std::mt19937_64& eng) {
  if (p < 3 || p % 3 != 0) {
    throw std::invalid_argument("study 3: p must be divisible by 3");
  }
  if (!(c >= 0.0 && c <= 1.0)) {
    throw std::invalid_argument("study 3: c must lie in [0,1]");
  }
  const Index group = p / 3;

  // Raw loadings a_j ~ U(0,0.4) on the group factor, b_j ~ U(0,0.2) on
  // the shared factor; the error is normalized so Var = 1, which makes
  // Sigma = diag(1/norm^2) + L L^T with the normalized loadings.
  Matrix loadings = Matrix::Zero(p, 4);
  Vector idio(p);
  for (Index j = 0; j < p; ++j) {
    const double a = 0.4 * uniform01(eng);
    const double b = 0.2 * uniform01(eng);
    const double norm = std::sqrt(1.0 + a * a + b * b);
    loadings(j, j / group) = a / norm;
    loadings(j, 3) = b / norm;
    idio[j] = 1.0 / (norm * norm);
  }

  TruePopulation pop;
  pop.mu1 = Vector::Zero(p);
  for (Index j = 0; j < p; ++j) {
    if (uniform01(eng) < c) pop.mu1[j] = laplace_rate2(eng);
  }
  pop.mu2 = Vector::Zero(p);
  pop.cov = Covariance::factor(std::move(loadings), std::move(idio));
  return pop;
}

LabeledDataset sample_population(const TruePopulation& pop, Index n_per_class,
                                 std::mt19937_64& eng) {
  if (n_per_class < 1) {
    throw std::invalid_argument("sample_population: need n_per_class >= 1");
  }
  const Index p = pop.cov.dim();
  const Index n = 2 * n_per_class;
  LabeledDataset data;
  data.features.resize(n, p);
  data.labels.resize(static_cast<std::size_t>(n));
  std::normal_distribution<double> normal(0.0, 1.0);

  Eigen::LLT<Matrix> chol;
  if (pop.cov.kind() == Covariance::Kind::Dense) {
    chol.compute(pop.cov.dense_matrix());
    if (chol.info() != Eigen::Success) {
      throw std::runtime_error("sample_population: covariance not positive definite");
    }
  }
  Vector diag_sd;
  if (pop.cov.kind() == Covariance::Kind::Diagonal) {
    diag_sd = pop.cov.diagonal_elements().array().sqrt();
  }

  for (Index i = 0; i < n; ++i) {
    const bool first_class = i < n_per_class;
    data.labels[static_cast<std::size_t>(i)] = first_class ? 1 : 2;
    const Vector& mu = first_class ? pop.mu1 : pop.mu2;
    auto row = data.features.row(i);

    switch (pop.cov.kind()) {
      case Covariance::Kind::Diagonal: {
        for (Index j = 0; j < p; ++j) {
          row[j] = mu[j] + diag_sd[j] * normal(eng);
        }
        break;
      }
      case Covariance::Kind::Ar1: {
        const double rho = pop.cov.ar1_rho();
        const double s = std::sqrt(pop.cov.ar1_s2());
        const double innov = std::sqrt(1.0 - rho * rho);
        double e = normal(eng);
        row[0] = mu[0] + s * e;
        for (Index j = 1; j < p; ++j) {
          e = rho * e + innov * normal(eng);
          row[j] = mu[j] + s * e;
        }
        break;
      }
      case Covariance::Kind::Factor: {
        const Matrix& loadings = pop.cov.factor_loadings();
        const Vector& idio = pop.cov.factor_idiosyncratic();
        const Index r = loadings.cols();
        Vector factors(r);
        for (Index f = 0; f < r; ++f) {
          factors[f] = centered_chisq6(normal, eng);
        }
        for (Index j = 0; j < p; ++j) {
          row[j] = mu[j] + std::sqrt(idio[j]) * normal(eng) +
                   loadings.row(j).dot(factors);
        }
        break;
      }
      case Covariance::Kind::Dense: {
        Vector z(p);
        for (Index j = 0; j < p; ++j) z[j] = normal(eng);
        row = (mu + chol.matrixL() * z).transpose();
        break;
      }
    }
  }
  return data;
}

GeneratedData gen_study1(Index p, Index n, double delta, Index l,
                         TailMode tail, double s2, std::uint64_t seed) {
  if (l < 0 || l > p) {
    throw std::invalid_argument("study 1: need 0 <= l <= p");
  }
  MeanSpec mean{{{l, delta}}, tail};
  auto eng = make_engine(seed);
  GeneratedData out;
  out.pop = make_study1_population(p, mean, s2, eng);
  out.train = sample_population(out.pop, n, eng);
  return out;
}

GeneratedData gen_study2(Index p, Index n, double rho, const MeanSpec& mean,
                         double s2, std::uint64_t seed) {
  auto eng = make_engine(seed);
  GeneratedData out;
  out.pop = make_study2_population(p, rho, mean, s2, eng);
  out.train = sample_population(out.pop, n, eng);
  return out;
}

GeneratedData gen_study3(Index p, Index n, double c, std::uint64_t seed) {
  auto eng = make_engine(seed);
  GeneratedData out;
  out.pop = make_study3_population(p, c, eng);
  out.train = sample_population(out.pop, n, eng);
  return out;
}

std::string ExperimentConfig::cell_label() const {
  std::string label;
  if (study == 1 || study == 2) {
    if (study == 2) label += "rho=" + fmt_num(rho) + " ";
    label += "(";
    for (std::size_t b = 0; b < mean.blocks.size(); ++b) {
      if (b > 0) label += "+";
      label += fmt_num(mean.blocks[b].value) + "x" +
               std::to_string(mean.blocks[b].count);
    }
    label += ")";
    if (mean.tail == TailMode::GaussianNoise) label += " N-tail";
  } else {
    label = "c=" + fmt_num(c);
  }
  return label;
}

void validate(const ExperimentConfig& cfg) {
  if (cfg.study < 1 || cfg.study > 3) {
    throw std::invalid_argument("experiment: study must be 1, 2, or 3");
  }
  if (cfg.reps < 1) throw std::invalid_argument("experiment: reps must be >= 1");
  if (cfg.p < 1 || cfg.n < 2) {
    throw std::invalid_argument("experiment: need p >= 1 and n >= 2");
  }
  if (cfg.methods.empty()) {
    throw std::invalid_argument("experiment: no methods requested");
  }
  if (cfg.study != 3) {
    if (cfg.mean.signal_count() > cfg.p) {
      throw std::invalid_argument("experiment: signal blocks exceed p");
    }
    if (!(cfg.s2 > 0.0)) throw std::invalid_argument("experiment: s2 must be > 0");
  }
  if (cfg.study == 2 && !(cfg.rho > -1.0 && cfg.rho < 1.0)) {
    throw std::invalid_argument("experiment: rho must lie in (-1,1)");
  }
  if (cfg.study == 3) {
    if (cfg.p % 3 != 0) {
      throw std::invalid_argument("experiment: study 3 needs p divisible by 3");
    }
    if (cfg.test_samples < 2 || cfg.test_samples % 2 != 0) {
      throw std::invalid_argument("experiment: test_samples must be even and >= 2");
    }
  }
  if (!(cfg.kappa > 0.0 && cfg.kappa < 1.0)) {
    throw std::invalid_argument("experiment: kappa must lie in (0,1)");
  }
  if (cfg.folds < 1) throw std::invalid_argument("experiment: folds must be >= 1");
  validate(cfg.vb);
}

ResultTable run_experiment(const ExperimentConfig& cfg) {
  validate(cfg);
  const bool need_vb =
      std::any_of(cfg.methods.begin(), cfg.methods.end(), [](EtaMethod m) {
        return m == EtaMethod::DP || m == EtaMethod::SparseDP ||
               m == EtaMethod::HardThresh;
      });

  const std::size_t n_methods = cfg.methods.size();
  std::vector<std::vector<double>> errors(
      n_methods, std::vector<double>(static_cast<std::size_t>(cfg.reps), 0.0));

  parallel_for(static_cast<std::size_t>(cfg.reps), cfg.workers,
               [&](std::size_t r) {
    const std::uint64_t rep_seed = derive_seed(cfg.seed, r);
    auto eng = make_engine(rep_seed);

    TruePopulation pop;
    switch (cfg.study) {
      case 1: pop = make_study1_population(cfg.p, cfg.mean, cfg.s2, eng); break;
      case 2:
        pop = make_study2_population(cfg.p, cfg.rho, cfg.mean, cfg.s2, eng);
        break;
      default: pop = make_study3_population(cfg.p, cfg.c, eng); break;
    }
    const LabeledDataset train = sample_population(pop, cfg.n, eng);
    const SummaryStats stats = summarize(train);

    EtaEstimate dp_est;
    if (need_vb) {
      VBConfig vb = cfg.vb;
      vb.seed = derive_seed(rep_seed, kVbSalt);
      const DiscretePrior prior = batch_fit(stats.y, cfg.folds, vb);
      dp_est = posterior_mean_estimate(prior, stats.y);
    }

    LabeledDataset test;
    if (cfg.study == 3) {
      auto test_eng = make_engine(derive_seed(rep_seed, kTestSalt));
      test = sample_population(pop, cfg.test_samples / 2, test_eng);
    }

    for (std::size_t mi = 0; mi < n_methods; ++mi) {
      EtaEstimate eta;
      switch (cfg.methods[mi]) {
        case EtaMethod::DP: eta = dp_est; break;
        case EtaMethod::SparseDP: eta = sparse_threshold(dp_est, cfg.kappa); break;
        case EtaMethod::HardThresh:
          eta = hard_threshold_estimate(stats.y, dp_est.zero_weight, cfg.kappa);
          break;
        case EtaMethod::SampleMean: eta = sample_mean_estimate(stats.y); break;
        case EtaMethod::Oracle:
          eta = oracle_estimate(stats.y, pop.nonzero_support());
          break;
      }
      const LinearClassifier clf = build_classifier(stats, std::move(eta));
      errors[mi][r] = cfg.study == 3 ? empirical_error(clf, test)
                                     : theoretical_error(clf, pop);
    }
  });

  ResultTable table;
  table.seed = cfg.seed;
  const std::string cell = cfg.cell_label();
  for (std::size_t mi = 0; mi < n_methods; ++mi) {
    ResultRow row;
    row.cell = cell;
    row.method = cfg.methods[mi];
    row.per_rep = errors[mi];
    row.reps = cfg.reps;
    double sum = 0.0;
    for (const double e : row.per_rep) sum += e;
    row.mean_error = sum / static_cast<double>(cfg.reps);
    table.rows.push_back(std::move(row));
  }
  return table;
}

std::string table_to_csv(const ResultTable& table) {
  std::string out = "cell,method,mean_error,reps,seed\n";
  for (const auto& row : table.rows) {
    out += "\"" + row.cell + "\"," + method_name(row.method) + "," +
           fmt_full(row.mean_error) + "," + std::to_string(row.reps) + "," +
           std::to_string(table.seed) + "\n";
  }
  return out;
}

std::string table_to_long_csv(const ResultTable& table) {
  std::string out = "cell,method,rep,error,seed\n";
  for (const auto& row : table.rows) {
    for (std::size_t r = 0; r < row.per_rep.size(); ++r) {
      out += "\"" + row.cell + "\"," + method_name(row.method) + "," +
             std::to_string(r) + "," + fmt_full(row.per_rep[r]) + "," +
             std::to_string(table.seed) + "\n";
    }
  }
  return out;
}

std::string format_table(const ResultTable& table, bool markdown) {
  // Collect cells and methods in first-appearance order.
  std::vector<std::string> cells;
  std::vector<EtaMethod> methods;
  for (const auto& row : table.rows) {
    if (std::find(cells.begin(), cells.end(), row.cell) == cells.end()) {
      cells.push_back(row.cell);
    }
    if (std::find(methods.begin(), methods.end(), row.method) == methods.end()) {
      methods.push_back(row.method);
    }
  }
  auto lookup = [&](const std::string& cell, EtaMethod m) -> std::string {
    for (const auto& row : table.rows) {
      if (row.cell == cell && row.method == m) {
        char buf[32];
        std::snprintf(buf, sizeof(buf), "%.4f", row.mean_error);
        return buf;
      }
    }
    return "-";
  };
  auto column_name = [](EtaMethod m) {
    return m == EtaMethod::SampleMean ? std::string("IR") : method_name(m);
  };

  std::size_t cell_width = 4;
  for (const auto& c : cells) cell_width = std::max(cell_width, c.size());

  std::string out;
  auto pad = [](const std::string& s, std::size_t w) {
    return s + std::string(w > s.size() ? w - s.size() : 0, ' ');
  };
  if (markdown) {
    out += "| " + pad("cell", cell_width) + " |";
    for (const auto m : methods) out += " " + column_name(m) + " |";
    out += "\n|" + std::string(cell_width + 2, '-') + "|";
    for (const auto m : methods) {
      out += std::string(column_name(m).size() + 2, '-') + "|";
    }
    out += "\n";
    for (const auto& c : cells) {
      out += "| " + pad(c, cell_width) + " |";
      for (const auto m : methods) {
        out += " " + pad(lookup(c, m), column_name(m).size()) + " |";
      }
      out += "\n";
    }
  } else {
    out += pad("cell", cell_width + 2);
    for (const auto m : methods) out += pad(column_name(m), 12);
    out += "\n";
    for (const auto& c : cells) {
      out += pad(c, cell_width + 2);
      for (const auto m : methods) out += pad(lookup(c, m), 12);
      out += "\n";
    }
  }
  return out;
}

} // namespace ebir
