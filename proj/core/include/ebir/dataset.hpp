#pragma once

#include <string>
#include <vector>

#include "ebir/types.hpp"

namespace ebir {

/// Two-class training data. Rows are samples, columns are features;
/// labels take values 1 and 2 only.
struct LabeledDataset {
  Matrix features;          // n_samples x p
  std::vector<int> labels;  // one entry per row, in {1, 2}

  Index n_samples() const { return features.rows(); }
  Index n_features() const { return features.cols(); }
};

/// Throws std::invalid_argument if the dataset violates its contract:
/// finite features, labels in {1,2}, at least two samples per class.
void validate(const LabeledDataset& data);

/// Per-feature training summaries and the normalized mean-difference
/// sequence the shrinkage estimators operate on.
struct SummaryStats {
  Index p = 0;
  Index n1 = 0, n2 = 0;
  Vector mu1_hat;   // class-1 sample means
  Vector mu2_hat;   // class-2 sample means
  Vector mu_hat;    // midpoint (mu1_hat + mu2_hat) / 2
  Vector d_hat;     // mu1_hat - mu2_hat
  Vector var_hat;   // pooled within-class variances, denominator n1+n2-2
  Vector y;         // scale * d_hat / sqrt(var_hat)
  double scale = 0; // sqrt(n1*n2 / (n1+n2)); sqrt(n/2) for equal sizes
};

/// Computes SummaryStats from labeled data. Throws std::invalid_argument
/// on a class with fewer than 2 samples or a feature column with zero
/// pooled variance (the offending column index is reported; columns are
/// never dropped silently).
SummaryStats summarize(const LabeledDataset& data);

/// Parses a comma-separated table with a header row into a dataset.
/// One column (named `label_column`) holds the class tag, every other
/// column must be numeric. Errors report the offending file line and
/// column name.
LabeledDataset load_dataset(const std::string& path,
                            const std::string& label_column);

/// Header-plus-numeric-rows CSV without a label column (prediction
/// input). Returns the column names and the value matrix.
struct NumericTable {
  std::vector<std::string> columns;
  Matrix values;
};
NumericTable load_table(const std::string& path);

} // namespace ebir
