#include "ebir/dataset.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace ebir {

void validate(const LabeledDataset& data) {
  if (data.features.rows() != static_cast<Index>(data.labels.size())) {
    throw std::invalid_argument("dataset: label count does not match row count");
  }
  if (!data.features.allFinite()) {
    throw std::invalid_argument("dataset: features contain non-finite values");
  }
  Index n1 = 0, n2 = 0;
  for (std::size_t i = 0; i < data.labels.size(); ++i) {
    const int lab = data.labels[i];
    if (lab == 1) {
      ++n1;
    } else if (lab == 2) {
      ++n2;
    } else {
      throw std::invalid_argument("dataset: row " + std::to_string(i) +
                                  " has label " + std::to_string(lab) +
                                  ", expected 1 or 2");
    }
  }
  if (n1 < 2 || n2 < 2) {
    throw std::invalid_argument("dataset: each class needs at least 2 samples (got " +
                                std::to_string(n1) + " and " + std::to_string(n2) + ")");
  }
}

SummaryStats summarize(const LabeledDataset& data) {
  validate(data);
  const Index n = data.n_samples();
  const Index p = data.n_features();

  SummaryStats s;
  s.p = p;
  s.mu1_hat = Vector::Zero(p);
  s.mu2_hat = Vector::Zero(p);
  for (Index i = 0; i < n; ++i) {
    if (data.labels[static_cast<std::size_t>(i)] == 1) {
      s.mu1_hat += data.features.row(i).transpose();
      ++s.n1;
    } else {
      s.mu2_hat += data.features.row(i).transpose();
      ++s.n2;
    }
  }
  s.mu1_hat /= static_cast<double>(s.n1);
  s.mu2_hat /= static_cast<double>(s.n2);
  s.mu_hat = 0.5 * (s.mu1_hat + s.mu2_hat);
  s.d_hat = s.mu1_hat - s.mu2_hat;

  // Pooled within-class sum of squares over n1 + n2 - 2.
  Vector ss = Vector::Zero(p);
  for (Index i = 0; i < n; ++i) {
    const Vector& mean =
        data.labels[static_cast<std::size_t>(i)] == 1 ? s.mu1_hat : s.mu2_hat;
    ss += (data.features.row(i).transpose() - mean).array().square().matrix();
  }
  s.var_hat = ss / static_cast<double>(s.n1 + s.n2 - 2);

  for (Index j = 0; j < p; ++j) {
    if (!(s.var_hat[j] > 0.0)) {
      throw std::invalid_argument(
          "summarize: feature column " + std::to_string(j) +
          " has zero pooled variance (constant within classes)");
    }
  }

  const double n1 = static_cast<double>(s.n1);
  const double n2 = static_cast<double>(s.n2);
  s.scale = std::sqrt(n1 * n2 / (n1 + n2));
  s.y = s.scale * (s.d_hat.array() / s.var_hat.array().sqrt()).matrix();
  return s;
}

namespace {

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> out;
  std::string field;
  std::stringstream ss(line);
  while (std::getline(ss, field, ',')) {
    // trim surrounding whitespace
    const auto b = field.find_first_not_of(" \t\r");
    const auto e = field.find_last_not_of(" \t\r");
    out.push_back(b == std::string::npos ? std::string()
                                         : field.substr(b, e - b + 1));
  }
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

double parse_number(const std::string& field, std::size_t line_no,
                    const std::string& column) {
  double value = 0.0;
  const char* first = field.data();
  const char* last = field.data() + field.size();
  const auto [ptr, ec] = std::from_chars(first, last, value);
  if (ec != std::errc() || ptr != last || field.empty()) {
    throw std::invalid_argument("csv line " + std::to_string(line_no) +
                                ", column '" + column +
                                "': not a number: '" + field + "'");
  }
  return value;
}

NumericTable load_rows(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    throw std::invalid_argument("cannot open file: " + path);
  }
  std::string line;
  if (!std::getline(in, line)) {
    throw std::invalid_argument("empty file: " + path);
  }
  NumericTable table;
  table.columns = split_csv_line(line);
  if (table.columns.empty()) {
    throw std::invalid_argument("header row has no columns: " + path);
  }
  const std::size_t width = table.columns.size();

  std::vector<double> buffer;
  std::size_t rows = 0;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty() || line == "\r") continue;
    const auto fields = split_csv_line(line);
    if (fields.size() != width) {
      throw std::invalid_argument("csv line " + std::to_string(line_no) +
                                  ": expected " + std::to_string(width) +
                                  " fields, got " + std::to_string(fields.size()));
    }
    for (std::size_t c = 0; c < width; ++c) {
      buffer.push_back(parse_number(fields[c], line_no, table.columns[c]));
    }
    ++rows;
  }
  if (rows == 0) {
    throw std::invalid_argument("no data rows in: " + path);
  }
  table.values.resize(static_cast<Index>(rows), static_cast<Index>(width));
  for (std::size_t r = 0; r < rows; ++r) {
    for (std::size_t c = 0; c < width; ++c) {
      table.values(static_cast<Index>(r), static_cast<Index>(c)) =
          buffer[r * width + c];
    }
  }
  return table;
}

} // namespace

NumericTable load_table(const std::string& path) { return load_rows(path); }

LabeledDataset load_dataset(const std::string& path,
                            const std::string& label_column) {
  const NumericTable table = load_rows(path);
  const auto it =
      std::find(table.columns.begin(), table.columns.end(), label_column);
  if (it == table.columns.end()) {
    throw std::invalid_argument("label column '" + label_column +
                                "' not found in " + path);
  }
  const Index label_idx =
      static_cast<Index>(it - table.columns.begin());

  LabeledDataset data;
  const Index rows = table.values.rows();
  const Index cols = table.values.cols();
  data.features.resize(rows, cols - 1);
  data.labels.resize(static_cast<std::size_t>(rows));
  for (Index r = 0; r < rows; ++r) {
    const double raw = table.values(r, label_idx);
    const int lab = static_cast<int>(raw);
    if ((lab != 1 && lab != 2) || static_cast<double>(lab) != raw) {
      throw std::invalid_argument("csv data row " + std::to_string(r + 2) +
                                  ": label must be 1 or 2, got " +
                                  std::to_string(raw));
    }
    data.labels[static_cast<std::size_t>(r)] = lab;
    Index out = 0;
    for (Index c = 0; c < cols; ++c) {
      if (c == label_idx) continue;
      data.features(r, out++) = table.values(r, c);
    }
  }
  validate(data);
  return data;
}

} // namespace ebir
