#include "onoma/correction.hpp"

#include <cmath>
#include <istream>
#include <sstream>

#include "onoma/error.hpp"
#include "onoma/io.hpp"
#include "onoma/text.hpp"

namespace onoma::correction {

double ConfusionCounts::total() const {
  double t = 0.0;
  for (const auto& row : matrix) {
    for (double c : row) t += c;
  }
  return t;
}

std::vector<double> ConfusionCounts::column_sums() const {
  std::vector<double> sums(size(), 0.0);
  for (const auto& row : matrix) {
    for (std::size_t j = 0; j < row.size(); ++j) sums[j] += row[j];
  }
  return sums;
}

std::vector<double> ConfusionCounts::row_sums() const {
  std::vector<double> sums;
  sums.reserve(size());
  for (const auto& row : matrix) {
    double s = 0.0;
    for (double c : row) s += c;
    sums.push_back(s);
  }
  return sums;
}

void ConfusionCounts::validate() const {
  if (regions.empty()) throw InputError("confusion matrix has no regions");
  if (matrix.size() != regions.size()) throw InputError("confusion matrix is not square");
  for (const auto& row : matrix) {
    if (row.size() != regions.size()) throw InputError("confusion matrix is not square");
    for (double c : row) {
      if (!(c >= 0.0) || !std::isfinite(c)) {
        throw InputError("confusion entries must be finite and non-negative");
      }
    }
  }
  const auto cols = column_sums();
  for (std::size_t j = 0; j < cols.size(); ++j) {
    if (!(cols[j] > 0.0)) {
      throw InputError("confusion column for actual region '" + regions[j] + "' is empty");
    }
  }
}

namespace {

double parse_number(std::string_view field, const std::string& source, std::size_t line) {
  const std::string s(text::trim(field));
  try {
    std::size_t used = 0;
    const double v = std::stod(s, &used);
    if (used != s.size()) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    throw InputError(source, line, "not a number: '" + s + "'");
  }
}

struct LabeledMatrix {
  std::vector<std::string> regions;
  std::vector<std::vector<double>> matrix;
  std::vector<std::pair<std::string, std::string>> comments;
};

LabeledMatrix read_labeled_matrix(std::istream& in, const std::string& source) {
  LabeledMatrix m;
  std::string line;
  std::size_t line_no = 0;
  bool have_header = false;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    const auto trimmed = text::trim(line);
    if (trimmed.empty()) continue;
    if (trimmed.front() == '#') {
      const auto body = text::trim(trimmed.substr(1));
      const auto colon = body.find(':');
      if (colon != std::string_view::npos) {
        m.comments.emplace_back(std::string(text::trim(body.substr(0, colon))),
                                std::string(text::trim(body.substr(colon + 1))));
      }
      continue;
    }
    const auto fields = text::split(line, ',');
    if (!have_header) {
      if (fields.size() < 2) throw InputError(source, line_no, "header needs region labels");
      for (std::size_t j = 1; j < fields.size(); ++j) {
        m.regions.emplace_back(text::trim(fields[j]));
        if (m.regions.back().empty()) throw InputError(source, line_no, "empty region label");
      }
      have_header = true;
      continue;
    }
    if (fields.size() != m.regions.size() + 1) {
      throw InputError(source, line_no, "expected " + std::to_string(m.regions.size() + 1) +
                                            " comma-separated fields");
    }
    const std::size_t i = m.matrix.size();
    if (i >= m.regions.size()) throw InputError(source, line_no, "more rows than regions");
    if (text::trim(fields[0]) != m.regions[i]) {
      throw InputError(source, line_no,
                       "row label '" + std::string(text::trim(fields[0])) +
                           "' does not match column label '" + m.regions[i] + "'");
    }
    std::vector<double> row;
    for (std::size_t j = 1; j < fields.size(); ++j) {
      row.push_back(parse_number(fields[j], source, line_no));
    }
    m.matrix.push_back(std::move(row));
  }
  if (!have_header) throw InputError(source + ": missing header row");
  if (m.matrix.size() != m.regions.size()) {
    throw InputError(source + ": expected " + std::to_string(m.regions.size()) + " rows");
  }
  return m;
}

std::string labeled_matrix_csv(const std::vector<std::string>& regions,
                               const std::vector<std::vector<double>>& matrix) {
  std::string out = "guessed\\actual";
  for (const auto& r : regions) out += "," + r;
  out += '\n';
  for (std::size_t i = 0; i < regions.size(); ++i) {
    out += regions[i];
    for (double v : matrix[i]) out += "," + io::format_exact(v);
    out += '\n';
  }
  return out;
}

}  // namespace

ConfusionCounts read_confusion_csv(std::istream& in, const std::string& source) {
  auto m = read_labeled_matrix(in, source);
  ConfusionCounts c{std::move(m.regions), std::move(m.matrix)};
  try {
    c.validate();
  } catch (const InputError& e) {
    throw InputError(source + ": " + e.what());
  }
  return c;
}

std::string write_confusion_csv(const ConfusionCounts& counts) {
  return labeled_matrix_csv(counts.regions, counts.matrix);
}

ConfusionCounts reweight_priors(const ConfusionCounts& counts,
                                std::span<const double> target_priors) {
  counts.validate();
  if (target_priors.size() != counts.size()) {
    throw InputError("target priors have " + std::to_string(target_priors.size()) +
                     " entries for " + std::to_string(counts.size()) + " regions");
  }
  double sum = 0.0;
  for (std::size_t j = 0; j < target_priors.size(); ++j) {
    if (!(target_priors[j] > 0.0)) {
      throw InputError("target prior for region '" + counts.regions[j] + "' must be positive");
    }
    sum += target_priors[j];
  }
  if (std::abs(sum - 1.0) > 1e-9) throw InputError("target priors must sum to 1");

  const double total = counts.total();
  const auto cols = counts.column_sums();
  ConfusionCounts out = counts;
  for (std::size_t j = 0; j < counts.size(); ++j) {
    const double factor = target_priors[j] * total / cols[j];
    for (auto& row : out.matrix) row[j] *= factor;
  }
  return out;
}

CorrectionOperator CorrectionOperator::identity(std::vector<std::string> regions) {
  CorrectionOperator op;
  const std::size_t k = regions.size();
  op.regions = std::move(regions);
  op.matrix.assign(k, std::vector<double>(k, 0.0));
  for (std::size_t i = 0; i < k; ++i) op.matrix[i][i] = 1.0;
  op.source_name = "identity";
  return op;
}

CorrectionOperator correction_operator(const ConfusionCounts& counts) {
  if (counts.matrix.size() != counts.size()) throw InputError("confusion matrix is not square");
  const auto rows = counts.row_sums();
  CorrectionOperator op;
  op.regions = counts.regions;
  op.source = counts;
  op.matrix = counts.matrix;
  for (std::size_t i = 0; i < counts.size(); ++i) {
    if (!(rows[i] > 0.0)) {
      throw InputError("no evaluation name was guessed as region '" + counts.regions[i] +
                       "'; its correction row is undefined");
    }
    for (double& v : op.matrix[i]) v /= rows[i];
  }
  return op;
}

std::vector<double> correct_counts(std::span<const double> guessed,
                                   const CorrectionOperator& op) {
  const std::size_t k = op.regions.size();
  if (guessed.size() != k) {
    throw InputError("guessed counts have " + std::to_string(guessed.size()) +
                     " entries for " + std::to_string(k) + " regions");
  }
  std::vector<double> corrected(k, 0.0);
  for (std::size_t i = 0; i < k; ++i) {
    if (!(guessed[i] >= 0.0)) throw InputError("guessed counts must be non-negative");
    for (std::size_t j = 0; j < k; ++j) corrected[j] += guessed[i] * op.matrix[i][j];
  }
  return corrected;
}

std::string write_operator_csv(const CorrectionOperator& op) {
  std::string out = "# kind: correction operator P(actual | guessed), rows=guessed\n";
  out += "# source: " + (op.source_name.empty() ? std::string("unknown") : op.source_name) + "\n";
  out += "# target_priors: ";
  if (op.target_priors.empty()) {
    out += "none";
  } else {
    for (std::size_t j = 0; j < op.target_priors.size(); ++j) {
      if (j > 0) out += ' ';
      out += io::format_exact(op.target_priors[j]);
    }
  }
  out += '\n';
  return out + labeled_matrix_csv(op.regions, op.matrix);
}

CorrectionOperator read_operator_csv(std::istream& in, const std::string& source) {
  auto m = read_labeled_matrix(in, source);
  CorrectionOperator op;
  op.regions = std::move(m.regions);
  op.matrix = std::move(m.matrix);
  for (const auto& [key, value] : m.comments) {
    if (key == "source") op.source_name = value;
    if (key == "target_priors" && value != "none") {
      std::istringstream values(value);
      double p = 0.0;
      while (values >> p) op.target_priors.push_back(p);
    }
  }
  for (std::size_t i = 0; i < op.matrix.size(); ++i) {
    double s = 0.0;
    for (double v : op.matrix[i]) {
      if (!(v >= 0.0 && v <= 1.0)) throw InputError(source + ": operator entries must be in [0, 1]");
      s += v;
    }
    if (std::abs(s - 1.0) > 1e-9) {
      throw InputError(source + ": operator row '" + op.regions[i] + "' does not sum to 1");
    }
  }
  return op;
}

std::vector<double> published_reference_priors() {
  return {0.048, 0.083, 0.031, 0.207, 0.034, 0.571, 0.026};
}

}  // namespace onoma::correction
