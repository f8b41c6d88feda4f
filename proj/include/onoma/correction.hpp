#pragma once

#include <iosfwd>
#include <span>
#include <string>
#include <vector>

namespace onoma::correction {

/// C[i][j]: evaluation names of actual region j guessed as region i.
struct ConfusionCounts {
  std::vector<std::string> regions;
  std::vector<std::vector<double>> matrix;

  std::size_t size() const { return regions.size(); }
  double total() const;
  std::vector<double> column_sums() const;
  std::vector<double> row_sums() const;

  /// Non-negative, square, every column sum positive. Throws InputError.
  void validate() const;
};

/// CSV with a header row and a leading column of region labels (same order).
ConfusionCounts read_confusion_csv(std::istream& in, const std::string& source);
std::string write_confusion_csv(const ConfusionCounts& counts);

/// Column j scaled by target[j] * T / colsum(j), T the grand total, so the
/// column sums become proportional to `target_priors` and T is unchanged.
ConfusionCounts reweight_priors(const ConfusionCounts& counts,
                                std::span<const double> target_priors);

/// P[i][j] = P(actual = j | guessed = i): C with each row normalized.
struct CorrectionOperator {
  std::vector<std::string> regions;
  std::vector<std::vector<double>> matrix;
  ConfusionCounts source;
  std::vector<double> target_priors;  // empty when no reweighting was applied
  std::string source_name;            // provenance only

  static CorrectionOperator identity(std::vector<std::string> regions);
};

/// Throws InputError naming the region of any empty row.
CorrectionOperator correction_operator(const ConfusionCounts& counts);

/// corrected[j] = sum_i guessed[i] * P[i][j]. Total mass is preserved.
std::vector<double> correct_counts(std::span<const double> guessed,
                                   const CorrectionOperator& op);

/// CSV of P preceded by `# key: value` provenance lines.
std::string write_operator_csv(const CorrectionOperator& op);
CorrectionOperator read_operator_csv(std::istream& in, const std::string& source);

/// Origin shares reported for the reference population by the uncorrected
/// classifier, in African, Arabian, Asian, CS-European, Indian, N-European,
/// Slavic order (sums to 1).
std::vector<double> published_reference_priors();

}  // namespace onoma::correction
