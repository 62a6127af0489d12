#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "qacg/types.hpp"

namespace qacg {

struct ClassMetrics {
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
};

struct EvalReport {
  LabelSpace space = LabelSpace::kSRN;
  // Indexed like labels_of(space).
  std::vector<ClassMetrics> per_class;
  // Unweighted means of the per-class values.
  ClassMetrics macro;
  // confusion[gold][pred], indexed like labels_of(space).
  std::vector<std::vector<std::size_t>> confusion;
  std::size_t n = 0;

  const ClassMetrics& of(Label label) const;
};

/// Macro precision/recall/F1. Any ratio with a zero denominator is 0. When
/// `space` is not given it is SRN if NEI appears in either sequence, else
/// SR. Throws DataError on a length mismatch, empty input, or a label
/// outside `space`.
EvalReport macro_prf(std::span<const Label> gold, std::span<const Label> pred,
                     std::optional<LabelSpace> space = std::nullopt);

std::string report_to_json(const EvalReport& report);

/// Fixed-width row "<name>  P / R / F1" with percentages to one decimal,
/// e.g. "Random guess                 33.3 / 33.3 / 33.3".
std::string format_report_row(std::string_view name, const EvalReport& report);

/// Per-class and macro table with the confusion matrix.
std::string format_report_table(const EvalReport& report);

using Tokens = std::vector<std::string>;

/// Corpus BLEU-4 with one reference per candidate: clipped n-gram
/// precisions for n = 1..4 pooled over the corpus, geometric mean, brevity
/// penalty exp(1 - r/c) when c <= r. No smoothing; any zero precision
/// gives 0. Throws DataError on an empty corpus or a length mismatch.
double bleu4(std::span<const Tokens> candidates, std::span<const Tokens> references);

struct RougeScore {
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
};

/// LCS-based ROUGE-L. Both sequences must be non-empty.
RougeScore rouge_l(std::span<const std::string> candidate, std::span<const std::string> reference);

inline constexpr std::size_t kDefaultAuditSize = 100;

struct AuditItem {
  std::string claim_id;
  std::string question;
  std::string answer;
  std::string evidence;
};

/// Samples min(n, pool) question-answer pairs for human answerability
/// rating. The pool holds one entry per distinct (passage, question,
/// answer) whose answer came from the passage itself, in dataset order;
/// sampling is Rng(seed).sample over that pool.
std::vector<AuditItem> answerability_audit(const ClaimDataset& dataset,
                                           std::size_t n = kDefaultAuditSize,
                                           std::uint64_t seed = 0);

/// CSV rating sheet: id,question,answer,evidence,answerable (last column blank).
void write_audit_sheet(std::ostream& out, const std::vector<AuditItem>& items);

}  // namespace qacg
