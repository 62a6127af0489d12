#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "qacg/types.hpp"

namespace qacg {

/// A (claim, evidence, label) pair as consumed by a verifier.
struct VerificationExample {
  std::string id;
  std::string claim_text;
  std::string evidence_text;
  Label label = Label::kSupported;

  bool operator==(const VerificationExample&) const = default;
};

/// Drops claims whose (text, passage_id, label) repeats an earlier one. Of
/// each duplicate group the claim with the smallest claim_id is kept; the
/// survivors keep their input order.
ClaimDataset dedup(const ClaimDataset& dataset);

/// Keeps only the claims whose label is in `labels`.
ClaimDataset filter_labels(const ClaimDataset& dataset, const std::set<Label>& labels);

/// Samples exactly `n_per_class` claims of each label in `labels` (default:
/// every label present) without replacement. Label L is sampled from its
/// claims in input order with Rng(derive_seed(seed, to_string(L))); the
/// result keeps input order. Throws DataError naming the class when one has
/// fewer than `n_per_class` claims.
ClaimDataset filter_balanced(const ClaimDataset& dataset, std::size_t n_per_class,
                             std::uint64_t seed,
                             const std::optional<std::set<Label>>& labels = std::nullopt);

/// One example per claim; evidence is the original passage text, so NEI
/// examples never see their extension sentences.
std::vector<VerificationExample> to_examples(const ClaimDataset& dataset);

/// Triple export for external trainers: {"id", "claim", "evidence", "label"}.
void write_examples_jsonl(std::ostream& out, const std::vector<VerificationExample>& examples,
                          bool fever_labels = false);
std::vector<VerificationExample> read_examples_jsonl(std::istream& in);

/// Loads either claim records or example triples (detected per record by
/// the presence of an "evidence" object).
std::vector<VerificationExample> load_examples(const std::filesystem::path& path);

}  // namespace qacg
