#pragma once

#include <array>
#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "qacg/labels.hpp"

namespace qacg {

struct Sentence {
  int sid = 0;
  std::string text;

  bool operator==(const Sentence&) const = default;
};

/// A source article. sids run 0, 1, 2, ... and every text is non-blank.
struct Article {
  std::string article_id;
  std::string title;
  std::vector<Sentence> sentences;

  const Sentence* find(int sid) const;
  bool operator==(const Article&) const = default;
};

/// An ordered subset of one article's sentences. `text` is the referenced
/// sentences joined by a single space.
struct EvidencePassage {
  std::string passage_id;
  std::string article_id;
  std::vector<int> sent_ids;
  std::string text;

  bool operator==(const EvidencePassage&) const = default;
};

/// A typed span. source[char_start, char_end) == surface.
struct EntityMention {
  std::string surface;
  EntityType etype = EntityType::kPerson;
  std::size_t char_start = 0;
  std::size_t char_end = 0;

  bool operator==(const EntityMention&) const = default;
};

struct SimilarPhrase {
  std::string surface;
  EntityType etype = EntityType::kPerson;
  double score = 0.0;

  bool operator==(const SimilarPhrase&) const = default;
};

enum class AnswerOrigin { kCore, kExtension };

struct QAPair {
  std::string question;
  EntityMention answer;
  std::string passage_id;
  AnswerOrigin origin = AnswerOrigin::kCore;
  // For EXTENSION answers, the sentence the answer span indexes into.
  std::optional<int> answer_sent_id;
};

struct Provenance {
  std::string question;
  EntityMention original_answer;
  AnswerOrigin answer_origin = AnswerOrigin::kCore;
  std::optional<int> answer_sent_id;
  std::optional<SimilarPhrase> replacement_answer;
  std::vector<int> extension_sent_ids;

  bool operator==(const Provenance&) const = default;
};

struct GeneratedClaim {
  std::string claim_id;
  std::string text;
  Label label = Label::kSupported;
  // Always the original passage, also for NEI claims.
  EvidencePassage evidence;
  Provenance provenance;

  const std::string& passage_id() const { return evidence.passage_id; }
  bool operator==(const GeneratedClaim&) const = default;
};

using LabelCounts = std::array<std::size_t, 3>;

inline std::size_t& count_of(LabelCounts& counts, Label label) {
  return counts[static_cast<std::size_t>(label)];
}
inline std::size_t count_of(const LabelCounts& counts, Label label) {
  return counts[static_cast<std::size_t>(label)];
}

struct ClaimDataset {
  std::vector<GeneratedClaim> claims;

  LabelCounts counts() const;
  std::size_t size() const { return claims.size(); }
  bool empty() const { return claims.empty(); }
  /// Throws ConflictError on a repeated claim_id.
  void check_unique_ids() const;

  bool operator==(const ClaimDataset&) const = default;
};

/// Checks the per-label GeneratedClaim invariants; returns a description of
/// the first violation, or nullopt.
std::optional<std::string> find_claim_violation(const GeneratedClaim& claim);

}  // namespace qacg
