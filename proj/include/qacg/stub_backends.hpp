#pragma once

// Deterministic reference implementations of every backend interface. Each
// is a pure function of its inputs and its fixture table.

#include <filesystem>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "qacg/backends.hpp"

namespace qacg {

/// Case-sensitive gazetteer lookup. Every word-bounded occurrence of a
/// gazetteer entry is a mention; overlaps resolve to the leftmost, then
/// longest, entry.
class GazetteerRecognizer final : public EntityRecognizer {
 public:
  explicit GazetteerRecognizer(std::map<std::string, EntityType> gazetteer);
  std::string name() const override { return "stub-gazetteer"; }

 protected:
  std::vector<EntityMention> do_recognize(std::string_view text) const override;

 private:
  std::map<std::string, EntityType> gazetteer_;
};

/// "STUBQ[<fnv1a64(evidence) as 16 hex digits>]: which entity is '<answer>'?"
class TemplateQuestionGenerator final : public QuestionGenerator {
 public:
  std::string name() const override { return "stub-question"; }

 protected:
  std::string do_generate_question(std::string_view evidence,
                                   std::string_view answer) const override;
};

/// "<answer> is the answer to: <question>"
class TemplateClaimConverter final : public ClaimConverter {
 public:
  std::string name() const override { return "stub-qa2claim"; }

 protected:
  std::string do_qa_to_claim(std::string_view question, std::string_view answer) const override;
};

struct PhraseEntry {
  std::string query;
  EntityType etype;
  std::vector<SimilarPhrase> phrases;
};

/// Serves similar phrases from a table keyed by (query, etype). Results are
/// filtered to the requested type, never equal the query (case-folded),
/// and are stably sorted by descending score before truncation to k.
class FixturePhraseIndex final : public PhraseIndex {
 public:
  explicit FixturePhraseIndex(std::vector<PhraseEntry> entries);
  std::string name() const override { return "stub-phrase-index"; }

 protected:
  std::vector<SimilarPhrase> do_similar_phrases(std::string_view query, EntityType etype,
                                                int k) const override;

 private:
  std::map<std::pair<std::string, EntityType>, std::vector<SimilarPhrase>> table_;
};

struct NliEntry {
  std::string premise;  // empty matches any premise
  std::string hypothesis;
  NliResult result;
};

/// Looks up (premise, hypothesis), then (any premise, hypothesis). Unknown
/// pairs are neutral with scores {0.25, 0.25, 0.5}.
class TableNliClassifier final : public NliClassifier {
 public:
  explicit TableNliClassifier(std::vector<NliEntry> entries);
  std::string name() const override { return "stub-nli"; }

 protected:
  NliResult do_classify(std::string_view premise, std::string_view hypothesis) const override;

 private:
  std::map<std::pair<std::string, std::string>, NliResult> table_;
};

/// Table lookup; unknown texts get 10 + (fnv1a64(text) mod 90000) / 1000.
class TablePerplexityScorer final : public PerplexityScorer {
 public:
  explicit TablePerplexityScorer(std::map<std::string, double> table);
  std::string name() const override { return "stub-perplexity"; }

 protected:
  double do_perplexity(std::string_view text) const override;

 private:
  std::map<std::string, double> table_;
};

/// Fills keyed by masked text; unknown texts yield no fill.
class TableMaskedFiller final : public MaskedLmFiller {
 public:
  explicit TableMaskedFiller(std::map<std::string, std::vector<std::string>> table);
  std::string name() const override { return "stub-filler"; }

 protected:
  std::vector<std::string> do_fill(std::string_view context, std::string_view masked_text,
                                   int n) const override;

 private:
  std::map<std::string, std::vector<std::string>> table_;
};

/// Versioned fixture document backing every stub:
///   {"version": 1,
///    "gazetteer": {"Budapest": "GPE", ...},
///    "similar": [{"query": "Budapest", "etype": "GPE",
///                 "phrases": [{"surface": "Vienna", "score": 0.9,
///                              ["etype": "GPE"]}, ...]}, ...],
///    "nli": [{["premise": ...], "hypothesis": ..., "label": "entailment",
///             ["scores": {"entailment": .., "contradiction": .., "neutral": ..}]}],
///    "perplexity": {"text": 12.5, ...},
///    "fill": {"masked text with [MASK]": ["fill", ...], ...}}
/// All sections are optional.
struct StubFixtures {
  std::map<std::string, EntityType> gazetteer;
  std::vector<PhraseEntry> similar;
  std::vector<NliEntry> nli;
  std::map<std::string, double> perplexity;
  std::map<std::string, std::vector<std::string>> fill;
};

inline constexpr int kFixtureVersion = 1;

StubFixtures parse_stub_fixtures(std::string_view json_text);
StubFixtures load_stub_fixtures(const std::filesystem::path& path);
std::string dump_stub_fixtures(const StubFixtures& fixtures);

GenerationBackends make_stub_generation_backends(const StubFixtures& fixtures);
BaselineBackends make_stub_baseline_backends(const StubFixtures& fixtures);

}  // namespace qacg
