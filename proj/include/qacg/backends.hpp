#pragma once

#include <array>
#include <memory>
#include <string>
#include <string_view>
#include <vector>

#include "qacg/types.hpp"

namespace qacg {

// Interfaces for every learned component. Public methods check the call
// contract (preconditions raise DataError, contract-violating backend output
// raises BackendError) and forward to the protected do_* hook.

class Backend {
 public:
  virtual ~Backend() = default;
  virtual std::string name() const = 0;
  /// Whether concurrent calls on one instance are permitted. The pipeline
  /// serializes calls to backends that return false.
  virtual bool thread_safe() const { return true; }
};

class EntityRecognizer : public Backend {
 public:
  /// Mentions ordered by char_start, each a valid span of `text`.
  std::vector<EntityMention> recognize(std::string_view text) const;

 protected:
  virtual std::vector<EntityMention> do_recognize(std::string_view text) const = 0;
};

class QuestionGenerator : public Backend {
 public:
  /// `answer` must occur in `evidence`.
  std::string generate_question(std::string_view evidence, std::string_view answer) const;

 protected:
  virtual std::string do_generate_question(std::string_view evidence,
                                           std::string_view answer) const = 0;
};

class ClaimConverter : public Backend {
 public:
  std::string qa_to_claim(std::string_view question, std::string_view answer) const;

 protected:
  virtual std::string do_qa_to_claim(std::string_view question,
                                     std::string_view answer) const = 0;
};

/// Sense-tagged phrase-similarity index.
class PhraseIndex : public Backend {
 public:
  /// At most k phrases of type `etype`, by descending score. An unknown
  /// query yields an empty list.
  std::vector<SimilarPhrase> similar_phrases(std::string_view query, EntityType etype,
                                             int k) const;

 protected:
  virtual std::vector<SimilarPhrase> do_similar_phrases(std::string_view query,
                                                        EntityType etype, int k) const = 0;
};

enum class NliLabel { kEntailment = 0, kContradiction = 1, kNeutral = 2 };

std::string_view to_string(NliLabel label);
std::optional<NliLabel> parse_nli_label(std::string_view text);

struct NliResult {
  NliLabel label = NliLabel::kNeutral;
  // Probabilities indexed by NliLabel.
  std::array<double, 3> scores{0.0, 0.0, 1.0};

  double score(NliLabel l) const { return scores[static_cast<std::size_t>(l)]; }
};

class NliClassifier : public Backend {
 public:
  NliResult classify(std::string_view premise, std::string_view hypothesis) const;

 protected:
  virtual NliResult do_classify(std::string_view premise, std::string_view hypothesis) const = 0;
};

class PerplexityScorer : public Backend {
 public:
  /// Positive and finite for a well-behaved backend; callers validate.
  double perplexity(std::string_view text) const;

 protected:
  virtual double do_perplexity(std::string_view text) const = 0;
};

inline constexpr std::string_view kMaskToken = "[MASK]";

class MaskedLmFiller : public Backend {
 public:
  /// `masked_text` contains exactly one kMaskToken. Returns up to n fills,
  /// best first.
  std::vector<std::string> fill(std::string_view context, std::string_view masked_text,
                                int n) const;

 protected:
  virtual std::vector<std::string> do_fill(std::string_view context,
                                           std::string_view masked_text, int n) const = 0;
};

/// The generation backends the claim generator needs.
struct GenerationBackends {
  std::shared_ptr<const EntityRecognizer> ner;
  std::shared_ptr<const QuestionGenerator> question_generator;
  std::shared_ptr<const ClaimConverter> claim_converter;
  std::shared_ptr<const PhraseIndex> phrase_index;
};

/// Backends used by the zero-shot baselines.
struct BaselineBackends {
  std::shared_ptr<const EntityRecognizer> ner;
  std::shared_ptr<const NliClassifier> nli;
  std::shared_ptr<const PerplexityScorer> perplexity;
  std::shared_ptr<const MaskedLmFiller> filler;
};

/// Wraps every backend that is not thread_safe() in a decorator holding a
/// mutex, so the result can be shared across worker threads.
GenerationBackends serialize_unsafe(GenerationBackends backends);

}  // namespace qacg
