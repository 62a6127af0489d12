#include "qacg/backends.hpp"

#include <cmath>
#include <mutex>

#include "qacg/errors.hpp"

namespace qacg {

std::vector<EntityMention> EntityRecognizer::recognize(std::string_view text) const {
  if (text.empty()) throw DataError("recognize_entities: text must be non-empty");
  auto mentions = do_recognize(text);
  for (std::size_t i = 0; i < mentions.size(); ++i) {
    const auto& m = mentions[i];
    if (m.char_start >= m.char_end || m.char_end > text.size() ||
        text.substr(m.char_start, m.char_end - m.char_start) != m.surface) {
      throw BackendError(name() + ": invalid entity span for '" + m.surface + "'");
    }
    if (i > 0 && mentions[i - 1].char_start > m.char_start) {
      throw BackendError(name() + ": entity mentions not ordered by offset");
    }
  }
  return mentions;
}

std::string QuestionGenerator::generate_question(std::string_view evidence,
                                                 std::string_view answer) const {
  if (answer.empty() || evidence.find(answer) == std::string_view::npos) {
    throw DataError("generate_question: answer '" + std::string(answer) +
                    "' does not occur in the evidence");
  }
  auto question = do_generate_question(evidence, answer);
  if (question.empty()) throw BackendError(name() + ": empty question");
  return question;
}

std::string ClaimConverter::qa_to_claim(std::string_view question,
                                        std::string_view answer) const {
  if (question.empty() || answer.empty()) {
    throw DataError("qa_to_claim: question and answer must be non-empty");
  }
  auto claim = do_qa_to_claim(question, answer);
  if (claim.empty()) throw BackendError(name() + ": empty claim");
  return claim;
}

std::vector<SimilarPhrase> PhraseIndex::similar_phrases(std::string_view query,
                                                        EntityType etype, int k) const {
  if (k < 1) throw DataError("similar_phrases: k must be >= 1");
  auto phrases = do_similar_phrases(query, etype, k);
  if (phrases.size() > static_cast<std::size_t>(k)) {
    throw BackendError(name() + ": returned more than k phrases");
  }
  for (std::size_t i = 0; i < phrases.size(); ++i) {
    if (phrases[i].etype != etype) throw BackendError(name() + ": phrase of the wrong type");
    if (!(phrases[i].score >= 0.0 && phrases[i].score <= 1.0)) {
      throw BackendError(name() + ": phrase score outside [0, 1]");
    }
    if (i > 0 && phrases[i].score > phrases[i - 1].score) {
      throw BackendError(name() + ": phrases not sorted by descending score");
    }
  }
  return phrases;
}

std::string_view to_string(NliLabel label) {
  switch (label) {
    case NliLabel::kEntailment:
      return "entailment";
    case NliLabel::kContradiction:
      return "contradiction";
    case NliLabel::kNeutral:
      return "neutral";
  }
  return "neutral";
}

std::optional<NliLabel> parse_nli_label(std::string_view text) {
  for (NliLabel l : {NliLabel::kEntailment, NliLabel::kContradiction, NliLabel::kNeutral}) {
    if (text == to_string(l)) return l;
  }
  return std::nullopt;
}

NliResult NliClassifier::classify(std::string_view premise, std::string_view hypothesis) const {
  auto result = do_classify(premise, hypothesis);
  double sum = 0.0;
  for (double s : result.scores) {
    if (!std::isfinite(s) || s < 0.0) throw BackendError(name() + ": invalid NLI score");
    sum += s;
  }
  if (std::abs(sum - 1.0) > 1e-6) throw BackendError(name() + ": NLI scores do not sum to 1");
  return result;
}

double PerplexityScorer::perplexity(std::string_view text) const {
  if (text.empty()) throw DataError("perplexity: text must be non-empty");
  return do_perplexity(text);
}

std::vector<std::string> MaskedLmFiller::fill(std::string_view context,
                                              std::string_view masked_text, int n) const {
  const auto pos = masked_text.find(kMaskToken);
  if (pos == std::string_view::npos ||
      masked_text.find(kMaskToken, pos + kMaskToken.size()) != std::string_view::npos) {
    throw DataError("fill: masked text must contain exactly one mask token");
  }
  if (n < 1) throw DataError("fill: n must be >= 1");
  auto fills = do_fill(context, masked_text, n);
  if (fills.size() > static_cast<std::size_t>(n)) fills.resize(static_cast<std::size_t>(n));
  return fills;
}

namespace {

class LockedRecognizer final : public EntityRecognizer {
 public:
  explicit LockedRecognizer(std::shared_ptr<const EntityRecognizer> inner)
      : inner_(std::move(inner)) {}
  std::string name() const override { return inner_->name(); }

 protected:
  std::vector<EntityMention> do_recognize(std::string_view text) const override {
    std::lock_guard lock(mutex_);
    return inner_->recognize(text);
  }

 private:
  std::shared_ptr<const EntityRecognizer> inner_;
  mutable std::mutex mutex_;
};

class LockedQuestionGenerator final : public QuestionGenerator {
 public:
  explicit LockedQuestionGenerator(std::shared_ptr<const QuestionGenerator> inner)
      : inner_(std::move(inner)) {}
  std::string name() const override { return inner_->name(); }

 protected:
  std::string do_generate_question(std::string_view evidence,
                                   std::string_view answer) const override {
    std::lock_guard lock(mutex_);
    return inner_->generate_question(evidence, answer);
  }

 private:
  std::shared_ptr<const QuestionGenerator> inner_;
  mutable std::mutex mutex_;
};

class LockedClaimConverter final : public ClaimConverter {
 public:
  explicit LockedClaimConverter(std::shared_ptr<const ClaimConverter> inner)
      : inner_(std::move(inner)) {}
  std::string name() const override { return inner_->name(); }

 protected:
  std::string do_qa_to_claim(std::string_view question, std::string_view answer) const override {
    std::lock_guard lock(mutex_);
    return inner_->qa_to_claim(question, answer);
  }

 private:
  std::shared_ptr<const ClaimConverter> inner_;
  mutable std::mutex mutex_;
};

class LockedPhraseIndex final : public PhraseIndex {
 public:
  explicit LockedPhraseIndex(std::shared_ptr<const PhraseIndex> inner)
      : inner_(std::move(inner)) {}
  std::string name() const override { return inner_->name(); }

 protected:
  std::vector<SimilarPhrase> do_similar_phrases(std::string_view query, EntityType etype,
                                                int k) const override {
    std::lock_guard lock(mutex_);
    return inner_->similar_phrases(query, etype, k);
  }

 private:
  std::shared_ptr<const PhraseIndex> inner_;
  mutable std::mutex mutex_;
};

template <typename Locked, typename Interface>
std::shared_ptr<const Interface> guard(std::shared_ptr<const Interface> backend) {
  if (!backend || backend->thread_safe()) return backend;
  return std::make_shared<Locked>(std::move(backend));
}

}  // namespace

GenerationBackends serialize_unsafe(GenerationBackends b) {
  b.ner = guard<LockedRecognizer>(std::move(b.ner));
  b.question_generator = guard<LockedQuestionGenerator>(std::move(b.question_generator));
  b.claim_converter = guard<LockedClaimConverter>(std::move(b.claim_converter));
  b.phrase_index = guard<LockedPhraseIndex>(std::move(b.phrase_index));
  return b;
}

}  // namespace qacg
