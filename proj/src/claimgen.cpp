#include "qacg/claimgen.hpp"

#include <algorithm>
#include <atomic>
#include <exception>
#include <numeric>
#include <thread>
#include <utility>

#include "qacg/errors.hpp"
#include "qacg/replacement.hpp"
#include "qacg/rng.hpp"
#include "qacg/text.hpp"

namespace qacg {

GenerationStats& GenerationStats::operator+=(const GenerationStats& o) {
  passages += o.passages;
  passages_without_entities += o.passages_without_entities;
  no_replacement += o.no_replacement;
  empty_extension += o.empty_extension;
  nei_answer_in_passage += o.nei_answer_in_passage;
  return *this;
}

namespace {

std::vector<EntityMention> unique_mentions(std::vector<EntityMention> mentions) {
  std::vector<EntityMention> kept;
  for (auto& m : mentions) {
    const bool seen = std::any_of(kept.begin(), kept.end(), [&](const EntityMention& k) {
      return k.surface == m.surface && k.etype == m.etype;
    });
    if (!seen) kept.push_back(std::move(m));
  }
  return kept;
}

std::string claim_id(const std::string& passage_id, char tag, std::size_t index) {
  return passage_id + "/" + tag + std::to_string(index);
}

}  // namespace

std::vector<QAPair> core_qa_pairs(const EvidencePassage& passage,
                                  const GenerationBackends& backends, GenerationStats* stats) {
  auto mentions = unique_mentions(backends.ner->recognize(passage.text));
  if (mentions.empty() && stats != nullptr) ++stats->passages_without_entities;
  std::vector<QAPair> pairs;
  pairs.reserve(mentions.size());
  for (auto& m : mentions) {
    auto question = backends.question_generator->generate_question(passage.text, m.surface);
    pairs.push_back({std::move(question), std::move(m), passage.passage_id, AnswerOrigin::kCore,
                     std::nullopt});
  }
  return pairs;
}

std::vector<GeneratedClaim> gen_supported(const EvidencePassage& passage,
                                          const GenerationBackends& backends) {
  return gen_supported(passage, backends, core_qa_pairs(passage, backends));
}

std::vector<GeneratedClaim> gen_supported(const EvidencePassage& passage,
                                          const GenerationBackends& backends,
                                          const std::vector<QAPair>& qa_pairs) {
  std::vector<GeneratedClaim> claims;
  for (std::size_t i = 0; i < qa_pairs.size(); ++i) {
    const QAPair& qa = qa_pairs[i];
    GeneratedClaim claim;
    claim.claim_id = claim_id(passage.passage_id, 'S', i);
    claim.text = backends.claim_converter->qa_to_claim(qa.question, qa.answer.surface);
    claim.label = Label::kSupported;
    claim.evidence = passage;
    claim.provenance.question = qa.question;
    claim.provenance.original_answer = qa.answer;
    claim.provenance.answer_origin = AnswerOrigin::kCore;
    claims.push_back(std::move(claim));
  }
  return claims;
}

std::optional<SimilarPhrase> replace_answer(const EntityMention& original,
                                            const PhraseIndex& index, int k,
                                            std::uint64_t seed) {
  auto candidates = index.similar_phrases(original.surface, original.etype, k);
  std::vector<SimilarPhrase> survivors;
  for (auto& c : candidates) {
    if (c.etype == original.etype && !overlaps(original.surface, c.surface)) {
      survivors.push_back(std::move(c));
    }
  }
  if (survivors.empty()) return std::nullopt;
  Rng rng(seed);
  return survivors[rng.uniform(survivors.size())];
}

std::vector<GeneratedClaim> gen_refuted(const EvidencePassage& passage,
                                        const GenerationBackends& backends, std::uint64_t seed,
                                        const ClaimGenConfig& config, GenerationStats* stats) {
  return gen_refuted(passage, backends, core_qa_pairs(passage, backends), seed, config, stats);
}

std::vector<GeneratedClaim> gen_refuted(const EvidencePassage& passage,
                                        const GenerationBackends& backends,
                                        const std::vector<QAPair>& qa_pairs, std::uint64_t seed,
                                        const ClaimGenConfig& config, GenerationStats* stats) {
  std::vector<GeneratedClaim> claims;
  for (std::size_t i = 0; i < qa_pairs.size(); ++i) {
    const QAPair& qa = qa_pairs[i];
    auto replacement = replace_answer(qa.answer, *backends.phrase_index, config.k_replace,
                                      derive_seed(seed, "replace:" + std::to_string(i)));
    if (!replacement) {
      if (stats != nullptr) ++stats->no_replacement;
      continue;
    }
    GeneratedClaim claim;
    claim.claim_id = claim_id(passage.passage_id, 'R', i);
    claim.text = backends.claim_converter->qa_to_claim(qa.question, replacement->surface);
    claim.label = Label::kRefuted;
    claim.evidence = passage;
    claim.provenance.question = qa.question;
    claim.provenance.original_answer = qa.answer;
    claim.provenance.answer_origin = AnswerOrigin::kCore;
    claim.provenance.replacement_answer = std::move(replacement);
    claims.push_back(std::move(claim));
  }
  return claims;
}

std::vector<GeneratedClaim> gen_nei(const EvidencePassage& passage, const Article& article,
                                    const GenerationBackends& backends, std::uint64_t seed,
                                    const ClaimGenConfig& config, GenerationStats* stats) {
  const ExtensionContext ext = get_extension_context(article, passage, config.k_ext, seed);
  if (ext.sentences.empty()) {
    if (stats != nullptr) ++stats->empty_extension;
    return {};
  }
  const std::vector<int> ext_ids = ext.sent_ids();
  const std::string expanded = passage.text + " " + ext.text();
  const std::string folded_passage = casefold(passage.text);

  struct ExtensionAnswer {
    EntityMention mention;
    int sid;
  };
  std::vector<ExtensionAnswer> answers;
  for (const Sentence& s : ext.sentences) {
    for (auto& m : backends.ner->recognize(s.text)) {
      const bool seen = std::any_of(answers.begin(), answers.end(), [&](const auto& a) {
        return a.mention.surface == m.surface && a.mention.etype == m.etype;
      });
      if (seen) continue;
      if (contains_word_bounded(folded_passage, casefold(m.surface))) {
        if (stats != nullptr) ++stats->nei_answer_in_passage;
        continue;
      }
      answers.push_back({std::move(m), s.sid});
    }
  }

  std::vector<GeneratedClaim> claims;
  for (std::size_t i = 0; i < answers.size(); ++i) {
    const auto& [mention, sid] = answers[i];
    auto question = backends.question_generator->generate_question(expanded, mention.surface);
    GeneratedClaim claim;
    claim.claim_id = claim_id(passage.passage_id, 'N', i);
    claim.text = backends.claim_converter->qa_to_claim(question, mention.surface);
    claim.label = Label::kNei;
    claim.evidence = passage;
    claim.provenance.question = std::move(question);
    claim.provenance.original_answer = mention;
    claim.provenance.answer_origin = AnswerOrigin::kExtension;
    claim.provenance.answer_sent_id = sid;
    claim.provenance.extension_sent_ids = ext_ids;
    claims.push_back(std::move(claim));
  }
  return claims;
}

std::uint64_t passage_seed(std::uint64_t seed, const std::string& passage_id) {
  return derive_seed(seed, passage_id);
}

namespace {

struct PassageOutcome {
  std::vector<GeneratedClaim> claims;
  GenerationStats stats;
  std::optional<std::string> failure;
};

PassageOutcome run_passage(const Corpus& corpus, const EvidencePassage& passage,
                           const GenerationBackends& backends, const std::set<Label>& labels,
                           const ClaimGenConfig& config, std::uint64_t seed) {
  PassageOutcome out;
  out.stats.passages = 1;
  const std::uint64_t pseed = passage_seed(seed, passage.passage_id);
  try {
    const bool want_s = labels.count(Label::kSupported) > 0;
    const bool want_r = labels.count(Label::kRefuted) > 0;
    if (want_s || want_r) {
      // Supported and refuted claims from the same (passage, answer) share
      // one question.
      const auto qa = core_qa_pairs(passage, backends, &out.stats);
      if (want_s) {
        auto s = gen_supported(passage, backends, qa);
        out.claims.insert(out.claims.end(), std::make_move_iterator(s.begin()),
                          std::make_move_iterator(s.end()));
      }
      if (want_r) {
        auto r = gen_refuted(passage, backends, qa, derive_seed(pseed, "refuted"), config,
                             &out.stats);
        out.claims.insert(out.claims.end(), std::make_move_iterator(r.begin()),
                          std::make_move_iterator(r.end()));
      }
    }
    if (labels.count(Label::kNei) > 0) {
      auto n = gen_nei(passage, corpus.article_of(passage), backends, derive_seed(pseed, "nei"),
                       config, &out.stats);
      out.claims.insert(out.claims.end(), std::make_move_iterator(n.begin()),
                        std::make_move_iterator(n.end()));
    }
  } catch (const BackendError& e) {
    out.claims.clear();
    out.failure = e.what();
  }
  return out;
}

}  // namespace

GenerationResult generate_all(const Corpus& corpus, const GenerationBackends& backends,
                              const std::set<Label>& labels, const ClaimGenConfig& config,
                              std::uint64_t seed, int workers) {
  GenerationResult result;
  result.manifest.seed = seed;
  result.manifest.labels = labels;
  if (corpus.passages.empty()) {
    result.manifest.warnings.push_back("corpus has no passages; nothing generated");
    return result;
  }

  std::vector<std::size_t> order(corpus.passages.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return corpus.passages[a].passage_id < corpus.passages[b].passage_id;
  });

  std::vector<PassageOutcome> outcomes(order.size());
  const std::size_t n_workers =
      std::clamp<std::size_t>(static_cast<std::size_t>(std::max(workers, 1)), 1, order.size());
  if (n_workers == 1) {
    for (std::size_t i = 0; i < order.size(); ++i) {
      outcomes[i] = run_passage(corpus, corpus.passages[order[i]], backends, labels, config, seed);
    }
  } else {
    const GenerationBackends shared = serialize_unsafe(backends);
    std::atomic<std::size_t> next{0};
    std::vector<std::exception_ptr> errors(n_workers);
    {
      std::vector<std::jthread> pool;
      for (std::size_t w = 0; w < n_workers; ++w) {
        pool.emplace_back([&, w] {
          try {
            for (std::size_t i = next++; i < order.size(); i = next++) {
              outcomes[i] =
                  run_passage(corpus, corpus.passages[order[i]], shared, labels, config, seed);
            }
          } catch (...) {
            errors[w] = std::current_exception();
            next = order.size();
          }
        });
      }
    }
    for (const auto& error : errors) {
      if (error) std::rethrow_exception(error);
    }
  }

  for (std::size_t i = 0; i < outcomes.size(); ++i) {
    auto& outcome = outcomes[i];
    result.manifest.stats += outcome.stats;
    if (outcome.failure) {
      result.manifest.backend_failures.push_back(
          {corpus.passages[order[i]].passage_id, *outcome.failure});
      continue;
    }
    for (auto& claim : outcome.claims) {
      ++count_of(result.manifest.counts, claim.label);
      result.dataset.claims.push_back(std::move(claim));
    }
  }
  return result;
}

}  // namespace qacg
