#include "qacg/baselines.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "qacg/rng.hpp"
#include "qacg/text.hpp"

namespace qacg {

std::vector<Label> random_guess(std::size_t n, LabelSpace space, std::uint64_t seed) {
  const auto labels = labels_of(space);
  Rng rng(seed);
  std::vector<Label> out;
  out.reserve(n);
  for (std::size_t i = 0; i < n; ++i) out.push_back(labels[rng.uniform(labels.size())]);
  return out;
}

std::vector<Label> perplexity_bands(std::span<const double> scores, LabelSpace space) {
  if (scores.empty()) throw DataError("perplexity baseline: no claims");
  for (std::size_t i = 0; i < scores.size(); ++i) {
    if (!std::isfinite(scores[i])) {
      throw DataError("perplexity baseline: non-finite score at index " + std::to_string(i));
    }
  }
  std::vector<std::size_t> rank(scores.size());
  std::iota(rank.begin(), rank.end(), std::size_t{0});
  std::stable_sort(rank.begin(), rank.end(),
                   [&](std::size_t a, std::size_t b) { return scores[a] > scores[b]; });

  const std::size_t n = scores.size();
  std::size_t top = 0;
  std::size_t bottom = 0;
  if (space == LabelSpace::kSRN) {
    top = n / 3;
    bottom = n / 3 + (n % 3 == 2 ? 1 : 0);
  } else {
    top = n / 2;
    bottom = n - top;
  }
  std::vector<Label> out(n, Label::kNei);
  for (std::size_t r = 0; r < n; ++r) {
    Label label = Label::kNei;
    if (r < top) {
      label = Label::kRefuted;
    } else if (r >= n - bottom) {
      label = Label::kSupported;
    }
    out[rank[r]] = label;
  }
  return out;
}

std::vector<Label> perplexity_tercile(std::span<const VerificationExample> claims,
                                      const PerplexityScorer& scorer, LabelSpace space) {
  if (claims.empty()) throw DataError("perplexity baseline: no claims");
  std::vector<double> scores;
  scores.reserve(claims.size());
  for (const auto& c : claims) {
    const double ppl = scorer.perplexity(c.claim_text);
    if (!std::isfinite(ppl)) {
      throw DataError("perplexity baseline: non-finite perplexity for claim '" + c.id + "'");
    }
    scores.push_back(ppl);
  }
  return perplexity_bands(scores, space);
}

Label map_nli_label(const NliResult& result, LabelSpace space) {
  switch (result.label) {
    case NliLabel::kEntailment:
      return Label::kSupported;
    case NliLabel::kContradiction:
      return Label::kRefuted;
    case NliLabel::kNeutral:
      break;
  }
  if (space == LabelSpace::kSRN) return Label::kNei;
  return result.score(NliLabel::kContradiction) > result.score(NliLabel::kEntailment)
             ? Label::kRefuted
             : Label::kSupported;
}

std::vector<Label> nli_transfer(std::span<const VerificationExample> examples,
                                const NliClassifier& nli, LabelSpace space) {
  std::vector<Label> out;
  out.reserve(examples.size());
  for (const auto& e : examples) {
    out.push_back(map_nli_label(nli.classify(e.evidence_text, e.claim_text), space));
  }
  return out;
}

Label lm_fact_checker(const VerificationExample& example, const LmCheckerBackends& backends) {
  const auto mentions = backends.ner.recognize(example.claim_text);
  if (mentions.empty()) throw EntityFree("claim '" + example.id + "' has no named entity");
  const EntityMention& target = mentions.back();

  std::string masked = example.claim_text;
  masked.replace(target.char_start, target.char_end - target.char_start, kMaskToken);
  const auto fills = backends.filler.fill(example.evidence_text, masked, 1);
  if (fills.empty()) return Label::kNei;
  const std::string& completion = fills.front();
  if (casefold(trim(completion)) == casefold(trim(target.surface))) return Label::kSupported;

  std::string completed = masked;
  completed.replace(completed.find(kMaskToken), kMaskToken.size(), completion);
  const auto verdict = backends.nli.classify(example.evidence_text, completed);
  return verdict.label == NliLabel::kContradiction ? Label::kRefuted : Label::kNei;
}

std::vector<Label> lm_fact_checker_all(std::span<const VerificationExample> examples,
                                       const LmCheckerBackends& backends, LabelSpace space) {
  std::vector<Label> out;
  out.reserve(examples.size());
  for (const auto& e : examples) {
    Label label = Label::kNei;
    try {
      label = lm_fact_checker(e, backends);
    } catch (const EntityFree&) {
    }
    if (space == LabelSpace::kSR && label == Label::kNei) label = Label::kRefuted;
    out.push_back(label);
  }
  return out;
}

}  // namespace qacg
