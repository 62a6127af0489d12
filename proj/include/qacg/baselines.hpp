#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "qacg/backends.hpp"
#include "qacg/dataset.hpp"
#include "qacg/errors.hpp"

namespace qacg {

/// n labels drawn uniformly from `space` with successive Rng(seed) draws.
std::vector<Label> random_guess(std::size_t n, LabelSpace space, std::uint64_t seed);

/// Ranks claims by descending score (ties by input index). Three-way: the
/// top floor(n/3) are REFUTED, the bottom floor(n/3) SUPPORTED, the rest
/// NEI, except that when n mod 3 == 2 the SUPPORTED band takes one of the
/// two leftovers so band sizes differ by at most one. Two-way: the top
/// floor(n/2) are REFUTED, the rest SUPPORTED. Throws DataError on an
/// empty input or a non-finite score (naming its index).
std::vector<Label> perplexity_bands(std::span<const double> scores, LabelSpace space);

/// Scores every claim with `scorer` and applies perplexity_bands. Throws
/// DataError naming the claim id on a non-finite perplexity.
std::vector<Label> perplexity_tercile(std::span<const VerificationExample> claims,
                                      const PerplexityScorer& scorer, LabelSpace space);

/// entailment -> SUPPORTED, contradiction -> REFUTED, neutral -> NEI. In the
/// two-way space neutral becomes whichever of entailment/contradiction
/// scored higher (SUPPORTED on a tie).
Label map_nli_label(const NliResult& result, LabelSpace space);

/// NLI with premise = evidence and hypothesis = claim, mapped per example.
std::vector<Label> nli_transfer(std::span<const VerificationExample> examples,
                                const NliClassifier& nli, LabelSpace space);

/// The claim has no recognizable named entity to mask.
class EntityFree : public DataError {
 public:
  using DataError::DataError;
};

struct LmCheckerBackends {
  const EntityRecognizer& ner;
  const MaskedLmFiller& filler;
  const NliClassifier& nli;
};

/// Masks the last named entity of the claim and asks the filler for its
/// top completion given the evidence. A case-folded match with the masked
/// entity is SUPPORTED. Otherwise the completed claim is checked against
/// the evidence with NLI: contradiction is REFUTED, anything else NEI (an
/// empty fill is NEI). Throws EntityFree when the claim has no entity.
Label lm_fact_checker(const VerificationExample& example, const LmCheckerBackends& backends);

/// Batch form. EntityFree examples are NEI. In the two-way space every NEI
/// outcome is reported as REFUTED.
std::vector<Label> lm_fact_checker_all(std::span<const VerificationExample> examples,
                                       const LmCheckerBackends& backends, LabelSpace space);

}  // namespace qacg
