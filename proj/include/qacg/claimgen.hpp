#pragma once

#include <cstdint>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "qacg/backends.hpp"
#include "qacg/corpus.hpp"
#include "qacg/types.hpp"

namespace qacg {

inline constexpr int kDefaultReplacementPool = 5;

struct ClaimGenConfig {
  // Answer replacement samples from this many most-similar phrases.
  int k_replace = kDefaultReplacementPool;
  // Extension sentences drawn for NEI generation.
  int k_ext = kDefaultExtensionSize;
};

/// Skip and failure counters for one or more passages.
struct GenerationStats {
  std::size_t passages = 0;
  std::size_t passages_without_entities = 0;
  std::size_t no_replacement = 0;
  std::size_t empty_extension = 0;
  // Extension entities whose surface also occurs in the passage.
  std::size_t nei_answer_in_passage = 0;

  GenerationStats& operator+=(const GenerationStats& other);
};

/// Recognizes entities in the passage, keeps the first mention of each
/// (surface, etype), and generates one question per kept mention.
std::vector<QAPair> core_qa_pairs(const EvidencePassage& passage,
                                  const GenerationBackends& backends,
                                  GenerationStats* stats = nullptr);

/// One SUPPORTED claim per core QA pair.
std::vector<GeneratedClaim> gen_supported(const EvidencePassage& passage,
                                          const GenerationBackends& backends);
std::vector<GeneratedClaim> gen_supported(const EvidencePassage& passage,
                                          const GenerationBackends& backends,
                                          const std::vector<QAPair>& qa_pairs);

/// Picks a same-type, low-overlap substitute for `original` uniformly among
/// the top-k similar phrases that pass the overlap rule (see replacement.hpp).
/// nullopt means no candidate survived.
std::optional<SimilarPhrase> replace_answer(const EntityMention& original,
                                            const PhraseIndex& index, int k,
                                            std::uint64_t seed);

/// One REFUTED claim per core QA pair whose answer can be replaced. The
/// replacement for pair i is drawn with derive_seed(seed, "replace:<i>").
std::vector<GeneratedClaim> gen_refuted(const EvidencePassage& passage,
                                        const GenerationBackends& backends,
                                        std::uint64_t seed, const ClaimGenConfig& config = {},
                                        GenerationStats* stats = nullptr);
std::vector<GeneratedClaim> gen_refuted(const EvidencePassage& passage,
                                        const GenerationBackends& backends,
                                        const std::vector<QAPair>& qa_pairs,
                                        std::uint64_t seed, const ClaimGenConfig& config = {},
                                        GenerationStats* stats = nullptr);

/// NEI claims from entities in extension sentences. Questions are asked
/// against the passage followed by the extension sentences; the claim's
/// evidence stays the original passage. `seed` drives extension sampling.
std::vector<GeneratedClaim> gen_nei(const EvidencePassage& passage, const Article& article,
                                    const GenerationBackends& backends, std::uint64_t seed,
                                    const ClaimGenConfig& config = {},
                                    GenerationStats* stats = nullptr);

struct BackendFailure {
  std::string passage_id;
  std::string message;
};

struct GenerationManifest {
  std::uint64_t seed = 0;
  std::set<Label> labels;
  LabelCounts counts{};
  GenerationStats stats;
  std::vector<BackendFailure> backend_failures;
  std::vector<std::string> warnings;
};

struct GenerationResult {
  ClaimDataset dataset;
  GenerationManifest manifest;
};

/// Per-passage seed: derive_seed(seed, passage_id). Within a passage,
/// refuted generation uses derive_seed(passage_seed, "refuted") and NEI
/// generation derive_seed(passage_seed, "nei").
std::uint64_t passage_seed(std::uint64_t seed, const std::string& passage_id);

/// Runs the requested generators over every passage. Output is ordered by
/// passage_id, then SUPPORTED/REFUTED/NEI, then entity offset, and does not
/// depend on `workers`. A backend failure drops that passage's claims and is
/// recorded in the manifest.
GenerationResult generate_all(const Corpus& corpus, const GenerationBackends& backends,
                              const std::set<Label>& labels, const ClaimGenConfig& config,
                              std::uint64_t seed, int workers = 1);

}  // namespace qacg
