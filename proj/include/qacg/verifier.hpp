#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <iosfwd>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "qacg/classifier.hpp"
#include "qacg/dataset.hpp"

namespace qacg {

struct TrainConfig {
  std::size_t batch_size = 16;
  double learning_rate = 1e-5;
  int epochs = 5;
  LabelSpace label_space = LabelSpace::kSRN;
  std::uint64_t seed = 0;
  // Share of the training examples held out to pick the best epoch.
  double selection_fraction = 0.1;

  /// Throws UsageError on batch_size < 1, epochs < 1, a non-positive
  /// learning rate or a selection fraction outside [0, 1).
  void validate() const;
};

struct EpochRecord {
  int epoch = 0;
  double selection_macro_f1 = 0.0;
};

/// A trained model: the backend name, its serialized best-epoch state and
/// training metadata.
struct ModelHandle {
  std::string backend;
  TrainConfig config;
  std::string payload;
  int best_epoch = 0;
  std::vector<EpochRecord> history;
  std::size_t n_train = 0;
  std::size_t n_selection = 0;
};

/// Trains `backend` for config.epochs epochs and keeps the epoch with the
/// best macro F1 on a held-out selection split. The split takes the first
/// floor(n * selection_fraction) examples of a Rng(derive_seed(seed,
/// "split")) shuffle; when that is empty, selection runs on the training
/// examples. Epoch e visits training examples in a Rng(derive_seed(seed,
/// "epoch:<e>")) shuffle, in batches of batch_size. Ties keep the earlier
/// epoch.
///
/// `warm_start`, when given, is loaded into the backend instead of a reset
/// and must share the label space.
///
/// Throws DataError on empty input, a label outside the label space, or a
/// single-class training set.
ModelHandle train(std::span<const VerificationExample> examples, TextPairClassifier& backend,
                  const TrainConfig& config, const ModelHandle* warm_start = nullptr);

/// One prediction per example, in order. Throws DataError when `backend`
/// is not the model's backend or an example's label is outside the model's
/// label space, BackendError when returned scores are malformed.
std::vector<Prediction> predict(const ModelHandle& model, TextPairClassifier& backend,
                                std::span<const VerificationExample> examples);

/// Directory layout: config.json, payload.bin, metadata.json.
void save_model(const ModelHandle& model, const std::filesystem::path& dir);
ModelHandle load_model(const std::filesystem::path& dir);

enum class Arm { kPretrained, kScratch };

std::string_view to_string(Arm arm);

struct CurvePoint {
  std::size_t size = 0;
  Arm arm = Arm::kScratch;
  std::uint64_t seed = 0;
  double macro_f1 = 0.0;
  // Per-label composition of the sampled training subset.
  LabelCounts sample_counts{};
};

struct Curve {
  std::vector<CurvePoint> points;

  /// Mean macro F1 over seeds for (size, arm); NaN when absent.
  double mean(std::size_t size, Arm arm) const;
};

/// Draws exactly k examples of every label in `space` from `pool`. Label L
/// is sampled from its examples in pool order with Rng(derive_seed(seed,
/// to_string(L))). Throws DataError naming k when a class is too small.
std::vector<VerificationExample> stratified_sample(std::span<const VerificationExample> pool,
                                                   std::size_t k, LabelSpace space,
                                                   std::uint64_t seed);

using ClassifierFactory = std::function<std::unique_ptr<TextPairClassifier>(Arm)>;

struct FewshotConfig {
  std::vector<std::size_t> sizes{10, 50, 100};
  std::vector<std::uint64_t> seeds{1, 2, 3};
  TrainConfig train;
};

/// For every size k and seed s: sample k examples per class from
/// `labeled_pool` (stratified_sample with derive_seed(s, "fewshot:<k>")),
/// fine-tune the model pretrained on `pretrain_data` (pretrained arm) and
/// train a fresh model (scratch arm) on it with seed s, and score both on
/// `test_set`. Points are ordered by size, seed, then arm.
Curve fewshot_curve(std::span<const VerificationExample> pretrain_data,
                    std::span<const VerificationExample> labeled_pool,
                    std::span<const VerificationExample> test_set, const ClassifierFactory& factory,
                    const FewshotConfig& config);

/// CSV with header size,arm,seed,macro_f1.
void write_curve_csv(std::ostream& out, const Curve& curve);

}  // namespace qacg
