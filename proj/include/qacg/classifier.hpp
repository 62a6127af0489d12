#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "qacg/backends.hpp"
#include "qacg/dataset.hpp"

namespace qacg {

struct Prediction {
  Label label = Label::kSupported;
  // Empty, or one probability per class of the model's label space.
  std::vector<double> scores;
};

/// Trainable (evidence, claim) classifier. Instances are stateful and are
/// used by one training or prediction job at a time.
class TextPairClassifier : public Backend {
 public:
  bool thread_safe() const override { return false; }

  /// Discards any learned state.
  virtual void reset(LabelSpace space, std::uint64_t seed) = 0;
  virtual void fit_batch(std::span<const VerificationExample> batch, double learning_rate) = 0;
  virtual std::vector<Prediction> predict(std::span<const VerificationExample> examples) const = 0;
  /// Serialized learned state; load(save()) restores an identical model.
  virtual std::string save() const = 0;
  virtual void load(std::string_view payload) = 0;
  virtual LabelSpace label_space() const = 0;
};

/// Predicts the most frequent training label (ties go to the earlier label
/// in SUPPORTED, REFUTED, NEI order).
class MajorityClassifier final : public TextPairClassifier {
 public:
  std::string name() const override { return "majority"; }
  void reset(LabelSpace space, std::uint64_t seed) override;
  void fit_batch(std::span<const VerificationExample> batch, double learning_rate) override;
  std::vector<Prediction> predict(std::span<const VerificationExample> examples) const override;
  std::string save() const override;
  void load(std::string_view payload) override;
  LabelSpace label_space() const override { return space_; }

 private:
  LabelSpace space_ = LabelSpace::kSRN;
  LabelCounts counts_{};
};

/// Multinomial logistic regression over hashed lexical features of the
/// pair: claim unigrams and bigrams, claim unigrams split by whether they
/// occur in the evidence, and the overlap ratio. Trained by mini-batch SGD
/// on the mean cross-entropy.
class LexicalClassifier final : public TextPairClassifier {
 public:
  static constexpr std::size_t kDefaultBuckets = std::size_t{1} << 16;

  explicit LexicalClassifier(std::size_t buckets = kDefaultBuckets);
  std::string name() const override { return "lexical"; }
  void reset(LabelSpace space, std::uint64_t seed) override;
  void fit_batch(std::span<const VerificationExample> batch, double learning_rate) override;
  std::vector<Prediction> predict(std::span<const VerificationExample> examples) const override;
  std::string save() const override;
  void load(std::string_view payload) override;
  LabelSpace label_space() const override { return space_; }

 private:
  struct Feature {
    std::size_t index;
    double value;
  };
  std::vector<Feature> featurize(const VerificationExample& example) const;
  std::vector<double> probabilities(const std::vector<Feature>& features) const;

  std::size_t buckets_;
  LabelSpace space_ = LabelSpace::kSRN;
  // weights_[class * (buckets_ + 1) + feature]; the last slot is the bias.
  std::vector<double> weights_;
};

/// Fixed prediction table keyed by claim text; training is a no-op. Used to
/// drive protocol runners with known predictions.
class TableClassifier final : public TextPairClassifier {
 public:
  TableClassifier(std::map<std::string, Label> table, Label fallback, LabelSpace space);
  std::string name() const override { return "table"; }
  void reset(LabelSpace space, std::uint64_t seed) override;
  void fit_batch(std::span<const VerificationExample> batch, double learning_rate) override;
  std::vector<Prediction> predict(std::span<const VerificationExample> examples) const override;
  std::string save() const override;
  void load(std::string_view payload) override;
  LabelSpace label_space() const override { return space_; }

 private:
  std::map<std::string, Label> table_;
  Label fallback_;
  LabelSpace space_;
};

/// "majority" or "lexical"; throws UsageError otherwise.
std::unique_ptr<TextPairClassifier> make_classifier(std::string_view name);

}  // namespace qacg
