#include "qacg/classifier.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <set>
#include <sstream>

#include "qacg/errors.hpp"
#include "qacg/rng.hpp"
#include "qacg/text.hpp"

namespace qacg {

namespace {

std::size_t index_in(LabelSpace space, Label label) {
  const auto labels = labels_of(space);
  auto it = std::find(labels.begin(), labels.end(), label);
  if (it == labels.end()) {
    throw DataError("label " + std::string(to_string(label)) + " outside label space " +
                    std::string(to_string(space)));
  }
  return static_cast<std::size_t>(it - labels.begin());
}

std::string read_header(std::istream& in, std::string_view expected) {
  std::string magic;
  in >> magic;
  if (magic != expected) {
    throw DataError("model payload is not a '" + std::string(expected) + "' model");
  }
  std::string space;
  in >> space;
  return space;
}

LabelSpace space_from(const std::string& text) {
  auto space = parse_label_space(text);
  if (!space) throw DataError("model payload: unknown label space '" + text + "'");
  return *space;
}

}  // namespace

void MajorityClassifier::reset(LabelSpace space, std::uint64_t /*seed*/) {
  space_ = space;
  counts_ = {};
}

void MajorityClassifier::fit_batch(std::span<const VerificationExample> batch,
                                   double /*learning_rate*/) {
  for (const auto& e : batch) {
    index_in(space_, e.label);
    ++count_of(counts_, e.label);
  }
}

std::vector<Prediction> MajorityClassifier::predict(
    std::span<const VerificationExample> examples) const {
  const auto labels = labels_of(space_);
  Label best = labels.front();
  for (Label l : labels) {
    if (count_of(counts_, l) > count_of(counts_, best)) best = l;
  }
  std::vector<double> scores(labels.size(), 0.0);
  scores[index_in(space_, best)] = 1.0;
  return std::vector<Prediction>(examples.size(), Prediction{best, scores});
}

std::string MajorityClassifier::save() const {
  std::ostringstream out;
  out << "majority-v1 " << to_string(space_) << ' ' << counts_[0] << ' ' << counts_[1] << ' '
      << counts_[2] << '\n';
  return out.str();
}

void MajorityClassifier::load(std::string_view payload) {
  std::istringstream in{std::string(payload)};
  space_ = space_from(read_header(in, "majority-v1"));
  if (!(in >> counts_[0] >> counts_[1] >> counts_[2])) {
    throw DataError("majority model payload is truncated");
  }
}

LexicalClassifier::LexicalClassifier(std::size_t buckets) : buckets_(buckets) {
  if (buckets_ == 0) throw UsageError("lexical classifier needs at least one bucket");
  reset(LabelSpace::kSRN, 0);
}

void LexicalClassifier::reset(LabelSpace space, std::uint64_t /*seed*/) {
  space_ = space;
  weights_.assign(num_classes(space) * (buckets_ + 1), 0.0);
}

std::vector<LexicalClassifier::Feature> LexicalClassifier::featurize(
    const VerificationExample& example) const {
  const auto claim = word_tokens(example.claim_text);
  const auto evidence = word_tokens(example.evidence_text);
  const std::set<std::string> evidence_set(evidence.begin(), evidence.end());

  std::vector<Feature> features;
  auto add = [&](std::string_view key, double value) {
    features.push_back({static_cast<std::size_t>(fnv1a64(key) % buckets_), value});
  };
  std::size_t shared = 0;
  for (std::size_t i = 0; i < claim.size(); ++i) {
    const bool in_evidence = evidence_set.count(claim[i]) > 0;
    shared += in_evidence ? 1 : 0;
    add("u:" + claim[i], 1.0);
    add((in_evidence ? "in:" : "out:") + claim[i], 1.0);
    if (i + 1 < claim.size()) add("b:" + claim[i] + ' ' + claim[i + 1], 1.0);
  }
  const double overlap =
      claim.empty() ? 0.0 : static_cast<double>(shared) / static_cast<double>(claim.size());
  add("#overlap", overlap);
  add("#missing", claim.empty() ? 0.0 : 1.0 - overlap);
  return features;
}

std::vector<double> LexicalClassifier::probabilities(const std::vector<Feature>& features) const {
  const std::size_t k = num_classes(space_);
  const std::size_t stride = buckets_ + 1;
  std::vector<double> logits(k, 0.0);
  for (std::size_t c = 0; c < k; ++c) {
    const double* w = weights_.data() + c * stride;
    double z = w[buckets_];
    for (const auto& f : features) z += w[f.index] * f.value;
    logits[c] = z;
  }
  const double top = *std::max_element(logits.begin(), logits.end());
  double sum = 0.0;
  for (double& z : logits) {
    z = std::exp(z - top);
    sum += z;
  }
  for (double& z : logits) z /= sum;
  return logits;
}

void LexicalClassifier::fit_batch(std::span<const VerificationExample> batch,
                                  double learning_rate) {
  if (batch.empty()) return;
  const std::size_t k = num_classes(space_);
  const std::size_t stride = buckets_ + 1;
  const double step = learning_rate / static_cast<double>(batch.size());
  // Gradients are computed against the pre-batch weights, then applied.
  std::vector<std::pair<std::size_t, double>> updates;
  for (const auto& e : batch) {
    const std::size_t gold = index_in(space_, e.label);
    const auto features = featurize(e);
    const auto probs = probabilities(features);
    for (std::size_t c = 0; c < k; ++c) {
      const double err = probs[c] - (c == gold ? 1.0 : 0.0);
      if (err == 0.0) continue;
      for (const auto& f : features) updates.emplace_back(c * stride + f.index, err * f.value);
      updates.emplace_back(c * stride + buckets_, err);
    }
  }
  for (const auto& [index, grad] : updates) weights_[index] -= step * grad;
}

std::vector<Prediction> LexicalClassifier::predict(
    std::span<const VerificationExample> examples) const {
  const auto labels = labels_of(space_);
  std::vector<Prediction> out;
  out.reserve(examples.size());
  for (const auto& e : examples) {
    auto probs = probabilities(featurize(e));
    const auto best = static_cast<std::size_t>(
        std::max_element(probs.begin(), probs.end()) - probs.begin());
    out.push_back({labels[best], std::move(probs)});
  }
  return out;
}

std::string LexicalClassifier::save() const {
  std::ostringstream out;
  out << "lexical-v1 " << to_string(space_) << ' ' << buckets_ << '\n';
  out.precision(17);
  for (std::size_t i = 0; i < weights_.size(); ++i) {
    if (weights_[i] != 0.0) out << i << ' ' << weights_[i] << '\n';
  }
  return out.str();
}

void LexicalClassifier::load(std::string_view payload) {
  std::istringstream in{std::string(payload)};
  const LabelSpace space = space_from(read_header(in, "lexical-v1"));
  std::size_t buckets = 0;
  if (!(in >> buckets) || buckets == 0) throw DataError("lexical model payload: bad bucket count");
  buckets_ = buckets;
  reset(space, 0);
  std::size_t index = 0;
  double value = 0.0;
  while (in >> index >> value) {
    if (index >= weights_.size()) throw DataError("lexical model payload: weight out of range");
    weights_[index] = value;
  }
  if (!in.eof()) throw DataError("lexical model payload: malformed weight line");
}

TableClassifier::TableClassifier(std::map<std::string, Label> table, Label fallback,
                                 LabelSpace space)
    : table_(std::move(table)), fallback_(fallback), space_(space) {}

void TableClassifier::reset(LabelSpace space, std::uint64_t /*seed*/) { space_ = space; }

void TableClassifier::fit_batch(std::span<const VerificationExample> batch,
                                double /*learning_rate*/) {
  for (const auto& e : batch) index_in(space_, e.label);
}

std::vector<Prediction> TableClassifier::predict(
    std::span<const VerificationExample> examples) const {
  std::vector<Prediction> out;
  out.reserve(examples.size());
  for (const auto& e : examples) {
    auto it = table_.find(e.claim_text);
    out.push_back({it == table_.end() ? fallback_ : it->second, {}});
  }
  return out;
}

std::string TableClassifier::save() const {
  return "table-v1 " + std::string(to_string(space_)) + "\n";
}

void TableClassifier::load(std::string_view payload) {
  std::istringstream in{std::string(payload)};
  space_ = space_from(read_header(in, "table-v1"));
}

std::unique_ptr<TextPairClassifier> make_classifier(std::string_view name) {
  if (name == "majority") return std::make_unique<MajorityClassifier>();
  if (name == "lexical") return std::make_unique<LexicalClassifier>();
  throw UsageError("unknown classifier backend '" + std::string(name) +
                   "' (expected majority or lexical)");
}

}  // namespace qacg
