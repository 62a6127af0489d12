#include "qacg/verifier.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <numeric>
#include <ostream>
#include <set>
#include <sstream>

#include <json.hpp>

#include "qacg/errors.hpp"
#include "qacg/evalkit.hpp"
#include "qacg/rng.hpp"

namespace qacg {

using json = nlohmann::json;
using ordered_json = nlohmann::ordered_json;

void TrainConfig::validate() const {
  if (batch_size < 1) throw UsageError("batch_size must be >= 1");
  if (epochs < 1) throw UsageError("epochs must be >= 1");
  if (!(learning_rate > 0.0) || !std::isfinite(learning_rate)) {
    throw UsageError("learning_rate must be positive");
  }
  if (!(selection_fraction >= 0.0 && selection_fraction < 1.0)) {
    throw UsageError("selection_fraction must be in [0, 1)");
  }
}

namespace {

std::vector<Label> gold_labels(std::span<const VerificationExample> examples) {
  std::vector<Label> out;
  out.reserve(examples.size());
  for (const auto& e : examples) out.push_back(e.label);
  return out;
}

std::vector<Label> predicted_labels(const std::vector<Prediction>& preds) {
  std::vector<Label> out;
  out.reserve(preds.size());
  for (const auto& p : preds) out.push_back(p.label);
  return out;
}

void check_label_space(std::span<const VerificationExample> examples, LabelSpace space) {
  for (const auto& e : examples) {
    if (!contains(space, e.label)) {
      throw DataError("example '" + e.id + "' has label " + std::string(to_string(e.label)) +
                      " outside label space " + std::string(to_string(space)));
    }
  }
}

void check_predictions(const std::vector<Prediction>& preds, std::size_t expected,
                       LabelSpace space, const std::string& backend) {
  if (preds.size() != expected) {
    throw BackendError(backend + ": returned " + std::to_string(preds.size()) +
                       " predictions for " + std::to_string(expected) + " examples");
  }
  for (const auto& p : preds) {
    if (!contains(space, p.label)) throw BackendError(backend + ": label outside label space");
    if (p.scores.empty()) continue;
    if (p.scores.size() != num_classes(space)) {
      throw BackendError(backend + ": wrong number of class scores");
    }
    double sum = 0.0;
    for (double s : p.scores) {
      if (!std::isfinite(s)) throw BackendError(backend + ": non-finite class score");
      sum += s;
    }
    if (std::abs(sum - 1.0) > 1e-6) throw BackendError(backend + ": class scores do not sum to 1");
  }
}

}  // namespace

ModelHandle train(std::span<const VerificationExample> examples, TextPairClassifier& backend,
                  const TrainConfig& config, const ModelHandle* warm_start) {
  config.validate();
  if (examples.empty()) throw DataError("train: no training examples");
  check_label_space(examples, config.label_space);
  std::set<Label> distinct;
  for (const auto& e : examples) distinct.insert(e.label);
  if (distinct.size() < 2) {
    throw DataError("train: degenerate training set with a single class (" +
                    std::string(to_string(*distinct.begin())) + ")");
  }

  std::vector<std::size_t> order(examples.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  Rng split_rng(derive_seed(config.seed, "split"));
  order = split_rng.sample(std::move(order), order.size());
  const auto n_selection = static_cast<std::size_t>(
      std::floor(static_cast<double>(examples.size()) * config.selection_fraction));

  std::vector<VerificationExample> selection;
  std::vector<VerificationExample> training;
  for (std::size_t i = 0; i < order.size(); ++i) {
    (i < n_selection ? selection : training).push_back(examples[order[i]]);
  }
  const std::vector<VerificationExample>& selection_set = selection.empty() ? training : selection;

  if (warm_start != nullptr) {
    if (warm_start->backend != backend.name()) {
      throw DataError("warm start model uses backend '" + warm_start->backend + "', not '" +
                      backend.name() + "'");
    }
    if (warm_start->config.label_space != config.label_space) {
      throw DataError("warm start model has a different label space");
    }
    backend.load(warm_start->payload);
  } else {
    backend.reset(config.label_space, config.seed);
  }

  ModelHandle model;
  model.backend = backend.name();
  model.config = config;
  model.n_train = training.size();
  model.n_selection = selection.size();

  double best = -1.0;
  const auto selection_gold = gold_labels(selection_set);
  for (int epoch = 1; epoch <= config.epochs; ++epoch) {
    Rng epoch_rng(derive_seed(config.seed, "epoch:" + std::to_string(epoch)));
    std::vector<std::size_t> visit(training.size());
    std::iota(visit.begin(), visit.end(), std::size_t{0});
    visit = epoch_rng.sample(std::move(visit), visit.size());
    std::vector<VerificationExample> batch;
    batch.reserve(config.batch_size);
    for (std::size_t i = 0; i < visit.size(); ++i) {
      batch.push_back(training[visit[i]]);
      if (batch.size() == config.batch_size || i + 1 == visit.size()) {
        backend.fit_batch(batch, config.learning_rate);
        batch.clear();
      }
    }
    const auto preds = backend.predict(selection_set);
    check_predictions(preds, selection_set.size(), config.label_space, backend.name());
    const double f1 =
        macro_prf(selection_gold, predicted_labels(preds), config.label_space).macro.f1;
    model.history.push_back({epoch, f1});
    if (f1 > best) {
      best = f1;
      model.best_epoch = epoch;
      model.payload = backend.save();
    }
  }
  return model;
}

std::vector<Prediction> predict(const ModelHandle& model, TextPairClassifier& backend,
                                std::span<const VerificationExample> examples) {
  if (model.backend != backend.name()) {
    throw DataError("model was trained with backend '" + model.backend + "', not '" +
                    backend.name() + "'");
  }
  check_label_space(examples, model.config.label_space);
  if (examples.empty()) return {};
  backend.load(model.payload);
  auto preds = backend.predict(examples);
  check_predictions(preds, examples.size(), model.config.label_space, backend.name());
  return preds;
}

void save_model(const ModelHandle& model, const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  ordered_json config;
  config["backend"] = model.backend;
  config["label_space"] = to_string(model.config.label_space);
  config["batch_size"] = model.config.batch_size;
  config["learning_rate"] = model.config.learning_rate;
  config["epochs"] = model.config.epochs;
  config["seed"] = model.config.seed;
  config["selection_fraction"] = model.config.selection_fraction;

  ordered_json meta;
  meta["format_version"] = 1;
  meta["best_epoch"] = model.best_epoch;
  meta["n_train"] = model.n_train;
  meta["n_selection"] = model.n_selection;
  meta["history"] = ordered_json::array();
  for (const auto& h : model.history) {
    meta["history"].push_back({{"epoch", h.epoch}, {"selection_macro_f1", h.selection_macro_f1}});
  }

  auto write = [&](const std::string& name, const std::string& content) {
    std::ofstream out(dir / name, std::ios::binary);
    if (!out) throw DataError("cannot write '" + (dir / name).string() + "'");
    out << content;
  };
  write("config.json", config.dump(2) + "\n");
  write("payload.bin", model.payload);
  write("metadata.json", meta.dump(2) + "\n");
}

ModelHandle load_model(const std::filesystem::path& dir) {
  auto read = [&](const std::string& name) {
    std::ifstream in(dir / name, std::ios::binary);
    if (!in) throw DataError("cannot read '" + (dir / name).string() + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
  };
  ModelHandle model;
  try {
    const json config = json::parse(read("config.json"));
    const json meta = json::parse(read("metadata.json"));
    model.backend = config.at("backend").get<std::string>();
    const auto space_text = config.at("label_space").get<std::string>();
    auto space = parse_label_space(space_text);
    if (!space) throw DataError("model config: unknown label space '" + space_text + "'");
    model.config.label_space = *space;
    model.config.batch_size = config.at("batch_size").get<std::size_t>();
    model.config.learning_rate = config.at("learning_rate").get<double>();
    model.config.epochs = config.at("epochs").get<int>();
    model.config.seed = config.at("seed").get<std::uint64_t>();
    model.config.selection_fraction = config.value("selection_fraction", 0.1);
    model.best_epoch = meta.at("best_epoch").get<int>();
    model.n_train = meta.at("n_train").get<std::size_t>();
    model.n_selection = meta.at("n_selection").get<std::size_t>();
    for (const auto& h : meta.at("history")) {
      model.history.push_back(
          {h.at("epoch").get<int>(), h.at("selection_macro_f1").get<double>()});
    }
  } catch (const json::exception& e) {
    throw DataError("malformed model directory '" + dir.string() + "': " + e.what());
  }
  model.payload = read("payload.bin");
  return model;
}

std::string_view to_string(Arm arm) { return arm == Arm::kPretrained ? "pretrained" : "scratch"; }

double Curve::mean(std::size_t size, Arm arm) const {
  double sum = 0.0;
  std::size_t n = 0;
  for (const auto& p : points) {
    if (p.size == size && p.arm == arm) {
      sum += p.macro_f1;
      ++n;
    }
  }
  return n == 0 ? std::numeric_limits<double>::quiet_NaN() : sum / static_cast<double>(n);
}

std::vector<VerificationExample> stratified_sample(std::span<const VerificationExample> pool,
                                                   std::size_t k, LabelSpace space,
                                                   std::uint64_t seed) {
  std::vector<bool> keep(pool.size(), false);
  for (Label label : labels_of(space)) {
    std::vector<std::size_t> members;
    for (std::size_t i = 0; i < pool.size(); ++i) {
      if (pool[i].label == label) members.push_back(i);
    }
    if (members.size() < k) {
      throw DataError("few-shot pool has " + std::to_string(members.size()) + " " +
                      std::string(to_string(label)) + " examples, fewer than k = " +
                      std::to_string(k));
    }
    Rng rng(derive_seed(seed, to_string(label)));
    for (std::size_t i : rng.sample(std::move(members), k)) keep[i] = true;
  }
  std::vector<VerificationExample> out;
  for (std::size_t i = 0; i < pool.size(); ++i) {
    if (keep[i]) out.push_back(pool[i]);
  }
  return out;
}

Curve fewshot_curve(std::span<const VerificationExample> pretrain_data,
                    std::span<const VerificationExample> labeled_pool,
                    std::span<const VerificationExample> test_set, const ClassifierFactory& factory,
                    const FewshotConfig& config) {
  Curve curve;
  if (config.sizes.empty()) return curve;
  for (std::size_t k : config.sizes) {
    if (k < 1) throw DataError("few-shot sizes must be positive");
  }
  const std::size_t largest = *std::max_element(config.sizes.begin(), config.sizes.end());
  for (Label label : labels_of(config.train.label_space)) {
    const auto available = static_cast<std::size_t>(
        std::count_if(labeled_pool.begin(), labeled_pool.end(),
                      [&](const auto& e) { return e.label == label; }));
    if (available < largest) {
      throw DataError("few-shot pool has " + std::to_string(available) + " " +
                      std::string(to_string(label)) + " examples, fewer than k = " +
                      std::to_string(largest));
    }
  }
  if (test_set.empty()) throw DataError("few-shot test set is empty");
  const auto test_gold = gold_labels(test_set);

  auto pretrain_backend = factory(Arm::kPretrained);
  const ModelHandle pretrained = train(pretrain_data, *pretrain_backend, config.train);

  for (std::size_t k : config.sizes) {
    for (std::uint64_t seed : config.seeds) {
      const auto sample = stratified_sample(labeled_pool, k, config.train.label_space,
                                            derive_seed(seed, "fewshot:" + std::to_string(k)));
      LabelCounts counts{};
      for (const auto& e : sample) ++count_of(counts, e.label);
      TrainConfig arm_config = config.train;
      arm_config.seed = seed;
      for (Arm arm : {Arm::kPretrained, Arm::kScratch}) {
        auto backend = factory(arm);
        const ModelHandle model =
            train(sample, *backend, arm_config, arm == Arm::kPretrained ? &pretrained : nullptr);
        const auto preds = predict(model, *backend, test_set);
        const double f1 =
            macro_prf(test_gold, predicted_labels(preds), config.train.label_space).macro.f1;
        curve.points.push_back({k, arm, seed, f1, counts});
      }
    }
  }
  return curve;
}

void write_curve_csv(std::ostream& out, const Curve& curve) {
  out << "size,arm,seed,macro_f1\n";
  char buf[32];
  for (const auto& p : curve.points) {
    std::snprintf(buf, sizeof(buf), "%.6f", p.macro_f1);
    out << p.size << ',' << to_string(p.arm) << ',' << p.seed << ',' << buf << '\n';
  }
}

}  // namespace qacg
