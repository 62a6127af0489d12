#include "qacg/config.hpp"

#include <fstream>
#include <sstream>

#include <json.hpp>

#include "qacg/errors.hpp"
#include "qacg/rng.hpp"
#include "qacg/text.hpp"

namespace qacg {

using json = nlohmann::json;
using ordered_json = nlohmann::ordered_json;

RunConfig parse_config(std::string_view json_text, const std::filesystem::path& base_dir) {
  RunConfig config;
  try {
    const json doc = json::parse(json_text);
    const int version = doc.value("version", kConfigVersion);
    if (version != kConfigVersion) {
      throw UsageError("unsupported config version " + std::to_string(version));
    }
    if (auto b = doc.find("backend"); b != doc.end()) {
      config.backend.kind = b->value("kind", config.backend.kind);
      if (b->contains("fixtures")) {
        std::filesystem::path fixtures = b->at("fixtures").get<std::string>();
        config.backend.fixtures =
            fixtures.is_relative() && !base_dir.empty() ? base_dir / fixtures : fixtures;
      }
      config.backend.endpoint = b->value("endpoint", config.backend.endpoint);
    }
    if (auto p = doc.find("passages"); p != doc.end()) {
      config.passages.window = p->value("window", config.passages.window);
      config.passages.stride = p->value("stride", config.passages.stride);
    }
    if (auto c = doc.find("claimgen"); c != doc.end()) {
      config.claimgen.k_replace = c->value("k_replace", config.claimgen.k_replace);
      config.claimgen.k_ext = c->value("k_ext", config.claimgen.k_ext);
    }
    if (auto t = doc.find("train"); t != doc.end()) {
      config.classifier = t->value("classifier", config.classifier);
      if (t->contains("label_space")) {
        const auto text = t->at("label_space").get<std::string>();
        auto space = parse_label_space(text);
        if (!space) throw UsageError("config: unknown label_space '" + text + "'");
        config.train.label_space = *space;
      }
      config.train.batch_size = t->value("batch_size", config.train.batch_size);
      config.train.learning_rate = t->value("learning_rate", config.train.learning_rate);
      config.train.epochs = t->value("epochs", config.train.epochs);
      config.train.selection_fraction =
          t->value("selection_fraction", config.train.selection_fraction);
    }
    config.workers = doc.value("workers", config.workers);
    config.seed = doc.value("seed", config.seed);
  } catch (const json::exception& e) {
    throw UsageError(std::string("malformed config: ") + e.what());
  }
  return config;
}

RunConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw UsageError("cannot open config '" + path.string() + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_config(buf.str(), path.parent_path());
}

std::string config_to_json(const RunConfig& c) {
  ordered_json doc;
  doc["version"] = kConfigVersion;
  doc["backend"] = {{"kind", c.backend.kind},
                    {"fixtures", c.backend.fixtures.string()},
                    {"endpoint", c.backend.endpoint}};
  doc["passages"] = {{"window", c.passages.window}, {"stride", c.passages.stride}};
  doc["claimgen"] = {{"k_replace", c.claimgen.k_replace}, {"k_ext", c.claimgen.k_ext}};
  doc["train"] = {{"classifier", c.classifier},
                  {"label_space", to_string(c.train.label_space)},
                  {"batch_size", c.train.batch_size},
                  {"learning_rate", c.train.learning_rate},
                  {"epochs", c.train.epochs},
                  {"selection_fraction", c.train.selection_fraction}};
  doc["workers"] = c.workers;
  doc["seed"] = c.seed;
  return doc.dump(2);
}

std::string config_hash(const RunConfig& config) {
  return hex64(fnv1a64(config_to_json(config)));
}

}  // namespace qacg
