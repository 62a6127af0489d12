#pragma once

#include <cstdint>
#include <filesystem>
#include <string>

#include "qacg/claimgen.hpp"
#include "qacg/corpus.hpp"
#include "qacg/verifier.hpp"

namespace qacg {

inline constexpr int kConfigVersion = 1;

struct BackendConfig {
  // "stub" or "remote". "local-model" is only meaningful for the verifier
  // classifier, selected by TrainSettings::classifier.
  std::string kind = "stub";
  std::filesystem::path fixtures;
  std::string endpoint;
};

struct RunConfig {
  BackendConfig backend;
  WindowConfig passages;
  ClaimGenConfig claimgen;
  TrainConfig train;
  std::string classifier = "lexical";
  int workers = 1;
  std::uint64_t seed = 0;
};

/// Versioned JSON document; every key is optional:
///   {"version": 1,
///    "backend": {"kind": "stub", "fixtures": "fixtures.json", "endpoint": ""},
///    "passages": {"window": 5, "stride": 5},
///    "claimgen": {"k_replace": 5, "k_ext": 5},
///    "train": {"classifier": "lexical", "label_space": "SRN", "batch_size": 16,
///              "learning_rate": 1e-5, "epochs": 5, "selection_fraction": 0.1},
///    "workers": 1, "seed": 0}
/// Relative fixture paths resolve against the config file's directory.
RunConfig load_config(const std::filesystem::path& path);
RunConfig parse_config(std::string_view json_text, const std::filesystem::path& base_dir = {});

/// Canonical JSON rendering (fixed key order, two-space indent).
std::string config_to_json(const RunConfig& config);
/// fnv1a64 of config_to_json, as 16 hex digits.
std::string config_hash(const RunConfig& config);

}  // namespace qacg
