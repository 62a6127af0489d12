#include "qacg/dataset.hpp"

#include <algorithm>
#include <fstream>
#include <istream>
#include <map>
#include <numeric>
#include <ostream>
#include <sstream>
#include <tuple>
#include <unordered_map>

#include <json.hpp>

#include "qacg/corpus.hpp"
#include "qacg/errors.hpp"
#include "qacg/rng.hpp"
#include "qacg/text.hpp"

namespace qacg {

using json = nlohmann::json;
using ordered_json = nlohmann::ordered_json;

ClaimDataset dedup(const ClaimDataset& dataset) {
  // key -> index of the claim kept so far
  std::map<std::tuple<std::string, std::string, Label>, std::size_t> keeper;
  for (std::size_t i = 0; i < dataset.claims.size(); ++i) {
    const auto& c = dataset.claims[i];
    auto [it, inserted] = keeper.try_emplace({c.text, c.passage_id(), c.label}, i);
    if (!inserted && c.claim_id < dataset.claims[it->second].claim_id) it->second = i;
  }
  std::vector<bool> keep(dataset.claims.size(), false);
  for (const auto& [key, index] : keeper) keep[index] = true;

  ClaimDataset out;
  for (std::size_t i = 0; i < dataset.claims.size(); ++i) {
    if (keep[i]) out.claims.push_back(dataset.claims[i]);
  }
  return out;
}

ClaimDataset filter_labels(const ClaimDataset& dataset, const std::set<Label>& labels) {
  ClaimDataset out;
  std::copy_if(dataset.claims.begin(), dataset.claims.end(), std::back_inserter(out.claims),
               [&](const GeneratedClaim& c) { return labels.count(c.label) > 0; });
  return out;
}

ClaimDataset filter_balanced(const ClaimDataset& dataset, std::size_t n_per_class,
                             std::uint64_t seed, const std::optional<std::set<Label>>& labels) {
  std::set<Label> wanted;
  if (labels) {
    wanted = *labels;
  } else {
    for (const auto& c : dataset.claims) wanted.insert(c.label);
  }

  std::vector<bool> keep(dataset.claims.size(), false);
  for (Label label : wanted) {
    std::vector<std::size_t> members;
    for (std::size_t i = 0; i < dataset.claims.size(); ++i) {
      if (dataset.claims[i].label == label) members.push_back(i);
    }
    if (members.size() < n_per_class) {
      throw DataError("class " + std::string(to_string(label)) + " has " +
                      std::to_string(members.size()) + " claims, fewer than the " +
                      std::to_string(n_per_class) + " requested");
    }
    Rng rng(derive_seed(seed, to_string(label)));
    for (std::size_t i : rng.sample(std::move(members), n_per_class)) keep[i] = true;
  }

  ClaimDataset out;
  for (std::size_t i = 0; i < dataset.claims.size(); ++i) {
    if (keep[i]) out.claims.push_back(dataset.claims[i]);
  }
  return out;
}

std::vector<VerificationExample> to_examples(const ClaimDataset& dataset) {
  std::vector<VerificationExample> out;
  out.reserve(dataset.claims.size());
  for (const auto& c : dataset.claims) {
    out.push_back({c.claim_id, c.text, c.evidence.text, c.label});
  }
  return out;
}

void write_examples_jsonl(std::ostream& out, const std::vector<VerificationExample>& examples,
                          bool fever_labels) {
  for (const auto& e : examples) {
    ordered_json j;
    j["id"] = e.id;
    j["claim"] = e.claim_text;
    j["evidence"] = e.evidence_text;
    j["label"] = fever_labels ? to_fever_string(e.label) : to_string(e.label);
    out << j.dump() << '\n';
  }
}

namespace {

VerificationExample example_from_json(const json& j, std::size_t line_no) {
  VerificationExample e;
  e.id = j.value("id", std::to_string(line_no));
  e.claim_text = j.at("claim").get<std::string>();
  e.evidence_text = j.at("evidence").get<std::string>();
  const auto label_text = j.at("label").get<std::string>();
  auto label = parse_label(label_text);
  if (!label) throw ParseError("unknown label '" + label_text + "'", line_no);
  e.label = *label;
  if (trim(e.claim_text).empty() || trim(e.evidence_text).empty()) {
    throw ParseError("example with empty claim or evidence", line_no);
  }
  return e;
}

}  // namespace

std::vector<VerificationExample> read_examples_jsonl(std::istream& in) {
  std::vector<VerificationExample> out;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    try {
      const json j = json::parse(line);
      out.push_back(example_from_json(j, line_no));
    } catch (const json::exception& e) {
      throw ParseError(std::string("malformed example: ") + e.what(), line_no);
    }
  }
  return out;
}

std::vector<VerificationExample> load_examples(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open '" + path.string() + "'");
  std::string first;
  while (std::getline(in, first) && trim(first).empty()) {
  }
  in.clear();
  in.seekg(0);
  bool claim_records = false;
  if (!trim(first).empty()) {
    try {
      const json j = json::parse(first);
      claim_records = j.contains("evidence") && j.at("evidence").is_object();
    } catch (const json::exception&) {
      throw ParseError("malformed first record", 1);
    }
  }
  if (claim_records) return to_examples(read_claims_jsonl(in));
  return read_examples_jsonl(in);
}

}  // namespace qacg
