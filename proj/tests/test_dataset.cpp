#include <doctest.h>

#include <algorithm>
#include <array>
#include <map>
#include <set>
#include <tuple>
#include <sstream>
#include <unordered_set>

#include "qacg/dataset.hpp"
#include "qacg/errors.hpp"
#include "qacg/rng.hpp"

using namespace qacg;

namespace {

GeneratedClaim make_claim(std::string id, std::string text, Label label,
                          std::string passage = "p") {
  GeneratedClaim c;
  c.claim_id = std::move(id);
  c.text = std::move(text);
  c.label = label;
  c.evidence = {std::move(passage), "a", {0}, "Some evidence."};
  c.provenance.question = "q?";
  c.provenance.original_answer = {"x", EntityType::kPerson, 0, 1};
  return c;
}

// Claims interleaved so class members sit at scattered dataset positions.
ClaimDataset dataset_567() {
  ClaimDataset d;
  const std::array<std::pair<Label, int>, 3> sizes{
      {{Label::kSupported, 5}, {Label::kRefuted, 7}, {Label::kNei, 6}}};
  for (int i = 0; i < 7; ++i) {
    for (const auto& [label, n] : sizes) {
      if (i >= n) continue;
      const std::string tag(to_string(label));
      d.claims.push_back(make_claim(tag + std::to_string(i), tag + " claim " + std::to_string(i), label));
    }
  }
  return d;
}

std::vector<std::string> ids_of(const ClaimDataset& d, Label label) {
  std::vector<std::string> ids;
  for (const auto& c : d.claims) {
    if (c.label == label) ids.push_back(c.claim_id);
  }
  return ids;
}

}  // namespace

TEST_CASE("balanced filter: frozen selection for 5/7/6 at seed 42") {
  const auto d = dataset_567();
  const auto out = filter_balanced(d, 5, 42);
  CHECK(out.counts() == LabelCounts{5, 5, 5});
  // Expected positions within each class come from tests/oracles/rng_oracle.py.
  CHECK(ids_of(out, Label::kSupported) ==
        std::vector<std::string>{"SUPPORTED0", "SUPPORTED1", "SUPPORTED2", "SUPPORTED3", "SUPPORTED4"});
  CHECK(ids_of(out, Label::kRefuted) ==
        std::vector<std::string>{"REFUTED0", "REFUTED1", "REFUTED2", "REFUTED5", "REFUTED6"});
  CHECK(ids_of(out, Label::kNei) ==
        std::vector<std::string>{"NEI0", "NEI1", "NEI3", "NEI4", "NEI5"});

  // Input order is preserved and the result is a sub-multiset of the input.
  std::size_t cursor = 0;
  for (const auto& c : out.claims) {
    while (cursor < d.claims.size() && d.claims[cursor].claim_id != c.claim_id) ++cursor;
    REQUIRE(cursor < d.claims.size());
    CHECK(d.claims[cursor] == c);
  }
  CHECK(filter_balanced(d, 5, 42) == out);
}

TEST_CASE("balanced filter: subset of labels and short classes") {
  const auto d = dataset_567();
  const auto two = filter_balanced(d, 6, 3, std::set<Label>{Label::kRefuted, Label::kNei});
  CHECK(two.counts() == LabelCounts{0, 6, 6});
  CHECK(filter_balanced(d, 0, 3).empty());
  try {
    filter_balanced(d, 6, 3);
    FAIL("expected DataError");
  } catch (const DataError& e) {
    CHECK(std::string(e.what()).find("SUPPORTED") != std::string::npos);
  }
}

TEST_CASE("balanced filter: property over random datasets") {
  Rng rng(5);
  for (int trial = 0; trial < 50; ++trial) {
    ClaimDataset d;
    const auto n = 20 + rng.uniform(200);
    for (std::uint64_t i = 0; i < n; ++i) {
      const Label label = kAllLabels[rng.uniform(3)];
      d.claims.push_back(make_claim("c" + std::to_string(i), "t" + std::to_string(i), label));
    }
    const auto counts = d.counts();
    const std::size_t smallest = *std::min_element(counts.begin(), counts.end());
    const auto k = smallest == 0 ? 0 : rng.uniform(smallest + 1);
    const auto out = filter_balanced(d, k, trial, std::set<Label>(kAllLabels.begin(), kAllLabels.end()));
    CHECK(out.counts() == LabelCounts{k, k, k});
    std::unordered_set<std::string> seen;
    for (const auto& c : out.claims) CHECK(seen.insert(c.claim_id).second);
  }
}

TEST_CASE("dedup matches a hash-set oracle and is idempotent") {
  Rng rng(77);
  ClaimDataset d;
  for (int i = 0; i < 400; ++i) {
    const Label label = kAllLabels[rng.uniform(3)];
    // Ids are deliberately out of lexical order with position.
    d.claims.push_back(make_claim("id" + std::to_string(rng.next() % 100000) + "_" + std::to_string(i),
                                  "text" + std::to_string(rng.uniform(40)), label,
                                  "p" + std::to_string(rng.uniform(3))));
  }
  const auto out = dedup(d);

  std::map<std::tuple<std::string, std::string, Label>, std::string> best;
  for (const auto& c : d.claims) {
    auto [it, inserted] = best.try_emplace({c.text, c.passage_id(), c.label}, c.claim_id);
    if (!inserted) it->second = std::min(it->second, c.claim_id);
  }
  std::set<std::string> expected;
  for (const auto& [key, id] : best) expected.insert(id);
  std::set<std::string> got;
  for (const auto& c : out.claims) got.insert(c.claim_id);
  CHECK(got == expected);
  CHECK(out.size() == best.size());
  CHECK(dedup(out) == out);
}

TEST_CASE("triples: conversion and round trip") {
  const auto d = dataset_567();
  const auto examples = to_examples(d);
  REQUIRE(examples.size() == d.size());
  CHECK(examples[0].id == d.claims[0].claim_id);
  CHECK(examples[0].claim_text == d.claims[0].text);
  CHECK(examples[0].evidence_text == "Some evidence.");

  for (bool fever : {false, true}) {
    std::stringstream buf;
    write_examples_jsonl(buf, examples, fever);
    CHECK(read_examples_jsonl(buf) == examples);
  }

  std::stringstream bad(R"({"claim":"c","evidence":"e","label":"SUPPORTED"}
{"claim":"c","evidence":"e","label":"MAYBE"})");
  try {
    read_examples_jsonl(bad);
    FAIL("expected ParseError");
  } catch (const ParseError& e) {
    CHECK(e.line() == 2);
  }
}

TEST_CASE("filter_labels keeps only the requested labels") {
  const auto out = filter_labels(dataset_567(), {Label::kNei});
  CHECK(out.counts() == LabelCounts{0, 0, 6});
}
