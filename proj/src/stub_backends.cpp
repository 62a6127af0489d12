#include "qacg/stub_backends.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "qacg/errors.hpp"
#include "qacg/rng.hpp"
#include "qacg/text.hpp"

namespace qacg {

using json = nlohmann::json;
using ordered_json = nlohmann::ordered_json;

namespace {

bool word_char_at(std::string_view text, std::size_t i) {
  const auto c = static_cast<unsigned char>(text[i]);
  return c >= 0x80 || std::isalnum(c) != 0;
}

}  // namespace

GazetteerRecognizer::GazetteerRecognizer(std::map<std::string, EntityType> gazetteer)
    : gazetteer_(std::move(gazetteer)) {}

std::vector<EntityMention> GazetteerRecognizer::do_recognize(std::string_view text) const {
  std::vector<EntityMention> candidates;
  for (const auto& [surface, etype] : gazetteer_) {
    if (surface.empty()) continue;
    for (auto pos = text.find(surface); pos != std::string_view::npos;
         pos = text.find(surface, pos + 1)) {
      const std::size_t end = pos + surface.size();
      if (pos > 0 && word_char_at(text, pos - 1)) continue;
      if (end < text.size() && word_char_at(text, end)) continue;
      candidates.push_back({surface, etype, pos, end});
    }
  }
  std::sort(candidates.begin(), candidates.end(), [](const auto& a, const auto& b) {
    if (a.char_start != b.char_start) return a.char_start < b.char_start;
    return a.char_end > b.char_end;
  });
  std::vector<EntityMention> mentions;
  std::size_t covered_to = 0;
  for (auto& m : candidates) {
    if (!mentions.empty() && m.char_start < covered_to) continue;
    covered_to = m.char_end;
    mentions.push_back(std::move(m));
  }
  return mentions;
}

std::string TemplateQuestionGenerator::do_generate_question(std::string_view evidence,
                                                            std::string_view answer) const {
  return "STUBQ[" + hex64(fnv1a64(evidence)) + "]: which entity is '" + std::string(answer) +
         "'?";
}

std::string TemplateClaimConverter::do_qa_to_claim(std::string_view question,
                                                   std::string_view answer) const {
  return std::string(answer) + " is the answer to: " + std::string(question);
}

FixturePhraseIndex::FixturePhraseIndex(std::vector<PhraseEntry> entries) {
  for (auto& entry : entries) {
    auto& phrases = table_[{entry.query, entry.etype}];
    phrases.insert(phrases.end(), entry.phrases.begin(), entry.phrases.end());
  }
  for (auto& [key, phrases] : table_) {
    std::stable_sort(phrases.begin(), phrases.end(),
                     [](const auto& a, const auto& b) { return a.score > b.score; });
  }
}

std::vector<SimilarPhrase> FixturePhraseIndex::do_similar_phrases(std::string_view query,
                                                                  EntityType etype,
                                                                  int k) const {
  auto it = table_.find({std::string(query), etype});
  if (it == table_.end()) return {};
  const std::string folded_query = casefold(query);
  std::vector<SimilarPhrase> out;
  for (const auto& phrase : it->second) {
    if (out.size() == static_cast<std::size_t>(k)) break;
    if (phrase.etype != etype || casefold(phrase.surface) == folded_query) continue;
    out.push_back(phrase);
  }
  return out;
}

TableNliClassifier::TableNliClassifier(std::vector<NliEntry> entries) {
  for (auto& e : entries) table_[{e.premise, e.hypothesis}] = e.result;
}

NliResult TableNliClassifier::do_classify(std::string_view premise,
                                          std::string_view hypothesis) const {
  if (auto it = table_.find({std::string(premise), std::string(hypothesis)});
      it != table_.end()) {
    return it->second;
  }
  if (auto it = table_.find({std::string(), std::string(hypothesis)}); it != table_.end()) {
    return it->second;
  }
  return {NliLabel::kNeutral, {0.25, 0.25, 0.5}};
}

TablePerplexityScorer::TablePerplexityScorer(std::map<std::string, double> table)
    : table_(std::move(table)) {}

double TablePerplexityScorer::do_perplexity(std::string_view text) const {
  if (auto it = table_.find(std::string(text)); it != table_.end()) return it->second;
  return 10.0 + static_cast<double>(fnv1a64(text) % 90000) / 1000.0;
}

TableMaskedFiller::TableMaskedFiller(std::map<std::string, std::vector<std::string>> table)
    : table_(std::move(table)) {}

std::vector<std::string> TableMaskedFiller::do_fill(std::string_view /*context*/,
                                                    std::string_view masked_text,
                                                    int n) const {
  auto it = table_.find(std::string(masked_text));
  if (it == table_.end()) return {};
  std::vector<std::string> out = it->second;
  if (out.size() > static_cast<std::size_t>(n)) out.resize(static_cast<std::size_t>(n));
  return out;
}

namespace {

EntityType etype_field(const json& j) {
  const auto text = j.get<std::string>();
  auto etype = parse_entity_type(text);
  if (!etype) throw DataError("fixtures: unknown entity type '" + text + "'");
  return *etype;
}

NliResult nli_result_from_json(const json& j) {
  const auto label_text = j.at("label").get<std::string>();
  auto label = parse_nli_label(label_text);
  if (!label) throw DataError("fixtures: unknown NLI label '" + label_text + "'");
  NliResult result{*label, {0.1, 0.1, 0.1}};
  result.scores[static_cast<std::size_t>(*label)] = 0.8;
  if (auto s = j.find("scores"); s != j.end()) {
    for (NliLabel l : {NliLabel::kEntailment, NliLabel::kContradiction, NliLabel::kNeutral}) {
      result.scores[static_cast<std::size_t>(l)] = s->at(std::string(to_string(l))).get<double>();
    }
  }
  return result;
}

}  // namespace

StubFixtures parse_stub_fixtures(std::string_view json_text) {
  StubFixtures fx;
  try {
    const json doc = json::parse(json_text);
    const int version = doc.value("version", kFixtureVersion);
    if (version != kFixtureVersion) {
      throw DataError("fixtures: unsupported version " + std::to_string(version));
    }
    if (auto g = doc.find("gazetteer"); g != doc.end()) {
      for (const auto& [surface, etype] : g->items()) fx.gazetteer[surface] = etype_field(etype);
    }
    if (auto s = doc.find("similar"); s != doc.end()) {
      for (const auto& entry : *s) {
        PhraseEntry pe{entry.at("query").get<std::string>(), etype_field(entry.at("etype")), {}};
        for (const auto& p : entry.at("phrases")) {
          pe.phrases.push_back({p.at("surface").get<std::string>(),
                                p.contains("etype") ? etype_field(p.at("etype")) : pe.etype,
                                p.at("score").get<double>()});
        }
        fx.similar.push_back(std::move(pe));
      }
    }
    if (auto n = doc.find("nli"); n != doc.end()) {
      for (const auto& entry : *n) {
        fx.nli.push_back({entry.value("premise", std::string()),
                          entry.at("hypothesis").get<std::string>(), nli_result_from_json(entry)});
      }
    }
    if (auto p = doc.find("perplexity"); p != doc.end()) {
      for (const auto& [text, value] : p->items()) fx.perplexity[text] = value.get<double>();
    }
    if (auto f = doc.find("fill"); f != doc.end()) {
      for (const auto& [text, fills] : f->items()) {
        fx.fill[text] = fills.get<std::vector<std::string>>();
      }
    }
  } catch (const json::exception& e) {
    throw DataError(std::string("fixtures: ") + e.what());
  }
  return fx;
}

StubFixtures load_stub_fixtures(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open fixtures '" + path.string() + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_stub_fixtures(buf.str());
}

std::string dump_stub_fixtures(const StubFixtures& fx) {
  ordered_json doc;
  doc["version"] = kFixtureVersion;
  doc["gazetteer"] = ordered_json::object();
  for (const auto& [surface, etype] : fx.gazetteer) doc["gazetteer"][surface] = to_string(etype);
  doc["similar"] = ordered_json::array();
  for (const auto& entry : fx.similar) {
    ordered_json e{{"query", entry.query}, {"etype", to_string(entry.etype)}};
    e["phrases"] = ordered_json::array();
    for (const auto& p : entry.phrases) {
      e["phrases"].push_back(
          {{"surface", p.surface}, {"etype", to_string(p.etype)}, {"score", p.score}});
    }
    doc["similar"].push_back(std::move(e));
  }
  doc["nli"] = ordered_json::array();
  for (const auto& entry : fx.nli) {
    ordered_json e;
    if (!entry.premise.empty()) e["premise"] = entry.premise;
    e["hypothesis"] = entry.hypothesis;
    e["label"] = to_string(entry.result.label);
    e["scores"] = {{"entailment", entry.result.score(NliLabel::kEntailment)},
                   {"contradiction", entry.result.score(NliLabel::kContradiction)},
                   {"neutral", entry.result.score(NliLabel::kNeutral)}};
    doc["nli"].push_back(std::move(e));
  }
  doc["perplexity"] = ordered_json::object();
  for (const auto& [text, value] : fx.perplexity) doc["perplexity"][text] = value;
  doc["fill"] = ordered_json::object();
  for (const auto& [text, fills] : fx.fill) doc["fill"][text] = fills;
  return doc.dump(2);
}

GenerationBackends make_stub_generation_backends(const StubFixtures& fx) {
  return {std::make_shared<GazetteerRecognizer>(fx.gazetteer),
          std::make_shared<TemplateQuestionGenerator>(),
          std::make_shared<TemplateClaimConverter>(),
          std::make_shared<FixturePhraseIndex>(fx.similar)};
}

BaselineBackends make_stub_baseline_backends(const StubFixtures& fx) {
  return {std::make_shared<GazetteerRecognizer>(fx.gazetteer),
          std::make_shared<TableNliClassifier>(fx.nli),
          std::make_shared<TablePerplexityScorer>(fx.perplexity),
          std::make_shared<TableMaskedFiller>(fx.fill)};
}

}  // namespace qacg
