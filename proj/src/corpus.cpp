#include "qacg/corpus.hpp"

#include <algorithm>
#include <fstream>
#include <istream>
#include <ostream>
#include <unordered_set>

#include <json.hpp>

#include "qacg/errors.hpp"
#include "qacg/rng.hpp"
#include "qacg/text.hpp"

namespace qacg {

using json = nlohmann::json;
using ordered_json = nlohmann::ordered_json;

namespace {

std::ifstream open_input(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open '" + path.string() + "'");
  return in;
}

template <typename Fn>
void for_each_json_line(std::istream& in, Fn&& fn) {
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    json record;
    try {
      record = json::parse(line);
    } catch (const json::parse_error& e) {
      throw ParseError(std::string("invalid JSON: ") + e.what(), line_no);
    }
    try {
      fn(record, line_no);
    } catch (const json::exception& e) {
      throw ParseError(std::string("malformed record: ") + e.what(), line_no);
    }
  }
}

ordered_json mention_to_json(const EntityMention& m) {
  return {{"surface", m.surface},
          {"etype", to_string(m.etype)},
          {"span", {m.char_start, m.char_end}}};
}

EntityType etype_from_json(const json& j, std::size_t line_no) {
  const auto text = j.get<std::string>();
  auto etype = parse_entity_type(text);
  if (!etype) throw ParseError("unknown entity type '" + text + "'", line_no);
  return *etype;
}

EntityMention mention_from_json(const json& j, std::size_t line_no) {
  EntityMention m;
  m.surface = j.at("surface").get<std::string>();
  m.etype = etype_from_json(j.at("etype"), line_no);
  const auto& span = j.at("span");
  if (!span.is_array() || span.size() != 2) throw ParseError("span must be [start, end]", line_no);
  m.char_start = span[0].get<std::size_t>();
  m.char_end = span[1].get<std::size_t>();
  return m;
}

ordered_json claim_to_json(const GeneratedClaim& c, const ClaimWriteOptions& options) {
  const Provenance& p = c.provenance;
  ordered_json prov;
  prov["question"] = p.question;
  prov["original_answer"] = mention_to_json(p.original_answer);
  prov["answer_origin"] = p.answer_origin == AnswerOrigin::kCore ? "CORE" : "EXTENSION";
  if (p.answer_sent_id) prov["answer_sent_id"] = *p.answer_sent_id;
  if (p.replacement_answer) {
    prov["replacement_answer"] = {{"surface", p.replacement_answer->surface},
                                  {"etype", to_string(p.replacement_answer->etype)},
                                  {"score", p.replacement_answer->score}};
  }
  if (!p.extension_sent_ids.empty()) prov["extension_sent_ids"] = p.extension_sent_ids;

  ordered_json j;
  j["id"] = c.claim_id;
  j["claim"] = c.text;
  j["label"] = options.fever_labels ? to_fever_string(c.label) : to_string(c.label);
  j["evidence"] = {{"passage_id", c.evidence.passage_id},
                   {"article_id", c.evidence.article_id},
                   {"sent_ids", c.evidence.sent_ids},
                   {"text", c.evidence.text}};
  j["provenance"] = std::move(prov);
  return j;
}

GeneratedClaim claim_from_json(const json& j, std::size_t line_no) {
  GeneratedClaim c;
  c.claim_id = j.at("id").get<std::string>();
  c.text = j.at("claim").get<std::string>();
  const auto label_text = j.at("label").get<std::string>();
  auto label = parse_label(label_text);
  if (!label) throw ParseError("unknown label '" + label_text + "'", line_no);
  c.label = *label;

  const auto& ev = j.at("evidence");
  c.evidence.passage_id = ev.value("passage_id", std::string());
  c.evidence.article_id = ev.at("article_id").get<std::string>();
  c.evidence.sent_ids = ev.at("sent_ids").get<std::vector<int>>();
  c.evidence.text = ev.at("text").get<std::string>();

  if (auto it = j.find("provenance"); it != j.end()) {
    const auto& pj = *it;
    Provenance& p = c.provenance;
    p.question = pj.value("question", std::string());
    if (auto a = pj.find("original_answer"); a != pj.end()) {
      p.original_answer = mention_from_json(*a, line_no);
    }
    const auto origin = pj.value("answer_origin", std::string("CORE"));
    if (origin == "CORE") {
      p.answer_origin = AnswerOrigin::kCore;
    } else if (origin == "EXTENSION") {
      p.answer_origin = AnswerOrigin::kExtension;
    } else {
      throw ParseError("unknown answer_origin '" + origin + "'", line_no);
    }
    if (auto s = pj.find("answer_sent_id"); s != pj.end()) p.answer_sent_id = s->get<int>();
    if (auto r = pj.find("replacement_answer"); r != pj.end()) {
      SimilarPhrase phrase;
      phrase.surface = r->at("surface").get<std::string>();
      phrase.etype = etype_from_json(r->at("etype"), line_no);
      phrase.score = r->at("score").get<double>();
      p.replacement_answer = std::move(phrase);
    }
    if (auto e = pj.find("extension_sent_ids"); e != pj.end()) {
      p.extension_sent_ids = e->get<std::vector<int>>();
    }
  }
  return c;
}

}  // namespace

ArticleStore::ArticleStore(std::vector<Article> articles) : articles_(std::move(articles)) {
  index_.reserve(articles_.size());
  for (std::size_t i = 0; i < articles_.size(); ++i) {
    validate_article(articles_[i]);
    if (!index_.emplace(articles_[i].article_id, i).second) {
      throw ConflictError("duplicate article_id '" + articles_[i].article_id + "'");
    }
  }
}

const Article* ArticleStore::find(const std::string& article_id) const {
  auto it = index_.find(article_id);
  return it == index_.end() ? nullptr : &articles_[it->second];
}

const Article& ArticleStore::at(const std::string& article_id) const {
  const Article* article = find(article_id);
  if (article == nullptr) throw DataError("unknown article_id '" + article_id + "'");
  return *article;
}

void validate_article(const Article& article) {
  if (article.article_id.empty()) throw DataError("article with empty article_id");
  for (std::size_t i = 0; i < article.sentences.size(); ++i) {
    const Sentence& s = article.sentences[i];
    if (s.sid != static_cast<int>(i)) {
      throw DataError("article '" + article.article_id + "': sentence ids must run 0.." +
                      std::to_string(article.sentences.size() - 1));
    }
    if (trim(s.text).empty()) {
      throw DataError("article '" + article.article_id + "': sentence " +
                      std::to_string(s.sid) + " is blank");
    }
  }
}

ArticleStore read_articles(std::istream& in) {
  std::vector<Article> articles;
  std::unordered_set<std::string> seen;
  for_each_json_line(in, [&](const json& record, std::size_t line_no) {
    Article article;
    article.article_id = record.at("article_id").get<std::string>();
    article.title = record.at("title").get<std::string>();
    for (const auto& s : record.at("sentences")) {
      article.sentences.push_back({s.at("sid").get<int>(), s.at("text").get<std::string>()});
    }
    try {
      validate_article(article);
    } catch (const DataError& e) {
      throw ParseError(e.what(), line_no);
    }
    if (!seen.insert(article.article_id).second) {
      throw ConflictError("duplicate article_id '" + article.article_id + "' (line " +
                          std::to_string(line_no) + ")");
    }
    articles.push_back(std::move(article));
  });
  return ArticleStore(std::move(articles));
}

ArticleStore load_articles(const std::filesystem::path& path) {
  auto in = open_input(path);
  return read_articles(in);
}

void write_articles(std::ostream& out, const ArticleStore& store) {
  for (const Article& a : store.articles()) {
    ordered_json j;
    j["article_id"] = a.article_id;
    j["title"] = a.title;
    j["sentences"] = ordered_json::array();
    for (const Sentence& s : a.sentences) {
      j["sentences"].push_back({{"sid", s.sid}, {"text", s.text}});
    }
    out << j.dump() << '\n';
  }
}

EvidencePassage make_passage(const Article& article, std::vector<int> sent_ids,
                             std::string passage_id) {
  if (sent_ids.empty()) throw DataError("passage '" + passage_id + "' has no sentences");
  std::vector<std::string> texts;
  texts.reserve(sent_ids.size());
  for (std::size_t i = 0; i < sent_ids.size(); ++i) {
    if (i > 0 && sent_ids[i] <= sent_ids[i - 1]) {
      throw DataError("passage '" + passage_id + "': sent_ids must be strictly increasing");
    }
    const Sentence* s = article.find(sent_ids[i]);
    if (s == nullptr) {
      throw DataError("passage '" + passage_id + "': sentence " + std::to_string(sent_ids[i]) +
                      " not in article '" + article.article_id + "'");
    }
    texts.push_back(s->text);
  }
  return {std::move(passage_id), article.article_id, std::move(sent_ids), join(texts, " ")};
}

std::string window_passage_id(const std::string& article_id, int first, int last) {
  return article_id + ":" + std::to_string(first) + "-" + std::to_string(last);
}

std::vector<EvidencePassage> window_passages(const Article& article,
                                             const WindowConfig& config) {
  if (config.window < 1 || config.stride < 1) {
    throw UsageError("passage window and stride must be >= 1");
  }
  std::vector<EvidencePassage> passages;
  const int n = static_cast<int>(article.sentences.size());
  for (int start = 0; start < n; start += config.stride) {
    const int end = std::min(n, start + config.window);
    std::vector<int> ids;
    for (int sid = start; sid < end; ++sid) ids.push_back(sid);
    passages.push_back(
        make_passage(article, std::move(ids), window_passage_id(article.article_id, start, end - 1)));
    if (end == n) break;
  }
  return passages;
}

Corpus make_windowed_corpus(ArticleStore store, const WindowConfig& config) {
  Corpus corpus{std::move(store), {}};
  for (const Article& article : corpus.store.articles()) {
    auto passages = window_passages(article, config);
    corpus.passages.insert(corpus.passages.end(), std::make_move_iterator(passages.begin()),
                           std::make_move_iterator(passages.end()));
  }
  return corpus;
}

std::vector<EvidencePassage> read_passages(std::istream& in, const ArticleStore& store) {
  std::vector<EvidencePassage> passages;
  std::unordered_set<std::string> seen;
  for_each_json_line(in, [&](const json& record, std::size_t line_no) {
    auto id = record.at("passage_id").get<std::string>();
    const auto article_id = record.at("article_id").get<std::string>();
    const Article* article = store.find(article_id);
    if (article == nullptr) throw ParseError("unknown article_id '" + article_id + "'", line_no);
    EvidencePassage passage;
    try {
      passage = make_passage(*article, record.at("sent_ids").get<std::vector<int>>(), id);
    } catch (const DataError& e) {
      throw ParseError(e.what(), line_no);
    }
    if (auto t = record.find("text"); t != record.end() && t->get<std::string>() != passage.text) {
      throw ParseError("passage text does not match its sentences", line_no);
    }
    if (!seen.insert(id).second) throw ConflictError("duplicate passage_id '" + id + "'");
    passages.push_back(std::move(passage));
  });
  return passages;
}

std::vector<EvidencePassage> load_passages(const std::filesystem::path& path,
                                           const ArticleStore& store) {
  auto in = open_input(path);
  return read_passages(in, store);
}

void write_passages(std::ostream& out, const std::vector<EvidencePassage>& passages) {
  for (const auto& p : passages) {
    ordered_json j;
    j["passage_id"] = p.passage_id;
    j["article_id"] = p.article_id;
    j["sent_ids"] = p.sent_ids;
    j["text"] = p.text;
    out << j.dump() << '\n';
  }
}

std::vector<int> ExtensionContext::sent_ids() const {
  std::vector<int> ids;
  ids.reserve(sentences.size());
  for (const auto& s : sentences) ids.push_back(s.sid);
  return ids;
}

std::string ExtensionContext::text() const {
  std::vector<std::string> texts;
  texts.reserve(sentences.size());
  for (const auto& s : sentences) texts.push_back(s.text);
  return join(texts, " ");
}

ExtensionContext get_extension_context(const Article& article,
                                       const EvidencePassage& passage, int k,
                                       std::uint64_t seed) {
  if (passage.article_id != article.article_id) {
    throw DataError("passage '" + passage.passage_id + "' does not belong to article '" +
                    article.article_id + "'");
  }
  if (k < 1) throw DataError("extension size k must be >= 1");

  std::vector<int> candidates;
  for (const Sentence& s : article.sentences) {
    if (std::find(passage.sent_ids.begin(), passage.sent_ids.end(), s.sid) ==
        passage.sent_ids.end()) {
      candidates.push_back(s.sid);
    }
  }
  Rng rng(seed);
  auto chosen = rng.sample(std::move(candidates), static_cast<std::size_t>(k));
  std::sort(chosen.begin(), chosen.end());

  ExtensionContext ctx{passage.passage_id, {}, k};
  for (int sid : chosen) ctx.sentences.push_back(*article.find(sid));
  return ctx;
}

void write_claims_jsonl(std::ostream& out, const ClaimDataset& dataset,
                        const ClaimWriteOptions& options) {
  for (const auto& claim : dataset.claims) out << claim_to_json(claim, options).dump() << '\n';
}

void write_claims_jsonl(const std::filesystem::path& path, const ClaimDataset& dataset,
                        const ClaimWriteOptions& options) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cannot write '" + path.string() + "'");
  write_claims_jsonl(out, dataset, options);
}

ClaimDataset read_claims_jsonl(std::istream& in) {
  ClaimDataset dataset;
  for_each_json_line(in, [&](const json& record, std::size_t line_no) {
    dataset.claims.push_back(claim_from_json(record, line_no));
  });
  dataset.check_unique_ids();
  return dataset;
}

ClaimDataset read_claims_jsonl(const std::filesystem::path& path) {
  auto in = open_input(path);
  return read_claims_jsonl(in);
}

}  // namespace qacg
