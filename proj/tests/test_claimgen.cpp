#include <doctest.h>

#include <set>
#include <sstream>

#include "qacg/claimgen.hpp"
#include "qacg/corpus.hpp"
#include "qacg/errors.hpp"
#include "qacg/replacement.hpp"
#include "qacg/rng.hpp"
#include "qacg/stub_backends.hpp"
#include "qacg/text.hpp"
#include "support/synthetic.hpp"

using namespace qacg;

namespace {

const std::set<Label> kAll{Label::kSupported, Label::kRefuted, Label::kNei};

Article one_sentence_article(const std::string& id, const std::string& text) {
  return {id, id, {{0, text}}};
}

GenerationBackends backends_with(std::map<std::string, EntityType> gazetteer,
                                 std::vector<PhraseEntry> similar = {}) {
  StubFixtures fx;
  fx.gazetteer = std::move(gazetteer);
  fx.similar = std::move(similar);
  return make_stub_generation_backends(fx);
}

}  // namespace

TEST_CASE("supported claims: one per distinct entity") {
  const auto b = backends_with({{"Alice", EntityType::kPerson}, {"Paris", EntityType::kGpe}});
  const Article a = one_sentence_article("a", "Alice lives in Paris and Alice likes it.");
  const auto passage = make_passage(a, {0}, "a:0-0");
  const auto claims = gen_supported(passage, b);
  REQUIRE(claims.size() == 2);
  CHECK(claims[0].claim_id == "a:0-0/S0");
  CHECK(claims[0].provenance.original_answer.surface == "Alice");
  CHECK(claims[1].provenance.original_answer.surface == "Paris");
  for (const auto& c : claims) {
    CHECK(c.label == Label::kSupported);
    CHECK(c.text.find(c.provenance.original_answer.surface) != std::string::npos);
    CHECK_FALSE(find_claim_violation(c).has_value());
  }

  const Article empty = one_sentence_article("e", "nothing to see here.");
  CHECK(gen_supported(make_passage(empty, {0}, "e"), b).empty());
}

TEST_CASE("replace_answer applies the overlap rule and picks by seed") {
  const EntityMention budapest{"Budapest", EntityType::kGpe, 0, 8};
  FixturePhraseIndex index({{"Budapest",
                             EntityType::kGpe,
                             {{"Vienna", EntityType::kGpe, 0.9},
                              {"Budapest City", EntityType::kGpe, 0.8},
                              {"Prague", EntityType::kGpe, 0.7}}}});
  // Survivors are [Vienna, Prague]; Rng(2).uniform(2) == 0 and
  // Rng(0).uniform(2) == 1 per the reference replay.
  CHECK(replace_answer(budapest, index, 5, 2)->surface == "Vienna");
  CHECK(replace_answer(budapest, index, 5, 0)->surface == "Prague");

  FixturePhraseIndex only_self({{"Budapest", EntityType::kGpe, {{"budapest", EntityType::kGpe, 0.99}}}});
  CHECK_FALSE(replace_answer(budapest, only_self, 5, 0).has_value());

  // Every pick is a survivor, for any seed.
  for (std::uint64_t seed = 0; seed < 200; ++seed) {
    const auto r = replace_answer(budapest, index, 5, seed);
    REQUIRE(r.has_value());
    CHECK_FALSE(overlaps("Budapest", r->surface));
  }
}

TEST_CASE("refuted claims skip answers without a replacement") {
  const auto b = backends_with(
      {{"Alice", EntityType::kPerson}, {"Paris", EntityType::kGpe}, {"Rome", EntityType::kGpe}},
      {{"Alice", EntityType::kPerson, {{"Bob", EntityType::kPerson, 0.8}}},
       {"Paris", EntityType::kGpe, {{"Lyon", EntityType::kGpe, 0.8}}}});
  const Article a = one_sentence_article("a", "Alice went from Paris to Rome.");
  const auto passage = make_passage(a, {0}, "p");
  GenerationStats stats;
  const auto claims = gen_refuted(passage, b, 11, {}, &stats);
  REQUIRE(claims.size() == 2);
  CHECK(stats.no_replacement == 1);
  CHECK(claims[0].claim_id == "p/R0");
  CHECK(claims[1].claim_id == "p/R1");
  CHECK(claims[0].provenance.replacement_answer->surface == "Bob");
  CHECK(claims[1].provenance.replacement_answer->surface == "Lyon");
  for (const auto& c : claims) {
    CHECK(c.label == Label::kRefuted);
    CHECK(c.text.find(c.provenance.replacement_answer->surface) != std::string::npos);
    CHECK_FALSE(find_claim_violation(c).has_value());
  }

  // Same QA pairs as the supported side: questions match one to one.
  const auto qa = core_qa_pairs(passage, b);
  const auto supported = gen_supported(passage, b, qa);
  CHECK(supported[0].provenance.question == claims[0].provenance.question);
}

TEST_CASE("NEI claims answer from the extension only") {
  const auto b = backends_with({{"Alice", EntityType::kPerson},
                                {"Paris", EntityType::kGpe},
                                {"Rome", EntityType::kGpe},
                                {"Carol", EntityType::kPerson}});
  const Article a{"a",
                  "A",
                  {{0, "Alice lives in Paris."},
                   {1, "Rome is old."},
                   {2, "Carol met Alice."},
                   {3, "It rained."}}};
  const auto passage = make_passage(a, {0}, "a:0-0");
  GenerationStats stats;
  const auto claims = gen_nei(passage, a, b, 5, {}, &stats);
  REQUIRE(claims.size() == 2);
  CHECK(stats.nei_answer_in_passage == 1);  // Alice, again in sentence 2
  CHECK(claims[0].provenance.original_answer.surface == "Rome");
  CHECK(claims[0].provenance.answer_sent_id == 1);
  CHECK(claims[1].provenance.original_answer.surface == "Carol");
  CHECK(claims[1].provenance.answer_sent_id == 2);
  for (const auto& c : claims) {
    CHECK(c.label == Label::kNei);
    CHECK(c.evidence == passage);
    CHECK(c.provenance.answer_origin == AnswerOrigin::kExtension);
    CHECK(c.provenance.extension_sent_ids == std::vector<int>{1, 2, 3});
    CHECK_FALSE(contains_word_bounded(casefold(passage.text),
                                      casefold(c.provenance.original_answer.surface)));
    CHECK_FALSE(find_claim_violation(c).has_value());
  }

  // A single-sentence article has no extension.
  const Article solo = one_sentence_article("s", "Alice.");
  GenerationStats solo_stats;
  CHECK(gen_nei(make_passage(solo, {0}, "s"), solo, b, 1, {}, &solo_stats).empty());
  CHECK(solo_stats.empty_extension == 1);
}

TEST_CASE("closed-form claim counts on a regular corpus") {
  // 5 articles of 4 sentences, one fresh entity per sentence, each with a
  // valid substitute. Windows of 2 give 10 passages; each passage has 2
  // entities of its own and 2 in the remaining sentences.
  StubFixtures fx;
  std::vector<Article> articles;
  for (int a = 0; a < 5; ++a) {
    Article art{"d" + std::to_string(a), "T", {}};
    for (int s = 0; s < 4; ++s) {
      const std::string name = "Name" + std::to_string(a * 4 + s);
      fx.gazetteer[name] = EntityType::kPerson;
      fx.similar.push_back({name, EntityType::kPerson, {{"Subst" + std::to_string(a * 4 + s), EntityType::kPerson, 0.5}}});
      art.sentences.push_back({s, name + " spoke."});
    }
    articles.push_back(std::move(art));
  }
  const Corpus corpus = make_windowed_corpus(ArticleStore(std::move(articles)), {2, 2});
  REQUIRE(corpus.passages.size() == 10);
  const auto result =
      generate_all(corpus, make_stub_generation_backends(fx), kAll, {}, 99, 1);
  const std::size_t n_passages = 10, own = 2, elsewhere = 2;
  CHECK(count_of(result.manifest.counts, Label::kSupported) == n_passages * own);
  CHECK(count_of(result.manifest.counts, Label::kRefuted) == n_passages * own);
  CHECK(count_of(result.manifest.counts, Label::kNei) == n_passages * elsewhere);
  CHECK(result.dataset.counts() == result.manifest.counts);
  CHECK(result.manifest.stats.passages == n_passages);

  const auto only_s = generate_all(corpus, make_stub_generation_backends(fx),
                                   {Label::kSupported}, {}, 99, 1);
  CHECK(only_s.dataset.size() == 20);
}

TEST_CASE("generate_all: ordering, soundness and worker-count determinism") {
  const auto world = qacg::testing::make_world(2024, 30);
  const Corpus corpus = make_windowed_corpus(world.store, {3, 2});
  const auto backends = make_stub_generation_backends(world.fixtures);
  const auto serial = generate_all(corpus, backends, kAll, {}, 7, 1);
  REQUIRE(serial.dataset.size() > 100);
  serial.dataset.check_unique_ids();

  for (const auto& c : serial.dataset.claims) {
    INFO(c.claim_id);
    CHECK_FALSE(find_claim_violation(c).has_value());
  }
  for (std::size_t i = 1; i < serial.dataset.size(); ++i) {
    CHECK(serial.dataset.claims[i - 1].passage_id() <= serial.dataset.claims[i].passage_id());
  }

  for (int workers : {2, 4, 8}) {
    const auto parallel = generate_all(corpus, backends, kAll, {}, 7, workers);
    CHECK(parallel.dataset == serial.dataset);
  }
  std::ostringstream a, b;
  write_claims_jsonl(a, serial.dataset);
  write_claims_jsonl(b, generate_all(corpus, backends, kAll, {}, 7, 4).dataset);
  CHECK(a.str() == b.str());

  const auto other_seed = generate_all(corpus, backends, kAll, {}, 8, 1);
  CHECK(other_seed.dataset != serial.dataset);
}

namespace {

class FlakyRecognizer final : public EntityRecognizer {
 public:
  explicit FlakyRecognizer(std::shared_ptr<const EntityRecognizer> inner) : inner_(std::move(inner)) {}
  std::string name() const override { return "flaky"; }

 protected:
  std::vector<EntityMention> do_recognize(std::string_view text) const override {
    if (text.find("Boom") != std::string_view::npos) throw BackendError("model crashed");
    return inner_->recognize(text);
  }

 private:
  std::shared_ptr<const EntityRecognizer> inner_;
};

}  // namespace

TEST_CASE("backend failures drop the passage and are recorded") {
  auto b = backends_with({{"Alice", EntityType::kPerson}});
  b.ner = std::make_shared<FlakyRecognizer>(b.ner);
  const Corpus corpus{ArticleStore({one_sentence_article("a", "Alice spoke."),
                                    one_sentence_article("b", "Boom went Alice.")}),
                      {}};
  Corpus c = corpus;
  c.passages = {make_passage(c.store.at("a"), {0}, "a"), make_passage(c.store.at("b"), {0}, "b")};
  const auto result = generate_all(c, b, {Label::kSupported}, {}, 1, 2);
  CHECK(result.dataset.size() == 1);
  REQUIRE(result.manifest.backend_failures.size() == 1);
  CHECK(result.manifest.backend_failures[0].passage_id == "b");

  const auto empty = generate_all(Corpus{}, b, kAll, {}, 1, 4);
  CHECK(empty.dataset.empty());
  CHECK(empty.manifest.warnings.size() == 1);
}
