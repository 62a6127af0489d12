#include <doctest.h>

#include <atomic>
#include <thread>

#include <httplib.h>
#include <json.hpp>

#include "qacg/backends.hpp"
#include "qacg/errors.hpp"
#include "qacg/remote_backends.hpp"
#include "qacg/rng.hpp"
#include "qacg/stub_backends.hpp"
#include "qacg/text.hpp"

using namespace qacg;
using json = nlohmann::json;

namespace {

StubFixtures sample_fixtures() {
  return parse_stub_fixtures(R"({
    "version": 1,
    "gazetteer": {"Budapest": "GPE", "Europe": "GPE", "Budapest City": "GPE",
                  "7th": "ORDINAL", "James Cameron": "PERSON"},
    "similar": [
      {"query": "7th", "etype": "ORDINAL",
       "phrases": [{"surface": "11th", "score": 0.8}, {"surface": "7TH", "score": 0.99},
                   {"surface": "8th", "score": 0.9}]},
      {"query": "Budapest", "etype": "GPE",
       "phrases": [{"surface": "p1", "score": 0.10}, {"surface": "p2", "score": 0.80},
                   {"surface": "p3", "score": 0.30}, {"surface": "p4", "score": 0.70},
                   {"surface": "p5", "score": 0.50}, {"surface": "p6", "score": 0.90},
                   {"surface": "p7", "score": 0.20}, {"surface": "p8", "score": 0.60},
                   {"surface": "Money", "etype": "MONEY", "score": 0.95}]}
    ],
    "nli": [{"hypothesis": "h", "label": "contradiction"},
            {"premise": "p", "hypothesis": "h", "label": "entailment",
             "scores": {"entailment": 0.7, "contradiction": 0.2, "neutral": 0.1}}],
    "perplexity": {"claim": 42.5},
    "fill": {"[MASK] is big.": ["Budapest", "Vienna"]}
  })");
}

}  // namespace

TEST_CASE("gazetteer recognizer") {
  const auto fx = sample_fixtures();
  GazetteerRecognizer ner(fx.gazetteer);
  const auto m = ner.recognize("Budapest is in Europe.");
  REQUIRE(m.size() == 2);
  CHECK(m[0].surface == "Budapest");
  CHECK(m[0].etype == EntityType::kGpe);
  CHECK(m[0].char_start == 0);
  CHECK(m[0].char_end == 8);
  CHECK(m[1].surface == "Europe");
  CHECK(m[1].char_start == 15);

  CHECK(ner.recognize("the sky is blue").empty());
  CHECK_THROWS_AS(ner.recognize(""), DataError);

  // Longest match wins over a nested entry; word boundaries are respected.
  const auto city = ner.recognize("Budapest City and Budapests.");
  REQUIRE(city.size() == 1);
  CHECK(city[0].surface == "Budapest City");
}

TEST_CASE("template question and claim stubs") {
  TemplateQuestionGenerator qg;
  const std::string evidence = "Budapest is in Europe.";
  // Frozen from tests/oracles/rng_oracle.py.
  CHECK(qg.generate_question(evidence, "Budapest") ==
        "STUBQ[20a871cb630a13c0]: which entity is 'Budapest'?");
  CHECK_THROWS_AS(qg.generate_question(evidence, "Vienna"), DataError);

  TemplateClaimConverter conv;
  CHECK(conv.qa_to_claim("Q?", "A") == "A is the answer to: Q?");
  CHECK_THROWS_AS(conv.qa_to_claim("", "A"), DataError);

  Rng rng(31);
  for (int i = 0; i < 100; ++i) {
    const std::string answer = "ans" + std::to_string(rng.uniform(1000));
    const std::string question = "q" + std::to_string(rng.next()) + "?";
    CHECK(conv.qa_to_claim(question, answer).find(answer) != std::string::npos);
  }
}

TEST_CASE("fixture phrase index") {
  const auto fx = sample_fixtures();
  FixturePhraseIndex index(fx.similar);

  const auto ordinal = index.similar_phrases("7th", EntityType::kOrdinal, 5);
  REQUIRE(ordinal.size() == 2);  // "7TH" equals the query case-insensitively
  CHECK(ordinal[0].surface == "8th");
  CHECK(ordinal[1].surface == "11th");

  CHECK(index.similar_phrases("Atlantis", EntityType::kGpe, 5).empty());
  CHECK(index.similar_phrases("7th", EntityType::kGpe, 5).empty());
  CHECK_THROWS_AS(index.similar_phrases("7th", EntityType::kOrdinal, 0), DataError);

  // Sort-and-truncate oracle over the 8 same-type entries.
  const auto top = index.similar_phrases("Budapest", EntityType::kGpe, 5);
  std::vector<std::string> surfaces;
  for (const auto& p : top) surfaces.push_back(p.surface);
  CHECK(surfaces == std::vector<std::string>{"p6", "p2", "p4", "p8", "p5"});
  for (const auto& p : top) CHECK(p.etype == EntityType::kGpe);
}

TEST_CASE("table NLI, perplexity and filler stubs") {
  const auto b = make_stub_baseline_backends(sample_fixtures());
  CHECK(b.nli->classify("p", "h").label == NliLabel::kEntailment);
  CHECK(b.nli->classify("other", "h").label == NliLabel::kContradiction);
  const auto unknown = b.nli->classify("x", "y");
  CHECK(unknown.label == NliLabel::kNeutral);
  CHECK(unknown.score(NliLabel::kNeutral) == doctest::Approx(0.5));

  CHECK(b.perplexity->perplexity("claim") == 42.5);
  const double fallback = b.perplexity->perplexity("unlisted");
  CHECK(fallback >= 10.0);
  CHECK(fallback < 100.0);
  CHECK(fallback == b.perplexity->perplexity("unlisted"));

  CHECK(b.filler->fill("ctx", "[MASK] is big.", 1) == std::vector<std::string>{"Budapest"});
  CHECK(b.filler->fill("ctx", "[MASK] is small.", 3).empty());
  CHECK_THROWS_AS(b.filler->fill("ctx", "no mask", 1), DataError);
  CHECK_THROWS_AS(b.filler->fill("ctx", "[MASK] [MASK]", 1), DataError);
}

TEST_CASE("fixtures: versioning, errors and dump/parse") {
  CHECK_THROWS_AS(parse_stub_fixtures(R"({"version": 2})"), DataError);
  CHECK_THROWS_AS(parse_stub_fixtures(R"({"gazetteer": {"x": "NOPE"}})"), DataError);
  CHECK_THROWS_AS(parse_stub_fixtures("{"), DataError);
  const auto fx = sample_fixtures();
  const auto again = parse_stub_fixtures(dump_stub_fixtures(fx));
  CHECK(again.gazetteer == fx.gazetteer);
  CHECK(again.perplexity == fx.perplexity);
  CHECK(again.fill == fx.fill);
  REQUIRE(again.similar.size() == fx.similar.size());
  CHECK(again.similar[1].phrases == fx.similar[1].phrases);
  CHECK(again.nli.size() == fx.nli.size());
}

namespace {

class BadRecognizer final : public EntityRecognizer {
 public:
  std::string name() const override { return "bad"; }

 protected:
  std::vector<EntityMention> do_recognize(std::string_view) const override {
    return {{"nope", EntityType::kGpe, 0, 4}};
  }
};

class UnsafeRecognizer final : public EntityRecognizer {
 public:
  std::string name() const override { return "unsafe"; }
  bool thread_safe() const override { return false; }
  mutable std::atomic<int> inside{0};
  mutable std::atomic<int> max_inside{0};

 protected:
  std::vector<EntityMention> do_recognize(std::string_view) const override {
    const int now = ++inside;
    int prev = max_inside.load();
    while (now > prev && !max_inside.compare_exchange_weak(prev, now)) {
    }
    std::this_thread::sleep_for(std::chrono::microseconds(200));
    --inside;
    return {};
  }
};

}  // namespace

TEST_CASE("contract checks catch invalid backend output") {
  BadRecognizer bad;
  CHECK_THROWS_AS(bad.recognize("yes it is"), BackendError);
}

TEST_CASE("serialize_unsafe serializes single-threaded backends") {
  auto unsafe = std::make_shared<UnsafeRecognizer>();
  GenerationBackends b = make_stub_generation_backends(sample_fixtures());
  const auto stub_ner = b.ner;
  b.ner = unsafe;
  const auto guarded = serialize_unsafe(b);
  CHECK(guarded.ner != b.ner);
  CHECK(guarded.question_generator == b.question_generator);
  CHECK(serialize_unsafe(make_stub_generation_backends(sample_fixtures())).ner->thread_safe());

  std::vector<std::thread> threads;
  for (int t = 0; t < 4; ++t) {
    threads.emplace_back([&] {
      for (int i = 0; i < 25; ++i) guarded.ner->recognize("text");
    });
  }
  for (auto& t : threads) t.join();
  CHECK(unsafe->max_inside.load() == 1);
}

TEST_CASE("remote backends speak the documented wire format") {
  httplib::Server server;
  server.Post("/v1/ner", [](const httplib::Request& req, httplib::Response& res) {
    const auto text = json::parse(req.body).at("text").get<std::string>();
    json entities = json::array();
    if (const auto pos = text.find("Budapest"); pos != std::string::npos) {
      entities.push_back({{"surface", "Budapest"}, {"etype", "GPE"}, {"start", pos},
                          {"end", pos + 8}});
    }
    res.set_content(json{{"entities", entities}}.dump(), "application/json");
  });
  server.Post("/v1/question", [](const httplib::Request& req, httplib::Response& res) {
    const auto body = json::parse(req.body);
    res.set_content(json{{"question", "Where is " + body.at("answer").get<std::string>() + "?"}}.dump(),
                    "application/json");
  });
  server.Post("/v1/qa2claim", [](const httplib::Request& req, httplib::Response& res) {
    const auto body = json::parse(req.body);
    res.set_content(json{{"claim", body.at("answer").get<std::string>() + " is it."}}.dump(),
                    "application/json");
  });
  server.Post("/v1/similar", [](const httplib::Request& req, httplib::Response& res) {
    const auto body = json::parse(req.body);
    CHECK(body.at("k").get<int>() == 5);
    res.set_content(
        json{{"phrases", {{{"surface", "Vienna"}, {"etype", body.at("etype")}, {"score", 0.9}}}}}
            .dump(),
        "application/json");
  });
  server.Post("/v1/nli", [](const httplib::Request&, httplib::Response& res) {
    res.set_content(
        R"({"label":"contradiction","scores":{"entailment":0.1,"contradiction":0.8,"neutral":0.1}})",
        "application/json");
  });
  server.Post("/v1/perplexity", [](const httplib::Request&, httplib::Response& res) {
    res.set_content(R"({"perplexity": 17.25})", "application/json");
  });
  server.Post("/v1/fill", [](const httplib::Request& req, httplib::Response& res) {
    CHECK(json::parse(req.body).at("masked").get<std::string>() == "[MASK] is big.");
    res.set_content(R"({"fills": ["Budapest"]})", "application/json");
  });
  server.Post("/broken/ner", [](const httplib::Request&, httplib::Response& res) {
    res.set_content("not json", "text/plain");
  });

  const int port = server.bind_to_any_port("127.0.0.1");
  REQUIRE(port > 0);
  std::thread worker([&] { server.listen_after_bind(); });
  server.wait_until_ready();

  const std::string base = "http://127.0.0.1:" + std::to_string(port);
  const auto gen = make_remote_generation_backends({base + "/v1/"});
  const auto mentions = gen.ner->recognize("I like Budapest.");
  REQUIRE(mentions.size() == 1);
  CHECK(mentions[0].char_start == 7);
  CHECK(gen.question_generator->generate_question("I like Budapest.", "Budapest") ==
        "Where is Budapest?");
  CHECK(gen.claim_converter->qa_to_claim("Where?", "Budapest") == "Budapest is it.");
  const auto similar = gen.phrase_index->similar_phrases("Budapest", EntityType::kGpe, 5);
  REQUIRE(similar.size() == 1);
  CHECK(similar[0].surface == "Vienna");

  const auto base_b = make_remote_baseline_backends({base + "/v1"});
  CHECK(base_b.nli->classify("p", "h").label == NliLabel::kContradiction);
  CHECK(base_b.perplexity->perplexity("x") == 17.25);
  CHECK(base_b.filler->fill("ctx", "[MASK] is big.", 1) == std::vector<std::string>{"Budapest"});

  CHECK_THROWS_AS(make_remote_generation_backends({base + "/broken"}).ner->recognize("x"),
                  BackendError);
  CHECK_THROWS_AS(make_remote_generation_backends({base + "/missing"}).ner->recognize("x"),
                  BackendError);

  server.stop();
  worker.join();

  // Nothing listening any more.
  CHECK_THROWS_AS(gen.ner->recognize("x"), BackendError);
}

TEST_CASE("endpoint resolution") {
  CHECK(resolve_endpoint("http://h:1").base_url == "http://h:1");
  ::unsetenv(kBackendUrlEnv);
  CHECK_THROWS_AS(resolve_endpoint(""), UsageError);
  ::setenv(kBackendUrlEnv, "http://env:2", 1);
  CHECK(resolve_endpoint("").base_url == "http://env:2");
  ::unsetenv(kBackendUrlEnv);
}
