#include <doctest.h>

#include <cmath>

#include "qacg/baselines.hpp"
#include "qacg/errors.hpp"
#include "qacg/evalkit.hpp"
#include "qacg/rng.hpp"
#include "qacg/stub_backends.hpp"

using namespace qacg;

namespace {

LabelCounts tally(const std::vector<Label>& labels) {
  LabelCounts c{};
  for (Label l : labels) ++count_of(c, l);
  return c;
}

}  // namespace

TEST_CASE("random guess is near chance on a balanced set") {
  const std::size_t n = 3000;
  std::vector<Label> gold;
  for (std::size_t i = 0; i < n; ++i) gold.push_back(kAllLabels[i % 3]);
  const auto pred = random_guess(n, LabelSpace::kSRN, 17);
  CHECK(std::abs(macro_prf(gold, pred).macro.f1 - 1.0 / 3.0) < 0.03);
  CHECK(random_guess(n, LabelSpace::kSRN, 17) == pred);
  for (Label l : random_guess(200, LabelSpace::kSR, 1)) CHECK(l != Label::kNei);
}

TEST_CASE("perplexity bands: 3/3/3 and rank invariance") {
  const std::vector<double> scores{12.5, 3.0, 99.0, 41.0, 7.5, 60.0, 18.0, 25.0, 5.0};
  const auto bands = perplexity_bands(scores, LabelSpace::kSRN);
  CHECK(tally(bands) == LabelCounts{3, 3, 3});
  // Highest perplexity reads as refuted, lowest as supported.
  CHECK(bands[2] == Label::kRefuted);
  CHECK(bands[5] == Label::kRefuted);
  CHECK(bands[3] == Label::kRefuted);
  CHECK(bands[1] == Label::kSupported);
  CHECK(bands[8] == Label::kSupported);
  CHECK(bands[4] == Label::kSupported);

  std::vector<double> scaled, logged;
  for (double s : scores) {
    scaled.push_back(s * 10);
    logged.push_back(std::log(s));
  }
  CHECK(perplexity_bands(scaled, LabelSpace::kSRN) == bands);
  CHECK(perplexity_bands(logged, LabelSpace::kSRN) == bands);
}

TEST_CASE("perplexity bands: sizes differ by at most one") {
  Rng rng(3);
  for (std::size_t n = 1; n < 40; ++n) {
    std::vector<double> scores;
    for (std::size_t i = 0; i < n; ++i) scores.push_back(1.0 + static_cast<double>(rng.uniform(1000)));
    const auto c3 = tally(perplexity_bands(scores, LabelSpace::kSRN));
    CHECK(*std::max_element(c3.begin(), c3.end()) - *std::min_element(c3.begin(), c3.end()) <= 1);
    const auto c2 = tally(perplexity_bands(scores, LabelSpace::kSR));
    CHECK(count_of(c2, Label::kNei) == 0);
    CHECK(count_of(c2, Label::kSupported) - count_of(c2, Label::kRefuted) <= 1);
  }
  CHECK_THROWS_AS(perplexity_bands(std::vector<double>{}, LabelSpace::kSRN), DataError);
  CHECK_THROWS_AS(perplexity_bands(std::vector<double>{1.0, NAN}, LabelSpace::kSRN), DataError);
}

TEST_CASE("perplexity_tercile scores claims through the backend") {
  StubFixtures fx;
  std::vector<VerificationExample> claims;
  for (int i = 0; i < 9; ++i) {
    const std::string text = "claim " + std::to_string(i);
    fx.perplexity[text] = 10.0 + i;
    claims.push_back({"c" + std::to_string(i), text, "ev", Label::kSupported});
  }
  const auto b = make_stub_baseline_backends(fx);
  const auto pred = perplexity_tercile(claims, *b.perplexity, LabelSpace::kSRN);
  CHECK(pred == std::vector<Label>{Label::kSupported, Label::kSupported, Label::kSupported,
                                   Label::kNei, Label::kNei, Label::kNei, Label::kRefuted,
                                   Label::kRefuted, Label::kRefuted});
}

TEST_CASE("NLI label mapping") {
  const NliResult ent{NliLabel::kEntailment, {0.8, 0.1, 0.1}};
  const NliResult con{NliLabel::kContradiction, {0.1, 0.8, 0.1}};
  const NliResult neu_con{NliLabel::kNeutral, {0.2, 0.3, 0.5}};
  const NliResult neu_tie{NliLabel::kNeutral, {0.25, 0.25, 0.5}};
  CHECK(map_nli_label(ent, LabelSpace::kSRN) == Label::kSupported);
  CHECK(map_nli_label(con, LabelSpace::kSRN) == Label::kRefuted);
  CHECK(map_nli_label(neu_con, LabelSpace::kSRN) == Label::kNei);
  CHECK(map_nli_label(neu_con, LabelSpace::kSR) == Label::kRefuted);
  CHECK(map_nli_label(neu_tie, LabelSpace::kSR) == Label::kSupported);

  StubFixtures fx;
  fx.nli.push_back({"", "h1", ent});
  fx.nli.push_back({"", "h2", con});
  const auto b = make_stub_baseline_backends(fx);
  const std::vector<VerificationExample> ex{{"1", "h1", "e", Label::kSupported},
                                            {"2", "h2", "e", Label::kRefuted},
                                            {"3", "h3", "e", Label::kNei}};
  CHECK(nli_transfer(ex, *b.nli, LabelSpace::kSRN) ==
        std::vector<Label>{Label::kSupported, Label::kRefuted, Label::kNei});
}

TEST_CASE("LM fact checker cascade") {
  StubFixtures fx;
  fx.gazetteer = {{"Paris", EntityType::kGpe}, {"France", EntityType::kGpe},
                  {"Rome", EntityType::kGpe}};
  fx.fill["Paris is in [MASK]."] = {"france"};
  fx.fill["[MASK] is in Italy."] = {"Milan"};
  fx.nli.push_back({"", "Milan is in Italy.", {NliLabel::kContradiction, {0.1, 0.8, 0.1}}});
  const auto b = make_stub_baseline_backends(fx);
  const LmCheckerBackends lm{*b.ner, *b.filler, *b.nli};

  // Last entity (France) is masked; the fill matches case-insensitively.
  CHECK(lm_fact_checker({"1", "Paris is in France.", "ev", Label::kSupported}, lm) ==
        Label::kSupported);
  // Wrong fill, NLI contradiction on the completed claim.
  CHECK(lm_fact_checker({"2", "Rome is in Italy.", "ev", Label::kRefuted}, lm) ==
        Label::kRefuted);
  // Filler has nothing for this claim.
  CHECK(lm_fact_checker({"3", "Rome is big.", "ev", Label::kNei}, lm) == Label::kNei);
  CHECK_THROWS_AS(lm_fact_checker({"4", "no entity here", "ev", Label::kNei}, lm), EntityFree);

  const std::vector<VerificationExample> ex{{"3", "Rome is big.", "ev", Label::kNei},
                                            {"4", "no entity here", "ev", Label::kNei}};
  CHECK(lm_fact_checker_all(ex, lm, LabelSpace::kSRN) ==
        std::vector<Label>{Label::kNei, Label::kNei});
  CHECK(lm_fact_checker_all(ex, lm, LabelSpace::kSR) ==
        std::vector<Label>{Label::kRefuted, Label::kRefuted});
}
