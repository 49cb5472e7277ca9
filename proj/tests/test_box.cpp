#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "corrlab/box.hpp"

using namespace corrlab;

namespace {

// Reference CHSH value computed straight from the +/-1 output convention.
double chsh_oracle(const CorrelationBox& box) {
  double k = 0.0;
  for (int x = 0; x < 2; ++x)
    for (int y = 0; y < 2; ++y) {
      double e = 0.0;
      for (int a = 0; a < 2; ++a)
        for (int b = 0; b < 2; ++b) e += (a == b ? 1.0 : -1.0) * box(x, y, a, b);
      k += (x == 1 && y == 1) ? -e : e;
    }
  return k;
}

CorrelationBox signaling_box() {
  // Alice's output copies Bob's input.
  return CorrelationBox::from_function(kChshScenario,
                                       [](int, int y, int a, int b) { return (a == y && b == 0) ? 1.0 : 0.0; });
}

}  // namespace

TEST(CorrelationBoxTest, RejectsMalformedTables) {
  EXPECT_THROW(CorrelationBox(kChshScenario, std::vector<double>(15, 0.25)), std::invalid_argument);
  std::vector<double> t(16, 0.25);
  t[0] = -0.01;
  t[1] = 0.26;
  EXPECT_THROW(CorrelationBox(kChshScenario, t), std::invalid_argument);
  std::vector<double> off(16, 0.25);
  off[5] += 1e-9;
  EXPECT_THROW(CorrelationBox(kChshScenario, off), std::invalid_argument);
  std::vector<double> nan(16, 0.25);
  nan[3] = std::nan("");
  EXPECT_THROW(CorrelationBox(kChshScenario, nan), std::invalid_argument);
}

TEST(CorrelationBoxTest, ClampsTinyNegativeEntries) {
  std::vector<double> t(16, 0.25);
  t[0] = -5e-13;
  t[1] = 0.5 + 5e-13;
  const CorrelationBox box(kChshScenario, t);
  EXPECT_EQ(box(0, 0, 0, 0), 0.0);
}

TEST(CorrelationBoxTest, AtChecksBounds) {
  const auto box = pr_box();
  EXPECT_DOUBLE_EQ(box.at(1, 1, 0, 1), 0.5);
  EXPECT_THROW(box.at(2, 0, 0, 0), std::out_of_range);
  EXPECT_THROW(box.at(0, 0, 0, -1), std::out_of_range);
}

TEST(NoSignalingTest, ConstructedBoxesAreNoSignaling) {
  for (const auto& box : {pr_box(), half_game_box(), uniform_box(kChshScenario), build_game_table(0.2),
                          deterministic_digit_box(1), deterministic_digit_box(3)}) {
    const auto r = check_no_signaling(box);
    EXPECT_TRUE(r.is_no_signaling);
    EXPECT_LE(r.max_violation, 1e-15);
  }
}

TEST(NoSignalingTest, ProductBoxHasZeroViolation) {
  const double q[2] = {0.3, 0.7}, r[2] = {0.6, 0.4};
  const auto box = CorrelationBox::from_function(kChshScenario, [&](int, int, int a, int b) { return q[a] * r[b]; });
  EXPECT_EQ(check_no_signaling(box).max_violation, 0.0);
}

TEST(NoSignalingTest, ExtremeSignalingBoxReportsViolationOne) {
  const auto r = check_no_signaling(signaling_box());
  EXPECT_FALSE(r.is_no_signaling);
  EXPECT_DOUBLE_EQ(r.max_violation, 1.0);
  ASSERT_TRUE(r.worst_case.has_value());
  EXPECT_EQ(r.worst_case->party, Party::Alice);
}

TEST(NoSignalingTest, SingleCounterpartInputHasNoWitness) {
  const Scenario s{2, 1, 2, 2};
  const auto r = check_no_signaling(uniform_box(s));
  EXPECT_TRUE(r.is_no_signaling);
}

TEST(ChshTest, KnownBoxes) {
  EXPECT_EQ(chsh_value(pr_box()), 4.0);
  EXPECT_EQ(chsh_value(half_game_box()), -4.0);
  EXPECT_EQ(chsh_value(uniform_box(kChshScenario)), 0.0);
  for (int d = 1; d <= 4; ++d) {
    const auto box = deterministic_digit_box(d);
    EXPECT_DOUBLE_EQ(chsh_value(box), chsh_oracle(box));
    EXPECT_LE(std::abs(chsh_value(box)), 2.0);
  }
  EXPECT_THROW(chsh_value(uniform_box(Scenario{3, 2, 2, 2})), std::invalid_argument);
}

TEST(ChshTest, MatchesOracleOnMixtures) {
  const std::vector<CorrelationBox> boxes{pr_box(), deterministic_digit_box(2), uniform_box(kChshScenario)};
  const std::vector<double> w{0.2, 0.5, 0.3};
  const auto m = mix(boxes, w);
  EXPECT_NEAR(chsh_value(m), chsh_oracle(m), 1e-15);
}

TEST(GameTest, WinProbabilityExamples) {
  EXPECT_DOUBLE_EQ(win_probability(half_game_box(), marginal_game(0.5)), 1.0);
  for (double p : {0.0, 0.1, 1.0 / 3, 0.45, 0.5}) {
    EXPECT_NEAR(win_probability(build_game_table(p), marginal_game(p)), 1.0, 1e-15) << p;
  }
  // Differ/agree scoring at p = 1/2: half of every cell wins.
  EXPECT_DOUBLE_EQ(win_probability(uniform_box(kChshScenario), marginal_game(0.5)), 0.5);
  EXPECT_DOUBLE_EQ(win_probability(uniform_box(kChshScenario), trivial_game(kChshScenario)), 1.0);
}

TEST(GameTest, FormulaExamples) {
  EXPECT_DOUBLE_EQ(win_probability_formula(-2.0, 0.5), 0.75);
  EXPECT_NEAR(win_probability_formula(-2.0 * std::numbers::sqrt2, 0.5), 0.5 + std::numbers::sqrt2 / 4, 1e-15);
  EXPECT_DOUBLE_EQ(win_probability_formula(-4.0, 0.5), 1.0);
  EXPECT_THROW(win_probability_formula(0.0, 0.6), std::domain_error);
  EXPECT_THROW(win_probability_formula(0.0, -0.1), std::domain_error);
  EXPECT_THROW(marginal_game(0.51), std::domain_error);
}

TEST(GameTest, FormulaMatchesDirectWinOnStructuredBoxes) {
  // Boxes with marginal p everywhere and p(11|xy) = 0 off input 11.
  for (double p : {0.0, 0.05, 0.2, 1.0 / 3, 0.4, 0.5}) {
    const auto table = build_game_table(p);
    EXPECT_NEAR(win_probability(table, marginal_game(p)), win_probability_formula(chsh_value(table), p), 1e-14);
  }
  // At p = 1/2 the scoring makes the link hold for every box.
  for (const auto& box : {pr_box(), uniform_box(kChshScenario), deterministic_digit_box(1)}) {
    EXPECT_NEAR(win_probability(box, marginal_game(0.5)), win_probability_formula(chsh_value(box), 0.5), 1e-15);
  }
}

TEST(GameTest, ValidateRejectsBadDistributions) {
  GameSpec g = marginal_game(0.3);
  g.input_distribution = {0.5, 0.5, 0.5, -0.5};
  EXPECT_THROW(g.validate(), std::invalid_argument);
  g.input_distribution = {0.5, 0.5};
  EXPECT_THROW(g.validate(), std::invalid_argument);
}

TEST(CanonicalBoxTest, GameTableEntries) {
  const auto t = build_game_table(0.5);
  EXPECT_EQ(max_abs_difference(t, half_game_box()), 0.0);
  const auto zero = build_game_table(0.0);
  EXPECT_EQ(max_abs_difference(zero, deterministic_digit_box(4)), 0.0);
  const auto third = build_game_table(1.0 / 3);
  EXPECT_NEAR(third(1, 1, 0, 0), 2.0 / 3, 1e-15);
  EXPECT_NEAR(third(0, 1, 1, 0), 1.0 / 3, 1e-15);
  EXPECT_EQ(third(0, 0, 1, 1), 0.0);
}

TEST(CanonicalBoxTest, MarginalsOfGameTable) {
  for (double p : {0.1, 0.25, 0.5}) {
    const auto t = build_game_table(p);
    for (int x = 0; x < 2; ++x)
      for (int y = 0; y < 2; ++y) {
        EXPECT_NEAR(marginal(t, Party::Alice, 1, x, y), p, 1e-15);
        EXPECT_NEAR(marginal(t, Party::Bob, 1, y, x), p, 1e-15);
      }
  }
}

TEST(CanonicalBoxTest, DigitBoxesMatchTheirRules) {
  for (int x = 0; x < 2; ++x)
    for (int y = 0; y < 2; ++y) {
      EXPECT_EQ(deterministic_digit_box(1)(x, y, x, y), 1.0);
      EXPECT_EQ(deterministic_digit_box(2)(x, y, 1 - x, 0), 1.0);
      EXPECT_EQ(deterministic_digit_box(3)(x, y, 0, 1 - y), 1.0);
      EXPECT_EQ(deterministic_digit_box(4)(x, y, 0, 0), 1.0);
    }
  EXPECT_THROW(deterministic_digit_box(5), std::invalid_argument);
}

TEST(CanonicalBoxTest, FlipAndMix) {
  EXPECT_EQ(max_abs_difference(flip_outputs(pr_box(), Party::Bob), half_game_box()), 0.0);
  EXPECT_EQ(max_abs_difference(flip_outputs(flip_outputs(pr_box(), Party::Alice), Party::Alice), pr_box()), 0.0);
  const std::vector<CorrelationBox> pair{pr_box(), flip_outputs(pr_box(), Party::Alice)};
  const std::vector<double> half{0.5, 0.5};
  EXPECT_EQ(max_abs_difference(mix(pair, half), uniform_box(kChshScenario)), 0.0);

  const std::vector<double> bad{0.6, 0.6};
  EXPECT_THROW(mix(pair, bad), std::invalid_argument);
  const std::vector<CorrelationBox> mismatched{pr_box(), uniform_box(Scenario{2, 3, 2, 2})};
  EXPECT_THROW(mix(mismatched, half), std::invalid_argument);
}

TEST(CanonicalBoxTest, ClassicalMixReproducesTable) {
  const std::vector<CorrelationBox> digits{deterministic_digit_box(1), deterministic_digit_box(2),
                                           deterministic_digit_box(3)};
  const std::vector<double> w{1.0 / 3, 1.0 / 3, 1.0 / 3};
  EXPECT_LE(max_abs_difference(mix(digits, w), build_game_table(1.0 / 3)), 1e-15);
}

TEST(JsonTest, RoundTripIsExact) {
  for (const auto& box : {pr_box(), build_game_table(0.3), uniform_box(Scenario{3, 2, 2, 3})}) {
    const auto back = box_from_json(nlohmann::json::parse(to_json(box).dump()));
    EXPECT_EQ(back, box);
  }
}

TEST(JsonTest, MalformedInputsAreRejected) {
  EXPECT_THROW(box_from_json(nlohmann::json::parse(R"({"table": []})")), std::invalid_argument);
  EXPECT_THROW(box_from_json(nlohmann::json::parse(R"({"scenario":[2,2,2,2],"table":[[1]]})")),
               std::invalid_argument);
  auto j = to_json(pr_box());
  j["table"][0][0][0][0] = "half";
  EXPECT_THROW(box_from_json(j), std::invalid_argument);
  j = to_json(pr_box());
  j["table"][0][0][0][0] = 0.7;
  EXPECT_THROW(box_from_json(j), std::invalid_argument);
}
