#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "json.hpp"

namespace corrlab {

/// Input/output alphabet sizes of a bipartite scenario.
struct Scenario {
  int nx = 2;  ///< Alice inputs
  int ny = 2;  ///< Bob inputs
  int na = 2;  ///< Alice outputs
  int nb = 2;  ///< Bob outputs

  std::size_t size() const { return static_cast<std::size_t>(nx) * ny * na * nb; }
  std::size_t index(int x, int y, int a, int b) const {
    return ((static_cast<std::size_t>(x) * ny + y) * na + a) * nb + b;
  }
  bool is_chsh() const { return nx == 2 && ny == 2 && na == 2 && nb == 2; }
  void validate() const;

  friend bool operator==(const Scenario&, const Scenario&) = default;
};

inline constexpr Scenario kChshScenario{2, 2, 2, 2};

enum class Party { Alice, Bob };

enum class Objective { Maximize, Minimize };

/// Tolerances used across the box layer.
inline constexpr double kEntryClampTol = 1e-12;
inline constexpr double kCellSumTol = 1e-12;
inline constexpr double kNoSignalingTol = 1e-10;

/// Conditional probability table p(a,b|x,y), stored densely in
/// [x][y][a][b] row-major order. Immutable after construction.
class CorrelationBox {
 public:
  /// Validates the table: entries in [-1e-12, 0) are clamped to 0, anything
  /// more negative is rejected, and every (x,y) cell must sum to 1.
  CorrelationBox(Scenario scenario, std::vector<double> table);

  /// Builds the table by evaluating `p(x, y, a, b)` at every index.
  static CorrelationBox from_function(Scenario scenario,
                                      const std::function<double(int, int, int, int)>& p);

  const Scenario& scenario() const { return scenario_; }
  std::span<const double> table() const { return table_; }

  /// Bounds-checked entry access.
  double at(int x, int y, int a, int b) const;
  double operator()(int x, int y, int a, int b) const {
    return table_[scenario_.index(x, y, a, b)];
  }

  friend bool operator==(const CorrelationBox&, const CorrelationBox&) = default;

 private:
  Scenario scenario_;
  std::vector<double> table_;
};

struct NoSignalingWitness {
  Party party = Party::Alice;
  int output = 0;
  int input = 0;
  int other_input_1 = 0;
  int other_input_2 = 0;
};

struct NoSignalingReport {
  bool is_no_signaling = true;
  double max_violation = 0.0;
  double tolerance = kNoSignalingTol;
  std::optional<NoSignalingWitness> worst_case;  // empty when no pair of counterpart inputs exists
};

/// A game: which (x,y,a,b) win, how inputs are drawn, and the marginal
/// constraint p that a strategy is supposed to honor.
struct GameSpec {
  Scenario scenario;
  std::function<bool(int x, int y, int a, int b)> win;
  std::vector<double> input_distribution;  ///< over (x,y), row-major, sums to 1
  std::optional<double> marginal_p;
  std::string name;

  /// Uniform input distribution.
  static GameSpec uniform(Scenario scenario, std::function<bool(int, int, int, int)> win,
                          std::optional<double> marginal_p = std::nullopt, std::string name = {});
  void validate() const;
  double input_probability(int x, int y) const {
    return input_distribution[static_cast<std::size_t>(x) * scenario.ny + y];
  }
};

/// The marginal-p game on the 2,2,2,2 scenario.
///
/// For p < 1/2 a round is won when a.b = 0 on inputs 00, 01, 10 and a = b on
/// input 11. At p = 1/2 the marginal constraint forces p(00|xy) = 0 away from
/// input 11, so the round is won when the outputs differ on 00, 01, 10 and
/// agree on 11; for that scoring p(win) = 1/2 - K/8 holds for every box.
GameSpec marginal_game(double p);

/// Game that is won on every round.
GameSpec trivial_game(Scenario scenario);

NoSignalingReport check_no_signaling(const CorrelationBox& box, double tol = kNoSignalingTol);

/// Marginal probability of `output` for `party` given its own input and the
/// counterpart's input: sums over the counterpart's outputs.
double marginal(const CorrelationBox& box, Party party, int output, int own_input, int other_input);

/// CHSH correlation <00> + <01> + <10> - <11>, outputs 0/1 read as +1/-1.
double chsh_value(const CorrelationBox& box);

/// Correlator <xy> = p(same|xy) - p(different|xy) on a 2,2,2,2 box.
double correlator(const CorrelationBox& box, int x, int y);

double win_probability(const CorrelationBox& box, const GameSpec& game);

/// p(win) = 1/2 - K/8 + 3(1 - 2p)/4.
double win_probability_formula(double chsh, double p);

/// Box with marginal p for output 1 that satisfies the game rules exactly.
CorrelationBox build_game_table(double p);

/// PR box: a XOR b = x.y with uniform marginals.
CorrelationBox pr_box();

/// The p = 1/2 game table (PR box with one party's outputs flipped).
CorrelationBox half_game_box();

/// Deterministic shared-randomness states for digits 1..4 of the classical
/// game strategy (digit 4 is the all-zero state).
CorrelationBox deterministic_digit_box(int digit);

/// Uniform box: every output pair has probability 1/(na nb).
CorrelationBox uniform_box(Scenario scenario);

/// Relabels one party's outputs o -> n-1-o on every input.
CorrelationBox flip_outputs(const CorrelationBox& box, Party party);

/// Entrywise convex combination.
CorrelationBox mix(std::span<const CorrelationBox> boxes, std::span<const double> weights);

/// Largest absolute entrywise difference; throws on scenario mismatch.
double max_abs_difference(const CorrelationBox& lhs, const CorrelationBox& rhs);

nlohmann::json to_json(const CorrelationBox& box);
CorrelationBox box_from_json(const nlohmann::json& j);
nlohmann::json to_json(const NoSignalingReport& report);

const char* to_string(Party party);

}  // namespace corrlab
