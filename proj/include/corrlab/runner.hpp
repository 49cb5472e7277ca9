#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "corrlab/box.hpp"
#include "corrlab/hilbert.hpp"
#include "corrlab/local.hpp"
#include "json.hpp"

namespace corrlab {

/// Shared randomness: one deterministic vertex is drawn per round and each
/// party answers from its own map.
struct LocalMixture {
  LocalDecomposition decomposition;
};

/// Shared quantum state: Alice measures first, Bob measures the reduced state
/// left after her outcome.
struct QuantumResource {
  QuantumStrategy strategy;
};

/// Black box that returns (a, b) jointly from p(a, b | x, y).
struct Oracle {
  CorrelationBox box;
};

using Strategy = std::variant<LocalMixture, QuantumResource, Oracle>;

Scenario scenario_of(const Strategy& strategy);
const char* strategy_name(const Strategy& strategy);

struct RunReport {
  Scenario scenario;
  std::uint64_t rounds = 0;
  std::uint64_t wins = 0;
  double win_rate = 0.0;
  std::uint64_t seed = 0;
  std::string strategy;
  std::vector<std::uint64_t> counts;  ///< [x][y][a][b], same layout as a box table
  double no_signaling_stat = 0.0;     ///< largest gap between empirical marginals

  std::uint64_t input_count(int x, int y) const;
  /// Empirical p(output | own input, other input); nullopt when the input pair never occurred.
  std::optional<double> empirical_marginal(Party party, int output, int own_input, int other_input) const;
};

/// Plays `rounds` independent rounds. Round r draws from its own stream
/// (seed, r), so the report does not depend on `workers`.
RunReport play(const GameSpec& game, const Strategy& strategy, std::uint64_t rounds, std::uint64_t seed,
               unsigned workers = 1);

enum class Verdict { Pass, Reject, Inconclusive };

struct NoSignalingTest {
  Party party = Party::Alice;
  int output = 0;
  int own_input = 0;
  int other_input_1 = 0;
  int other_input_2 = 0;
  double z = 0.0;
  double p_value = 1.0;
};

struct EmpiricalNoSignaling {
  Verdict verdict = Verdict::Inconclusive;
  double alpha = 0.0;
  double corrected_alpha = 0.0;  ///< alpha / number of tests
  std::vector<NoSignalingTest> tests;
  std::optional<NoSignalingTest> worst;  ///< smallest p-value
  std::uint64_t smallest_cell = 0;       ///< fewest rounds behind any input pair
};

inline constexpr std::uint64_t kMinCellSamples = 30;

/// Two-proportion z-tests of every marginal across the other party's inputs
/// (outputs 0..n-2; the last is implied), Bonferroni corrected. Any input
/// pair with fewer than 30 rounds makes the verdict Inconclusive.
EmpiricalNoSignaling empirical_no_signaling(const RunReport& report, double alpha);

enum class Family { Classical, Quantum, PrBox };

struct SweepRow {
  double p = 0.0;
  Family family = Family::Classical;
  double ceiling = 0.0;               ///< best exact win probability for the family
  std::optional<double> empirical;    ///< Monte Carlo win rate when played
  bool wins = false;                  ///< ceiling reaches 1
  std::string method;
};

/// Best win rate per p for a strategy family on the marginal-p game.
/// Classical: the digit strategy for p <= 1/3, otherwise an LP optimum over
/// local boxes honoring the game's marginals. Quantum: the formula ceiling at
/// the CHSH optimum, played only at p = 1/2 where that strategy meets the
/// marginal constraint. PR: the marginal-p table as an oracle.
std::vector<SweepRow> sweep_p(Family family, const std::vector<double>& grid, std::uint64_t rounds,
                              std::uint64_t seed, unsigned workers = 1);

/// Largest p in [0, 1/2] with win_probability_formula(chsh, p) >= 1, by
/// bisection to `tol`; nullopt when even p = 0 falls short.
std::optional<double> winning_threshold(double chsh, double tol = 1e-13);

nlohmann::json to_json(const RunReport& report);
nlohmann::json to_json(const EmpiricalNoSignaling& result);
nlohmann::json to_json(const std::vector<SweepRow>& rows);
void write_csv(std::ostream& out, const std::vector<SweepRow>& rows);

const char* to_string(Verdict verdict);
const char* to_string(Family family);

}  // namespace corrlab
