#include "corrlab/runner.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <memory>
#include <numbers>
#include <ostream>
#include <stdexcept>
#include <thread>

namespace corrlab {

namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

// Per-round responder. Each sampler only sees what its party may see.
class RoundSampler {
 public:
  virtual ~RoundSampler() = default;
  virtual std::pair<int, int> respond(int x, int y, CounterRng& rng) const = 0;
};

class LocalSampler final : public RoundSampler {
 public:
  explicit LocalSampler(const LocalDecomposition& d) : d_(d) {}
  std::pair<int, int> respond(int x, int y, CounterRng& rng) const override {
    const auto& v = d_.vertices[rng.categorical(d_.weights)];
    return {alice(v, x), bob(v, y)};
  }

 private:
  static int alice(const DeterministicBox& v, int x) { return v.alice_map[static_cast<std::size_t>(x)]; }
  static int bob(const DeterministicBox& v, int y) { return v.bob_map[static_cast<std::size_t>(y)]; }
  const LocalDecomposition& d_;
};

// Alice's outcome distribution per setting, and Bob's reduced state after
// each of her outcomes, are fixed by the shared state; cache them once.
class QuantumSampler final : public RoundSampler {
 public:
  explicit QuantumSampler(const QuantumStrategy& s) {
    const Projector id_b = Projector::identity(s.dim_b());
    for (const auto& setting : s.alice()) {
      std::vector<double> probs;
      for (const auto& pa : setting.projectors()) {
        const Projector local = tensor(pa, id_b);
        const double prob = born_probability(s.state(), local);
        probs.push_back(prob);
        std::vector<std::vector<double>> per_y;
        if (prob > kNullEventTol) {
          const DensityOperator bob_state =
              partial_trace(luders_conditionalize(s.state(), local), Subsystem::B, s.dim_a(), s.dim_b());
          for (const auto& bset : s.bob()) {
            std::vector<double> pb;
            for (const auto& q : bset.projectors()) pb.push_back(born_probability(bob_state, q));
            per_y.push_back(std::move(pb));
          }
        }
        bob_dist_.push_back(std::move(per_y));
      }
      alice_dist_.push_back(std::move(probs));
    }
    outcomes_a_ = s.alice().front().size();
  }

  std::pair<int, int> respond(int x, int y, CounterRng& rng) const override {
    const auto a = rng.categorical(alice_dist_[static_cast<std::size_t>(x)]);
    const auto& bob = bob_dist_[static_cast<std::size_t>(x) * outcomes_a_ + a];
    const auto b = rng.categorical(bob[static_cast<std::size_t>(y)]);
    return {static_cast<int>(a), static_cast<int>(b)};
  }

 private:
  std::vector<std::vector<double>> alice_dist_;                   // [x][a]
  std::vector<std::vector<std::vector<double>>> bob_dist_;        // [x*na + a][y][b]
  std::size_t outcomes_a_ = 0;
};

class OracleSampler final : public RoundSampler {
 public:
  explicit OracleSampler(const CorrelationBox& box) : box_(box) {}
  std::pair<int, int> respond(int x, int y, CounterRng& rng) const override {
    const Scenario& s = box_.scenario();
    const std::size_t cell = static_cast<std::size_t>(s.na) * s.nb;
    const auto joint = box_.table().subspan(s.index(x, y, 0, 0), cell);
    const auto k = rng.categorical(joint);
    return {static_cast<int>(k / static_cast<std::size_t>(s.nb)), static_cast<int>(k % static_cast<std::size_t>(s.nb))};
  }

 private:
  const CorrelationBox& box_;
};

std::unique_ptr<RoundSampler> make_sampler(const Strategy& strategy) {
  return std::visit(overloaded{
                        [](const LocalMixture& m) -> std::unique_ptr<RoundSampler> {
                          return std::make_unique<LocalSampler>(m.decomposition);
                        },
                        [](const QuantumResource& q) -> std::unique_ptr<RoundSampler> {
                          return std::make_unique<QuantumSampler>(q.strategy);
                        },
                        [](const Oracle& o) -> std::unique_ptr<RoundSampler> {
                          return std::make_unique<OracleSampler>(o.box);
                        },
                    },
                    strategy);
}

struct Tally {
  std::vector<std::uint64_t> counts;
  std::uint64_t wins = 0;

  void merge(const Tally& other) {
    for (std::size_t i = 0; i < counts.size(); ++i) counts[i] += other.counts[i];
    wins += other.wins;
  }
};

Tally run_range(const GameSpec& game, const RoundSampler& sampler, std::uint64_t first, std::uint64_t last,
                std::uint64_t seed) {
  const Scenario& s = game.scenario;
  Tally t{std::vector<std::uint64_t>(s.size(), 0), 0};
  for (std::uint64_t r = first; r < last; ++r) {
    CounterRng rng(seed, r);
    const auto xy = rng.categorical(game.input_distribution);
    const int x = static_cast<int>(xy / static_cast<std::size_t>(s.ny));
    const int y = static_cast<int>(xy % static_cast<std::size_t>(s.ny));
    const auto [a, b] = sampler.respond(x, y, rng);
    ++t.counts[s.index(x, y, a, b)];
    if (game.win(x, y, a, b)) ++t.wins;
  }
  return t;
}

}  // namespace

Scenario scenario_of(const Strategy& strategy) {
  return std::visit(overloaded{
                        [](const LocalMixture& m) { return m.decomposition.scenario; },
                        [](const QuantumResource& q) { return q.strategy.scenario(); },
                        [](const Oracle& o) { return o.box.scenario(); },
                    },
                    strategy);
}

const char* strategy_name(const Strategy& strategy) {
  return std::visit(overloaded{
                        [](const LocalMixture&) { return "local-mixture"; },
                        [](const QuantumResource&) { return "quantum"; },
                        [](const Oracle&) { return "oracle"; },
                    },
                    strategy);
}

std::uint64_t RunReport::input_count(int x, int y) const {
  std::uint64_t n = 0;
  for (int a = 0; a < scenario.na; ++a)
    for (int b = 0; b < scenario.nb; ++b) n += counts[scenario.index(x, y, a, b)];
  return n;
}

std::optional<double> RunReport::empirical_marginal(Party party, int output, int own_input, int other_input) const {
  const int x = party == Party::Alice ? own_input : other_input;
  const int y = party == Party::Alice ? other_input : own_input;
  const std::uint64_t n = input_count(x, y);
  if (n == 0) return std::nullopt;
  std::uint64_t k = 0;
  const int other_outputs = party == Party::Alice ? scenario.nb : scenario.na;
  for (int o = 0; o < other_outputs; ++o) {
    k += party == Party::Alice ? counts[scenario.index(x, y, output, o)] : counts[scenario.index(x, y, o, output)];
  }
  return static_cast<double>(k) / static_cast<double>(n);
}

RunReport play(const GameSpec& game, const Strategy& strategy, std::uint64_t rounds, std::uint64_t seed,
               unsigned workers) {
  game.validate();
  if (rounds == 0) throw std::invalid_argument("play: need at least one round");
  if (!(scenario_of(strategy) == game.scenario)) throw std::invalid_argument("play: strategy scenario does not match the game");
  const auto sampler = make_sampler(strategy);

  workers = std::max(1U, std::min<unsigned>(workers, static_cast<unsigned>(std::min<std::uint64_t>(rounds, 64))));
  std::vector<Tally> parts(workers);
  if (workers == 1) {
    parts[0] = run_range(game, *sampler, 0, rounds, seed);
  } else {
    std::vector<std::thread> threads;
    for (unsigned w = 0; w < workers; ++w) {
      const std::uint64_t first = rounds * w / workers;
      const std::uint64_t last = rounds * (w + 1) / workers;
      threads.emplace_back([&, w, first, last] { parts[w] = run_range(game, *sampler, first, last, seed); });
    }
    for (auto& t : threads) t.join();
  }
  Tally total = parts[0];
  for (unsigned w = 1; w < workers; ++w) total.merge(parts[w]);

  RunReport rep;
  rep.scenario = game.scenario;
  rep.rounds = rounds;
  rep.wins = total.wins;
  rep.win_rate = static_cast<double>(total.wins) / static_cast<double>(rounds);
  rep.seed = seed;
  rep.strategy = strategy_name(strategy);
  rep.counts = std::move(total.counts);

  const Scenario& s = rep.scenario;
  for (Party party : {Party::Alice, Party::Bob}) {
    const int own_inputs = party == Party::Alice ? s.nx : s.ny;
    const int other_inputs = party == Party::Alice ? s.ny : s.nx;
    const int outputs = party == Party::Alice ? s.na : s.nb;
    for (int i = 0; i < own_inputs; ++i)
      for (int o = 0; o < outputs; ++o)
        for (int j1 = 0; j1 < other_inputs; ++j1)
          for (int j2 = j1 + 1; j2 < other_inputs; ++j2) {
            const auto m1 = rep.empirical_marginal(party, o, i, j1);
            const auto m2 = rep.empirical_marginal(party, o, i, j2);
            if (m1 && m2) rep.no_signaling_stat = std::max(rep.no_signaling_stat, std::abs(*m1 - *m2));
          }
  }
  return rep;
}

EmpiricalNoSignaling empirical_no_signaling(const RunReport& report, double alpha) {
  if (!(alpha > 0.0 && alpha < 1.0)) throw std::invalid_argument("empirical_no_signaling: alpha must lie in (0, 1)");
  const Scenario& s = report.scenario;
  EmpiricalNoSignaling out;
  out.alpha = alpha;
  out.smallest_cell = std::numeric_limits<std::uint64_t>::max();
  for (int x = 0; x < s.nx; ++x)
    for (int y = 0; y < s.ny; ++y) out.smallest_cell = std::min(out.smallest_cell, report.input_count(x, y));

  for (Party party : {Party::Alice, Party::Bob}) {
    const int own_inputs = party == Party::Alice ? s.nx : s.ny;
    const int other_inputs = party == Party::Alice ? s.ny : s.nx;
    const int outputs = party == Party::Alice ? s.na : s.nb;
    for (int i = 0; i < own_inputs; ++i)
      for (int o = 0; o + 1 < outputs; ++o)
        for (int j1 = 0; j1 < other_inputs; ++j1)
          for (int j2 = j1 + 1; j2 < other_inputs; ++j2) {
            NoSignalingTest t{party, o, i, j1, j2, 0.0, 1.0};
            const auto n1 = static_cast<double>(
                party == Party::Alice ? report.input_count(i, j1) : report.input_count(j1, i));
            const auto n2 = static_cast<double>(
                party == Party::Alice ? report.input_count(i, j2) : report.input_count(j2, i));
            if (n1 > 0 && n2 > 0) {
              const double p1 = *report.empirical_marginal(party, o, i, j1);
              const double p2 = *report.empirical_marginal(party, o, i, j2);
              const double pooled = (p1 * n1 + p2 * n2) / (n1 + n2);
              const double se = std::sqrt(pooled * (1.0 - pooled) * (1.0 / n1 + 1.0 / n2));
              if (se > 0.0) {
                t.z = (p1 - p2) / se;
              } else {
                t.z = p1 == p2 ? 0.0 : std::numeric_limits<double>::infinity();
              }
              t.p_value = std::erfc(std::abs(t.z) / std::numbers::sqrt2);
            }
            if (!out.worst || t.p_value < out.worst->p_value) out.worst = t;
            out.tests.push_back(t);
          }
  }
  out.corrected_alpha = out.tests.empty() ? alpha : alpha / static_cast<double>(out.tests.size());
  if (out.smallest_cell < kMinCellSamples) {
    out.verdict = Verdict::Inconclusive;
  } else if (out.worst && out.worst->p_value < out.corrected_alpha) {
    out.verdict = Verdict::Reject;
  } else {
    out.verdict = Verdict::Pass;
  }
  return out;
}

std::vector<SweepRow> sweep_p(Family family, const std::vector<double>& grid, std::uint64_t rounds, std::uint64_t seed,
                              unsigned workers) {
  std::optional<ChshOptimum> quantum;
  std::vector<SweepRow> rows;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const double p = grid[i];
    const GameSpec game = marginal_game(p);
    const std::uint64_t run_seed = seed + i;
    SweepRow row;
    row.p = p;
    row.family = family;
    switch (family) {
      case Family::Classical: {
        LocalDecomposition d;
        if (p <= 1.0 / 3.0) {
          d = classical_game_strategy(p);
          row.method = "digit-strategy";
        } else {
          d = best_classical_for_marginal(p).decomposition;
          row.method = "local-lp";
        }
        row.ceiling = win_probability(d.mixture(), game);
        if (rounds > 0) row.empirical = play(game, LocalMixture{d}, rounds, run_seed, workers).win_rate;
        break;
      }
      case Family::Quantum: {
        if (!quantum) quantum = optimize_chsh(Objective::Minimize);
        row.ceiling = std::min(1.0, win_probability_formula(quantum->chsh, p));
        row.method = "formula-at-chsh-optimum";
        if (p == 0.5) {
          row.method = "chsh-optimum";
          row.ceiling = win_probability(quantum_box(quantum->strategy), game);
          if (rounds > 0) {
            row.empirical = play(game, QuantumResource{quantum->strategy}, rounds, run_seed, workers).win_rate;
          }
        }
        break;
      }
      case Family::PrBox: {
        const CorrelationBox box = build_game_table(p);
        row.ceiling = win_probability(box, game);
        row.method = "game-table-oracle";
        if (rounds > 0) row.empirical = play(game, Oracle{box}, rounds, run_seed, workers).win_rate;
        break;
      }
    }
    row.wins = row.ceiling >= 1.0 - 1e-12;
    rows.push_back(std::move(row));
  }
  return rows;
}

std::optional<double> winning_threshold(double chsh, double tol) {
  auto excess = [chsh](double p) { return win_probability_formula(chsh, p) - 1.0; };
  if (excess(0.0) < 0.0) return std::nullopt;
  if (excess(0.5) >= 0.0) return 0.5;
  double lo = 0.0, hi = 0.5;
  while (hi - lo > tol) {
    const double mid = 0.5 * (lo + hi);
    (excess(mid) >= 0.0 ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

// ---------------------------------------------------------------------------

const char* to_string(Verdict v) {
  switch (v) {
    case Verdict::Pass: return "pass";
    case Verdict::Reject: return "reject";
    case Verdict::Inconclusive: return "inconclusive";
  }
  return "unknown";
}

const char* to_string(Family f) {
  switch (f) {
    case Family::Classical: return "classical";
    case Family::Quantum: return "quantum";
    case Family::PrBox: return "pr";
  }
  return "unknown";
}

nlohmann::json to_json(const RunReport& r) {
  const Scenario& s = r.scenario;
  nlohmann::json marginals = nlohmann::json::array();
  for (Party party : {Party::Alice, Party::Bob}) {
    const int own_inputs = party == Party::Alice ? s.nx : s.ny;
    const int other_inputs = party == Party::Alice ? s.ny : s.nx;
    const int outputs = party == Party::Alice ? s.na : s.nb;
    for (int i = 0; i < own_inputs; ++i)
      for (int j = 0; j < other_inputs; ++j)
        for (int o = 0; o < outputs; ++o) {
          const auto m = r.empirical_marginal(party, o, i, j);
          marginals.push_back({{"party", to_string(party)},
                               {"output", o},
                               {"own_input", i},
                               {"other_input", j},
                               {"probability", m ? nlohmann::json(*m) : nlohmann::json()}});
        }
  }
  return {{"strategy", r.strategy},
          {"scenario", {s.nx, s.ny, s.na, s.nb}},
          {"rounds", r.rounds},
          {"wins", r.wins},
          {"win_rate", r.win_rate},
          {"seed", r.seed},
          {"counts", r.counts},
          {"marginals", std::move(marginals)},
          {"no_signaling_stat", r.no_signaling_stat}};
}

nlohmann::json to_json(const EmpiricalNoSignaling& e) {
  nlohmann::json j{{"verdict", to_string(e.verdict)},
                   {"alpha", e.alpha},
                   {"corrected_alpha", e.corrected_alpha},
                   {"tests", e.tests.size()},
                   {"smallest_cell", e.smallest_cell}};
  if (e.worst) {
    j["worst"] = {{"party", to_string(e.worst->party)},
                  {"output", e.worst->output},
                  {"own_input", e.worst->own_input},
                  {"other_inputs", {e.worst->other_input_1, e.worst->other_input_2}},
                  {"z", std::isfinite(e.worst->z) ? nlohmann::json(e.worst->z) : nlohmann::json("inf")},
                  {"p_value", e.worst->p_value}};
  }
  return j;
}

nlohmann::json to_json(const std::vector<SweepRow>& rows) {
  nlohmann::json out = nlohmann::json::array();
  for (const auto& r : rows) {
    out.push_back({{"p", r.p},
                   {"family", to_string(r.family)},
                   {"ceiling", r.ceiling},
                   {"empirical", r.empirical ? nlohmann::json(*r.empirical) : nlohmann::json()},
                   {"wins", r.wins},
                   {"method", r.method}});
  }
  return out;
}

void write_csv(std::ostream& out, const std::vector<SweepRow>& rows) {
  out << "p,family,ceiling,empirical,wins,method\n";
  const auto old = out.precision(17);
  for (const auto& r : rows) {
    out << r.p << ',' << to_string(r.family) << ',' << r.ceiling << ',';
    if (r.empirical) out << *r.empirical;
    out << ',' << (r.wins ? 1 : 0) << ',' << r.method << '\n';
  }
  out.precision(old);
}

}  // namespace corrlab
