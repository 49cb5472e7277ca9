// Command-line front end. Results go to stdout as JSON (CSV where asked).
// Exit status: 0 ok, 1 a validation failed, 2 malformed input or bad parameter.
#include <cmath>
#include <fstream>
#include <iostream>
#include <map>
#include <numbers>
#include <string>

#include "CLI11.hpp"
#include "corrlab/box.hpp"
#include "corrlab/decoherence.hpp"
#include "corrlab/hilbert.hpp"
#include "corrlab/local.hpp"
#include "corrlab/runner.hpp"
#include "corrlab/scenarios.hpp"
#include "json.hpp"

using namespace corrlab;
using nlohmann::json;

namespace {

constexpr int kValidationFailed = 1;
constexpr int kBadInput = 2;

struct BadInput : std::runtime_error {
  using std::runtime_error::runtime_error;
};

CorrelationBox read_box(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw BadInput("cannot open " + path);
  try {
    return box_from_json(json::parse(in));
  } catch (const json::exception& e) {
    throw BadInput(path + ": " + e.what());
  } catch (const std::invalid_argument& e) {
    throw BadInput(path + ": " + e.what());
  }
}

void emit(const json& j) { std::cout << j.dump(2) << '\n'; }

json strategy_json(const QuantumStrategy& s) {
  json alice = json::array(), bob = json::array();
  for (const auto& m : s.alice()) alice.push_back(to_json(m));
  for (const auto& m : s.bob()) bob.push_back(to_json(m));
  return {{"state", to_json(s.state())}, {"dim_a", s.dim_a()}, {"dim_b", s.dim_b()}, {"alice", alice}, {"bob", bob}};
}

DensityOperator named_qubit(const std::string& name) {
  static const std::map<std::string, std::array<double, 3>> bloch{
      {"0", {0, 0, 1}}, {"1", {0, 0, -1}}, {"+", {1, 0, 0}}, {"-", {-1, 0, 0}}, {"+i", {0, 1, 0}}, {"-i", {0, -1, 0}}};
  const auto it = bloch.find(name);
  if (it == bloch.end()) throw BadInput("unknown state '" + name + "' (use 0, 1, +, -, +i, -i)");
  return from_bloch(it->second);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Correlation boxes, quantum strategies and decoherence toy models"};
  app.require_subcommand(1);
  int status = 0;

  // box
  auto* box_cmd = app.add_subcommand("box", "inspect a box file")->require_subcommand(1);
  std::string box_file;
  auto* box_check = box_cmd->add_subcommand("check", "no-signaling report");
  box_check->add_option("file", box_file)->required();
  box_check->callback([&] {
    const auto report = check_no_signaling(read_box(box_file));
    emit(to_json(report));
    if (!report.is_no_signaling) status = kValidationFailed;
  });
  auto* box_chsh = box_cmd->add_subcommand("chsh", "CHSH value");
  box_chsh->add_option("file", box_file)->required();
  box_chsh->callback([&] {
    const auto box = read_box(box_file);
    if (!box.scenario().is_chsh()) throw BadInput("chsh needs a 2,2,2,2 box");
    emit({{"chsh", chsh_value(box)}, {"no_signaling", check_no_signaling(box).is_no_signaling}});
  });

  // game
  auto* game_cmd = app.add_subcommand("game", "the marginal-p game")->require_subcommand(1);
  double p = 0.5;
  auto* game_table = game_cmd->add_subcommand("table", "correlation table for marginal p");
  game_table->add_option("--p", p)->required()->check(CLI::Range(0.0, 0.5));
  game_table->callback([&] {
    const auto box = build_game_table(p);
    emit({{"p", p}, {"box", to_json(box)}, {"chsh", chsh_value(box)}});
  });

  std::string strategy;
  std::uint64_t rounds = 0, seed = 0;
  unsigned workers = 1;
  double alpha = 0.01;
  auto* game_play = game_cmd->add_subcommand("play", "Monte Carlo rounds with one strategy");
  game_play->add_option("--p", p)->required()->check(CLI::Range(0.0, 0.5));
  game_play->add_option("--strategy", strategy)->required()->check(CLI::IsMember({"classical", "quantum", "pr"}));
  game_play->add_option("--rounds", rounds)->required()->check(CLI::Range(std::uint64_t{1}, std::uint64_t{1} << 32));
  game_play->add_option("--seed", seed)->required();
  game_play->add_option("--workers", workers)->check(CLI::Range(1u, 256u));
  game_play->add_option("--alpha", alpha)->check(CLI::Range(1e-12, 0.5));
  game_play->callback([&] {
    const GameSpec game = marginal_game(p);
    Strategy s = Oracle{build_game_table(p)};
    if (strategy == "classical") {
      s = LocalMixture{p <= 1.0 / 3.0 ? classical_game_strategy(p) : best_classical_for_marginal(p).decomposition};
    } else if (strategy == "quantum") {
      s = QuantumResource{optimize_chsh(Objective::Minimize).strategy};
    }
    const auto report = play(game, s, rounds, seed, workers);
    emit({{"p", p},
          {"report", to_json(report)},
          {"exact_win_probability",
           std::visit([&](const auto& st) {
             using T = std::decay_t<decltype(st)>;
             if constexpr (std::is_same_v<T, LocalMixture>) return win_probability(st.decomposition.mixture(), game);
             else if constexpr (std::is_same_v<T, QuantumResource>) return win_probability(quantum_box(st.strategy), game);
             else return win_probability(st.box, game);
           }, s)},
          {"no_signaling", to_json(empirical_no_signaling(report, alpha))}});
  });

  std::vector<double> grid;
  std::string family = "all";
  bool csv = false;
  std::uint64_t sweep_rounds = 0;
  auto* game_sweep = game_cmd->add_subcommand("sweep", "best win rate per p for each strategy family");
  game_sweep->add_option("--grid", grid, "comma-separated p values")->required()->delimiter(',')->check(
      CLI::Range(0.0, 0.5));
  game_sweep->add_option("--family", family)->check(CLI::IsMember({"classical", "quantum", "pr", "all"}));
  game_sweep->add_option("--rounds", sweep_rounds, "Monte Carlo rounds per row (0: exact only)");
  game_sweep->add_option("--seed", seed)->required();
  game_sweep->add_option("--workers", workers)->check(CLI::Range(1u, 256u));
  game_sweep->add_flag("--csv", csv);
  game_sweep->callback([&] {
    std::vector<SweepRow> rows;
    for (const auto& [name, fam] : {std::pair{"classical", Family::Classical}, std::pair{"quantum", Family::Quantum},
                                    std::pair{"pr", Family::PrBox}}) {
      if (family != "all" && family != name) continue;
      const auto part = sweep_p(fam, grid, sweep_rounds, seed, workers);
      rows.insert(rows.end(), part.begin(), part.end());
    }
    if (csv) {
      write_csv(std::cout, rows);
      return;
    }
    const double quantum_k = -2.0 * std::numbers::sqrt2;
    emit({{"rows", to_json(rows)},
          {"seed", seed},
          {"thresholds",
           {{"classical", *winning_threshold(-2.0)}, {"quantum", *winning_threshold(quantum_k)}}}});
  });

  // polytope
  auto* poly_cmd = app.add_subcommand("polytope", "local polytope queries")->require_subcommand(1);
  auto* poly_member = poly_cmd->add_subcommand("membership", "local decomposition or nonlocality certificate");
  poly_member->add_option("file", box_file)->required();
  poly_member->callback([&] { emit(to_json(membership(read_box(box_file)))); });

  // quantum
  auto* quantum_cmd = app.add_subcommand("quantum", "qubit strategies")->require_subcommand(1);
  std::string objective = "min";
  int grid_steps = 12;
  auto* q_opt = quantum_cmd->add_subcommand("optimize", "extreme CHSH value over X-Z plane measurements");
  q_opt->add_option("--objective", objective)->check(CLI::IsMember({"max", "min"}));
  q_opt->add_option("--grid-steps", grid_steps)->check(CLI::Range(2, 360));
  q_opt->callback([&] {
    const auto opt = optimize_chsh(objective == "max" ? Objective::Maximize : Objective::Minimize, grid_steps);
    const auto box = quantum_box(opt.strategy);
    emit({{"objective", objective},
          {"chsh", opt.chsh},
          {"angles", opt.angles},
          {"evaluations", opt.evaluations},
          {"win_probability_p_half", win_probability(box, marginal_game(0.5))},
          {"box", to_json(box)},
          {"strategy", strategy_json(opt.strategy)}});
  });

  // steer
  auto* steer_cmd = app.add_subcommand("steer", "remote steering example")->require_subcommand(1);
  std::string pair_name = "complex-half-turn";
  const std::map<std::string, TrinePair> pairs{{"complex-half-turn", TrinePair::ComplexHalfTurn},
                                               {"real-quarter-turn", TrinePair::RealQuarterTurn},
                                               {"real-sixth-turn", TrinePair::RealSixthTurn}};
  auto* steer_demo = steer_cmd->add_subcommand("demo", "both ensembles of Bob's reduced state");
  steer_demo->add_option("--pair", pair_name)->check(CLI::IsMember(pairs));
  steer_demo->callback([&] {
    const auto ex = build_steering_example(pairs.at(pair_name));
    const auto report = steering_no_signaling_check(ex);
    emit({{"example", to_json(ex)}, {"report", to_json(report)}});
    if (report.max_trace_distance > 1e-10) status = kValidationFailed;
  });

  // clone
  auto* clone_cmd = app.add_subcommand("clone", "cloning would signal")->require_subcommand(1);
  int copies = 2;
  auto* clone_adv = clone_cmd->add_subcommand("advantage", "Helstrom success with n copies of Bob's state");
  clone_adv->add_option("--n", copies)->required()->check(CLI::Range(1, 10));
  clone_adv->add_option("--pair", pair_name)->check(CLI::IsMember(pairs));
  clone_adv->callback([&] { emit(to_json(cloning_signaling_advantage(copies, pairs.at(pair_name)))); });

  std::string clone_box;
  auto* clone_pr = clone_cmd->add_subcommand("pr-signal", "Bob's half of a box used twice");
  clone_pr->add_option("--rounds", rounds)->required()->check(CLI::Range(std::uint64_t{1}, std::uint64_t{1} << 32));
  clone_pr->add_option("--seed", seed)->required();
  clone_pr->add_option("--box", clone_box, "box file (default: PR box)");
  clone_pr->callback([&] {
    const auto box = clone_box.empty() ? pr_box() : read_box(clone_box);
    emit(to_json(pr_clone_signal(box, rounds, seed)));
  });

  // tomography
  std::size_t shots = 100;
  std::string state_name = "0";
  auto* tomo = app.add_subcommand("tomography", "Pauli tomography of one qubit");
  tomo->add_option("--shots", shots)->required()->check(CLI::Range(std::size_t{1}, std::size_t{1} << 32));
  tomo->add_option("--seed", seed)->required();
  tomo->add_option("--state", state_name, "0, 1, +, -, +i or -i");
  tomo->callback([&] { emit(to_json(tomography_information_loss(named_qubit(state_name), shots, seed))); });

  // decohere
  int modes = 50, branches = 2, steps = 1000;
  double t_max = 200.0, fraction = 1e-2;
  auto* dec = app.add_subcommand("decohere", "pointer-basis coherence over time");
  dec->add_option("--modes", modes)->required()->check(CLI::Range(1, 1 << 14));
  dec->add_option("--branches", branches)->required()->check(CLI::Range(2, 64));
  dec->add_option("--tmax", t_max)->required()->check(CLI::Range(0.0, 1e6));
  dec->add_option("--seed", seed)->required();
  dec->add_option("--steps", steps)->check(CLI::Range(1, 1000000));
  dec->add_option("--fraction", fraction, "decay level reported as decay_time")->check(CLI::Range(0.0, 1.0));
  dec->add_flag("--csv", csv);
  dec->callback([&] {
    const auto model = make_reference_model(branches, modes, seed);
    const auto series = decoherence_series(model, t_max, steps);
    if (csv) {
      write_csv(std::cout, series, branches);
      return;
    }
    const auto decay = first_time_below(series, fraction);
    emit({{"model", to_json(model)},
          {"seed", seed},
          {"t_max", t_max},
          {"steps", steps},
          {"initial_offdiag", series.front().offdiag_norm},
          {"final_offdiag", series.back().offdiag_norm},
          {"fraction", fraction},
          {"decay_time", decay ? json(*decay) : json(nullptr)}});
  });

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kBadInput;
  } catch (const BadInput& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kBadInput;
  } catch (const std::logic_error& e) {  // invalid_argument, out_of_range, domain_error, length_error
    std::cerr << "error: " << e.what() << '\n';
    return kBadInput;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kValidationFailed;
  }
  return status;
}
