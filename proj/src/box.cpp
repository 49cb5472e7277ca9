#include "corrlab/box.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

namespace corrlab {

namespace {

void require_index(int value, int bound, const char* what) {
  if (value < 0 || value >= bound) {
    std::ostringstream msg;
    msg << what << " index " << value << " out of range [0, " << bound << ")";
    throw std::out_of_range(msg.str());
  }
}

void require_chsh(const CorrelationBox& box, const char* op) {
  if (!box.scenario().is_chsh()) {
    throw std::invalid_argument(std::string(op) + " requires the 2,2,2,2 scenario");
  }
}

void require_game_p(double p) {
  if (!(p >= 0.0 && p <= 0.5)) {
    std::ostringstream msg;
    msg << "marginal p = " << p << " outside the admissible range [0, 1/2]";
    throw std::domain_error(msg.str());
  }
}

}  // namespace

void Scenario::validate() const {
  if (nx < 1 || ny < 1 || na < 1 || nb < 1) {
    throw std::invalid_argument("scenario counts must be positive");
  }
}

CorrelationBox::CorrelationBox(Scenario scenario, std::vector<double> table)
    : scenario_(scenario), table_(std::move(table)) {
  scenario_.validate();
  if (table_.size() != scenario_.size()) {
    std::ostringstream msg;
    msg << "table has " << table_.size() << " entries, scenario needs " << scenario_.size();
    throw std::invalid_argument(msg.str());
  }
  for (double& v : table_) {
    if (!std::isfinite(v)) throw std::invalid_argument("table entry is not finite");
    if (v < -kEntryClampTol) throw std::invalid_argument("table entry is negative");
    if (v < 0.0) v = 0.0;
  }
  for (int x = 0; x < scenario_.nx; ++x) {
    for (int y = 0; y < scenario_.ny; ++y) {
      double sum = 0.0;
      for (int a = 0; a < scenario_.na; ++a)
        for (int b = 0; b < scenario_.nb; ++b) sum += (*this)(x, y, a, b);
      if (std::abs(sum - 1.0) > kCellSumTol) {
        std::ostringstream msg;
        msg.precision(17);
        msg << "cell (x=" << x << ", y=" << y << ") sums to " << sum;
        throw std::invalid_argument(msg.str());
      }
    }
  }
}

CorrelationBox CorrelationBox::from_function(Scenario scenario,
                                             const std::function<double(int, int, int, int)>& p) {
  scenario.validate();
  std::vector<double> table(scenario.size());
  for (int x = 0; x < scenario.nx; ++x)
    for (int y = 0; y < scenario.ny; ++y)
      for (int a = 0; a < scenario.na; ++a)
        for (int b = 0; b < scenario.nb; ++b) table[scenario.index(x, y, a, b)] = p(x, y, a, b);
  return CorrelationBox(scenario, std::move(table));
}

double CorrelationBox::at(int x, int y, int a, int b) const {
  require_index(x, scenario_.nx, "x");
  require_index(y, scenario_.ny, "y");
  require_index(a, scenario_.na, "a");
  require_index(b, scenario_.nb, "b");
  return (*this)(x, y, a, b);
}

GameSpec GameSpec::uniform(Scenario scenario, std::function<bool(int, int, int, int)> win,
                           std::optional<double> marginal_p, std::string name) {
  scenario.validate();
  const auto cells = static_cast<std::size_t>(scenario.nx) * scenario.ny;
  GameSpec game{scenario, std::move(win), std::vector<double>(cells, 1.0 / static_cast<double>(cells)),
                marginal_p, std::move(name)};
  game.validate();
  return game;
}

void GameSpec::validate() const {
  scenario.validate();
  if (!win) throw std::invalid_argument("game has no win predicate");
  if (input_distribution.size() != static_cast<std::size_t>(scenario.nx) * scenario.ny) {
    throw std::invalid_argument("input distribution size does not match scenario");
  }
  double total = 0.0;
  for (double w : input_distribution) {
    if (!(w >= 0.0)) throw std::invalid_argument("input distribution has a negative entry");
    total += w;
  }
  if (std::abs(total - 1.0) > 1e-12) throw std::invalid_argument("input distribution does not sum to 1");
  if (marginal_p && !(*marginal_p >= 0.0 && *marginal_p <= 0.5)) {
    throw std::domain_error("marginal p outside [0, 1/2]");
  }
}

GameSpec marginal_game(double p) {
  require_game_p(p);
  std::ostringstream name;
  name << "marginal-game(p=" << p << ")";
  if (p == 0.5) {
    return GameSpec::uniform(
        kChshScenario, [](int x, int y, int a, int b) { return (x & y) ? a == b : a != b; }, p,
        name.str());
  }
  return GameSpec::uniform(
      kChshScenario, [](int x, int y, int a, int b) { return (x & y) ? a == b : (a & b) == 0; }, p,
      name.str());
}

GameSpec trivial_game(Scenario scenario) {
  return GameSpec::uniform(scenario, [](int, int, int, int) { return true; }, std::nullopt, "trivial");
}

double marginal(const CorrelationBox& box, Party party, int output, int own_input, int other_input) {
  const Scenario& s = box.scenario();
  double sum = 0.0;
  if (party == Party::Alice) {
    require_index(output, s.na, "a");
    require_index(own_input, s.nx, "x");
    require_index(other_input, s.ny, "y");
    for (int b = 0; b < s.nb; ++b) sum += box(own_input, other_input, output, b);
  } else {
    require_index(output, s.nb, "b");
    require_index(own_input, s.ny, "y");
    require_index(other_input, s.nx, "x");
    for (int a = 0; a < s.na; ++a) sum += box(other_input, own_input, a, output);
  }
  return sum;
}

NoSignalingReport check_no_signaling(const CorrelationBox& box, double tol) {
  const Scenario& s = box.scenario();
  NoSignalingReport report;
  report.tolerance = tol;
  double worst = -1.0;

  auto scan = [&](Party party, int outputs, int inputs, int others) {
    for (int o = 0; o < outputs; ++o)
      for (int i = 0; i < inputs; ++i)
        for (int j1 = 0; j1 < others; ++j1)
          for (int j2 = j1 + 1; j2 < others; ++j2) {
            const double d =
                std::abs(marginal(box, party, o, i, j1) - marginal(box, party, o, i, j2));
            if (d > worst) {
              worst = d;
              report.worst_case = NoSignalingWitness{party, o, i, j1, j2};
            }
          }
  };
  scan(Party::Alice, s.na, s.nx, s.ny);
  scan(Party::Bob, s.nb, s.ny, s.nx);

  report.max_violation = std::max(worst, 0.0);
  report.is_no_signaling = report.max_violation <= tol;
  return report;
}

double correlator(const CorrelationBox& box, int x, int y) {
  require_chsh(box, "correlator");
  require_index(x, 2, "x");
  require_index(y, 2, "y");
  return box(x, y, 0, 0) + box(x, y, 1, 1) - box(x, y, 0, 1) - box(x, y, 1, 0);
}

double chsh_value(const CorrelationBox& box) {
  require_chsh(box, "chsh_value");
  return correlator(box, 0, 0) + correlator(box, 0, 1) + correlator(box, 1, 0) - correlator(box, 1, 1);
}

double win_probability(const CorrelationBox& box, const GameSpec& game) {
  if (!(box.scenario() == game.scenario)) {
    throw std::invalid_argument("box and game scenarios differ");
  }
  const Scenario& s = game.scenario;
  double total = 0.0;
  for (int x = 0; x < s.nx; ++x)
    for (int y = 0; y < s.ny; ++y) {
      const double w = game.input_probability(x, y);
      if (w == 0.0) continue;
      double cell = 0.0;
      for (int a = 0; a < s.na; ++a)
        for (int b = 0; b < s.nb; ++b)
          if (game.win(x, y, a, b)) cell += box(x, y, a, b);
      total += w * cell;
    }
  return total;
}

double win_probability_formula(double chsh, double p) {
  require_game_p(p);
  return 0.5 - chsh / 8.0 + 3.0 * (1.0 - 2.0 * p) / 4.0;
}

CorrelationBox build_game_table(double p) {
  require_game_p(p);
  return CorrelationBox::from_function(kChshScenario, [p](int x, int y, int a, int b) {
    if (x == 1 && y == 1) {
      if (a == 0 && b == 0) return 1.0 - p;
      if (a == 1 && b == 1) return p;
      return 0.0;
    }
    if (a == 0 && b == 0) return 1.0 - 2.0 * p;
    if (a == 1 && b == 1) return 0.0;
    return p;
  });
}

CorrelationBox pr_box() {
  return CorrelationBox::from_function(kChshScenario, [](int x, int y, int a, int b) {
    return (a ^ b) == (x & y) ? 0.5 : 0.0;
  });
}

CorrelationBox half_game_box() {
  return CorrelationBox::from_function(kChshScenario, [](int x, int y, int a, int b) {
    return (a ^ b) == (1 ^ (x & y)) ? 0.5 : 0.0;
  });
}

CorrelationBox deterministic_digit_box(int digit) {
  std::function<int(int)> alice;
  std::function<int(int)> bob;
  switch (digit) {
    case 1:  // a = x, b = y
      alice = [](int x) { return x; };
      bob = [](int y) { return y; };
      break;
    case 2:  // Alice outputs 1 iff x = 0, Bob always 0
      alice = [](int x) { return 1 - x; };
      bob = [](int) { return 0; };
      break;
    case 3:  // Bob outputs 1 iff y = 0, Alice always 0
      alice = [](int) { return 0; };
      bob = [](int y) { return 1 - y; };
      break;
    case 4:
      alice = [](int) { return 0; };
      bob = [](int) { return 0; };
      break;
    default:
      throw std::invalid_argument("deterministic digit must be 1, 2, 3 or 4");
  }
  return CorrelationBox::from_function(kChshScenario, [&](int x, int y, int a, int b) {
    return (a == alice(x) && b == bob(y)) ? 1.0 : 0.0;
  });
}

CorrelationBox uniform_box(Scenario scenario) {
  const double v = 1.0 / (static_cast<double>(scenario.na) * scenario.nb);
  return CorrelationBox::from_function(scenario, [v](int, int, int, int) { return v; });
}

CorrelationBox flip_outputs(const CorrelationBox& box, Party party) {
  const Scenario& s = box.scenario();
  return CorrelationBox::from_function(s, [&](int x, int y, int a, int b) {
    return party == Party::Alice ? box(x, y, s.na - 1 - a, b) : box(x, y, a, s.nb - 1 - b);
  });
}

CorrelationBox mix(std::span<const CorrelationBox> boxes, std::span<const double> weights) {
  if (boxes.empty()) throw std::invalid_argument("mix: no boxes");
  if (boxes.size() != weights.size()) throw std::invalid_argument("mix: weight count mismatch");
  double total = 0.0;
  for (double w : weights) {
    if (!(w >= 0.0)) throw std::invalid_argument("mix: negative weight");
    total += w;
  }
  if (std::abs(total - 1.0) > 1e-12) throw std::invalid_argument("mix: weights do not sum to 1");
  const Scenario s = boxes.front().scenario();
  std::vector<double> table(s.size(), 0.0);
  for (std::size_t k = 0; k < boxes.size(); ++k) {
    if (!(boxes[k].scenario() == s)) throw std::invalid_argument("mix: scenario mismatch");
    const auto t = boxes[k].table();
    for (std::size_t i = 0; i < table.size(); ++i) table[i] += weights[k] * t[i];
  }
  return CorrelationBox(s, std::move(table));
}

double max_abs_difference(const CorrelationBox& lhs, const CorrelationBox& rhs) {
  if (!(lhs.scenario() == rhs.scenario())) throw std::invalid_argument("scenario mismatch");
  double worst = 0.0;
  for (std::size_t i = 0; i < lhs.table().size(); ++i)
    worst = std::max(worst, std::abs(lhs.table()[i] - rhs.table()[i]));
  return worst;
}

nlohmann::json to_json(const CorrelationBox& box) {
  const Scenario& s = box.scenario();
  nlohmann::json table = nlohmann::json::array();
  for (int x = 0; x < s.nx; ++x) {
    nlohmann::json jx = nlohmann::json::array();
    for (int y = 0; y < s.ny; ++y) {
      nlohmann::json jy = nlohmann::json::array();
      for (int a = 0; a < s.na; ++a) {
        nlohmann::json ja = nlohmann::json::array();
        for (int b = 0; b < s.nb; ++b) ja.push_back(box(x, y, a, b));
        jy.push_back(std::move(ja));
      }
      jx.push_back(std::move(jy));
    }
    table.push_back(std::move(jx));
  }
  return {{"scenario", {s.nx, s.ny, s.na, s.nb}}, {"table", std::move(table)}};
}

CorrelationBox box_from_json(const nlohmann::json& j) {
  if (!j.is_object() || !j.contains("scenario") || !j.contains("table")) {
    throw std::invalid_argument("box JSON needs \"scenario\" and \"table\"");
  }
  const auto& js = j.at("scenario");
  if (!js.is_array() || js.size() != 4) throw std::invalid_argument("scenario must be [nx,ny,na,nb]");
  Scenario s{js[0].get<int>(), js[1].get<int>(), js[2].get<int>(), js[3].get<int>()};
  s.validate();
  const auto& jt = j.at("table");
  auto expect_array = [](const nlohmann::json& v, int n, const char* level) {
    if (!v.is_array() || static_cast<int>(v.size()) != n) {
      throw std::invalid_argument(std::string("table nesting mismatch at level ") + level);
    }
  };
  std::vector<double> table(s.size());
  expect_array(jt, s.nx, "x");
  for (int x = 0; x < s.nx; ++x) {
    expect_array(jt[x], s.ny, "y");
    for (int y = 0; y < s.ny; ++y) {
      expect_array(jt[x][y], s.na, "a");
      for (int a = 0; a < s.na; ++a) {
        expect_array(jt[x][y][a], s.nb, "b");
        for (int b = 0; b < s.nb; ++b) {
          const auto& v = jt[x][y][a][b];
          if (!v.is_number()) throw std::invalid_argument("table entry is not a number");
          table[s.index(x, y, a, b)] = v.get<double>();
        }
      }
    }
  }
  return CorrelationBox(s, std::move(table));
}

nlohmann::json to_json(const NoSignalingReport& report) {
  nlohmann::json j{{"is_no_signaling", report.is_no_signaling},
                   {"max_violation", report.max_violation},
                   {"tolerance", report.tolerance}};
  if (report.worst_case) {
    const auto& w = *report.worst_case;
    j["worst_case"] = {{"party", to_string(w.party)},
                       {"output", w.output},
                       {"input", w.input},
                       {"other_inputs", {w.other_input_1, w.other_input_2}}};
  } else {
    j["worst_case"] = nullptr;
  }
  return j;
}

const char* to_string(Party party) { return party == Party::Alice ? "A" : "B"; }

}  // namespace corrlab
