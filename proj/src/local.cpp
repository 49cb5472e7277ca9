#include "corrlab/local.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

namespace corrlab {

namespace {

std::size_t int_pow(int base, int exp) {
  std::size_t r = 1;
  for (int i = 0; i < exp; ++i) r *= static_cast<std::size_t>(base);
  return r;
}

// Digits of `index` in base `base`, most significant first.
std::vector<int> decode_map(std::size_t index, int base, int length) {
  std::vector<int> map(static_cast<std::size_t>(length));
  for (int i = length - 1; i >= 0; --i) {
    map[static_cast<std::size_t>(i)] = static_cast<int>(index % static_cast<std::size_t>(base));
    index /= static_cast<std::size_t>(base);
  }
  return map;
}

std::size_t encode_map(const std::vector<int>& map, int base) {
  std::size_t index = 0;
  for (int v : map) index = index * static_cast<std::size_t>(base) + static_cast<std::size_t>(v);
  return index;
}

// Column v holds the table of deterministic vertex v.
Eigen::MatrixXd vertex_matrix(Scenario s, const std::vector<DeterministicBox>& vertices) {
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(s.size()),
                                            static_cast<Eigen::Index>(vertices.size()));
  for (std::size_t v = 0; v < vertices.size(); ++v)
    for (int x = 0; x < s.nx; ++x)
      for (int y = 0; y < s.ny; ++y) {
        const auto i = s.index(x, y, vertices[v].alice_map[static_cast<std::size_t>(x)],
                               vertices[v].bob_map[static_cast<std::size_t>(y)]);
        m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(v)) = 1.0;
      }
  return m;
}

// Keeps strictly positive weights, renormalized.
LocalDecomposition make_decomposition(Scenario s, const std::vector<DeterministicBox>& vertices,
                                      const Eigen::VectorXd& weights, double drop_below) {
  LocalDecomposition d;
  d.scenario = s;
  double total = 0.0;
  for (Eigen::Index v = 0; v < weights.size(); ++v) {
    if (weights(v) > drop_below) total += weights(v);
  }
  if (!(total > 0.0)) throw lp::LpError("local decomposition has no positive weight");
  for (Eigen::Index v = 0; v < weights.size(); ++v) {
    if (weights(v) <= drop_below) continue;
    d.vertices.push_back(vertices[static_cast<std::size_t>(v)]);
    d.weights.push_back(weights(v) / total);
    d.indices.push_back(static_cast<std::size_t>(v));
  }
  return d;
}

}  // namespace

CorrelationBox DeterministicBox::to_box(Scenario scenario) const {
  if (alice_map.size() != static_cast<std::size_t>(scenario.nx) ||
      bob_map.size() != static_cast<std::size_t>(scenario.ny)) {
    throw std::invalid_argument("deterministic maps do not match scenario inputs");
  }
  for (int a : alice_map)
    if (a < 0 || a >= scenario.na) throw std::invalid_argument("Alice map output out of range");
  for (int b : bob_map)
    if (b < 0 || b >= scenario.nb) throw std::invalid_argument("Bob map output out of range");
  return CorrelationBox::from_function(scenario, [this](int x, int y, int a, int b) {
    return (a == alice_map[static_cast<std::size_t>(x)] && b == bob_map[static_cast<std::size_t>(y)])
               ? 1.0
               : 0.0;
  });
}

std::vector<DeterministicBox> enumerate_deterministic(Scenario scenario) {
  scenario.validate();
  const std::size_t alice_count = int_pow(scenario.na, scenario.nx);
  const std::size_t bob_count = int_pow(scenario.nb, scenario.ny);
  std::vector<DeterministicBox> out;
  out.reserve(alice_count * bob_count);
  for (std::size_t ia = 0; ia < alice_count; ++ia)
    for (std::size_t ib = 0; ib < bob_count; ++ib)
      out.push_back({decode_map(ia, scenario.na, scenario.nx), decode_map(ib, scenario.nb, scenario.ny)});
  return out;
}

std::size_t canonical_index(Scenario scenario, const DeterministicBox& box) {
  return encode_map(box.alice_map, scenario.na) * int_pow(scenario.nb, scenario.ny) +
         encode_map(box.bob_map, scenario.nb);
}

CorrelationBox LocalDecomposition::mixture() const {
  std::vector<CorrelationBox> boxes;
  boxes.reserve(vertices.size());
  for (const auto& v : vertices) boxes.push_back(v.to_box(scenario));
  return mix(boxes, weights);
}

MembershipResult membership(const CorrelationBox& box, double tol) {
  const Scenario s = box.scenario();
  const auto vertices = enumerate_deterministic(s);
  const Eigen::MatrixXd d = vertex_matrix(s, vertices);

  lp::Problem problem;
  problem.A.resize(d.rows() + 1, d.cols());
  problem.A.topRows(d.rows()) = d;
  problem.A.row(d.rows()).setOnes();
  problem.b.resize(d.rows() + 1);
  for (Eigen::Index i = 0; i < d.rows(); ++i) problem.b(i) = box.table()[static_cast<std::size_t>(i)];
  problem.b(d.rows()) = 1.0;
  problem.c = Eigen::VectorXd::Zero(d.cols());

  lp::Options options;
  options.feasibility_tol = tol;
  const lp::Result r = lp::solve(problem, options);

  if (r.status == lp::Status::Infeasible) {
    NonlocalCertificate cert{r.infeasibility, std::nullopt};
    if (s.is_chsh()) cert.chsh = chsh_value(box);
    return {cert};
  }
  if (r.status != lp::Status::Optimal) throw lp::LpError("membership LP did not reach optimality");

  LocalDecomposition decomposition = make_decomposition(s, vertices, r.x, 1e-14);
  const double err = max_abs_difference(decomposition.mixture(), box);
  if (err > tol) {
    std::ostringstream msg;
    msg << "membership LP decomposition misses the box by " << err;
    throw lp::LpError(msg.str());
  }
  return {std::move(decomposition)};
}

LocalDecomposition classical_game_strategy(double p) {
  if (!(p >= 0.0)) throw std::domain_error("classical strategy needs p >= 0");
  if (p > 1.0 / 3.0) {
    std::ostringstream msg;
    msg << "no winning classical strategy for p = " << p
        << ": winning needs K <= 2 - 12p < -2, beyond the Bell bound |K| <= 2 (requires p <= 1/3)";
    throw std::domain_error(msg.str());
  }
  const std::vector<DeterministicBox> digits{
      {{0, 1}, {0, 1}},  // 1: a = x, b = y
      {{1, 0}, {0, 0}},  // 2: a = not x, b = 0
      {{0, 0}, {1, 0}},  // 3: a = 0, b = not y
      {{0, 0}, {0, 0}},  // 4: all zero
  };
  const double rest = 1.0 - 3.0 * p;
  const std::vector<double> w{p, p, p, rest};
  LocalDecomposition d;
  d.scenario = kChshScenario;
  for (std::size_t i = 0; i < digits.size(); ++i) {
    if (w[i] <= 0.0) continue;
    d.vertices.push_back(digits[i]);
    d.weights.push_back(w[i]);
    d.indices.push_back(canonical_index(kChshScenario, digits[i]));
  }
  return d;
}

VertexOptimum classical_bound_optimum(const GameSpec& game, Objective objective) {
  game.validate();
  const auto vertices = enumerate_deterministic(game.scenario);
  VertexOptimum best;
  bool have = false;
  for (std::size_t v = 0; v < vertices.size(); ++v) {
    const double w = win_probability(vertices[v].to_box(game.scenario), game);
    const bool better = !have || (objective == Objective::Maximize ? w > best.win : w < best.win);
    if (better) {
      best = {w, vertices[v], v};
      have = true;
    }
  }
  return best;
}

std::optional<LocalOptimum> optimize_local(const GameSpec& game,
                                           const std::vector<BoxConstraint>& constraints,
                                           Objective objective) {
  game.validate();
  const Scenario s = game.scenario;
  const auto vertices = enumerate_deterministic(s);
  const Eigen::MatrixXd d = vertex_matrix(s, vertices);
  const auto nv = d.cols();
  const auto rows = static_cast<Eigen::Index>(constraints.size()) + 1;

  lp::Problem problem;
  problem.A = Eigen::MatrixXd::Zero(rows, nv);
  problem.b = Eigen::VectorXd::Zero(rows);
  problem.A.row(0).setOnes();
  problem.b(0) = 1.0;
  for (std::size_t k = 0; k < constraints.size(); ++k) {
    const auto& con = constraints[k];
    if (con.coefficients.size() != s.size()) {
      throw std::invalid_argument("box constraint has the wrong number of coefficients");
    }
    const Eigen::Map<const Eigen::VectorXd> coef(con.coefficients.data(), d.rows());
    problem.A.row(static_cast<Eigen::Index>(k) + 1) = coef.transpose() * d;
    problem.b(static_cast<Eigen::Index>(k) + 1) = con.rhs;
  }
  problem.c.resize(nv);
  const double sign = objective == Objective::Maximize ? -1.0 : 1.0;
  for (Eigen::Index v = 0; v < nv; ++v)
    problem.c(v) = sign * win_probability(vertices[static_cast<std::size_t>(v)].to_box(s), game);

  const lp::Result r = lp::solve(problem);
  if (r.status == lp::Status::Infeasible) return std::nullopt;
  if (r.status != lp::Status::Optimal) throw lp::LpError("local optimization LP is unbounded");

  LocalOptimum out;
  out.decomposition = make_decomposition(s, vertices, r.x, 1e-14);
  out.win = win_probability(out.decomposition.mixture(), game);
  return out;
}

std::vector<BoxConstraint> marginal_game_constraints(double p) {
  if (!(p >= 0.0 && p <= 0.5)) throw std::domain_error("marginal p outside [0, 1/2]");
  const Scenario s = kChshScenario;
  std::vector<BoxConstraint> out;
  for (int x = 0; x < 2; ++x) {
    BoxConstraint c{std::vector<double>(s.size(), 0.0), p};
    for (int b = 0; b < 2; ++b) c.coefficients[s.index(x, 0, 1, b)] = 1.0;
    out.push_back(std::move(c));
  }
  for (int y = 0; y < 2; ++y) {
    BoxConstraint c{std::vector<double>(s.size(), 0.0), p};
    for (int a = 0; a < 2; ++a) c.coefficients[s.index(0, y, a, 1)] = 1.0;
    out.push_back(std::move(c));
  }
  for (int x = 0; x < 2; ++x)
    for (int y = 0; y < 2; ++y) {
      if (x == 1 && y == 1) continue;
      BoxConstraint c{std::vector<double>(s.size(), 0.0), 0.0};
      c.coefficients[s.index(x, y, 1, 1)] = 1.0;
      out.push_back(std::move(c));
    }
  return out;
}

LocalOptimum best_classical_for_marginal(double p) {
  auto r = optimize_local(marginal_game(p), marginal_game_constraints(p));
  if (!r) throw lp::LpError("no local box satisfies the marginal-game constraints");
  return *std::move(r);
}

ExtensionResult symmetric_extension(const CorrelationBox& shared) {
  if (!shared.scenario().is_chsh()) throw std::invalid_argument("symmetric extension needs a 2,2,2,2 box");
  // Variable index: ((((x*2 + y)*2 + z)*2 + a)*2 + b)*2 + c.
  auto var = [](int x, int y, int z, int a, int b, int c) {
    return static_cast<Eigen::Index>(((((x * 2 + y) * 2 + z) * 2 + a) * 2 + b) * 2 + c);
  };
  constexpr Eigen::Index kVars = 64;
  std::vector<Eigen::VectorXd> rows;
  std::vector<double> rhs;

  for (int x = 0; x < 2; ++x)
    for (int y = 0; y < 2; ++y)
      for (int z = 0; z < 2; ++z)
        for (int a = 0; a < 2; ++a)
          for (int o = 0; o < 2; ++o) {
            Eigen::VectorXd ab = Eigen::VectorXd::Zero(kVars);
            Eigen::VectorXd ac = Eigen::VectorXd::Zero(kVars);
            for (int k = 0; k < 2; ++k) {
              ab(var(x, y, z, a, o, k)) = 1.0;
              ac(var(x, y, z, a, k, o)) = 1.0;
            }
            rows.push_back(ab);
            rhs.push_back(shared(x, y, a, o));
            rows.push_back(ac);
            rhs.push_back(shared(x, z, a, o));
          }
  // The BC marginal must not depend on Alice's input.
  for (int y = 0; y < 2; ++y)
    for (int z = 0; z < 2; ++z)
      for (int b = 0; b < 2; ++b)
        for (int c = 0; c < 2; ++c) {
          Eigen::VectorXd row = Eigen::VectorXd::Zero(kVars);
          for (int a = 0; a < 2; ++a) {
            row(var(0, y, z, a, b, c)) += 1.0;
            row(var(1, y, z, a, b, c)) -= 1.0;
          }
          rows.push_back(row);
          rhs.push_back(0.0);
        }

  lp::Problem problem;
  problem.A.resize(static_cast<Eigen::Index>(rows.size()), kVars);
  problem.b.resize(static_cast<Eigen::Index>(rows.size()));
  for (std::size_t i = 0; i < rows.size(); ++i) {
    problem.A.row(static_cast<Eigen::Index>(i)) = rows[i].transpose();
    problem.b(static_cast<Eigen::Index>(i)) = rhs[i];
  }
  problem.c = Eigen::VectorXd::Zero(kVars);
  const lp::Result r = lp::solve(problem);

  ExtensionResult out;
  out.infeasibility = r.infeasibility;
  out.feasible = r.status == lp::Status::Optimal;
  if (out.feasible) out.table = std::vector<double>(r.x.data(), r.x.data() + r.x.size());
  return out;
}

nlohmann::json to_json(const LocalDecomposition& decomposition) {
  nlohmann::json vertices = nlohmann::json::array();
  for (const auto& v : decomposition.vertices) vertices.push_back({{"alice", v.alice_map}, {"bob", v.bob_map}});
  return {{"weights", decomposition.weights}, {"vertices", decomposition.indices}, {"maps", vertices}};
}

nlohmann::json to_json(const MembershipResult& result) {
  if (result.is_local()) {
    const auto& d = result.decomposition();
    return {{"status", "local"}, {"weights", d.weights}, {"vertices", d.indices}};
  }
  const auto& c = result.certificate();
  nlohmann::json j{{"status", "nonlocal"}, {"infeasibility", c.infeasibility}};
  j["chsh"] = c.chsh ? nlohmann::json(*c.chsh) : nlohmann::json(nullptr);
  return j;
}

}  // namespace corrlab
