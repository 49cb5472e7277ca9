#pragma once

#include <cstddef>
#include <optional>
#include <variant>
#include <vector>

#include "corrlab/box.hpp"
#include "corrlab/simplex.hpp"

namespace corrlab {

/// Product of local deterministic response functions.
struct DeterministicBox {
  std::vector<int> alice_map;  ///< output for each Alice input
  std::vector<int> bob_map;    ///< output for each Bob input

  CorrelationBox to_box(Scenario scenario) const;
  friend bool operator==(const DeterministicBox&, const DeterministicBox&) = default;
};

/// All na^nx * nb^ny deterministic boxes: Alice maps in lexicographic order
/// (outer loop), Bob maps in lexicographic order (inner loop).
std::vector<DeterministicBox> enumerate_deterministic(Scenario scenario);

/// Position of `box` in the canonical enumeration.
std::size_t canonical_index(Scenario scenario, const DeterministicBox& box);

/// Shared-randomness strategy: a distribution over deterministic boxes.
struct LocalDecomposition {
  Scenario scenario;
  std::vector<DeterministicBox> vertices;
  std::vector<double> weights;
  std::vector<std::size_t> indices;  ///< canonical indices of `vertices`

  CorrelationBox mixture() const;
};

struct NonlocalCertificate {
  double infeasibility = 0.0;       ///< phase-one residual of the membership LP
  std::optional<double> chsh;       ///< CHSH value when the scenario is 2,2,2,2
};

struct MembershipResult {
  std::variant<LocalDecomposition, NonlocalCertificate> status;

  bool is_local() const { return std::holds_alternative<LocalDecomposition>(status); }
  const LocalDecomposition& decomposition() const { return std::get<LocalDecomposition>(status); }
  const NonlocalCertificate& certificate() const { return std::get<NonlocalCertificate>(status); }
};

/// Decides whether `box` lies in the local polytope by LP feasibility over
/// deterministic-vertex weights. Throws lp::LpError if the solver fails or
/// the recovered decomposition does not re-mix to the box within `tol`.
MembershipResult membership(const CorrelationBox& box, double tol = 1e-9);

/// The shared-randomness strategy that wins the marginal-p game for
/// p <= 1/3: digits 1, 2, 3 with weight p each and the all-zero state with
/// weight 1 - 3p. Zero-weight vertices are omitted.
LocalDecomposition classical_game_strategy(double p);

struct VertexOptimum {
  double win = 0.0;
  DeterministicBox vertex;
  std::size_t index = 0;
};

/// Exhaustive search over deterministic boxes; ties go to the first vertex
/// in canonical order.
VertexOptimum classical_bound_optimum(const GameSpec& game, Objective objective = Objective::Maximize);

/// Linear equality on a box table: sum_i coefficients[i] * table[i] = rhs.
struct BoxConstraint {
  std::vector<double> coefficients;
  double rhs = 0.0;
};

struct LocalOptimum {
  double win = 0.0;
  LocalDecomposition decomposition;
};

/// Optimizes the win probability over the local polytope (optionally cut by
/// linear constraints) with the simplex solver. Returns nullopt when the
/// constraints exclude every local box.
std::optional<LocalOptimum> optimize_local(const GameSpec& game,
                                           const std::vector<BoxConstraint>& constraints = {},
                                           Objective objective = Objective::Maximize);

/// Constraints forcing every output-1 marginal to p and p(11|xy) = 0 on the
/// inputs 00, 01, 10: the structure the marginal-p game assumes.
std::vector<BoxConstraint> marginal_game_constraints(double p);

/// Best local strategy for the marginal-p game under marginal_game_constraints.
LocalOptimum best_classical_for_marginal(double p);

struct ExtensionResult {
  bool feasible = false;
  double infeasibility = 0.0;
  std::optional<std::vector<double>> table;  ///< p(a,b,c|x,y,z) when feasible
};

/// Searches for a no-signaling three-party box p(a,b,c|x,y,z) whose AB and AC
/// marginals both equal `shared` (2,2,2,2). Infeasible for the PR box.
ExtensionResult symmetric_extension(const CorrelationBox& shared);

nlohmann::json to_json(const MembershipResult& result);
nlohmann::json to_json(const LocalDecomposition& decomposition);

}  // namespace corrlab
