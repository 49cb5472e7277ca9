#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <vector>

#include "corrlab/box.hpp"
#include "corrlab/classical.hpp"
#include "corrlab/hilbert.hpp"
#include "json.hpp"

namespace corrlab {

/// Which second trine the steering example uses. Both choices keep the
/// pairwise overlaps at -1/2 and average to I/2.
enum class TrinePair {
  /// trine2 = U trine1 with U = (X + Y)/sqrt(2): b1 orthogonal to b2 and the
  /// two ensembles differ at every order n >= 2.
  ComplexHalfTurn,
  /// trine2 = trine1 rotated by pi/2 in the real plane: b1 orthogonal to b2,
  /// but the two-copy ensembles still coincide.
  RealQuarterTurn,
  /// trine2 = trine1 rotated by pi/3: the same three rays up to sign.
  RealSixthTurn,
};

/// Pure-state ensemble on one party.
struct Ensemble {
  std::vector<double> weights;
  std::vector<StateVector> states;  ///< normalized

  ComplexMatrix density() const;
  void validate() const;
};

struct SteeringExample {
  StateVector state;                 ///< on C^3 (x) C^2, index a*2 + b
  Eigen::Index dim_a = 3;
  Eigen::Index dim_b = 2;
  std::vector<StateVector> trine1;   ///< b1, c, d
  std::vector<StateVector> trine2;   ///< b2, e, f
  std::vector<StateVector> basis1;   ///< computational A basis paired with trine1
  std::vector<StateVector> basis2;   ///< A basis paired with trine2
  std::array<StateVector, 2> plane;  ///< Schmidt vectors g, h spanning the support of rho_A
  TrinePair pair = TrinePair::ComplexHalfTurn;

  /// sum_i sqrt(1/3) basis[i] (x) trine[i] for the chosen expansion (1 or 2).
  StateVector expansion(int which) const;
};

std::vector<StateVector> make_trine(TrinePair pair, int which);

/// State (1/sqrt 3) sum_i a_i (x) t_i with a_i computational and t_i the
/// first trine; the second A basis comes from hjw_basis.
SteeringExample build_steering_example(TrinePair pair = TrinePair::ComplexHalfTurn);

/// Orthonormal A-vectors a'_i with state = sum_i sqrt(p_i) a'_i (x) t_i.
/// Throws std::invalid_argument when the ensemble does not average to the
/// reduced state on B, or has more members than dim_a.
std::vector<StateVector> hjw_basis(const StateVector& state, Eigen::Index dim_a, Eigen::Index dim_b,
                                   const Ensemble& ensemble);

struct SteeringBranch {
  double probability = 0.0;
  std::optional<DensityOperator> conditional_b;  ///< empty for null outcomes
};

struct SteeringBasisReport {
  std::vector<SteeringBranch> branches;
  double total_probability = 0.0;
  bool complete = false;           ///< total probability is 1 within 1e-10
  ComplexMatrix averaged_b;        ///< sum_i p_i rho_B|i
  double deviation_from_rho_b = 0.0;
  /// max |Tr_A(sum_i P_i rho P_i) - rho_B| for complete sets, else empty.
  std::optional<double> operator_level_deviation;
};

struct SteeringReport {
  std::vector<SteeringBasisReport> bases;
  ComplexMatrix rho_b;
  double max_trace_distance = 0.0;  ///< between averaged B states, pairwise
};

/// Measures A in each of the given orthonormal (or truncated) vector sets.
SteeringReport steering_no_signaling_check(const StateVector& state, Eigen::Index dim_a, Eigen::Index dim_b,
                                           const std::vector<std::vector<StateVector>>& a_bases);
SteeringReport steering_no_signaling_check(const SteeringExample& example);

struct CloningAdvantage {
  int copies = 0;
  double trace_distance = 0.0;
  double success = 0.0;  ///< Helstrom: 1/2 + D/2
};

/// Distinguishability of n copies of Bob's state under the two trines.
/// n must lie in [1, 10].
CloningAdvantage cloning_signaling_advantage(int copies, TrinePair pair = TrinePair::ComplexHalfTurn);

struct CloneSignalReport {
  std::size_t rounds = 0;
  std::uint64_t seed = 0;
  int bob_input = 0;
  int clone_input = 0;
  double accuracy = 0.0;              ///< inferred x = b XOR b' against the true x
  bool identity_held = false;         ///< b XOR b' = x (y XOR y') on every round
  double no_clone_accuracy = 0.0;     ///< empirical, Bob guesses x = b
  double no_clone_optimal = 0.0;      ///< exact best guess of x from a single b
};

/// Alice's half of `box` is shared by two copies of Bob's half queried with
/// inputs y and y'. Each round draws x uniformly, samples (a, b) from the
/// box at (x, y) and b' from p(b' | a, x, y').
CloneSignalReport pr_clone_signal(const CorrelationBox& box, std::size_t rounds, std::uint64_t seed,
                                  int bob_input = 0, int clone_input = 1);

struct TomographyReport {
  std::optional<std::size_t> shots;  ///< per observable; empty for exact means
  std::uint64_t seed = 0;
  std::array<double, 3> bloch_true{};
  std::array<double, 3> bloch_raw{};
  std::array<double, 3> bloch_estimate{};
  bool projected = false;  ///< raw estimate lay outside the Bloch ball
  DensityOperator estimate = DensityOperator::maximally_mixed(2);
  ClassicalDensity product_measure = ClassicalDensity::uniform(8);
  double fidelity = 0.0;
  double fidelity_error = 0.0;
  double bloch_error = 0.0;  ///< Euclidean distance between estimated and true Bloch vectors
  std::array<double, 3> disturbance{};  ///< trace distance of each measured copy from the input
};

/// Pauli tomography of a qubit. Outcomes of X, Y, Z are sampled from Born
/// statistics (or replaced by exact means when `shots` is empty), combined
/// into a product measure over the eight sign patterns, and read back as a
/// Bloch vector, scaled radially into the unit ball when needed.
TomographyReport tomography_information_loss(const DensityOperator& rho, std::optional<std::size_t> shots,
                                             std::uint64_t seed);

/// Bloch vector (<X>, <Y>, <Z>) of a qubit state.
std::array<double, 3> bloch_vector(const DensityOperator& rho);
DensityOperator from_bloch(const std::array<double, 3>& r);

nlohmann::json to_json(const SteeringExample& example);
nlohmann::json to_json(const SteeringReport& report);
nlohmann::json to_json(const CloningAdvantage& advantage);
nlohmann::json to_json(const CloneSignalReport& report);
nlohmann::json to_json(const TomographyReport& report);
const char* to_string(TrinePair pair);

}  // namespace corrlab
