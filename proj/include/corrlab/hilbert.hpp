#pragma once

#include <array>
#include <complex>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "corrlab/box.hpp"
#include "corrlab/errors.hpp"
#include "corrlab/rng.hpp"
#include "json.hpp"

namespace corrlab {

using Complex = std::complex<double>;
using ComplexMatrix = Eigen::MatrixXcd;
using StateVector = Eigen::VectorXcd;

inline constexpr double kOperatorTol = 1e-10;
inline constexpr double kNullEventTol = 1e-12;

/// Hermitian, positive semidefinite, unit-trace operator. Small
/// anti-Hermitian parts and eigenvalues in [-1e-10, 0) are cleaned up on
/// construction; anything larger is rejected with std::invalid_argument.
class DensityOperator {
 public:
  explicit DensityOperator(ComplexMatrix matrix);

  /// |psi><psi|; psi must have unit norm within 1e-10.
  static DensityOperator pure(const StateVector& psi);
  static DensityOperator maximally_mixed(Eigen::Index dim);

  const ComplexMatrix& matrix() const { return matrix_; }
  Eigen::Index dim() const { return matrix_.rows(); }

 private:
  ComplexMatrix matrix_;
};

class Projector {
 public:
  explicit Projector(ComplexMatrix matrix);

  /// Rank-one projector onto the ray of `v` (normalized internally).
  static Projector onto(const StateVector& v);
  /// Projector onto the span of the given vectors.
  static Projector onto_span(std::span<const StateVector> vectors);
  static Projector identity(Eigen::Index dim);

  const ComplexMatrix& matrix() const { return matrix_; }
  Eigen::Index dim() const { return matrix_.rows(); }
  int rank() const;

 private:
  ComplexMatrix matrix_;
};

/// Complete set of orthogonal projectors with real outcome labels. Outcome i
/// of a strategy box corresponds to projector i.
class ProjectiveMeasurement {
 public:
  ProjectiveMeasurement(std::vector<Projector> projectors, std::vector<double> labels);
  explicit ProjectiveMeasurement(std::vector<Projector> projectors);

  /// One rank-one projector per vector of an orthonormal basis.
  static ProjectiveMeasurement from_basis(std::span<const StateVector> basis);
  static ProjectiveMeasurement computational(Eigen::Index dim);

  std::size_t size() const { return projectors_.size(); }
  const Projector& projector(std::size_t i) const { return projectors_.at(i); }
  const std::vector<Projector>& projectors() const { return projectors_; }
  double label(std::size_t i) const { return labels_.at(i); }
  Eigen::Index dim() const { return projectors_.front().dim(); }

 private:
  std::vector<Projector> projectors_;
  std::vector<double> labels_;
};

/// Shared state on d_A (x) d_B plus one measurement per input for each party.
class QuantumStrategy {
 public:
  QuantumStrategy(DensityOperator state, Eigen::Index dim_a, Eigen::Index dim_b,
                  std::vector<ProjectiveMeasurement> alice, std::vector<ProjectiveMeasurement> bob);

  const DensityOperator& state() const { return state_; }
  Eigen::Index dim_a() const { return dim_a_; }
  Eigen::Index dim_b() const { return dim_b_; }
  const std::vector<ProjectiveMeasurement>& alice() const { return alice_; }
  const std::vector<ProjectiveMeasurement>& bob() const { return bob_; }
  Scenario scenario() const;

 private:
  DensityOperator state_;
  Eigen::Index dim_a_;
  Eigen::Index dim_b_;
  std::vector<ProjectiveMeasurement> alice_;
  std::vector<ProjectiveMeasurement> bob_;
};

/// Tr(rho P), clamped to [0, 1].
double born_probability(const DensityOperator& rho, const Projector& p);

/// P rho P / Tr(P rho P). Throws NullEventError when Tr(rho P) <= 1e-12.
DensityOperator luders_conditionalize(const DensityOperator& rho, const Projector& p);

/// Tr(luders(rho, pa) pb).
double conditional_probability(const DensityOperator& rho, const Projector& pa, const Projector& pb);

/// sum_i P_i rho P_i: the state after a measurement whose outcome is discarded.
DensityOperator measurement_average(const DensityOperator& rho, const ProjectiveMeasurement& m);

ComplexMatrix kron(const ComplexMatrix& lhs, const ComplexMatrix& rhs);
StateVector kron(const StateVector& lhs, const StateVector& rhs);
DensityOperator tensor(const DensityOperator& lhs, const DensityOperator& rhs);
Projector tensor(const Projector& lhs, const Projector& rhs);

enum class Subsystem { A, B };

/// Reduces an operator on d_A (x) d_B (index a*d_B + b) to the factor `keep`.
ComplexMatrix partial_trace(const ComplexMatrix& m, Subsystem keep, Eigen::Index dim_a, Eigen::Index dim_b);
DensityOperator partial_trace(const DensityOperator& rho, Subsystem keep, Eigen::Index dim_a,
                              Eigen::Index dim_b);

struct SchmidtDecomposition {
  Eigen::VectorXd coefficients;     ///< descending, strictly positive
  std::vector<StateVector> a_basis;
  std::vector<StateVector> b_basis;

  std::size_t rank() const { return static_cast<std::size_t>(coefficients.size()); }
  StateVector reconstruct() const;
};

/// Biorthogonal decomposition of a unit vector on d_A (x) d_B via SVD.
/// Coefficients below 1e-12 are dropped; each basis vector has its
/// largest-magnitude component made real positive on the A side, with the
/// compensating phase carried by the B vector.
SchmidtDecomposition schmidt_decompose(const StateVector& psi, Eigen::Index dim_a, Eigen::Index dim_b);

/// Multiplies `v` by a phase so its largest-magnitude entry is real positive.
StateVector fix_phase(StateVector v);

/// Trace distance 1/2 ||A - B||_1 of two Hermitian operators.
double trace_distance(const ComplexMatrix& lhs, const ComplexMatrix& rhs);

/// Uhlmann fidelity (Tr sqrt(sqrt(rho) sigma sqrt(rho)))^2.
double fidelity(const DensityOperator& rho, const DensityOperator& sigma);

/// Box of a quantum strategy: p(a,b|x,y) = Tr(rho (P^x_a (x) Q^y_b)).
CorrelationBox quantum_box(const QuantumStrategy& strategy);

/// Two-outcome qubit measurement in the X-Z plane: outcome 0 projects onto
/// cos(theta/2)|0> + sin(theta/2)|1>, outcome 1 onto the orthogonal ray.
/// Labels are +1 and -1.
ProjectiveMeasurement xz_measurement(double theta);

/// (|00> + |11>)/sqrt(2).
StateVector bell_phi_plus();
/// (|01> - |10>)/sqrt(2).
StateVector singlet();

/// Strategy with X-Z plane measurements at the given angles on `state`
/// (a two-qubit pure state).
QuantumStrategy xz_strategy(const StateVector& state, std::array<double, 4> angles);

struct ChshOptimum {
  QuantumStrategy strategy;
  double chsh = 0.0;
  std::array<double, 4> angles{};  ///< alice x=0, alice x=1, bob y=0, bob y=1
  int evaluations = 0;
};

/// Searches X-Z plane measurements on |Phi+> for the extreme CHSH value:
/// a coarse grid of `grid_steps` angles per setting, then coordinate
/// descent with shrinking steps.
ChshOptimum optimize_chsh(Objective objective, int grid_steps = 12);

StateVector random_pure_state(Eigen::Index dim, CounterRng& rng);
/// Random mixed state from a Ginibre matrix G: G G^dagger / Tr.
DensityOperator random_density(Eigen::Index dim, CounterRng& rng);
/// Haar-random unitary via QR of a Ginibre matrix with phase correction.
ComplexMatrix random_unitary(Eigen::Index dim, CounterRng& rng);

nlohmann::json to_json(const ComplexMatrix& m);
nlohmann::json to_json(const StateVector& v);
ComplexMatrix matrix_from_json(const nlohmann::json& j);
nlohmann::json to_json(const DensityOperator& rho);
DensityOperator density_from_json(const nlohmann::json& j);
nlohmann::json to_json(const ProjectiveMeasurement& m);
ProjectiveMeasurement measurement_from_json(const nlohmann::json& j);

}  // namespace corrlab
