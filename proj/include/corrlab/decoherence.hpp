#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <vector>

#include "corrlab/hilbert.hpp"
#include "json.hpp"

namespace corrlab {

/// Micro system (x) pointer (K branches) (x) environment (V modes). Branch k
/// of the environment evolves as sum_v gamma_v exp(-i g_kv t) |e_v>.
struct DecoherenceModel {
  std::vector<Complex> amplitudes;   ///< c_k, unit norm
  std::vector<Complex> env_weights;  ///< gamma_v, unit norm
  Eigen::MatrixXd couplings;         ///< g_kv, K x V

  int branches() const { return static_cast<int>(amplitudes.size()); }
  int modes() const { return static_cast<int>(env_weights.size()); }
  void validate() const;

  /// |eps_k(t)> in the mode basis.
  StateVector environment_state(int branch, double t) const;
};

/// Random amplitudes c_k, uniform gamma_v = 1/sqrt(V), and couplings drawn
/// uniformly from [g_min, g_max], all from `seed`.
DecoherenceModel make_reference_model(int branches, int modes, std::uint64_t seed, double g_min = 0.0,
                                      double g_max = 1.0);

/// zeta_kk'(t) = <eps_k'(t)|eps_k(t)> = sum_v |gamma_v|^2 exp(i (g_k'v - g_kv) t).
ComplexMatrix decoherence_factor(const DecoherenceModel& model, double t);

struct DecoherenceSnapshot {
  double t = 0.0;
  ComplexMatrix zeta;
  DensityOperator reduced = DensityOperator::maximally_mixed(1);  ///< micro (x) pointer
  Eigen::Index micro_dim = 0;
  double norm = 0.0;                        ///< <psi(t)|psi(t)>
  std::vector<double> pointer_probabilities;
  double offdiag_norm = 0.0;  ///< largest |entry| of `reduced` between different pointer states
};

inline constexpr Eigen::Index kMaxDecoherenceDim = Eigen::Index{1} << 16;

/// Builds |psi(t)> = sum_k c_k |s_k>|M_k>|eps_k(t)> explicitly and traces out
/// the environment. Without `micro_states` the s_k are the computational
/// basis of C^K. Throws std::length_error past kMaxDecoherenceDim.
DecoherenceSnapshot evolve_snapshot(const DecoherenceModel& model, double t,
                                    const std::optional<std::vector<StateVector>>& micro_states = std::nullopt);

/// Full pure state on micro (x) pointer (x) environment, index (s*K + k)*V + v.
StateVector global_state(const DecoherenceModel& model, double t,
                         const std::optional<std::vector<StateVector>>& micro_states = std::nullopt);

struct BooleanCheck {
  bool emergent = false;
  std::vector<double> probabilities;  ///< pointer weights
  /// Largest violation of the law of total probability (conditioning on the
  /// pointer) over events that straddle two pointer states.
  double additivity_defect = 0.0;
};

BooleanCheck emergent_boolean_check(const DecoherenceSnapshot& snapshot, double eps);

struct MacroBasisReport {
  std::vector<int> pointer_ranks;  ///< Schmidt rank of each micro (x) environment branch factor
  std::vector<int> rotated_ranks;  ///< same, for the rotated macro basis (0 for empty branches)
  bool pointer_product = false;
  bool rotated_product = false;
};

/// Re-expands |psi(t)> in the macro basis M'_l = sum_k rotation(k, l) M_k and
/// reports the Schmidt rank of every branch factor.
MacroBasisReport nonstandard_macro_basis_check(const DecoherenceModel& model, double t, const ComplexMatrix& rotation,
                                               const std::optional<std::vector<StateVector>>& micro_states = std::nullopt);

struct SeriesPoint {
  double t = 0.0;
  std::vector<double> zeta_abs;  ///< |zeta_kk'| for k < k', row-major
  double offdiag_norm = 0.0;
};

std::vector<SeriesPoint> decoherence_series(const DecoherenceModel& model, double t_max, int steps,
                                            const std::optional<std::vector<StateVector>>& micro_states = std::nullopt);

/// First sample with offdiag_norm <= fraction * offdiag_norm(0).
std::optional<double> first_time_below(const std::vector<SeriesPoint>& series, double fraction);

void write_csv(std::ostream& out, const std::vector<SeriesPoint>& series, int branches);

nlohmann::json to_json(const DecoherenceModel& model);
nlohmann::json to_json(const DecoherenceSnapshot& snapshot);

}  // namespace corrlab
