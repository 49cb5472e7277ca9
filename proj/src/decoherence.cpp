#include "corrlab/decoherence.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <stdexcept>
#include <string>

namespace corrlab {

void DecoherenceModel::validate() const {
  if (branches() < 2) throw std::invalid_argument("DecoherenceModel: need at least two branches");
  if (modes() < 1) throw std::invalid_argument("DecoherenceModel: need at least one environment mode");
  if (couplings.rows() != branches() || couplings.cols() != modes()) {
    throw std::invalid_argument("DecoherenceModel: couplings must be branches x modes");
  }
  if (!couplings.allFinite()) throw std::invalid_argument("DecoherenceModel: non-finite coupling");
  auto norm2 = [](const std::vector<Complex>& v) {
    double s = 0.0;
    for (const auto& c : v) s += std::norm(c);
    return s;
  };
  if (std::abs(norm2(amplitudes) - 1.0) > 1e-12) throw std::invalid_argument("DecoherenceModel: amplitudes not normalized");
  if (std::abs(norm2(env_weights) - 1.0) > 1e-12) {
    throw std::invalid_argument("DecoherenceModel: environment weights not normalized");
  }
}

StateVector DecoherenceModel::environment_state(int branch, double t) const {
  StateVector e(modes());
  for (int v = 0; v < modes(); ++v) {
    e(v) = env_weights[static_cast<std::size_t>(v)] * std::exp(Complex(0.0, -couplings(branch, v) * t));
  }
  return e;
}

DecoherenceModel make_reference_model(int branches, int modes, std::uint64_t seed, double g_min, double g_max) {
  if (branches < 2 || modes < 1) throw std::invalid_argument("make_reference_model: need K >= 2 and V >= 1");
  if (!(g_max >= g_min)) throw std::invalid_argument("make_reference_model: empty coupling interval");
  DecoherenceModel m;
  CounterRng amp_rng(seed, 1);
  const StateVector c = random_pure_state(branches, amp_rng);
  for (int k = 0; k < branches; ++k) m.amplitudes.push_back(c(k));
  m.env_weights.assign(static_cast<std::size_t>(modes), Complex(1.0 / std::sqrt(static_cast<double>(modes)), 0.0));
  CounterRng g_rng(seed, 2);
  m.couplings.resize(branches, modes);
  for (int k = 0; k < branches; ++k)
    for (int v = 0; v < modes; ++v) m.couplings(k, v) = g_rng.uniform(g_min, g_max);
  m.validate();
  return m;
}

ComplexMatrix decoherence_factor(const DecoherenceModel& model, double t) {
  model.validate();
  const int K = model.branches();
  ComplexMatrix z(K, K);
  for (int k = 0; k < K; ++k)
    for (int kp = 0; kp < K; ++kp) {
      Complex s = 0.0;
      for (int v = 0; v < model.modes(); ++v) {
        s += std::norm(model.env_weights[static_cast<std::size_t>(v)]) *
             std::exp(Complex(0.0, (model.couplings(kp, v) - model.couplings(k, v)) * t));
      }
      z(k, kp) = s;
    }
  return z;
}

namespace {

std::vector<StateVector> resolve_micro(const DecoherenceModel& model,
                                       const std::optional<std::vector<StateVector>>& micro_states) {
  const int K = model.branches();
  if (!micro_states) {
    std::vector<StateVector> basis;
    for (int k = 0; k < K; ++k) basis.push_back(StateVector::Unit(K, k));
    return basis;
  }
  if (static_cast<int>(micro_states->size()) != K) {
    throw std::invalid_argument("decoherence: need one micro state per branch");
  }
  const Eigen::Index d = micro_states->front().size();
  for (const auto& s : *micro_states) {
    if (s.size() != d || d == 0) throw std::invalid_argument("decoherence: micro states differ in dimension");
    if (std::abs(s.norm() - 1.0) > kOperatorTol) throw std::invalid_argument("decoherence: micro states must be normalized");
  }
  return *micro_states;
}

// psi(t) reshaped as (micro*K) x V.
ComplexMatrix branch_matrix(const DecoherenceModel& model, double t, const std::vector<StateVector>& micro) {
  const int K = model.branches();
  const Eigen::Index d = micro.front().size();
  const Eigen::Index total = d * K * model.modes();
  if (total > kMaxDecoherenceDim) {
    throw std::length_error("decoherence: state dimension " + std::to_string(total) + " exceeds the cap of " +
                            std::to_string(kMaxDecoherenceDim));
  }
  ComplexMatrix m = ComplexMatrix::Zero(d * K, model.modes());
  for (int k = 0; k < K; ++k) {
    const StateVector env = model.environment_state(k, t);
    for (Eigen::Index s = 0; s < d; ++s) {
      m.row(s * K + k) += model.amplitudes[static_cast<std::size_t>(k)] * micro[static_cast<std::size_t>(k)](s) *
                          env.transpose();
    }
  }
  return m;
}

}  // namespace

StateVector global_state(const DecoherenceModel& model, double t,
                         const std::optional<std::vector<StateVector>>& micro_states) {
  model.validate();
  const ComplexMatrix m = branch_matrix(model, t, resolve_micro(model, micro_states));
  StateVector psi(m.size());
  for (Eigen::Index r = 0; r < m.rows(); ++r) psi.segment(r * m.cols(), m.cols()) = m.row(r).transpose();
  return psi;
}

DecoherenceSnapshot evolve_snapshot(const DecoherenceModel& model, double t,
                                    const std::optional<std::vector<StateVector>>& micro_states) {
  model.validate();
  const auto micro = resolve_micro(model, micro_states);
  const int K = model.branches();
  const Eigen::Index d = micro.front().size();
  const ComplexMatrix m = branch_matrix(model, t, micro);

  DecoherenceSnapshot snap;
  snap.t = t;
  snap.zeta = decoherence_factor(model, t);
  snap.micro_dim = d;
  snap.norm = m.squaredNorm();
  // Tracing out the environment: reduced = m m^dagger.
  snap.reduced = DensityOperator(m * m.adjoint());

  const ComplexMatrix& r = snap.reduced.matrix();
  snap.pointer_probabilities.assign(static_cast<std::size_t>(K), 0.0);
  for (Eigen::Index i = 0; i < r.rows(); ++i) {
    snap.pointer_probabilities[static_cast<std::size_t>(i % K)] += r(i, i).real();
    for (Eigen::Index j = 0; j < r.cols(); ++j) {
      if (i % K != j % K) snap.offdiag_norm = std::max(snap.offdiag_norm, std::abs(r(i, j)));
    }
  }
  return snap;
}

BooleanCheck emergent_boolean_check(const DecoherenceSnapshot& snapshot, double eps) {
  BooleanCheck out;
  out.emergent = snapshot.offdiag_norm <= eps;
  out.probabilities = snapshot.pointer_probabilities;

  const auto K = static_cast<Eigen::Index>(snapshot.pointer_probabilities.size());
  const DensityOperator& rho = snapshot.reduced;
  const Eigen::Index n = rho.dim();

  std::vector<std::optional<DensityOperator>> conditioned;
  for (Eigen::Index k = 0; k < K; ++k) {
    ComplexMatrix p = ComplexMatrix::Zero(n, n);
    for (Eigen::Index i = k; i < n; i += K) p(i, i) = 1.0;
    const double w = snapshot.pointer_probabilities[static_cast<std::size_t>(k)];
    if (w > kNullEventTol) conditioned.emplace_back(luders_conditionalize(rho, Projector(p)));
    else conditioned.emplace_back();
  }
  // Events onto (|i> + |j>)/sqrt2 with i, j in different pointer sectors.
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = i + 1; j < n; ++j) {
      if (i % K == j % K) continue;
      StateVector v = StateVector::Zero(n);
      v(i) = v(j) = 1.0 / std::sqrt(2.0);
      const Projector q = Projector::onto(v);
      double total = 0.0;
      for (Eigen::Index k = 0; k < K; ++k) {
        if (conditioned[static_cast<std::size_t>(k)]) {
          total += snapshot.pointer_probabilities[static_cast<std::size_t>(k)] *
                   born_probability(*conditioned[static_cast<std::size_t>(k)], q);
        }
      }
      out.additivity_defect = std::max(out.additivity_defect, std::abs(born_probability(rho, q) - total));
    }
  return out;
}

MacroBasisReport nonstandard_macro_basis_check(const DecoherenceModel& model, double t, const ComplexMatrix& rotation,
                                               const std::optional<std::vector<StateVector>>& micro_states) {
  model.validate();
  const int K = model.branches();
  if (rotation.rows() != K || rotation.cols() != K) {
    throw std::invalid_argument("nonstandard_macro_basis_check: rotation must be K x K");
  }
  if ((rotation.adjoint() * rotation - ComplexMatrix::Identity(K, K)).cwiseAbs().maxCoeff() > kOperatorTol) {
    throw std::invalid_argument("nonstandard_macro_basis_check: rotation must be unitary");
  }
  const auto micro = resolve_micro(model, micro_states);
  const Eigen::Index d = micro.front().size();
  const Eigen::Index V = model.modes();

  std::vector<StateVector> factors;  // c_k |s_k>|eps_k>
  for (int k = 0; k < K; ++k) {
    factors.push_back(model.amplitudes[static_cast<std::size_t>(k)] *
                      kron(micro[static_cast<std::size_t>(k)], model.environment_state(k, t)));
  }

  auto rank_of = [&](const StateVector& v) {
    const double n = v.norm();
    if (n < 1e-12) return 0;
    const auto s = schmidt_decompose(v / n, d, V);
    int rank = 0;
    for (Eigen::Index i = 0; i < s.coefficients.size(); ++i) rank += s.coefficients(i) > 1e-9 ? 1 : 0;
    return rank;
  };

  MacroBasisReport rep;
  for (int k = 0; k < K; ++k) rep.pointer_ranks.push_back(rank_of(factors[static_cast<std::size_t>(k)]));
  // psi = sum_l |M'_l> (x) sum_k conj(rotation(k, l)) factor_k.
  for (int l = 0; l < K; ++l) {
    StateVector chi = StateVector::Zero(d * V);
    for (int k = 0; k < K; ++k) chi += std::conj(rotation(k, l)) * factors[static_cast<std::size_t>(k)];
    rep.rotated_ranks.push_back(rank_of(chi));
  }
  auto all_product = [](const std::vector<int>& ranks) {
    for (int r : ranks)
      if (r > 1) return false;
    return true;
  };
  rep.pointer_product = all_product(rep.pointer_ranks);
  rep.rotated_product = all_product(rep.rotated_ranks);
  return rep;
}

std::vector<SeriesPoint> decoherence_series(const DecoherenceModel& model, double t_max, int steps,
                                            const std::optional<std::vector<StateVector>>& micro_states) {
  if (steps < 1) throw std::invalid_argument("decoherence_series: steps must be positive");
  if (!(t_max >= 0.0) || !std::isfinite(t_max)) throw std::invalid_argument("decoherence_series: t_max must be >= 0");
  std::vector<SeriesPoint> out;
  out.reserve(static_cast<std::size_t>(steps) + 1);
  const int K = model.branches();
  for (int i = 0; i <= steps; ++i) {
    const double t = t_max * i / steps;
    const auto snap = evolve_snapshot(model, t, micro_states);
    SeriesPoint p;
    p.t = t;
    for (int k = 0; k < K; ++k)
      for (int kp = k + 1; kp < K; ++kp) p.zeta_abs.push_back(std::abs(snap.zeta(k, kp)));
    p.offdiag_norm = snap.offdiag_norm;
    out.push_back(std::move(p));
  }
  return out;
}

std::optional<double> first_time_below(const std::vector<SeriesPoint>& series, double fraction) {
  if (series.empty()) return std::nullopt;
  const double threshold = fraction * series.front().offdiag_norm;
  for (const auto& p : series) {
    if (p.offdiag_norm <= threshold) return p.t;
  }
  return std::nullopt;
}

void write_csv(std::ostream& out, const std::vector<SeriesPoint>& series, int branches) {
  out << "t";
  for (int k = 0; k < branches; ++k)
    for (int kp = k + 1; kp < branches; ++kp) out << ",zeta_" << k << '_' << kp;
  out << ",offdiag_norm\n";
  const auto old = out.precision(17);
  for (const auto& p : series) {
    out << p.t;
    for (double z : p.zeta_abs) out << ',' << z;
    out << ',' << p.offdiag_norm << '\n';
  }
  out.precision(old);
}

nlohmann::json to_json(const DecoherenceModel& model) {
  auto complex_list = [](const std::vector<Complex>& v) {
    nlohmann::json out = nlohmann::json::array();
    for (const auto& c : v) out.push_back({c.real(), c.imag()});
    return out;
  };
  nlohmann::json g = nlohmann::json::array();
  for (Eigen::Index k = 0; k < model.couplings.rows(); ++k) {
    std::vector<double> row;
    for (Eigen::Index v = 0; v < model.couplings.cols(); ++v) row.push_back(model.couplings(k, v));
    g.push_back(row);
  }
  return {{"amplitudes", complex_list(model.amplitudes)},
          {"env_weights", complex_list(model.env_weights)},
          {"couplings", std::move(g)}};
}

nlohmann::json to_json(const DecoherenceSnapshot& s) {
  return {{"t", s.t},
          {"zeta", to_json(s.zeta)},
          {"reduced", to_json(s.reduced)},
          {"micro_dim", s.micro_dim},
          {"norm", s.norm},
          {"pointer_probabilities", s.pointer_probabilities},
          {"offdiag_norm", s.offdiag_norm}};
}

}  // namespace corrlab
