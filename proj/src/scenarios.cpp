#include "corrlab/scenarios.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace corrlab {

namespace {

using std::numbers::pi;

ComplexMatrix pauli(int axis) {
  ComplexMatrix m(2, 2);
  switch (axis) {
    case 0: m << 0, 1, 1, 0; break;
    case 1: m << 0, Complex(0, -1), Complex(0, 1), 0; break;
    default: m << 1, 0, 0, -1; break;
  }
  return m;
}

// Appends columns orthonormal to `q` (orthonormal columns) until it is square.
ComplexMatrix complete_unitary(const ComplexMatrix& q) {
  const Eigen::Index n = q.rows();
  const Eigen::Index r = q.cols();
  ComplexMatrix out(n, n);
  out.leftCols(r) = q;
  if (r < n) {
    Eigen::HouseholderQR<ComplexMatrix> qr(q);
    const ComplexMatrix full = qr.householderQ();
    out.rightCols(n - r) = full.rightCols(n - r);
  }
  return out;
}

}  // namespace

ComplexMatrix Ensemble::density() const {
  validate();
  const Eigen::Index d = states.front().size();
  ComplexMatrix m = ComplexMatrix::Zero(d, d);
  for (std::size_t i = 0; i < states.size(); ++i) m += weights[i] * states[i] * states[i].adjoint();
  return m;
}

void Ensemble::validate() const {
  if (states.empty() || states.size() != weights.size()) {
    throw std::invalid_argument("Ensemble: need one weight per state and at least one state");
  }
  double total = 0.0;
  for (std::size_t i = 0; i < states.size(); ++i) {
    if (!(weights[i] >= 0.0)) throw std::invalid_argument("Ensemble: weights must be nonnegative");
    if (states[i].size() != states.front().size()) throw std::invalid_argument("Ensemble: dimension mismatch");
    if (std::abs(states[i].norm() - 1.0) > kOperatorTol) throw std::invalid_argument("Ensemble: states must be normalized");
    total += weights[i];
  }
  if (std::abs(total - 1.0) > 1e-12) throw std::invalid_argument("Ensemble: weights must sum to 1");
}

std::vector<StateVector> make_trine(TrinePair pair, int which) {
  if (which != 1 && which != 2) throw std::invalid_argument("make_trine: which must be 1 or 2");
  double offset = 0.0;
  if (which == 2 && pair == TrinePair::RealQuarterTurn) offset = pi / 2;
  if (which == 2 && pair == TrinePair::RealSixthTurn) offset = pi / 3;
  std::vector<StateVector> out;
  for (int i = 0; i < 3; ++i) {
    StateVector v(2);
    const double angle = 2 * pi * i / 3 + offset;
    v << std::cos(angle), std::sin(angle);
    out.push_back(v);
  }
  if (which == 2 && pair == TrinePair::ComplexHalfTurn) {
    const ComplexMatrix u = (pauli(0) + pauli(1)) / std::numbers::sqrt2;
    for (auto& v : out) v = u * v;
  }
  return out;
}

StateVector SteeringExample::expansion(int which) const {
  const auto& basis = which == 1 ? basis1 : basis2;
  const auto& trine = which == 1 ? trine1 : trine2;
  StateVector out = StateVector::Zero(dim_a * dim_b);
  for (std::size_t i = 0; i < basis.size(); ++i) out += kron(basis[i], trine[i]) / std::sqrt(3.0);
  return out;
}

SteeringExample build_steering_example(TrinePair pair) {
  SteeringExample ex;
  ex.pair = pair;
  ex.trine1 = make_trine(pair, 1);
  ex.trine2 = make_trine(pair, 2);
  for (Eigen::Index i = 0; i < 3; ++i) ex.basis1.push_back(StateVector::Unit(3, i));
  ex.state = StateVector::Zero(6);
  for (std::size_t i = 0; i < 3; ++i) ex.state += kron(ex.basis1[i], ex.trine1[i]) / std::sqrt(3.0);

  const auto schmidt = schmidt_decompose(ex.state, ex.dim_a, ex.dim_b);
  if (schmidt.rank() != 2) throw std::logic_error("steering example: expected Schmidt rank 2");
  ex.plane = {schmidt.a_basis[0], schmidt.a_basis[1]};

  const Ensemble second{{1.0 / 3, 1.0 / 3, 1.0 / 3}, ex.trine2};
  ex.basis2 = hjw_basis(ex.state, ex.dim_a, ex.dim_b, second);
  return ex;
}

std::vector<StateVector> hjw_basis(const StateVector& state, Eigen::Index dim_a, Eigen::Index dim_b,
                                   const Ensemble& ensemble) {
  ensemble.validate();
  if (ensemble.states.front().size() != dim_b) throw std::invalid_argument("hjw_basis: ensemble lives on the wrong space");
  const auto m = static_cast<Eigen::Index>(ensemble.states.size());
  if (m > dim_a) {
    throw std::invalid_argument("hjw_basis: ensemble has " + std::to_string(m) + " members but dim_a is " +
                                std::to_string(dim_a));
  }
  const ComplexMatrix rho_b = partial_trace(ComplexMatrix(state * state.adjoint()), Subsystem::B, dim_a, dim_b);
  if ((ensemble.density() - rho_b).cwiseAbs().maxCoeff() > kOperatorTol) {
    throw std::invalid_argument("hjw_basis: ensemble does not realize the reduced state on B");
  }

  const auto schmidt = schmidt_decompose(state, dim_a, dim_b);
  const auto r = static_cast<Eigen::Index>(schmidt.rank());

  // coeff(i, j) = sqrt(p_i) <e_j|t_i> / lambda_j has orthonormal columns.
  ComplexMatrix coeff(m, r);
  for (Eigen::Index i = 0; i < m; ++i)
    for (Eigen::Index j = 0; j < r; ++j)
      coeff(i, j) = std::sqrt(ensemble.weights[static_cast<std::size_t>(i)]) *
                    schmidt.b_basis[static_cast<std::size_t>(j)].dot(ensemble.states[static_cast<std::size_t>(i)]) /
                    schmidt.coefficients(j);
  const ComplexMatrix w = complete_unitary(coeff);

  ComplexMatrix a_vectors(dim_a, r);
  for (Eigen::Index j = 0; j < r; ++j) a_vectors.col(j) = schmidt.a_basis[static_cast<std::size_t>(j)];
  const ComplexMatrix a_basis = complete_unitary(a_vectors);

  std::vector<StateVector> out;
  for (Eigen::Index i = 0; i < m; ++i) {
    StateVector v = StateVector::Zero(dim_a);
    for (Eigen::Index j = 0; j < m; ++j) v += std::conj(w(i, j)) * a_basis.col(j);
    out.push_back(v);
  }
  return out;
}

SteeringReport steering_no_signaling_check(const StateVector& state, Eigen::Index dim_a, Eigen::Index dim_b,
                                           const std::vector<std::vector<StateVector>>& a_bases) {
  const DensityOperator rho = DensityOperator::pure(state);
  SteeringReport report;
  report.rho_b = partial_trace(rho.matrix(), Subsystem::B, dim_a, dim_b);
  const Projector id_b = Projector::identity(dim_b);

  for (const auto& basis : a_bases) {
    SteeringBasisReport br;
    br.averaged_b = ComplexMatrix::Zero(dim_b, dim_b);
    std::vector<Projector> projectors;
    for (const auto& a : basis) {
      const Projector local = tensor(Projector::onto(a), id_b);
      projectors.push_back(local);
      SteeringBranch branch;
      branch.probability = born_probability(rho, local);
      if (branch.probability > kNullEventTol) {
        branch.conditional_b = partial_trace(luders_conditionalize(rho, local), Subsystem::B, dim_a, dim_b);
        br.averaged_b += branch.probability * branch.conditional_b->matrix();
      }
      br.total_probability += branch.probability;
      br.branches.push_back(std::move(branch));
    }
    br.complete = std::abs(br.total_probability - 1.0) <= kOperatorTol;
    br.deviation_from_rho_b = (br.averaged_b - report.rho_b).cwiseAbs().maxCoeff();
    if (br.complete) {
      try {
        const ProjectiveMeasurement m(std::move(projectors));
        const ComplexMatrix after = partial_trace(measurement_average(rho, m).matrix(), Subsystem::B, dim_a, dim_b);
        br.operator_level_deviation = (after - report.rho_b).cwiseAbs().maxCoeff();
      } catch (const std::invalid_argument&) {
        // Unit total probability but not a resolution of the identity on A.
      }
    }
    report.bases.push_back(std::move(br));
  }
  for (std::size_t i = 0; i < report.bases.size(); ++i)
    for (std::size_t j = i + 1; j < report.bases.size(); ++j)
      report.max_trace_distance = std::max(
          report.max_trace_distance, trace_distance(report.bases[i].averaged_b, report.bases[j].averaged_b));
  return report;
}

SteeringReport steering_no_signaling_check(const SteeringExample& example) {
  return steering_no_signaling_check(example.state, example.dim_a, example.dim_b, {example.basis1, example.basis2});
}

CloningAdvantage cloning_signaling_advantage(int copies, TrinePair pair) {
  if (copies < 1 || copies > 10) {
    throw std::out_of_range("cloning_signaling_advantage: copies must lie in [1, 10]");
  }
  auto averaged = [copies](const std::vector<StateVector>& trine) {
    const Eigen::Index d = Eigen::Index{1} << copies;
    ComplexMatrix sigma = ComplexMatrix::Zero(d, d);
    for (const auto& t : trine) {
      StateVector v = t;
      for (int k = 1; k < copies; ++k) v = kron(v, t);
      sigma += v * v.adjoint() / 3.0;
    }
    return sigma;
  };
  CloningAdvantage out;
  out.copies = copies;
  out.trace_distance = trace_distance(averaged(make_trine(pair, 1)), averaged(make_trine(pair, 2)));
  out.success = 0.5 + out.trace_distance / 2;
  return out;
}

CloneSignalReport pr_clone_signal(const CorrelationBox& box, std::size_t rounds, std::uint64_t seed, int bob_input,
                                  int clone_input) {
  const Scenario& s = box.scenario();
  if (!s.is_chsh()) throw std::invalid_argument("pr_clone_signal: box must be 2,2,2,2");
  if (bob_input < 0 || bob_input > 1 || clone_input < 0 || clone_input > 1) {
    throw std::out_of_range("pr_clone_signal: Bob inputs must be 0 or 1");
  }
  if (rounds == 0) throw std::invalid_argument("pr_clone_signal: need at least one round");

  CloneSignalReport r;
  r.rounds = rounds;
  r.seed = seed;
  r.bob_input = bob_input;
  r.clone_input = clone_input;
  r.identity_held = true;
  std::size_t correct = 0, correct_single = 0;
  for (std::size_t round = 0; round < rounds; ++round) {
    CounterRng rng(seed, round);
    const int x = rng.bernoulli(0.5) ? 1 : 0;
    const std::array<double, 4> joint{box(x, bob_input, 0, 0), box(x, bob_input, 0, 1), box(x, bob_input, 1, 0),
                                      box(x, bob_input, 1, 1)};
    const auto ab = rng.categorical(joint);
    const int a = static_cast<int>(ab / 2);
    const int b = static_cast<int>(ab % 2);
    const std::array<double, 2> clone{box(x, clone_input, a, 0), box(x, clone_input, a, 1)};
    const int b2 = static_cast<int>(rng.categorical(clone));

    const int inferred = b ^ b2;
    if (inferred == x) ++correct;
    if (inferred != (x & (bob_input ^ clone_input))) r.identity_held = false;
    if (b == x) ++correct_single;
  }
  r.accuracy = static_cast<double>(correct) / static_cast<double>(rounds);
  r.no_clone_accuracy = static_cast<double>(correct_single) / static_cast<double>(rounds);

  // Best single-copy guess: for each b pick the x with larger joint weight.
  for (int b = 0; b < 2; ++b) {
    const double w0 = 0.5 * marginal(box, Party::Bob, b, bob_input, 0);
    const double w1 = 0.5 * marginal(box, Party::Bob, b, bob_input, 1);
    r.no_clone_optimal += std::max(w0, w1);
  }
  return r;
}

std::array<double, 3> bloch_vector(const DensityOperator& rho) {
  if (rho.dim() != 2) throw std::invalid_argument("bloch_vector: qubit state required");
  std::array<double, 3> r{};
  for (int k = 0; k < 3; ++k) r[static_cast<std::size_t>(k)] = (rho.matrix() * pauli(k)).trace().real();
  return r;
}

DensityOperator from_bloch(const std::array<double, 3>& r) {
  ComplexMatrix m = ComplexMatrix::Identity(2, 2);
  for (int k = 0; k < 3; ++k) m += r[static_cast<std::size_t>(k)] * pauli(k);
  return DensityOperator(m / 2.0);
}

TomographyReport tomography_information_loss(const DensityOperator& rho, std::optional<std::size_t> shots,
                                             std::uint64_t seed) {
  if (rho.dim() != 2) throw std::invalid_argument("tomography: qubit state required");
  if (shots && *shots == 0) throw std::invalid_argument("tomography: shots must be at least 1");

  TomographyReport rep;
  rep.shots = shots;
  rep.seed = seed;
  rep.bloch_true = bloch_vector(rho);

  // Frequency of the +1 outcome per axis.
  std::array<double, 3> plus{};
  const ComplexMatrix id = ComplexMatrix::Identity(2, 2);
  for (int k = 0; k < 3; ++k) {
    const auto ku = static_cast<std::size_t>(k);
    const Projector up((id + pauli(k)) / 2.0);
    const Projector down((id - pauli(k)) / 2.0);
    const double p_up = born_probability(rho, up);
    if (shots) {
      CounterRng rng(seed, ku);
      std::size_t hits = 0;
      for (std::size_t i = 0; i < *shots; ++i) hits += rng.bernoulli(p_up) ? 1 : 0;
      plus[ku] = static_cast<double>(hits) / static_cast<double>(*shots);
    } else {
      plus[ku] = p_up;
    }
    const DensityOperator measured = measurement_average(rho, ProjectiveMeasurement({up, down}, {1.0, -1.0}));
    rep.disturbance[ku] = trace_distance(measured.matrix(), rho.matrix());
  }

  // Product measure over sign patterns (sx, sy, sz), atom index bit k set for -1.
  std::vector<double> weights(8);
  for (std::size_t atom = 0; atom < 8; ++atom) {
    double w = 1.0;
    for (std::size_t k = 0; k < 3; ++k) w *= ((atom >> k) & 1U) ? 1.0 - plus[k] : plus[k];
    weights[atom] = w;
  }
  double total = 0.0;
  for (double w : weights) total += w;
  for (double& w : weights) w /= total;
  rep.product_measure = ClassicalDensity(weights);

  double norm2 = 0.0;
  for (std::size_t k = 0; k < 3; ++k) {
    std::vector<int> up(8);
    for (std::size_t atom = 0; atom < 8; ++atom) up[atom] = ((atom >> k) & 1U) ? 0 : 1;
    rep.bloch_raw[k] = 2.0 * c_probability(rep.product_measure, ClassicalEvent(up)) - 1.0;
    norm2 += rep.bloch_raw[k] * rep.bloch_raw[k];
  }
  rep.bloch_estimate = rep.bloch_raw;
  const double norm = std::sqrt(norm2);
  if (norm > 1.0) {
    rep.projected = true;
    for (double& c : rep.bloch_estimate) c /= norm;
  }
  rep.estimate = from_bloch(rep.bloch_estimate);
  rep.fidelity = fidelity(rho, rep.estimate);
  rep.fidelity_error = 1.0 - rep.fidelity;
  double d2 = 0.0;
  for (std::size_t k = 0; k < 3; ++k) d2 += std::pow(rep.bloch_estimate[k] - rep.bloch_true[k], 2);
  rep.bloch_error = std::sqrt(d2);
  return rep;
}

// ---------------------------------------------------------------------------

namespace {
nlohmann::json vectors_json(const std::vector<StateVector>& vs) {
  nlohmann::json out = nlohmann::json::array();
  for (const auto& v : vs) out.push_back(to_json(v));
  return out;
}
}  // namespace

const char* to_string(TrinePair pair) {
  switch (pair) {
    case TrinePair::ComplexHalfTurn: return "complex-half-turn";
    case TrinePair::RealQuarterTurn: return "real-quarter-turn";
    case TrinePair::RealSixthTurn: return "real-sixth-turn";
  }
  return "unknown";
}

nlohmann::json to_json(const SteeringExample& ex) {
  return {{"trine_pair", to_string(ex.pair)},
          {"dims", {ex.dim_a, ex.dim_b}},
          {"state", to_json(ex.state)},
          {"trine1", vectors_json(ex.trine1)},
          {"trine2", vectors_json(ex.trine2)},
          {"basis1", vectors_json(ex.basis1)},
          {"basis2", vectors_json(ex.basis2)},
          {"plane", vectors_json({ex.plane[0], ex.plane[1]})},
          {"expansion_difference", (ex.expansion(1) - ex.expansion(2)).norm()}};
}

nlohmann::json to_json(const SteeringReport& report) {
  nlohmann::json bases = nlohmann::json::array();
  for (const auto& b : report.bases) {
    nlohmann::json branches = nlohmann::json::array();
    for (const auto& br : b.branches) {
      branches.push_back({{"probability", br.probability},
                          {"conditional_b", br.conditional_b ? to_json(*br.conditional_b) : nlohmann::json()}});
    }
    bases.push_back({{"branches", std::move(branches)},
                     {"total_probability", b.total_probability},
                     {"complete", b.complete},
                     {"averaged_b", to_json(b.averaged_b)},
                     {"deviation_from_rho_b", b.deviation_from_rho_b},
                     {"operator_level_deviation", b.operator_level_deviation
                                                      ? nlohmann::json(*b.operator_level_deviation)
                                                      : nlohmann::json()}});
  }
  return {{"rho_b", to_json(report.rho_b)}, {"bases", std::move(bases)}, {"max_trace_distance", report.max_trace_distance}};
}

nlohmann::json to_json(const CloningAdvantage& a) {
  return {{"copies", a.copies}, {"trace_distance", a.trace_distance}, {"success", a.success}};
}

nlohmann::json to_json(const CloneSignalReport& r) {
  return {{"rounds", r.rounds},
          {"seed", r.seed},
          {"bob_input", r.bob_input},
          {"clone_input", r.clone_input},
          {"accuracy", r.accuracy},
          {"identity_held", r.identity_held},
          {"no_clone_accuracy", r.no_clone_accuracy},
          {"no_clone_optimal", r.no_clone_optimal}};
}

nlohmann::json to_json(const TomographyReport& r) {
  return {{"shots", r.shots ? nlohmann::json(*r.shots) : nlohmann::json("exact")},
          {"seed", r.seed},
          {"bloch_true", r.bloch_true},
          {"bloch_raw", r.bloch_raw},
          {"bloch_estimate", r.bloch_estimate},
          {"projected", r.projected},
          {"estimate", to_json(r.estimate)},
          {"product_measure", to_json(r.product_measure)},
          {"fidelity", r.fidelity},
          {"fidelity_error", r.fidelity_error},
          {"bloch_error", r.bloch_error},
          {"disturbance", r.disturbance}};
}

}  // namespace corrlab
