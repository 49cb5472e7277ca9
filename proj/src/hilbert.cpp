#include "corrlab/hilbert.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace corrlab {

namespace {

void require_square(const ComplexMatrix& m, const char* what) {
  if (m.rows() == 0 || m.rows() != m.cols()) {
    throw std::invalid_argument(std::string(what) + ": matrix must be square and non-empty");
  }
  if (!m.allFinite()) throw std::invalid_argument(std::string(what) + ": non-finite entry");
}

void require_dim(Eigen::Index got, Eigen::Index want, const char* what) {
  if (got != want) {
    throw std::invalid_argument(std::string(what) + ": dimension mismatch (" + std::to_string(got) +
                                " vs " + std::to_string(want) + ")");
  }
}

double hermitian_defect(const ComplexMatrix& m) { return (m - m.adjoint()).cwiseAbs().maxCoeff(); }

// Square root of a Hermitian PSD matrix; small negative eigenvalues count as zero.
ComplexMatrix psd_sqrt(const ComplexMatrix& m) {
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(m);
  const Eigen::VectorXd ev = es.eigenvalues().cwiseMax(0.0).cwiseSqrt();
  return es.eigenvectors() * ev.asDiagonal() * es.eigenvectors().adjoint();
}

double real_trace(const ComplexMatrix& m) { return m.trace().real(); }

}  // namespace

// ---------------------------------------------------------------------------

DensityOperator::DensityOperator(ComplexMatrix matrix) : matrix_(std::move(matrix)) {
  require_square(matrix_, "DensityOperator");
  if (hermitian_defect(matrix_) > kOperatorTol) {
    throw std::invalid_argument("DensityOperator: matrix is not Hermitian");
  }
  matrix_ = 0.5 * (matrix_ + matrix_.adjoint()).eval();
  const double tr = real_trace(matrix_);
  if (std::abs(tr - 1.0) > kOperatorTol) {
    throw std::invalid_argument("DensityOperator: trace is " + std::to_string(tr) + ", expected 1");
  }
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(matrix_);
  const double lowest = es.eigenvalues().minCoeff();
  if (lowest < -kOperatorTol) {
    throw std::invalid_argument("DensityOperator: negative eigenvalue " + std::to_string(lowest));
  }
  if (lowest < 0.0) {
    const Eigen::VectorXd ev = es.eigenvalues().cwiseMax(0.0);
    matrix_ = es.eigenvectors() * ev.asDiagonal() * es.eigenvectors().adjoint();
  }
}

DensityOperator DensityOperator::pure(const StateVector& psi) {
  if (psi.size() == 0 || std::abs(psi.norm() - 1.0) > kOperatorTol) {
    throw std::invalid_argument("DensityOperator::pure: state vector must have unit norm");
  }
  return DensityOperator(psi * psi.adjoint());
}

DensityOperator DensityOperator::maximally_mixed(Eigen::Index dim) {
  if (dim <= 0) throw std::invalid_argument("maximally_mixed: dimension must be positive");
  return DensityOperator(ComplexMatrix::Identity(dim, dim) / static_cast<double>(dim));
}

// ---------------------------------------------------------------------------

Projector::Projector(ComplexMatrix matrix) : matrix_(std::move(matrix)) {
  require_square(matrix_, "Projector");
  if (hermitian_defect(matrix_) > kOperatorTol) {
    throw std::invalid_argument("Projector: matrix is not Hermitian");
  }
  matrix_ = 0.5 * (matrix_ + matrix_.adjoint()).eval();
  if ((matrix_ * matrix_ - matrix_).cwiseAbs().maxCoeff() > kOperatorTol) {
    throw std::invalid_argument("Projector: matrix is not idempotent");
  }
}

Projector Projector::onto(const StateVector& v) {
  const double n = v.norm();
  if (v.size() == 0 || !(n > kOperatorTol)) throw std::invalid_argument("Projector::onto: zero vector");
  const StateVector u = v / n;
  return Projector(u * u.adjoint());
}

Projector Projector::onto_span(std::span<const StateVector> vectors) {
  if (vectors.empty()) throw std::invalid_argument("Projector::onto_span: no vectors");
  const Eigen::Index d = vectors.front().size();
  ComplexMatrix cols(d, static_cast<Eigen::Index>(vectors.size()));
  for (std::size_t i = 0; i < vectors.size(); ++i) {
    require_dim(vectors[i].size(), d, "Projector::onto_span");
    cols.col(static_cast<Eigen::Index>(i)) = vectors[i];
  }
  Eigen::JacobiSVD<ComplexMatrix> svd(cols, Eigen::ComputeThinU);
  const double top = svd.singularValues().size() ? svd.singularValues()(0) : 0.0;
  ComplexMatrix p = ComplexMatrix::Zero(d, d);
  for (Eigen::Index k = 0; k < svd.singularValues().size(); ++k) {
    if (svd.singularValues()(k) <= 1e-12 * std::max(1.0, top)) continue;
    p += svd.matrixU().col(k) * svd.matrixU().col(k).adjoint();
  }
  return Projector(std::move(p));
}

Projector Projector::identity(Eigen::Index dim) {
  if (dim <= 0) throw std::invalid_argument("Projector::identity: dimension must be positive");
  return Projector(ComplexMatrix::Identity(dim, dim));
}

int Projector::rank() const { return static_cast<int>(std::lround(real_trace(matrix_))); }

// ---------------------------------------------------------------------------

ProjectiveMeasurement::ProjectiveMeasurement(std::vector<Projector> projectors, std::vector<double> labels)
    : projectors_(std::move(projectors)), labels_(std::move(labels)) {
  if (projectors_.empty()) throw std::invalid_argument("ProjectiveMeasurement: no projectors");
  if (labels_.size() != projectors_.size()) {
    throw std::invalid_argument("ProjectiveMeasurement: one label per projector required");
  }
  const Eigen::Index d = projectors_.front().dim();
  ComplexMatrix total = ComplexMatrix::Zero(d, d);
  for (std::size_t i = 0; i < projectors_.size(); ++i) {
    require_dim(projectors_[i].dim(), d, "ProjectiveMeasurement");
    total += projectors_[i].matrix();
    for (std::size_t j = i + 1; j < projectors_.size(); ++j) {
      if ((projectors_[i].matrix() * projectors_[j].matrix()).cwiseAbs().maxCoeff() > kOperatorTol) {
        throw std::invalid_argument("ProjectiveMeasurement: projectors are not mutually orthogonal");
      }
    }
  }
  if ((total - ComplexMatrix::Identity(d, d)).cwiseAbs().maxCoeff() > kOperatorTol) {
    throw std::invalid_argument("ProjectiveMeasurement: projectors do not sum to the identity");
  }
}

namespace {
std::vector<double> index_labels(std::size_t n) {
  std::vector<double> labels(n);
  for (std::size_t i = 0; i < n; ++i) labels[i] = static_cast<double>(i);
  return labels;
}
}  // namespace

ProjectiveMeasurement::ProjectiveMeasurement(std::vector<Projector> projectors)
    : ProjectiveMeasurement(projectors, index_labels(projectors.size())) {}

ProjectiveMeasurement ProjectiveMeasurement::from_basis(std::span<const StateVector> basis) {
  std::vector<Projector> ps;
  ps.reserve(basis.size());
  for (const auto& v : basis) ps.push_back(Projector::onto(v));
  return ProjectiveMeasurement(std::move(ps));
}

ProjectiveMeasurement ProjectiveMeasurement::computational(Eigen::Index dim) {
  std::vector<StateVector> basis;
  for (Eigen::Index i = 0; i < dim; ++i) basis.push_back(StateVector::Unit(dim, i));
  return from_basis(basis);
}

// ---------------------------------------------------------------------------

QuantumStrategy::QuantumStrategy(DensityOperator state, Eigen::Index dim_a, Eigen::Index dim_b,
                                 std::vector<ProjectiveMeasurement> alice,
                                 std::vector<ProjectiveMeasurement> bob)
    : state_(std::move(state)), dim_a_(dim_a), dim_b_(dim_b), alice_(std::move(alice)), bob_(std::move(bob)) {
  if (dim_a_ <= 0 || dim_b_ <= 0) throw std::invalid_argument("QuantumStrategy: dimensions must be positive");
  require_dim(state_.dim(), dim_a_ * dim_b_, "QuantumStrategy state");
  if (alice_.empty() || bob_.empty()) throw std::invalid_argument("QuantumStrategy: each party needs a setting");
  for (const auto& m : alice_) {
    require_dim(m.dim(), dim_a_, "QuantumStrategy Alice setting");
    if (m.size() != alice_.front().size()) {
      throw std::invalid_argument("QuantumStrategy: Alice settings differ in outcome count");
    }
  }
  for (const auto& m : bob_) {
    require_dim(m.dim(), dim_b_, "QuantumStrategy Bob setting");
    if (m.size() != bob_.front().size()) {
      throw std::invalid_argument("QuantumStrategy: Bob settings differ in outcome count");
    }
  }
}

Scenario QuantumStrategy::scenario() const {
  return Scenario{static_cast<int>(alice_.size()), static_cast<int>(bob_.size()),
                  static_cast<int>(alice_.front().size()), static_cast<int>(bob_.front().size())};
}

// ---------------------------------------------------------------------------

double born_probability(const DensityOperator& rho, const Projector& p) {
  require_dim(p.dim(), rho.dim(), "born_probability");
  const double v = (rho.matrix() * p.matrix()).trace().real();
  return std::clamp(v, 0.0, 1.0);
}

DensityOperator luders_conditionalize(const DensityOperator& rho, const Projector& p) {
  require_dim(p.dim(), rho.dim(), "luders_conditionalize");
  const ComplexMatrix post = p.matrix() * rho.matrix() * p.matrix();
  const double prob = real_trace(post);
  if (!(prob > kNullEventTol)) {
    throw NullEventError("luders_conditionalize: conditioning event has probability " + std::to_string(prob));
  }
  return DensityOperator(post / prob);
}

double conditional_probability(const DensityOperator& rho, const Projector& pa, const Projector& pb) {
  return born_probability(luders_conditionalize(rho, pa), pb);
}

DensityOperator measurement_average(const DensityOperator& rho, const ProjectiveMeasurement& m) {
  require_dim(m.dim(), rho.dim(), "measurement_average");
  ComplexMatrix out = ComplexMatrix::Zero(rho.dim(), rho.dim());
  for (const auto& p : m.projectors()) out += p.matrix() * rho.matrix() * p.matrix();
  return DensityOperator(std::move(out));
}

// ---------------------------------------------------------------------------

ComplexMatrix kron(const ComplexMatrix& lhs, const ComplexMatrix& rhs) {
  ComplexMatrix out(lhs.rows() * rhs.rows(), lhs.cols() * rhs.cols());
  for (Eigen::Index i = 0; i < lhs.rows(); ++i)
    for (Eigen::Index j = 0; j < lhs.cols(); ++j)
      out.block(i * rhs.rows(), j * rhs.cols(), rhs.rows(), rhs.cols()) = lhs(i, j) * rhs;
  return out;
}

StateVector kron(const StateVector& lhs, const StateVector& rhs) {
  StateVector out(lhs.size() * rhs.size());
  for (Eigen::Index i = 0; i < lhs.size(); ++i) out.segment(i * rhs.size(), rhs.size()) = lhs(i) * rhs;
  return out;
}

DensityOperator tensor(const DensityOperator& lhs, const DensityOperator& rhs) {
  return DensityOperator(kron(lhs.matrix(), rhs.matrix()));
}

Projector tensor(const Projector& lhs, const Projector& rhs) { return Projector(kron(lhs.matrix(), rhs.matrix())); }

ComplexMatrix partial_trace(const ComplexMatrix& m, Subsystem keep, Eigen::Index dim_a, Eigen::Index dim_b) {
  if (dim_a <= 0 || dim_b <= 0) throw std::invalid_argument("partial_trace: dimensions must be positive");
  require_dim(m.rows(), dim_a * dim_b, "partial_trace");
  require_dim(m.cols(), dim_a * dim_b, "partial_trace");
  if (keep == Subsystem::A) {
    ComplexMatrix out = ComplexMatrix::Zero(dim_a, dim_a);
    for (Eigen::Index i = 0; i < dim_a; ++i)
      for (Eigen::Index j = 0; j < dim_a; ++j)
        for (Eigen::Index b = 0; b < dim_b; ++b) out(i, j) += m(i * dim_b + b, j * dim_b + b);
    return out;
  }
  ComplexMatrix out = ComplexMatrix::Zero(dim_b, dim_b);
  for (Eigen::Index a = 0; a < dim_a; ++a) out += m.block(a * dim_b, a * dim_b, dim_b, dim_b);
  return out;
}

DensityOperator partial_trace(const DensityOperator& rho, Subsystem keep, Eigen::Index dim_a,
                              Eigen::Index dim_b) {
  return DensityOperator(partial_trace(rho.matrix(), keep, dim_a, dim_b));
}

// ---------------------------------------------------------------------------

StateVector SchmidtDecomposition::reconstruct() const {
  if (a_basis.empty()) return {};
  StateVector out = StateVector::Zero(a_basis.front().size() * b_basis.front().size());
  for (std::size_t k = 0; k < rank(); ++k) {
    out += coefficients(static_cast<Eigen::Index>(k)) * kron(a_basis[k], b_basis[k]);
  }
  return out;
}

StateVector fix_phase(StateVector v) {
  Eigen::Index at = 0;
  v.cwiseAbs().maxCoeff(&at);
  const double mag = std::abs(v(at));
  if (mag > 0.0) v *= std::conj(v(at)) / mag;
  v(at) = Complex(v(at).real(), 0.0);
  return v;
}

SchmidtDecomposition schmidt_decompose(const StateVector& psi, Eigen::Index dim_a, Eigen::Index dim_b) {
  if (dim_a <= 0 || dim_b <= 0) throw std::invalid_argument("schmidt_decompose: dimensions must be positive");
  require_dim(psi.size(), dim_a * dim_b, "schmidt_decompose");
  if (std::abs(psi.norm() - 1.0) > kOperatorTol) {
    throw std::invalid_argument("schmidt_decompose: state vector must have unit norm");
  }
  ComplexMatrix m(dim_a, dim_b);
  for (Eigen::Index a = 0; a < dim_a; ++a)
    for (Eigen::Index b = 0; b < dim_b; ++b) m(a, b) = psi(a * dim_b + b);

  // m = U S V^dagger, so psi = sum_k s_k u_k (x) conj(v_k).
  Eigen::JacobiSVD<ComplexMatrix> svd(m, Eigen::ComputeThinU | Eigen::ComputeThinV);
  SchmidtDecomposition out;
  std::vector<double> coeffs;
  for (Eigen::Index k = 0; k < svd.singularValues().size(); ++k) {
    const double s = svd.singularValues()(k);
    if (s < 1e-12) continue;
    StateVector a = svd.matrixU().col(k);
    StateVector b = svd.matrixV().col(k).conjugate();
    const StateVector fixed = fix_phase(a);
    // fixed = phase * a; compensate on the B side so a (x) b is unchanged.
    Eigen::Index at = 0;
    a.cwiseAbs().maxCoeff(&at);
    const Complex phase = fixed(at) / a(at);
    out.a_basis.push_back(fixed);
    out.b_basis.push_back(b / phase);
    coeffs.push_back(s);
  }
  out.coefficients = Eigen::Map<Eigen::VectorXd>(coeffs.data(), static_cast<Eigen::Index>(coeffs.size()));
  return out;
}

double trace_distance(const ComplexMatrix& lhs, const ComplexMatrix& rhs) {
  if (lhs.rows() != rhs.rows() || lhs.cols() != rhs.cols()) {
    throw std::invalid_argument("trace_distance: dimension mismatch");
  }
  const ComplexMatrix diff = lhs - rhs;
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(0.5 * (diff + diff.adjoint()), Eigen::EigenvaluesOnly);
  return 0.5 * es.eigenvalues().cwiseAbs().sum();
}

double fidelity(const DensityOperator& rho, const DensityOperator& sigma) {
  require_dim(sigma.dim(), rho.dim(), "fidelity");
  const ComplexMatrix s = psd_sqrt(rho.matrix());
  const ComplexMatrix inner = s * sigma.matrix() * s;
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(0.5 * (inner + inner.adjoint()), Eigen::EigenvaluesOnly);
  const double root = es.eigenvalues().cwiseMax(0.0).cwiseSqrt().sum();
  return std::min(1.0, root * root);
}

// ---------------------------------------------------------------------------

CorrelationBox quantum_box(const QuantumStrategy& strategy) {
  const Scenario s = strategy.scenario();
  std::vector<double> table(s.size());
  const ComplexMatrix& rho = strategy.state().matrix();
  for (int x = 0; x < s.nx; ++x)
    for (int y = 0; y < s.ny; ++y)
      for (int a = 0; a < s.na; ++a)
        for (int b = 0; b < s.nb; ++b) {
          const ComplexMatrix joint = kron(strategy.alice()[static_cast<std::size_t>(x)]
                                               .projector(static_cast<std::size_t>(a))
                                               .matrix(),
                                           strategy.bob()[static_cast<std::size_t>(y)]
                                               .projector(static_cast<std::size_t>(b))
                                               .matrix());
          table[s.index(x, y, a, b)] = (rho * joint).trace().real();
        }
  return CorrelationBox(s, std::move(table));
}

ProjectiveMeasurement xz_measurement(double theta) {
  StateVector up(2), down(2);
  up << std::cos(theta / 2), std::sin(theta / 2);
  down << -std::sin(theta / 2), std::cos(theta / 2);
  return ProjectiveMeasurement({Projector::onto(up), Projector::onto(down)}, {1.0, -1.0});
}

StateVector bell_phi_plus() {
  StateVector v = StateVector::Zero(4);
  v(0) = v(3) = 1.0 / std::numbers::sqrt2;
  return v;
}

StateVector singlet() {
  StateVector v = StateVector::Zero(4);
  v(1) = 1.0 / std::numbers::sqrt2;
  v(2) = -1.0 / std::numbers::sqrt2;
  return v;
}

QuantumStrategy xz_strategy(const StateVector& state, std::array<double, 4> angles) {
  return QuantumStrategy(DensityOperator::pure(state), 2, 2,
                         {xz_measurement(angles[0]), xz_measurement(angles[1])},
                         {xz_measurement(angles[2]), xz_measurement(angles[3])});
}

ChshOptimum optimize_chsh(Objective objective, int grid_steps) {
  if (grid_steps < 1) throw std::invalid_argument("optimize_chsh: grid_steps must be positive");
  const StateVector phi = bell_phi_plus();
  const double sign = objective == Objective::Maximize ? 1.0 : -1.0;
  int evaluations = 0;
  auto score = [&](const std::array<double, 4>& t) {
    ++evaluations;
    return sign * chsh_value(quantum_box(xz_strategy(phi, t)));
  };

  const double two_pi = 2.0 * std::numbers::pi;
  const double grid = two_pi / grid_steps;
  std::array<double, 4> best{};
  double best_score = -std::numeric_limits<double>::infinity();
  std::array<int, 4> idx{};
  for (idx[0] = 0; idx[0] < grid_steps; ++idx[0])
    for (idx[1] = 0; idx[1] < grid_steps; ++idx[1])
      for (idx[2] = 0; idx[2] < grid_steps; ++idx[2])
        for (idx[3] = 0; idx[3] < grid_steps; ++idx[3]) {
          const std::array<double, 4> t{idx[0] * grid, idx[1] * grid, idx[2] * grid, idx[3] * grid};
          const double v = score(t);
          if (v > best_score) {
            best_score = v;
            best = t;
          }
        }

  for (double step = grid / 2; step > 1e-10; step /= 2) {
    bool improved = true;
    while (improved) {
      improved = false;
      for (std::size_t k = 0; k < 4; ++k) {
        for (double dir : {1.0, -1.0}) {
          auto trial = best;
          trial[k] += dir * step;
          const double v = score(trial);
          if (v > best_score + 1e-15) {
            best_score = v;
            best = trial;
            improved = true;
          }
        }
      }
    }
  }
  for (auto& t : best) t = std::remainder(t, two_pi);

  QuantumStrategy strategy = xz_strategy(phi, best);
  const double k = chsh_value(quantum_box(strategy));
  return ChshOptimum{std::move(strategy), k, best, evaluations};
}

// ---------------------------------------------------------------------------

StateVector random_pure_state(Eigen::Index dim, CounterRng& rng) {
  if (dim <= 0) throw std::invalid_argument("random_pure_state: dimension must be positive");
  StateVector v(dim);
  for (Eigen::Index i = 0; i < dim; ++i) v(i) = Complex(rng.normal(), rng.normal());
  return v / v.norm();
}

namespace {
ComplexMatrix ginibre(Eigen::Index dim, CounterRng& rng) {
  ComplexMatrix g(dim, dim);
  for (Eigen::Index i = 0; i < dim; ++i)
    for (Eigen::Index j = 0; j < dim; ++j) g(i, j) = Complex(rng.normal(), rng.normal());
  return g;
}
}  // namespace

DensityOperator random_density(Eigen::Index dim, CounterRng& rng) {
  if (dim <= 0) throw std::invalid_argument("random_density: dimension must be positive");
  const ComplexMatrix g = ginibre(dim, rng);
  ComplexMatrix m = g * g.adjoint();
  m /= real_trace(m);
  return DensityOperator(std::move(m));
}

ComplexMatrix random_unitary(Eigen::Index dim, CounterRng& rng) {
  if (dim <= 0) throw std::invalid_argument("random_unitary: dimension must be positive");
  Eigen::HouseholderQR<ComplexMatrix> qr(ginibre(dim, rng));
  ComplexMatrix q = qr.householderQ();
  const ComplexMatrix r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (Eigen::Index i = 0; i < dim; ++i) {
    const double mag = std::abs(r(i, i));
    if (mag > 0.0) q.col(i) *= r(i, i) / mag;
  }
  return q;
}

// ---------------------------------------------------------------------------

nlohmann::json to_json(const ComplexMatrix& m) {
  nlohmann::json data = nlohmann::json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i)
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
      data.push_back(m(i, j).real());
      data.push_back(m(i, j).imag());
    }
  return {{"dims", {m.rows(), m.cols()}}, {"data", std::move(data)}};
}

nlohmann::json to_json(const StateVector& v) { return to_json(ComplexMatrix(v)); }

ComplexMatrix matrix_from_json(const nlohmann::json& j) {
  if (!j.is_object() || !j.contains("dims") || !j.contains("data")) {
    throw std::invalid_argument("matrix JSON needs \"dims\" and \"data\"");
  }
  const auto& dims = j.at("dims");
  if (!dims.is_array() || dims.size() != 2) throw std::invalid_argument("matrix JSON: dims must be [rows, cols]");
  const auto rows = dims[0].get<Eigen::Index>();
  const auto cols = dims[1].get<Eigen::Index>();
  if (rows <= 0 || cols <= 0) throw std::invalid_argument("matrix JSON: dims must be positive");
  const auto& data = j.at("data");
  if (!data.is_array() || data.size() != static_cast<std::size_t>(2 * rows * cols)) {
    throw std::invalid_argument("matrix JSON: data must hold 2*rows*cols numbers");
  }
  ComplexMatrix m(rows, cols);
  std::size_t k = 0;
  for (Eigen::Index i = 0; i < rows; ++i)
    for (Eigen::Index c = 0; c < cols; ++c, k += 2) m(i, c) = Complex(data[k].get<double>(), data[k + 1].get<double>());
  return m;
}

nlohmann::json to_json(const DensityOperator& rho) { return to_json(rho.matrix()); }

DensityOperator density_from_json(const nlohmann::json& j) { return DensityOperator(matrix_from_json(j)); }

nlohmann::json to_json(const ProjectiveMeasurement& m) {
  nlohmann::json projectors = nlohmann::json::array();
  std::vector<double> labels;
  for (std::size_t i = 0; i < m.size(); ++i) {
    projectors.push_back(to_json(m.projector(i).matrix()));
    labels.push_back(m.label(i));
  }
  return {{"projectors", std::move(projectors)}, {"labels", labels}};
}

ProjectiveMeasurement measurement_from_json(const nlohmann::json& j) {
  std::vector<Projector> ps;
  for (const auto& p : j.at("projectors")) ps.emplace_back(matrix_from_json(p));
  if (j.contains("labels")) return ProjectiveMeasurement(std::move(ps), j.at("labels").get<std::vector<double>>());
  return ProjectiveMeasurement(std::move(ps));
}

}  // namespace corrlab
