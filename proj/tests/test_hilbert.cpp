#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "corrlab/hilbert.hpp"
#include "corrlab/local.hpp"

using namespace corrlab;
using std::numbers::pi;

namespace {

StateVector qubit(double c0, Complex c1) {
  StateVector v(2);
  v << c0, c1;
  return v / v.norm();
}

double max_abs(const ComplexMatrix& m) { return m.cwiseAbs().maxCoeff(); }

// Random projective measurement: a Haar basis grouped into `outcomes` blocks.
ProjectiveMeasurement random_measurement(Eigen::Index dim, int outcomes, CounterRng& rng) {
  const ComplexMatrix u = random_unitary(dim, rng);
  std::vector<Projector> ps;
  for (int k = 0; k < outcomes; ++k) {
    ComplexMatrix p = ComplexMatrix::Zero(dim, dim);
    for (Eigen::Index j = k; j < dim; j += outcomes) p += u.col(j) * u.col(j).adjoint();
    ps.emplace_back(p);
  }
  return ProjectiveMeasurement(std::move(ps));
}

}  // namespace

TEST(DensityOperatorTest, Validation) {
  ComplexMatrix m(2, 2);
  m << 0.5, 0.1, 0.2, 0.5;
  EXPECT_THROW(DensityOperator{m}, std::invalid_argument);  // not Hermitian
  m << 0.6, 0, 0, 0.6;
  EXPECT_THROW(DensityOperator{m}, std::invalid_argument);  // trace
  m << 1.5, 0, 0, -0.5;
  EXPECT_THROW(DensityOperator{m}, std::invalid_argument);  // negative eigenvalue
  m << 1.0 + 5e-11, 0, 0, -5e-11;
  const DensityOperator clamped(m);
  EXPECT_GE(clamped.matrix()(1, 1).real(), 0.0);
  EXPECT_THROW(DensityOperator::pure(StateVector::Ones(2)), std::invalid_argument);
}

TEST(ProjectorTest, Validation) {
  ComplexMatrix m(2, 2);
  m << 1, 0, 0, 0.5;
  EXPECT_THROW(Projector{m}, std::invalid_argument);
  EXPECT_EQ(Projector::onto(qubit(1, 1)).rank(), 1);
  const std::vector<StateVector> span{StateVector::Unit(3, 0), StateVector::Unit(3, 0) + StateVector::Unit(3, 1)};
  const auto p = Projector::onto_span(span);
  EXPECT_EQ(p.rank(), 2);
  EXPECT_NEAR(std::abs(p.matrix()(2, 2)), 0.0, 1e-15);
}

TEST(MeasurementTest, Validation) {
  EXPECT_THROW(ProjectiveMeasurement({Projector::onto(qubit(1, 0)), Projector::onto(qubit(1, 1))}),
               std::invalid_argument);
  EXPECT_THROW(ProjectiveMeasurement({Projector::onto(qubit(1, 0))}), std::invalid_argument);
  const auto z = ProjectiveMeasurement::computational(3);
  EXPECT_EQ(z.size(), 3u);
  EXPECT_EQ(z.label(2), 2.0);
}

TEST(BornTest, Examples) {
  const auto rho = DensityOperator::maximally_mixed(2);
  EXPECT_NEAR(born_probability(rho, Projector::identity(2)), 1.0, 1e-15);
  EXPECT_NEAR(born_probability(rho, Projector::onto(qubit(0.3, Complex(0.1, 0.7)))), 0.5, 1e-15);
  // Real unit vectors at angle pi/3.
  const StateVector e = qubit(1, 0);
  const StateVector f = qubit(std::cos(pi / 3), std::sin(pi / 3));
  EXPECT_NEAR(born_probability(DensityOperator::pure(e), Projector::onto(f)), 0.25, 1e-15);
  EXPECT_THROW(born_probability(rho, Projector::identity(3)), std::invalid_argument);
}

TEST(BornTest, AdditiveOverOrthogonalProjectors) {
  CounterRng rng(5);
  for (int trial = 0; trial < 20; ++trial) {
    const auto rho = random_density(4, rng);
    const auto m = random_measurement(4, 4, rng);
    const ComplexMatrix pair = m.projector(0).matrix() + m.projector(1).matrix();
    EXPECT_NEAR(born_probability(rho, Projector(pair)),
                born_probability(rho, m.projector(0)) + born_probability(rho, m.projector(1)), 1e-12);
  }
}

TEST(LudersTest, Examples) {
  const StateVector e = qubit(0.6, Complex(0, 0.8));
  const auto pure = DensityOperator::pure(e);
  EXPECT_LE(max_abs(luders_conditionalize(pure, Projector::onto(e)).matrix() - pure.matrix()), 1e-15);
  const auto p = Projector::onto(qubit(1, 1));
  EXPECT_LE(max_abs(luders_conditionalize(DensityOperator::maximally_mixed(2), p).matrix() - p.matrix()), 1e-15);
  EXPECT_THROW(luders_conditionalize(DensityOperator::pure(qubit(1, 0)), Projector::onto(qubit(0, 1))),
               NullEventError);
}

TEST(LudersTest, Idempotent) {
  CounterRng rng(6);
  for (int trial = 0; trial < 50; ++trial) {
    const auto rho = random_density(3, rng);
    const auto m = random_measurement(3, 2, rng);
    const auto once = luders_conditionalize(rho, m.projector(0));
    const auto twice = luders_conditionalize(once, m.projector(0));
    EXPECT_LE(max_abs(once.matrix() - twice.matrix()), 1e-12);
  }
}

TEST(ConditionalProbabilityTest, Examples) {
  const auto rho = DensityOperator::maximally_mixed(2);
  const auto zero = Projector::onto(qubit(1, 0));
  const auto plus = Projector::onto(qubit(1, 1));
  EXPECT_NEAR(conditional_probability(rho, zero, zero), 1.0, 1e-15);
  EXPECT_NEAR(conditional_probability(rho, zero, Projector::onto(qubit(0, 1))), 0.0, 1e-15);
  // Tr(|0><0| |+><+|) = 1/2.
  EXPECT_NEAR(conditional_probability(rho, zero, plus), 0.5, 1e-15);
}

TEST(MeasurementAverageTest, Examples) {
  const auto z = ProjectiveMeasurement::computational(2);
  const auto plus = DensityOperator::pure(qubit(1, 1));
  EXPECT_LE(max_abs(measurement_average(plus, z).matrix() - ComplexMatrix::Identity(2, 2) / 2.0), 1e-15);
  ComplexMatrix diag = ComplexMatrix::Zero(2, 2);
  diag(0, 0) = 0.3;
  diag(1, 1) = 0.7;
  const DensityOperator d(diag);
  EXPECT_LE(max_abs(measurement_average(d, z).matrix() - diag), 1e-15);
}

TEST(MeasurementAverageTest, MatchesBasisChangeOracle) {
  CounterRng rng(7);
  for (int trial = 0; trial < 30; ++trial) {
    const auto rho = random_density(3, rng);
    const ComplexMatrix u = random_unitary(3, rng);
    std::vector<StateVector> basis;
    for (Eigen::Index j = 0; j < 3; ++j) basis.push_back(u.col(j));
    const auto m = ProjectiveMeasurement::from_basis(basis);
    const ComplexMatrix full = u.adjoint() * rho.matrix() * u;
    const ComplexMatrix in_basis = full.diagonal().asDiagonal();
    const ComplexMatrix oracle = u * in_basis * u.adjoint();
    EXPECT_LE(max_abs(measurement_average(rho, m).matrix() - oracle), 1e-12);
  }
}

TEST(MeasurementAverageTest, TraceAndPositivityPreserved) {
  CounterRng rng(8);
  for (int trial = 0; trial < 50; ++trial) {
    const auto rho = random_density(4, rng);
    const auto out = measurement_average(rho, random_measurement(4, 2, rng));
    EXPECT_NEAR(out.matrix().trace().real(), 1.0, 1e-12);
    Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(out.matrix());
    EXPECT_GE(es.eigenvalues().minCoeff(), -1e-12);
  }
}

TEST(TensorTest, PartialTraceRoundTrip) {
  CounterRng rng(9);
  const auto a = random_density(2, rng);
  const auto b = random_density(3, rng);
  const auto ab = tensor(a, b);
  EXPECT_LE(max_abs(partial_trace(ab, Subsystem::A, 2, 3).matrix() - a.matrix()), 1e-14);
  EXPECT_LE(max_abs(partial_trace(ab, Subsystem::B, 2, 3).matrix() - b.matrix()), 1e-14);
  EXPECT_THROW(partial_trace(ab, Subsystem::A, 3, 3), std::invalid_argument);
}

TEST(TensorTest, BellReducesToMixed) {
  const auto rho = DensityOperator::pure(bell_phi_plus());
  EXPECT_LE(max_abs(partial_trace(rho, Subsystem::A, 2, 2).matrix() - ComplexMatrix::Identity(2, 2) / 2.0), 1e-15);
}

TEST(OperatorNoSignalingTest, AliceMeasurementLeavesBobUnchanged) {
  double worst = 0.0;
  for (std::uint64_t trial = 0; trial < 200; ++trial) {
    CounterRng rng(10, trial);
    const Eigen::Index da = 2 + static_cast<Eigen::Index>(trial % 3);
    const Eigen::Index db = 2 + static_cast<Eigen::Index>((trial / 3) % 2);
    const auto rho = random_density(da * db, rng);
    const auto m = random_measurement(da, 2, rng);
    std::vector<Projector> lifted;
    for (const auto& p : m.projectors()) lifted.push_back(tensor(p, Projector::identity(db)));
    const auto after = measurement_average(rho, ProjectiveMeasurement(lifted));
    worst = std::max(worst, max_abs(partial_trace(after.matrix(), Subsystem::B, da, db) -
                                    partial_trace(rho.matrix(), Subsystem::B, da, db)));
  }
  EXPECT_LT(worst, 1e-10);
}

TEST(SchmidtTest, Examples) {
  const auto bell = schmidt_decompose(bell_phi_plus(), 2, 2);
  ASSERT_EQ(bell.rank(), 2u);
  EXPECT_NEAR(bell.coefficients(0), 1 / std::numbers::sqrt2, 1e-15);
  EXPECT_NEAR(bell.coefficients(1), 1 / std::numbers::sqrt2, 1e-15);
  const StateVector product = kron(qubit(1, 2), qubit(0.3, Complex(0, 1)));
  const auto p = schmidt_decompose(product, 2, 2);
  ASSERT_EQ(p.rank(), 1u);
  EXPECT_NEAR(p.coefficients(0), 1.0, 1e-15);
  EXPECT_THROW(schmidt_decompose(StateVector::Ones(4), 2, 2), std::invalid_argument);
}

TEST(SchmidtTest, RandomStatesReconstruct) {
  CounterRng rng(11);
  for (int trial = 0; trial < 40; ++trial) {
    const Eigen::Index da = 2 + trial % 3, db = 2 + trial % 4;
    const StateVector psi = random_pure_state(da * db, rng);
    const auto s = schmidt_decompose(psi, da, db);
    EXPECT_LT((s.reconstruct() - psi).norm(), 1e-10);
    for (std::size_t i = 0; i < s.rank(); ++i) {
      if (i + 1 < s.rank()) EXPECT_GE(s.coefficients(i), s.coefficients(i + 1));
      for (std::size_t j = 0; j < s.rank(); ++j) {
        const double delta = i == j ? 1.0 : 0.0;
        EXPECT_NEAR(std::abs(s.a_basis[i].dot(s.a_basis[j]) - delta), 0.0, 1e-10);
        EXPECT_NEAR(std::abs(s.b_basis[i].dot(s.b_basis[j]) - delta), 0.0, 1e-10);
      }
      Eigen::Index at = 0;
      s.a_basis[i].cwiseAbs().maxCoeff(&at);
      EXPECT_EQ(s.a_basis[i](at).imag(), 0.0);
      EXPECT_GT(s.a_basis[i](at).real(), 0.0);
    }
    // Squared coefficients are the spectrum of the reduced state.
    const ComplexMatrix rho_a = partial_trace(ComplexMatrix(psi * psi.adjoint()), Subsystem::A, da, db);
    Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(rho_a);
    const Eigen::VectorXd ev = es.eigenvalues().reverse();
    for (std::size_t i = 0; i < s.rank(); ++i)
      EXPECT_NEAR(s.coefficients(i) * s.coefficients(i), ev(i), 1e-12);
  }
}

TEST(FidelityTest, PureStatesAndDistance) {
  const StateVector a = qubit(1, 0), b = qubit(1, Complex(0, 1));
  EXPECT_NEAR(fidelity(DensityOperator::pure(a), DensityOperator::pure(b)), std::norm(a.dot(b)), 1e-12);
  EXPECT_NEAR(trace_distance(DensityOperator::pure(a).matrix(), DensityOperator::pure(qubit(0, 1)).matrix()), 1.0,
              1e-15);
}

TEST(QuantumBoxTest, SingletReachesMinusTsirelson) {
  const std::array<double, 4> angles{0.0, pi / 2, pi / 4, -pi / 4};
  const auto box = quantum_box(xz_strategy(singlet(), angles));
  double oracle = 0.0;
  for (int x = 0; x < 2; ++x)
    for (int y = 0; y < 2; ++y) {
      const double e = -std::cos(angles[static_cast<std::size_t>(x)] - angles[2 + static_cast<std::size_t>(y)]);
      EXPECT_NEAR(correlator(box, x, y), e, 1e-12);
      oracle += (x & y) ? -e : e;
    }
  EXPECT_NEAR(chsh_value(box), oracle, 1e-12);
  EXPECT_NEAR(chsh_value(box), -2 * std::numbers::sqrt2, 1e-9);
  EXPECT_TRUE(check_no_signaling(box).is_no_signaling);
}

TEST(QuantumBoxTest, UniformMarginalsAndCoarseMeasurement) {
  const auto z = ProjectiveMeasurement::computational(2);
  const auto box = quantum_box(QuantumStrategy(DensityOperator::pure(bell_phi_plus()), 2, 2, {z, z}, {z, z}));
  for (int x = 0; x < 2; ++x)
    for (int y = 0; y < 2; ++y) {
      EXPECT_NEAR(marginal(box, Party::Alice, 0, x, y), 0.5, 1e-15);
      EXPECT_NEAR(marginal(box, Party::Bob, 1, y, x), 0.5, 1e-15);
    }
  const ProjectiveMeasurement coarse({Projector::identity(2)});
  const auto trivial =
      quantum_box(QuantumStrategy(DensityOperator::pure(bell_phi_plus()), 2, 2, {coarse}, {coarse}));
  EXPECT_NEAR(trivial(0, 0, 0, 0), 1.0, 1e-15);
}

TEST(QuantumBoxTest, ProductStrategiesAreLocal) {
  CounterRng rng(12);
  for (int trial = 0; trial < 10; ++trial) {
    const StateVector psi = kron(random_pure_state(2, rng), random_pure_state(2, rng));
    std::array<double, 4> t{};
    for (auto& v : t) v = rng.uniform(0, 2 * pi);
    EXPECT_TRUE(membership(quantum_box(xz_strategy(psi, t))).is_local());
  }
}

TEST(QuantumBoxTest, RandomStrategiesRespectTsirelson) {
  for (std::uint64_t trial = 0; trial < 200; ++trial) {
    CounterRng rng(13, trial);
    const auto rho = random_density(4, rng);
    const QuantumStrategy s(rho, 2, 2, {random_measurement(2, 2, rng), random_measurement(2, 2, rng)},
                            {random_measurement(2, 2, rng), random_measurement(2, 2, rng)});
    EXPECT_LE(std::abs(chsh_value(quantum_box(s))), 2 * std::numbers::sqrt2 + 1e-8);
  }
}

TEST(QuantumBoxTest, StrategyDimensionsChecked) {
  const auto z2 = ProjectiveMeasurement::computational(2);
  const auto z3 = ProjectiveMeasurement::computational(3);
  EXPECT_THROW(QuantumStrategy(DensityOperator::maximally_mixed(4), 2, 2, {z3}, {z2}), std::invalid_argument);
  EXPECT_THROW(QuantumStrategy(DensityOperator::maximally_mixed(6), 2, 2, {z2}, {z2}), std::invalid_argument);
}

TEST(OptimizeChshTest, ReachesTsirelson) {
  const auto mx = optimize_chsh(Objective::Maximize);
  EXPECT_GE(mx.chsh, 2 * std::numbers::sqrt2 - 1e-6);
  const auto mn = optimize_chsh(Objective::Minimize);
  EXPECT_LE(mn.chsh, -2 * std::numbers::sqrt2 + 1e-6);
  EXPECT_NEAR(win_probability(quantum_box(mn.strategy), marginal_game(0.5)), 0.5 + std::numbers::sqrt2 / 4, 1e-6);
  EXPECT_NEAR(chsh_value(quantum_box(xz_strategy(bell_phi_plus(), mn.angles))), mn.chsh, 1e-12);
}

TEST(OptimizeChshTest, SharedAngleFamilyStaysClassical) {
  // Every setting at one common angle: grid search over that single parameter.
  double best = 0.0;
  for (int i = 0; i < 720; ++i) {
    const double t = 2 * pi * i / 720;
    best = std::max(best, std::abs(chsh_value(quantum_box(xz_strategy(bell_phi_plus(), {t, t, t, t})))));
  }
  EXPECT_LE(best, 2.0 + 1e-12);
}

TEST(JsonTest, StatesAndMeasurementsRoundTrip) {
  CounterRng rng(14);
  const auto rho = random_density(3, rng);
  const auto back = density_from_json(nlohmann::json::parse(to_json(rho).dump()));
  EXPECT_EQ(back.matrix(), rho.matrix());
  const auto m = xz_measurement(0.4);
  const auto mb = measurement_from_json(to_json(m));
  EXPECT_EQ(mb.label(1), -1.0);
  EXPECT_LE(max_abs(mb.projector(0).matrix() - m.projector(0).matrix()), 1e-15);
  EXPECT_THROW(matrix_from_json(nlohmann::json::parse(R"({"dims":[2,2],"data":[1,0]})")), std::invalid_argument);
}

TEST(RandomTest, UnitaryIsUnitary) {
  CounterRng rng(15);
  const ComplexMatrix u = random_unitary(5, rng);
  EXPECT_LE(max_abs(u.adjoint() * u - ComplexMatrix::Identity(5, 5)), 1e-12);
}
