#include <gtest/gtest.h>

#include <cmath>
#include <sstream>

#include "corrlab/decoherence.hpp"

using namespace corrlab;

namespace {

double max_abs(const ComplexMatrix& m) { return m.cwiseAbs().maxCoeff(); }

// Brute-force environment trace of |psi><psi| with index (row, v) -> row*V + v.
ComplexMatrix trace_environment(const StateVector& psi, Eigen::Index rows, Eigen::Index modes) {
  ComplexMatrix out = ComplexMatrix::Zero(rows, rows);
  for (Eigen::Index i = 0; i < rows; ++i)
    for (Eigen::Index j = 0; j < rows; ++j)
      for (Eigen::Index v = 0; v < modes; ++v) out(i, j) += psi(i * modes + v) * std::conj(psi(j * modes + v));
  return out;
}

}  // namespace

TEST(DecoherenceModelTest, Validation) {
  auto m = make_reference_model(2, 4, 1);
  EXPECT_NO_THROW(m.validate());
  m.amplitudes[0] *= 2.0;
  EXPECT_THROW(m.validate(), std::invalid_argument);
  EXPECT_THROW(make_reference_model(1, 4, 1), std::invalid_argument);
  EXPECT_THROW(make_reference_model(2, 4, 1, 1.0, 0.0), std::invalid_argument);
  EXPECT_THROW(evolve_snapshot(make_reference_model(2, 20000, 1), 0.0), std::length_error);
}

TEST(DecoherenceModelTest, SeedIsReproducible) {
  const auto a = make_reference_model(3, 10, 5);
  const auto b = make_reference_model(3, 10, 5);
  EXPECT_EQ(a.couplings, b.couplings);
  EXPECT_EQ(a.amplitudes, b.amplitudes);
  EXPECT_NE(a.couplings, make_reference_model(3, 10, 6).couplings);
}

TEST(DecoherenceFactorTest, MatchesDirectOverlaps) {
  const auto model = make_reference_model(3, 7, 2);
  for (double t : {0.0, 0.7, 5.0, 40.0}) {
    const ComplexMatrix zeta = decoherence_factor(model, t);
    for (int k = 0; k < 3; ++k)
      for (int l = 0; l < 3; ++l) {
        const Complex direct = model.environment_state(l, t).dot(model.environment_state(k, t));
        EXPECT_NEAR(std::abs(zeta(k, l) - direct), 0.0, 1e-13);
      }
    for (int k = 0; k < 3; ++k) EXPECT_NEAR(std::abs(zeta(k, k) - 1.0), 0.0, 1e-13);
  }
  EXPECT_LE(max_abs(decoherence_factor(model, 0.0) - ComplexMatrix::Ones(3, 3)), 1e-13);
}

TEST(DecoherenceFactorTest, SingleModeNeverDecays) {
  const auto model = make_reference_model(2, 1, 3);
  for (double t : {0.0, 1.0, 17.0, 300.0}) EXPECT_NEAR(std::abs(decoherence_factor(model, t)(0, 1)), 1.0, 1e-13);
  const auto series = decoherence_series(model, 100.0, 50);
  EXPECT_FALSE(first_time_below(series, 0.5).has_value());
}

TEST(SnapshotTest, ReducedStateMatchesBruteForce) {
  const auto model = make_reference_model(2, 4, 4);
  CounterRng rng(4, 99);
  const std::vector<StateVector> micro{random_pure_state(2, rng), random_pure_state(2, rng)};
  for (double t : {0.0, 1.3, 9.0}) {
    const auto snap = evolve_snapshot(model, t, micro);
    const StateVector psi = global_state(model, t, micro);
    EXPECT_NEAR(snap.norm, 1.0, 1e-12);
    EXPECT_EQ(snap.micro_dim, 2);
    EXPECT_LE(max_abs(snap.reduced.matrix() - trace_environment(psi, 4, 4)), 1e-13);
    double total = 0;
    for (double p : snap.pointer_probabilities) total += p;
    EXPECT_NEAR(total, 1.0, 1e-12);
    EXPECT_NEAR(snap.pointer_probabilities[0], std::norm(model.amplitudes[0]), 1e-12);
  }
}

TEST(SnapshotTest, OffDiagonalTracksZeta) {
  // Default micro states |k>: the coherence between branches is c_k conj(c_l) zeta_kl.
  const auto model = make_reference_model(2, 30, 5);
  for (double t : {0.0, 2.0, 20.0}) {
    const auto snap = evolve_snapshot(model, t);
    const Complex expected = model.amplitudes[0] * std::conj(model.amplitudes[1]) * snap.zeta(0, 1);
    EXPECT_NEAR(std::abs(snap.reduced.matrix()(0 * 2 + 0, 1 * 2 + 1) - expected), 0.0, 1e-13);
    EXPECT_NEAR(snap.offdiag_norm, std::abs(expected), 1e-13);
  }
}

TEST(SnapshotTest, DecaysForReferenceModel) {
  const auto model = make_reference_model(2, 50, 1);
  const auto series = decoherence_series(model, 200.0, 4000);
  ASSERT_EQ(series.size(), 4001u);
  const double initial = series.front().offdiag_norm;
  EXPECT_GT(initial, 0.1);
  const auto t = first_time_below(series, 1e-2);
  ASSERT_TRUE(t.has_value());
  EXPECT_NEAR(*t, 30.5, 1e-9);
  const auto half = first_time_below(series, 0.5);
  ASSERT_TRUE(half.has_value());
  EXPECT_LT(*half, *t);
}

TEST(BooleanTest, EmergesOnlyAfterDecoherence) {
  const auto model = make_reference_model(2, 50, 1);
  const auto early = emergent_boolean_check(evolve_snapshot(model, 0.0), 1e-2);
  EXPECT_FALSE(early.emergent);
  EXPECT_GT(early.additivity_defect, 0.05);
  const auto late = emergent_boolean_check(evolve_snapshot(model, 30.5), 1e-2);
  EXPECT_TRUE(late.emergent);
  EXPECT_LT(late.additivity_defect, 1e-2);
}

TEST(MacroBasisTest, OnlyPointerBasisIsProduct) {
  const auto model = make_reference_model(2, 50, 1);
  ComplexMatrix hadamard(2, 2);
  hadamard << 1, 1, 1, -1;
  hadamard /= std::sqrt(2.0);
  const auto late = nonstandard_macro_basis_check(model, 30.5, hadamard);
  EXPECT_TRUE(late.pointer_product);
  EXPECT_FALSE(late.rotated_product);
  EXPECT_EQ(late.rotated_ranks, (std::vector<int>{2, 2}));
  // Before any evolution the environment factors coincide, so any basis works.
  EXPECT_TRUE(nonstandard_macro_basis_check(model, 0.0, hadamard).rotated_product);
  EXPECT_THROW(nonstandard_macro_basis_check(model, 1.0, ComplexMatrix::Ones(2, 2)), std::invalid_argument);
}

TEST(SeriesTest, CsvLayout) {
  const auto model = make_reference_model(3, 5, 1);
  std::ostringstream out;
  write_csv(out, decoherence_series(model, 1.0, 4), 3);
  std::istringstream in(out.str());
  std::string header;
  std::getline(in, header);
  EXPECT_EQ(header, "t,zeta_0_1,zeta_0_2,zeta_1_2,offdiag_norm");
  int lines = 0;
  for (std::string line; std::getline(in, line);) ++lines;
  EXPECT_EQ(lines, 5);
}
