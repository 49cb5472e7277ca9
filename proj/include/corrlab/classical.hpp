#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "corrlab/errors.hpp"
#include "corrlab/hilbert.hpp"
#include "json.hpp"

namespace corrlab {

/// Subset of a finite sample space, as an indicator vector.
class ClassicalEvent {
 public:
  /// Entries must be 0 or 1.
  explicit ClassicalEvent(std::vector<int> indicator);

  std::size_t size() const { return indicator_.size(); }
  bool contains(std::size_t atom) const { return indicator_.at(atom) != 0; }
  std::size_t count() const;
  const std::vector<int>& indicator() const { return indicator_; }

  ClassicalEvent intersect(const ClassicalEvent& other) const;
  ClassicalEvent complement() const;

  friend bool operator==(const ClassicalEvent&, const ClassicalEvent&) = default;

 private:
  std::vector<int> indicator_;
};

class FiniteSampleSpace {
 public:
  explicit FiniteSampleSpace(std::size_t atoms);

  std::size_t size() const { return atoms_; }
  ClassicalEvent whole() const;
  ClassicalEvent empty() const;
  ClassicalEvent atom(std::size_t i) const;

 private:
  std::size_t atoms_;
};

/// Probability weights over atoms; nonnegative and summing to 1 within 1e-12.
class ClassicalDensity {
 public:
  explicit ClassicalDensity(std::vector<double> weights);

  static ClassicalDensity uniform(std::size_t atoms);
  /// Point mass on one atom.
  static ClassicalDensity atomic(std::size_t atoms, std::size_t at);

  std::size_t size() const { return weights_.size(); }
  const std::vector<double>& weights() const { return weights_; }

  /// The density written as a mixture of point masses: (atom, weight) for
  /// every atom of positive weight. The representation is unique.
  std::vector<std::pair<std::size_t, double>> atomic_mixture() const;

 private:
  std::vector<double> weights_;
};

double c_probability(const ClassicalDensity& rho, const ClassicalEvent& event);

/// Bayesian update: weights off the event are zeroed and the rest
/// renormalized. Throws NullEventError when the event has probability <= 1e-12.
ClassicalDensity c_conditionalize(const ClassicalDensity& rho, const ClassicalEvent& event);

/// Diagonal embedding into the quantum kernel.
DensityOperator embed_density(const ClassicalDensity& rho);
Projector embed_event(const ClassicalEvent& event);

struct CorrespondenceReport {
  std::size_t atoms = 0;
  std::size_t cases = 0;
  double max_deviation = 0.0;  ///< entrywise, quantum Luders vs embedded Bayes
  double max_probability_deviation = 0.0;
};

/// Compares Luders conditionalization on diagonal embeddings against the
/// classical update for `cases` random densities and events on `atoms` atoms.
CorrespondenceReport commuting_correspondence(std::size_t atoms, std::size_t cases, std::uint64_t seed);

struct NoncommutingReport {
  double deviation = 0.0;        ///< distance from the nearest embedded classical update
  bool correspondence_fails = false;
};

/// Qubit counterexample: a diagonal state conditioned on a non-diagonal
/// projector. The Luders update is compared against every classical update
/// of the same weights; the smallest max-entry distance is reported.
NoncommutingReport noncommuting_counterexample(const ClassicalDensity& rho, const Projector& projector);

nlohmann::json to_json(const ClassicalDensity& rho);
ClassicalDensity classical_density_from_json(const nlohmann::json& j);

}  // namespace corrlab
