#include "corrlab/classical.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace corrlab {

namespace {

void require_same_size(std::size_t a, std::size_t b, const char* what) {
  if (a != b) {
    throw std::invalid_argument(std::string(what) + ": dimension mismatch (" + std::to_string(a) + " vs " +
                                std::to_string(b) + ")");
  }
}

}  // namespace

ClassicalEvent::ClassicalEvent(std::vector<int> indicator) : indicator_(std::move(indicator)) {
  if (indicator_.empty()) throw std::invalid_argument("ClassicalEvent: sample space must have at least one atom");
  for (int v : indicator_) {
    if (v != 0 && v != 1) throw std::invalid_argument("ClassicalEvent: indicator entries must be 0 or 1");
  }
}

std::size_t ClassicalEvent::count() const {
  return static_cast<std::size_t>(std::count(indicator_.begin(), indicator_.end(), 1));
}

ClassicalEvent ClassicalEvent::intersect(const ClassicalEvent& other) const {
  require_same_size(size(), other.size(), "ClassicalEvent::intersect");
  std::vector<int> out(size());
  for (std::size_t i = 0; i < size(); ++i) out[i] = indicator_[i] & other.indicator_[i];
  return ClassicalEvent(std::move(out));
}

ClassicalEvent ClassicalEvent::complement() const {
  std::vector<int> out(size());
  for (std::size_t i = 0; i < size(); ++i) out[i] = 1 - indicator_[i];
  return ClassicalEvent(std::move(out));
}

FiniteSampleSpace::FiniteSampleSpace(std::size_t atoms) : atoms_(atoms) {
  if (atoms_ < 1) throw std::invalid_argument("FiniteSampleSpace: need at least one atom");
}

ClassicalEvent FiniteSampleSpace::whole() const { return ClassicalEvent(std::vector<int>(atoms_, 1)); }
ClassicalEvent FiniteSampleSpace::empty() const { return ClassicalEvent(std::vector<int>(atoms_, 0)); }

ClassicalEvent FiniteSampleSpace::atom(std::size_t i) const {
  if (i >= atoms_) throw std::out_of_range("FiniteSampleSpace::atom: index out of range");
  std::vector<int> v(atoms_, 0);
  v[i] = 1;
  return ClassicalEvent(std::move(v));
}

ClassicalDensity::ClassicalDensity(std::vector<double> weights) : weights_(std::move(weights)) {
  if (weights_.empty()) throw std::invalid_argument("ClassicalDensity: need at least one atom");
  double total = 0.0;
  for (double w : weights_) {
    if (!std::isfinite(w) || w < 0.0) throw std::invalid_argument("ClassicalDensity: weights must be nonnegative");
    total += w;
  }
  if (std::abs(total - 1.0) > 1e-12) {
    throw std::invalid_argument("ClassicalDensity: weights sum to " + std::to_string(total));
  }
}

ClassicalDensity ClassicalDensity::uniform(std::size_t atoms) {
  if (atoms == 0) throw std::invalid_argument("ClassicalDensity::uniform: need at least one atom");
  return ClassicalDensity(std::vector<double>(atoms, 1.0 / static_cast<double>(atoms)));
}

ClassicalDensity ClassicalDensity::atomic(std::size_t atoms, std::size_t at) {
  if (at >= atoms) throw std::out_of_range("ClassicalDensity::atomic: index out of range");
  std::vector<double> w(atoms, 0.0);
  w[at] = 1.0;
  return ClassicalDensity(std::move(w));
}

std::vector<std::pair<std::size_t, double>> ClassicalDensity::atomic_mixture() const {
  std::vector<std::pair<std::size_t, double>> out;
  for (std::size_t i = 0; i < weights_.size(); ++i) {
    if (weights_[i] > 0.0) out.emplace_back(i, weights_[i]);
  }
  return out;
}

double c_probability(const ClassicalDensity& rho, const ClassicalEvent& event) {
  require_same_size(rho.size(), event.size(), "c_probability");
  double p = 0.0;
  for (std::size_t i = 0; i < rho.size(); ++i) {
    if (event.contains(i)) p += rho.weights()[i];
  }
  return std::min(p, 1.0);
}

ClassicalDensity c_conditionalize(const ClassicalDensity& rho, const ClassicalEvent& event) {
  const double p = c_probability(rho, event);
  if (!(p > kNullEventTol)) {
    throw NullEventError("c_conditionalize: conditioning event has probability " + std::to_string(p));
  }
  std::vector<double> w(rho.size(), 0.0);
  double total = 0.0;
  for (std::size_t i = 0; i < rho.size(); ++i) {
    if (event.contains(i)) total += (w[i] = rho.weights()[i]);
  }
  for (double& v : w) v /= total;
  return ClassicalDensity(std::move(w));
}

DensityOperator embed_density(const ClassicalDensity& rho) {
  const auto n = static_cast<Eigen::Index>(rho.size());
  ComplexMatrix m = ComplexMatrix::Zero(n, n);
  for (Eigen::Index i = 0; i < n; ++i) m(i, i) = rho.weights()[static_cast<std::size_t>(i)];
  return DensityOperator(std::move(m));
}

Projector embed_event(const ClassicalEvent& event) {
  const auto n = static_cast<Eigen::Index>(event.size());
  ComplexMatrix m = ComplexMatrix::Zero(n, n);
  for (Eigen::Index i = 0; i < n; ++i) m(i, i) = event.indicator()[static_cast<std::size_t>(i)];
  return Projector(std::move(m));
}

CorrespondenceReport commuting_correspondence(std::size_t atoms, std::size_t cases, std::uint64_t seed) {
  if (atoms < 1) throw std::invalid_argument("commuting_correspondence: need at least one atom");
  CorrespondenceReport report{atoms, 0, 0.0, 0.0};
  for (std::size_t c = 0; c < cases; ++c) {
    CounterRng rng(seed, c);
    std::vector<double> w(atoms);
    double total = 0.0;
    for (double& v : w) total += (v = rng.uniform() + 1e-3);
    for (double& v : w) v /= total;
    const ClassicalDensity rho(std::move(w));

    std::vector<int> bits(atoms);
    for (int& b : bits) b = rng.bernoulli(0.5) ? 1 : 0;
    bits[rng() % atoms] = 1;  // never the empty event
    const ClassicalEvent event(std::move(bits));
    const ClassicalEvent other = [&] {
      std::vector<int> v(atoms);
      for (int& b : v) b = rng.bernoulli(0.5) ? 1 : 0;
      return ClassicalEvent(std::move(v));
    }();

    const DensityOperator quantum = luders_conditionalize(embed_density(rho), embed_event(event));
    const ClassicalDensity classical = c_conditionalize(rho, event);
    const double dev = (quantum.matrix() - embed_density(classical).matrix()).cwiseAbs().maxCoeff();
    const double pdev = std::abs(born_probability(quantum, embed_event(other)) - c_probability(classical, other));
    report.max_deviation = std::max(report.max_deviation, dev);
    report.max_probability_deviation = std::max(report.max_probability_deviation, pdev);
    ++report.cases;
  }
  return report;
}

NoncommutingReport noncommuting_counterexample(const ClassicalDensity& rho, const Projector& projector) {
  const DensityOperator embedded = embed_density(rho);
  const DensityOperator quantum = luders_conditionalize(embedded, projector);
  const std::size_t n = rho.size();
  if (n > 20) throw std::invalid_argument("noncommuting_counterexample: too many atoms to enumerate events");
  NoncommutingReport report;
  report.deviation = std::numeric_limits<double>::infinity();
  for (std::size_t mask = 1; mask < (std::size_t{1} << n); ++mask) {
    std::vector<int> bits(n);
    for (std::size_t i = 0; i < n; ++i) bits[i] = static_cast<int>((mask >> i) & 1U);
    const ClassicalEvent event(std::move(bits));
    if (!(c_probability(rho, event) > kNullEventTol)) continue;
    const DensityOperator classical = embed_density(c_conditionalize(rho, event));
    report.deviation =
        std::min(report.deviation, (quantum.matrix() - classical.matrix()).cwiseAbs().maxCoeff());
  }
  report.correspondence_fails = report.deviation > 1e-12;
  return report;
}

nlohmann::json to_json(const ClassicalDensity& rho) { return {{"weights", rho.weights()}}; }

ClassicalDensity classical_density_from_json(const nlohmann::json& j) {
  if (!j.is_object() || !j.contains("weights")) throw std::invalid_argument("classical density JSON needs \"weights\"");
  return ClassicalDensity(j.at("weights").get<std::vector<double>>());
}

}  // namespace corrlab
