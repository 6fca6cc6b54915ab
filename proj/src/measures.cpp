#include "srp/measures.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <random>
#include <stdexcept>
#include <string>

#include "srp/quadrature.hpp"

namespace srp {

namespace {

void require_time(double t, const char* where) {
  if (!(t >= 0.0) || !std::isfinite(t)) {
    throw std::invalid_argument(std::string(where) + ": time must be finite and >= 0");
  }
}

void require_weight(double w) {
  if (!(w >= 0.0) || !std::isfinite(w)) {
    throw std::invalid_argument("JumpRateLaw: weights must be finite and >= 0");
  }
}

// Normalizes log-weights without overflow; the result sums to one.
std::vector<double> normalize_log_weights(const std::vector<double>& logs) {
  const double top = *std::max_element(logs.begin(), logs.end());
  if (!std::isfinite(top)) throw std::domain_error("tilt: all weights vanish");
  std::vector<double> weights(logs.size());
  double sum = 0.0;
  for (std::size_t k = 0; k < logs.size(); ++k) {
    weights[k] = std::exp(logs[k] - top);
    sum += weights[k];
  }
  for (double& w : weights) w /= sum;
  return weights;
}

double safe_log(double x) {
  return x > 0.0 ? std::log(x) : -std::numeric_limits<double>::infinity();
}

}  // namespace

JumpRateLaw::JumpRateLaw(std::vector<Atom> atoms, std::vector<GammaComponent> gammas) {
  double total = 0.0;
  for (const Atom& a : atoms) {
    if (!(a.rate > 0.0) || !std::isfinite(a.rate)) {
      throw std::invalid_argument("JumpRateLaw: atom rates must be finite and > 0");
    }
    require_weight(a.weight);
    total += a.weight;
  }
  for (const GammaComponent& g : gammas) {
    if (!(g.shape > 0.0) || !(g.rate > 0.0) || !std::isfinite(g.shape) || !std::isfinite(g.rate)) {
      throw std::invalid_argument("JumpRateLaw: gamma shape and rate must be finite and > 0");
    }
    require_weight(g.weight);
    total += g.weight;
  }
  if (std::abs(total - 1.0) > kWeightTolerance) {
    throw std::invalid_argument("JumpRateLaw: weights sum to " + std::to_string(total) +
                                ", expected 1");
  }

  // Canonical form: sorted, duplicates merged, zero weights dropped.
  std::sort(atoms.begin(), atoms.end(),
            [](const Atom& a, const Atom& b) { return a.rate < b.rate; });
  for (const Atom& a : atoms) {
    if (a.weight == 0.0) continue;
    if (!atoms_.empty() && atoms_.back().rate == a.rate) {
      atoms_.back().weight += a.weight;
    } else {
      atoms_.push_back(a);
    }
  }
  std::sort(gammas.begin(), gammas.end(), [](const GammaComponent& a, const GammaComponent& b) {
    return a.shape < b.shape || (a.shape == b.shape && a.rate < b.rate);
  });
  for (const GammaComponent& g : gammas) {
    if (g.weight == 0.0) continue;
    if (!gammas_.empty() && gammas_.back().shape == g.shape && gammas_.back().rate == g.rate) {
      gammas_.back().weight += g.weight;
    } else {
      gammas_.push_back(g);
    }
  }
}

JumpRateLaw JumpRateLaw::point_mass(double rate) { return JumpRateLaw({{rate, 1.0}}, {}); }

JumpRateLaw JumpRateLaw::discrete(std::vector<Atom> atoms) {
  return JumpRateLaw(std::move(atoms), {});
}

JumpRateLaw JumpRateLaw::gamma(double shape, double rate) {
  return JumpRateLaw({}, {{1.0, shape, rate}});
}

JumpRateLaw JumpRateLaw::mixture(std::span<const std::pair<double, JumpRateLaw>> parts) {
  std::vector<Atom> atoms;
  std::vector<GammaComponent> gammas;
  for (const auto& [weight, law] : parts) {
    require_weight(weight);
    for (const Atom& a : law.atoms()) atoms.push_back({a.rate, weight * a.weight});
    for (const GammaComponent& g : law.gammas()) {
      gammas.push_back({weight * g.weight, g.shape, g.rate});
    }
  }
  return JumpRateLaw(std::move(atoms), std::move(gammas));
}

double JumpRateLaw::mean() const {
  double m = 0.0;
  for (const Atom& a : atoms_) m += a.weight * a.rate;
  for (const GammaComponent& g : gammas_) m += g.weight * g.shape / g.rate;
  return m;
}

double JumpRateLaw::sample(PhiloxEngine& engine) const {
  if (is_point_mass()) return atoms_.front().rate;

  std::size_t component = 0;
  const std::size_t count = atoms_.size() + gammas_.size();
  if (count > 1) {
    const double u = engine.uniform();
    double cumulative = 0.0;
    for (component = 0; component + 1 < count; ++component) {
      cumulative += component < atoms_.size() ? atoms_[component].weight
                                              : gammas_[component - atoms_.size()].weight;
      if (u <= cumulative) break;
    }
  }
  if (component < atoms_.size()) return atoms_[component].rate;
  const GammaComponent& g = gammas_[component - atoms_.size()];
  double rate = 0.0;
  while (!(rate > 0.0)) rate = std::gamma_distribution<double>(g.shape, 1.0 / g.rate)(engine);
  return rate;
}

bool approximately_equal(const JumpRateLaw& a, const JumpRateLaw& b, double tolerance) {
  const auto lhs_atoms = a.atoms();
  const auto rhs_atoms = b.atoms();
  const auto lhs_gammas = a.gammas();
  const auto rhs_gammas = b.gammas();
  if (lhs_atoms.size() != rhs_atoms.size() || lhs_gammas.size() != rhs_gammas.size()) {
    return false;
  }
  for (std::size_t k = 0; k < lhs_atoms.size(); ++k) {
    if (lhs_atoms[k].rate != rhs_atoms[k].rate) return false;
    if (std::abs(lhs_atoms[k].weight - rhs_atoms[k].weight) > tolerance) return false;
  }
  for (std::size_t k = 0; k < lhs_gammas.size(); ++k) {
    if (lhs_gammas[k].shape != rhs_gammas[k].shape || lhs_gammas[k].rate != rhs_gammas[k].rate) {
      return false;
    }
    if (std::abs(lhs_gammas[k].weight - rhs_gammas[k].weight) > tolerance) return false;
  }
  return true;
}

double laplace(const JumpRateLaw& law, double t) {
  require_time(t, "laplace");
  double sum = 0.0;
  for (const Atom& a : law.atoms()) sum += a.weight * std::exp(-a.rate * t);
  for (const GammaComponent& g : law.gammas()) {
    sum += g.weight * std::pow(g.rate / (g.rate + t), g.shape);
  }
  return sum;
}

double weighted_laplace(const JumpRateLaw& law, double t) {
  require_time(t, "weighted_laplace");
  double sum = 0.0;
  for (const Atom& a : law.atoms()) sum += a.weight * a.rate * std::exp(-a.rate * t);
  for (const GammaComponent& g : law.gammas()) {
    const double scale = g.rate + t;
    sum += g.weight * (g.shape / scale) * std::pow(g.rate / scale, g.shape);
  }
  return sum;
}

double test_integral(const JumpRateLaw& law, const RateFunction& g, double t,
                     int quadrature_nodes) {
  require_time(t, "test_integral");
  double sum = 0.0;
  for (const Atom& a : law.atoms()) sum += a.weight * g(a.rate) * std::exp(-a.rate * t);
  for (const GammaComponent& c : law.gammas()) {
    // Substituting u = (beta + t) w turns the tilted Gamma integral into an
    // expectation under Gamma(shape, 1).
    const double scale = c.rate + t;
    const QuadratureRule rule = gauss_laguerre(quadrature_nodes, c.shape - 1.0);
    double expectation = 0.0;
    for (std::size_t k = 0; k < rule.nodes.size(); ++k) {
      expectation += rule.weights[k] * g(rule.nodes[k] / scale);
    }
    sum += c.weight * std::pow(c.rate / scale, c.shape) * expectation;
  }
  return sum;
}

JumpRateLaw exponential_tilt(const JumpRateLaw& law, double t) {
  require_time(t, "exponential_tilt");
  std::vector<double> logs;
  for (const Atom& a : law.atoms()) logs.push_back(safe_log(a.weight) - a.rate * t);
  for (const GammaComponent& g : law.gammas()) {
    logs.push_back(safe_log(g.weight) + g.shape * std::log(g.rate / (g.rate + t)));
  }
  const std::vector<double> weights = normalize_log_weights(logs);

  std::vector<Atom> atoms;
  std::vector<GammaComponent> gammas;
  std::size_t k = 0;
  for (const Atom& a : law.atoms()) atoms.push_back({a.rate, weights[k++]});
  for (const GammaComponent& g : law.gammas()) {
    gammas.push_back({weights[k++], g.shape, g.rate + t});
  }
  return JumpRateLaw(std::move(atoms), std::move(gammas));
}

JumpRateLaw size_biased_tilt(const JumpRateLaw& law, double t) {
  require_time(t, "size_biased_tilt");
  std::vector<double> logs;
  for (const Atom& a : law.atoms()) {
    logs.push_back(safe_log(a.weight) + std::log(a.rate) - a.rate * t);
  }
  for (const GammaComponent& g : law.gammas()) {
    // int w e^{-wt} Gamma(shape, rate)(dw) = (shape / rate) (rate / (rate + t))^{shape + 1}
    logs.push_back(safe_log(g.weight) + std::log(g.shape / g.rate) +
                   (g.shape + 1.0) * std::log(g.rate / (g.rate + t)));
  }
  const std::vector<double> weights = normalize_log_weights(logs);

  std::vector<Atom> atoms;
  std::vector<GammaComponent> gammas;
  std::size_t k = 0;
  for (const Atom& a : law.atoms()) atoms.push_back({a.rate, weights[k++]});
  for (const GammaComponent& g : law.gammas()) {
    gammas.push_back({weights[k++], g.shape + 1.0, g.rate + t});
  }
  return JumpRateLaw(std::move(atoms), std::move(gammas));
}

namespace {

JumpRateLaw average_of_strata(const std::vector<Stratum>& strata) {
  std::vector<std::pair<double, JumpRateLaw>> parts;
  parts.reserve(strata.size());
  for (const Stratum& s : strata) parts.emplace_back(s.length(), s.law);
  return JumpRateLaw::mixture(parts);
}

const std::vector<Stratum>& validated(const std::vector<Stratum>& strata) {
  if (strata.empty()) throw std::invalid_argument("InitialProfile: no strata");
  if (strata.front().lower != 0.0) {
    throw std::invalid_argument("InitialProfile: first stratum must start at 0");
  }
  if (strata.back().upper != 1.0) {
    throw std::invalid_argument("InitialProfile: last stratum must end at 1");
  }
  for (std::size_t j = 0; j < strata.size(); ++j) {
    if (!(strata[j].lower < strata[j].upper)) {
      throw std::invalid_argument("InitialProfile: stratum " + std::to_string(j) + " is empty");
    }
    if (j > 0 && strata[j].lower != strata[j - 1].upper) {
      throw std::invalid_argument("InitialProfile: strata " + std::to_string(j - 1) + " and " +
                                  std::to_string(j) + " are not contiguous");
    }
  }
  return strata;
}

}  // namespace

InitialProfile::InitialProfile(std::vector<Stratum> strata)
    : strata_(validated(strata)), marginal_(average_of_strata(strata_)) {}

InitialProfile InitialProfile::factorized(JumpRateLaw law) {
  return InitialProfile({Stratum{0.0, 1.0, std::move(law)}});
}

std::size_t InitialProfile::stratum_index(double y) const {
  if (!(y >= 0.0 && y < 1.0)) {
    throw std::invalid_argument("InitialProfile: position must lie in [0, 1)");
  }
  const auto it = std::upper_bound(strata_.begin(), strata_.end(), y,
                                   [](double v, const Stratum& s) { return v < s.lower; });
  return static_cast<std::size_t>(it - strata_.begin()) - 1;
}

namespace {

template <typename PerLaw>
double tail_sum(const InitialProfile& profile, double a, PerLaw&& per_law) {
  if (!(a >= 0.0 && a <= 1.0)) {
    throw std::invalid_argument("profile tail integral: lower limit must lie in [0, 1]");
  }
  double sum = 0.0;
  for (const Stratum& s : profile.strata()) {
    const double overlap = s.upper - std::max(a, s.lower);
    if (overlap > 0.0) sum += overlap * per_law(s.law);
  }
  return sum;
}

}  // namespace

double profile_tail_integral(const InitialProfile& profile, double a, double t) {
  require_time(t, "profile_tail_integral");
  return tail_sum(profile, a, [t](const JumpRateLaw& law) { return laplace(law, t); });
}

double profile_tail_test_integral(const InitialProfile& profile, const RateFunction& g, double a,
                                  double t, int quadrature_nodes) {
  require_time(t, "profile_tail_test_integral");
  return tail_sum(profile, a, [&](const JumpRateLaw& law) {
    return test_integral(law, g, t, quadrature_nodes);
  });
}

double profile_tail_weighted_laplace(const InitialProfile& profile, double a, double t) {
  require_time(t, "profile_tail_weighted_laplace");
  return tail_sum(profile, a, [t](const JumpRateLaw& law) { return weighted_laplace(law, t); });
}

InitialConfiguration sample_rates_and_positions(const InitialProfile& profile, std::size_t n,
                                                std::uint64_t seed) {
  if (n == 0) throw std::invalid_argument("sample_rates_and_positions: N must be >= 1");
  if (n > std::numeric_limits<std::uint32_t>::max()) {
    throw std::invalid_argument("sample_rates_and_positions: N too large");
  }

  InitialConfiguration config;
  config.positions.resize(n);
  std::iota(config.positions.begin(), config.positions.end(), std::uint32_t{1});
  PhiloxEngine shuffle(seed, make_stream(StreamTag::permutation));
  for (std::size_t i = n - 1; i > 0; --i) {
    std::swap(config.positions[i], config.positions[shuffle.below(i + 1)]);
  }

  config.rates.resize(n);
  PhiloxEngine draws(seed, make_stream(StreamTag::rates));
  for (std::size_t i = 0; i < n; ++i) {
    const double y = scaled_position(config.positions[i], n);
    config.rates[i] = profile.law_at(y).sample(draws);
  }
  return config;
}

}  // namespace srp
