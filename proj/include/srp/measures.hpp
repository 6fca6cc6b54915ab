#pragma once

// Jump-rate laws and initial position profiles.
//
// A JumpRateLaw is a finite mixture of point masses and Gamma densities. All
// limit formulas reduce to exponential moments of such laws, which are
// closed-form for both families:
//
//   laplace(law, t)          = int e^{-wt} law(dw)
//   weighted_laplace(law, t) = int w e^{-wt} law(dw)
//
// An InitialProfile assigns a law to each of a finite set of strata
// partitioning [0, 1); a single stratum is the position-independent case.

#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "srp/rng.hpp"

namespace srp {

/// Bounded test function of the jump rate.
using RateFunction = std::function<double(double)>;

/// Structural tolerance on probability weights.
inline constexpr double kWeightTolerance = 1e-12;

struct Atom {
  double rate;
  double weight;
};

/// Mixture component with density weight * beta^shape w^{shape-1} e^{-beta w} / Gamma(shape).
struct GammaComponent {
  double weight;
  double shape;
  double rate;
};

class JumpRateLaw {
 public:
  /// Validates: positive rates and shapes, non-negative weights summing to one.
  JumpRateLaw(std::vector<Atom> atoms, std::vector<GammaComponent> gammas);

  static JumpRateLaw point_mass(double rate);
  static JumpRateLaw discrete(std::vector<Atom> atoms);
  static JumpRateLaw gamma(double shape, double rate);
  /// Weighted combination of laws; the weights must sum to one.
  static JumpRateLaw mixture(std::span<const std::pair<double, JumpRateLaw>> parts);

  std::span<const Atom> atoms() const { return atoms_; }
  std::span<const GammaComponent> gammas() const { return gammas_; }

  bool is_discrete() const { return gammas_.empty(); }
  bool is_point_mass() const { return gammas_.empty() && atoms_.size() == 1; }
  double mean() const;

  /// Draws one rate. Point masses consume no randomness.
  double sample(PhiloxEngine& engine) const;

 private:
  std::vector<Atom> atoms_;
  std::vector<GammaComponent> gammas_;
};

/// Laws agree when they carry the same atoms (by rate) and Gamma components
/// (by shape and rate) with weights within `tolerance`.
bool approximately_equal(const JumpRateLaw& a, const JumpRateLaw& b,
                         double tolerance = kWeightTolerance);

double laplace(const JumpRateLaw& law, double t);
double weighted_laplace(const JumpRateLaw& law, double t);

inline constexpr int kDefaultQuadratureNodes = 64;

/// int g(w) e^{-wt} law(dw); atoms exactly, Gamma parts by Gauss-Laguerre.
double test_integral(const JumpRateLaw& law, const RateFunction& g, double t,
                     int quadrature_nodes = kDefaultQuadratureNodes);

/// The law proportional to e^{-wt} law(dw).
JumpRateLaw exponential_tilt(const JumpRateLaw& law, double t);
/// The law proportional to w e^{-wt} law(dw).
JumpRateLaw size_biased_tilt(const JumpRateLaw& law, double t);

struct Stratum {
  double lower;
  double upper;
  JumpRateLaw law;

  double length() const { return upper - lower; }
};

class InitialProfile {
 public:
  /// Strata must be ordered, contiguous and cover [0, 1) exactly.
  explicit InitialProfile(std::vector<Stratum> strata);

  static InitialProfile factorized(JumpRateLaw law);

  std::span<const Stratum> strata() const { return strata_; }
  /// Index of the stratum whose half-open interval contains y in [0, 1).
  std::size_t stratum_index(double y) const;
  const JumpRateLaw& law_at(double y) const { return strata_[stratum_index(y)].law; }

  /// The y-average of the stratum laws.
  const JumpRateLaw& marginal() const { return marginal_; }

 private:
  std::vector<Stratum> strata_;
  JumpRateLaw marginal_;
};

/// int_a^1 int e^{-wt} mu_{z,0}(dw) dz, stratum by stratum.
double profile_tail_integral(const InitialProfile& profile, double a, double t);

/// int_a^1 int g(w) e^{-wt} mu_{z,0}(dw) dz.
double profile_tail_test_integral(const InitialProfile& profile, const RateFunction& g, double a,
                                  double t, int quadrature_nodes = kDefaultQuadratureNodes);

/// int_a^1 int w e^{-wt} mu_{z,0}(dw) dz.
double profile_tail_weighted_laplace(const InitialProfile& profile, double a, double t);

struct InitialConfiguration {
  std::vector<double> rates;
  /// 1-based initial ranks x_{i,0}; a permutation of 1..N.
  std::vector<std::uint32_t> positions;

  std::size_t size() const { return rates.size(); }
};

/// Scaled position (x - 1) / N of a 1-based rank.
inline double scaled_position(std::uint32_t rank, std::size_t n) {
  return static_cast<double>(rank - 1) / static_cast<double>(n);
}

/// Shuffles particles over ranks 1..N and gives the particle at scaled
/// position y a rate from the law of the stratum containing y.
InitialConfiguration sample_rates_and_positions(const InitialProfile& profile, std::size_t n,
                                                std::uint64_t seed);

}  // namespace srp
