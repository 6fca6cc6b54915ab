#pragma once

// Closed-form infinite-particle limit of the ranking process.
//
// With lambda the marginal jump-rate law and mu_{y,0} the initial profile:
//
//   boundary(t)      y_C(t)   = 1 - int e^{-wt} lambda(dw)
//   boundary_time(y) t_0(y)   : y_C(t_0(y)) = y
//   flow(y, t)       y_C(y,t) = 1 - int_y^1 int e^{-wt} mu_{z,0}(dw) dz
//   origin(y, t)     hat y    : flow(hat y, t) = y,  for y >= y_C(t)
//
// The limit density mu_{y,t} has a head branch (y < y_C(t)), the size-biased
// tilt of lambda at t_0(y), and a tail branch (y > y_C(t)), the exponential
// tilt of mu_{hat y, 0} at t. It jumps across the curve y = y_C(t); callers
// evaluating exactly on it must pick a side.

#include <stdexcept>
#include <vector>

#include "srp/measures.hpp"

namespace srp {

enum class Regime { head, tail };
enum class Side { automatic, head, tail };

const char* to_string(Regime regime);

/// Raised for a density or velocity query exactly on the boundary curve.
class BoundarySingularity : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

struct LimitDensity {
  Regime regime;
  JumpRateLaw law;
};

class LimitField {
 public:
  static constexpr double kDefaultRootTolerance = 1e-12;

  explicit LimitField(InitialProfile profile, double root_tolerance = kDefaultRootTolerance,
                      int quadrature_nodes = kDefaultQuadratureNodes);
  /// Also checks that `declared_marginal` is the y-average of the profile.
  LimitField(InitialProfile profile, const JumpRateLaw& declared_marginal,
             double root_tolerance = kDefaultRootTolerance,
             int quadrature_nodes = kDefaultQuadratureNodes);

  const InitialProfile& profile() const { return profile_; }
  const JumpRateLaw& marginal() const { return profile_.marginal(); }
  double root_tolerance() const { return root_tolerance_; }

  double boundary(double t) const;
  /// d y_C / dt.
  double boundary_velocity(double t) const;
  double boundary_time(double y) const;

  double flow(double y, double t) const;
  double origin(double y, double t) const;

  Regime regime(double y, double t, Side side = Side::automatic) const;
  LimitDensity density(double y, double t, Side side = Side::automatic) const;
  double velocity(double y, double t, Side side = Side::automatic) const;

  /// int_0^y int g dmu_{z,t} dz, for 0 < y < 1.
  double statistic(const RateFunction& g, double y, double t) const;

  /// int_0^1 mu_{y,t} dy by composite midpoint in y, split at y_C(t) and the
  /// stratum edges; atom weights in the order of marginal().atoms().
  /// Discrete laws only.
  std::vector<double> reconstruct_marginal(double t, int panels = 10'000) const;

 private:
  InitialProfile profile_;
  double root_tolerance_;
  int quadrature_nodes_;
};

/// max_k |d_t p_k + d_y(v p_k) + w_k p_k| by central differences of step h,
/// with p_k(y, t) the limit density weight of atom k. Discrete laws only;
/// every stencil point must lie on the same side of y_C as (y, t).
double pde_residual(const LimitField& field, double y, double t, double h);

}  // namespace srp
