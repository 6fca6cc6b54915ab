#include "srp/limit.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

namespace srp {

namespace {

// Slack for regime checks, where y_C(t) and flow(0, t) are evaluated along
// different summation orders.
constexpr double kRegimeSlack = 1e-12;

void require_time(double t, const char* where) {
  if (!(t >= 0.0) || !std::isfinite(t)) {
    throw std::invalid_argument(std::string(where) + ": time must be finite and >= 0");
  }
}

void require_position(double y, const char* where) {
  if (!(y >= 0.0 && y < 1.0)) {
    throw std::invalid_argument(std::string(where) + ": position must lie in [0, 1)");
  }
}

bool is_discrete(const InitialProfile& profile) {
  return std::all_of(profile.strata().begin(), profile.strata().end(),
                     [](const Stratum& s) { return s.law.is_discrete(); });
}

std::size_t atom_index(const JumpRateLaw& marginal, double rate) {
  const auto atoms = marginal.atoms();
  const auto it = std::lower_bound(atoms.begin(), atoms.end(), rate,
                                   [](const Atom& a, double r) { return a.rate < r; });
  if (it == atoms.end() || it->rate != rate) {
    throw std::logic_error("density atom missing from the marginal law");
  }
  return static_cast<std::size_t>(it - atoms.begin());
}

// Density weights aligned with the marginal's atoms.
std::vector<double> atom_weights(const JumpRateLaw& marginal, const JumpRateLaw& law) {
  std::vector<double> weights(marginal.atoms().size(), 0.0);
  for (const Atom& a : law.atoms()) weights[atom_index(marginal, a.rate)] = a.weight;
  return weights;
}

}  // namespace

const char* to_string(Regime regime) { return regime == Regime::head ? "head" : "tail"; }

LimitField::LimitField(InitialProfile profile, double root_tolerance, int quadrature_nodes)
    : profile_(std::move(profile)),
      root_tolerance_(root_tolerance),
      quadrature_nodes_(quadrature_nodes) {
  if (!(root_tolerance_ > 0.0)) throw std::invalid_argument("LimitField: root tolerance must be > 0");
  if (quadrature_nodes_ < 1) throw std::invalid_argument("LimitField: quadrature nodes must be >= 1");
}

LimitField::LimitField(InitialProfile profile, const JumpRateLaw& declared_marginal,
                       double root_tolerance, int quadrature_nodes)
    : LimitField(std::move(profile), root_tolerance, quadrature_nodes) {
  if (!approximately_equal(profile_.marginal(), declared_marginal)) {
    throw std::invalid_argument(
        "LimitField: declared marginal differs from the y-average of the profile");
  }
}

double LimitField::boundary(double t) const {
  require_time(t, "boundary");
  return 1.0 - laplace(marginal(), t);
}

double LimitField::boundary_velocity(double t) const { return weighted_laplace(marginal(), t); }

// Bracket by doubling, bisect to width 1e-3, then Newton safeguarded by the
// bracket. Newton continues past root_tolerance until the step stalls so that
// round trips hold to near machine precision in t.
double LimitField::boundary_time(double y) const {
  require_position(y, "boundary_time");
  if (y == 0.0) return 0.0;
  const double remaining = 1.0 - y;
  // Positive when the curve is still below y.
  auto gap = [&](double t) { return laplace(marginal(), t) - remaining; };

  double lo = 0.0;
  double hi = 1.0;
  while (gap(hi) > 0.0) {
    lo = hi;
    hi *= 2.0;
    if (!std::isfinite(hi)) throw std::domain_error("boundary_time: no finite bracket");
  }
  for (int it = 0; it < 2000 && hi - lo > 1e-3; ++it) {
    const double mid = 0.5 * (lo + hi);
    (gap(mid) > 0.0 ? lo : hi) = mid;
  }

  double t = 0.5 * (lo + hi);
  for (int it = 0; it < 100; ++it) {
    const double g = gap(t);
    if (g == 0.0) break;
    (g > 0.0 ? lo : hi) = t;
    const double slope = weighted_laplace(marginal(), t);
    double next = slope > 0.0 ? t + g / slope : 0.5 * (lo + hi);
    if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
    const bool stalled =
        std::abs(next - t) <= 4.0 * std::numeric_limits<double>::epsilon() * std::max(1.0, t);
    t = next;
    if (stalled) break;
  }
  if (std::abs(gap(t)) > root_tolerance_) {
    throw std::runtime_error("boundary_time: root tolerance not reached for y = " +
                             std::to_string(y));
  }
  return t;
}

double LimitField::flow(double y, double t) const {
  require_position(y, "flow");
  require_time(t, "flow");
  if (t == 0.0) return y;
  return 1.0 - profile_tail_integral(profile_, y, t);
}

// flow(., t) is piecewise linear with slope laplace(stratum law, t) > 0 on
// each stratum, so the inverse is found by walking strata from the tail.
double LimitField::origin(double y, double t) const {
  require_position(y, "origin");
  require_time(t, "origin");
  if (y < boundary(t) - kRegimeSlack) {
    throw std::domain_error("origin: y = " + std::to_string(y) +
                            " lies in the head regime, below y_C(t)");
  }
  if (t == 0.0) return y;
  const double target = 1.0 - y;
  const auto strata = profile_.strata();
  double accumulated = 0.0;
  for (auto it = strata.rbegin(); it != strata.rend(); ++it) {
    const double slope = laplace(it->law, t);
    const double mass = it->length() * slope;
    if (accumulated + mass >= target) {
      const double z = it->upper - (target - accumulated) / slope;
      return std::clamp(z, it->lower, std::nextafter(it->upper, 0.0));
    }
    accumulated += mass;
  }
  return 0.0;
}

Regime LimitField::regime(double y, double t, Side side) const {
  require_position(y, "regime");
  const double curve = boundary(t);
  switch (side) {
    case Side::automatic:
      if (y == curve) {
        throw BoundarySingularity("y = " + std::to_string(y) +
                                  " lies exactly on the boundary curve; choose a side");
      }
      return y < curve ? Regime::head : Regime::tail;
    case Side::head:
      if (y > curve + kRegimeSlack) throw std::invalid_argument("head side requested above y_C(t)");
      return Regime::head;
    case Side::tail:
      if (y < curve - kRegimeSlack) throw std::invalid_argument("tail side requested below y_C(t)");
      return Regime::tail;
  }
  throw std::logic_error("unreachable");
}

LimitDensity LimitField::density(double y, double t, Side side) const {
  require_time(t, "density");
  const Regime r = regime(y, t, side);
  if (r == Regime::head) {
    const double s = y >= boundary(t) ? t : boundary_time(y);
    return {r, size_biased_tilt(marginal(), s)};
  }
  const double z = origin(y, t);
  return {r, exponential_tilt(profile_.law_at(z), t)};
}

double LimitField::velocity(double y, double t, Side side) const {
  require_time(t, "velocity");
  const Regime r = regime(y, t, side);
  if (r == Regime::head) {
    const double s = y >= boundary(t) ? t : boundary_time(y);
    return weighted_laplace(marginal(), s);
  }
  return profile_tail_weighted_laplace(profile_, origin(y, t), t);
}

double LimitField::statistic(const RateFunction& g, double y, double t) const {
  if (!(y > 0.0 && y < 1.0)) throw std::invalid_argument("statistic: y must lie in (0, 1)");
  require_time(t, "statistic");
  const double total = test_integral(marginal(), g, 0.0, quadrature_nodes_);
  const double curve = boundary(t);
  if (y <= curve) {
    const double s = y == curve ? t : boundary_time(y);
    return total - test_integral(marginal(), g, s, quadrature_nodes_);
  }
  return total - profile_tail_test_integral(profile_, g, origin(y, t), t, quadrature_nodes_);
}

std::vector<double> LimitField::reconstruct_marginal(double t, int panels) const {
  require_time(t, "reconstruct_marginal");
  if (!is_discrete(profile_)) {
    throw std::invalid_argument("reconstruct_marginal: discrete laws only");
  }
  if (panels < 1) throw std::invalid_argument("reconstruct_marginal: panels must be >= 1");

  // The tail density changes law where the origin crosses a stratum edge.
  std::vector<double> breaks{0.0, 1.0};
  const double curve = boundary(t);
  if (curve > 0.0 && curve < 1.0) breaks.push_back(curve);
  for (const Stratum& s : profile_.strata()) {
    if (s.lower > 0.0) breaks.push_back(flow(s.lower, t));
  }
  std::sort(breaks.begin(), breaks.end());
  breaks.erase(std::unique(breaks.begin(), breaks.end()), breaks.end());

  std::vector<double> weights(marginal().atoms().size(), 0.0);
  for (std::size_t b = 0; b + 1 < breaks.size(); ++b) {
    const double a = breaks[b];
    const double width = breaks[b + 1] - a;
    if (!(width > 0.0)) continue;
    const int cells = std::max(1, static_cast<int>(std::lround(width * panels)));
    const double h = width / cells;
    const Side side = a < curve ? Side::head : Side::tail;
    for (int c = 0; c < cells; ++c) {
      const double y = a + (c + 0.5) * h;
      const LimitDensity d = density(y, t, side);
      for (const Atom& atom : d.law.atoms()) {
        weights[atom_index(marginal(), atom.rate)] += h * atom.weight;
      }
    }
  }
  return weights;
}

double pde_residual(const LimitField& field, double y, double t, double h) {
  if (!(h > 0.0)) throw std::invalid_argument("pde_residual: step must be > 0");
  if (!is_discrete(field.profile())) {
    throw std::invalid_argument("pde_residual: discrete laws only");
  }
  if (!(y - h >= 0.0 && y + h < 1.0 && t - h >= 0.0)) {
    throw std::invalid_argument("pde_residual: stencil leaves the domain");
  }
  if (!(std::abs(y - field.boundary(t)) > 2.0 * h)) {
    throw std::invalid_argument("pde_residual: point within 2h of the boundary curve");
  }
  const Regime r = field.regime(y, t);
  const Side side = r == Regime::head ? Side::head : Side::tail;
  auto same_side = [&](double yy, double tt) {
    const double curve = field.boundary(tt);
    return r == Regime::head ? yy < curve : yy > curve;
  };
  if (!same_side(y, t - h) || !same_side(y, t + h) || !same_side(y - h, t) ||
      !same_side(y + h, t)) {
    throw std::invalid_argument("pde_residual: stencil crosses the boundary curve");
  }

  const JumpRateLaw& marginal = field.marginal();
  auto weights = [&](double yy, double tt) {
    return atom_weights(marginal, field.density(yy, tt, side).law);
  };
  const std::vector<double> centre = weights(y, t);
  const std::vector<double> later = weights(y, t + h);
  const std::vector<double> earlier = weights(y, t - h);
  const std::vector<double> right = weights(y + h, t);
  const std::vector<double> left = weights(y - h, t);
  const double v_right = field.velocity(y + h, t, side);
  const double v_left = field.velocity(y - h, t, side);

  double residual = 0.0;
  const auto atoms = marginal.atoms();
  for (std::size_t k = 0; k < atoms.size(); ++k) {
    const double dt = (later[k] - earlier[k]) / (2.0 * h);
    const double dy = (v_right * right[k] - v_left * left[k]) / (2.0 * h);
    residual = std::max(residual, std::abs(dt + dy + atoms[k].rate * centre[k]));
  }
  return residual;
}

}  // namespace srp
