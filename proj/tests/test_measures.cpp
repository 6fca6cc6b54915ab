#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <vector>

#include <boost/math/quadrature/exp_sinh.hpp>

#include "srp/measures.hpp"
#include "srp/quadrature.hpp"

using srp::JumpRateLaw;

namespace {

const double kLn2 = std::numbers::ln2;

JumpRateLaw two_atom() { return JumpRateLaw::discrete({{1.0, 0.5}, {2.0, 0.5}}); }

srp::InitialProfile two_strata() {
  return srp::InitialProfile({{0.0, 0.5, JumpRateLaw::point_mass(1.0)},
                              {0.5, 1.0, JumpRateLaw::point_mass(2.0)}});
}

// Monte Carlo mean of f(w) under `law`, with its standard error.
template <typename F>
std::pair<double, double> monte_carlo(const JumpRateLaw& law, F f, int samples) {
  srp::PhiloxEngine engine(99, 0);
  double sum = 0.0, sum_sq = 0.0;
  for (int i = 0; i < samples; ++i) {
    const double x = f(law.sample(engine));
    sum += x;
    sum_sq += x * x;
  }
  const double mean = sum / samples;
  return {mean, std::sqrt((sum_sq / samples - mean * mean) / samples)};
}

// int_0^inf f(w) gamma_density(w) dw by double-exponential quadrature.
template <typename F>
double gamma_quadrature(double shape, double rate, F f) {
  boost::math::quadrature::exp_sinh<double> integrator;
  return integrator.integrate([&](double w) {
    return f(w) * std::pow(rate, shape) * std::pow(w, shape - 1.0) * std::exp(-rate * w) /
           std::tgamma(shape);
  });
}

}  // namespace

TEST_CASE("laplace examples") {
  CHECK(srp::laplace(JumpRateLaw::point_mass(1.0), 0.0) == 1.0);
  CHECK(srp::laplace(two_atom(), kLn2) == doctest::Approx(0.375).epsilon(1e-14));
  CHECK(srp::laplace(JumpRateLaw::gamma(2.0, 1.0), 1.0) == doctest::Approx(0.25).epsilon(1e-14));
}

TEST_CASE("laplace agrees with its oracles") {
  const auto [mc, se] = monte_carlo(two_atom(), [](double w) { return std::exp(-w * kLn2); }, 1'000'000);
  CHECK(std::abs(mc - srp::laplace(two_atom(), kLn2)) < 4.0 * se);
  const double quad = gamma_quadrature(2.0, 1.0, [](double w) { return std::exp(-w); });
  CHECK(srp::laplace(JumpRateLaw::gamma(2.0, 1.0), 1.0) == doctest::Approx(quad).epsilon(1e-10));
}

TEST_CASE("laplace rejects negative time") {
  CHECK_THROWS_AS(srp::laplace(two_atom(), -0.1), std::invalid_argument);
  CHECK_THROWS_AS(srp::weighted_laplace(two_atom(), -0.1), std::invalid_argument);
}

TEST_CASE("weighted laplace examples") {
  CHECK(srp::weighted_laplace(JumpRateLaw::point_mass(1.0), 0.0) == 1.0);
  CHECK(srp::weighted_laplace(two_atom(), kLn2) == doctest::Approx(0.5).epsilon(1e-14));
  CHECK(srp::weighted_laplace(JumpRateLaw::gamma(2.0, 1.0), 0.0) == doctest::Approx(2.0).epsilon(1e-14));
  const auto [mc, se] =
      monte_carlo(two_atom(), [](double w) { return w * std::exp(-w * kLn2); }, 1'000'000);
  // Both atoms give w e^{-w ln 2} = 1/2, so the estimate has no spread.
  CHECK(std::abs(mc - 0.5) <= 4.0 * se + 1e-15);
  CHECK(gamma_quadrature(2.0, 1.0, [](double w) { return w; }) == doctest::Approx(2.0).epsilon(1e-10));
}

TEST_CASE("laplace is decreasing with derivative minus weighted laplace") {
  const std::vector<JumpRateLaw> laws{JumpRateLaw::point_mass(1.0), two_atom(),
                                      JumpRateLaw::gamma(2.0, 1.0), JumpRateLaw::gamma(0.5, 3.0)};
  constexpr double kStep = 1e-6;
  for (const JumpRateLaw& law : laws) {
    CHECK(srp::laplace(law, 0.0) == doctest::Approx(1.0).epsilon(1e-15));
    double previous = 1.0;
    for (double t : {0.1, 0.5, 1.0, 2.0, 5.0}) {
      const double value = srp::laplace(law, t);
      CHECK(value < previous);
      previous = value;
      const double slope = (srp::laplace(law, t + kStep) - srp::laplace(law, t - kStep)) / (2 * kStep);
      const double expected = srp::weighted_laplace(law, t);
      CHECK(std::abs(-slope - expected) <= 1e-6 * expected);
    }
  }
}

TEST_CASE("test integral examples") {
  const srp::RateFunction one = [](double) { return 1.0; };
  for (double t : {0.0, 0.3, 2.0}) {
    CHECK(srp::test_integral(two_atom(), one, t) == doctest::Approx(srp::laplace(two_atom(), t)));
    CHECK(srp::test_integral(JumpRateLaw::gamma(2.0, 1.0), one, t) ==
          doctest::Approx(srp::laplace(JumpRateLaw::gamma(2.0, 1.0), t)).epsilon(1e-12));
  }
  CHECK(srp::test_integral(two_atom(), [](double w) { return w * w; }, 0.0) == doctest::Approx(2.5));
  CHECK(srp::test_integral(JumpRateLaw::point_mass(1.0), [](double w) { return w; }, 1.0) ==
        doctest::Approx(std::exp(-1.0)).epsilon(1e-15));
  const auto [mc, se] = monte_carlo(two_atom(), [](double w) { return w * w; }, 200'000);
  CHECK(std::abs(mc - 2.5) < 4.0 * se);
}

TEST_CASE("gamma test integrals match adaptive quadrature") {
  const srp::RateFunction g = [](double w) { return std::exp(-w) + 1.0 / (1.0 + w); };
  for (double t : {0.0, 0.7, 3.0}) {
    const double expected = gamma_quadrature(2.5, 1.5, [&](double w) { return g(w) * std::exp(-w * t); });
    CHECK(srp::test_integral(JumpRateLaw::gamma(2.5, 1.5), g, t) == doctest::Approx(expected).epsilon(1e-8));
  }
}

TEST_CASE("gauss-laguerre rule integrates polynomials exactly") {
  const srp::QuadratureRule rule = srp::gauss_laguerre(10, 1.0);
  double mass = 0.0, mean = 0.0, second = 0.0;
  for (std::size_t k = 0; k < rule.nodes.size(); ++k) {
    mass += rule.weights[k];
    mean += rule.weights[k] * rule.nodes[k];
    second += rule.weights[k] * rule.nodes[k] * rule.nodes[k];
  }
  // Gamma(2, 1): mean 2, second moment 6.
  CHECK(mass == doctest::Approx(1.0).epsilon(1e-13));
  CHECK(mean == doctest::Approx(2.0).epsilon(1e-12));
  CHECK(second == doctest::Approx(6.0).epsilon(1e-12));
}

TEST_CASE("tilts renormalize") {
  const JumpRateLaw tilted = srp::exponential_tilt(two_atom(), kLn2);
  REQUIRE(tilted.atoms().size() == 2);
  CHECK(tilted.atoms()[0].weight == doctest::Approx(2.0 / 3.0));
  CHECK(tilted.atoms()[1].weight == doctest::Approx(1.0 / 3.0));
  const JumpRateLaw biased = srp::size_biased_tilt(two_atom(), kLn2);
  CHECK(biased.atoms()[0].weight == doctest::Approx(0.5));
  CHECK(biased.atoms()[1].weight == doctest::Approx(0.5));
  const JumpRateLaw gamma_biased = srp::size_biased_tilt(JumpRateLaw::gamma(2.0, 1.0), 1.0);
  REQUIRE(gamma_biased.gammas().size() == 1);
  CHECK(gamma_biased.gammas()[0].shape == doctest::Approx(3.0));
  CHECK(gamma_biased.gammas()[0].rate == doctest::Approx(2.0));
}

TEST_CASE("law validation") {
  CHECK_THROWS_AS(JumpRateLaw::discrete({{1.0, 0.5}, {2.0, 0.4}}), std::invalid_argument);
  CHECK_THROWS_AS(JumpRateLaw::discrete({{0.0, 1.0}}), std::invalid_argument);
  CHECK_THROWS_AS(JumpRateLaw::gamma(0.0, 1.0), std::invalid_argument);
  CHECK(two_atom().mean() == doctest::Approx(1.5));
}

TEST_CASE("profile validation and marginal") {
  CHECK_THROWS_AS(srp::InitialProfile({{0.1, 1.0, two_atom()}}), std::invalid_argument);
  CHECK_THROWS_AS(srp::InitialProfile({{0.0, 0.4, two_atom()}, {0.5, 1.0, two_atom()}}),
                  std::invalid_argument);
  CHECK(srp::approximately_equal(two_strata().marginal(), two_atom()));
  CHECK(two_strata().stratum_index(0.49) == 0);
  CHECK(two_strata().stratum_index(0.5) == 1);
}

TEST_CASE("profile tail integral examples") {
  CHECK(srp::profile_tail_integral(two_strata(), 1.0, 0.7) == 0.0);
  CHECK(srp::profile_tail_integral(srp::InitialProfile::factorized(JumpRateLaw::point_mass(1.0)), 0.0, 1.0) ==
        doctest::Approx(std::exp(-1.0)).epsilon(1e-15));
  CHECK(srp::profile_tail_integral(two_strata(), 0.0, kLn2) == doctest::Approx(0.375).epsilon(1e-15));
  CHECK_THROWS_AS(srp::profile_tail_integral(two_strata(), 1.1, 1.0), std::invalid_argument);
  for (double t : {0.0, 0.4, 2.0}) {
    CHECK(srp::profile_tail_integral(two_strata(), 0.0, t) ==
          doctest::Approx(srp::laplace(two_strata().marginal(), t)).epsilon(1e-14));
  }
}

TEST_CASE("sampling: point mass and permutation") {
  const srp::InitialConfiguration c =
      srp::sample_rates_and_positions(srp::InitialProfile::factorized(JumpRateLaw::point_mass(1.0)), 4, 5);
  CHECK(c.rates == std::vector<double>(4, 1.0));
  std::vector<std::uint32_t> sorted = c.positions;
  std::sort(sorted.begin(), sorted.end());
  CHECK(sorted == std::vector<std::uint32_t>{1, 2, 3, 4});
  CHECK_THROWS_AS(srp::sample_rates_and_positions(two_strata(), 0, 1), std::invalid_argument);
}

TEST_CASE("sampling: strata are deterministic for point masses") {
  const srp::InitialConfiguration c = srp::sample_rates_and_positions(two_strata(), 100, 8);
  for (std::size_t i = 0; i < c.size(); ++i) CHECK(c.rates[i] == (c.positions[i] <= 50 ? 1.0 : 2.0));
}

TEST_CASE("sampling: mixture fractions and determinism") {
  const auto profile = srp::InitialProfile::factorized(two_atom());
  const srp::InitialConfiguration c = srp::sample_rates_and_positions(profile, 10'000, 3);
  const double ones = static_cast<double>(std::count(c.rates.begin(), c.rates.end(), 1.0)) / 10'000;
  CHECK(std::abs(ones - 0.5) < 0.02);
  const srp::InitialConfiguration again = srp::sample_rates_and_positions(profile, 10'000, 3);
  CHECK(again.rates == c.rates);
  CHECK(again.positions == c.positions);
}

TEST_CASE("sampled initial data approach the profile uniformly") {
  // sup over y of |(1/N) sum g(w_i)[y_i0 <= y] - int_0^y int g dmu dz|, g(w) = w.
  const srp::InitialProfile profile({{0.0, 0.3, JumpRateLaw::gamma(2.0, 2.0)},
                                     {0.3, 1.0, two_atom()}});
  const auto g = [](double w) { return w; };
  std::vector<double> sups;
  for (std::size_t n : {1'000u, 10'000u, 100'000u}) {
    const srp::InitialConfiguration c = srp::sample_rates_and_positions(profile, n, 12);
    std::vector<double> by_rank(n);
    for (std::size_t i = 0; i < n; ++i) by_rank[c.positions[i] - 1] = g(c.rates[i]);
    double sup = 0.0, running = 0.0;
    std::size_t k = 0;
    for (int j = 1; j < 20; ++j) {
      const double y = 0.05 * j;
      while (k < n && srp::scaled_position(static_cast<std::uint32_t>(k + 1), n) <= y) running += by_rank[k++];
      const double limit = profile.marginal().mean() -
                           srp::profile_tail_weighted_laplace(profile, y, 0.0);
      sup = std::max(sup, std::abs(running / n - limit));
    }
    sups.push_back(sup);
  }
  CHECK(sups[1] < sups[0]);
  CHECK(sups[2] < sups[1]);
}
