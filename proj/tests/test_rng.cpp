#include <doctest.h>

#include <cmath>
#include <random>
#include <set>

#include "srp/rng.hpp"

using srp::PhiloxCounter;

TEST_CASE("philox4x32-10 known-answer vectors") {
  CHECK(srp::philox4x32({0, 0, 0, 0}, {0, 0}) ==
        PhiloxCounter{0x6627e8d5, 0xe169c58d, 0xbc57ac4c, 0x9b00dbd8});
  CHECK(srp::philox4x32({0xffffffff, 0xffffffff, 0xffffffff, 0xffffffff}, {0xffffffff, 0xffffffff}) ==
        PhiloxCounter{0x408f276d, 0x41c83b0e, 0xa20bc7c6, 0x6d5451fd});
  CHECK(srp::philox4x32({0x243f6a88, 0x85a308d3, 0x13198a2e, 0x03707344}, {0xa4093822, 0x299f31d0}) ==
        PhiloxCounter{0xd16cfe09, 0x94fdcceb, 0x5001e420, 0x24126ea1});
}

TEST_CASE("unit interval mapping excludes zero and includes one") {
  CHECK(srp::bits_to_unit_interval(0) == doctest::Approx(0x1.0p-53));
  CHECK(srp::bits_to_unit_interval(~std::uint64_t{0}) == 1.0);
}

TEST_CASE("blocks are a pure function of seed, stream and index") {
  const std::uint64_t stream = srp::make_stream(srp::StreamTag::jumps, 17);
  CHECK(srp::philox_uniform(5, stream, 3) == srp::philox_uniform(5, stream, 3));
  CHECK(srp::philox_uniform(5, stream, 3) != srp::philox_uniform(5, stream, 4));
  CHECK(srp::philox_uniform(5, stream, 3) != srp::philox_uniform(6, stream, 3));
  CHECK(srp::philox_uniform(5, stream, 3) !=
        srp::philox_uniform(5, srp::make_stream(srp::StreamTag::rates, 17), 3));
}

TEST_CASE("engine replays its stream block by block") {
  srp::PhiloxEngine engine(9, 4);
  for (std::uint64_t block = 0; block < 3; ++block) {
    const PhiloxCounter expected = srp::philox_block(9, 4, block);
    for (std::uint32_t word : expected) CHECK(engine() == word);
  }
}

TEST_CASE("engine uniforms have mean 1/2 and variance 1/12") {
  srp::PhiloxEngine engine(1, 1);
  constexpr int kDraws = 200'000;
  double sum = 0.0, sum_sq = 0.0;
  for (int i = 0; i < kDraws; ++i) {
    const double u = engine.uniform();
    REQUIRE(u > 0.0);
    REQUIRE(u <= 1.0);
    sum += u;
    sum_sq += u * u;
  }
  const double mean = sum / kDraws;
  CHECK(std::abs(mean - 0.5) < 4.0 * std::sqrt(1.0 / 12.0 / kDraws));
  CHECK(sum_sq / kDraws - mean * mean == doctest::Approx(1.0 / 12.0).epsilon(0.01));
}

TEST_CASE("bounded integers cover the range") {
  srp::PhiloxEngine engine(3, 0);
  std::set<std::uint64_t> seen;
  for (int i = 0; i < 1000; ++i) {
    const std::uint64_t x = engine.below(7);
    REQUIRE(x < 7);
    seen.insert(x);
  }
  CHECK(seen.size() == 7);
}

TEST_CASE("engine works with standard distributions") {
  srp::PhiloxEngine engine(2, 0);
  std::exponential_distribution<double> exp(2.0);
  double sum = 0.0;
  for (int i = 0; i < 100'000; ++i) sum += exp(engine);
  CHECK(sum / 100'000 == doctest::Approx(0.5).epsilon(0.02));
}

TEST_CASE("replica seeds differ per replica") {
  CHECK(srp::replica_seed(10, 0) == 10);
  CHECK(srp::replica_seed(10, 1) != srp::replica_seed(10, 2));
}
