#pragma once

#include <cstddef>
#include <cstdint>
#include <limits>
#include <variant>
#include <vector>

namespace srp {

inline constexpr double kNever = std::numeric_limits<double>::infinity();

/// An explicit jump of `particle` (0-based) at absolute time `time`.
struct ScriptedJump {
  double time;
  std::uint32_t particle;
};

/// Source of jump times shared by every simulator implementation.
///
/// The random schedule draws the gap before jump j of particle i as
/// -log(U) / w_i with U taken from Philox block j of that particle's stream,
/// so jump times depend only on (seed, particle, jump index).
class JumpSchedule {
 public:
  static JumpSchedule random(std::uint64_t seed);
  /// Times must be finite, non-negative and pairwise distinct.
  static JumpSchedule scripted(std::vector<ScriptedJump> jumps, std::size_t particles);

  /// Absolute time of jump `jump_index` (1-based) of `particle`, given the
  /// time of its previous jump (0 for the first). kNever when none follows.
  double jump_time(std::uint32_t particle, std::uint64_t jump_index, double previous,
                   double rate) const;

  bool is_scripted() const { return std::holds_alternative<Scripted>(source_); }

 private:
  struct Random {
    std::uint64_t seed;
  };
  struct Scripted {
    std::vector<std::vector<double>> times;  // per particle, increasing
  };

  explicit JumpSchedule(std::variant<Random, Scripted> source) : source_(std::move(source)) {}

  std::variant<Random, Scripted> source_;
};

}  // namespace srp
