#include "srp/schedule.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "srp/rng.hpp"

namespace srp {

JumpSchedule JumpSchedule::random(std::uint64_t seed) { return JumpSchedule(Random{seed}); }

JumpSchedule JumpSchedule::scripted(std::vector<ScriptedJump> jumps, std::size_t particles) {
  Scripted script;
  script.times.resize(particles);
  std::vector<double> all;
  all.reserve(jumps.size());
  for (const ScriptedJump& jump : jumps) {
    if (jump.particle >= particles) {
      throw std::invalid_argument("scripted schedule: particle " + std::to_string(jump.particle) +
                                  " out of range");
    }
    if (!(jump.time >= 0.0) || !std::isfinite(jump.time)) {
      throw std::invalid_argument("scripted schedule: jump times must be finite and >= 0");
    }
    script.times[jump.particle].push_back(jump.time);
    all.push_back(jump.time);
  }
  std::sort(all.begin(), all.end());
  if (std::adjacent_find(all.begin(), all.end()) != all.end()) {
    throw std::invalid_argument("scripted schedule: jump times must be distinct");
  }
  for (auto& times : script.times) std::sort(times.begin(), times.end());
  return JumpSchedule(std::move(script));
}

double JumpSchedule::jump_time(std::uint32_t particle, std::uint64_t jump_index, double previous,
                               double rate) const {
  if (const auto* random = std::get_if<Random>(&source_)) {
    const double u = philox_uniform(random->seed, make_stream(StreamTag::jumps, particle),
                                    jump_index);
    return previous - std::log(u) / rate;
  }
  const auto& times = std::get<Scripted>(source_).times[particle];
  return jump_index <= times.size() ? times[jump_index - 1] : kNever;
}

}  // namespace srp
