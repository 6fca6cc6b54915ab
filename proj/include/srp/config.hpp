#pragma once

// JSON run configuration shared by the CLI subcommands.
//
// Laws are written as {"atoms": [[w, p], ...]}, {"gamma": {"alpha": a,
// "beta": b}} or {"mixture": [{"weight": c, "law": {...}}, ...]}. The model
// is a list of strata {"from": a, "to": b, "law": {...}} covering [0, 1).
// Particles in a scenario are numbered from 1, as are ranks.

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "srp/checks.hpp"
#include "srp/convergence.hpp"
#include "srp/measures.hpp"
#include "srp/schedule.hpp"

namespace srp {

/// Invalid or unreadable configuration.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A fixed initial arrangement with an explicit jump list.
struct Scenario {
  InitialConfiguration initial;
  std::vector<ScriptedJump> jumps;
};

struct LimitGrid {
  std::vector<double> positions{0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9};
  std::vector<double> times{0.0, 0.25, 0.5, 1.0, 2.0};
};

struct RunConfig {
  std::string name = "model";
  std::optional<InitialProfile> profile;
  std::optional<JumpRateLaw> declared_marginal;
  std::optional<Scenario> scenario;

  std::size_t particles = 1000;
  std::uint64_t seed = 1;
  double horizon = 1.0;
  std::vector<double> checkpoints;

  LimitGrid limit;
  ConvergenceSettings convergence;
  VerifySettings verify;
  std::filesystem::path output = "out";

  /// Limit field of the model, or of the scenario's empirical rate law when
  /// only a scenario is given.
  LimitField field() const;
};

JumpRateLaw parse_law(const nlohmann::json& spec);
RunConfig parse_config(const nlohmann::json& document);
RunConfig load_config(const std::filesystem::path& path);

}  // namespace srp
