#include "srp/config.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <utility>

namespace srp {

namespace {

using nlohmann::json;

[[noreturn]] void fail(const std::string& message) { throw ConfigError("config: " + message); }

double number(const json& node, const char* key) {
  if (!node.contains(key) || !node[key].is_number()) fail(std::string("'") + key + "' must be a number");
  return node[key].get<double>();
}

std::size_t count(const json& node, const char* key) {
  if (!node[key].is_number_integer() || node[key].get<std::int64_t>() < 0) {
    fail(std::string("'") + key + "' must be a non-negative integer");
  }
  return node[key].get<std::size_t>();
}

std::vector<double> numbers(const json& node, const char* key) {
  if (!node[key].is_array()) fail(std::string("'") + key + "' must be an array of numbers");
  std::vector<double> values;
  for (const json& v : node[key]) {
    if (!v.is_number()) fail(std::string("'") + key + "' must be an array of numbers");
    values.push_back(v.get<double>());
  }
  return values;
}

InitialProfile parse_profile(const json& model) {
  if (!model.contains("strata") || !model["strata"].is_array() || model["strata"].empty()) {
    fail("model.strata must be a non-empty array");
  }
  std::vector<Stratum> strata;
  for (const json& s : model["strata"]) {
    if (!s.contains("law")) fail("every stratum needs a 'law'");
    strata.push_back({number(s, "from"), number(s, "to"), parse_law(s["law"])});
  }
  return InitialProfile(std::move(strata));
}

Scenario parse_scenario(const json& node) {
  Scenario scenario;
  for (const json& p : node.at("positions")) {
    if (!p.is_number_integer() || p.get<std::int64_t>() < 1) fail("scenario positions are ranks >= 1");
    scenario.initial.positions.push_back(p.get<std::uint32_t>());
  }
  const std::size_t n = scenario.initial.positions.size();
  if (n == 0) fail("scenario needs at least one particle");
  std::vector<std::uint32_t> sorted = scenario.initial.positions;
  std::sort(sorted.begin(), sorted.end());
  for (std::size_t k = 0; k < n; ++k) {
    if (sorted[k] != k + 1) fail("scenario positions must be a permutation of 1..N");
  }
  scenario.initial.rates = node.contains("rates") ? numbers(node, "rates") : std::vector<double>(n, 1.0);
  if (scenario.initial.rates.size() != n) fail("scenario rates and positions differ in length");
  for (double w : scenario.initial.rates) {
    if (!(w > 0.0) || !std::isfinite(w)) fail("scenario rates must be finite and > 0");
  }
  if (node.contains("jumps")) {
    for (const json& j : node["jumps"]) {
      const double time = number(j, "time");
      if (!j.contains("particle") || !j["particle"].is_number_integer()) fail("jump particle must be an integer");
      const auto particle = j["particle"].get<std::int64_t>();
      if (particle < 1 || static_cast<std::size_t>(particle) > n) fail("jump particle out of range");
      scenario.jumps.push_back({time, static_cast<std::uint32_t>(particle - 1)});
    }
  }
  return scenario;
}

void parse_convergence(const json& node, ConvergenceSettings& settings) {
  if (node.contains("sizes")) {
    settings.sizes.clear();
    for (const json& v : node["sizes"]) {
      if (!v.is_number_integer() || v.get<std::int64_t>() < 1) fail("convergence sizes must be positive integers");
      settings.sizes.push_back(v.get<std::size_t>());
    }
  }
  if (node.contains("replicas")) settings.replicas = count(node, "replicas");
  if (node.contains("times")) settings.times = numbers(node, "times");
  if (node.contains("positions")) settings.positions = numbers(node, "positions");
  if (node.contains("exclusion")) settings.exclusion = number(node, "exclusion");
  if (node.contains("flow_points")) {
    settings.flow_points.clear();
    for (const json& p : node["flow_points"]) {
      if (!p.is_array() || p.size() != 2) fail("flow_points entries are [y, t]");
      settings.flow_points.emplace_back(p[0].get<double>(), p[1].get<double>());
    }
  }
  if (node.contains("tolerances")) {
    const json& tol = node["tolerances"];
    if (tol.contains("boundary")) settings.boundary_coefficient = number(tol, "boundary");
    if (tol.contains("statistic")) settings.statistic_coefficient = number(tol, "statistic");
    if (tol.contains("flow")) settings.flow_coefficient = number(tol, "flow");
    if (tol.contains("slope")) {
      const std::vector<double> band = numbers(tol, "slope");
      if (band.size() != 2) fail("tolerances.slope is [min, max]");
      settings.slope_min = band[0];
      settings.slope_max = band[1];
    }
  }
  if (node.contains("test_functions")) {
    std::map<std::string, TestFunction> known;
    for (TestFunction& f : standard_test_functions()) known.emplace(f.name, f);
    settings.test_functions.clear();
    for (const json& name : node["test_functions"]) {
      const auto it = known.find(name.get<std::string>());
      if (it == known.end()) fail("unknown test function '" + name.get<std::string>() + "'");
      settings.test_functions.push_back(it->second);
    }
  }
  if (node.contains("execution")) {
    const std::string mode = node["execution"].get<std::string>();
    if (mode == "serial") settings.execution = Execution::serial;
    else if (mode == "parallel") settings.execution = Execution::parallel;
    else fail("execution is 'serial' or 'parallel'");
  }
  try {
    validate(settings);
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
}

void parse_verify(const json& node, VerifySettings& settings) {
  if (node.contains("oracle_particles")) settings.oracle_particles = count(node, "oracle_particles");
  if (node.contains("oracle_seeds")) settings.oracle_seeds = count(node, "oracle_seeds");
  if (node.contains("oracle_horizon")) settings.oracle_horizon = number(node, "oracle_horizon");
  if (node.contains("oracle_checkpoints")) settings.oracle_checkpoints = count(node, "oracle_checkpoints");
  if (node.contains("conditional_particles")) {
    settings.conditional_particles = count(node, "conditional_particles");
  }
  if (node.contains("conditional_replicas")) {
    settings.conditional_replicas = count(node, "conditional_replicas");
  }
  if (settings.oracle_particles == 0 || settings.oracle_particles > 2000) {
    fail("verify.oracle_particles must lie in [1, 2000]");
  }
  if (settings.conditional_particles == 0 || settings.conditional_replicas == 0) {
    fail("verify needs at least one particle and one replica");
  }
}

}  // namespace

JumpRateLaw parse_law(const json& spec) {
  if (!spec.is_object()) fail("a law must be an object");
  try {
    if (spec.contains("atoms")) {
      std::vector<Atom> atoms;
      for (const json& a : spec["atoms"]) {
        if (!a.is_array() || a.size() != 2) fail("atoms are [rate, weight] pairs");
        atoms.push_back({a[0].get<double>(), a[1].get<double>()});
      }
      return JumpRateLaw::discrete(std::move(atoms));
    }
    if (spec.contains("gamma")) {
      return JumpRateLaw::gamma(number(spec["gamma"], "alpha"), number(spec["gamma"], "beta"));
    }
    if (spec.contains("mixture")) {
      std::vector<std::pair<double, JumpRateLaw>> parts;
      for (const json& part : spec["mixture"]) parts.emplace_back(number(part, "weight"), parse_law(part.at("law")));
      return JumpRateLaw::mixture(parts);
    }
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  } catch (const json::exception& e) {
    throw ConfigError(std::string("config: malformed law: ") + e.what());
  }
  fail("a law needs 'atoms', 'gamma' or 'mixture'");
}

RunConfig parse_config(const json& document) {
  if (!document.is_object()) fail("top level must be an object");
  RunConfig config;
  try {
    if (document.contains("name")) config.name = document["name"].get<std::string>();
    if (document.contains("model")) {
      const json& model = document["model"];
      config.profile = parse_profile(model);
      if (model.contains("marginal")) config.declared_marginal = parse_law(model["marginal"]);
    }
    if (document.contains("scenario")) config.scenario = parse_scenario(document["scenario"]);
    if (!config.profile && !config.scenario) fail("either 'model' or 'scenario' is required");

    if (config.scenario) {
      config.particles = config.scenario->initial.size();
    } else if (document.contains("particles")) {
      config.particles = count(document, "particles");
    }
    if (config.particles == 0) fail("particles must be >= 1");
    if (document.contains("seed")) {
      if (!document["seed"].is_number_unsigned()) fail("seed must be an unsigned integer");
      config.seed = document["seed"].get<std::uint64_t>();
    }
    if (document.contains("horizon")) config.horizon = number(document, "horizon");
    if (!(config.horizon >= 0.0) || !std::isfinite(config.horizon)) fail("horizon must be finite and >= 0");
    if (document.contains("checkpoints")) {
      config.checkpoints = numbers(document, "checkpoints");
    } else {
      for (int k = 0; k <= 10; ++k) config.checkpoints.push_back(config.horizon * k / 10.0);
    }
    if (!std::is_sorted(config.checkpoints.begin(), config.checkpoints.end())) fail("checkpoints must be sorted");
    for (double t : config.checkpoints) {
      if (!(t >= 0.0 && t <= config.horizon)) fail("checkpoints must lie in [0, horizon]");
    }

    if (document.contains("limit")) {
      const json& limit = document["limit"];
      if (limit.contains("y")) config.limit.positions = numbers(limit, "y");
      if (limit.contains("t")) config.limit.times = numbers(limit, "t");
      for (double y : config.limit.positions) {
        if (!(y > 0.0 && y < 1.0)) fail("limit.y must lie in (0, 1)");
      }
      for (double t : config.limit.times) {
        if (!(t >= 0.0) || !std::isfinite(t)) fail("limit.t must be finite and >= 0");
      }
    }
    config.convergence.seed = config.seed;
    if (document.contains("convergence")) parse_convergence(document["convergence"], config.convergence);
    config.verify.seed = config.seed;
    if (document.contains("verify")) parse_verify(document["verify"], config.verify);
    if (document.contains("output")) config.output = document["output"].get<std::string>();

    if (config.declared_marginal && config.profile) {
      LimitField check(*config.profile, *config.declared_marginal);
    }
  } catch (const json::exception& e) {
    throw ConfigError(std::string("config: ") + e.what());
  } catch (const std::invalid_argument& e) {
    throw ConfigError(std::string("config: ") + e.what());
  }
  return config;
}

RunConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file " + path.string());
  json document;
  try {
    in >> document;
  } catch (const json::parse_error& e) {
    throw ConfigError(path.string() + ": " + e.what());
  }
  return parse_config(document);
}

LimitField RunConfig::field() const {
  if (profile) {
    return declared_marginal ? LimitField(*profile, *declared_marginal) : LimitField(*profile);
  }
  std::map<double, double> weights;
  const double share = 1.0 / static_cast<double>(scenario->initial.size());
  for (double w : scenario->initial.rates) weights[w] += share;
  std::vector<Atom> atoms;
  for (const auto& [rate, weight] : weights) atoms.push_back({rate, weight});
  return LimitField(InitialProfile::factorized(JumpRateLaw::discrete(std::move(atoms))));
}

}  // namespace srp
