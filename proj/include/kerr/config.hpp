#pragma once

#include <cmath>
#include <fstream>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"
#include "kerr/entropy.hpp"
#include "kerr/errors.hpp"
#include "kerr/fock_state.hpp"
#include "kerr/moments.hpp"

namespace kerr {

/// Flat JSON object, e.g.
///   {"l": 5, "nu": 50, "moments": [10], "output_dir": "out"}
/// Times are fractions of the revival time.
struct ExperimentConfig {
  SuperpositionSpec initial{1, 0, 20.0, default_theta};
  double chi = 1.0;
  double t_start = 0.0;
  double t_end = 1.0;
  int grid_points = 2001;
  Quadrature quadrature = Quadrature::x;
  std::vector<int> moments;
  bool entropy = false;
  RenyiPair pair{};
  std::vector<double> wigner_times;
  int wigner_points = 401;
  std::string output_dir = ".";
  std::string name = "custom";
  int n_max = 0;

  bool has_observables() const { return !moments.empty() || entropy || !wigner_times.empty(); }

  void validate() const {
    auto fail = [](const std::string& field, const std::string& why) { throw ConfigError(field + ": " + why); };
    if (initial.l < 1) fail("l", "must be >= 1");
    if (initial.h < 0 || initial.h >= initial.l) fail("h", "must satisfy 0 <= h < l");
    if (!(initial.nu >= 0.0) || !std::isfinite(initial.nu)) fail("nu", "must be a finite nonnegative number");
    if (!std::isfinite(initial.theta)) fail("theta", "must be finite");
    if (!(chi > 0.0) || !std::isfinite(chi)) fail("chi", "must be positive");
    if (!(t_start >= 0.0 && t_start <= 1.0)) fail("t_start", "must lie in [0, 1]");
    if (!(t_end > t_start && t_end <= 1.0)) fail("t_end", "must lie in (t_start, 1]");
    if (grid_points < 2) fail("grid_points", "must be >= 2");
    for (int m : moments)
      if (m < 1) fail("moments", "powers must be >= 1");
    if (entropy) {
      if (!(pair.zeta > 0.0) || !(pair.eta > 0.0)) fail("zeta/eta", "orders must be positive");
      if (std::abs(1.0 / pair.zeta + 1.0 / pair.eta - 2.0) > 1e-12) fail("zeta/eta", "must satisfy 1/zeta + 1/eta = 2");
    }
    for (double t : wigner_times)
      if (!(t >= 0.0 && t <= 1.0)) fail("wigner_times", "entries must lie in [0, 1]");
    if (wigner_points < 2) fail("wigner_points", "must be >= 2");
    if (output_dir.empty()) fail("output_dir", "must not be empty");
    if (name.empty()) fail("name", "must not be empty");
    if (n_max < 0) fail("n_max", "must be >= 0 (0 selects automatically)");
    if (!has_observables()) fail("moments/entropy/wigner_times", "observable list is empty; request at least one");
  }
};

namespace detail {

template <class T>
T get_field(const nlohmann::json& j, const char* key, const char* type) {
  try {
    return j.at(key).get<T>();
  } catch (const nlohmann::json::exception&) {
    throw ConfigError(std::string(key) + ": expected " + type);
  }
}

}  // namespace detail

inline ExperimentConfig parse_config(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw ConfigError(std::string("syntax: ") + e.what());
  }
  if (!j.is_object()) throw ConfigError("config: top level must be a JSON object");

  static const std::set<std::string> known = {"l", "h", "nu", "theta", "chi", "t_start", "t_end", "grid_points",
                                              "quadrature", "moments", "entropy", "zeta", "eta", "wigner_times",
                                              "wigner_points", "output_dir", "name", "n_max"};
  for (const auto& item : j.items())
    if (!known.count(item.key())) throw ConfigError(item.key() + ": unknown field");

  ExperimentConfig c;
  if (j.contains("l")) c.initial.l = detail::get_field<int>(j, "l", "an integer");
  if (j.contains("h")) c.initial.h = detail::get_field<int>(j, "h", "an integer");
  if (j.contains("nu")) c.initial.nu = detail::get_field<double>(j, "nu", "a number");
  if (j.contains("theta")) c.initial.theta = detail::get_field<double>(j, "theta", "a number");
  if (j.contains("chi")) c.chi = detail::get_field<double>(j, "chi", "a number");
  if (j.contains("t_start")) c.t_start = detail::get_field<double>(j, "t_start", "a number");
  if (j.contains("t_end")) c.t_end = detail::get_field<double>(j, "t_end", "a number");
  if (j.contains("grid_points")) c.grid_points = detail::get_field<int>(j, "grid_points", "an integer");
  if (j.contains("quadrature")) {
    const auto q = detail::get_field<std::string>(j, "quadrature", "\"x\" or \"p\"");
    if (q == "x")
      c.quadrature = Quadrature::x;
    else if (q == "p")
      c.quadrature = Quadrature::p;
    else
      throw ConfigError("quadrature: expected \"x\" or \"p\"");
  }
  if (j.contains("moments")) c.moments = detail::get_field<std::vector<int>>(j, "moments", "a list of integers");
  if (j.contains("entropy")) c.entropy = detail::get_field<bool>(j, "entropy", "true or false");
  if (j.contains("zeta")) c.pair.zeta = detail::get_field<double>(j, "zeta", "a number");
  if (j.contains("eta")) c.pair.eta = detail::get_field<double>(j, "eta", "a number");
  if (j.contains("zeta") && !j.contains("eta")) c.pair = RenyiPair{c.pair.zeta, c.pair.zeta / (2.0 * c.pair.zeta - 1.0)};
  if (j.contains("wigner_times"))
    c.wigner_times = detail::get_field<std::vector<double>>(j, "wigner_times", "a list of numbers");
  if (j.contains("wigner_points")) c.wigner_points = detail::get_field<int>(j, "wigner_points", "an integer");
  if (j.contains("output_dir")) c.output_dir = detail::get_field<std::string>(j, "output_dir", "a string");
  if (j.contains("name")) c.name = detail::get_field<std::string>(j, "name", "a string");
  if (j.contains("n_max")) c.n_max = detail::get_field<int>(j, "n_max", "an integer");
  c.validate();
  return c;
}

inline ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError(path + ": cannot open config file");
  std::stringstream ss;
  ss << in.rdbuf();
  try {
    return parse_config(ss.str());
  } catch (const ConfigError& e) {
    throw ConfigError(path + ": " + e.what());
  }
}

}  // namespace kerr
