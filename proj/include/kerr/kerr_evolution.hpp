#pragma once

// Exact evolution under H = hbar chi N(N-1). The propagator is diagonal in
// the number basis, so evolution is a phase per level.

#include <array>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "kerr/fock_state.hpp"
#include "kerr/parallel.hpp"
#include "kerr/time_series.hpp"

namespace kerr {

struct KerrParams {
  double chi = 1.0;

  KerrParams() = default;
  explicit KerrParams(double chi_) : chi(chi_) {
    if (!(chi > 0.0) || !std::isfinite(chi)) throw std::invalid_argument("KerrParams: chi must be positive");
  }

  double revival_time() const { return std::numbers::pi / chi; }
  double time_at(double fraction) const { return fraction * revival_time(); }
};

/// Evolves by t / T_rev = fraction. The phase chi n(n-1) t = 2 pi fraction m,
/// m = n(n-1)/2, is reduced modulo 2 pi in long double before use.
inline FockState evolve_fraction(const FockState& s, long double fraction) {
  std::vector<complex> amps(s.amplitudes().begin(), s.amplitudes().end());
  for (int n = 2; n <= s.n_max(); ++n) {
    const long long m = static_cast<long long>(n) * (n - 1) / 2;
    long double turns = fraction * static_cast<long double>(m);
    turns -= std::floor(turns);
    const double angle = static_cast<double>(-2.0L * std::numbers::pi_v<long double> * turns);
    amps[static_cast<std::size_t>(n)] *= std::polar(1.0, angle);
  }
  return FockState(std::move(amps));
}

inline FockState evolve(const FockState& s, const KerrParams& params, double t) {
  const long double fraction =
      static_cast<long double>(params.chi) * static_cast<long double>(t) / std::numbers::pi_v<long double>;
  return evolve_fraction(s, fraction);
}

/// Functor form of evolve; validation code is parameterized on it.
struct KerrEvolver {
  FockState operator()(const FockState& s, const KerrParams& params, double t) const {
    return evolve(s, params, t);
  }
};

/// A(t) = |<psi(0)|psi(t)>|^2 over the grid.
inline TimeSeries autocorrelation(const FockState& s0, const KerrParams& params, const TimeGrid& grid,
                                  unsigned threads = 1) {
  TimeSeries out{grid, std::vector<double>(grid.size()), "autocorrelation", {}};
  parallel_for(grid.size(), threads, [&](std::size_t i) {
    out.values[i] = fidelity(s0, evolve(s0, params, params.time_at(grid[i])));
  });
  return out;
}

/// Fractional-revival instants for which an explicit coherent-state
/// decomposition is known.
enum class AnalyticCase {
  coherent_quarter,       // l=1, T/4: four coherent states
  even_quarter,           // l=2, T/4: rotated even cat
  even_half,              // l=2, T/2
  even_three_quarter,     // l=2, 3T/4
  even_eighth,            // l=2, T/8: two even cats
  psi3_ninth,             // l=3, T/9: rotated |psi_3>
  psi3_eighteenth,        // l=3, T/18: two copies of |psi_3>
  psi4_thirty_second,     // l=4, T/32: two copies of |psi_4>
};

struct AnalyticCaseInfo {
  AnalyticCase which;
  std::string_view name;
  int l;
  int numerator;
  int denominator;

  double fraction() const { return static_cast<double>(numerator) / denominator; }
};

inline constexpr std::array<AnalyticCaseInfo, 8> analytic_cases{{
    {AnalyticCase::coherent_quarter, "cs_t4", 1, 1, 4},
    {AnalyticCase::even_quarter, "ecs_t4", 2, 1, 4},
    {AnalyticCase::even_half, "ecs_t2", 2, 1, 2},
    {AnalyticCase::even_three_quarter, "ecs_3t4", 2, 3, 4},
    {AnalyticCase::even_eighth, "ecs_t8", 2, 1, 8},
    {AnalyticCase::psi3_ninth, "psi3_t9", 3, 1, 9},
    {AnalyticCase::psi3_eighteenth, "psi3_t18", 3, 1, 18},
    {AnalyticCase::psi4_thirty_second, "psi4_t32", 4, 1, 32},
}};

inline const AnalyticCaseInfo& case_info(AnalyticCase c) {
  for (const auto& info : analytic_cases)
    if (info.which == c) return info;
  throw std::invalid_argument("unknown analytic case");
}

inline AnalyticCase analytic_case_from_name(std::string_view name) {
  for (const auto& info : analytic_cases)
    if (info.name == name) return info.which;
  throw std::invalid_argument("unknown analytic case '" + std::string(name) + "'");
}

/// Coherent components (weight, angle relative to alpha) of the state reached
/// at the given instant.
inline std::vector<CoherentComponent> analytic_components(AnalyticCase c) {
  using std::numbers::pi;
  const complex c1{0.5, -0.5};  // (1 - i)/2
  const complex c2{0.5, 0.5};   // (1 + i)/2
  const double r8 = 1.0 / std::sqrt(8.0);
  auto cat = [](complex w, double angle) {
    return std::vector<CoherentComponent>{{w, angle}, {w, angle + pi}};
  };
  auto ring = [](complex w, std::initializer_list<double> angles) {
    std::vector<CoherentComponent> out;
    for (double a : angles) out.push_back({w, a});
    return out;
  };
  auto join = [](std::vector<CoherentComponent> a, const std::vector<CoherentComponent>& b) {
    a.insert(a.end(), b.begin(), b.end());
    return a;
  };
  switch (c) {
    case AnalyticCase::coherent_quarter:
      return {{complex{1.0, -1.0} * r8, pi / 4},
              {std::sqrt(2.0) * r8, -pi / 4},
              {-complex{1.0, -1.0} * r8, -3 * pi / 4},
              {std::sqrt(2.0) * r8, 3 * pi / 4}};
    case AnalyticCase::even_quarter:
      return cat(1.0, -pi / 4);
    case AnalyticCase::even_half:
      return cat(1.0, pi / 2);
    case AnalyticCase::even_three_quarter:
      return cat(1.0, pi / 4);
    case AnalyticCase::even_eighth:
      return join(cat(c1, pi / 8), cat(c2, -3 * pi / 8));
    case AnalyticCase::psi3_ninth:
      return ring(1.0, {-8 * pi / 9, -2 * pi / 9, 4 * pi / 9});
    case AnalyticCase::psi3_eighteenth:
      // The three members of each copy are 2pi/3 apart.
      return join(ring(c1, {-11 * pi / 18, pi / 18, 13 * pi / 18}),
                  ring(c2, {-17 * pi / 18, -5 * pi / 18, 7 * pi / 18}));
    case AnalyticCase::psi4_thirty_second:
      return join(ring(c1, {-31 * pi / 32, -15 * pi / 32, pi / 32, 17 * pi / 32}),
                  ring(c2, {-23 * pi / 32, -7 * pi / 32, 9 * pi / 32, 25 * pi / 32}));
  }
  throw std::invalid_argument("unknown analytic case");
}

/// Normalized Fock representation of the explicit superposition reached from
/// |psi_l> (spec.l must match the case) at the case's instant.
inline FockState analytic_state_at(const SuperpositionSpec& spec, AnalyticCase c, int n_max) {
  spec.validate();
  const auto& info = case_info(c);
  if (spec.l != info.l || spec.h != 0)
    throw std::invalid_argument("analytic_state_at: case " + std::string(info.name) + " needs l=" +
                                std::to_string(info.l) + ", h=0");
  const auto comps = analytic_components(c);
  return coherent_superposition(spec.nu, spec.theta, n_max, comps);
}

}  // namespace kerr
