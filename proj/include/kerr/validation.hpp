#pragma once

// Cross-module invariant suite behind `kerr_revival validate`. Parameterized
// on the evolution functor so tests can inject broken propagators.

#include <algorithm>
#include <cmath>
#include <exception>
#include <functional>
#include <limits>
#include <numbers>
#include <ostream>
#include <random>
#include <string>
#include <vector>

#include "kerr/entropy.hpp"
#include "kerr/fock_state.hpp"
#include "kerr/kerr_evolution.hpp"
#include "kerr/moments.hpp"
#include "kerr/revival_schedule.hpp"
#include "kerr/wigner.hpp"

namespace kerr {

struct CheckResult {
  std::string module;
  std::string invariant;
  double observed = 0.0;
  double tolerance = 0.0;
  bool passed = false;
  std::string detail;
};

struct ValidationReport {
  std::vector<CheckResult> checks;

  bool all_passed() const {
    for (const auto& c : checks)
      if (!c.passed) return false;
    return !checks.empty();
  }
  const CheckResult* find(const std::string& invariant) const {
    for (const auto& c : checks)
      if (c.invariant == invariant) return &c;
    return nullptr;
  }
};

inline void print_report(std::ostream& out, const ValidationReport& r) {
  for (const auto& c : r.checks) {
    out << (c.passed ? "PASS " : "FAIL ") << c.module << '/' << c.invariant << "  observed=" << format_double(c.observed)
        << "  tolerance=" << format_double(c.tolerance);
    if (!c.detail.empty()) out << "  (" << c.detail << ')';
    out << '\n';
  }
}

struct ValidationOptions {
  /// Forces every state onto this truncation when > 0.
  int n_max = 0;
  unsigned threads = 1;
};

namespace detail {

/// Runs `body`, which returns the observed figure of merit; passes when it is
/// <= tol. Exceptions become failures carrying their message.
inline CheckResult run_check(std::string module, std::string invariant, double tol,
                             const std::function<double(std::string&)>& body) {
  CheckResult c{std::move(module), std::move(invariant), 0.0, tol, false, {}};
  try {
    c.observed = body(c.detail);
    c.passed = c.observed <= tol;
  } catch (const std::exception& e) {
    c.observed = std::numeric_limits<double>::infinity();
    c.detail = e.what();
  }
  return c;
}

inline double rel_error(complex got, complex want, double scale) {
  return std::abs(got - want) / std::max(std::abs(want), scale);
}

}  // namespace detail

template <class Evolver = KerrEvolver>
ValidationReport run_validation(const Evolver& evolve_fn = {}, const ValidationOptions& opt = {}) {
  ValidationReport report;
  auto dim_for = [&](double nu) { return opt.n_max > 0 ? opt.n_max : truncation_dim(nu); };
  const KerrParams params{1.0};

  struct StateCase {
    int l;
    double nu;
  };
  const std::vector<StateCase> revival_states = {{1, 20}, {1, 100}, {2, 20}, {2, 30}, {2, 100},
                                                 {3, 20}, {3, 30},  {3, 100}, {4, 20}, {4, 30}, {4, 100}};

  report.checks.push_back(detail::run_check("fock_state", "truncation_tail", default_truncation_epsilon, [&](std::string& d) {
    double worst = 0.0;
    for (auto sc : revival_states) {
      auto amps = coherent_amplitudes(sc.nu, default_theta, dim_for(sc.nu));
      const double tail = FockState(normalized(std::move(amps))).tail_mass();
      if (tail > worst) {
        worst = tail;
        d = "nu=" + format_double(sc.nu) + " n_max=" + std::to_string(dim_for(sc.nu)) +
            (tail >= default_truncation_epsilon ? "; raise n_max to at least " + std::to_string(truncation_dim(sc.nu))
                                                : "");
      }
    }
    return worst;
  }));

  report.checks.push_back(detail::run_check("fock_state", "constructions_agree", 1e-12, [&](std::string&) {
    double worst = 0.0;
    for (int l = 1; l <= 4; ++l)
      for (int h = 0; h < l; ++h) {
        const SuperpositionSpec spec{l, h, 20.0, default_theta};
        const int dim = dim_for(spec.nu);
        worst = std::max(worst, 1.0 - fidelity(superposed_state(spec, dim), superposed_state_coherent_sum(spec, dim)));
      }
    return worst;
  }));

  report.checks.push_back(detail::run_check("kerr_evolution", "exact_revival", 1e-12, [&](std::string& d) {
    double worst = 0.0;
    for (auto sc : revival_states) {
      const auto s0 = superposed_state({sc.l, 0, sc.nu, default_theta}, dim_for(sc.nu));
      const double loss = 1.0 - fidelity(s0, evolve_fn(s0, params, params.revival_time()));
      if (loss > worst) {
        worst = loss;
        d = "worst l=" + std::to_string(sc.l) + " nu=" + format_double(sc.nu);
      }
    }
    return worst;
  }));

  report.checks.push_back(detail::run_check("kerr_evolution", "analytic_states", 1e-10, [&](std::string& d) {
    double worst = 0.0;
    for (const auto& info : analytic_cases) {
      const SuperpositionSpec spec{info.l, 0, 20.0, default_theta};
      const int dim = dim_for(spec.nu);
      const auto evolved = evolve_fn(superposed_state(spec, dim), params, params.time_at(info.fraction()));
      const double loss = 1.0 - fidelity(evolved, analytic_state_at(spec, info.which, dim));
      if (loss > worst) {
        worst = loss;
        d = "worst " + std::string(info.name);
      }
    }
    return worst;
  }));

  report.checks.push_back(detail::run_check("moments", "closed_forms_vs_oracle", 1e-9, [&](std::string& d) {
    std::mt19937_64 rng(20240611);
    std::uniform_real_distribution<double> frac(0.0, 1.0);
    const double nu = 20.0;
    const complex alpha = std::polar(std::sqrt(nu), default_theta);
    double worst = 0.0;
    auto note = [&](double e, const char* what) {
      if (e > worst) {
        worst = e;
        d = std::string("worst ") + what;
      }
    };
    const auto cs = coherent_state(nu, default_theta, dim_for(nu));
    const auto even = superposed_state({2, 0, nu, default_theta}, dim_for(nu));
    const auto psi3 = superposed_state({3, 0, nu, default_theta}, dim_for(nu));
    for (int sample = 0; sample < 10; ++sample) {
      const double t = params.time_at(frac(rng));
      const auto cs_t = pad(evolve_fn(cs, params, t), 6);
      const auto even_t = pad(evolve_fn(even, params, t), 6);
      const auto psi3_t = pad(evolve_fn(psi3, params, t), 6);
      for (int r = 0; r <= 2; ++r)
        for (int s = 1; s <= 4; ++s)
          note(detail::rel_error(ladder_expectation_oracle(cs_t, r, s), ladder_expectation_coherent(alpha, r, s, 1.0, t),
                                 std::pow(nu, r + 0.5 * s)),
               "coherent ladder moment");
      note(std::abs(x_moment_oracle(even_t, 2) - x2_even_cs(nu, 1.0, t)) / (nu + 0.5), "even-state <x^2>");
      note(detail::rel_error(ladder_expectation_oracle(even_t, 0, 4), a_pow_even_cs(nu, default_theta, 1.0, t, 2),
                             nu * nu),
           "even-state <a^4>");
      note(detail::rel_error(ladder_expectation_oracle(psi3_t, 0, 3), a_pow_psi3(nu, default_theta, 1.0, t, 1),
                             std::pow(nu, 1.5)),
           "psi3 <a^3>");
      note(std::abs(x_moment_oracle(psi3_t, 3) - x3_psi3(nu, 1.0, t)) / std::pow(nu, 1.5), "psi3 <x^3>");
    }
    return worst;
  }));

  report.checks.push_back(detail::run_check("moments", "parity_selection", 1e-10, [&](std::string&) {
    const auto even = superposed_state({2, 0, 30.0, default_theta}, dim_for(30.0));
    const auto padded = pad(even, 5);
    double worst = 0.0;
    for (double f : {0.0, 0.1, 0.125, 0.3, 0.5})
      for (int m : {1, 3, 5})
        worst = std::max(worst, std::abs(x_moment_oracle(evolve_fn(padded, params, params.time_at(f)), m)));
    return worst;
  }));

  report.checks.push_back(detail::run_check("entropy", "vacuum_saturates_bound", 1e-6, [&](std::string&) {
    const auto vac = coherent_state(0.0, 0.0, std::max(dim_for(0.0), tail_window + 1));
    return std::abs(renyi_uncertainty_sum(vac, RenyiPair{}) - renyi_bound(RenyiPair{}));
  }));

  report.checks.push_back(detail::run_check("entropy", "bound_holds", 1e-6, [&](std::string& d) {
    double worst = -1e300;
    for (const RenyiPair pair : {RenyiPair{}, RenyiPair{1.0, 1.0}, RenyiPair::from_zeta(0.75)}) {
      const auto s0 = superposed_state({3, 0, 30.0, default_theta}, dim_for(30.0));
      const EntropyEvaluator eval(s0.n_max(), default_entropy_grid(s0.mean_photon_number()));
      for (double f : {0.0, 1.0 / 18, 0.2, 1.0 / 3}) {
        const double deficit = renyi_bound(pair) - eval(evolve_fn(s0, params, params.time_at(f)), pair);
        if (deficit > worst) {
          worst = deficit;
          d = "largest bound - value at zeta=" + format_double(pair.zeta);
        }
      }
    }
    return std::max(worst, 0.0);
  }));

  report.checks.push_back(detail::run_check("wigner", "normalization", 1e-3, [&](std::string&) {
    const auto cs = coherent_state(10.0, default_theta, dim_for(10.0));
    const auto f = wigner_field(evolve_fn(cs, params, params.time_at(0.25)), default_wigner_grid(10.0, 121), opt.threads);
    return std::abs(wigner_integral(f) - 1.0);
  }));

  report.checks.push_back(detail::run_check("revival_schedule", "coherent_x4_bursts", 0.0, [&](std::string& d) {
    const auto grid = TimeGrid::uniform(0.0, 1.0, 2001);
    const auto s0 = pad(coherent_state(100.0, default_theta, dim_for(100.0)), 4);
    TimeSeries series{grid, std::vector<double>(grid.size()), "x^4", {}};
    parallel_for(grid.size(), opt.threads, [&](std::size_t i) {
      series.values[i] = x_moment_oracle(evolve_fn(s0, params, params.time_at(grid[i])), 4);
    });
    const auto report_ = match_report(detect_bursts(series), events_at({{1, 4}, {1, 2}, {3, 4}}), 1e-3);
    d = std::to_string(report_.misses.size()) + " misses, " + std::to_string(report_.spurious.size()) + " spurious";
    return static_cast<double>(report_.misses.size() + report_.spurious.size());
  }));

  return report;
}

}  // namespace kerr
