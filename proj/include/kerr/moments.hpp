#pragma once

// Quadrature and ladder moments. The production path is the truncated-matrix
// oracle (exact for any state with enough headroom); the closed forms below
// cover specific initial states and serve as independent cross-checks.

#include <cmath>
#include <complex>
#include <numbers>
#include <string>
#include <vector>

#include "kerr/errors.hpp"
#include "kerr/fock_state.hpp"
#include "kerr/kerr_evolution.hpp"
#include "kerr/parallel.hpp"
#include "kerr/time_series.hpp"

namespace kerr {

enum class Quadrature { x, p };

inline const char* quadrature_name(Quadrature q) { return q == Quadrature::x ? "x" : "p"; }

namespace detail {

// (a v)_n = sqrt(n+1) v_{n+1}
inline std::vector<complex> apply_annihilation(const std::vector<complex>& v) {
  std::vector<complex> out(v.size());
  for (std::size_t n = 0; n + 1 < v.size(); ++n) out[n] = std::sqrt(static_cast<double>(n + 1)) * v[n + 1];
  return out;
}

// x = (a + a^dag)/sqrt2, p = (a - a^dag)/(i sqrt2) on the truncated basis.
inline std::vector<complex> apply_quadrature(const std::vector<complex>& v, Quadrature q) {
  const std::size_t dim = v.size();
  std::vector<complex> out(dim);
  const double inv_sqrt2 = 1.0 / std::numbers::sqrt2;
  for (std::size_t n = 0; n < dim; ++n) {
    const complex lower = (n + 1 < dim) ? std::sqrt(static_cast<double>(n + 1)) * v[n + 1] : complex{};
    const complex raise = (n > 0) ? std::sqrt(static_cast<double>(n)) * v[n - 1] : complex{};
    out[n] = (q == Quadrature::x) ? (lower + raise) * inv_sqrt2 : complex{0.0, -1.0} * (lower - raise) * inv_sqrt2;
  }
  return out;
}

inline complex dot(const std::vector<complex>& a, const std::vector<complex>& b) {
  complex sum{};
  for (std::size_t n = 0; n < a.size(); ++n) sum += std::conj(a[n]) * b[n];
  return sum;
}

}  // namespace detail

/// <a^dag^r a^{r+s}> = <a^r psi | a^{r+s} psi>. Lowering never leaves the basis.
inline complex ladder_expectation_oracle(const FockState& s, int r, int shift) {
  if (r < 0 || shift < 0) throw std::invalid_argument("ladder_expectation_oracle: r, s must be >= 0");
  std::vector<complex> low(s.amplitudes().begin(), s.amplitudes().end());
  for (int i = 0; i < r; ++i) low = detail::apply_annihilation(low);
  std::vector<complex> high = low;
  for (int i = 0; i < shift; ++i) high = detail::apply_annihilation(high);
  return detail::dot(low, high);
}

/// <q^k> by k applications of the tridiagonal quadrature matrix. Requires k
/// empty levels above the highest occupied one so truncation cannot bias it.
inline complex quadrature_moment(const FockState& s, Quadrature q, int k) {
  if (k < 0) throw std::invalid_argument("quadrature_moment: k must be >= 0");
  const int top = s.highest_occupied();
  if (top + k > s.n_max())
    throw HeadroomError("quadrature_moment: power " + std::to_string(k) + " needs n_max >= " +
                        std::to_string(top + k) + " but n_max = " + std::to_string(s.n_max()) +
                        "; pad the state first");
  const std::vector<complex> psi(s.amplitudes().begin(), s.amplitudes().end());
  std::vector<complex> v = psi;
  for (int i = 0; i < k; ++i) v = detail::apply_quadrature(v, q);
  return detail::dot(psi, v);
}

inline double x_moment_oracle(const FockState& s, int k) { return quadrature_moment(s, Quadrature::x, k).real(); }
inline double p_moment_oracle(const FockState& s, int k) { return quadrature_moment(s, Quadrature::p, k).real(); }

// ---------------------------------------------------------------------------
// Closed forms

/// <a^dag^r a^{r+s}>(t) for an initial coherent state |alpha>:
///   alpha^s nu^r e^{-nu(1 - cos 2 s chi t)} exp[-i chi (s(s-1) + 2rs) t - i nu sin 2 s chi t].
inline complex ladder_expectation_coherent(complex alpha, int r, int s, double chi, double t) {
  const double nu = std::norm(alpha);
  const double w = 2.0 * s * chi * t;
  const double damping = std::exp(-nu * (1.0 - std::cos(w)));
  const double phase = -chi * (s * (s - 1.0) + 2.0 * r * s) * t - nu * std::sin(w);
  return std::pow(alpha, s) * std::pow(nu, r) * damping * std::polar(1.0, phase);
}

/// N_l^2 for |psi_l> = N_l sum_r |alpha e^{2 pi i r/l}>, from the Gram sum of
/// the l coherent components.
inline double superposition_norm_sq(int l, double nu) {
  double sum = 0.0;
  for (int q = 0; q < l; ++q) {
    const double a = 2.0 * std::numbers::pi * q / l;
    sum += std::exp(nu * (std::cos(a) - 1.0)) * std::cos(nu * std::sin(a));
  }
  return 1.0 / (l * sum);
}

/// <a^{lk}>(t) for initial |psi_l>:
///   l N_l^2 alpha^{lk} e^{-i chi lk(lk-1) t} sum_q exp[-nu + nu e^{i(2 pi q/l - 2 lk chi t)}].
inline complex a_pow_superposition(int l, double nu, double theta, double chi, double t, int k) {
  const int s = l * k;
  const complex alpha = std::polar(std::sqrt(nu), theta);
  complex branches{};
  for (int q = 0; q < l; ++q) {
    const double a = 2.0 * std::numbers::pi * q / l - 2.0 * s * chi * t;
    branches += std::exp(-nu + nu * complex{std::cos(a), std::sin(a)});
  }
  return l * superposition_norm_sq(l, nu) * std::pow(alpha, s) *
         std::polar(1.0, -chi * s * (s - 1.0) * t) * branches;
}

/// <a^{2k}>(t) for the even coherent state, two damping branches e^{-nu(1 -/+ cos 4k chi t)}.
inline complex a_pow_even_cs(double nu, double theta, double chi, double t, int k) {
  const double n2sq = superposition_norm_sq(2, nu);
  const complex alpha = std::polar(std::sqrt(nu), theta);
  const double u = 4.0 * k * chi * t;
  const double common = -2.0 * k * (2.0 * k - 1.0) * chi * t;
  const complex plus = std::exp(-nu * (1.0 - std::cos(u))) * std::polar(1.0, common - nu * std::sin(u));
  const complex minus = std::exp(-nu * (1.0 + std::cos(u))) * std::polar(1.0, common + nu * std::sin(u));
  return 2.0 * n2sq * std::pow(alpha, 2 * k) * (plus + minus);
}

/// <x^2>(t) for the even coherent state. The constant is <N> + 1/2 with
/// <N> = nu tanh(nu); the oscillating phases carry 2 theta.
inline double x2_even_cs(double nu, double chi, double t, double theta = default_theta) {
  const double n2sq = superposition_norm_sq(2, nu);
  const double c = std::cos(4.0 * chi * t);
  const double s4 = std::sin(4.0 * chi * t);
  const double w = 2.0 * chi * t;
  const double oscillating = std::exp(-nu * (1.0 - c)) * std::cos(w + nu * s4 - 2.0 * theta) +
                             std::exp(-nu * (1.0 + c)) * std::cos(w - nu * s4 - 2.0 * theta);
  return 2.0 * n2sq * nu * oscillating + nu * std::tanh(nu) + 0.5;
}

/// <a^{3k}>(t) for |psi_3>, three damping branches.
inline complex a_pow_psi3(double nu, double theta, double chi, double t, int k) {
  using std::numbers::pi;
  const double n3sq = superposition_norm_sq(3, nu);
  const complex alpha = std::polar(std::sqrt(nu), theta);
  const double u = 6.0 * k * chi * t;
  const double common = -3.0 * k * (3.0 * k - 1.0) * chi * t;
  const complex b0 = std::exp(-nu * (1.0 - std::cos(u))) * std::polar(1.0, common - nu * std::sin(u));
  const complex b1 =
      std::exp(-nu * (1.0 - std::sin(u - pi / 6))) * std::polar(1.0, common + nu * std::cos(u - pi / 6));
  const complex b2 =
      std::exp(-nu * (1.0 + std::sin(u + pi / 6))) * std::polar(1.0, common - nu * std::cos(u + pi / 6));
  return 3.0 * n3sq * std::pow(alpha, 3 * k) * (b0 + b1 + b2);
}

/// <x^3>(t) for |psi_3> = Re<a^3>/sqrt2 (the other normal-ordered terms vanish).
inline double x3_psi3(double nu, double chi, double t, double theta = default_theta) {
  using std::numbers::pi;
  const double n3sq = superposition_norm_sq(3, nu);
  const double u = 6.0 * chi * t;
  const double bracket =
      std::exp(-nu * (1.0 - std::cos(u))) * std::cos(u + nu * std::sin(u) - 3.0 * theta) +
      std::exp(-nu * (1.0 - std::sin(u - pi / 6))) * std::cos(u - nu * std::cos(u - pi / 6) - 3.0 * theta) +
      std::exp(-nu * (1.0 + std::sin(u + pi / 6))) * std::cos(u + nu * std::cos(u + pi / 6) - 3.0 * theta);
  return 3.0 * n3sq * std::pow(nu, 1.5) / std::numbers::sqrt2 * bracket;
}

// ---------------------------------------------------------------------------

/// <q^k>(t) over the grid for the initial state |psi_{l,h}>, via the oracle.
/// n_max <= 0 selects truncation_dim(nu); the state is padded by k levels.
inline MomentSeries moment_series(const SuperpositionSpec& spec, Quadrature q, int k, const KerrParams& params,
                                  const TimeGrid& grid, int n_max = 0, unsigned threads = 1) {
  if (k < 1) throw std::invalid_argument("moment_series: power must be >= 1");
  const int dim = n_max > 0 ? n_max : truncation_dim(spec.nu);
  const FockState initial = pad(superposed_state(spec, dim), k);
  MomentSeries out;
  out.grid = grid;
  out.values.resize(grid.size());
  out.observable = std::string(quadrature_name(q)) + "^" + std::to_string(k);
  out.metadata = {{"l", std::to_string(spec.l)},
                  {"h", std::to_string(spec.h)},
                  {"nu", format_double(spec.nu)},
                  {"theta", format_double(spec.theta)},
                  {"chi", format_double(params.chi)},
                  {"n_max", std::to_string(dim)}};
  parallel_for(grid.size(), threads, [&](std::size_t i) {
    out.values[i] = quadrature_moment(evolve_fraction(initial, grid[i]), q, k).real();
  });
  return out;
}

}  // namespace kerr
