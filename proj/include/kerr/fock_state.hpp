#pragma once

// Truncated Fock-space states: coherent states, l-fold coherent-state
// superpositions and the small set of operations the rest of the library
// builds on (overlap, rotation, padding, text serialization).

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdio>
#include <istream>
#include <numbers>
#include <ostream>
#include <span>
#include <sstream>
#include <string>
#include <vector>

#include "kerr/errors.hpp"

namespace kerr {

using complex = std::complex<double>;

inline constexpr double default_theta = std::numbers::pi / 4.0;
inline constexpr double default_truncation_epsilon = 1e-12;
/// Number of top basis states whose mass must stay below the truncation epsilon.
inline constexpr int tail_window = 10;

/// Amplitudes c_n, n = 0..n_max, of a pure state in the truncated number basis.
class FockState {
 public:
  FockState() = default;
  explicit FockState(std::vector<complex> amplitudes) : amps_(std::move(amplitudes)) {
    if (amps_.empty()) throw std::invalid_argument("FockState needs at least one amplitude");
  }

  int n_max() const { return static_cast<int>(amps_.size()) - 1; }
  std::size_t dimension() const { return amps_.size(); }
  std::span<const complex> amplitudes() const { return amps_; }
  complex operator[](int n) const { return amps_[static_cast<std::size_t>(n)]; }

  double norm_squared() const {
    double sum = 0.0;
    for (const auto& c : amps_) sum += std::norm(c);
    return sum;
  }

  /// Probability mass in the top `width` basis states.
  double tail_mass(int width = tail_window) const {
    double sum = 0.0;
    const int first = std::max(0, n_max() - width + 1);
    for (int n = first; n <= n_max(); ++n) sum += std::norm(amps_[static_cast<std::size_t>(n)]);
    return sum;
  }

  /// Largest index carrying a nonzero amplitude (-1 for the zero vector).
  int highest_occupied() const {
    for (int n = n_max(); n >= 0; --n)
      if (amps_[static_cast<std::size_t>(n)] != complex{}) return n;
    return -1;
  }

  double mean_photon_number() const {
    double sum = 0.0;
    for (int n = 0; n <= n_max(); ++n) sum += n * std::norm(amps_[static_cast<std::size_t>(n)]);
    return sum;
  }

 private:
  std::vector<complex> amps_;
};

/// Rescales to unit norm. Throws on the zero vector.
inline FockState normalized(std::vector<complex> amps) {
  double sum = 0.0;
  for (const auto& c : amps) sum += std::norm(c);
  if (!(sum > 0.0)) throw std::invalid_argument("cannot normalize the zero vector");
  const double scale = 1.0 / std::sqrt(sum);
  for (auto& c : amps) c *= scale;
  return FockState(std::move(amps));
}

/// Poisson tail  sum_{n >= first} e^{-nu} nu^n / n!.
inline double poisson_tail(double nu, int first) {
  if (first <= 0) return 1.0;
  if (nu <= 0.0) return 0.0;
  double sum = 0.0;
  const double log_nu = std::log(nu);
  for (int n = first;; ++n) {
    const double term = std::exp(-nu + n * log_nu - std::lgamma(n + 1.0));
    sum += term;
    if (n > nu && term < 1e-30 * sum) break;
    if (n > nu + 10000) break;
  }
  return sum;
}

/// Truncation dimension for mean photon number nu: the Poisson mass above
/// n_max - tail_window stays below epsilon.
inline int truncation_dim(double nu, double epsilon = default_truncation_epsilon) {
  if (nu < 0.0) throw std::invalid_argument("truncation_dim: nu must be nonnegative");
  if (!(epsilon > 0.0 && epsilon < 1.0)) throw std::invalid_argument("truncation_dim: epsilon must lie in (0,1)");
  int n_max = static_cast<int>(std::ceil(nu + 12.0 * std::sqrt(nu + 1.0) + 20.0));
  while (poisson_tail(nu, n_max - tail_window + 1) >= epsilon) ++n_max;
  return n_max;
}

inline void require_truncation_adequate(const FockState& s, double epsilon, const std::string& what) {
  const double tail = s.tail_mass();
  if (!(tail < epsilon)) {
    std::ostringstream msg;
    msg << what << ": truncation at n_max=" << s.n_max() << " leaves tail mass " << tail
        << " in the top " << tail_window << " levels (limit " << epsilon
        << "); raise n_max (truncation_dim gives a safe value)";
    throw TruncationError(msg.str());
  }
}

/// Unnormalized coherent amplitudes e^{-|a|^2/2} a^n / sqrt(n!), evaluated in log space.
inline std::vector<complex> coherent_amplitudes(double nu, double phase, int n_max) {
  if (n_max < 0) throw std::invalid_argument("n_max must be nonnegative");
  std::vector<complex> amps(static_cast<std::size_t>(n_max) + 1);
  if (nu == 0.0) {
    amps[0] = 1.0;
    return amps;
  }
  const double log_nu = std::log(nu);
  for (int n = 0; n <= n_max; ++n) {
    const double log_mag = -0.5 * nu + 0.5 * n * log_nu - 0.5 * std::lgamma(n + 1.0);
    amps[static_cast<std::size_t>(n)] = std::polar(std::exp(log_mag), n * phase);
  }
  return amps;
}

/// |alpha>, alpha = sqrt(nu) e^{i theta}, renormalized over the truncated basis.
inline FockState coherent_state(double nu, double theta, int n_max) {
  if (nu < 0.0) throw std::invalid_argument("coherent_state: nu must be nonnegative");
  auto s = normalized(coherent_amplitudes(nu, theta, n_max));
  require_truncation_adequate(s, default_truncation_epsilon, "coherent_state");
  return s;
}

/// Initial superposition |psi_{l,h}>: l coherent states on a circle, with
/// progression offset h. alpha = sqrt(nu) e^{i theta}.
struct SuperpositionSpec {
  int l = 1;
  int h = 0;
  double nu = 0.0;
  double theta = default_theta;

  complex alpha() const { return std::polar(std::sqrt(nu), theta); }

  void validate() const {
    if (l < 1) throw std::invalid_argument("SuperpositionSpec: l must be >= 1");
    if (h < 0 || h >= l) throw std::invalid_argument("SuperpositionSpec: h must satisfy 0 <= h < l");
    if (!(nu >= 0.0)) throw std::invalid_argument("SuperpositionSpec: nu must be nonnegative");
    if (!std::isfinite(theta)) throw std::invalid_argument("SuperpositionSpec: theta must be finite");
  }
};

/// Arithmetic-progression construction: c_m ~ alpha^m / sqrt(m!) for m = h (mod l).
inline FockState superposed_state(const SuperpositionSpec& spec, int n_max) {
  spec.validate();
  auto amps = coherent_amplitudes(spec.nu, spec.theta, n_max);
  for (int n = 0; n <= n_max; ++n)
    if (n % spec.l != spec.h) amps[static_cast<std::size_t>(n)] = 0.0;
  auto s = normalized(std::move(amps));
  require_truncation_adequate(s, default_truncation_epsilon, "superposed_state");
  return s;
}

/// One term  weight * |alpha e^{i angle}>  of a coherent-state superposition.
struct CoherentComponent {
  complex weight;
  double angle;
};

/// Normalized  sum_k weight_k |sqrt(nu) e^{i(theta + angle_k)}>.
inline FockState coherent_superposition(double nu, double theta, int n_max,
                                        std::span<const CoherentComponent> components) {
  std::vector<complex> amps(static_cast<std::size_t>(n_max) + 1);
  for (const auto& comp : components) {
    const auto term = coherent_amplitudes(nu, theta + comp.angle, n_max);
    for (std::size_t n = 0; n < amps.size(); ++n) amps[n] += comp.weight * term[n];
  }
  auto s = normalized(std::move(amps));
  require_truncation_adequate(s, default_truncation_epsilon, "coherent_superposition");
  return s;
}

/// Phase-weighted coherent-sum construction of |psi_{l,h}>; must agree with
/// superposed_state.
inline FockState superposed_state_coherent_sum(const SuperpositionSpec& spec, int n_max) {
  spec.validate();
  std::vector<CoherentComponent> comps;
  for (int r = 0; r < spec.l; ++r) {
    const double angle = 2.0 * std::numbers::pi * r / spec.l;
    comps.push_back({std::polar(1.0, -angle * spec.h), angle});
  }
  return coherent_superposition(spec.nu, spec.theta, n_max, comps);
}

/// Even-cat normalization [2(1 + e^{-2 nu})]^{-1/2}.
inline double normalization_n2(double nu) {
  if (nu < 0.0) throw std::invalid_argument("normalization_n2: nu must be nonnegative");
  return 1.0 / std::sqrt(2.0 * (1.0 + std::exp(-2.0 * nu)));
}

inline complex overlap(const FockState& a, const FockState& b) {
  if (a.n_max() != b.n_max())
    throw DimensionMismatch("overlap: n_max " + std::to_string(a.n_max()) + " vs " + std::to_string(b.n_max()));
  complex sum{};
  for (int n = 0; n <= a.n_max(); ++n) sum += std::conj(a[n]) * b[n];
  return sum;
}

/// |<a|b>|^2 for normalized inputs.
inline double fidelity(const FockState& a, const FockState& b) {
  return std::min(1.0, std::norm(overlap(a, b)));
}

/// Phase-space rotation c_n -> c_n e^{-i n phi} (alpha -> alpha e^{-i phi}).
inline FockState rotate_state(const FockState& s, double phi) {
  std::vector<complex> amps(s.amplitudes().begin(), s.amplitudes().end());
  for (int n = 0; n <= s.n_max(); ++n) amps[static_cast<std::size_t>(n)] *= std::polar(1.0, -n * phi);
  return FockState(std::move(amps));
}

/// Same state embedded in a basis `extra` levels larger (zeros on top).
inline FockState pad(const FockState& s, int extra) {
  std::vector<complex> amps(s.amplitudes().begin(), s.amplitudes().end());
  amps.resize(amps.size() + static_cast<std::size_t>(std::max(0, extra)));
  return FockState(std::move(amps));
}

/// Text record: n_max on the first line, then "n re im" with 17 significant digits.
inline void write_state(std::ostream& out, const FockState& s) {
  out << s.n_max() << '\n';
  char buf[96];
  for (int n = 0; n <= s.n_max(); ++n) {
    std::snprintf(buf, sizeof buf, "%d %.17g %.17g\n", n, s[n].real(), s[n].imag());
    out << buf;
  }
}

inline FockState read_state(std::istream& in) {
  int n_max = -1;
  if (!(in >> n_max) || n_max < 0) throw std::runtime_error("read_state: bad n_max header");
  std::vector<complex> amps(static_cast<std::size_t>(n_max) + 1);
  for (int expected = 0; expected <= n_max; ++expected) {
    int n = -1;
    double re = 0.0, im = 0.0;
    if (!(in >> n >> re >> im) || n != expected)
      throw std::runtime_error("read_state: malformed record at level " + std::to_string(expected));
    amps[static_cast<std::size_t>(n)] = {re, im};
  }
  return FockState(std::move(amps));
}

}  // namespace kerr
