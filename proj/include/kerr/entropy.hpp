#pragma once

// Position / momentum densities of a number-basis state and the Renyi
// entropic-uncertainty sum built from them.

#include <cmath>
#include <complex>
#include <limits>
#include <numbers>
#include <ostream>
#include <stdexcept>
#include <string>
#include <vector>

#include "kerr/fock_state.hpp"
#include "kerr/kerr_evolution.hpp"
#include "kerr/parallel.hpp"
#include "kerr/time_series.hpp"

namespace kerr {

/// Equally spaced abscissae start + i*step, i in [0, count).
struct UniformGrid {
  double start = 0.0;
  double step = 1.0;
  std::size_t count = 0;

  double operator[](std::size_t i) const { return start + step * static_cast<double>(i); }
  double end() const { return (*this)[count - 1]; }
  std::size_t size() const { return count; }

  /// Odd number of points covering [-half_width, half_width] with spacing at
  /// most max_step. The midpoint sits exactly on 0.
  static UniformGrid symmetric(double half_width, double max_step) {
    if (!(half_width > 0.0) || !(max_step > 0.0)) throw std::invalid_argument("UniformGrid: widths must be positive");
    const auto half = static_cast<std::size_t>(std::ceil(half_width / max_step));
    const double h = half_width / static_cast<double>(half);
    return {-half_width, h, 2 * half + 1};
  }

  /// Same span, half the spacing.
  UniformGrid refined() const { return {start, step / 2.0, 2 * count - 1}; }
};

/// Grid for the densities of a state with mean photon number mean_n.
inline UniformGrid default_entropy_grid(double mean_n, double max_step = 0.02) {
  return UniformGrid::symmetric(std::sqrt(2.0 * std::max(mean_n, 0.0)) + 6.0, max_step);
}

/// Composite Simpson rule; the grid must have an odd number of points.
inline double simpson(const UniformGrid& grid, const std::vector<double>& f) {
  if (f.size() != grid.count) throw std::invalid_argument("simpson: value count does not match grid");
  if (grid.count < 3 || grid.count % 2 == 0) throw std::invalid_argument("simpson: need an odd number of points >= 3");
  double odd = 0.0, even = 0.0;
  for (std::size_t i = 1; i + 1 < f.size(); ++i) (i % 2 ? odd : even) += f[i];
  return grid.step / 3.0 * (f.front() + f.back() + 4.0 * odd + 2.0 * even);
}

struct DensityProfile {
  UniformGrid grid;
  std::vector<double> values;

  double integral() const { return simpson(grid, values); }
};

/// Conjugate Renyi orders, 1/zeta + 1/eta = 2.
struct RenyiPair {
  double zeta = 2.0 / 3.0;
  double eta = 2.0;

  static RenyiPair from_zeta(double zeta) {
    if (!(zeta > 0.5)) throw std::invalid_argument("RenyiPair: zeta must exceed 1/2 for a positive conjugate");
    RenyiPair p{zeta, zeta / (2.0 * zeta - 1.0)};
    return p;
  }

  void validate() const {
    if (!(zeta > 0.0) || !(eta > 0.0)) throw std::invalid_argument("RenyiPair: orders must be positive");
    if (std::abs(1.0 / zeta + 1.0 / eta - 2.0) > 1e-12)
      throw std::invalid_argument("RenyiPair: 1/zeta + 1/eta must equal 2");
  }
};

/// phi_n(u) for n = 0..n_max on every grid point, from the normalized
/// three-term recurrence. Row n is contiguous.
class HermiteFunctionTable {
 public:
  HermiteFunctionTable(const UniformGrid& grid, int n_max)
      : grid_(grid), n_max_(n_max), values_(static_cast<std::size_t>(n_max + 1) * grid.count) {
    if (n_max < 0) throw std::invalid_argument("HermiteFunctionTable: n_max must be >= 0");
    const double c0 = std::pow(std::numbers::pi, -0.25);
    const std::size_t m = grid.count;
    for (std::size_t i = 0; i < m; ++i) {
      const double u = grid[i];
      double prev = 0.0;
      double cur = c0 * std::exp(-0.5 * u * u);
      values_[i] = cur;
      for (int n = 0; n < n_max; ++n) {
        const double next = std::sqrt(2.0 / (n + 1)) * u * cur - std::sqrt(static_cast<double>(n) / (n + 1)) * prev;
        prev = cur;
        cur = next;
        values_[static_cast<std::size_t>(n + 1) * m + i] = cur;
      }
      if (!std::isfinite(cur)) throw std::overflow_error("HermiteFunctionTable: recurrence left the representable range");
    }
  }

  const UniformGrid& grid() const { return grid_; }
  int n_max() const { return n_max_; }
  const double* row(int n) const { return values_.data() + static_cast<std::size_t>(n) * grid_.count; }
  double operator()(int n, std::size_t i) const { return row(n)[i]; }

 private:
  UniformGrid grid_;
  int n_max_;
  std::vector<double> values_;
};

namespace detail {

inline std::vector<complex> expand(const FockState& s, const HermiteFunctionTable& table, bool momentum) {
  if (s.n_max() > table.n_max())
    throw std::invalid_argument("wavefunction: table holds n <= " + std::to_string(table.n_max()) +
                                " but the state needs " + std::to_string(s.n_max()));
  const std::size_t m = table.grid().count;
  std::vector<double> re(m), im(m);
  static constexpr complex minus_i_pow[4] = {{1, 0}, {0, -1}, {-1, 0}, {0, 1}};
  for (int n = 0; n <= s.n_max(); ++n) {
    complex c = s[static_cast<std::size_t>(n)];
    if (c == complex{}) continue;
    if (momentum) c *= minus_i_pow[n % 4];
    const double* phi = table.row(n);
    for (std::size_t i = 0; i < m; ++i) {
      re[i] += c.real() * phi[i];
      im[i] += c.imag() * phi[i];
    }
  }
  std::vector<complex> out(m);
  for (std::size_t i = 0; i < m; ++i) out[i] = {re[i], im[i]};
  return out;
}

inline DensityProfile density(const std::vector<complex>& psi, const UniformGrid& grid) {
  DensityProfile d{grid, std::vector<double>(psi.size())};
  for (std::size_t i = 0; i < psi.size(); ++i) d.values[i] = std::norm(psi[i]);
  return d;
}

}  // namespace detail

/// psi(x) = sum_n c_n phi_n(x).
inline std::vector<complex> position_wavefunction(const FockState& s, const HermiteFunctionTable& table) {
  return detail::expand(s, table, false);
}
/// phi(p) = sum_n c_n (-i)^n phi_n(p).
inline std::vector<complex> momentum_wavefunction(const FockState& s, const HermiteFunctionTable& table) {
  return detail::expand(s, table, true);
}
inline std::vector<complex> position_wavefunction(const FockState& s, const UniformGrid& grid) {
  return position_wavefunction(s, HermiteFunctionTable(grid, s.n_max()));
}
inline std::vector<complex> momentum_wavefunction(const FockState& s, const UniformGrid& grid) {
  return momentum_wavefunction(s, HermiteFunctionTable(grid, s.n_max()));
}

inline DensityProfile position_density(const FockState& s, const HermiteFunctionTable& table) {
  return detail::density(position_wavefunction(s, table), table.grid());
}
inline DensityProfile momentum_density(const FockState& s, const HermiteFunctionTable& table) {
  return detail::density(momentum_wavefunction(s, table), table.grid());
}
inline DensityProfile position_density(const FockState& s, const UniformGrid& grid) {
  return position_density(s, HermiteFunctionTable(grid, s.n_max()));
}
inline DensityProfile momentum_density(const FockState& s, const UniformGrid& grid) {
  return momentum_density(s, HermiteFunctionTable(grid, s.n_max()));
}

inline constexpr double density_floor = 1e-300;

/// R = ln(int f^order) / (1 - order); order == 1 gives -int f ln f.
inline double renyi_entropy(const DensityProfile& d, double order) {
  if (!(order > 0.0)) throw std::invalid_argument("renyi_entropy: order must be positive");
  std::vector<double> g(d.values.size());
  for (std::size_t i = 0; i < g.size(); ++i) {
    const double f = d.values[i];
    if (!(f >= 0.0)) throw std::invalid_argument("renyi_entropy: density has a negative or NaN value");
    if (order == 1.0) {
      const double safe = std::max(f, density_floor);
      g[i] = -f * std::log(safe);
    } else {
      g[i] = std::pow(f, order);
    }
  }
  const double integral = simpson(d.grid, g);
  if (order == 1.0) return integral;
  if (!(integral > 0.0)) throw std::invalid_argument("renyi_entropy: density integrates to zero");
  return std::log(integral) / (1.0 - order);
}

/// Lower bound on R_rho^(zeta) + R_gamma^(eta); 1 + ln pi at zeta = eta = 1.
/// Written in zeta alone, ln pi - ln zeta - (2 zeta - 1) ln(2 zeta - 1) / (2 (1 - zeta)),
/// so the two divergent terms never have to cancel near zeta = 1.
inline double renyi_bound(const RenyiPair& pair) {
  pair.validate();
  const double eps = 1.0 - pair.zeta;
  const double ln_pi = std::log(std::numbers::pi);
  if (eps == 0.0) return 1.0 + ln_pi;
  return ln_pi - std::log(pair.zeta) - (2.0 * pair.zeta - 1.0) * std::log1p(-2.0 * eps) / (2.0 * eps);
}

/// Evaluates R_rho^(zeta) + R_gamma^(eta) for states up to a fixed n_max on a
/// fixed grid; the Hermite table is built once and shared read-only.
class EntropyEvaluator {
 public:
  EntropyEvaluator(int n_max, const UniformGrid& grid) : table_(grid, n_max) {}

  const UniformGrid& grid() const { return table_.grid(); }
  const HermiteFunctionTable& table() const { return table_; }

  double operator()(const FockState& s, const RenyiPair& pair) const {
    pair.validate();
    return renyi_entropy(position_density(s, table_), pair.zeta) + renyi_entropy(momentum_density(s, table_), pair.eta);
  }

 private:
  HermiteFunctionTable table_;
};

inline double renyi_uncertainty_sum(const FockState& s, const RenyiPair& pair, const UniformGrid& grid) {
  return EntropyEvaluator(s.n_max(), grid)(s, pair);
}

inline double renyi_uncertainty_sum(const FockState& s, const RenyiPair& pair) {
  return renyi_uncertainty_sum(s, pair, default_entropy_grid(s.mean_photon_number()));
}

/// R_rho^(zeta) + R_gamma^(eta) along the evolution of |psi_{l,h}>.
/// n_max <= 0 selects truncation_dim(nu); max_step <= 0 selects the default.
inline TimeSeries entropy_series(const SuperpositionSpec& spec, const KerrParams& params, const TimeGrid& grid,
                                 const RenyiPair& pair, int n_max = 0, unsigned threads = 1, double max_step = 0.02) {
  pair.validate();
  const int dim = n_max > 0 ? n_max : truncation_dim(spec.nu);
  const FockState initial = superposed_state(spec, dim);
  const EntropyEvaluator eval(dim, default_entropy_grid(initial.mean_photon_number(), max_step));
  TimeSeries out;
  out.grid = grid;
  out.values.resize(grid.size());
  out.observable = "renyi(" + format_double(pair.zeta) + ")+renyi(" + format_double(pair.eta) + ")";
  out.metadata = {{"l", std::to_string(spec.l)},         {"h", std::to_string(spec.h)},
                  {"nu", format_double(spec.nu)},        {"theta", format_double(spec.theta)},
                  {"chi", format_double(params.chi)},    {"n_max", std::to_string(dim)},
                  {"zeta", format_double(pair.zeta)},    {"eta", format_double(pair.eta)},
                  {"bound", format_double(renyi_bound(pair))}};
  parallel_for(grid.size(), threads,
               [&](std::size_t i) { out.values[i] = eval(evolve_fraction(initial, grid[i]), pair); });
  return out;
}

/// Debug dump, header "u,value".
inline void write_density_csv(std::ostream& out, const DensityProfile& d) {
  out << "u,value\n";
  for (std::size_t i = 0; i < d.values.size(); ++i) out << format_double(d.grid[i]) << ',' << format_double(d.values[i]) << '\n';
}

}  // namespace kerr
