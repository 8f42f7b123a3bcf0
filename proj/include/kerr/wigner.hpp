#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <ostream>
#include <stdexcept>
#include <utility>
#include <vector>

#include "kerr/fock_state.hpp"
#include "kerr/parallel.hpp"
#include "kerr/time_series.hpp"

namespace kerr {

struct PhaseSpaceGrid {
  double x_min = -1.0, x_max = 1.0;
  double p_min = -1.0, p_max = 1.0;
  int n_x = 2, n_p = 2;

  void validate() const {
    if (!(x_max > x_min) || !(p_max > p_min)) throw std::invalid_argument("PhaseSpaceGrid: max must exceed min");
    if (n_x < 2 || n_p < 2) throw std::invalid_argument("PhaseSpaceGrid: need at least 2 points per axis");
  }
  double dx() const { return (x_max - x_min) / (n_x - 1); }
  double dp() const { return (p_max - p_min) / (n_p - 1); }
  double x(int i) const { return x_min + dx() * i; }
  double p(int j) const { return p_min + dp() * j; }

  /// Square grid over +-half_width with `points` per axis.
  static PhaseSpaceGrid square(double half_width, int points) {
    PhaseSpaceGrid g{-half_width, half_width, -half_width, half_width, points, points};
    g.validate();
    return g;
  }
};

/// 401 x 401 over +-(sqrt(2 nu) + 5).
inline PhaseSpaceGrid default_wigner_grid(double nu, int points = 401) {
  return PhaseSpaceGrid::square(std::sqrt(2.0 * nu) + 5.0, points);
}

/// W on a grid; values[j * n_x + i] holds W(x_i, p_j).
struct PhaseSpaceField {
  PhaseSpaceGrid grid;
  std::vector<double> values;

  double at(int i, int j) const { return values[static_cast<std::size_t>(j) * grid.n_x + i]; }

  double boundary_max_abs() const {
    double m = 0.0;
    for (int i = 0; i < grid.n_x; ++i) m = std::max({m, std::abs(at(i, 0)), std::abs(at(i, grid.n_p - 1))});
    for (int j = 0; j < grid.n_p; ++j) m = std::max({m, std::abs(at(0, j)), std::abs(at(grid.n_x - 1, j))});
    return m;
  }
};

/// W(x, p) = (1/pi) int psi*(x + y) psi(x - y) e^{2ipy} dy by the trapezoid rule.
/// psi comes from the normalized Hermite recurrence, so every term is bounded.
/// The y step resolves the band limit of the integrand, which makes the rule
/// spectrally accurate; y runs while both factors are inside the support.
class WignerEvaluator {
 public:
  explicit WignerEvaluator(const FockState& s) : c_(s.amplitudes().begin(), s.amplitudes().end()) {
    c_.resize(static_cast<std::size_t>(std::max(s.highest_occupied(), 0) + 1));
    const double turning = std::sqrt(2.0 * static_cast<double>(c_.size()) + 1.0);
    support_ = turning + 6.0;
    band_ = turning + 4.0;
  }

  /// Half-width beyond which psi(x) is negligible.
  double support() const { return support_; }

  double operator()(double x, double p) const {
    double w = 0.0;
    row(x, p, 0.0, 1, &w, 1);
    return w;
  }

  /// W(x, p0 + j dp) for j < count, written to out[j * stride].
  void row(double x, double p0, double dp, int count, double* out, std::size_t stride) const {
    const double p_abs = std::max(std::abs(p0), std::abs(p0 + dp * (count - 1)));
    const double delta = std::numbers::pi / (2.0 * (band_ + p_abs));
    const double reach = support_ - std::abs(x);
    const int K = reach > 0.0 ? static_cast<int>(std::ceil(reach / delta)) : 0;

    // f_k = psi*(x + k delta) psi(x - k delta), k = 0..K
    std::vector<complex> f(static_cast<std::size_t>(K + 1));
    for (int k = 0; k <= K; ++k) f[static_cast<std::size_t>(k)] = std::conj(psi(x + k * delta)) * psi(x - k * delta);

    std::vector<complex> phase(f.size()), step(f.size());
    for (int k = 0; k <= K; ++k) {
      phase[static_cast<std::size_t>(k)] = std::polar(1.0, 2.0 * p0 * k * delta);
      step[static_cast<std::size_t>(k)] = std::polar(1.0, 2.0 * dp * k * delta);
    }
    for (int j = 0; j < count; ++j) {
      double sum = 0.0;
      for (int k = 1; k <= K; ++k) sum += (f[static_cast<std::size_t>(k)] * phase[static_cast<std::size_t>(k)]).real();
      out[static_cast<std::size_t>(j) * stride] = delta / std::numbers::pi * (f[0].real() + 2.0 * sum);
      for (std::size_t k = 0; k < phase.size(); ++k) phase[k] *= step[k];
    }
  }

 private:
  complex psi(double u) const {
    double prev = 0.0;
    double cur = std::pow(std::numbers::pi, -0.25) * std::exp(-0.5 * u * u);
    complex sum = c_[0] * cur;
    for (std::size_t n = 0; n + 1 < c_.size(); ++n) {
      const double next = std::sqrt(2.0 / (n + 1)) * u * cur - std::sqrt(static_cast<double>(n) / (n + 1)) * prev;
      prev = cur;
      cur = next;
      sum += c_[n + 1] * cur;
    }
    return sum;
  }

  std::vector<complex> c_;
  double support_ = 0.0;
  double band_ = 0.0;
};

inline double wigner_at(const FockState& s, double x, double p) { return WignerEvaluator(s)(x, p); }

inline PhaseSpaceField wigner_field(const FockState& s, const PhaseSpaceGrid& grid, unsigned threads = 1) {
  grid.validate();
  const WignerEvaluator eval(s);
  PhaseSpaceField f{grid, std::vector<double>(static_cast<std::size_t>(grid.n_x) * grid.n_p)};
  parallel_for(static_cast<std::size_t>(grid.n_x), threads, [&](std::size_t i) {
    eval.row(grid.x(static_cast<int>(i)), grid.p_min, grid.dp(), grid.n_p, f.values.data() + i,
             static_cast<std::size_t>(grid.n_x));
  });
  return f;
}

/// Writes a warning and returns false when |W| on the grid edge exceeds tol.
inline bool check_boundary(const PhaseSpaceField& f, std::ostream& warn, double tol = 1e-6) {
  const double edge = f.boundary_max_abs();
  if (edge <= tol) return true;
  warn << "warning: Wigner grid too small, |W| = " << edge << " on the boundary (> " << tol << ")\n";
  return false;
}

namespace detail {

inline double trapezoid(const std::vector<double>& v, double h) {
  double s = 0.5 * (v.front() + v.back());
  for (std::size_t i = 1; i + 1 < v.size(); ++i) s += v[i];
  return s * h;
}

}  // namespace detail

/// (rho(x_i), gamma(p_j)) by trapezoid integration over the other axis.
inline std::pair<std::vector<double>, std::vector<double>> wigner_marginals(const PhaseSpaceField& f) {
  const auto& g = f.grid;
  std::vector<double> rho(g.n_x), gamma(g.n_p), line;
  for (int i = 0; i < g.n_x; ++i) {
    line.resize(g.n_p);
    for (int j = 0; j < g.n_p; ++j) line[j] = f.at(i, j);
    rho[i] = detail::trapezoid(line, g.dp());
  }
  for (int j = 0; j < g.n_p; ++j) {
    line.resize(g.n_x);
    for (int i = 0; i < g.n_x; ++i) line[i] = f.at(i, j);
    gamma[j] = detail::trapezoid(line, g.dx());
  }
  return {rho, gamma};
}

/// 2D trapezoid integral of W.
inline double wigner_integral(const PhaseSpaceField& f) {
  return detail::trapezoid(wigner_marginals(f).first, f.grid.dx());
}

/// Grid indices (i, j) of strict interior local maxima (8-neighbourhood)
/// with value above min_value.
inline std::vector<std::pair<int, int>> local_maxima(const PhaseSpaceField& f, double min_value = 0.0) {
  std::vector<std::pair<int, int>> out;
  const auto& g = f.grid;
  for (int j = 1; j + 1 < g.n_p; ++j)
    for (int i = 1; i + 1 < g.n_x; ++i) {
      const double v = f.at(i, j);
      if (!(v > min_value)) continue;
      bool peak = true;
      for (int dj = -1; dj <= 1 && peak; ++dj)
        for (int di = -1; di <= 1; ++di)
          if ((di || dj) && !(v > f.at(i + di, j + dj))) {
            peak = false;
            break;
          }
      if (peak) out.emplace_back(i, j);
    }
  return out;
}

/// Separable Gaussian blur with per-axis variance `variance` (edges treated as
/// zero). variance = 1/2 turns W into the Husimi function, which removes the
/// interference fringes and leaves one positive hump per coherent component.
inline PhaseSpaceField gaussian_smooth(const PhaseSpaceField& f, double variance = 0.5) {
  if (!(variance > 0.0)) throw std::invalid_argument("gaussian_smooth: variance must be positive");
  const auto& g = f.grid;
  auto kernel = [&](double h) {
    const int half = static_cast<int>(std::ceil(6.0 * std::sqrt(variance) / h));
    std::vector<double> k(static_cast<std::size_t>(2 * half + 1));
    for (int d = -half; d <= half; ++d) k[d + half] = std::exp(-0.5 * d * d * h * h / variance);
    double norm = 0.0;
    for (double v : k) norm += v;
    for (double& v : k) v /= norm;
    return k;
  };
  const auto kx = kernel(g.dx()), kp = kernel(g.dp());
  const int hx = static_cast<int>(kx.size() / 2), hp = static_cast<int>(kp.size() / 2);
  PhaseSpaceField tmp{g, std::vector<double>(f.values.size())}, out{g, std::vector<double>(f.values.size())};
  for (int j = 0; j < g.n_p; ++j)
    for (int i = 0; i < g.n_x; ++i) {
      double s = 0.0;
      for (int d = -hx; d <= hx; ++d)
        if (i + d >= 0 && i + d < g.n_x) s += kx[d + hx] * f.at(i + d, j);
      tmp.values[static_cast<std::size_t>(j) * g.n_x + i] = s;
    }
  for (int j = 0; j < g.n_p; ++j)
    for (int i = 0; i < g.n_x; ++i) {
      double s = 0.0;
      for (int d = -hp; d <= hp; ++d)
        if (j + d >= 0 && j + d < g.n_p) s += kp[d + hp] * tmp.at(i, j + d);
      out.values[static_cast<std::size_t>(j) * g.n_x + i] = s;
    }
  return out;
}

/// Connected regions (4-neighbourhood) where the field exceeds fraction * max.
inline int count_regions_above(const PhaseSpaceField& f, double fraction = 0.5) {
  const auto& g = f.grid;
  const double cut = fraction * *std::max_element(f.values.begin(), f.values.end());
  std::vector<char> seen(f.values.size(), 0);
  std::vector<std::pair<int, int>> stack;
  int regions = 0;
  for (int j = 0; j < g.n_p; ++j)
    for (int i = 0; i < g.n_x; ++i) {
      const std::size_t idx = static_cast<std::size_t>(j) * g.n_x + i;
      if (seen[idx] || !(f.values[idx] > cut)) continue;
      ++regions;
      seen[idx] = 1;
      stack.assign(1, {i, j});
      while (!stack.empty()) {
        auto [a, b] = stack.back();
        stack.pop_back();
        const int nb[4][2] = {{a + 1, b}, {a - 1, b}, {a, b + 1}, {a, b - 1}};
        for (const auto& q : nb) {
          if (q[0] < 0 || q[0] >= g.n_x || q[1] < 0 || q[1] >= g.n_p) continue;
          const std::size_t k = static_cast<std::size_t>(q[1]) * g.n_x + q[0];
          if (seen[k] || !(f.values[k] > cut)) continue;
          seen[k] = 1;
          stack.push_back({q[0], q[1]});
        }
      }
    }
  return regions;
}

/// Number of coherent components visible in the portrait: regions above half
/// the maximum of the Gaussian-smoothed field.
inline int count_lobes(const PhaseSpaceField& f, double fraction = 0.5) {
  return count_regions_above(gaussian_smooth(f), fraction);
}

/// max |W(R z) - W(z)| over the grid points, R = rotation by `angle`.
/// W(R z) is the Wigner function of the state rotated by -angle, evaluated on
/// the same grid, so no interpolation is involved.
inline double rotation_symmetry_deviation(const FockState& s, const PhaseSpaceField& f, double angle,
                                          unsigned threads = 1) {
  const auto rotated = wigner_field(rotate_state(s, angle), f.grid, threads);
  double worst = 0.0;
  for (std::size_t k = 0; k < f.values.size(); ++k) worst = std::max(worst, std::abs(rotated.values[k] - f.values[k]));
  return worst;
}

/// CSV triples with header "x,p,W".
inline void write_wigner_csv(std::ostream& out, const PhaseSpaceField& f) {
  out << "x,p,W\n";
  for (int j = 0; j < f.grid.n_p; ++j)
    for (int i = 0; i < f.grid.n_x; ++i)
      out << format_double(f.grid.x(i)) << ',' << format_double(f.grid.p(j)) << ',' << format_double(f.at(i, j)) << '\n';
}

/// gnuplot "matrix nonuniform" block: first row n_x then the x values, every
/// following row p_j then W(x_i, p_j).
inline void write_wigner_matrix(std::ostream& out, const PhaseSpaceField& f) {
  out << f.grid.n_x;
  for (int i = 0; i < f.grid.n_x; ++i) out << ' ' << format_double(f.grid.x(i));
  out << '\n';
  for (int j = 0; j < f.grid.n_p; ++j) {
    out << format_double(f.grid.p(j));
    for (int i = 0; i < f.grid.n_x; ++i) out << ' ' << format_double(f.at(i, j));
    out << '\n';
  }
}

}  // namespace kerr
