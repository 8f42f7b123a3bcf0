#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <numbers>
#include <sstream>

#include "kerr/entropy.hpp"
#include "kerr/kerr_evolution.hpp"

using namespace kerr;
using Catch::Approx;
using std::numbers::pi;

namespace {

// phi_n(u) = H_n(u) e^{-u^2/2} / sqrt(2^n n! sqrt(pi)), with the prefactor in logs.
double hermite_function_oracle(int n, double u) {
  const double h = std::hermite(static_cast<unsigned>(n), u);
  if (h == 0.0) return 0.0;
  const double log_norm = -0.5 * (n * std::log(2.0) + std::lgamma(n + 1.0) + 0.5 * std::log(pi));
  return std::copysign(std::exp(std::log(std::abs(h)) + log_norm - 0.5 * u * u), h);
}

double trapezoid(const UniformGrid& g, const std::vector<double>& f) {
  double s = 0.5 * (f.front() + f.back());
  for (std::size_t i = 1; i + 1 < f.size(); ++i) s += f[i];
  return s * g.step;
}

DensityProfile gaussian_density(double sigma, const UniformGrid& g) {
  DensityProfile d{g, std::vector<double>(g.count)};
  for (std::size_t i = 0; i < g.count; ++i)
    d.values[i] = std::exp(-g[i] * g[i] / (2 * sigma * sigma)) / (sigma * std::sqrt(2 * pi));
  return d;
}

FockState vacuum() { return coherent_state(0.0, 0.0, truncation_dim(0.0)); }

}  // namespace

TEST_CASE("symmetric grid is odd, centered and within the step bound", "[entropy][grid]") {
  const auto g = UniformGrid::symmetric(7.3, 0.02);
  CHECK(g.count % 2 == 1);
  CHECK(g[g.count / 2] == Approx(0.0).margin(1e-12));
  CHECK(g.step <= 0.02);
  CHECK(g.end() == Approx(7.3));
  const auto r = g.refined();
  CHECK(r.count == 2 * g.count - 1);
  CHECK(r.end() == Approx(g.end()));
  CHECK_THROWS_AS(UniformGrid::symmetric(0.0, 0.1), std::invalid_argument);
}

TEST_CASE("simpson is exact for cubics and rejects even counts", "[entropy][grid]") {
  const UniformGrid g{-1.0, 0.25, 9};
  std::vector<double> f(g.count);
  for (std::size_t i = 0; i < g.count; ++i) f[i] = 2 * std::pow(g[i], 3) + 3 * g[i] * g[i] - 1;
  CHECK(simpson(g, f) == Approx(0.0).margin(1e-14));
  CHECK_THROWS_AS(simpson(UniformGrid{0.0, 0.1, 4}, std::vector<double>(4)), std::invalid_argument);
  CHECK_THROWS_AS(simpson(g, std::vector<double>(3)), std::invalid_argument);
}

TEST_CASE("Hermite function table matches the explicit formula", "[entropy]") {
  const UniformGrid g{-9.0, 0.37, 49};
  const HermiteFunctionTable table(g, 60);
  double worst = 0.0;
  for (int n = 0; n <= 60; ++n)
    for (std::size_t i = 0; i < g.count; ++i) worst = std::max(worst, std::abs(table(n, i) - hermite_function_oracle(n, g[i])));
  CHECK(worst < 1e-10);
}

TEST_CASE("vacuum wavefunction and densities", "[entropy]") {
  const auto g = UniformGrid::symmetric(6.0, 0.05);
  const auto psi = position_wavefunction(vacuum(), g);
  const auto phi = momentum_wavefunction(vacuum(), g);
  for (std::size_t i = 0; i < g.count; i += 17) {
    const double want = std::pow(pi, -0.25) * std::exp(-0.5 * g[i] * g[i]);
    CHECK(psi[i].real() == Approx(want).margin(1e-14));
    CHECK(phi[i].real() == Approx(want).margin(1e-14));
  }
  CHECK(position_density(vacuum(), g).integral() == Approx(1.0).epsilon(1e-10));
}

TEST_CASE("densities agree with an independent Hermite oracle", "[entropy]") {
  const auto s = evolve_fraction(superposed_state({3, 0, 30.0, default_theta}, truncation_dim(30.0)), 0.0);
  const auto grid = default_entropy_grid(s.mean_photon_number(), 0.02);
  const auto rho = position_density(s, grid);
  const auto gamma = momentum_density(s, grid);

  const auto fine = grid.refined();
  std::vector<double> rho_oracle(fine.count), gamma_oracle(fine.count);
  for (std::size_t i = 0; i < fine.count; ++i) {
    complex psi{}, phi{};
    complex minus_i_n{1.0, 0.0};
    for (int n = 0; n <= s.n_max(); ++n) {
      const double h = hermite_function_oracle(n, fine[i]);
      psi += s[static_cast<std::size_t>(n)] * h;
      phi += s[static_cast<std::size_t>(n)] * minus_i_n * h;
      minus_i_n *= complex{0.0, -1.0};
    }
    rho_oracle[i] = std::norm(psi);
    gamma_oracle[i] = std::norm(phi);
  }
  double worst = 0.0;
  for (std::size_t i = 0; i < grid.count; ++i) {
    worst = std::max(worst, std::abs(rho.values[i] - rho_oracle[2 * i]));
    worst = std::max(worst, std::abs(gamma.values[i] - gamma_oracle[2 * i]));
  }
  CHECK(worst < 1e-10);

  auto renyi_trapezoid = [&](const std::vector<double>& f, double order) {
    std::vector<double> g(f.size());
    for (std::size_t i = 0; i < f.size(); ++i) g[i] = std::pow(f[i], order);
    return std::log(trapezoid(fine, g)) / (1.0 - order);
  };
  const RenyiPair pair{};
  const double oracle = renyi_trapezoid(rho_oracle, pair.zeta) + renyi_trapezoid(gamma_oracle, pair.eta);
  CHECK(std::abs(renyi_uncertainty_sum(s, pair) - oracle) < 1e-4);
  CHECK(std::abs(renyi_uncertainty_sum(s, pair, UniformGrid::symmetric(grid.end(), 0.00125)) - oracle) < 1e-4);
}

TEST_CASE("Renyi entropy of a Gaussian density", "[entropy]") {
  const auto g = UniformGrid::symmetric(20.0, 0.01);
  for (double sigma : {0.5, 1.0, 2.3})
    for (double order : {0.5, 2.0 / 3.0, 2.0, 3.0}) {
      const double want = std::log(sigma * std::sqrt(2 * pi)) + std::log(order) / (2 * (order - 1));
      CHECK(renyi_entropy(gaussian_density(sigma, g), order) == Approx(want).epsilon(1e-9));
    }
  const double shannon = 0.5 * std::log(2 * pi * std::exp(1.0) * 1.7 * 1.7);
  CHECK(renyi_entropy(gaussian_density(1.7, g), 1.0) == Approx(shannon).epsilon(1e-9));
}

TEST_CASE("uniform unit density has zero entropy of every order", "[entropy]") {
  const UniformGrid g{0.0, 0.001, 1001};
  const DensityProfile d{g, std::vector<double>(g.count, 1.0)};
  for (double order : {0.3, 2.0 / 3.0, 1.0, 2.0, 5.0}) CHECK(std::abs(renyi_entropy(d, order)) < 1e-12);
}

TEST_CASE("Renyi entropy is continuous at order 1", "[entropy][property]") {
  const auto s = evolve_fraction(superposed_state({2, 0, 8.0, default_theta}, truncation_dim(8.0)), 0.21);
  const auto d = position_density(s, default_entropy_grid(s.mean_photon_number()));
  const double shannon = renyi_entropy(d, 1.0);
  CHECK(std::abs(renyi_entropy(d, 1.0 - 1e-6) - shannon) < 1e-4);
  CHECK(std::abs(renyi_entropy(d, 1.0 + 1e-6) - shannon) < 1e-4);
}

TEST_CASE("Renyi entropy decreases with order", "[entropy][property]") {
  const auto s = evolve_fraction(superposed_state({3, 0, 10.0, default_theta}, truncation_dim(10.0)), 0.3);
  const auto d = momentum_density(s, default_entropy_grid(s.mean_photon_number()));
  double prev = renyi_entropy(d, 0.4);
  for (double order : {0.6, 0.9, 1.0, 1.5, 2.0, 4.0}) {
    const double r = renyi_entropy(d, order);
    CHECK(r <= prev + 1e-12);
    prev = r;
  }
}

TEST_CASE("entropic bound values", "[entropy]") {
  auto term = [](double o) { return -std::log(o / pi) / (2 * (1 - o)); };
  CHECK(renyi_bound(RenyiPair{}) == Approx(term(2.0 / 3.0) + term(2.0)).epsilon(1e-14));
  CHECK(renyi_bound(RenyiPair{1.0, 1.0}) == Approx(1.0 + std::log(pi)).epsilon(1e-14));
  const auto p = RenyiPair::from_zeta(0.75);
  CHECK(p.eta == Approx(1.5));
  CHECK(renyi_bound(p) == Approx(term(0.75) + term(1.5)).epsilon(1e-14));
  CHECK(renyi_bound(RenyiPair::from_zeta(1.0 - 1e-7)) == Approx(1.0 + std::log(pi)).epsilon(1e-6));
}

TEST_CASE("vacuum saturates the bound for every conjugate pair", "[entropy]") {
  for (const RenyiPair pair : {RenyiPair{}, RenyiPair{1.0, 1.0}, RenyiPair::from_zeta(0.75), RenyiPair::from_zeta(3.0)})
    CHECK(std::abs(renyi_uncertainty_sum(vacuum(), pair) - renyi_bound(pair)) < 1e-6);
}

TEST_CASE("bound holds along evolved superpositions", "[entropy][property]") {
  for (int l = 1; l <= 3; ++l) {
    const auto s0 = superposed_state({l, 0, 12.0, default_theta}, truncation_dim(12.0));
    for (double f : {0.0, 0.05, 0.125, 1.0 / 9, 0.4}) {
      const auto s = evolve_fraction(s0, f);
      for (const RenyiPair pair : {RenyiPair{}, RenyiPair{1.0, 1.0}, RenyiPair::from_zeta(0.75)})
        CHECK(renyi_uncertainty_sum(s, pair) >= renyi_bound(pair) - 1e-6);
    }
  }
}

TEST_CASE("grid halving converges", "[entropy][convergence]") {
  const auto s = evolve_fraction(superposed_state({2, 0, 30.0, default_theta}, truncation_dim(30.0)), 0.17);
  const double half_width = std::sqrt(2.0 * s.mean_photon_number()) + 6.0;
  const auto coarse = UniformGrid::symmetric(half_width, 0.00125);
  const double a = renyi_uncertainty_sum(s, RenyiPair{}, coarse);
  const double b = renyi_uncertainty_sum(s, RenyiPair{}, coarse.refined());
  CHECK(std::abs(a - b) < 1e-6);
}

TEST_CASE("momentum wavefunction is the Fourier transform of the position one", "[entropy]") {
  const auto s = evolve_fraction(superposed_state({2, 1, 3.0, 0.4}, 40), 0.07);
  const auto xs = UniformGrid::symmetric(10.0, 0.02);
  const auto psi = position_wavefunction(s, xs);
  const UniformGrid ps{-3.0, 0.5, 13};
  const auto phi = momentum_wavefunction(s, ps);
  for (std::size_t j = 0; j < ps.count; ++j) {
    std::vector<double> re(xs.count), im(xs.count);
    for (std::size_t i = 0; i < xs.count; ++i) {
      const complex v = psi[i] * std::polar(1.0, -ps[j] * xs[i]) / std::sqrt(2 * pi);
      re[i] = v.real();
      im[i] = v.imag();
    }
    CHECK(std::abs(complex{simpson(xs, re), simpson(xs, im)} - phi[j]) < 1e-10);
  }
}

TEST_CASE("entropy_series metadata and values", "[entropy]") {
  const auto grid = TimeGrid::uniform(0.0, 0.5, 5);
  const SuperpositionSpec spec{2, 0, 6.0, default_theta};
  const auto series = entropy_series(spec, KerrParams{}, grid, RenyiPair{}, 0, 2);
  REQUIRE(series.size() == 5);
  const auto find = [&](const std::string& k) {
    for (const auto& [key, v] : series.metadata)
      if (key == k) return v;
    return std::string{};
  };
  CHECK(std::stod(find("bound")) == Approx(renyi_bound(RenyiPair{})));
  CHECK(find("zeta") != "");
  const auto s = evolve_fraction(superposed_state(spec, truncation_dim(6.0)), 0.25);
  CHECK(series.values[2] == Approx(renyi_uncertainty_sum(s, RenyiPair{}, default_entropy_grid(superposed_state(spec, truncation_dim(6.0)).mean_photon_number()))).epsilon(1e-12));
}

TEST_CASE("invalid inputs are rejected", "[entropy][errors]") {
  const UniformGrid g{0.0, 0.5, 3};
  CHECK_THROWS_AS(renyi_entropy(DensityProfile{g, {0.1, -0.2, 0.1}}, 2.0), std::invalid_argument);
  CHECK_THROWS_AS(renyi_entropy(DensityProfile{g, {0.1, NAN, 0.1}}, 2.0), std::invalid_argument);
  CHECK_THROWS_AS(renyi_entropy(DensityProfile{g, {0.1, 0.2, 0.1}}, 0.0), std::invalid_argument);
  CHECK_THROWS_AS(renyi_bound(RenyiPair{0.5, 2.0}), std::invalid_argument);
  CHECK_THROWS_AS(RenyiPair::from_zeta(0.5), std::invalid_argument);
  CHECK_THROWS_AS(HermiteFunctionTable(g, -1), std::invalid_argument);
  CHECK_THROWS_AS(position_wavefunction(coherent_state(4.0, 0.0, 40), HermiteFunctionTable(g, 10)),
                  std::invalid_argument);
}

TEST_CASE("density CSV dump", "[entropy][io]") {
  std::ostringstream out;
  write_density_csv(out, DensityProfile{UniformGrid{0.0, 0.5, 3}, {1.0, 2.0, 3.0}});
  CHECK(out.str() == "u,value\n0,1\n0.5,2\n1,3\n");
}
