#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <numbers>
#include <random>

#include "kerr/errors.hpp"
#include "kerr/moments.hpp"

using namespace kerr;
using Catch::Approx;

namespace {

double rel(complex got, complex want, double scale) { return std::abs(got - want) / std::max(std::abs(want), scale); }

FockState evolved(const SuperpositionSpec& spec, double fraction, int headroom) {
  return pad(evolve_fraction(superposed_state(spec, truncation_dim(spec.nu)), fraction), headroom);
}

}  // namespace

TEST_CASE("coherent ladder moments agree with the oracle", "[moments]") {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> frac(0.0, 1.0), nus(5.0, 60.0), chis(0.3, 2.0);
  double worst = 0.0;
  for (int sample = 0; sample < 100; ++sample) {
    const double nu = nus(rng), chi = chis(rng);
    const KerrParams params{chi};
    const double t = params.time_at(frac(rng));
    const complex alpha = std::polar(std::sqrt(nu), default_theta);
    const auto s = evolve(coherent_state(nu, default_theta, truncation_dim(nu)), params, t);
    const int r = sample % 3, shift = 1 + sample % 5;
    worst = std::max(worst, rel(ladder_expectation_oracle(s, r, shift), ladder_expectation_coherent(alpha, r, shift, chi, t),
                                std::pow(nu, r + 0.5 * shift)));
  }
  CHECK(worst < 1e-9);
}

TEST_CASE("burst condition at T_rev/4 lifts the damping of <a^4>", "[moments]") {
  const complex alpha = std::polar(10.0, default_theta);
  const double t = std::numbers::pi / 4.0;
  CHECK(std::abs(ladder_expectation_coherent(alpha, 0, 4, 1.0, t)) == Approx(1e4).epsilon(1e-12));
  CHECK(std::abs(ladder_expectation_coherent(alpha, 0, 4, 1.0, t / 3.0)) < 1e-20);
}

TEST_CASE("superposition <a^{lk}> closed form agrees with the oracle", "[moments]") {
  std::mt19937_64 rng(12);
  std::uniform_real_distribution<double> frac(0.0, 1.0), nus(5.0, 40.0);
  double worst = 0.0;
  for (int sample = 0; sample < 100; ++sample) {
    const int l = 1 + sample % 4, k = 1 + (sample / 4) % 2;
    const double nu = nus(rng), f = frac(rng);
    const auto s = evolved({l, 0, nu, default_theta}, f, l * k);
    const double t = KerrParams{}.time_at(f);
    worst = std::max(worst, rel(ladder_expectation_oracle(s, 0, l * k), a_pow_superposition(l, nu, default_theta, 1.0, t, k),
                                std::pow(nu, 0.5 * l * k)));
  }
  CHECK(worst < 1e-9);
}

TEST_CASE("even-state closed forms agree with the oracle", "[moments]") {
  std::mt19937_64 rng(13);
  std::uniform_real_distribution<double> frac(0.0, 1.0), nus(5.0, 40.0), thetas(0.0, 2.0 * std::numbers::pi);
  double worst_x2 = 0.0, worst_a = 0.0;
  for (int sample = 0; sample < 100; ++sample) {
    const double nu = nus(rng), f = frac(rng), theta = thetas(rng);
    const int k = 1 + sample % 3;
    const auto s = evolved({2, 0, nu, theta}, f, 2 * k);
    const double t = KerrParams{}.time_at(f);
    worst_x2 = std::max(worst_x2, std::abs(x_moment_oracle(s, 2) - x2_even_cs(nu, 1.0, t, theta)) / (nu + 0.5));
    worst_a = std::max(worst_a, rel(ladder_expectation_oracle(s, 0, 2 * k), a_pow_even_cs(nu, theta, 1.0, t, k),
                                    std::pow(nu, k)));
  }
  CHECK(worst_x2 < 1e-9);
  CHECK(worst_a < 1e-9);
}

TEST_CASE("even-state <x^2> plateau is nu tanh nu + 1/2", "[moments]") {
  const double nu = 3.0;
  const auto s = evolved({2, 0, nu, default_theta}, 0.0, 2);
  CHECK(x2_even_cs(nu, 1.0, 0.0) == Approx(x_moment_oracle(s, 2)).epsilon(1e-12));
  const double t_plateau = KerrParams{}.time_at(0.1);
  const double oscillating = x2_even_cs(100.0, 1.0, t_plateau) - (100.0 * std::tanh(100.0) + 0.5);
  CHECK(std::abs(oscillating) < 1e-10);
}

TEST_CASE("even state: <x^2> bursts at T_rev/4", "[moments]") {
  const double plateau = 100.0 * std::tanh(100.0) + 0.5;
  CHECK(std::abs(x2_even_cs(100.0, 1.0, std::numbers::pi / 4.0) - plateau) > 10.0);
}

TEST_CASE("even state: second branch is undamped at T_rev/8 for k = 2", "[moments]") {
  const double nu = 100.0, u = 4.0 * 2 * std::numbers::pi / 8.0;
  CHECK(std::exp(-nu * (1.0 - std::cos(u))) < 1e-80);
  CHECK(std::exp(-nu * (1.0 + std::cos(u))) == Approx(1.0));
  CHECK(std::abs(a_pow_even_cs(nu, default_theta, 1.0, std::numbers::pi / 8.0, 2)) > 1e3);
}

TEST_CASE("psi3 closed forms agree with the oracle", "[moments]") {
  std::mt19937_64 rng(14);
  std::uniform_real_distribution<double> frac(0.0, 1.0), nus(5.0, 40.0), thetas(0.0, 2.0 * std::numbers::pi);
  double worst_a = 0.0, worst_x3 = 0.0;
  for (int sample = 0; sample < 100; ++sample) {
    const double nu = nus(rng), f = frac(rng), theta = thetas(rng);
    const int k = 1 + sample % 3;
    const auto s = evolved({3, 0, nu, theta}, f, 3 * k);
    const double t = KerrParams{}.time_at(f);
    worst_a = std::max(worst_a, rel(ladder_expectation_oracle(s, 0, 3 * k), a_pow_psi3(nu, theta, 1.0, t, k),
                                    std::pow(nu, 1.5 * k)));
    worst_x3 = std::max(worst_x3, std::abs(x_moment_oracle(s, 3) - x3_psi3(nu, 1.0, t, theta)) / std::pow(nu, 1.5));
  }
  CHECK(worst_a < 1e-9);
  CHECK(worst_x3 < 1e-9);
}

TEST_CASE("psi3 <x^3> vanishes on the plateau and bursts at T_rev/9", "[moments]") {
  CHECK(std::abs(x3_psi3(100.0, 1.0, KerrParams{}.time_at(0.07))) < 1e-10);
  CHECK(std::abs(x3_psi3(100.0, 1.0, KerrParams{}.time_at(1.0 / 9.0))) > 10.0);
  CHECK(std::abs(a_pow_psi3(100.0, default_theta, 1.0, KerrParams{}.time_at(1.0 / 18.0), 2)) > 1e3);
}

TEST_CASE("quadrature oracle reproduces normal-ordered identities", "[moments][property]") {
  // x^2 = (a^2 + a^dag^2 + 2 a^dag a + 1)/2 and p^2 = (-a^2 - a^dag^2 + 2 a^dag a + 1)/2
  const auto s = evolved({1, 0, 12.0, 0.7}, 0.31, 4);
  const complex a2 = ladder_expectation_oracle(s, 0, 2);
  const double n = ladder_expectation_oracle(s, 1, 0).real();
  CHECK(x_moment_oracle(s, 2) == Approx(a2.real() + n + 0.5).epsilon(1e-12));
  CHECK(p_moment_oracle(s, 2) == Approx(-a2.real() + n + 0.5).epsilon(1e-12));
  CHECK(x_moment_oracle(s, 1) == Approx(std::numbers::sqrt2 * ladder_expectation_oracle(s, 0, 1).real()).margin(1e-12));
}

TEST_CASE("moments of a coherent state at t = 0 match the Gaussian", "[moments]") {
  const double nu = 9.0;
  const auto s = pad(coherent_state(nu, 0.0, truncation_dim(nu)), 4);
  const double x0 = std::sqrt(2.0 * nu);
  CHECK(x_moment_oracle(s, 1) == Approx(x0).epsilon(1e-12));
  CHECK(x_moment_oracle(s, 2) == Approx(x0 * x0 + 0.5).epsilon(1e-12));
  CHECK(x_moment_oracle(s, 4) == Approx(std::pow(x0, 4) + 3.0 * x0 * x0 + 0.75).epsilon(1e-12));
  CHECK(std::abs(p_moment_oracle(s, 1)) < 1e-12);
}

TEST_CASE("parity forbids odd moments of psi_2 and non-multiples of 3 for psi_3's first powers", "[moments]") {
  for (double f : {0.0, 0.1, 0.125, 0.4}) {
    const auto even = evolved({2, 0, 30.0, default_theta}, f, 5);
    for (int m : {1, 3, 5}) CHECK(x_moment_oracle(even, m) == 0.0);
    const auto psi3 = evolved({3, 0, 30.0, default_theta}, f, 2);
    CHECK(x_moment_oracle(psi3, 1) == 0.0);
    CHECK(std::abs(ladder_expectation_oracle(psi3, 0, 2)) == 0.0);
  }
}

TEST_CASE("quadrature moments need headroom", "[moments][errors]") {
  const auto s = coherent_state(10.0, 0.0, truncation_dim(10.0));
  CHECK_THROWS_AS(x_moment_oracle(s, 1), HeadroomError);
  CHECK_NOTHROW(x_moment_oracle(pad(s, 1), 1));
  CHECK_THROWS_AS(quadrature_moment(pad(s, 2), Quadrature::x, -1), std::invalid_argument);
  CHECK_THROWS_AS(ladder_expectation_oracle(s, -1, 0), std::invalid_argument);
}

TEST_CASE("moment_series labels and pads automatically", "[moments]") {
  const auto grid = TimeGrid::uniform(0.0, 0.5, 11);
  const auto series = moment_series({2, 0, 20.0, default_theta}, Quadrature::p, 4, KerrParams{}, grid, 0, 2);
  CHECK(series.observable == "p^4");
  REQUIRE(series.size() == 11);
  const auto direct = evolved({2, 0, 20.0, default_theta}, 0.25, 4);
  CHECK(series.values[5] == Approx(p_moment_oracle(direct, 4)).epsilon(1e-12));
  CHECK_THROWS_AS(moment_series({1, 0, 1.0, 0.0}, Quadrature::x, 0, KerrParams{}, grid), std::invalid_argument);
}
