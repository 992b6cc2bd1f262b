#include <cmath>
#include <complex>
#include <random>

#include <doctest.h>

#include "bubble/model.hpp"

using namespace bubble;

namespace {

const FluidParams kDefault{};  // Ca=2, We=2, gamma=4, gamma0=4/3: c0=2, ft'(1)=-7

// 5-point centered first derivative, used wherever a spec check asks for a
// finite-difference route independent of the closed forms.
template <typename F>
double fd5(F f, double x, double h) {
    return (-f(x + 2 * h) + 8 * f(x + h) - 8 * f(x - h) + f(x - 2 * h)) / (12.0 * h);
}

FluidParams random_params(std::mt19937& rng) {
    std::uniform_real_distribution<double> caw(0.5, 8.0);
    std::uniform_real_distribution<double> gam(1.0 + 1e-3, 5.0);
    FluidParams p;
    p.ca = caw(rng);
    p.we = caw(rng);
    p.gamma = gam(rng);
    p.gamma0 = gam(rng);
    return p;
}

}  // namespace

TEST_CASE("derived equilibrium quantities") {
    CHECK(kDefault.c0() == doctest::Approx(2.0).epsilon(1e-15));
    CHECK(kDefault.r_bar() == doctest::Approx(std::cbrt(2.0)).epsilon(1e-15));
    CHECK(boundary_pressure_slope_eq(kDefault) == doctest::Approx(-7.0).epsilon(1e-15));
    CHECK(boundary_perturbation_slope_eq(kDefault) == doctest::Approx(1.75).epsilon(1e-15));
}

TEST_CASE("boundary pressure law") {
    CHECK(boundary_pressure(1.0, kDefault) == doctest::Approx(kDefault.ca / 2).epsilon(1e-15));
    // direct arithmetic: 2*2^-4 - 2^-1
    CHECK(boundary_pressure(2.0, kDefault) == doctest::Approx(-0.375).epsilon(1e-15));
    const double fd = fd5([&](double r) { return boundary_pressure(r, kDefault); }, 1.0, 1e-3);
    CHECK(boundary_pressure_slope(1.0, kDefault) == doctest::Approx(fd).epsilon(1e-9));
    CHECK_THROWS_AS(boundary_pressure(0.0, kDefault), std::domain_error);
}

TEST_CASE("boundary perturbation law") {
    CHECK(boundary_perturbation(1.0, kDefault) == 0.0);
    // frozen high-precision evaluation of the closed form at R=1.1
    CHECK(boundary_perturbation(1.1, kDefault)
          == doctest::Approx(0.21628725430771141723).epsilon(1e-14));
    CHECK(boundary_perturbation(1.05, kDefault) > boundary_perturbation(1.0, kDefault));
    CHECK(boundary_perturbation(1.0, kDefault) > boundary_perturbation(0.95, kDefault));
    CHECK_THROWS_AS(boundary_perturbation(-1.0, kDefault), std::domain_error);
    CHECK_THROWS_AS(boundary_perturbation(kDefault.r_bar(), kDefault), std::domain_error);
}

TEST_CASE("perturbation law is strictly increasing on a sampled mesh") {
    const double rb = kDefault.r_bar();
    double prev = boundary_perturbation(1e-3, kDefault);
    for (int i = 1; i <= 400; ++i) {
        const double r = 1e-3 + (rb * (1 - 1e-9) - 1e-3) * i / 400.0;
        const double cur = boundary_perturbation(r, kDefault);
        CHECK(cur > prev);
        prev = cur;
    }
}

TEST_CASE("radius from perturbation") {
    CHECK(radius_from_perturbation(0.0, kDefault) == 1.0);
    const double q107 = boundary_perturbation(1.07, kDefault);
    CHECK(radius_from_perturbation(q107, kDefault) == doctest::Approx(1.07).epsilon(1e-10));
    const double q11 = boundary_perturbation(1.1, kDefault);
    CHECK(radius_from_perturbation(q11, kDefault) == doctest::Approx(1.1).epsilon(1e-10));
    CHECK_THROWS_AS(radius_from_perturbation(1e12, kDefault), std::out_of_range);
    CHECK_THROWS_AS(radius_from_perturbation(-1.0 + 1e-15, kDefault), std::out_of_range);
}

TEST_CASE("inverse identity across the admissible range") {
    const double hi = std::min(2.0, kDefault.r_bar() - 0.01);
    for (int i = 0; i <= 200; ++i) {
        const double r = 0.5 + (hi - 0.5) * i / 200.0;
        const double back = radius_from_perturbation(boundary_perturbation(r, kDefault), kDefault);
        CHECK(back == doctest::Approx(r).epsilon(1e-10));
    }
}

TEST_CASE("sound speed") {
    CHECK(sound_speed(0.0, kDefault) == doctest::Approx(2.0).epsilon(1e-15));
    CHECK(sound_speed(1.0, kDefault)
          == doctest::Approx(2.0 * std::pow(2.0, -2.5)).epsilon(1e-15));
    CHECK(sound_speed(0.1, kDefault) < sound_speed(0.0, kDefault));
    CHECK(sound_speed(0.0, kDefault) < sound_speed(-0.1, kDefault));
    CHECK_THROWS_AS(sound_speed(-1.0, kDefault), std::domain_error);
}

TEST_CASE("eigenvalues of the boundary oscillator") {
    const Eigenpair e = eigenvalues(kDefault);
    CHECK(e.lambda1.real() == doctest::Approx(-1.75).epsilon(1e-12));
    CHECK(std::abs(e.lambda1.imag()) == doctest::Approx(1.9843134832984429).epsilon(1e-6));
    CHECK(e.lambda2 == std::conj(e.lambda1));
    CHECK_FALSE(e.degenerate);

    // degenerate exactly when f'(1)=4: Ca=2, We=2, gamma=1.5, gamma0=7/6
    FluidParams deg;
    deg.ca = 2.0;
    deg.we = 2.0;
    deg.gamma = 1.5;
    deg.gamma0 = 7.0 / 6.0;
    CHECK(boundary_perturbation_slope_eq(deg) == doctest::Approx(4.0).epsilon(1e-14));
    CHECK_THROWS_AS(eigenvalues(deg), std::domain_error);
}

TEST_CASE("eigenvalue identities over random parameters") {
    std::mt19937 rng(12345);
    int checked = 0;
    for (int trial = 0; trial < 1000; ++trial) {
        const FluidParams p = random_params(rng);
        const double fpt = boundary_pressure_slope_eq(p);
        if (std::abs(boundary_perturbation_slope_eq(p) - 4.0) <= 1e-8) continue;
        const Eigenpair e = eigenvalues(p);
        CHECK(e.lambda1.real() < 0.0);
        CHECK(e.lambda2.real() < 0.0);
        const std::complex<double> sum = e.lambda1 + e.lambda2;
        const std::complex<double> prod = e.lambda1 * e.lambda2;
        CHECK(std::abs(sum - fpt / p.c0()) <= 1e-12 * std::abs(fpt / p.c0()));
        CHECK(std::abs(prod + fpt) <= 1e-12 * std::abs(fpt));
        ++checked;
    }
    CHECK(checked > 900);
}

TEST_CASE("identity c0^2 f'(1) = -ftilde'(1) over random parameters") {
    std::mt19937 rng(777);
    for (int trial = 0; trial < 1000; ++trial) {
        const FluidParams p = random_params(rng);
        const double fpt = boundary_pressure_slope_eq(p);
        const double c0sq = p.ca * p.gamma / 2.0;
        const double fp_fd =
            fd5([&](double r) { return boundary_perturbation(r, p); }, 1.0,
                1e-3 * std::min(1.0, p.r_bar() - 1.0));
        CHECK(std::abs(c0sq * fp_fd + fpt) <= 1e-10 * std::abs(fpt));
    }
}

TEST_CASE("Bernoulli head") {
    CHECK(bernoulli_head(0.0, kDefault) == 0.0);
    CHECK(bernoulli_head(1.0, kDefault) == doctest::Approx(7.0 / 6.0).epsilon(1e-15));
    const double gp0 = fd5([&](double q) { return bernoulli_head(q, kDefault); }, 0.0, 1e-4);
    CHECK(gp0 == doctest::Approx(4.0).epsilon(1e-10));  // g'(0) = c0^2
    CHECK_THROWS_AS(bernoulli_head(-1.0, kDefault), std::domain_error);
}

TEST_CASE("Bernoulli head is quadratically close to its linearization") {
    // |g(q) - c0^2 q| <= K q^2 on |q| <= 0.1; K frozen from the curvature bound
    // (gamma c0^2 / 2) * 0.9^{-gamma-1} ~ 13.55 for the default parameters.
    const double K = 14.0;
    for (int i = -100; i <= 100; ++i) {
        const double q = 0.1 * i / 100.0;
        CHECK(std::abs(bernoulli_head(q, kDefault) - 4.0 * q) <= K * q * q);
    }
}

TEST_CASE("radius observable") {
    CHECK(radius_observable(1.0, kDefault) == 0.0);
    const double fd = fd5([&](double r) { return radius_observable(r, kDefault); }, 1.0, 1e-4);
    CHECK(fd == doctest::Approx(7.0).epsilon(1e-6));  // F'(1) = -ftilde'(1)
    CHECK(radius_observable(1.01, kDefault) > 0.0);
    CHECK(radius_observable(0.99, kDefault) < 0.0);
}

TEST_CASE("parameter validation") {
    FluidParams bad = kDefault;
    bad.gamma = 1.0;
    CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
    bad = kDefault;
    bad.ca = 0.0;
    CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
}
