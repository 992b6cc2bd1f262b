#pragma once

#include <complex>

namespace bubble {

/// Dimensionless constants of the liquid-bubble system. The liquid pressure is
/// (ca/2) rho^gamma, the bubble pressure (ca/2 + 2/we) R^(-3 gamma0), and the
/// surface tension 1/we. The equilibrium state is (u, rho, R) = (0, 1, 1).
struct FluidParams {
    double ca = 2.0;      // cavitation number, > 0
    double we = 2.0;      // Weber number, > 0
    double gamma = 4.0;   // liquid adiabatic exponent, > 1
    double gamma0 = 4.0 / 3.0;  // bubble polytropic exponent, > 1

    // Equilibrium sound speed sqrt(ca*gamma/2).
    double c0() const;
    // Upper radius bound (1 + (ca/2)(we/2))^(1/(3 gamma0 - 1)); the boundary
    // perturbation law is only invertible for R below this value.
    double r_bar() const;

    void validate() const;  // throws std::invalid_argument on a bad constant
};

/// Eigenvalues of the unperturbed boundary oscillator. Both have negative real
/// part; they coincide exactly when the boundary perturbation slope at R=1 is 4.
struct Eigenpair {
    std::complex<double> lambda1;
    std::complex<double> lambda2;
    double discriminant = 0.0;
    bool degenerate = false;
};

// Liquid pressure at the bubble surface as a function of radius:
// (ca/2 + 2/we) R^(-3 gamma0) - (2/we) R^(-1). Domain R > 0.
double boundary_pressure(double radius, const FluidParams& p);

// d/dR of boundary_pressure, closed form. Domain R > 0.
double boundary_pressure_slope(double radius, const FluidParams& p);

// Closed-form boundary_pressure_slope at the equilibrium radius R=1; negative
// for all admissible parameters, which is what damps the boundary oscillator.
double boundary_pressure_slope_eq(const FluidParams& p);

// Specific-volume perturbation q = 1/rho - 1 at the bubble surface implied by
// the pressure balance. Smooth and strictly increasing on (0, r_bar), zero at
// R=1. Throws std::domain_error outside (0, r_bar).
double boundary_perturbation(double radius, const FluidParams& p);

// d/dR of boundary_perturbation, closed form.
double boundary_perturbation_slope(double radius, const FluidParams& p);

// boundary_perturbation_slope at R=1; equals -boundary_pressure_slope_eq/c0^2.
double boundary_perturbation_slope_eq(const FluidParams& p);

// Inverse of boundary_perturbation on (0, r_bar): safeguarded Newton with a
// bisection fallback, tolerance 1e-12, 200-iteration cap. Throws
// std::out_of_range for targets outside the attainable range and
// std::runtime_error if the iteration fails to converge.
double radius_from_perturbation(double qb, const FluidParams& p);

// Specific sound speed c = c0 (1+q)^(-(gamma+1)/2). Domain q > -1.
double sound_speed(double q, const FluidParams& p);

// Both roots of lambda^2 - (ft'/c0) lambda - ft' with ft' the closed-form
// boundary-pressure slope at R=1. Throws std::domain_error when the spectrum
// is degenerate (|slope - 4| <= 1e-10 for the perturbation law).
Eigenpair eigenvalues(const FluidParams& p);

// Bernoulli head g(q) = -(ca*gamma/(2(gamma-1))) ((1+q)^(1-gamma) - 1); equals
// the material derivative of the velocity potential minus u^2/2. Domain q > -1.
double bernoulli_head(double q, const FluidParams& p);

// Pressure perturbation (ca/2)(rho^gamma - 1) = (ca/2)((1+q)^(-gamma) - 1);
// its negative q-derivative is c^2, which makes the conservative momentum
// flux and the chain-ruled form agree. Domain q > -1.
double pressure_perturbation(double q, const FluidParams& p);

// Radius observable F(R) = R * g(f(R)); vanishes at equilibrium and its slope
// there equals -boundary_pressure_slope_eq > 0.
double radius_observable(double radius, const FluidParams& p);

}  // namespace bubble
