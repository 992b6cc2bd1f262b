#include "bubble/model.hpp"

#include <cmath>
#include <stdexcept>

namespace bubble {

double FluidParams::c0() const {
    return std::sqrt(ca * gamma / 2.0);
}

double FluidParams::r_bar() const {
    return std::pow(1.0 + (ca / 2.0) * (we / 2.0), 1.0 / (3.0 * gamma0 - 1.0));
}

void FluidParams::validate() const {
    if (!(ca > 0.0)) throw std::invalid_argument("ca must be > 0");
    if (!(we > 0.0)) throw std::invalid_argument("we must be > 0");
    if (!(gamma > 1.0)) throw std::invalid_argument("gamma must be > 1");
    if (!(gamma0 > 1.0)) throw std::invalid_argument("gamma0 must be > 1");
}

double boundary_pressure(double radius, const FluidParams& p) {
    if (!(radius > 0.0)) throw std::domain_error("boundary_pressure: radius must be > 0");
    return (p.ca / 2.0 + 2.0 / p.we) * std::pow(radius, -3.0 * p.gamma0)
         - (2.0 / p.we) / radius;
}

double boundary_pressure_slope(double radius, const FluidParams& p) {
    if (!(radius > 0.0)) throw std::domain_error("boundary_pressure_slope: radius must be > 0");
    return -3.0 * p.gamma0 * (p.ca / 2.0 + 2.0 / p.we) * std::pow(radius, -3.0 * p.gamma0 - 1.0)
         + (2.0 / p.we) / (radius * radius);
}

double boundary_pressure_slope_eq(const FluidParams& p) {
    return -3.0 * p.gamma0 * (p.ca / 2.0 + 2.0 / p.we) + 2.0 / p.we;
}

namespace {

// (2/ca) * boundary_pressure(R); the perturbation law is bracket^(-1/gamma) - 1
// and requires bracket > 0, i.e. R in (0, r_bar).
double pressure_bracket(double radius, const FluidParams& p) {
    return (1.0 + 4.0 / (p.ca * p.we)) * std::pow(radius, -3.0 * p.gamma0)
         - (4.0 / (p.ca * p.we)) / radius;
}

}  // namespace

double boundary_perturbation(double radius, const FluidParams& p) {
    if (!(radius > 0.0) || !(radius < p.r_bar()))
        throw std::domain_error("boundary_perturbation: radius outside (0, r_bar)");
    const double b = pressure_bracket(radius, p);
    if (!(b > 0.0))
        throw std::domain_error("boundary_perturbation: pressure bracket not positive");
    return std::pow(b, -1.0 / p.gamma) - 1.0;
}

double boundary_perturbation_slope(double radius, const FluidParams& p) {
    const double b = pressure_bracket(radius, p);
    if (!(b > 0.0))
        throw std::domain_error("boundary_perturbation_slope: radius outside (0, r_bar)");
    const double db = (2.0 / p.ca) * boundary_pressure_slope(radius, p);
    return -(1.0 / p.gamma) * std::pow(b, -1.0 / p.gamma - 1.0) * db;
}

double boundary_perturbation_slope_eq(const FluidParams& p) {
    const double c0sq = p.ca * p.gamma / 2.0;
    return -boundary_pressure_slope_eq(p) / c0sq;
}

double radius_from_perturbation(double qb, const FluidParams& p) {
    const double rb = p.r_bar();
    double lo = 1e-12;
    double hi = rb * (1.0 - 1e-12);
    // f is increasing: range check against the bracket endpoints.
    if (qb <= boundary_perturbation(lo, p) || qb >= boundary_perturbation(hi, p))
        throw std::out_of_range("radius_from_perturbation: target outside attainable range");
    if (qb == 0.0) return 1.0;

    double r = 1.0;  // equilibrium is always an interior starting point
    const double tol = 1e-12;
    for (int it = 0; it < 200; ++it) {
        const double fr = boundary_perturbation(r, p) - qb;
        if (std::abs(fr) <= tol * (1.0 + std::abs(qb))) return r;
        if (fr > 0.0) hi = r; else lo = r;
        const double dfr = boundary_perturbation_slope(r, p);
        double next = r - fr / dfr;
        if (!(next > lo) || !(next < hi)) next = 0.5 * (lo + hi);  // bisection safeguard
        r = next;
    }
    throw std::runtime_error("radius_from_perturbation: no convergence after 200 iterations");
}

double sound_speed(double q, const FluidParams& p) {
    if (!(q > -1.0)) throw std::domain_error("sound_speed: q must be > -1");
    return p.c0() * std::pow(1.0 + q, -(p.gamma + 1.0) / 2.0);
}

Eigenpair eigenvalues(const FluidParams& p) {
    const double fpt = boundary_pressure_slope_eq(p);
    const double c0 = p.c0();
    // Degenerate exactly when the perturbation slope f'(1) = -fpt/c0^2 equals 4.
    const double fp1 = -fpt / (c0 * c0);
    if (std::abs(fp1 - 4.0) <= 1e-10)
        throw std::domain_error("eigenvalues: degenerate spectrum (f'(1) = 4)");

    Eigenpair e;
    const double b = fpt / c0;     // lambda^2 - b lambda - fpt = 0
    e.discriminant = b * b + 4.0 * fpt;
    if (e.discriminant < 0.0) {
        const double im = std::sqrt(-e.discriminant) / 2.0;
        e.lambda1 = {b / 2.0, im};
        e.lambda2 = {b / 2.0, -im};
    } else {
        const double rt = std::sqrt(e.discriminant);
        e.lambda1 = {(b + rt) / 2.0, 0.0};
        e.lambda2 = {(b - rt) / 2.0, 0.0};
    }
    return e;
}

double bernoulli_head(double q, const FluidParams& p) {
    if (!(q > -1.0)) throw std::domain_error("bernoulli_head: q must be > -1");
    return -(p.ca * p.gamma / (2.0 * (p.gamma - 1.0)))
         * (std::pow(1.0 + q, 1.0 - p.gamma) - 1.0);
}

double pressure_perturbation(double q, const FluidParams& p) {
    if (!(q > -1.0)) throw std::domain_error("pressure_perturbation: q must be > -1");
    return (p.ca / 2.0) * (std::pow(1.0 + q, -p.gamma) - 1.0);
}

double radius_observable(double radius, const FluidParams& p) {
    return radius * bernoulli_head(boundary_perturbation(radius, p), p);
}

}  // namespace bubble
