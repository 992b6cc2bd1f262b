#pragma once

#include <Eigen/Core>

#include "bubble/grid.hpp"
#include "bubble/waves.hpp"

namespace bubble {

/// Per-step boundary and integral diagnostics of a run. All arrays share the
/// length of t; cmin/cmax are the run-wide extremes of the characteristic
/// speed c r^2 / xi^2.
struct RunSeries {
    ArrayXd t;
    ArrayXd R, u0, q0, psi0, dtpsi0, wB0, wF0;
    ArrayXd e0, e1, e_total;
    ArrayXd F_R, calR, err;
    ArrayXd kss0;
    double cmin = 0.0;
    double cmax = 0.0;
};

// Energy functional of order j (0 or 1): the field part integrates
// (d^j/dt^j u)^2 + c^2 (d^j/dt^j q)^2 over dx, plus the boundary term
// c^2|0 f'(R)^-1 (d^j/dt^j f(R))^2, all halved. Time derivatives are taken
// from the evolution equations, never from differencing stored series.
double energy_e(const SimState& s, const Grid& g, const FluidParams& p, int order,
                Mode mode = Mode::nonlinear);

// The exactly conserved functional of the flow: kinetic energy plus entropy
// H(rho) in the liquid plus the boundary work W(R). Zero at equilibrium.
double conserved_energy(const SimState& s, const Grid& g, const FluidParams& p);

// Instantaneous weighted (KSS-type) density at derivative order zero:
// xi^-1 and xi^-3 weighted interior terms plus the two boundary squares.
double kss_density(const SimState& s, const WaveField& w, const Grid& g,
                   const FluidParams& p, Mode mode = Mode::nonlinear);

/// Power-law fit of |F_R - calR| against 1 + cmin*t over the middle half of
/// the run. below_floor is set instead of an exponent when the error sits at
/// rounding level.
struct DecayComparison {
    ArrayXd err;
    double exponent = 0.0;
    bool below_floor = false;
};
DecayComparison decay_comparison(const RunSeries& series);

/// Exponential-envelope fit of a real series: peaks of |y| between
/// consecutive sign changes give the rate; crossing spacing gives the period.
/// A series without sign changes is fitted directly on log|y| (period NaN).
struct EnvelopeFit {
    double rate = 0.0;
    double period = 0.0;
    int peaks = 0;
};
EnvelopeFit fit_envelope(const ArrayXd& t, const ArrayXd& y);

/// |u| + |q| probed at fixed xi, with the admissibility window of the
/// backward acoustic cone attached (t_enter > t_exit means the probe never
/// enters the region).
struct ProbeSeries {
    ArrayXd t;
    ArrayXd value;
    double t_enter = 0.0;
    double t_exit = 0.0;
};
ProbeSeries pointwise_decay_probe(const Trajectory& traj, double xi_probe, double xi_b);

// Fills the calR and err columns of a finished trajectory from the linear
// response; everything else is recorded during integration.
void finalize_series(Trajectory& traj, Xi0Source xi0_source);

}  // namespace bubble
