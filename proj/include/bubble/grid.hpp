#pragma once

#include <string>

#include <Eigen/Core>

#include "bubble/model.hpp"

namespace bubble {

using Eigen::ArrayXd;
using Eigen::Index;

/// Which closure the dynamics and post-processing use: the full nonlinear
/// fields, or the linearization about equilibrium (c = c0, r = xi, boundary
/// pin q|0 = f'(1)(R-1)).
enum class Mode { nonlinear, linear };

/// Uniform grid in the coordinate xi = (1+3x)^(1/3); node 0 sits exactly on
/// the bubble surface xi = 1. x is the Lagrangian mass coordinate.
struct Grid {
    Index n = 0;
    double dxi = 0.0;
    ArrayXd xi;
    ArrayXd x;  // x_i = (xi_i^3 - 1)/3
};

Grid build_grid(double xi_max, Index n);

/// Complete dynamical state: liquid velocity u and specific-volume
/// perturbation q per node, bubble radius, and time. psi_outer tracks the
/// radiated field at the truncated outer edge (the part of psi = r*phi that
/// has already left the domain); the absorbing closure needs it and it stays
/// zero otherwise.
struct SimState {
    ArrayXd u;
    ArrayXd q;
    double radius = 1.0;
    double time = 0.0;
    double psi_outer = 0.0;
};

/// Eulerian radius and sound speed per node, derived from a state.
struct RadiusField {
    ArrayXd r;  // strictly increasing, r[0] = bubble radius
    ArrayXd c;
};

// r_i = (R^3 + 3 x_i + 3 * integral of q from 0 to x_i)^(1/3), cumulative
// trapezoid on the x mesh; c_i = sound_speed(q_i). Throws std::domain_error
// if the cube-root argument loses positivity (unphysical state).
RadiusField radius_field(const SimState& s, const Grid& g, const FluidParams& p);

// Mode-consistent fields: nonlinear -> radius_field, linear -> r = xi, c = c0.
RadiusField local_fields(const SimState& s, const Grid& g, const FluidParams& p, Mode mode);

// Boundary pin of the surface node: f(R) in nonlinear mode, f'(1)(R-1) in
// linear mode, and the matching d(pin)/dR.
double boundary_pin(double radius, const FluidParams& p, Mode mode);
double boundary_pin_slope(double radius, const FluidParams& p, Mode mode);

enum class InitKind { equilibrium, q_bump, outgoing_pulse, file };

struct InitSpec {
    InitKind kind = InitKind::equilibrium;
    double amplitude = 0.01;
    double center = 3.0;
    double width = 0.25;
    std::string file;
};

// Builds initial data on the grid. Gaussian bumps are truncated to zero
// outside |xi - center| <= 4*width and must vanish at the surface
// (center - 4*width > 1, else std::invalid_argument). File data is loaded
// and rejected if its compatibility residuals exceed 1e-8.
SimState make_initial_data(const InitSpec& spec, const Grid& g, const FluidParams& p);

// Linear-mode pulse carrying no incoming wave at all: a truncated Gaussian q
// plus small boundary-attached correctors, with u solved nodewise so the
// discretely reconstructed incoming wave vanishes identically (continuum
// limit u = -c0 q - psi/xi^2, psi the moment integral of q). The correctors
// make the data meet the pinned surface's first three discrete compatibility
// orders, so the launched boundary oscillation decays cleanly at the
// eigenvalue rate once the outgoing part has left.
SimState incoming_free_pulse(double amplitude, double center, double width,
                             const Grid& g, const FluidParams& p);

// Purely outgoing free wave prescribed through a Gaussian psi profile
// (amplitude refers to psi). Carries no incoming component and leaves the
// bubble surface untouched; what the radiation-boundary experiments launch.
SimState free_wave_pulse(double amplitude, double center, double width,
                         const Grid& g, const FluidParams& p);

struct CompatReport {
    double cc0_residual = 0.0;  // |q(0) - f(R)|
    double cc1_residual = 0.0;  // |f'(R) u(0) - d/dx(r^2 u)(0)|, one-sided stencil
};

CompatReport check_compatibility(const ArrayXd& u_in, const ArrayXd& q_in, double r_in,
                                 const Grid& g, const FluidParams& p);

struct SmallnessNorms {
    double epsilon = 0.0;
    double epsilon_tilde = 0.0;
};

// Weighted Sobolev-type data norms: epsilon collects q, u and their first and
// second radial derivative combinations plus |f(R)|; epsilon_tilde the
// xi^2-weighted L2 norms. All L2 norms use the dx = xi^2 dxi measure.
SmallnessNorms smallness_norms(const SimState& s, const Grid& g, const FluidParams& p);

// Init-file exchange format: first line "# R=<value>", then "xi,u,q" header
// and one row per node. Strict parse; NaN/Inf and grid mismatches rejected.
void save_init_csv(const std::string& path, const SimState& s, const Grid& g);
SimState load_init_csv(const std::string& path, const Grid& g);

}  // namespace bubble
