#pragma once

#include <complex>
#include <vector>

#include <Eigen/Core>

#include "bubble/grid.hpp"

namespace bubble {

struct Trajectory;  // defined in solver.hpp

/// Velocity potential, the reduced field psi = r*phi, and the pressure-wave
/// split. The potential is normalized to zero at the outer grid edge; the
/// identity wb + wf = 2*dtpsi holds exactly nodewise.
struct WaveField {
    ArrayXd phi;
    ArrayXd dtphi;
    ArrayXd psi;
    ArrayXd dtpsi;
    ArrayXd wb;  // backward (bubble-bound) pressure wave
    ArrayXd wf;  // forward (outgoing) pressure wave
};

// Pure post-processing of a state. Nonlinear mode integrates u/(rho r^2)
// inward from the zero-normalized far field and uses the Bernoulli relation
// for dtphi; the radial flux r^2 dpsi/dx is evaluated through the closed form
// (1+q)(r u + phi). Linear mode uses the equilibrium-linearized formulas.
WaveField reconstruct_waves(const SimState& s, const Grid& g, const FluidParams& p,
                            Mode mode = Mode::nonlinear);

enum class CharDir { backward, forward };

/// A characteristic curve in (xi, t); samples ordered by increasing t.
struct CharPath {
    std::vector<double> xi;
    std::vector<double> t;
    CharDir direction = CharDir::backward;
};

// Integrates d(xi)/dt = -speed (backward) or +speed (forward) through the
// stored speed field of a trajectory with midpoint steps and bilinear
// space-time interpolation, both ways from the start point. Terminates at
// t=0, t_end, xi=1 or the outer edge. Throws std::runtime_error when the
// start lies outside the stored window or the storage cadence is too coarse.
CharPath trace_characteristic(const Trajectory& traj, double start_xi, double start_t,
                              CharDir dir);

// Foot points xi0(t): the xi at time 0 of the backward characteristic through
// (1, t), for each requested t. Entries are NaN when the path leaves the grid
// through the outer edge before reaching t=0.
ArrayXd xi0_map(const Trajectory& traj, const ArrayXd& t_values);

enum class Xi0Source { traced, linear };

/// The two-eigenvalue boundary response: initial diagonalized vector Y(0) and
/// the forced linear-response series evaluated on the run's time mesh.
struct LinearResponse {
    Eigenpair eig;
    Eigen::Vector2cd y0;
    ArrayXd t;
    ArrayXd samples;
};

// calR(t): the decaying two-exponential launched from Y(0) plus the
// convolution of the eigenkernel against the initial backward wave sampled
// along xi0. Trapezoid quadrature on the run mesh; xi0 either traced through
// the stored speed field or taken as 1 + c0 t.
LinearResponse linear_response(const Trajectory& traj, Xi0Source xi0_source);

// Y(t) = [[1, -lambda2], [1, -lambda1]] * [dtpsi|0, psi|0]^T from the stored
// boundary series, linearly interpolated in t.
Eigen::Vector2cd y_vector(const Trajectory& traj, double t);

// Defect of the stored boundary series against the exact boundary oscillator:
// d2psi + b1 dtpsi + b0 psi + a wb at x=0, with the second time derivative
// from centered differences on the snapshot mesh. Throws std::runtime_error
// when the snapshot cadence cannot support the stencil at t.
double boundary_ode_residual(const Trajectory& traj, double t);

// The equilibrium limits of (b1, b0, a) above.
struct BoundaryOdeCoeffs {
    double b1 = 0.0;
    double b0 = 0.0;
    double a = 0.0;
};
BoundaryOdeCoeffs boundary_ode_coeffs(const SimState& s, const Grid& g,
                                      const FluidParams& p, Mode mode);

}  // namespace bubble
