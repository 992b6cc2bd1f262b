#pragma once

#include <vector>

#include "bubble/diagnostics.hpp"
#include "bubble/grid.hpp"
#include "bubble/waves.hpp"

namespace bubble {

enum class OuterBC { absorbing, reflecting };

struct SolverConfig {
    Mode mode = Mode::nonlinear;
    double cfl = 0.4;          // in (0, 0.9]
    double t_end = 10.0;
    double snapshot_dt = 0.5;
    double dissipation = 0.0;  // fourth-difference coefficient, 0 in production runs
    OuterBC outer_bc = OuterBC::absorbing;

    void validate() const;
};

struct StateDeriv {
    ArrayXd du;
    ArrayXd dq;
    double dR = 0.0;
    double dpsi_outer = 0.0;
};

/// Everything a run produces: sparse state snapshots for output, the per-step
/// diagnostic series, and the dense characteristic-speed history the tracer
/// interpolates. speed[k] matches series.t[k].
struct Trajectory {
    Grid grid;
    FluidParams params;
    SolverConfig cfg;
    std::vector<double> snap_times;
    std::vector<SimState> snapshots;
    RunSeries series;
    std::vector<ArrayXd> speed;
    WaveField waves0;  // reconstruction of the initial state
};

// Semi-discrete right-hand side: dq = d/dx(r^2 u), du = -r^2 d/dx P(q) in the
// conservative pressure form (equal to c^2 r^2 d/dx q in the continuum),
// dR = u|0, with d/dx = xi^-2 d/dxi, central interior stencils and one-sided
// closures at both ends. The surface node's dq follows the pin chain rule;
// with the absorbing closure, psi_outer evolves by the boundary Bernoulli
// relation d(psi)/dt = r dtphi + u phi evaluated at the outer node.
StateDeriv rhs(const SimState& s, const Grid& g, const FluidParams& p,
               const SolverConfig& cfg);

// Characteristic closure of the outer node. Absorbing: the outgoing invariant
// u - c q is linearly extrapolated from the two neighbors while the incoming
// one is pinned to the radiating near field, u + c q = -psi_outer/xi_max^2
// (zero for a truncation-free outgoing spherical wave). Reflecting: u = 0.
void apply_outer_bc(SimState& s, const Grid& g, const FluidParams& p,
                    const SolverConfig& cfg);

// Re-pins the surface node and closes the outer node; called after every
// stage and every completed step.
void enforce_boundary(SimState& s, const Grid& g, const FluidParams& p,
                      const SolverConfig& cfg);

// Largest characteristic speed c r^2 / xi^2 over the grid; the CFL bound.
double max_char_speed(const SimState& s, const Grid& g, const FluidParams& p,
                      const SolverConfig& cfg);

// One classical RK4 step. Throws std::invalid_argument when dt violates the
// CFL bound of the input state.
SimState step(const SimState& s, double dt, const Grid& g, const FluidParams& p,
              const SolverConfig& cfg);

// Integrates to t_end with dt recomputed each step from the CFL bound,
// clamped to land exactly on snapshot times. Records the diagnostic series
// every step. Deterministic for identical inputs. Solver errors are rethrown
// with the failing time attached.
Trajectory run(const SimState& initial, const Grid& g, const FluidParams& p,
               const SolverConfig& cfg);

}  // namespace bubble
