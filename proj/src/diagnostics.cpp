#include "bubble/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <vector>

#include "bubble/numerics.hpp"
#include "bubble/solver.hpp"

namespace bubble {

double energy_e(const SimState& s, const Grid& g, const FluidParams& p, int order,
                Mode mode) {
    if (order != 0 && order != 1)
        throw std::invalid_argument("energy_e: order must be 0 or 1");
    const RadiusField f = local_fields(s, g, p, mode);
    const double slope = boundary_pin_slope(s.radius, p, mode);
    const double c0sq = f.c[0] * f.c[0];

    if (order == 0) {
        const double field = 0.5 * trapz_x(s.u.square() + f.c.square() * s.q.square(), g);
        const double fval = boundary_pin(s.radius, p, mode);
        return field + 0.5 * c0sq * fval * fval / slope;
    }
    // Time derivatives from the evolution equations, momentum in the same
    // conservative pressure form and stencils the solver steps.
    const ArrayXd xi2 = g.xi.square();
    const ArrayXd r2 = f.r.square();
    const ArrayXd dtq = d_dxi(r2 * s.u, g.dxi) / xi2;
    ArrayXd dtu;
    if (mode == Mode::nonlinear) {
        const ArrayXd pressure = (p.ca / 2.0) * ((1.0 + s.q).pow(-p.gamma) - 1.0);
        dtu = -r2 / xi2 * d_dxi(pressure, g.dxi);
    } else {
        dtu = (p.ca * p.gamma / 2.0) * d_dxi(s.q, g.dxi);
    }
    const double field = 0.5 * trapz_x(dtu.square() + f.c.square() * dtq.square(), g);
    return field + 0.5 * c0sq * slope * s.u[0] * s.u[0];
}

double conserved_energy(const SimState& s, const Grid& g, const FluidParams& p) {
    // Entropy in terms of q: rho^(gamma-1) = (1+q)^(1-gamma), 1/rho = 1+q.
    const ArrayXd entropy = (p.ca / (2.0 * (p.gamma - 1.0)))
        * ((1.0 + s.q).pow(1.0 - p.gamma) - p.gamma + (p.gamma - 1.0) * (1.0 + s.q));
    const double field = trapz_x(0.5 * s.u.square() + entropy, g);

    const double R = s.radius;
    const double work = (1.0 / (3.0 * p.gamma0 - 3.0)) * (p.ca / 2.0 + 2.0 / p.we)
                          * (std::pow(R, 3.0 - 3.0 * p.gamma0) - 1.0)
                      + (1.0 / p.we) * (R * R - 1.0)
                      + (p.ca / 6.0) * (R * R * R - 1.0);
    return field + work;
}

double kss_density(const SimState& s, const WaveField& w, const Grid& g,
                   const FluidParams& p, Mode mode) {
    const RadiusField f = local_fields(s, g, p, mode);
    // c r^2 dphi/dx = c u / rho, exact through the potential's definition.
    const ArrayXd grad = (mode == Mode::nonlinear)
        ? (f.c * (1.0 + s.q) * s.u).eval()
        : (p.c0() * s.u).eval();
    const double interior =
        trapz_x((w.dtphi.square() + grad.square()) / g.xi, g)
        + trapz_x(w.phi.square() / g.xi.cube(), g);
    const double bgrad = (mode == Mode::nonlinear)
        ? grad[0] + f.c[0] * (1.0 + s.q[0]) / f.r[0] * w.phi[0]
        : grad[0] + p.c0() * w.phi[0];
    return interior + w.dtphi[0] * w.dtphi[0] + bgrad * bgrad;
}

DecayComparison decay_comparison(const RunSeries& series) {
    DecayComparison d;
    d.err = (series.F_R - series.calR).abs();
    const Index m = series.t.size();
    const double t_end = series.t[m - 1];
    const double lo = t_end / 4.0;
    const double hi = 3.0 * t_end / 4.0;

    std::vector<double> xs, ys;
    double peak = 0.0;
    for (Index k = 0; k < m; ++k) {
        const double t = series.t[k];
        if (t < lo || t > hi) continue;
        peak = std::max(peak, d.err[k]);
        xs.push_back(std::log(1.0 + series.cmin * t));
        ys.push_back(std::log(std::max(d.err[k], 1e-300)));
    }
    if (xs.size() < 50)
        throw std::invalid_argument("decay_comparison: fit window holds fewer than 50 samples");
    if (peak < 1e-14) {
        d.below_floor = true;
        d.exponent = std::numeric_limits<double>::quiet_NaN();
        return d;
    }
    const LineFit f = fit_line(Eigen::Map<ArrayXd>(xs.data(), xs.size()),
                               Eigen::Map<ArrayXd>(ys.data(), ys.size()));
    d.exponent = f.slope;
    return d;
}

EnvelopeFit fit_envelope(const ArrayXd& t, const ArrayXd& y) {
    EnvelopeFit out;
    out.period = std::numeric_limits<double>::quiet_NaN();
    const Index m = t.size();

    // Hysteresis crossing detection: a sign change counts only once the
    // excursion since the previously counted crossing clears the noise guard.
    // Micro-wiggles near a genuine zero or at the floor never fragment the
    // peak sequence. The period comes from the median crossing gap, which a
    // single floor-shifted late crossing cannot move.
    const double guard = 3.5e-4 * y.abs().maxCoeff();
    std::vector<double> cross_t, pt, pa;
    double seg_peak = 0.0, seg_peak_t = 0.0;
    Index seg_peak_i = 0;
    for (Index i = 0; i + 1 < m; ++i) {
        if (std::abs(y[i]) > seg_peak) {
            seg_peak = std::abs(y[i]);
            seg_peak_t = t[i];
            seg_peak_i = i;
        }
        if (y[i] != 0.0 && y[i] * y[i + 1] < 0.0 && seg_peak >= guard) {
            const double tc = t[i] - y[i] * (t[i + 1] - t[i]) / (y[i + 1] - y[i]);
            // The segment before the first crossing counts only when its peak
            // is interior; a maximum on the window edge is a truncated lobe.
            if (!cross_t.empty() || seg_peak_i > 0) {
                pt.push_back(seg_peak_t);
                pa.push_back(std::log(seg_peak));
            }
            cross_t.push_back(tc);
            seg_peak = 0.0;
        }
    }

    if (pt.size() >= 3) {
        out.peaks = static_cast<int>(pt.size());
        out.rate = fit_line(Eigen::Map<ArrayXd>(pt.data(), pt.size()),
                            Eigen::Map<ArrayXd>(pa.data(), pa.size())).slope;
        std::vector<double> gaps(cross_t.size() - 1);
        for (size_t c = 0; c + 1 < cross_t.size(); ++c)
            gaps[c] = cross_t[c + 1] - cross_t[c];
        std::nth_element(gaps.begin(), gaps.begin() + gaps.size() / 2, gaps.end());
        out.period = 2.0 * gaps[gaps.size() / 2];
        return out;
    }

    // No oscillation: the series is its own envelope.
    std::vector<double> xs, ys;
    for (Index i = 0; i < m; ++i) {
        if (std::abs(y[i]) > 0.0) {
            xs.push_back(t[i]);
            ys.push_back(std::log(std::abs(y[i])));
        }
    }
    if (xs.size() < 2) throw std::invalid_argument("fit_envelope: series is identically zero");
    out.rate = fit_line(Eigen::Map<ArrayXd>(xs.data(), xs.size()),
                        Eigen::Map<ArrayXd>(ys.data(), ys.size())).slope;
    return out;
}

ProbeSeries pointwise_decay_probe(const Trajectory& traj, double xi_probe, double xi_b) {
    const double cmin = traj.series.cmin;
    const double t_end = traj.series.t[traj.series.t.size() - 1];
    const double lag = (xi_probe - 1.0) / cmin;
    ProbeSeries ps;
    ps.t_enter = (xi_b - 1.0) / cmin + lag;
    ps.t_exit = t_end - lag;
    if (ps.t_enter > ps.t_exit)
        throw std::runtime_error("pointwise_decay_probe: probe never enters the decay region");

    const size_t m = traj.snapshots.size();
    ps.t = ArrayXd(m);
    ps.value = ArrayXd(m);
    for (size_t k = 0; k < m; ++k) {
        ps.t[k] = traj.snap_times[k];
        ps.value[k] = std::abs(lerp_grid(traj.grid, traj.snapshots[k].u, xi_probe))
                    + std::abs(lerp_grid(traj.grid, traj.snapshots[k].q, xi_probe));
    }
    return ps;
}

void finalize_series(Trajectory& traj, Xi0Source xi0_source) {
    const LinearResponse lr = linear_response(traj, xi0_source);
    traj.series.calR = lr.samples;
    traj.series.err = (traj.series.F_R - traj.series.calR).abs();
}

}  // namespace bubble
