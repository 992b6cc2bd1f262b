#include "bubble/waves.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "bubble/numerics.hpp"
#include "bubble/solver.hpp"

namespace bubble {

WaveField reconstruct_waves(const SimState& s, const Grid& g, const FluidParams& p,
                            Mode mode) {
    const Index n = g.n;
    WaveField w;
    if (mode == Mode::nonlinear) {
        const RadiusField f = radius_field(s, g, p);
        const ArrayXd cum = cumtrapz_x(s.u * (1.0 + s.q) / f.r.square(), g);
        w.phi = cum - cum[n - 1];  // phi(xi_max) = 0
        w.dtphi = -(p.ca * p.gamma / (2.0 * (p.gamma - 1.0)))
                    * ((1.0 + s.q).pow(1.0 - p.gamma) - 1.0)
                + 0.5 * s.u.square();
        w.psi = f.r * w.phi;
        w.dtpsi = f.r * w.dtphi + s.u * w.phi;
        // r^2 dpsi/dx = (1+q)(r u + phi), exact because r^2 dr/dx = 1+q.
        const ArrayXd flux = (1.0 + s.q) * (f.r * s.u + w.phi);
        w.wb = w.dtpsi + f.c * flux;
        w.wf = w.dtpsi - f.c * flux;
    } else {
        const double c0 = p.c0();
        ArrayXd cum(n);
        cum[0] = 0.0;
        for (Index i = 1; i < n; ++i)
            cum[i] = cum[i - 1] + 0.5 * (s.u[i] + s.u[i - 1]) * g.dxi;
        w.phi = cum - cum[n - 1];
        w.dtphi = c0 * c0 * s.q;
        w.psi = g.xi * w.phi;
        w.dtpsi = g.xi * w.dtphi;
        const ArrayXd flux = w.phi + g.xi * s.u;  // dpsi/dxi for psi = xi*phi
        w.wb = w.dtpsi + c0 * flux;
        w.wf = w.dtpsi - c0 * flux;
    }
    return w;
}

namespace {

// Bilinear sample of the stored characteristic-speed history.
struct SpeedField {
    const Trajectory& traj;

    double at(double xi, double t) const {
        const ArrayXd& tt = traj.series.t;
        const Index m = tt.size();
        const double* beg = tt.data();
        Index k = std::upper_bound(beg, beg + m, t) - beg;
        k = std::clamp<Index>(k - 1, 0, m - 2);
        const double wt = (t - tt[k]) / (tt[k + 1] - tt[k]);
        const Grid& g = traj.grid;
        double pos = (xi - 1.0) / g.dxi;
        Index i = std::clamp<Index>(static_cast<Index>(pos), 0, g.n - 2);
        const double wx = std::clamp(pos - static_cast<double>(i), 0.0, 1.0);
        const double lo = (1.0 - wx) * traj.speed[k][i] + wx * traj.speed[k][i + 1];
        const double hi = (1.0 - wx) * traj.speed[k + 1][i] + wx * traj.speed[k + 1][i + 1];
        return (1.0 - wt) * lo + wt * hi;
    }
};

void check_trace_preconditions(const Trajectory& traj, double start_xi, double start_t) {
    const ArrayXd& tt = traj.series.t;
    const Index m = tt.size();
    if (m < 2) throw std::runtime_error("trace: trajectory holds fewer than two time levels");
    if (start_t < tt[0] - 1e-12 || start_t > tt[m - 1] + 1e-12 ||
        start_xi < 1.0 - 1e-12 || start_xi > traj.grid.xi[traj.grid.n - 1] + 1e-12)
        throw std::runtime_error("trace: start point outside the stored window");
    const double max_gap = (tt.tail(m - 1) - tt.head(m - 1)).maxCoeff();
    if (max_gap > traj.grid.dxi / (2.0 * traj.series.cmax) * (1.0 + 1e-9))
        throw std::runtime_error("trace: stored cadence too coarse for the speed field");
}

// One midpoint step of d(xi)/dt = sgn * speed from ta to tb (either order).
double advance(const SpeedField& sf, double xi, double ta, double tb, double sgn) {
    const double h = tb - ta;
    const double xm = xi + 0.5 * h * sgn * sf.at(xi, ta);
    return xi + h * sgn * sf.at(xm, 0.5 * (ta + tb));
}

// Walks stored time levels from (xi, t) toward t_stop, clipping the last step
// at the radial boundaries. Appends visited points to the path arrays.
void march(const Trajectory& traj, const SpeedField& sf, double xi, double t,
           double t_stop, double sgn, std::vector<double>* out_xi,
           std::vector<double>* out_t) {
    const ArrayXd& tt = traj.series.t;
    const Index m = tt.size();
    const double xi_lo = 1.0;
    const double xi_hi = traj.grid.xi[traj.grid.n - 1];
    const bool down = t_stop < t;
    const double* beg = tt.data();

    Index k;
    if (down) {
        k = std::upper_bound(beg, beg + m, t - 1e-15) - beg - 1;
    } else {
        k = std::lower_bound(beg, beg + m, t + 1e-15) - beg;
    }
    double cur_t = t;
    double cur_xi = xi;
    while (down ? cur_t > t_stop + 1e-14 : cur_t < t_stop - 1e-14) {
        double nxt_t;
        if (down) {
            nxt_t = (k >= 0) ? std::max(tt[k], t_stop) : t_stop;
        } else {
            nxt_t = (k < m) ? std::min(tt[k], t_stop) : t_stop;
        }
        if (nxt_t == cur_t) {
            down ? --k : ++k;
            continue;
        }
        double nxt_xi = advance(sf, cur_xi, cur_t, nxt_t, sgn);
        if (nxt_xi < xi_lo || nxt_xi > xi_hi) {
            const double lim = nxt_xi < xi_lo ? xi_lo : xi_hi;
            const double frac = (lim - cur_xi) / (nxt_xi - cur_xi);
            out_xi->push_back(lim);
            out_t->push_back(cur_t + frac * (nxt_t - cur_t));
            return;
        }
        cur_t = nxt_t;
        cur_xi = nxt_xi;
        out_xi->push_back(cur_xi);
        out_t->push_back(cur_t);
        down ? --k : ++k;
    }
}

}  // namespace

CharPath trace_characteristic(const Trajectory& traj, double start_xi, double start_t,
                              CharDir dir) {
    check_trace_preconditions(traj, start_xi, start_t);
    const SpeedField sf{traj};
    const double sgn = (dir == CharDir::backward) ? -1.0 : 1.0;
    const double t_end = traj.series.t[traj.series.t.size() - 1];

    std::vector<double> back_xi, back_t, fwd_xi, fwd_t;
    march(traj, sf, start_xi, start_t, 0.0, sgn, &back_xi, &back_t);
    march(traj, sf, start_xi, start_t, t_end, sgn, &fwd_xi, &fwd_t);

    CharPath path;
    path.direction = dir;
    path.xi.reserve(back_xi.size() + fwd_xi.size() + 1);
    path.t.reserve(path.xi.capacity());
    for (size_t i = back_xi.size(); i-- > 0;) {
        path.xi.push_back(back_xi[i]);
        path.t.push_back(back_t[i]);
    }
    path.xi.push_back(start_xi);
    path.t.push_back(start_t);
    path.xi.insert(path.xi.end(), fwd_xi.begin(), fwd_xi.end());
    path.t.insert(path.t.end(), fwd_t.begin(), fwd_t.end());
    return path;
}

ArrayXd xi0_map(const Trajectory& traj, const ArrayXd& t_values) {
    if (t_values.size() > 0)
        check_trace_preconditions(traj, 1.0, t_values.maxCoeff());
    const SpeedField sf{traj};
    const double xi_hi = traj.grid.xi[traj.grid.n - 1];
    ArrayXd out(t_values.size());
    for (Index j = 0; j < t_values.size(); ++j) {
        std::vector<double> px, pt;
        march(traj, sf, 1.0, t_values[j], 0.0, -1.0, &px, &pt);
        // Backward family traced back in time climbs outward; the foot is the
        // last point, valid only if the march actually reached t=0.
        if (px.empty()) {
            out[j] = 1.0;
        } else if (pt.back() > 1e-12 || px.back() >= xi_hi) {
            out[j] = std::numeric_limits<double>::quiet_NaN();
        } else {
            out[j] = px.back();
        }
    }
    return out;
}

LinearResponse linear_response(const Trajectory& traj, Xi0Source xi0_source) {
    using cd = std::complex<double>;
    LinearResponse lr;
    lr.eig = eigenvalues(traj.params);
    const cd l1 = lr.eig.lambda1;
    const cd l2 = lr.eig.lambda2;

    const ArrayXd& t = traj.series.t;
    const Index m = t.size();
    lr.t = t;
    lr.y0[0] = cd(traj.series.dtpsi0[0], 0.0) - l2 * traj.series.psi0[0];
    lr.y0[1] = cd(traj.series.dtpsi0[0], 0.0) - l1 * traj.series.psi0[0];

    // Initial backward wave sampled along the foot curve.
    ArrayXd xi0(m);
    if (xi0_source == Xi0Source::linear) {
        xi0 = 1.0 + traj.params.c0() * t;
    } else {
        xi0 = xi0_map(traj, t);
    }
    const double xi_hi = traj.grid.xi[traj.grid.n - 1];
    ArrayXd wsrc(m);
    for (Index k = 0; k < m; ++k) {
        const double x0 = xi0[k];
        wsrc[k] = (std::isnan(x0) || x0 >= xi_hi)
                      ? 0.0
                      : lerp_grid(traj.grid, traj.waves0.wb, x0);
    }

    // Trapezoid convolution with the eigen-kernel, advanced recursively:
    // conv_i(t_k) = e^{l_i h} conv_i(t_{k-1}) + trapezoid of e^{l_i(t_k-s)} w(s).
    const double coef = traj.params.c0() * boundary_perturbation_slope_eq(traj.params);
    const cd a1 = l1 / (l1 - l2);
    const cd a2 = l2 / (l1 - l2);
    lr.samples = ArrayXd(m);
    cd conv1 = 0.0, conv2 = 0.0;
    lr.samples[0] = (a1 * lr.y0[0] - a2 * lr.y0[1]).real();
    for (Index k = 1; k < m; ++k) {
        const double h = t[k] - t[k - 1];
        const cd e1 = std::exp(l1 * h);
        const cd e2 = std::exp(l2 * h);
        conv1 = e1 * conv1 + 0.5 * h * (e1 * wsrc[k - 1] + wsrc[k]);
        conv2 = e2 * conv2 + 0.5 * h * (e2 * wsrc[k - 1] + wsrc[k]);
        const cd hom = a1 * std::exp(l1 * t[k]) * lr.y0[0]
                     - a2 * std::exp(l2 * t[k]) * lr.y0[1];
        lr.samples[k] = (hom + coef * (a1 * conv1 - a2 * conv2)).real();
    }
    return lr;
}

Eigen::Vector2cd y_vector(const Trajectory& traj, double t) {
    const ArrayXd& tt = traj.series.t;
    const Index m = tt.size();
    const double* beg = tt.data();
    Index k = std::clamp<Index>(std::upper_bound(beg, beg + m, t) - beg - 1, 0, m - 2);
    const double w = std::clamp((t - tt[k]) / (tt[k + 1] - tt[k]), 0.0, 1.0);
    const double psi = (1.0 - w) * traj.series.psi0[k] + w * traj.series.psi0[k + 1];
    const double dtpsi = (1.0 - w) * traj.series.dtpsi0[k] + w * traj.series.dtpsi0[k + 1];
    const Eigenpair e = eigenvalues(traj.params);
    Eigen::Vector2cd y;
    y[0] = std::complex<double>(dtpsi, 0.0) - e.lambda2 * psi;
    y[1] = std::complex<double>(dtpsi, 0.0) - e.lambda1 * psi;
    return y;
}

BoundaryOdeCoeffs boundary_ode_coeffs(const SimState& s, const Grid& g,
                                      const FluidParams& p, Mode mode) {
    BoundaryOdeCoeffs c;
    if (mode == Mode::linear) {
        const double fpt = boundary_pressure_slope_eq(p);
        c.b1 = -fpt / p.c0();
        c.b0 = -fpt;
        c.a = fpt / p.c0();
        return c;
    }
    const double u0 = s.u[0];
    const double q0 = s.q[0];
    const double R = s.radius;
    const double cl = sound_speed(q0, p);
    const double fpt = boundary_pressure_slope(R, p);
    // Momentum equation in the conservative pressure form, one-sided at the
    // surface (xi = 1 there).
    const double dp0 = (-3.0 * pressure_perturbation(s.q[0], p)
                        + 4.0 * pressure_perturbation(s.q[1], p)
                        - pressure_perturbation(s.q[2], p)) / (2.0 * g.dxi);
    const double dtu0 = -R * R * dp0;
    const double rho0 = 1.0 / (1.0 + q0);
    c.b1 = -(fpt / cl + 2.0 * u0 / R - rho0 * dtu0 / cl);
    c.b0 = -(fpt * (1.0 + q0) / R - 2.0 * u0 * u0 / (R * R) - dtu0 / R);
    c.a = (fpt - rho0 * dtu0) / cl;
    return c;
}

double boundary_ode_residual(const Trajectory& traj, double t) {
    const auto& times = traj.snap_times;
    if (times.size() < 3)
        throw std::runtime_error("boundary_ode_residual: need at least three snapshots");
    size_t j = 0;
    double best = std::numeric_limits<double>::infinity();
    for (size_t k = 0; k < times.size(); ++k) {
        const double d = std::abs(times[k] - t);
        if (d < best) { best = d; j = k; }
    }
    if (j == 0 || j + 1 >= times.size())
        throw std::runtime_error("boundary_ode_residual: t too close to the window ends");

    const Grid& g = traj.grid;
    const FluidParams& p = traj.params;
    const Mode mode = traj.cfg.mode;
    const WaveField wm = reconstruct_waves(traj.snapshots[j - 1], g, p, mode);
    const WaveField w0 = reconstruct_waves(traj.snapshots[j], g, p, mode);
    const WaveField wp = reconstruct_waves(traj.snapshots[j + 1], g, p, mode);
    const double d2psi = (wp.dtpsi[0] - wm.dtpsi[0]) / (times[j + 1] - times[j - 1]);
    const BoundaryOdeCoeffs c = boundary_ode_coeffs(traj.snapshots[j], g, p, mode);
    return d2psi + c.b1 * w0.dtpsi[0] + c.b0 * w0.psi[0] + c.a * w0.wb[0];
}

}  // namespace bubble
