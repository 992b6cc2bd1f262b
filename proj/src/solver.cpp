#include "bubble/solver.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

#include "bubble/numerics.hpp"

namespace bubble {

void SolverConfig::validate() const {
    if (!(cfl > 0.0) || !(cfl <= 0.9)) throw std::invalid_argument("cfl must be in (0, 0.9]");
    if (!(t_end > 0.0)) throw std::invalid_argument("t_end must be > 0");
    if (!(snapshot_dt > 0.0)) throw std::invalid_argument("snapshot_dt must be > 0");
    if (!(dissipation >= 0.0)) throw std::invalid_argument("dissipation must be >= 0");
}

StateDeriv rhs(const SimState& s, const Grid& g, const FluidParams& p,
               const SolverConfig& cfg) {
    const RadiusField f = local_fields(s, g, p, cfg.mode);
    const ArrayXd xi2 = g.xi.square();
    const ArrayXd r2 = f.r.square();
    const Index m = g.n - 1;

    StateDeriv d;
    d.dq = d_dxi(r2 * s.u, g.dxi) / xi2;
    if (cfg.mode == Mode::nonlinear) {
        const ArrayXd pressure = (p.ca / 2.0) * ((1.0 + s.q).pow(-p.gamma) - 1.0);
        d.du = -r2 / xi2 * d_dxi(pressure, g.dxi);
    } else {
        d.du = (p.ca * p.gamma / 2.0) * d_dxi(s.q, g.dxi);
    }
    d.dR = s.u[0];
    // The surface node is pinned, so its rate is the pin's chain rule.
    d.dq[0] = boundary_pin_slope(s.radius, p, cfg.mode) * s.u[0];

    if (cfg.outer_bc == OuterBC::absorbing) {
        // Radiated-field tracker: d(psi)/dt at the outer node, with
        // phi = psi_outer / r there.
        if (cfg.mode == Mode::nonlinear) {
            const double dtphi = bernoulli_head(s.q[m], p) + 0.5 * s.u[m] * s.u[m];
            d.dpsi_outer = f.r[m] * dtphi + s.u[m] * s.psi_outer / f.r[m];
        } else {
            d.dpsi_outer = g.xi[m] * (p.ca * p.gamma / 2.0) * s.q[m];
        }
    }

    if (cfg.dissipation > 0.0) {
        const double sigma = cfg.dissipation / g.dxi;  // sigma*(dxi)^3 * d4/dxi4
        for (Index i = 2; i < g.n - 2; ++i) {
            d.du[i] -= sigma * (s.u[i - 2] - 4.0 * s.u[i - 1] + 6.0 * s.u[i]
                                - 4.0 * s.u[i + 1] + s.u[i + 2]);
            d.dq[i] -= sigma * (s.q[i - 2] - 4.0 * s.q[i - 1] + 6.0 * s.q[i]
                                - 4.0 * s.q[i + 1] + s.q[i + 2]);
        }
    }
    return d;
}

void apply_outer_bc(SimState& s, const Grid& g, const FluidParams& p,
                    const SolverConfig& cfg) {
    const Index m = g.n - 1;
    if (cfg.outer_bc == OuterBC::reflecting) {
        s.u[m] = 0.0;
        return;
    }
    auto cs = [&](Index i) {
        return cfg.mode == Mode::linear ? p.c0() : sound_speed(s.q[i], p);
    };
    // Outgoing invariant u - c q extrapolated linearly; incoming u + c q
    // pinned to the radiating near field -psi_outer/xi_max^2. The closing
    // sound speed comes from the neighbor node so the whole map stays a
    // function of interior values only.
    const double out1 = s.u[m - 1] - cs(m - 1) * s.q[m - 1];
    const double out2 = s.u[m - 2] - cs(m - 2) * s.q[m - 2];
    const double ob = 2.0 * out1 - out2;
    const double ib = -s.psi_outer / (g.xi[m] * g.xi[m]);
    const double cb = cs(m - 1);
    s.u[m] = 0.5 * (ob + ib);
    s.q[m] = (ib - ob) / (2.0 * cb);
}

void enforce_boundary(SimState& s, const Grid& g, const FluidParams& p,
                      const SolverConfig& cfg) {
    s.q[0] = boundary_pin(s.radius, p, cfg.mode);
    apply_outer_bc(s, g, p, cfg);
}

double max_char_speed(const SimState& s, const Grid& g, const FluidParams& p,
                      const SolverConfig& cfg) {
    if (cfg.mode == Mode::linear) return p.c0();
    const RadiusField f = radius_field(s, g, p);
    return (f.c * f.r.square() / g.xi.square()).maxCoeff();
}

namespace {

SimState axpy(const SimState& s, double a, const StateDeriv& k) {
    SimState out;
    out.u = s.u + a * k.du;
    out.q = s.q + a * k.dq;
    out.radius = s.radius + a * k.dR;
    out.psi_outer = s.psi_outer + a * k.dpsi_outer;
    out.time = s.time + a;
    return out;
}

}  // namespace

SimState step(const SimState& s, double dt, const Grid& g, const FluidParams& p,
              const SolverConfig& cfg) {
    const double bound = cfg.cfl * g.dxi / max_char_speed(s, g, p, cfg);
    if (dt > bound * (1.0 + 1e-12))
        throw std::invalid_argument("step: dt violates the CFL bound");

    const StateDeriv k1 = rhs(s, g, p, cfg);
    SimState s2 = axpy(s, 0.5 * dt, k1);
    enforce_boundary(s2, g, p, cfg);
    const StateDeriv k2 = rhs(s2, g, p, cfg);
    SimState s3 = axpy(s, 0.5 * dt, k2);
    enforce_boundary(s3, g, p, cfg);
    const StateDeriv k3 = rhs(s3, g, p, cfg);
    SimState s4 = axpy(s, dt, k3);
    enforce_boundary(s4, g, p, cfg);
    const StateDeriv k4 = rhs(s4, g, p, cfg);

    SimState out;
    out.u = s.u + (dt / 6.0) * (k1.du + 2.0 * k2.du + 2.0 * k3.du + k4.du);
    out.q = s.q + (dt / 6.0) * (k1.dq + 2.0 * k2.dq + 2.0 * k3.dq + k4.dq);
    out.radius = s.radius + (dt / 6.0) * (k1.dR + 2.0 * k2.dR + 2.0 * k3.dR + k4.dR);
    out.psi_outer = s.psi_outer
        + (dt / 6.0) * (k1.dpsi_outer + 2.0 * k2.dpsi_outer + 2.0 * k3.dpsi_outer
                        + k4.dpsi_outer);
    out.time = s.time + dt;
    enforce_boundary(out, g, p, cfg);
    return out;
}

namespace {

struct SeriesBuilder {
    std::vector<double> t, R, u0, q0, psi0, dtpsi0, wB0, wF0;
    std::vector<double> e0, e1, e_total, F_R, kss0;
    double last_kss_density = 0.0;

    void record(const SimState& s, const Grid& g, const FluidParams& p,
                const SolverConfig& cfg) {
        const WaveField w = reconstruct_waves(s, g, p, cfg.mode);
        t.push_back(s.time);
        R.push_back(s.radius);
        u0.push_back(s.u[0]);
        q0.push_back(s.q[0]);
        psi0.push_back(w.psi[0]);
        dtpsi0.push_back(w.dtpsi[0]);
        wB0.push_back(w.wb[0]);
        wF0.push_back(w.wf[0]);
        e0.push_back(energy_e(s, g, p, 0, cfg.mode));
        e1.push_back(energy_e(s, g, p, 1, cfg.mode));
        e_total.push_back(conserved_energy(s, g, p));
        F_R.push_back(radius_observable(s.radius, p));
        const double dens = kss_density(s, w, g, p, cfg.mode);
        if (kss0.empty()) {
            kss0.push_back(0.0);
        } else {
            const double dt = t.back() - t[t.size() - 2];
            kss0.push_back(kss0.back() + 0.5 * (dens + last_kss_density) * dt);
        }
        last_kss_density = dens;
    }
};

ArrayXd to_array(const std::vector<double>& v) {
    return Eigen::Map<const ArrayXd>(v.data(), static_cast<Index>(v.size()));
}

}  // namespace

Trajectory run(const SimState& initial, const Grid& g, const FluidParams& p,
               const SolverConfig& cfg) {
    cfg.validate();
    p.validate();

    Trajectory traj;
    traj.grid = g;
    traj.params = p;
    traj.cfg = cfg;

    SimState s = initial;
    s.time = 0.0;

    SeriesBuilder sb;
    double cmin = std::numeric_limits<double>::infinity();
    double cmax = 0.0;

    auto record_all = [&](const SimState& st) {
        const RadiusField f = local_fields(st, g, p, cfg.mode);
        ArrayXd spd = f.c * f.r.square() / g.xi.square();
        cmin = std::min(cmin, spd.minCoeff());
        cmax = std::max(cmax, spd.maxCoeff());
        traj.speed.push_back(std::move(spd));
        sb.record(st, g, p, cfg);
    };

    const double snap_eps = 1e-9 * cfg.snapshot_dt;
    long next_snap = 0;
    auto maybe_snapshot = [&](const SimState& st) {
        const double target = static_cast<double>(next_snap) * cfg.snapshot_dt;
        if (st.time >= target - snap_eps && target <= cfg.t_end + snap_eps) {
            traj.snap_times.push_back(st.time);
            traj.snapshots.push_back(st);
            ++next_snap;
        }
    };

    try {
        record_all(s);
        maybe_snapshot(s);
        while (s.time < cfg.t_end - 1e-12) {
            double dt = cfg.cfl * g.dxi / max_char_speed(s, g, p, cfg);
            const double t_next_snap = static_cast<double>(next_snap) * cfg.snapshot_dt;
            if (t_next_snap <= cfg.t_end + snap_eps && s.time + dt > t_next_snap)
                dt = t_next_snap - s.time;
            if (s.time + dt > cfg.t_end) dt = cfg.t_end - s.time;
            s = step(s, dt, g, p, cfg);
            record_all(s);
            maybe_snapshot(s);
        }
    } catch (const std::exception& e) {
        throw std::runtime_error("run failed at t=" + std::to_string(s.time) + ": " + e.what());
    }

    traj.series.t = to_array(sb.t);
    traj.series.R = to_array(sb.R);
    traj.series.u0 = to_array(sb.u0);
    traj.series.q0 = to_array(sb.q0);
    traj.series.psi0 = to_array(sb.psi0);
    traj.series.dtpsi0 = to_array(sb.dtpsi0);
    traj.series.wB0 = to_array(sb.wB0);
    traj.series.wF0 = to_array(sb.wF0);
    traj.series.e0 = to_array(sb.e0);
    traj.series.e1 = to_array(sb.e1);
    traj.series.e_total = to_array(sb.e_total);
    traj.series.F_R = to_array(sb.F_R);
    traj.series.kss0 = to_array(sb.kss0);
    traj.series.calR = ArrayXd::Zero(traj.series.t.size());
    traj.series.err = ArrayXd::Zero(traj.series.t.size());
    traj.series.cmin = cmin;
    traj.series.cmax = cmax;
    traj.waves0 = reconstruct_waves(traj.snapshots.front(), g, p, cfg.mode);
    return traj;
}

}  // namespace bubble
