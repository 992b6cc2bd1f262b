#include "bubble/acceptance.hpp"

#include <chrono>
#include <cmath>
#include <cstdarg>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "bubble/config.hpp"
#include "bubble/diagnostics.hpp"
#include "bubble/driver.hpp"
#include "bubble/io.hpp"
#include "bubble/numerics.hpp"
#include "bubble/solver.hpp"

namespace fs = std::filesystem;

namespace bubble {

namespace {

const FluidParams kParams{};  // Ca=2, We=2, gamma=4, gamma0=4/3: the pinned set

struct Timer {
    std::chrono::steady_clock::time_point t0 = std::chrono::steady_clock::now();
    double seconds() const {
        return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    }
};

Trajectory run_case(Mode mode, const SimState& init, const Grid& g, double t_end,
                    double snapshot_dt, Xi0Source xi0 = Xi0Source::traced) {
    SolverConfig cfg;
    cfg.mode = mode;
    cfg.t_end = t_end;
    cfg.snapshot_dt = snapshot_dt;
    Trajectory traj = run(init, g, kParams, cfg);
    finalize_series(traj, xi0);
    return traj;
}

SimState bump(const Grid& g, InitKind kind, double eps, double center, double width) {
    InitSpec spec;
    spec.kind = kind;
    spec.amplitude = eps;
    spec.center = center;
    spec.width = width;
    return make_initial_data(spec, g, kParams);
}

std::string fmt(const char* pattern, ...) {
    char buf[512];
    va_list args;
    va_start(args, pattern);
    vsnprintf(buf, sizeof buf, pattern, args);
    va_end(args);
    return buf;
}

CriterionResult c1_equilibrium() {
    Timer timer;
    const Grid g = build_grid(64.0, 513);
    const Trajectory traj =
        run_case(Mode::nonlinear, make_initial_data({}, g, kParams), g, 50.0, 1.0);
    double worst_u = traj.series.u0.abs().maxCoeff();
    double worst_q = traj.series.q0.abs().maxCoeff();
    double worst_r = (traj.series.R - 1.0).abs().maxCoeff();
    for (const SimState& s : traj.snapshots) {
        worst_u = std::max(worst_u, s.u.abs().maxCoeff());
        worst_q = std::max(worst_q, s.q.abs().maxCoeff());
    }
    const double secs = timer.seconds();
    CriterionResult r;
    r.id = 1;
    r.name = "equilibrium preservation";
    r.pass = worst_u <= 1e-12 && worst_q <= 1e-12 && worst_r <= 1e-12 && secs <= 10.0;
    r.detail = fmt("max|u|=%.2e max|q|=%.2e max|R-1|=%.2e (tol 1e-12), %.1fs (limit 10s)",
                   worst_u, worst_q, worst_r, secs);
    return r;
}

double energy_drift(Index cells) {
    const Grid g = build_grid(64.0, cells + 1);
    const Trajectory traj =
        run_case(Mode::nonlinear, bump(g, InitKind::q_bump, 1e-2, 7.2, 1.5), g, 25.0, 2.5);
    const double base = traj.series.e_total[0];
    return (traj.series.e_total - base).abs().maxCoeff() / std::abs(base);
}

CriterionResult c2_conserved_energy() {
    const double drift_fine = energy_drift(2048);
    const double drift_coarse = energy_drift(1024);
    const double shrink = drift_coarse / drift_fine;
    CriterionResult r;
    r.id = 2;
    r.name = "conserved energy";
    r.pass = drift_fine <= 1e-6 && shrink >= 3.0;
    r.detail = fmt("rel drift N=2048: %.2e (tol 1e-6), N=1024/N=2048: %.2f (need >= 3)",
                   drift_fine, shrink);
    return r;
}

CriterionResult c3_self_convergence() {
    auto q_final = [&](Index cells, Index stride) {
        const Grid g = build_grid(64.0, cells + 1);
        const Trajectory traj =
            run_case(Mode::nonlinear, bump(g, InitKind::q_bump, 1e-2, 6.0, 1.0), g, 10.0, 10.0);
        const ArrayXd& q = traj.snapshots.back().q;
        ArrayXd out(cells / stride + 1);
        for (Index i = 0; i < out.size(); ++i) out[i] = q[i * stride];
        return out;
    };
    const Grid coarse = build_grid(64.0, 1025);
    const ArrayXd qa = q_final(1024, 1);
    const ArrayXd qb = q_final(2048, 2);
    const ArrayXd qc = q_final(4096, 4);
    const double d1 = std::sqrt(trapz_x((qa - qb).square(), coarse));
    const double d2 = std::sqrt(trapz_x((qb - qc).square(), coarse));
    const double order = std::log2(d1 / d2);
    CriterionResult r;
    r.id = 3;
    r.name = "self-convergence order";
    r.pass = order >= 1.75 && order <= 2.25;
    r.detail = fmt("L2(dx) q-difference order %.3f (need 2.0 +/- 0.25)", order);
    return r;
}

CriterionResult c4_eigenvalue_decay() {
    Timer timer;
    const double eps = 1e-2;
    const Grid g = build_grid(64.0, 2049);
    const SimState init = incoming_free_pulse(eps, 8.0, 1.0, g, kParams);
    const Trajectory traj = run_case(Mode::linear, init, g, 9.0, 0.5, Xi0Source::linear);

    const double wb_residual = traj.waves0.wb.abs().maxCoeff();

    // The oscillatory boundary response: Re Y1(t) over the pinned window. Its
    // peak envelope carries the decay rate; its crossings carry the period.
    const Eigenpair e = eigenvalues(kParams);
    const ArrayXd& t = traj.series.t;
    std::vector<double> tw, yre;
    for (Index k = 0; k < t.size(); ++k) {
        if (t[k] < 2.0 || t[k] > 8.0) continue;
        const std::complex<double> y1 =
            std::complex<double>(traj.series.dtpsi0[k], 0.0) - e.lambda2 * traj.series.psi0[k];
        tw.push_back(t[k]);
        yre.push_back(y1.real());
    }
    Eigen::Map<ArrayXd> tm(tw.data(), static_cast<Index>(tw.size()));
    Eigen::Map<ArrayXd> rm(yre.data(), static_cast<Index>(yre.size()));
    const EnvelopeFit fit = fit_envelope(tm, rm);

    const double rate_ref = -1.75;
    const double period_ref = 2.0 * M_PI / 1.9843134832984429;
    const double secs = timer.seconds();
    CriterionResult r;
    r.id = 4;
    r.name = "eigenvalue radiative decay";
    r.pass = wb_residual <= 1e-3 * eps
          && std::abs(fit.rate - rate_ref) <= 0.05 * std::abs(rate_ref)
          && std::abs(fit.period - period_ref) <= 0.05 * period_ref
          && secs <= 60.0;
    r.detail = fmt("wb0 residual %.2e (tol %.0e), rate %.4f (want -1.75 +/-5%%), "
                   "period %.4f (want %.4f +/-5%%), %.1fs",
                   wb_residual, 1e-3 * eps, fit.rate, fit.period, period_ref, secs);
    return r;
}

// Weighted error between the radius observable and the linear response over
// the late window; shared by criteria 5 and 9.
struct ResponseRun {
    Trajectory traj;
    double m_weighted = 0.0;
};

ResponseRun response_run(double eps, Index cells) {
    const Grid g = build_grid(64.0, cells + 1);
    ResponseRun rr;
    rr.traj = run_case(Mode::nonlinear, bump(g, InitKind::outgoing_pulse, eps, 4.0, 0.5),
                       g, 20.0, 0.5);
    const RunSeries& s = rr.traj.series;
    for (Index k = 0; k < s.t.size(); ++k) {
        if (s.t[k] < 5.0 || s.t[k] > 20.0) continue;
        rr.m_weighted = std::max(rr.m_weighted, (1.0 + s.cmin * s.t[k]) * s.err[k]);
    }
    return rr;
}

CriterionResult c5_quadratic_response_error(const ResponseRun& hi, const ResponseRun& lo) {
    const double ratio = hi.m_weighted / lo.m_weighted;
    const ResponseRun hi_coarse = response_run(2e-3, 2048);
    CriterionResult r;
    r.id = 5;
    r.name = "quadratic-order linear-response error";
    r.pass = ratio >= 2.5 && ratio <= 6.0 && hi_coarse.m_weighted >= hi.m_weighted;
    r.detail = fmt("M(2e-3)/M(1e-3) = %.2f (need [2.5,6]), M N=2048: %.3e >= N=4096: %.3e",
                   ratio, hi_coarse.m_weighted, hi.m_weighted);
    return r;
}

CriterionResult c6_linear_transport() {
    auto transport_error = [](Index cells) {
        const Grid g = build_grid(32.0, cells + 1);
        const Trajectory traj = run_case(Mode::linear, bump(g, InitKind::q_bump, 1e-3, 4.0, 0.5),
                                         g, 12.0, 1.0, Xi0Source::linear);
        const double c0 = kParams.c0();
        double worst = 0.0;
        for (Index k = 0; k < traj.series.t.size(); ++k) {
            const double foot = 1.0 + c0 * traj.series.t[k];
            if (foot > 32.0) break;
            const double transported = lerp_grid(g, traj.waves0.wb, foot);
            worst = std::max(worst, std::abs(traj.series.wB0[k] - transported));
        }
        return worst;
    };
    const double e_coarse = transport_error(1024);
    const double e_fine = transport_error(2048);
    const double ratio = e_coarse / e_fine;
    CriterionResult r;
    r.id = 6;
    r.name = "exact linear transport";
    // K measured at N=1024 must re-verify at N=2048 as K/4 within 25%.
    r.pass = ratio >= 4.0 / 1.25 && ratio <= 4.0 * 1.25;
    r.detail = fmt("max|wB(1,t)-wB(1+c0 t,0)|: %.3e -> %.3e, ratio %.2f (need 4 +/-25%%)",
                   e_coarse, e_fine, ratio);
    return r;
}

CriterionResult c7_absorbing_quality() {
    const Grid g = build_grid(16.0, 1025);
    SolverConfig cfg;
    cfg.t_end = 10.0;
    cfg.snapshot_dt = 0.1;
    const Trajectory traj = run(free_wave_pulse(1e-3, 8.0, 0.5, g, kParams), g, kParams, cfg);

    double incident = 0.0, returning = 0.0;
    const double t_exit = (16.0 - 6.0) / kParams.c0() + 1.0;
    for (size_t k = 0; k < traj.snapshots.size(); ++k) {
        const SimState& s = traj.snapshots[k];
        for (Index i = 0; i < g.n; ++i) {
            const double aq = std::abs(s.q[i]);
            if (g.xi[i] >= 14.0) incident = std::max(incident, aq);
            if (traj.snap_times[k] >= t_exit && g.xi[i] <= 14.0)
                returning = std::max(returning, aq);
        }
    }
    CriterionResult r;
    r.id = 7;
    r.name = "absorbing boundary quality";
    r.pass = returning <= 0.01 * incident;
    r.detail = fmt("returning max|q| %.3e vs incident %.3e: %.2f%% (limit 1%%)",
                   returning, incident, 100.0 * returning / incident);
    return r;
}

CriterionResult c8_xi0_geometry() {
    const Grid g = build_grid(64.0, 2049);
    const Trajectory traj =
        run_case(Mode::nonlinear, bump(g, InitKind::outgoing_pulse, 1e-2, 6.0, 1.0), g, 10.0, 0.5);
    const ArrayXd t_values = ArrayXd::LinSpaced(101, 0.0, 10.0);
    const ArrayXd feet = xi0_map(traj, t_values);

    bool monotone = true;
    double slope_lo = 1e300, slope_hi = 0.0;
    for (Index k = 0; k + 1 < feet.size(); ++k) {
        const double slope = (feet[k + 1] - feet[k]) / (t_values[k + 1] - t_values[k]);
        monotone = monotone && feet[k + 1] > feet[k];
        slope_lo = std::min(slope_lo, slope);
        slope_hi = std::max(slope_hi, slope);
    }
    const double lo_bound = traj.series.cmin * 0.98;
    const double hi_bound = traj.series.cmax * 1.02;
    CriterionResult r;
    r.id = 8;
    r.name = "xi0 geometry";
    r.pass = monotone && slope_lo >= lo_bound && slope_hi <= hi_bound;
    r.detail = fmt("monotone=%d, slopes [%.4f, %.4f] within [%.4f, %.4f]",
                   monotone ? 1 : 0, slope_lo, slope_hi, lo_bound, hi_bound);
    return r;
}

double transmission_defect(const Trajectory& traj) {
    const Grid& g = traj.grid;
    const RunSeries& s = traj.series;
    // subsample the series for the tracing cost
    std::vector<double> ts;
    for (Index k = 0; k < s.t.size(); k += 4) ts.push_back(s.t[k]);
    Eigen::Map<ArrayXd> tm(ts.data(), static_cast<Index>(ts.size()));
    const ArrayXd feet = xi0_map(traj, tm);

    const SimState& s0 = traj.snapshots.front();
    const RadiusField f0 = radius_field(s0, g, kParams);
    double worst = 0.0;
    for (Index j = 0; j < tm.size(); ++j) {
        if (std::isnan(feet[j])) continue;
        const Index k = (static_cast<Index>(j)) * 4;
        const double c_here = sound_speed(s.q0[k], kParams);
        const double c_foot = lerp_grid(g, f0.c, feet[j]);
        const double wb_foot = lerp_grid(g, traj.waves0.wb, feet[j]);
        const double defect = feet[j] * std::abs(s.wB0[k] / std::sqrt(c_here)
                                                 - wb_foot / std::sqrt(c_foot));
        worst = std::max(worst, defect);
    }
    return worst;
}

CriterionResult c9_transmission_scaling(const ResponseRun& hi, const ResponseRun& lo) {
    const double t_hi = transmission_defect(hi.traj);
    const double t_lo = transmission_defect(lo.traj);
    const double ratio = t_hi / t_lo;
    CriterionResult r;
    r.id = 9;
    r.name = "transmission scaling";
    r.pass = ratio >= 2.5 && ratio <= 6.0;
    r.detail = fmt("max xi0|wB/sqrt(c) defect|: %.3e / %.3e, ratio %.2f (need [2.5,6])",
                   t_hi, t_lo, ratio);
    return r;
}

CriterionResult c10_harness_self_tests(const std::string& work_dir) {
    // planted power law
    const ArrayXd t = ArrayXd::LinSpaced(2001, 0.0, 20.0);
    RunSeries synth;
    synth.t = t;
    synth.F_R = 1.0 / (1.0 + t);
    synth.calR = ArrayXd::Zero(t.size());
    synth.cmin = synth.cmax = 1.0;
    const DecayComparison d = decay_comparison(synth);
    const bool power_ok = !d.below_floor && std::abs(d.exponent + 1.0) <= 0.02;

    // planted damped oscillation
    ArrayXd y(t.size());
    for (Index k = 0; k < t.size(); ++k)
        y[k] = std::exp(-1.75 * t[k] / 2.5) * std::sin(1.984 * t[k]);
    const EnvelopeFit fit = fit_envelope(t, y);
    const bool rate_ok = std::abs(fit.rate + 1.75 / 2.5) <= 0.02 * (1.75 / 2.5);
    const bool period_ok = std::abs(fit.period - 2.0 * M_PI / 1.984) <= 0.02 * (2.0 * M_PI / 1.984);

    // determinism through the full artifact path
    const fs::path dir = fs::path(work_dir) / "determinism";
    fs::create_directories(dir);
    const RunConfig cfg = parse_config_text(
        "xi_max = 16\ncells = 256\nt_end = 2\nsnapshot_dt = 0.5\n"
        "init.kind = q_bump\ninit.center = 4\ninit.width = 0.5\n");
    simulate_run(cfg, (dir / "a").string());
    simulate_run(cfg, (dir / "b").string());
    const bool hash_ok = hash_file((dir / "a" / "series.csv").string())
                      == hash_file((dir / "b" / "series.csv").string());

    CriterionResult r;
    r.id = 10;
    r.name = "harness self-tests";
    r.pass = power_ok && rate_ok && period_ok && hash_ok;
    r.detail = fmt("exponent %.3f (want -1 +/-2%%), rate %.4f, period %.4f, hash %s",
                   d.exponent, fit.rate, fit.period, hash_ok ? "match" : "MISMATCH");
    return r;
}

void report(const CriterionResult& r) {
    std::printf("[%s] %2d %-38s %s\n", r.pass ? "PASS" : "FAIL", r.id, r.name.c_str(),
                r.detail.c_str());
    std::fflush(stdout);
}

}  // namespace

std::vector<CriterionResult> run_acceptance(const std::string& work_dir) {
    std::vector<CriterionResult> results;
    auto push = [&](CriterionResult r) {
        report(r);
        results.push_back(std::move(r));
    };

    push(c1_equilibrium());
    push(c2_conserved_energy());
    push(c3_self_convergence());
    push(c4_eigenvalue_decay());

    const ResponseRun hi = response_run(2e-3, 4096);
    const ResponseRun lo = response_run(1e-3, 4096);
    push(c5_quadratic_response_error(hi, lo));
    push(c6_linear_transport());
    push(c7_absorbing_quality());
    push(c8_xi0_geometry());
    push(c9_transmission_scaling(hi, lo));
    push(c10_harness_self_tests(work_dir));
    return results;
}

}  // namespace bubble
