#include <cmath>

#include <doctest.h>

#include "bubble/diagnostics.hpp"
#include "bubble/numerics.hpp"
#include "bubble/solver.hpp"

using namespace bubble;

namespace {

const FluidParams kDefault{};

SimState gaussian_q(const Grid& g, double eps, double center, double width) {
    SimState s;
    s.u = ArrayXd::Zero(g.n);
    s.q = ArrayXd(g.n);
    for (Index i = 0; i < g.n; ++i) {
        const double z = (g.xi[i] - center) / width;
        s.q[i] = eps * std::exp(-z * z);
    }
    s.radius = radius_from_perturbation(s.q[0], kDefault);
    s.q[0] = boundary_perturbation(s.radius, kDefault);
    s.time = 0.0;
    return s;
}

}  // namespace

TEST_CASE("energies vanish at equilibrium") {
    const Grid g = build_grid(8.0, 129);
    const SimState s = make_initial_data({}, g, kDefault);
    CHECK(energy_e(s, g, kDefault, 0) == 0.0);
    CHECK(energy_e(s, g, kDefault, 1) == 0.0);
    CHECK(conserved_energy(s, g, kDefault) == 0.0);
    CHECK_THROWS_AS(energy_e(s, g, kDefault, 2), std::invalid_argument);
}

TEST_CASE("order-zero energy of a velocity-free bump against a fine quadrature") {
    auto measure = [&](Index n) {
        const Grid g = build_grid(8.0, n);
        const SimState s = gaussian_q(g, 0.01, 4.0, 0.5);
        return energy_e(s, g, kDefault, 0);
    };
    // independent route: analytic integrand c(q)^2 q^2 on a 10x finer mesh
    const Grid fine = build_grid(8.0, 5121);
    const SimState sf = gaussian_q(fine, 0.01, 4.0, 0.5);
    const RadiusField ff = radius_field(sf, fine, kDefault);
    const double ref = 0.5 * trapz_x(ff.c.square() * sf.q.square(), fine);
    // smooth compactly-supported integrand: the quadrature is far better than
    // its formal order here, so the cross-check is tight
    CHECK(measure(257) == doctest::Approx(ref).epsilon(1e-8));
    CHECK(measure(513) == doctest::Approx(ref).epsilon(1e-9));
}

TEST_CASE("order-zero energy scales quadratically in the data") {
    const Grid g = build_grid(8.0, 513);
    const SimState a = gaussian_q(g, 1e-4, 4.0, 0.5);
    const SimState b = gaussian_q(g, 2e-4, 4.0, 0.5);
    const double ratio = energy_e(b, g, kDefault, 0) / energy_e(a, g, kDefault, 0);
    CHECK(ratio == doctest::Approx(4.0).epsilon(5e-3));
}

TEST_CASE("entropy part of the conserved energy is positive away from equilibrium") {
    const Grid g = build_grid(2.0, 5);
    for (double q : {-0.5, -0.2, -0.05, 0.05, 0.3, 1.0, 3.0}) {
        SimState s;
        s.u = ArrayXd::Zero(g.n);
        s.q = ArrayXd::Constant(g.n, q);
        s.radius = 1.0;
        // field term is the integral of H only; W(1) = 0
        CHECK(conserved_energy(s, g, kDefault) > 0.0);
    }
}

TEST_CASE("boundary work is critical at the equilibrium radius") {
    const Grid g = build_grid(2.0, 5);
    auto work = [&](double R) {
        SimState s;
        s.u = ArrayXd::Zero(g.n);
        s.q = ArrayXd::Zero(g.n);
        s.radius = R;
        return conserved_energy(s, g, kDefault);
    };
    const double h = 1e-5;
    const double w_prime = (work(1.0 + h) - work(1.0 - h)) / (2.0 * h);
    CHECK(std::abs(w_prime) <= 1e-8);
    CHECK(work(1.05) > 0.0);
    CHECK(work(0.95) > 0.0);
}

TEST_CASE("kss density") {
    const Grid g = build_grid(8.0, 257);
    SUBCASE("zero at equilibrium") {
        const SimState s = make_initial_data({}, g, kDefault);
        const WaveField w = reconstruct_waves(s, g, kDefault);
        CHECK(kss_density(s, w, g, kDefault) == 0.0);
    }
    SUBCASE("gradient identity against differenced phi at order 2") {
        auto defect = [](Index n) {
            const Grid g2 = build_grid(8.0, n);
            SimState s = gaussian_q(g2, 0.01, 4.0, 0.5);
            for (Index i = 0; i < g2.n; ++i)
                s.u[i] = 0.005 * std::exp(-(g2.xi[i] - 5.0) * (g2.xi[i] - 5.0));
            const RadiusField f = radius_field(s, g2, kDefault);
            const WaveField w = reconstruct_waves(s, g2, kDefault);
            const ArrayXd lhs = f.c * f.r.square() * (d_dxi(w.phi, g2.dxi) / g2.xi.square());
            const ArrayXd rhs_id = f.c * (1.0 + s.q) * s.u;
            double worst = 0.0;
            for (Index i = 1; i < g2.n - 1; ++i)
                worst = std::max(worst, std::abs(lhs[i] - rhs_id[i]));
            return worst;
        };
        const double e1 = defect(257);
        const double e2 = defect(513);
        CHECK(e1 / e2 > 3.0);
        CHECK(e1 / e2 < 5.0);
    }
}

namespace {

RunSeries synthetic_series(const ArrayXd& t, const ArrayXd& err_values, double cmin) {
    RunSeries s;
    s.t = t;
    s.F_R = err_values;
    s.calR = ArrayXd::Zero(t.size());
    s.cmin = cmin;
    s.cmax = cmin;
    return s;
}

}  // namespace

TEST_CASE("decay fit recovers a planted power law") {
    const ArrayXd t = ArrayXd::LinSpaced(2001, 0.0, 20.0);
    const ArrayXd planted = 1.0 / (1.0 + t);
    const DecayComparison d = decay_comparison(synthetic_series(t, planted, 1.0));
    CHECK_FALSE(d.below_floor);
    CHECK(d.exponent == doctest::Approx(-1.0).epsilon(0.01));
}

TEST_CASE("decay fit reports below-floor error") {
    const ArrayXd t = ArrayXd::LinSpaced(201, 0.0, 20.0);
    const ArrayXd tiny = ArrayXd::Constant(201, 1e-16);
    const DecayComparison d = decay_comparison(synthetic_series(t, tiny, 1.0));
    CHECK(d.below_floor);
    CHECK(std::isnan(d.exponent));
}

TEST_CASE("decay fit refuses a starved window") {
    const ArrayXd t = ArrayXd::LinSpaced(40, 0.0, 20.0);
    const ArrayXd v = 1.0 / (1.0 + t);
    CHECK_THROWS_AS(decay_comparison(synthetic_series(t, v, 1.0)), std::invalid_argument);
}

TEST_CASE("envelope fit recovers a planted damped oscillation") {
    const ArrayXd t = ArrayXd::LinSpaced(4001, 0.0, 8.0);
    ArrayXd y(t.size());
    for (Index k = 0; k < t.size(); ++k)
        y[k] = std::exp(-1.75 * t[k]) * std::sin(1.984 * t[k]);
    const EnvelopeFit fit = fit_envelope(t, y);
    CHECK(fit.peaks >= 3);
    CHECK(fit.rate == doctest::Approx(-1.75).epsilon(0.02));
    CHECK(fit.period == doctest::Approx(2.0 * M_PI / 1.984).epsilon(0.02));
}

TEST_CASE("envelope fit falls back to a direct log fit without oscillation") {
    const ArrayXd t = ArrayXd::LinSpaced(101, 0.0, 4.0);
    ArrayXd y(t.size());
    for (Index k = 0; k < t.size(); ++k) y[k] = 0.7 * std::exp(-2.0 * t[k]);
    const EnvelopeFit fit = fit_envelope(t, y);
    CHECK(fit.peaks == 0);
    CHECK(fit.rate == doctest::Approx(-2.0).epsilon(1e-6));
    CHECK(std::isnan(fit.period));
}

TEST_CASE("pointwise decay probe") {
    const Grid g = build_grid(16.0, 513);
    SolverConfig cfg;
    cfg.mode = Mode::linear;
    cfg.t_end = 6.0;
    cfg.snapshot_dt = 0.1;

    SUBCASE("equilibrium probes to zero") {
        const Trajectory traj = run(make_initial_data({}, g, kDefault), g, kDefault, cfg);
        const ProbeSeries ps = pointwise_decay_probe(traj, 2.0, 1.5);
        CHECK(ps.value.abs().maxCoeff() == 0.0);
        CHECK(ps.t_enter < ps.t_exit);
    }
    SUBCASE("a passing free wave leaves the probe quiet afterwards") {
        cfg.t_end = 10.0;
        const Grid g2 = build_grid(16.0, 1025);
        const SimState s = free_wave_pulse(1e-3, 4.0, 0.5, g2, kDefault);
        const Trajectory traj = run(s, g2, kDefault, cfg);
        const ProbeSeries ps = pointwise_decay_probe(traj, 4.5, 6.0);
        CHECK(ps.t_enter < ps.t_exit);
        double during = 0.0, after = 0.0;
        for (Index k = 0; k < ps.t.size(); ++k) {
            if (ps.t[k] < 1.5) during = std::max(during, ps.value[k]);
            if (ps.t[k] > 3.0) after = std::max(after, ps.value[k]);
        }
        CHECK(during > 1e-4);          // the pulse crosses the probe
        CHECK(after < 0.02 * during);  // and leaves it near the floor
    }
    SUBCASE("window error when the probe cannot enter the cone") {
        cfg.t_end = 1.0;
        const Trajectory traj = run(make_initial_data({}, g, kDefault), g, kDefault, cfg);
        CHECK_THROWS_AS(pointwise_decay_probe(traj, 15.0, 1.5), std::runtime_error);
    }
}

TEST_CASE("finalize_series on an equilibrium run leaves no residual error") {
    const Grid g = build_grid(8.0, 129);
    SolverConfig cfg;
    cfg.t_end = 2.0;
    Trajectory traj = run(make_initial_data({}, g, kDefault), g, kDefault, cfg);
    finalize_series(traj, Xi0Source::traced);
    CHECK(traj.series.calR.abs().maxCoeff() == 0.0);
    CHECK(traj.series.err.abs().maxCoeff() == 0.0);
    const DecayComparison d = decay_comparison(traj.series);
    CHECK(d.below_floor);
}
