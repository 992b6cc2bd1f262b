#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>

#include <doctest.h>

#include "bubble/grid.hpp"
#include "bubble/numerics.hpp"

using namespace bubble;

namespace {

const FluidParams kDefault{};

SimState zero_state(const Grid& g) {
    SimState s;
    s.u = ArrayXd::Zero(g.n);
    s.q = ArrayXd::Zero(g.n);
    s.radius = 1.0;
    s.time = 0.0;
    return s;
}

}  // namespace

TEST_CASE("build_grid basics") {
    const Grid g = build_grid(2.0, 3);
    REQUIRE(g.n == 3);
    CHECK(g.xi[0] == 1.0);
    CHECK(g.xi[1] == doctest::Approx(1.5).epsilon(1e-15));
    CHECK(g.xi[2] == 2.0);
    CHECK(g.x[0] == 0.0);
    CHECK(g.x[1] == doctest::Approx(0.79166666666666667).epsilon(1e-15));
    CHECK(g.x[2] == doctest::Approx(7.0 / 3.0).epsilon(1e-15));

    const Grid tiny = build_grid(1.001, 2);
    CHECK(tiny.n == 2);
    CHECK(tiny.x[0] == 0.0);

    CHECK_THROWS_AS(build_grid(1.0, 8), std::invalid_argument);
    CHECK_THROWS_AS(build_grid(2.0, 1), std::invalid_argument);
}

TEST_CASE("grid coordinate identity") {
    const Grid g = build_grid(64.0, 513);
    for (Index i = 0; i < g.n; ++i) {
        const double xi_back = std::cbrt(1.0 + 3.0 * g.x[i]);
        CHECK(std::abs(xi_back - g.xi[i]) <= 1e-14 * g.xi[i]);
    }
}

TEST_CASE("radius field closed forms") {
    const Grid g = build_grid(8.0, 257);
    SimState s = zero_state(g);

    SUBCASE("equilibrium gives r = xi") {
        const RadiusField f = radius_field(s, g, kDefault);
        for (Index i = 0; i < g.n; ++i)
            CHECK(f.r[i] == doctest::Approx(g.xi[i]).epsilon(1e-15));
        CHECK(f.c[0] == doctest::Approx(2.0).epsilon(1e-15));
    }
    SUBCASE("constant q, exact trapezoid") {
        const double k = 0.05;
        s.q = ArrayXd::Constant(g.n, k);
        const RadiusField f = radius_field(s, g, kDefault);
        for (Index i = 0; i < g.n; ++i) {
            const double exact = std::cbrt(1.0 + 3.0 * g.x[i] * (1.0 + k));
            CHECK(f.r[i] == doctest::Approx(exact).epsilon(1e-14));
        }
    }
    SUBCASE("radius 2 at equilibrium density") {
        s.radius = 2.0;
        const RadiusField f = radius_field(s, g, kDefault);
        for (Index i = 0; i < g.n; ++i)
            CHECK(f.r[i] == doctest::Approx(std::cbrt(8.0 + 3.0 * g.x[i])).epsilon(1e-14));
        CHECK(f.r[0] == doctest::Approx(2.0).epsilon(1e-15));
    }
    SUBCASE("vacuum state rejected") {
        s.q = ArrayXd::Constant(g.n, -1.0);
        CHECK_THROWS_AS(radius_field(s, g, kDefault), std::domain_error);
    }
}

TEST_CASE("discrete Jacobian identity r^2 dr/dx = 1+q at order 2") {
    auto max_defect = [](Index n) {
        const Grid g = build_grid(8.0, n);
        SimState s = zero_state(g);
        for (Index i = 0; i < g.n; ++i) {
            const double z = g.xi[i] - 4.0;
            s.q[i] = 0.05 * std::exp(-z * z);
        }
        s.radius = radius_from_perturbation(s.q[0], kDefault);
        const RadiusField f = radius_field(s, g, kDefault);
        double worst = 0.0;
        for (Index i = 1; i < g.n - 1; ++i) {
            const double drdx = (f.r[i + 1] - f.r[i - 1]) / (g.x[i + 1] - g.x[i - 1]);
            worst = std::max(worst, std::abs(f.r[i] * f.r[i] * drdx - (1.0 + s.q[i])));
        }
        return worst;
    };
    const double e1 = max_defect(129);
    const double e2 = max_defect(257);
    CHECK(e1 / e2 > 3.0);
    CHECK(e1 / e2 < 5.0);
    CHECK(e2 < 5e-4);
}

TEST_CASE("initial data builders") {
    const Grid g = build_grid(16.0, 601);  // dxi = 0.025 puts xi=3 on a node

    SUBCASE("equilibrium") {
        const SimState s = make_initial_data({}, g, kDefault);
        CHECK(s.u.abs().maxCoeff() == 0.0);
        CHECK(s.q.abs().maxCoeff() == 0.0);
        CHECK(s.radius == 1.0);
    }
    SUBCASE("q bump hits its prescribed values") {
        InitSpec spec;
        spec.kind = InitKind::q_bump;
        spec.amplitude = 0.01;
        spec.center = 3.0;
        spec.width = 0.25;
        const SimState s = make_initial_data(spec, g, kDefault);
        const Index ic = static_cast<Index>(std::round((3.0 - 1.0) / g.dxi));
        REQUIRE(g.xi[ic] == doctest::Approx(3.0).epsilon(1e-12));
        CHECK(s.q[ic] == doctest::Approx(0.01).epsilon(1e-12));
        CHECK(s.q[0] == 0.0);
        CHECK(s.radius == 1.0);
        CHECK(s.u.abs().maxCoeff() == 0.0);
        // truncated outside 4 widths
        for (Index i = 0; i < g.n; ++i)
            if (std::abs(g.xi[i] - 3.0) > 1.0) CHECK(s.q[i] == 0.0);
    }
    SUBCASE("outgoing pulse carries u = -c0 q") {
        InitSpec spec;
        spec.kind = InitKind::outgoing_pulse;
        spec.amplitude = 0.01;
        spec.center = 3.0;
        spec.width = 0.25;
        const SimState s = make_initial_data(spec, g, kDefault);
        for (Index i = 0; i < g.n; ++i)
            CHECK(s.u[i] == doctest::Approx(-2.0 * s.q[i]).epsilon(1e-15));
    }
    SUBCASE("support touching the surface is rejected") {
        InitSpec spec;
        spec.kind = InitKind::q_bump;
        spec.center = 1.5;
        spec.width = 0.25;  // only two widths of clearance
        CHECK_THROWS_AS(make_initial_data(spec, g, kDefault), std::invalid_argument);
    }
    SUBCASE("built kinds pass the compatibility check exactly") {
        for (InitKind kind : {InitKind::equilibrium, InitKind::q_bump, InitKind::outgoing_pulse}) {
            InitSpec spec;
            spec.kind = kind;
            spec.amplitude = 0.01;
            spec.center = 4.0;
            spec.width = 0.5;
            const SimState s = make_initial_data(spec, g, kDefault);
            const CompatReport rep = check_compatibility(s.u, s.q, s.radius, g, kDefault);
            CHECK(rep.cc0_residual <= 1e-12);
            CHECK(rep.cc1_residual <= 1e-12);
        }
    }
}

TEST_CASE("compatibility report values") {
    const Grid g = build_grid(8.0, 257);
    SimState s = zero_state(g);
    SUBCASE("equilibrium is exactly compatible") {
        const CompatReport rep = check_compatibility(s.u, s.q, s.radius, g, kDefault);
        CHECK(rep.cc0_residual == 0.0);
        CHECK(rep.cc1_residual == 0.0);
    }
    SUBCASE("boundary q offset shows up in cc0") {
        s.q[0] = 0.01;
        const CompatReport rep = check_compatibility(s.u, s.q, s.radius, g, kDefault);
        CHECK(rep.cc0_residual == doctest::Approx(0.01).epsilon(1e-12));
    }
}

TEST_CASE("incoming-free pulse structure") {
    const Grid g = build_grid(16.0, 1025);
    const SimState s = incoming_free_pulse(0.01, 4.0, 0.5, g, kDefault);
    const double fp1 = boundary_perturbation_slope_eq(kDefault);
    // linear-mode surface pin holds exactly
    CHECK(s.q[0] == doctest::Approx(fp1 * (s.radius - 1.0)).epsilon(1e-14));
    // Near the surface u tracks -psi(1)/xi^2 with psi(1) the moment integral
    // c0 * eps * center * width * sqrt(pi) * erf(4), up to the small
    // compatibility correctors.
    const double psi1 = 2.0 * 0.01 * 4.0 * 0.5 * std::sqrt(M_PI) * std::erf(4.0);
    CHECK(s.u[0] == doctest::Approx(-psi1).epsilon(0.2));
    // corner smoothness: divergence of u matches the pin rate at the surface
    const ArrayXd divu = d_dxi(g.xi.square() * s.u, g.dxi) / g.xi.square();
    CHECK(std::abs(divu[0] - fp1 * s.u[0]) <= 1e-12);
    const ArrayXd dq = d_dxi(s.q, g.dxi);
    const ArrayXd ddq = d_dxi(g.xi.square() * dq, g.dxi) / g.xi.square();
    CHECK(std::abs(ddq[0] - fp1 * dq[0]) <= 1e-10);
    CHECK_THROWS_AS(incoming_free_pulse(0.01, 1.5, 0.25, g, kDefault), std::invalid_argument);
    CHECK_THROWS_AS(incoming_free_pulse(0.01, 15.5, 0.5, g, kDefault), std::invalid_argument);
}

TEST_CASE("smallness norms") {
    const Grid g = build_grid(8.0, 513);

    SUBCASE("equilibrium vanishes") {
        const SimState s = zero_state(g);
        const SmallnessNorms n = smallness_norms(s, g, kDefault);
        CHECK(n.epsilon == 0.0);
        CHECK(n.epsilon_tilde == 0.0);
    }
    SUBCASE("homogeneous of degree one in the data") {
        auto norm_at = [&](double eps0) {
            SimState s = zero_state(g);
            for (Index i = 0; i < g.n; ++i) {
                const double z = g.xi[i] - 4.0;
                s.q[i] = eps0 * std::exp(-z * z);
            }
            return smallness_norms(s, g, kDefault);
        };
        const SmallnessNorms a = norm_at(1e-3);
        const SmallnessNorms b = norm_at(2e-3);
        CHECK(b.epsilon / a.epsilon == doctest::Approx(2.0).epsilon(1e-10));
        CHECK(b.epsilon_tilde / a.epsilon_tilde == doctest::Approx(2.0).epsilon(1e-10));
    }
}

namespace {

// Analytic test profiles for the smallness-norm oracle, with exact derivatives.
struct Profile {
    double v, dv, d2v;
};

Profile q_profile(double xi) {
    const double s = std::sin(M_PI * (xi - 1.0)), c = std::cos(M_PI * (xi - 1.0));
    const double z = xi - 3.0;
    const double b = std::exp(-z * z);
    Profile p;
    p.v = s * b;
    p.dv = (M_PI * c - 2.0 * z * s) * b;
    p.d2v = (-M_PI * M_PI * s - 4.0 * M_PI * z * c + (4.0 * z * z - 2.0) * s) * b;
    return p;
}

Profile u_profile(double xi) {
    const double s = std::sin(2.0 * (xi - 4.0)), c = std::cos(2.0 * (xi - 4.0));
    const double z = xi - 5.0;
    const double b = std::exp(-z * z);
    Profile p;
    p.v = c * b;
    p.dv = (-2.0 * s - 2.0 * z * c) * b;
    p.d2v = (-4.0 * c + 8.0 * z * s + (4.0 * z * z - 2.0) * c) * b;
    return p;
}

double oracle_epsilon(const FluidParams& par, Index n_fine) {
    const Grid g = build_grid(8.0, n_fine);
    const double c0sq = par.ca * par.gamma / 2.0;
    ArrayXd l0q(g.n), l1q(g.n), l2q(g.n), l0u(g.n), l1u(g.n), l2u(g.n);
    for (Index i = 0; i < g.n; ++i) {
        const double xi = g.xi[i];
        const Profile q = q_profile(xi);
        const Profile u = u_profile(xi);
        l0q[i] = q.v;
        l1q[i] = c0sq * q.dv;
        l2q[i] = c0sq * (q.d2v + 2.0 / xi * q.dv);
        l0u[i] = u.v;
        l1u[i] = u.dv + 2.0 / xi * u.v;
        l2u[i] = c0sq * (u.d2v + 2.0 / xi * u.dv - 2.0 / (xi * xi) * u.v);
    }
    double eps2 = 0.0;
    for (const ArrayXd* f : {&l0q, &l1q, &l2q, &l0u, &l1u, &l2u})
        eps2 += trapz_x(f->square(), g);
    return std::sqrt(eps2);  // f(R) term is zero: the profile vanishes at xi=1
}

double measured_epsilon(const FluidParams& par, Index n) {
    const Grid g = build_grid(8.0, n);
    SimState s;
    s.u = ArrayXd(g.n);
    s.q = ArrayXd(g.n);
    for (Index i = 0; i < g.n; ++i) {
        s.q[i] = q_profile(g.xi[i]).v;
        s.u[i] = u_profile(g.xi[i]).v;
    }
    s.radius = 1.0;
    s.time = 0.0;
    return smallness_norms(s, g, par).epsilon;
}

}  // namespace

TEST_CASE("smallness norms against the analytic-derivative oracle") {
    const double ref = oracle_epsilon(kDefault, 5121);  // 10x the finest grid below
    const double e1 = std::abs(measured_epsilon(kDefault, 257) - ref);
    const double e2 = std::abs(measured_epsilon(kDefault, 513) - ref);
    CHECK(e1 / ref < 0.05);
    CHECK(e2 < e1);
    const double order = std::log2(e1 / e2);
    CHECK(order > 1.5);
    CHECK(order < 2.5);
}

TEST_CASE("init csv round trip and rejection") {
    namespace fs = std::filesystem;
    const fs::path dir = fs::temp_directory_path() / "bubble_grid_test";
    fs::create_directories(dir);
    const Grid g = build_grid(8.0, 65);

    InitSpec spec;
    spec.kind = InitKind::q_bump;
    spec.amplitude = 0.02;
    spec.center = 4.0;
    spec.width = 0.5;
    const SimState s = make_initial_data(spec, g, kDefault);
    const std::string path = (dir / "init.csv").string();
    save_init_csv(path, s, g);

    SUBCASE("round trip") {
        const SimState back = load_init_csv(path, g);
        CHECK(back.radius == s.radius);
        CHECK((back.u - s.u).abs().maxCoeff() == 0.0);
        CHECK((back.q - s.q).abs().maxCoeff() == 0.0);
        InitSpec fspec;
        fspec.kind = InitKind::file;
        fspec.file = path;
        const SimState viafile = make_initial_data(fspec, g, kDefault);
        CHECK(viafile.radius == s.radius);
    }
    SUBCASE("incompatible file rejected") {
        SimState bad = s;
        bad.q[0] = 0.3;  // breaks q(0) = f(R)
        const std::string badpath = (dir / "bad.csv").string();
        save_init_csv(badpath, bad, g);
        InitSpec fspec;
        fspec.kind = InitKind::file;
        fspec.file = badpath;
        CHECK_THROWS_AS(make_initial_data(fspec, g, kDefault), std::invalid_argument);
    }
    SUBCASE("NaN rejected") {
        const std::string nanpath = (dir / "nan.csv").string();
        std::ofstream out(nanpath);
        out << "# R=1\nxi,u,q\n1,nan,0\n8,0,0\n";
        out.close();
        const Grid g2 = build_grid(8.0, 2);
        CHECK_THROWS(load_init_csv(nanpath, g2));
    }
    SUBCASE("grid mismatch rejected") {
        const Grid other = build_grid(8.0, 33);
        CHECK_THROWS(load_init_csv(path, other));
    }
}
