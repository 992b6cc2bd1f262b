#include "bubble/grid.hpp"

#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "bubble/numerics.hpp"

#include <Eigen/Dense>

namespace bubble {

ArrayXd d_dxi(const ArrayXd& v, double dxi) {
    const Index n = v.size();
    ArrayXd d(n);
    d.segment(1, n - 2) = (v.tail(n - 2) - v.head(n - 2)) / (2.0 * dxi);
    d[0] = (-3.0 * v[0] + 4.0 * v[1] - v[2]) / (2.0 * dxi);
    d[n - 1] = (3.0 * v[n - 1] - 4.0 * v[n - 2] + v[n - 3]) / (2.0 * dxi);
    return d;
}

ArrayXd d_dxi_sbp(const ArrayXd& v, double dxi) {
    const Index n = v.size();
    ArrayXd d(n);
    d.segment(1, n - 2) = (v.tail(n - 2) - v.head(n - 2)) / (2.0 * dxi);
    d[0] = (v[1] - v[0]) / dxi;
    d[n - 1] = (v[n - 1] - v[n - 2]) / dxi;
    return d;
}

ArrayXd d2_dxi2(const ArrayXd& v, double dxi) {
    const Index n = v.size();
    const double h2 = dxi * dxi;
    ArrayXd d(n);
    d.segment(1, n - 2) = (v.tail(n - 2) - 2.0 * v.segment(1, n - 2) + v.head(n - 2)) / h2;
    d[0] = (2.0 * v[0] - 5.0 * v[1] + 4.0 * v[2] - v[3]) / h2;
    d[n - 1] = (2.0 * v[n - 1] - 5.0 * v[n - 2] + 4.0 * v[n - 3] - v[n - 4]) / h2;
    return d;
}

double trapz_x(const ArrayXd& v, const Grid& g) {
    // dx = xi^2 dxi with uniform-in-xi trapezoid weights. The uniform interior
    // weight is what lets the semi-discrete energy telescope exactly; a
    // trapezoid on the x mesh would carry an extra dxi^3/3 per node.
    const Index n = g.n;
    const ArrayXd f = v * g.xi.square();
    return g.dxi * (f.sum() - 0.5 * (f[0] + f[n - 1]));
}

ArrayXd cumtrapz_x(const ArrayXd& v, const Grid& g) {
    ArrayXd out(g.n);
    out[0] = 0.0;
    for (Index i = 1; i < g.n; ++i)
        out[i] = out[i - 1] + 0.5 * (v[i] + v[i - 1]) * (g.x[i] - g.x[i - 1]);
    return out;
}

double trapz_t(const ArrayXd& t, const ArrayXd& y) {
    const Index n = t.size();
    if (n < 2) return 0.0;
    return 0.5 * ((y.head(n - 1) + y.tail(n - 1)) * (t.tail(n - 1) - t.head(n - 1))).sum();
}

double lerp_grid(const Grid& g, const ArrayXd& v, double s) {
    if (s <= g.xi[0]) return v[0];
    if (s >= g.xi[g.n - 1]) return v[g.n - 1];
    const double pos = (s - 1.0) / g.dxi;
    Index i = static_cast<Index>(pos);
    if (i > g.n - 2) i = g.n - 2;
    const double w = pos - static_cast<double>(i);
    return (1.0 - w) * v[i] + w * v[i + 1];
}

LineFit fit_line(const ArrayXd& x, const ArrayXd& y) {
    const double n = static_cast<double>(x.size());
    const double sx = x.sum(), sy = y.sum();
    const double sxx = (x * x).sum(), sxy = (x * y).sum();
    LineFit f;
    f.slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
    f.intercept = (sy - f.slope * sx) / n;
    return f;
}

Grid build_grid(double xi_max, Index n) {
    if (!(xi_max > 1.0)) throw std::invalid_argument("build_grid: xi_max must be > 1");
    if (n < 2) throw std::invalid_argument("build_grid: need at least 2 nodes");
    Grid g;
    g.n = n;
    g.dxi = (xi_max - 1.0) / static_cast<double>(n - 1);
    g.xi = ArrayXd::LinSpaced(n, 1.0, xi_max);
    g.xi[0] = 1.0;
    g.xi[n - 1] = xi_max;
    g.x = (g.xi.cube() - 1.0) / 3.0;
    g.x[0] = 0.0;
    return g;
}

RadiusField radius_field(const SimState& s, const Grid& g, const FluidParams& p) {
    if ((s.q <= -1.0).any())
        throw std::domain_error("radius_field: q <= -1 (vanishing density)");
    RadiusField f;
    const ArrayXd cq = cumtrapz_x(s.q, g);
    const double r3 = s.radius * s.radius * s.radius;
    ArrayXd arg = r3 + 3.0 * g.x + 3.0 * cq;
    if ((arg <= 0.0).any())
        throw std::domain_error("radius_field: radius cube lost positivity");
    f.r = arg.pow(1.0 / 3.0);
    f.c = p.c0() * (1.0 + s.q).pow(-(p.gamma + 1.0) / 2.0);
    return f;
}

RadiusField local_fields(const SimState& s, const Grid& g, const FluidParams& p, Mode mode) {
    if (mode == Mode::nonlinear) return radius_field(s, g, p);
    RadiusField f;
    f.r = g.xi;
    f.c = ArrayXd::Constant(g.n, p.c0());
    return f;
}

double boundary_pin(double radius, const FluidParams& p, Mode mode) {
    if (mode == Mode::linear)
        return boundary_perturbation_slope_eq(p) * (radius - 1.0);
    return boundary_perturbation(radius, p);
}

double boundary_pin_slope(double radius, const FluidParams& p, Mode mode) {
    if (mode == Mode::linear) return boundary_perturbation_slope_eq(p);
    return boundary_perturbation_slope(radius, p);
}

namespace {

ArrayXd truncated_gaussian(double amplitude, double center, double width, const Grid& g) {
    if (!(center - 4.0 * width > 1.0))
        throw std::invalid_argument("initial data: bump support touches the bubble surface");
    ArrayXd q = ArrayXd::Zero(g.n);
    for (Index i = 0; i < g.n; ++i) {
        const double z = g.xi[i] - center;
        if (std::abs(z) <= 4.0 * width)
            q[i] = amplitude * std::exp(-z * z / (width * width));
    }
    return q;
}

}  // namespace

SimState make_initial_data(const InitSpec& spec, const Grid& g, const FluidParams& p) {
    SimState s;
    s.u = ArrayXd::Zero(g.n);
    s.q = ArrayXd::Zero(g.n);
    s.radius = 1.0;
    s.time = 0.0;
    switch (spec.kind) {
        case InitKind::equilibrium:
            break;
        case InitKind::q_bump:
            s.q = truncated_gaussian(spec.amplitude, spec.center, spec.width, g);
            s.radius = radius_from_perturbation(s.q[0], p);
            break;
        case InitKind::outgoing_pulse:
            s.q = truncated_gaussian(spec.amplitude, spec.center, spec.width, g);
            s.u = -p.c0() * s.q;
            s.radius = radius_from_perturbation(s.q[0], p);
            break;
        case InitKind::file: {
            s = load_init_csv(spec.file, g);
            const CompatReport rep = check_compatibility(s.u, s.q, s.radius, g, p);
            if (rep.cc0_residual > 1e-8 || rep.cc1_residual > 1e-8) {
                std::ostringstream msg;
                msg << "initial data from " << spec.file << " violates compatibility: cc0="
                    << rep.cc0_residual << " cc1=" << rep.cc1_residual;
                throw std::invalid_argument(msg.str());
            }
            break;
        }
    }
    return s;
}

namespace {

// u making the discretely reconstructed incoming wave vanish identically:
// the trapezoid rule for phi and the target phi_i = -c0 xi_i q_i - xi_i u_i
// combine into a backward recursion seeded by u = 0 above the support.
// Continuum limit: u = -c0 q - psi/xi^2 with psi the moment integral of q.
ArrayXd incoming_free_velocity(const ArrayXd& q, const Grid& g, double c0) {
    const double h2 = 0.5 * g.dxi;
    ArrayXd u = ArrayXd::Zero(g.n);
    for (Index i = g.n - 2; i >= 0; --i) {
        u[i] = (c0 * (g.xi[i + 1] * q[i + 1] - g.xi[i] * q[i])
                + (g.xi[i + 1] + h2) * u[i + 1]) / (g.xi[i] - h2);
    }
    return u;
}

// Surface-corner smoothness defects of linear-mode data under the solver's
// own stencils: the divergence of u against the pin rate, then the same
// comparison one and two time derivatives later. Nonzero values put a kink
// at the corner that radiates grid-generated noise.
Eigen::Vector3d corner_defects(const ArrayXd& u, const ArrayXd& q, const Grid& g,
                               const FluidParams& p) {
    const double fp1 = boundary_perturbation_slope_eq(p);
    const ArrayXd& xi2 = g.xi.square();
    const ArrayXd divu = d_dxi(xi2 * u, g.dxi) / xi2;
    const ArrayXd dq = d_dxi(q, g.dxi);
    const ArrayXd ddq = d_dxi(xi2 * dq, g.dxi) / xi2;
    const ArrayXd ddivu = d_dxi(divu, g.dxi);
    const ArrayXd d2divu = d_dxi(xi2 * ddivu, g.dxi) / xi2;
    Eigen::Vector3d f;
    f[0] = divu[0] - fp1 * u[0];
    f[1] = ddq[0] - fp1 * dq[0];
    f[2] = d2divu[0] - fp1 * ddivu[0];
    return f;
}

}  // namespace

SimState incoming_free_pulse(double amplitude, double center, double width,
                             const Grid& g, const FluidParams& p) {
    if (!(center + 4.0 * width < g.xi[g.n - 1]))
        throw std::invalid_argument("incoming_free_pulse: support reaches the outer edge");
    const double c0 = p.c0();

    // Boundary-attached corrector blobs. Their amplitudes are solved so the
    // data meets the first three compatibility orders of the pinned surface
    // exactly in the solver's discretization; without them the corner kink
    // radiates a slowly decaying spurious incoming wave.
    const double sigma = 0.4;
    ArrayXd blobs[3];
    for (auto& b : blobs) b = ArrayXd(g.n);
    for (Index i = 0; i < g.n; ++i) {
        const double z = (g.xi[i] - 1.0) / sigma;
        const double b = std::exp(-z * z);
        blobs[0][i] = b;
        blobs[1][i] = z * b;
        blobs[2][i] = z * z * b;
    }

    const ArrayXd q0 = truncated_gaussian(amplitude, center, width, g);
    auto defects = [&](const ArrayXd& q) {
        return corner_defects(incoming_free_velocity(q, g, c0), q, g, p);
    };
    const Eigen::Vector3d f0 = defects(q0);
    Eigen::Matrix3d jac;
    for (int j = 0; j < 3; ++j)
        jac.col(j) = defects(q0 + amplitude * blobs[j]) - f0;
    const Eigen::Vector3d beta = jac.inverse() * (-f0);

    SimState s;
    s.q = q0 + amplitude * (beta[0] * blobs[0] + beta[1] * blobs[1] + beta[2] * blobs[2]);
    s.u = incoming_free_velocity(s.q, g, c0);
    s.radius = 1.0 + s.q[0] / boundary_perturbation_slope_eq(p);
    s.time = 0.0;
    return s;
}

SimState free_wave_pulse(double amplitude, double center, double width,
                         const Grid& g, const FluidParams& p) {
    if (!(center - 4.0 * width > 1.0))
        throw std::invalid_argument("free_wave_pulse: support touches the bubble surface");
    SimState s;
    s.u = ArrayXd::Zero(g.n);
    s.q = ArrayXd::Zero(g.n);
    s.radius = 1.0;
    s.time = 0.0;
    const double c0 = p.c0();
    for (Index i = 0; i < g.n; ++i) {
        const double xi = g.xi[i];
        const double z = (xi - center) / width;
        if (std::abs(z) > 4.0) continue;
        const double psi = amplitude * std::exp(-z * z);
        const double dpsi = -2.0 * z / width * psi;
        s.u[i] = (dpsi * xi - psi) / (xi * xi);
        s.q[i] = -dpsi / (c0 * xi);  // dtpsi = -c0 dpsi: zero incoming wave
    }
    return s;
}

CompatReport check_compatibility(const ArrayXd& u_in, const ArrayXd& q_in, double r_in,
                                 const Grid& g, const FluidParams& p) {
    CompatReport rep;
    rep.cc0_residual = std::abs(q_in[0] - boundary_perturbation(r_in, p));
    SimState s;
    s.u = u_in;
    s.q = q_in;
    s.radius = r_in;
    const RadiusField f = radius_field(s, g, p);
    const ArrayXd r2u = f.r.square() * u_in;
    // d/dx = xi^-2 d/dxi, with xi = 1 at the surface node.
    const double dxr2u0 = (-3.0 * r2u[0] + 4.0 * r2u[1] - r2u[2]) / (2.0 * g.dxi);
    rep.cc1_residual = std::abs(boundary_perturbation_slope(r_in, p) * u_in[0] - dxr2u0);
    return rep;
}

SmallnessNorms smallness_norms(const SimState& s, const Grid& g, const FluidParams& p) {
    const double c0sq = p.ca * p.gamma / 2.0;
    const ArrayXd dq = d_dxi(s.q, g.dxi);
    const ArrayXd d2q = d2_dxi2(s.q, g.dxi);
    const ArrayXd du = d_dxi(s.u, g.dxi);
    const ArrayXd d2u = d2_dxi2(s.u, g.dxi);
    const ArrayXd& xi = g.xi;

    const ArrayXd l1q = c0sq * dq;
    const ArrayXd l2q = c0sq * (d2q + 2.0 / xi * dq);
    const ArrayXd l1u = du + 2.0 / xi * s.u;
    const ArrayXd l2u = c0sq * (d2u + 2.0 / xi * du - 2.0 / xi.square() * s.u);

    const double fR = boundary_perturbation(s.radius, p);
    double eps2 = fR * fR;
    eps2 += trapz_x(s.q.square(), g) + trapz_x(l1q.square(), g) + trapz_x(l2q.square(), g);
    eps2 += trapz_x(s.u.square(), g) + trapz_x(l1u.square(), g) + trapz_x(l2u.square(), g);

    SmallnessNorms n;
    n.epsilon = std::sqrt(eps2);
    n.epsilon_tilde = std::sqrt(trapz_x((xi.square() * s.u).square(), g))
                    + std::sqrt(trapz_x((xi.square() * s.q).square(), g));
    return n;
}

void save_init_csv(const std::string& path, const SimState& s, const Grid& g) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("save_init_csv: cannot open " + path);
    out.precision(17);
    out << "# R=" << s.radius << "\n";
    out << "xi,u,q\n";
    for (Index i = 0; i < g.n; ++i)
        out << g.xi[i] << "," << s.u[i] << "," << s.q[i] << "\n";
}

SimState load_init_csv(const std::string& path, const Grid& g) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("load_init_csv: cannot open " + path);
    std::string line;
    if (!std::getline(in, line) || line.rfind("# R=", 0) != 0)
        throw std::runtime_error("load_init_csv: missing '# R=' metadata line");
    SimState s;
    s.radius = std::stod(line.substr(4));
    if (!std::isfinite(s.radius)) throw std::runtime_error("load_init_csv: non-finite R");
    if (!std::getline(in, line) || line != "xi,u,q")
        throw std::runtime_error("load_init_csv: expected header 'xi,u,q'");
    s.u = ArrayXd::Zero(g.n);
    s.q = ArrayXd::Zero(g.n);
    Index i = 0;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        if (i >= g.n) throw std::runtime_error("load_init_csv: more rows than grid nodes");
        std::istringstream ss(line);
        std::string tok;
        double vals[3];
        for (int k = 0; k < 3; ++k) {
            if (!std::getline(ss, tok, ','))
                throw std::runtime_error("load_init_csv: short row " + std::to_string(i + 3));
            vals[k] = std::stod(tok);
            if (!std::isfinite(vals[k]))
                throw std::runtime_error("load_init_csv: non-finite value at row " + std::to_string(i + 3));
        }
        if (std::abs(vals[0] - g.xi[i]) > 1e-12 * std::max(1.0, std::abs(g.xi[i])))
            throw std::runtime_error("load_init_csv: xi mismatch with the run grid at row " + std::to_string(i + 3));
        s.u[i] = vals[1];
        s.q[i] = vals[2];
        ++i;
    }
    if (i != g.n) throw std::runtime_error("load_init_csv: fewer rows than grid nodes");
    s.time = 0.0;
    return s;
}

}  // namespace bubble
