#pragma once

#include <Eigen/Core>

#include "bubble/grid.hpp"

namespace bubble {

// First derivative in xi on a uniform grid: second-order central in the
// interior, second-order one-sided at both ends.
ArrayXd d_dxi(const ArrayXd& v, double dxi);

// Summation-by-parts variant: central interior, first-order one-sided end
// rows. Together with the half trapezoid end weights this pairs derivatives
// and integrals exactly, so the semi-discrete flow exchanges energy through
// the physical boundary fluxes alone; the solver steps with this one.
ArrayXd d_dxi_sbp(const ArrayXd& v, double dxi);

// Second derivative in xi, same order and boundary treatment.
ArrayXd d2_dxi2(const ArrayXd& v, double dxi);

// Trapezoid integral of v in the mass measure dx = xi^2 dxi over the whole
// grid, with uniform weights in xi.
double trapz_x(const ArrayXd& v, const Grid& g);

// Cumulative trapezoid of v on the x mesh: out[i] = integral from x_0 to x_i.
// Exact for constants, which the radius reconstruction relies on.
ArrayXd cumtrapz_x(const ArrayXd& v, const Grid& g);

// Trapezoid integral of samples y(t) on a (possibly nonuniform) time mesh.
double trapz_t(const ArrayXd& t, const ArrayXd& y);

// Piecewise-linear sample of (grid nodes xi, values v) at point s; clamps to
// the end values outside the grid.
double lerp_grid(const Grid& g, const ArrayXd& v, double s);

// Least-squares slope and intercept of y against x.
struct LineFit {
    double slope = 0.0;
    double intercept = 0.0;
};
LineFit fit_line(const ArrayXd& x, const ArrayXd& y);

}  // namespace bubble
