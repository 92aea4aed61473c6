#pragma once

#include "convwave/field.hpp"

namespace convwave {

/// int_R omega . F(y - s omega) ds by composite trapezoid at step h/2 along the
/// full chord through the box, bilinear sampling off-grid. The parameterization
/// is anchored at the perpendicular foot of the line, so the value depends only
/// on the line itself (y -> y + t omega is exact). Brute-force oracle for the
/// ray-extraction pipeline; returns 0 when the line misses the support.
inline Complex line_quadrature(const VectorField& F, const Direction& dir, const Vec2& y,
                               double step_scale = 0.5) {
    const Grid& g = F.grid();
    const Vec2 foot = y - y.dot(dir.omega) * dir.omega;
    const double bx = std::max(std::abs(g.x0), std::abs(g.x0 + (g.nx - 1) * g.h));
    const double by = std::max(std::abs(g.y0), std::abs(g.y0 + (g.ny - 1) * g.h));
    const double span = std::sqrt(bx * bx + by * by) + foot.norm() + 1.0;
    const double ds = step_scale * g.h;
    const int n = static_cast<int>(std::ceil(2.0 * span / ds));
    Complex acc{0, 0};
    for (int m = 0; m <= n; ++m) {
        const double s = -span + 2.0 * span * m / n;
        const Vec2 p = foot - s * dir.omega;
        const Complex val = dir.omega.x * F.a1.interp(p) + dir.omega.y * F.a2.interp(p);
        acc += (m == 0 || m == n ? 0.5 : 1.0) * val;
    }
    return acc * (2.0 * span / n);
}

/// Scalar chord integral int_R f(y - s omega) ds (electric-potential rays).
inline Complex line_quadrature(const ScalarField& f, const Direction& dir, const Vec2& y,
                               double step_scale = 0.5) {
    const Grid& g = f.grid;
    const Vec2 foot = y - y.dot(dir.omega) * dir.omega;
    const double bx = std::max(std::abs(g.x0), std::abs(g.x0 + (g.nx - 1) * g.h));
    const double by = std::max(std::abs(g.y0), std::abs(g.y0 + (g.ny - 1) * g.h));
    const double span = std::sqrt(bx * bx + by * by) + foot.norm() + 1.0;
    const double ds = step_scale * g.h;
    const int n = static_cast<int>(std::ceil(2.0 * span / ds));
    Complex acc{0, 0};
    for (int m = 0; m <= n; ++m) {
        const double s = -span + 2.0 * span * m / n;
        acc += (m == 0 || m == n ? 0.5 : 1.0) * f.interp(foot - s * dir.omega);
    }
    return acc * (2.0 * span / n);
}

}  // namespace convwave
