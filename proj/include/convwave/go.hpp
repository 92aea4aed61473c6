#pragma once

#include "convwave/coeff.hpp"
#include "convwave/wave.hpp"

namespace convwave {

/// Smooth compactly supported probe profile. Two shapes:
///  - Radial: concentrated L^2-normalized family phi_h = (1/h) psi((x-y)/h),
///    psi the unit bump scaled to ||psi||_{L2(R^2)} = 1 (the ray-sampling probe).
///  - Slab: thin along omega, wide across (transported band for rate studies);
///    amplitude 1, not L^2-normalized.
struct BumpProfile {
    enum class Kind { Radial, Slab };

    Kind kind = Kind::Radial;
    Vec2 center;            // radial: center y
    double radius = 0.05;   // radial: support radius h_bump
    // slab parameters (relative to the propagation direction omega)
    Vec2 omega{1, 0};
    double c_par = 0.0, w_par = 0.1, w_perp = 0.5;

    double operator()(const Vec2& p) const {
        if (kind == Kind::Radial) {
            const double dx = p.x - center.x, dy = p.y - center.y;
            const double r2 = (dx * dx + dy * dy) / (radius * radius);
            return bump_profile_r2(r2) / (radius * radial_bump_l2());
        }
        const double spar = (p.dot(omega) - c_par) / w_par;
        const double sper = p.dot(Vec2{-omega.y, omega.x}) / w_perp;
        return bump_profile(spar) * bump_profile(sper);
    }

    static BumpProfile radial(Vec2 y, double h_bump) {
        BumpProfile b;
        b.kind = Kind::Radial;
        b.center = y;
        b.radius = h_bump;
        return b;
    }
    static BumpProfile slab(const Direction& dir, double c_par, double w_par, double w_perp) {
        BumpProfile b;
        b.kind = Kind::Slab;
        b.omega = dir.omega;
        b.c_par = c_par;
        b.w_par = w_par;
        b.w_perp = w_perp;
        return b;
    }
};

/// Concentrated profile family phi_h with its scaling diagnostics.
struct BumpFamily {
    BumpProfile profile;
    double l2 = 0.0;          // discrete ||phi_h||_{L2}, ~ 1
    double h3 = 0.0;          // grid H^3 norm, ~ h_bump^{-3}
    double first_moment = 0.0;  // int phi_h^2 |y - x| dx, ~ h_bump
};

/// Build phi_h centered at y in the collar; errors when the support leaves D_rho.
inline BumpFamily make_bump_family(const Vec2& y, double h_bump, const Domain& dom,
                                   const Grid& grid) {
    const double d = dom.dist_to_omega(y);
    if (d <= 0.0 || d >= dom.rho)
        throw ConfigError("make_bump_family: center must lie in the collar D_rho");
    if (d - h_bump <= 0.0 || d + h_bump >= dom.rho)
        throw ConfigError("make_bump_family: support escapes D_rho");
    BumpFamily fam;
    fam.profile = BumpProfile::radial(y, h_bump);
    ScalarField f = ScalarField::sample(grid, [&](Vec2 p) { return Complex{fam.profile(p), 0}; });
    fam.l2 = l2_norm(f);
    fam.h3 = h3_norm(f);
    double acc = 0;
    for (int j = 0; j < grid.ny; ++j)
        for (int i = 0; i < grid.nx; ++i) {
            const Vec2 p = grid.point(i, j);
            acc += trapezoid_weight(grid, i, j) * std::norm(f.at(i, j)) * (p - y).norm();
        }
    fam.first_moment = acc * grid.h * grid.h;
    return fam;
}

/// Geometric-optics ansatz phi(x + t omega) b(x,t) exp(i lambda (x.omega + t)).
struct GoAnsatz {
    Direction omega{0.0};
    double lambda = 10.0;
    BumpProfile bump;
    SolveDirection sign = SolveDirection::Forward;  // Backward uses conj(A#) in b
};

/// phi(x,t) = phi0(x + t omega) sampled on grid x time.
inline SpaceTimeField transport_phase(const BumpProfile& bump, const Direction& dir,
                                      const Grid& g) {
    SpaceTimeField out(g);
    for (int k = 0; k <= g.nt; ++k) {
        const double t = k * g.dt;
        for (int j = 0; j < g.ny; ++j)
            for (int i = 0; i < g.nx; ++i)
                out.at(k, i, j) = bump(g.point(i, j) + t * dir.omega);
    }
    return out;
}

/// b(x,t) = exp(i int_0^t omega . A#(x + s omega) ds); cumulative trapezoid
/// along the characteristic per node. sign = Backward conjugates A#.
inline SpaceTimeField go_amplitude(const VectorField& A_smooth, const Direction& dir,
                                   SolveDirection sign, const Grid& g) {
    SpaceTimeField out(g);
    const bool conj_A = sign == SolveDirection::Backward;
    auto aval = [&](const Vec2& p) {
        Complex z = dir.omega.x * A_smooth.a1.interp(p) + dir.omega.y * A_smooth.a2.interp(p);
        return conj_A ? std::conj(z) : z;
    };
    const int nn = g.num_nodes();
    std::vector<Complex> W(nn, Complex{0, 0}), prev(nn), cur(nn);
    for (int j = 0; j < g.ny; ++j)
        for (int i = 0; i < g.nx; ++i) prev[g.idx(i, j)] = aval(g.point(i, j));
    for (int n = 0; n < nn; ++n) out.v[n] = {1.0, 0.0};
    for (int k = 1; k <= g.nt; ++k) {
        const double t = k * g.dt;
        for (int j = 0; j < g.ny; ++j)
            for (int i = 0; i < g.nx; ++i) cur[g.idx(i, j)] = aval(g.point(i, j) + t * dir.omega);
        for (int n = 0; n < nn; ++n) {
            W[n] += 0.5 * g.dt * (prev[n] + cur[n]);
            out.v[static_cast<size_t>(k) * nn + n] = std::exp(Complex{0, 1} * W[n]);
        }
        std::swap(prev, cur);
    }
    return out;
}

/// Leading GO term on grid x time.
inline SpaceTimeField go_leading_term(const GoAnsatz& an, const VectorField& A_smooth,
                                      const Grid& g) {
    SpaceTimeField lead = go_amplitude(A_smooth, an.omega, an.sign, g);
    for (int k = 0; k <= g.nt; ++k) {
        const double t = k * g.dt;
        for (int j = 0; j < g.ny; ++j)
            for (int i = 0; i < g.nx; ++i) {
                const Vec2 p = g.point(i, j);
                const double phase = an.lambda * (p.dot(an.omega.omega) + t);
                lead.at(k, i, j) *= an.bump(p + t * an.omega.omega)
                                    * std::exp(Complex{0, 1} * phase);
            }
    }
    return lead;
}

/// Boundary trace of the leading term (fast path: boundary nodes only).
inline BoundaryTrace go_boundary_trace(const GoAnsatz& an, const VectorField& A_smooth,
                                       std::shared_ptr<const Classification> cls, const Grid& g) {
    const bool conj_A = an.sign == SolveDirection::Backward;
    auto aval = [&](const Vec2& p) {
        Complex z = an.omega.omega.x * A_smooth.a1.interp(p) + an.omega.omega.y * A_smooth.a2.interp(p);
        return conj_A ? std::conj(z) : z;
    };
    BoundaryTrace tr(cls, g.dt, g.nt);
    const size_t nb = cls->boundary.size();
    std::vector<Complex> W(nb, Complex{0, 0}), prev(nb), cur(nb);
    for (size_t b = 0; b < nb; ++b) prev[b] = aval(cls->boundary[b].pos);
    for (int k = 0; k <= g.nt; ++k) {
        const double t = k * g.dt;
        for (size_t b = 0; b < nb; ++b) {
            const Vec2 p0 = cls->boundary[b].pos;
            if (k > 0) {
                cur[b] = aval(p0 + t * an.omega.omega);
                W[b] += 0.5 * g.dt * (prev[b] + cur[b]);
            }
            const double phase = an.lambda * (p0.dot(an.omega.omega) + t);
            tr.at(k, b) = an.bump(p0 + t * an.omega.omega) * std::exp(Complex{0, 1} * W[b])
                          * std::exp(Complex{0, 1} * phase);
        }
        std::swap(prev, cur);
    }
    tr.update_flags();
    return tr;
}

/// Sweep-condition check: the transported support must avoid Omega at t = 0 and T.
inline bool ansatz_clears_omega(const GoAnsatz& an, std::shared_ptr<const Classification> cls,
                                const Grid& g, double tol = 0.0) {
    const Grid win = g.window(cls->iw0, cls->jw0, cls->iw1, cls->jw1);
    double m = 0;
    for (int j = 0; j < win.ny; ++j)
        for (int i = 0; i < win.nx; ++i) {
            const Vec2 p = win.point(i, j);
            m = std::max(m, std::abs(an.bump(p)));
            m = std::max(m, std::abs(an.bump(p + g.T * an.omega.omega)));
        }
    return m <= tol;
}

struct GoSolution {
    SpaceTimeField u;      // full solve driven by the ansatz trace
    SpaceTimeField r;      // u - leading term on the Omega window
    BoundaryTrace f;       // the driving trace
    double r_l2 = 0.0;
    double grad_r_l2 = 0.0;
};

/// Solve with the ansatz boundary trace and return the correction r = u - lead.
/// Forward: r has zero Cauchy data at t = 0; backward: at t = T. The lateral
/// trace of r vanishes by construction.
inline GoSolution go_solution_with_residual(const CoefficientPair& coeffs,
                                            const VectorField& A_smooth, const GoAnsatz& an,
                                            std::shared_ptr<const Classification> cls,
                                            const Grid& g) {
    if (an.lambda * g.h > 1.0)
        throw ConfigError("go_solution_with_residual: fewer than 6 points per wavelength"
                          " (lambda h > 1), refusing");
    GoSolution out;
    WaveSolver solver(OperatorForm::Magnetic, coeffs.A, &coeffs.q, cls, g);
    const Grid& win = solver.window();
    SpaceTimeField lead = go_leading_term(an, A_smooth, win);
    // the driving trace is the leading term sampled on the rim, so the lateral
    // trace of r vanishes identically (not just to roundoff)
    out.f = BoundaryTrace(cls, g.dt, g.nt);
    for (int k = 0; k <= g.nt; ++k)
        for (size_t b = 0; b < cls->boundary.size(); ++b)
            out.f.at(k, b) = lead.at(k, cls->boundary[b].i - cls->iw0,
                                     cls->boundary[b].j - cls->jw0);
    out.f.update_flags();
    out.u = an.sign == SolveDirection::Forward ? solver.solve_forward(out.f)
                                               : solver.solve_backward(out.f);
    out.r = out.u;
    for (size_t n = 0; n < out.r.v.size(); ++n) out.r.v[n] -= lead.v[n];
    out.r_l2 = l2q_norm(out.r);
    out.grad_r_l2 = grad_l2q_norm(out.r);
    return out;
}

/// Discrete residual of the amplitude transport (d_t - omega.grad - i omega.A#) b.
inline double amplitude_transport_residual(const SpaceTimeField& b, const VectorField& A_smooth,
                                           const Direction& dir, SolveDirection sign) {
    const Grid& g = b.grid;
    const bool conj_A = sign == SolveDirection::Backward;
    double acc = 0;
    long cnt = 0;
    for (int k = 1; k < g.nt; ++k)
        for (int j = 1; j < g.ny - 1; ++j)
            for (int i = 1; i < g.nx - 1; ++i) {
                const Complex bt = (b.at(k + 1, i, j) - b.at(k - 1, i, j)) / (2 * g.dt);
                const Complex bx = (b.at(k, i + 1, j) - b.at(k, i - 1, j)) / (2 * g.h);
                const Complex by = (b.at(k, i, j + 1) - b.at(k, i, j - 1)) / (2 * g.h);
                const Vec2 p = g.point(i, j);
                Complex a = dir.omega.x * A_smooth.a1.interp(p) + dir.omega.y * A_smooth.a2.interp(p);
                if (conj_A) a = std::conj(a);
                const Complex res = bt - dir.omega.x * bx - dir.omega.y * by
                                    - Complex{0, 1} * a * b.at(k, i, j);
                acc += std::norm(res);
                ++cnt;
            }
    return std::sqrt(acc * g.h * g.h * g.dt);
}

}  // namespace convwave
