#pragma once

#include <Eigen/Dense>

#include "convwave/wave.hpp"

namespace convwave {

/// Dirichlet probe family: boundary-arclength Fourier modes x temporal sin
/// half-waves vanishing at t = 0, times a C^2 startup switch.
inline std::vector<BoundaryTrace> make_probe_basis(std::shared_ptr<const Classification> cls,
                                                   const Grid& g, int boundary_modes,
                                                   int time_modes, double ramp_fraction = 0.3) {
    std::vector<BoundaryTrace> out;
    const double P = cls->perimeter;
    const double t_ramp = ramp_fraction * g.T;
    for (int m = 0; m < boundary_modes; ++m) {
        for (int p = 1; p <= time_modes; ++p) {
            BoundaryTrace tr(cls, g.dt, g.nt);
            for (int k = 0; k <= g.nt; ++k) {
                const double t = k * g.dt;
                const double tv = std::sin(p * kPi * t / (2.0 * g.T)) * smooth_switch(t / t_ramp);
                for (size_t b = 0; b < tr.nb(); ++b) {
                    const double s = cls->boundary[b].s;
                    double bv;
                    if (m == 0) bv = 1.0;
                    else if (m % 2 == 1) bv = std::cos(2.0 * kPi * ((m + 1) / 2) * s / P);
                    else bv = std::sin(2.0 * kPi * (m / 2) * s / P);
                    tr.at(k, b) = bv * tv;
                }
            }
            tr.update_flags();
            out.push_back(std::move(tr));
        }
    }
    return out;
}

struct DnNormResult {
    double value = 0.0;
    int basis_used = 0;
    bool reduced = false;  // Gram near-singular, basis truncated
};

/// Largest singular value of (op1 - op2) restricted to the probe span,
/// measured H^1(Sigma) -> L^2(Sigma) via Gram factorization.
inline DnNormResult dn_norm_estimate(const DnOperator& op1, const DnOperator& op2,
                                     const std::vector<BoundaryTrace>& probes) {
    const int K = static_cast<int>(probes.size());
    Eigen::MatrixXd G(K, K);
    for (int a = 0; a < K; ++a)
        for (int b = 0; b <= a; ++b)
            G(a, b) = G(b, a) = h1_sigma_inner(probes[a], probes[b]).real();

    // drop trailing probes until the Gram matrix is comfortably positive definite
    int used = K;
    Eigen::LLT<Eigen::MatrixXd> llt;
    while (used > 0) {
        llt.compute(G.topLeftCorner(used, used));
        if (llt.info() == Eigen::Success) {
            const Eigen::MatrixXd Lm = llt.matrixL();
            double dmin = 1e300, dmax = 0;
            for (int a = 0; a < used; ++a) {
                dmin = std::min(dmin, Lm(a, a));
                dmax = std::max(dmax, Lm(a, a));
            }
            if (dmin > 1e-10 * dmax) break;
        }
        --used;
    }
    if (used == 0) throw SolverError("dn_norm_estimate: probe Gram matrix singular");
    DnNormResult res;
    res.basis_used = used;
    res.reduced = used < K;

    std::vector<BoundaryTrace> imgs;
    imgs.reserve(used);
    for (int a = 0; a < used; ++a) imgs.push_back(op1.apply(probes[a]) - op2.apply(probes[a]));

    Eigen::MatrixXd S(used, used);
    for (int a = 0; a < used; ++a)
        for (int b = 0; b <= a; ++b)
            S(a, b) = S(b, a) = sigma_inner(imgs[a], imgs[b]).real();

    const Eigen::MatrixXd Lm = llt.matrixL();
    const Eigen::MatrixXd Li = Lm.triangularView<Eigen::Lower>().solve(
        Eigen::MatrixXd::Identity(used, used));
    const Eigen::MatrixXd Mm = Li * S * Li.transpose();
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(0.5 * (Mm + Mm.transpose()));
    res.value = std::sqrt(std::max(0.0, es.eigenvalues().maxCoeff()));
    return res;
}

/// max over probes of ||[(N1 - N2) - (Lam1 - Lam2)](f)||_{L2} / ||f||_{H1};
/// the reduction identity makes this O(h) when V1 = V2 on Gamma.
inline double dn_equality_residual(const VectorField& V1, const VectorField& V2,
                                   std::shared_ptr<const Classification> cls, const Grid& g,
                                   const std::vector<BoundaryTrace>& probes) {
    for (const auto& b : cls->boundary) {
        const Complex d1 = V1.a1.interp(b.pos) - V2.a1.interp(b.pos);
        const Complex d2 = V1.a2.interp(b.pos) - V2.a2.interp(b.pos);
        if (std::abs(d1) > 1e-10 || std::abs(d2) > 1e-10)
            throw AdmissibilityError("dn_equality_residual: requires V1 = V2 on Gamma");
    }
    const DnOperator l1 = make_lambda_op(V1, cls, g);
    const DnOperator l2 = make_lambda_op(V2, cls, g);
    const DnOperator n1 = make_n_op(reduce_to_em(V1), cls, g);
    const DnOperator n2 = make_n_op(reduce_to_em(V2), cls, g);
    double worst = 0;
    for (const auto& f : probes) {
        const BoundaryTrace d = (n1.apply(f) - n2.apply(f)) - (l1.apply(f) - l2.apply(f));
        worst = std::max(worst, l2_sigma_norm(d) / h1_sigma_norm(f));
    }
    return worst;
}

/// Discrete residual of the magnetic Green identity
///   int_Om Delta_A u vbar = int_Om conj(Delta_Abar v) u
///        + int_Gam [ (d_nu + i nu.A) u vbar - conj((d_nu + i nu.Abar) v) u ].
/// Fields live on the Omega window grid; volume terms use interior nodes.
inline double green_formula_residual(const VectorField& A, const ScalarField& u,
                                     const ScalarField& v) {
    const Grid& g = u.grid;
    const double i2h = 1.0 / (2.0 * g.h), ih2 = 1.0 / (g.h * g.h);
    auto delta_mag = [&](const ScalarField& w, bool conj_A, int i, int j) {
        const Complex lap = (w.at(i + 1, j) + w.at(i - 1, j) + w.at(i, j + 1) + w.at(i, j - 1)
                             - 4.0 * w.at(i, j)) * ih2;
        auto Af = [&](int ii, int jj, int c) {
            const Complex z = c == 0 ? A.a1.at(ii, jj) : A.a2.at(ii, jj);
            return conj_A ? std::conj(z) : z;
        };
        const Complex gx = (w.at(i + 1, j) - w.at(i - 1, j)) * i2h;
        const Complex gy = (w.at(i, j + 1) - w.at(i, j - 1)) * i2h;
        const Complex dAu = (Af(i + 1, j, 0) * w.at(i + 1, j) - Af(i - 1, j, 0) * w.at(i - 1, j)) * i2h
                          + (Af(i, j + 1, 1) * w.at(i, j + 1) - Af(i, j - 1, 1) * w.at(i, j - 1)) * i2h;
        const Complex AA = Af(i, j, 0) * Af(i, j, 0) + Af(i, j, 1) * Af(i, j, 1);
        return lap + Complex{0, 1} * (Af(i, j, 0) * gx + Af(i, j, 1) * gy + dAu) - AA * w.at(i, j);
    };

    Complex lhs{0, 0}, rhs_vol{0, 0};
    for (int j = 1; j < g.ny - 1; ++j)
        for (int i = 1; i < g.nx - 1; ++i) {
            lhs += delta_mag(u, false, i, j) * std::conj(v.at(i, j));
            rhs_vol += std::conj(delta_mag(v, true, i, j)) * u.at(i, j);
        }
    lhs *= g.h * g.h;
    rhs_vol *= g.h * g.h;

    // boundary terms along the window rim (square walk)
    Complex rhs_bd{0, 0};
    auto rim_term = [&](int i, int j, Vec2 nu) {
        const Vec2 p0 = g.point(i, j);
        auto dnu = [&](const ScalarField& w) {
            const Vec2 p1 = p0 - g.h * nu, p2 = p0 - 2.0 * g.h * nu;
            return (3.0 * w.interp(p0) - 4.0 * w.interp(p1) + w.interp(p2)) / (2.0 * g.h);
        };
        const Complex Anu = nu.x * A.a1.at(i, j) + nu.y * A.a2.at(i, j);
        const Complex tu = (dnu(u) + Complex{0, 1} * Anu * u.at(i, j)) * std::conj(v.at(i, j));
        const Complex tv = std::conj(dnu(v) + Complex{0, 1} * std::conj(Anu) * v.at(i, j)) * u.at(i, j);
        return tu - tv;
    };
    const double is2 = 1.0 / std::sqrt(2.0);
    for (int i = 0; i < g.nx - 1; ++i)
        rhs_bd += rim_term(i, 0, i == 0 ? Vec2{-is2, -is2} : Vec2{0, -1}) * g.h;
    for (int j = 0; j < g.ny - 1; ++j)
        rhs_bd += rim_term(g.nx - 1, j, j == 0 ? Vec2{is2, -is2} : Vec2{1, 0}) * g.h;
    for (int i = g.nx - 1; i > 0; --i)
        rhs_bd += rim_term(i, g.ny - 1, i == g.nx - 1 ? Vec2{is2, is2} : Vec2{0, 1}) * g.h;
    for (int j = g.ny - 1; j > 0; --j)
        rhs_bd += rim_term(0, j, j == g.ny - 1 ? Vec2{-is2, is2} : Vec2{-1, 0}) * g.h;

    return std::abs(lhs - rhs_vol - rhs_bd);
}

}  // namespace convwave
