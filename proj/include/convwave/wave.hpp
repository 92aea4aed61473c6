#pragma once

#include <memory>
#include <optional>

#include "convwave/coeff.hpp"
#include "convwave/trace.hpp"

namespace convwave {

enum class OperatorForm { Convection, Magnetic };
enum class SolveDirection { Forward, Backward };

/// Leapfrog solver for L_V / L*_V / H_{A,q} / H*_{A,q} on the Omega window of a
/// square domain. Backward problems run the adjoint operator in reversed time.
class WaveSolver {
public:
    WaveSolver(OperatorForm form, const VectorField& coeff_box,
               const ScalarField* q_box, std::shared_ptr<const Classification> cls,
               const Grid& box_grid, double cfl_safety = 0.9)
        : form_(form), cls_(std::move(cls)) {
        if (box_grid.dt > cfl_safety * box_grid.h / std::sqrt(2.0) + 1e-14)
            throw SolverError("wave solver: CFL violated (dt too large for h)");
        win_ = box_grid.window(cls_->iw0, cls_->jw0, cls_->iw1, cls_->jw1);
        if (win_.nx < 5 || win_.ny < 5)
            throw SolverError("wave solver: Omega window too small");
        const int n = win_.num_nodes();
        c1_.resize(n); c2_.resize(n); aa_.resize(n); qv_.resize(n);
        for (int j = 0; j < win_.ny; ++j)
            for (int i = 0; i < win_.nx; ++i) {
                const int bi = cls_->iw0 + i, bj = cls_->jw0 + j;
                const int wn = win_.idx(i, j), bn = box_grid.idx(bi, bj);
                c1_[wn] = coeff_box.a1.v[bn];
                c2_[wn] = coeff_box.a2.v[bn];
                if (form == OperatorForm::Magnetic) {
                    const Complex A1 = c1_[wn], A2 = c2_[wn];
                    aa_[wn] = A1 * A1 + A2 * A2;
                    qv_[wn] = q_box ? q_box->v[bn] : Complex{0, 0};
                } else {
                    if (std::abs(c1_[wn].imag()) > 1e-12 || std::abs(c2_[wn].imag()) > 1e-12)
                        throw AdmissibilityError("wave solver: convection field V must be real");
                    aa_[wn] = qv_[wn] = {0, 0};
                }
            }
    }

    const Grid& window() const { return win_; }
    std::shared_ptr<const Classification> classification() const { return cls_; }

    /// Forward solve with zero initial data; Dirichlet trace f imposed on Gamma.
    SpaceTimeField solve_forward(const BoundaryTrace& f,
                                 const SpaceTimeField* source = nullptr) const {
        if (!f.vanishes_at_t0)
            throw AdmissibilityError("solve_forward: Dirichlet data must vanish at t = 0");
        return march(f, source, /*adjoint=*/false);
    }

    /// Backward solve (zero data at t = T): adjoint operator in reversed time.
    SpaceTimeField solve_backward(const BoundaryTrace& g,
                                  const SpaceTimeField* source = nullptr) const {
        if (!g.vanishes_at_tT)
            throw AdmissibilityError("solve_backward: Dirichlet data must vanish at t = T");
        SpaceTimeField rev_src;
        if (source) {
            rev_src = *source;
            for (int k = 0; k <= win_.nt; ++k)
                for (int n = 0; n < win_.num_nodes(); ++n)
                    rev_src.v[static_cast<size_t>(k) * win_.num_nodes() + n] =
                        source->v[static_cast<size_t>(win_.nt - k) * win_.num_nodes() + n];
        }
        SpaceTimeField rev = march(g.time_reversed(), source ? &rev_src : nullptr, /*adjoint=*/true);
        SpaceTimeField out(win_);
        for (int k = 0; k <= win_.nt; ++k)
            for (int n = 0; n < win_.num_nodes(); ++n)
                out.v[static_cast<size_t>(k) * win_.num_nodes() + n] =
                    rev.v[static_cast<size_t>(win_.nt - k) * win_.num_nodes() + n];
        return out;
    }

    /// Spatial operator L_h applied to one snapshot (interior nodes only),
    /// as used inside the march. adjoint selects L*_V / H_{Abar,q}.
    void apply_spatial(const Complex* u, Complex* out, bool adjoint) const {
        const int nx = win_.nx, ny = win_.ny;
        const double ih2 = 1.0 / (win_.h * win_.h);
        const double i2h = 1.0 / (2.0 * win_.h);
        for (int j = 1; j < ny - 1; ++j) {
            for (int i = 1; i < nx - 1; ++i) {
                const int n = j * nx + i;
                const Complex lap = (u[n + 1] + u[n - 1] + u[n + nx] + u[n - nx] - 4.0 * u[n]) * ih2;
                Complex rhs = lap;
                if (form_ == OperatorForm::Convection) {
                    const Complex gx = (u[n + 1] - u[n - 1]) * i2h;
                    const Complex gy = (u[n + nx] - u[n - nx]) * i2h;
                    if (!adjoint) {
                        rhs -= c1_[n] * gx + c2_[n] * gy;  // -V.grad u
                    } else {
                        // +div(V u), conservative flux form
                        rhs += (c1_[n + 1] * u[n + 1] - c1_[n - 1] * u[n - 1]) * i2h
                             + (c2_[n + nx] * u[n + nx] - c2_[n - nx] * u[n - nx]) * i2h;
                    }
                } else {
                    const Complex A1 = adjoint ? std::conj(c1_[n]) : c1_[n];
                    const Complex A2 = adjoint ? std::conj(c2_[n]) : c2_[n];
                    const Complex gx = (u[n + 1] - u[n - 1]) * i2h;
                    const Complex gy = (u[n + nx] - u[n - nx]) * i2h;
                    Complex A1p = c1_[n + 1], A1m = c1_[n - 1];
                    Complex A2p = c2_[n + nx], A2m = c2_[n - nx];
                    if (adjoint) {
                        A1p = std::conj(A1p); A1m = std::conj(A1m);
                        A2p = std::conj(A2p); A2m = std::conj(A2m);
                    }
                    const Complex dAu = (A1p * u[n + 1] - A1m * u[n - 1]) * i2h
                                      + (A2p * u[n + nx] - A2m * u[n - nx]) * i2h;
                    // i[A.grad u + div(A u)]  (= 2iA.grad + i divA in expanded form)
                    rhs += Complex{0, 1} * (A1 * gx + A2 * gy + dAu);
                    // zeroth order -(A.A) - q, with A -> conj(A) in the adjoint
                    rhs += (-(adjoint ? std::conj(aa_[n]) : aa_[n]) - qv_[n]) * u[n];
                }
                out[n] = rhs;
            }
        }
    }

private:
    SpaceTimeField march(const BoundaryTrace& f, const SpaceTimeField* source, bool adjoint) const {
        const int nx = win_.nx, ny = win_.ny, nn = win_.num_nodes();
        const double dt = win_.dt;
        SpaceTimeField sol(win_);

        auto impose_bc = [&](Complex* snap, int k) {
            for (size_t b = 0; b < cls_->boundary.size(); ++b) {
                const int i = cls_->boundary[b].i - cls_->iw0;
                const int j = cls_->boundary[b].j - cls_->jw0;
                snap[j * nx + i] = f.at(k, b);
            }
        };

        std::vector<Complex> up(nn, Complex{0, 0}), uc(nn, Complex{0, 0}), un(nn, Complex{0, 0});
        std::vector<Complex> lbuf(nn, Complex{0, 0});

        impose_bc(up.data(), 0);
        std::copy(up.begin(), up.end(), sol.v.begin());

        // Taylor start: u^1 = u^0 + (dt^2/2) (L u^0 + s(0)) with zero initial velocity
        apply_spatial(up.data(), lbuf.data(), adjoint);
        for (int j = 1; j < ny - 1; ++j)
            for (int i = 1; i < nx - 1; ++i) {
                const int n = j * nx + i;
                Complex s0{0, 0};
                if (source) s0 = source->v[n];
                uc[n] = up[n] + 0.5 * dt * dt * (lbuf[n] + s0);
            }
        impose_bc(uc.data(), 1);
        std::copy(uc.begin(), uc.end(), sol.v.begin() + nn);

        for (int k = 1; k < win_.nt; ++k) {
            apply_spatial(uc.data(), lbuf.data(), adjoint);
            for (int j = 1; j < ny - 1; ++j)
                for (int i = 1; i < nx - 1; ++i) {
                    const int n = j * nx + i;
                    Complex s{0, 0};
                    if (source) s = source->v[static_cast<size_t>(k) * nn + n];
                    un[n] = 2.0 * uc[n] - up[n] + dt * dt * (lbuf[n] + s);
                }
            impose_bc(un.data(), k + 1);
            std::copy(un.begin(), un.end(), sol.v.begin() + static_cast<size_t>(k + 1) * nn);
            std::swap(up, uc);
            std::swap(uc, un);
            if (k % 100 == 0) {
                for (int n = 0; n < nn; ++n)
                    if (!std::isfinite(uc[n].real()) || !std::isfinite(uc[n].imag()))
                        throw SolverError("wave solver: instability (non-finite value) at step "
                                          + std::to_string(k));
            }
        }
        return sol;
    }

    OperatorForm form_;
    std::shared_ptr<const Classification> cls_;
    Grid win_;
    std::vector<Complex> c1_, c2_, aa_, qv_;
};

/// d_nu u (plain) or (d_nu + i A.nu) u (magnetic) on Gamma, second-order
/// one-sided differences along the outward normal.
inline BoundaryTrace neumann_trace(const SpaceTimeField& u,
                                   std::shared_ptr<const Classification> cls,
                                   const VectorField* A_box = nullptr) {
    const Grid& g = u.grid;
    if (g.nx < 3 || g.ny < 3)
        throw SolverError("neumann_trace: fewer than 3 nodes along the normal");
    BoundaryTrace out(cls, g.dt, g.nt);
    const size_t nb = cls->boundary.size();
    for (size_t b = 0; b < nb; ++b) {
        const BoundaryNode& bn = cls->boundary[b];
        const Vec2 p0 = bn.pos;
        const Vec2 p1 = p0 - g.h * bn.normal;
        const Vec2 p2 = p0 - 2.0 * g.h * bn.normal;
        Complex Anu{0, 0};
        if (A_box) Anu = bn.normal.x * A_box->a1.interp(p0) + bn.normal.y * A_box->a2.interp(p0);
        for (int k = 0; k <= g.nt; ++k) {
            auto sample = [&](const Vec2& p) -> Complex {
                const double px = (p.x - g.x0) / g.h, py = (p.y - g.y0) / g.h;
                const int i = std::min(std::max(static_cast<int>(std::floor(px)), 0), g.nx - 2);
                const int j = std::min(std::max(static_cast<int>(std::floor(py)), 0), g.ny - 2);
                const double fx = px - i, fy = py - j;
                const size_t base = static_cast<size_t>(k) * g.num_nodes();
                return u.v[base + g.idx(i, j)] * ((1 - fx) * (1 - fy))
                     + u.v[base + g.idx(i + 1, j)] * (fx * (1 - fy))
                     + u.v[base + g.idx(i, j + 1)] * ((1 - fx) * fy)
                     + u.v[base + g.idx(i + 1, j + 1)] * (fx * fy);
            };
            const Complex u0 = sample(p0), u1 = sample(p1), u2 = sample(p2);
            Complex d = (3.0 * u0 - 4.0 * u1 + u2) / (2.0 * g.h);
            if (A_box) d += Complex{0, 1} * Anu * u0;
            out.at(k, b) = d;
        }
    }
    out.update_flags();
    return out;
}

/// Black-box DN map: Dirichlet trace -> Neumann trace through one solve.
struct DnOperator {
    std::shared_ptr<const WaveSolver> solver;
    SolveDirection direction = SolveDirection::Forward;
    std::shared_ptr<const VectorField> magnetic_A;  // non-null for N_{A,q}

    BoundaryTrace apply(const BoundaryTrace& f) const {
        const SpaceTimeField u = direction == SolveDirection::Forward ? solver->solve_forward(f)
                                                                       : solver->solve_backward(f);
        return neumann_trace(u, solver->classification(), magnetic_A.get());
    }
};

inline DnOperator make_lambda_op(const VectorField& V, std::shared_ptr<const Classification> cls,
                                 const Grid& box_grid, SolveDirection dir = SolveDirection::Forward) {
    DnOperator op;
    op.solver = std::make_shared<WaveSolver>(OperatorForm::Convection, V, nullptr, cls, box_grid);
    op.direction = dir;
    return op;
}

inline DnOperator make_n_op(const CoefficientPair& c, std::shared_ptr<const Classification> cls,
                            const Grid& box_grid, SolveDirection dir = SolveDirection::Forward) {
    DnOperator op;
    op.solver = std::make_shared<WaveSolver>(OperatorForm::Magnetic, c.A, &c.q, cls, box_grid);
    op.direction = dir;
    op.magnetic_A = std::make_shared<VectorField>(dir == SolveDirection::Forward ? c.A : [&] {
        VectorField Ab = c.A;
        for (auto& z : Ab.a1.v) z = std::conj(z);
        for (auto& z : Ab.a2.v) z = std::conj(z);
        return Ab;
    }());
    return op;
}

/// || H_{A,q} u - L_V u ||_{L^2(Q)} with (A,q) = reduce_to_em(V), both applied
/// through the solver stencils; the time parts cancel so only spatial stencils enter.
inline double em_operator_residual(const VectorField& V, const SpaceTimeField& u,
                                   std::shared_ptr<const Classification> cls, const Grid& box_grid) {
    const CoefficientPair em = reduce_to_em(V);
    WaveSolver sv(OperatorForm::Convection, V, nullptr, cls, box_grid);
    WaveSolver sh(OperatorForm::Magnetic, em.A, &em.q, cls, box_grid);
    const Grid& w = u.grid;
    const int nn = w.num_nodes();
    std::vector<Complex> lv(nn), lh(nn);
    double acc = 0;
    for (int k = 0; k <= w.nt; ++k) {
        sv.apply_spatial(&u.v[static_cast<size_t>(k) * nn], lv.data(), false);
        sh.apply_spatial(&u.v[static_cast<size_t>(k) * nn], lh.data(), false);
        double sk = 0;
        for (int j = 1; j < w.ny - 1; ++j)
            for (int i = 1; i < w.nx - 1; ++i)
                sk += std::norm(lh[w.idx(i, j)] - lv[w.idx(i, j)]);
        acc += time_weight(w, k) * sk;
    }
    return std::sqrt(acc * w.h * w.h * w.dt);
}

/// Discrete leapfrog energy at half-step k+1/2 for the plain wave equation.
inline double leapfrog_energy(const SpaceTimeField& u, int k) {
    const Grid& g = u.grid;
    double kin = 0, pot = 0;
    for (int j = 0; j < g.ny; ++j)
        for (int i = 0; i < g.nx; ++i) {
            const Complex du = (u.at(k + 1, i, j) - u.at(k, i, j)) / g.dt;
            kin += std::norm(du);
            if (i + 1 < g.nx) {
                const Complex a = (u.at(k + 1, i + 1, j) - u.at(k + 1, i, j)) / g.h;
                const Complex b = (u.at(k, i + 1, j) - u.at(k, i, j)) / g.h;
                pot += (a * std::conj(b)).real();
            }
            if (j + 1 < g.ny) {
                const Complex a = (u.at(k + 1, i, j + 1) - u.at(k + 1, i, j)) / g.h;
                const Complex b = (u.at(k, i, j + 1) - u.at(k, i, j)) / g.h;
                pot += (a * std::conj(b)).real();
            }
        }
    return 0.5 * (kin + pot) * g.h * g.h;
}

}  // namespace convwave
