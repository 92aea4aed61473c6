#pragma once

#include <memory>

#include "convwave/field.hpp"

namespace convwave {

/// Function on Sigma = Gamma x (0,T), sampled at boundary nodes x time steps.
struct BoundaryTrace {
    std::shared_ptr<const Classification> geom;
    double dt = 0.0;
    int nt = 0;
    std::vector<Complex> values;  // (nt+1) x nb, time-major
    bool vanishes_at_t0 = false;
    bool vanishes_at_tT = false;

    BoundaryTrace() = default;
    BoundaryTrace(std::shared_ptr<const Classification> g, double dt_, int nt_)
        : geom(std::move(g)), dt(dt_), nt(nt_),
          values(static_cast<size_t>(nt_ + 1) * geom->boundary.size(), Complex{0, 0}) {}

    size_t nb() const { return geom->boundary.size(); }
    Complex& at(int k, size_t b) { return values[static_cast<size_t>(k) * nb() + b]; }
    const Complex& at(int k, size_t b) const { return values[static_cast<size_t>(k) * nb() + b]; }

    static BoundaryTrace sample(std::shared_ptr<const Classification> g, double dt, int nt,
                                const std::function<Complex(Vec2, double)>& f) {
        BoundaryTrace tr(std::move(g), dt, nt);
        for (int k = 0; k <= nt; ++k)
            for (size_t b = 0; b < tr.nb(); ++b)
                tr.at(k, b) = f(tr.geom->boundary[b].pos, k * dt);
        tr.update_flags();
        return tr;
    }

    void update_flags(double tol = 1e-12) {
        double m0 = 0, mT = 0;
        for (size_t b = 0; b < nb(); ++b) {
            m0 = std::max(m0, std::abs(at(0, b)));
            mT = std::max(mT, std::abs(at(nt, b)));
        }
        vanishes_at_t0 = m0 <= tol;
        vanishes_at_tT = mT <= tol;
    }

    BoundaryTrace time_reversed() const {
        BoundaryTrace out(geom, dt, nt);
        for (int k = 0; k <= nt; ++k)
            for (size_t b = 0; b < nb(); ++b)
                out.at(k, b) = at(nt - k, b);
        out.vanishes_at_t0 = vanishes_at_tT;
        out.vanishes_at_tT = vanishes_at_t0;
        return out;
    }
};

inline BoundaryTrace operator+(const BoundaryTrace& a, const BoundaryTrace& b) {
    BoundaryTrace out = a;
    for (size_t i = 0; i < out.values.size(); ++i) out.values[i] += b.values[i];
    out.update_flags();
    return out;
}
inline BoundaryTrace operator-(const BoundaryTrace& a, const BoundaryTrace& b) {
    BoundaryTrace out = a;
    for (size_t i = 0; i < out.values.size(); ++i) out.values[i] -= b.values[i];
    out.update_flags();
    return out;
}
inline BoundaryTrace operator*(Complex s, const BoundaryTrace& a) {
    BoundaryTrace out = a;
    for (auto& z : out.values) z *= s;
    return out;
}

/// int_Sigma f dsigma dt, composite trapezoid in arclength and time.
inline Complex surface_quadrature(const BoundaryTrace& f) {
    Complex acc{0, 0};
    for (int k = 0; k <= f.nt; ++k) {
        const double wt = (k == 0 || k == f.nt) ? 0.5 : 1.0;
        Complex row{0, 0};
        for (size_t b = 0; b < f.nb(); ++b) row += f.geom->boundary[b].weight * f.at(k, b);
        acc += wt * row;
    }
    return acc * f.dt;
}

/// int_Sigma f * conj(g) dsigma dt.
inline Complex sigma_inner(const BoundaryTrace& f, const BoundaryTrace& g) {
    Complex acc{0, 0};
    for (int k = 0; k <= f.nt; ++k) {
        const double wt = (k == 0 || k == f.nt) ? 0.5 : 1.0;
        Complex row{0, 0};
        for (size_t b = 0; b < f.nb(); ++b)
            row += f.geom->boundary[b].weight * f.at(k, b) * std::conj(g.at(k, b));
        acc += wt * row;
    }
    return acc * f.dt;
}

inline double l2_sigma_norm(const BoundaryTrace& f) {
    return std::sqrt(std::max(0.0, sigma_inner(f, f).real()));
}

/// Tangential derivative along the closed boundary walk (centered over arclength).
inline BoundaryTrace tangential_derivative(const BoundaryTrace& f) {
    BoundaryTrace out(f.geom, f.dt, f.nt);
    const size_t nb = f.nb();
    for (int k = 0; k <= f.nt; ++k)
        for (size_t b = 0; b < nb; ++b) {
            const size_t bp = (b + 1) % nb, bm = (b + nb - 1) % nb;
            const double ds = f.geom->boundary[b].weight;  // local spacing
            out.at(k, b) = (f.at(k, bp) - f.at(k, bm)) / (2.0 * ds);
        }
    return out;
}

/// Time derivative (centered; one-sided at the ends).
inline BoundaryTrace time_derivative(const BoundaryTrace& f) {
    BoundaryTrace out(f.geom, f.dt, f.nt);
    for (size_t b = 0; b < f.nb(); ++b) {
        out.at(0, b) = (f.at(1, b) - f.at(0, b)) / f.dt;
        out.at(f.nt, b) = (f.at(f.nt, b) - f.at(f.nt - 1, b)) / f.dt;
        for (int k = 1; k < f.nt; ++k) out.at(k, b) = (f.at(k + 1, b) - f.at(k - 1, b)) / (2.0 * f.dt);
    }
    return out;
}

/// H^1(Sigma) inner product: values + tangential + time derivatives in L^2(Sigma).
inline Complex h1_sigma_inner(const BoundaryTrace& f, const BoundaryTrace& g) {
    return sigma_inner(f, g) + sigma_inner(tangential_derivative(f), tangential_derivative(g))
         + sigma_inner(time_derivative(f), time_derivative(g));
}

inline double h1_sigma_norm(const BoundaryTrace& f) {
    return std::sqrt(std::max(0.0, h1_sigma_inner(f, f).real()));
}

}  // namespace convwave
