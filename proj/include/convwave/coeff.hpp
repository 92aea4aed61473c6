#pragma once

#include "convwave/field.hpp"

namespace convwave {

/// Electro-magnetic coefficient pair: pure imaginary A, real q.
struct CoefficientPair {
    VectorField A;
    ScalarField q;
};

/// Admissibility check for the W^{1,inf} / L^inf grid norms (sets A(M,.)/Q(M,.)/V(M,.)).
inline void check_admissible(const VectorField& V, double M) {
    const double n = w1inf_norm(V);
    if (n > M)
        throw AdmissibilityError("coefficient W^{1,inf} grid norm " + std::to_string(n)
                                 + " exceeds M = " + std::to_string(M));
}

inline void check_admissible(const CoefficientPair& c, double M) {
    check_admissible(c.A, M);
    const double nq = [&] {
        double m = 0;
        for (const auto& z : c.q.v) m = std::max(m, std::abs(z));
        return m;
    }();
    if (nq > M)
        throw AdmissibilityError("potential L^inf norm " + std::to_string(nq)
                                 + " exceeds M = " + std::to_string(M));
}

/// A = (i/2) V, q = V^2/4 - div V / 2, turning L_V into the magnetic form H_{A,q}.
inline CoefficientPair reduce_to_em(const VectorField& V) {
    if (!V.is_real()) throw AdmissibilityError("reduce_to_em: V must be real");
    const Grid& g = V.grid();
    CoefficientPair out{VectorField(g), ScalarField(g)};
    const ScalarField divV = divergence(V);
    const Complex half_i{0.0, 0.5};
    for (int n = 0; n < g.num_nodes(); ++n) {
        out.A.a1.v[n] = half_i * V.a1.v[n];
        out.A.a2.v[n] = half_i * V.a2.v[n];
        const double v1 = V.a1.v[n].real(), v2 = V.a2.v[n].real();
        out.q.v[n] = 0.25 * (v1 * v1 + v2 * v2) - 0.5 * divV.v[n].real();
    }
    return out;
}

/// Glue V over Omega onto the background V0 outside; requires V = V0 on a band
/// around Gamma (the admissible-set trace condition, checked to 1e-10).
inline VectorField extend_by_background(const VectorField& V, const VectorField& V0,
                                        const Domain& dom) {
    const Grid& g = V.grid();
    double band_mismatch = 0.0;
    VectorField out(g);
    for (int j = 0; j < g.ny; ++j)
        for (int i = 0; i < g.nx; ++i) {
            const Vec2 p = g.point(i, j);
            const bool inside = dom.inside_omega(p);
            const double d_out = dom.dist_to_omega(p);
            // band: |dist to Gamma| <= 2h on either side
            const bool near_gamma =
                (inside && dom.dist_to_omega(p) == 0.0 &&
                 dom.omega_half_width - std::max(std::abs(p.x - dom.omega_center.x),
                                                 std::abs(p.y - dom.omega_center.y)) <= 2 * g.h)
                || (!inside && d_out <= 2 * g.h);
            if (near_gamma) {
                band_mismatch = std::max(band_mismatch,
                                         std::abs(V.a1.at(i, j) - V0.a1.at(i, j)));
                band_mismatch = std::max(band_mismatch,
                                         std::abs(V.a2.at(i, j) - V0.a2.at(i, j)));
            }
            out.a1.at(i, j) = inside || d_out == 0.0 ? V.a1.at(i, j) : V0.a1.at(i, j);
            out.a2.at(i, j) = inside || d_out == 0.0 ? V.a2.at(i, j) : V0.a2.at(i, j);
        }
    if (band_mismatch > 1e-10)
        throw AdmissibilityError("extend_by_background: V != V0 near Gamma (mismatch "
                                 + std::to_string(band_mismatch) + ")");
    return out;
}

/// chi_lambda mollifier: smooth kernel of support radius r_chi * lambda^{-alpha},
/// discrete weights renormalized to unit mass.
struct MollifierConfig {
    double lambda = 1.0;
    double alpha = 0.25;
    double kernel_radius = 0.3;  // support radius of chi inside B(0,1)
    bool degenerate_warned = false;

    void validate() const {
        if (!(alpha > 0.0 && alpha <= 0.5)) throw ConfigError("mollifier: alpha must lie in (0, 1/2]");
        if (lambda <= 0.0) throw ConfigError("mollifier: lambda must be positive");
        if (kernel_radius <= 0.0 || kernel_radius > 1.0)
            throw ConfigError("mollifier: kernel support must lie in (0, 1]");
    }
};

inline ScalarField mollify(const ScalarField& f, MollifierConfig cfg) {
    cfg.validate();
    const Grid& g = f.grid;
    const double rad = cfg.kernel_radius * std::pow(cfg.lambda, -cfg.alpha);
    const int k = static_cast<int>(std::floor(rad / g.h));
    if (k < 1) return f;  // kernel below grid scale: identity (caller warned via radius query)

    std::vector<double> w(static_cast<size_t>(2 * k + 1) * (2 * k + 1));
    double sum = 0;
    for (int b = -k; b <= k; ++b)
        for (int a = -k; a <= k; ++a) {
            const double r2 = (a * a + b * b) * g.h * g.h / (rad * rad);
            const double val = bump_profile_r2(r2);
            w[static_cast<size_t>(b + k) * (2 * k + 1) + (a + k)] = val;
            sum += val;
        }
    for (auto& x : w) x /= sum;

    ScalarField out(g);
    for (int j = 0; j < g.ny; ++j)
        for (int i = 0; i < g.nx; ++i) {
            Complex acc{0, 0};
            double wsum = 0;  // taps falling off the grid are renormalized away
            for (int b = -k; b <= k; ++b) {
                const int jj = j + b;
                if (jj < 0 || jj >= g.ny) continue;
                const double* wrow = &w[static_cast<size_t>(b + k) * (2 * k + 1)];
                for (int a = -k; a <= k; ++a) {
                    const int ii = i + a;
                    if (ii < 0 || ii >= g.nx) continue;
                    acc += wrow[a + k] * f.at(ii, jj);
                    wsum += wrow[a + k];
                }
            }
            out.at(i, j) = wsum > 0 ? acc / wsum : Complex{0, 0};
        }
    return out;
}

inline VectorField mollify(const VectorField& f, const MollifierConfig& cfg) {
    VectorField out;
    out.a1 = mollify(f.a1, cfg);
    out.a2 = mollify(f.a2, cfg);
    return out;
}

/// True when the kernel degenerates to the identity on this grid.
inline bool mollifier_degenerate(const Grid& g, const MollifierConfig& cfg) {
    return cfg.kernel_radius * std::pow(cfg.lambda, -cfg.alpha) < g.h;
}

}  // namespace convwave
