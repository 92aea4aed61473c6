#pragma once

#include "convwave/coeff.hpp"
#include "convwave/poisson.hpp"

namespace convwave {

/// V = V' + grad(phi): phi in H^1_0 from the Poisson solve of div V, V' the
/// divergence-free remainder (to O(h)).
struct HodgeSplit {
    ScalarField phi;
    VectorField V_prime;
    VectorField source;
    double vprime_l2 = 0.0;
    double vprime_w1p = 0.0;   // W^{1,p0} grid surrogate
    double curl_l2 = 0.0;      // curl V' = curl V
};

inline double w1p_norm(const VectorField& f, double p) {
    const double a1 = lp_norm(f.a1, p), a2 = lp_norm(f.a2, p);
    const VectorField g1 = gradient(f.a1), g2 = gradient(f.a2);
    const double d = std::pow(
        std::pow(lp_norm(g1.a1, p), p) + std::pow(lp_norm(g1.a2, p), p)
        + std::pow(lp_norm(g2.a1, p), p) + std::pow(lp_norm(g2.a2, p), p), 1.0 / p);
    return std::pow(std::pow(a1, p) + std::pow(a2, p) + std::pow(d, p), 1.0 / p);
}

inline HodgeSplit hodge_decompose(const VectorField& V, double p0 = 4.0) {
    HodgeSplit out;
    out.source = V;
    out.phi = poisson_dirichlet(divergence(V));
    const VectorField grad_phi = gradient(out.phi);
    out.V_prime = VectorField(V.grid());
    for (size_t n = 0; n < V.a1.v.size(); ++n) {
        out.V_prime.a1.v[n] = V.a1.v[n] - grad_phi.a1.v[n];
        out.V_prime.a2.v[n] = V.a2.v[n] - grad_phi.a2.v[n];
    }
    out.vprime_l2 = l2_norm(out.V_prime);
    out.vprime_w1p = w1p_norm(out.V_prime, p0);
    out.curl_l2 = l2_norm(curl(out.V_prime));
    return out;
}

/// Gauge-normalized pair (A1 + grad(psi)/2, A2 - grad(psi)/2) with psi in H^1_0
/// solving Delta psi = div(A2 - A1); the difference A2' - A1' is divergence-free
/// and the DN maps are unchanged.
struct GaugeNormalized {
    CoefficientPair c1, c2;
    ScalarField psi;
};

inline GaugeNormalized gauge_normalize(const CoefficientPair& c1, const CoefficientPair& c2) {
    VectorField diff(c1.A.grid());
    for (size_t n = 0; n < diff.a1.v.size(); ++n) {
        diff.a1.v[n] = c2.A.a1.v[n] - c1.A.a1.v[n];
        diff.a2.v[n] = c2.A.a2.v[n] - c1.A.a2.v[n];
    }
    GaugeNormalized out;
    out.psi = poisson_dirichlet(divergence(diff));
    const VectorField gp = gradient(out.psi);
    out.c1 = c1;
    out.c2 = c2;
    for (size_t n = 0; n < gp.a1.v.size(); ++n) {
        out.c1.A.a1.v[n] += 0.5 * gp.a1.v[n];
        out.c1.A.a2.v[n] += 0.5 * gp.a2.v[n];
        out.c2.A.a1.v[n] -= 0.5 * gp.a1.v[n];
        out.c2.A.a2.v[n] -= 0.5 * gp.a2.v[n];
    }
    return out;
}

}  // namespace convwave
