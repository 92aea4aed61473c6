#pragma once

#include "convwave/go.hpp"
#include "convwave/lineintegral.hpp"

namespace convwave {

/// One ray datum: direction, collar point, extracted full-line integral and its
/// brute-force oracle.
struct RaySample {
    Direction omega{0.0};
    Vec2 y;
    double lambda = 0.0;
    double offset = 0.0;    // scalar coordinate of y's line along omega-perp
    Complex extracted{0, 0};
    Complex oracle{0, 0};
    bool clamped = false;   // bump width clamp active (rate claims void here)
};

/// Place the probe bump center on the line {z + s omega} inside the collar at
/// depth rho/2, upstream of Omega (largest s). dist(., Omega) is convex along
/// the line; ternary search for the minimum, then bisection for the crossing.
inline Vec2 place_collar_center(const Domain& dom, const Direction& dir, const Vec2& z) {
    auto dist = [&](double s) { return dom.dist_to_omega(z + s * dir.omega); };
    double lo = -4.0, hi = 4.0;
    for (int it = 0; it < 200; ++it) {
        const double m1 = lo + (hi - lo) / 3.0, m2 = hi - (hi - lo) / 3.0;
        if (dist(m1) <= dist(m2)) hi = m2; else lo = m1;
    }
    const double smin = 0.5 * (lo + hi);
    const double target = 0.5 * dom.rho;
    if (dist(smin) >= target) {
        // line passes at depth >= rho/2: use the closest approach if still in the collar
        if (dist(smin) < dom.rho) return z + smin * dir.omega;
        throw ConfigError("place_collar_center: line misses the collar");
    }
    double a = smin, b = smin + 4.0;
    for (int it = 0; it < 200; ++it) {
        const double mid = 0.5 * (a + b);
        (dist(mid) < target ? a : b) = mid;
    }
    return z + 0.5 * (a + b) * dir.omega;
}

/// int_Sigma (N_{A1,q1} - N_{A2,q2})(f) conj(v) dsigma dt for a given Dirichlet
/// trace f and test trace v on Sigma (two forward solves).
inline Complex pairing_dn_difference(const CoefficientPair& c1, const CoefficientPair& c2,
                                     const BoundaryTrace& f, const BoundaryTrace& v_trace,
                                     std::shared_ptr<const Classification> cls, const Grid& g) {
    WaveSolver s1(OperatorForm::Magnetic, c1.A, &c1.q, cls, g);
    WaveSolver s2(OperatorForm::Magnetic, c2.A, &c2.q, cls, g);
    const SpaceTimeField u1 = s1.solve_forward(f);
    const SpaceTimeField u2 = s2.solve_forward(f);
    const BoundaryTrace n1 = neumann_trace(u1, cls, &c1.A);
    const BoundaryTrace n2 = neumann_trace(u2, cls, &c2.A);
    return sigma_inner(n1 - n2, v_trace);
}

/// Interior identity oracle: int_Q (2i A.grad u2 + (V_A + q) u2) conj(v), with
/// A = A1 - A2, q = q2 - q1, V_A = i div A + (A2^2 - A1^2); u2, v on the window.
inline Complex pairing_volumetric(const CoefficientPair& c1, const CoefficientPair& c2,
                                  const SpaceTimeField& u2, const SpaceTimeField& v,
                                  std::shared_ptr<const Classification> cls, const Grid& box) {
    const Grid& w = u2.grid;
    VectorField Ad(box.window(cls->iw0, cls->jw0, cls->iw1, cls->jw1));
    ScalarField Vq(Ad.grid());
    for (int j = 0; j < w.ny; ++j)
        for (int i = 0; i < w.nx; ++i) {
            const int bn = box.idx(cls->iw0 + i, cls->jw0 + j);
            Ad.a1.at(i, j) = c1.A.a1.v[bn] - c2.A.a1.v[bn];
            Ad.a2.at(i, j) = c1.A.a2.v[bn] - c2.A.a2.v[bn];
            const Complex s1 = c1.A.a1.v[bn] * c1.A.a1.v[bn] + c1.A.a2.v[bn] * c1.A.a2.v[bn];
            const Complex s2 = c2.A.a1.v[bn] * c2.A.a1.v[bn] + c2.A.a2.v[bn] * c2.A.a2.v[bn];
            Vq.at(i, j) = (s2 - s1) + (c2.q.v[bn] - c1.q.v[bn]);
        }
    const ScalarField divA = divergence(Ad);
    Complex acc{0, 0};
    for (int k = 0; k <= w.nt; ++k) {
        Complex sk{0, 0};
        for (int j = 1; j < w.ny - 1; ++j)
            for (int i = 1; i < w.nx - 1; ++i) {
                const Complex gx = (u2.at(k, i + 1, j) - u2.at(k, i - 1, j)) / (2 * w.h);
                const Complex gy = (u2.at(k, i, j + 1) - u2.at(k, i, j - 1)) / (2 * w.h);
                const Complex term = Complex{0, 2} * (Ad.a1.at(i, j) * gx + Ad.a2.at(i, j) * gy)
                                   + (Complex{0, 1} * divA.at(i, j) + Vq.at(i, j)) * u2.at(k, i, j);
                sk += term * std::conj(v.at(k, i, j));
            }
        acc += time_weight(w, k) * sk;
    }
    return acc * w.h * w.h * w.dt;
}

struct RayExtractionConfig {
    double alpha = 0.25;
    double kernel_radius = 0.3;
    double bump_scale = 0.07;   // h_bump = bump_scale * lambda^{-alpha/7}
    double min_bump_cells = 2.0;
    double M = 1.9;             // admissibility bound (branch safety: M T < pi)
};

/// Shared state for a batch of ray extractions against one coefficient pair.
class RayExtractor {
public:
    RayExtractor(const CoefficientPair& c1, const CoefficientPair& c2, const Domain& dom,
                 std::shared_ptr<const Classification> cls, const Grid& grid,
                 RayExtractionConfig cfg)
        : c1_(c1), c2_(c2), dom_(dom), cls_(std::move(cls)), g_(grid), cfg_(cfg),
          solver1_(OperatorForm::Magnetic, c1.A, &c1.q, cls_, grid),
          solver2_(OperatorForm::Magnetic, c2.A, &c2.q, cls_, grid) {}

    double bump_width(double lambda, bool* clamped) const {
        double h_b = cfg_.bump_scale * std::pow(lambda, -cfg_.alpha / 7.0);
        const double floor_w = cfg_.min_bump_cells * g_.h;
        if (clamped) *clamped = h_b < floor_w;
        return std::max(h_b, floor_w);
    }

    const VectorField& smooth1(double lambda) const { return smooth(cache1_, c1_.A, lambda); }
    const VectorField& smooth2(double lambda) const { return smooth(cache2_, c2_.A, lambda); }

    /// Half-line datum X ~ int_0^T omega.A#(y - s omega) ds from the DN pairing:
    /// E = -i P / (2 lambda m0), X = i Log(1 + E).
    Complex half_datum(const Direction& dir, const Vec2& y, double lambda,
                       bool* clamped = nullptr) const {
        bool cl = false;
        const double h_b = bump_width(lambda, &cl);
        if (clamped) *clamped = cl;
        const BumpFamily fam = make_bump_family(y, h_b, dom_, g_);

        GoAnsatz fwd;
        fwd.omega = dir;
        fwd.lambda = lambda;
        fwd.bump = fam.profile;
        fwd.sign = SolveDirection::Forward;
        const BoundaryTrace f = go_boundary_trace(fwd, smooth2(lambda), cls_, g_);

        GoAnsatz bwd = fwd;
        bwd.sign = SolveDirection::Backward;
        const BoundaryTrace v_tr = go_boundary_trace(bwd, smooth1(lambda), cls_, g_);

        const SpaceTimeField u1 = solver1_.solve_forward(f);
        const SpaceTimeField u2 = solver2_.solve_forward(f);
        const BoundaryTrace n1 = neumann_trace(u1, cls_, &c1_.A);
        const BoundaryTrace n2 = neumann_trace(u2, cls_, &c2_.A);
        const Complex P = sigma_inner(n1 - n2, v_tr);

        const double m0 = fam.l2 * fam.l2;
        const Complex E = Complex{0, -1} * P / (2.0 * lambda * m0);
        return ray_datum_to_line_integral(E);
    }

    /// Full-line magnetic ray sample at offset z (scalar) along dir-perp:
    /// combines the +omega and -omega probes from the same collar center.
    RaySample full_line_sample(const Direction& dir, double offset, double lambda) const {
        RaySample s;
        s.omega = dir;
        s.lambda = lambda;
        s.offset = offset;
        const Vec2 z = offset * dir.omega.perp();
        s.y = place_collar_center(dom_, dir, z);
        bool cl1 = false, cl2 = false;
        const Complex Xp = half_datum(dir, s.y, lambda, &cl1);
        const Complex Xm = half_datum(dir.reversed(), s.y, lambda, &cl2);
        s.clamped = cl1 || cl2;
        s.extracted = Xp - Xm;
        VectorField Adiff(g_);
        for (size_t n = 0; n < Adiff.a1.v.size(); ++n) {
            Adiff.a1.v[n] = c1_.A.a1.v[n] - c2_.A.a1.v[n];
            Adiff.a2.v[n] = c1_.A.a2.v[n] - c2_.A.a2.v[n];
        }
        s.oracle = line_quadrature(Adiff, dir, s.y);
        return s;
    }

    /// Electric-potential half datum: int_0^T (q2 - q1)(y - t omega) dt estimated
    /// by P / m0 (the q-pairing has no 2 lambda factor and no log).
    Complex q_half_datum(const Direction& dir, const Vec2& y, double lambda,
                         bool* clamped = nullptr) const {
        bool cl = false;
        const double h_b = bump_width(lambda, &cl);
        if (clamped) *clamped = cl;
        const BumpFamily fam = make_bump_family(y, h_b, dom_, g_);
        GoAnsatz fwd;
        fwd.omega = dir;
        fwd.lambda = lambda;
        fwd.bump = fam.profile;
        fwd.sign = SolveDirection::Forward;
        const BoundaryTrace f = go_boundary_trace(fwd, smooth2(lambda), cls_, g_);
        GoAnsatz bwd = fwd;
        bwd.sign = SolveDirection::Backward;
        const BoundaryTrace v_tr = go_boundary_trace(bwd, smooth1(lambda), cls_, g_);
        const SpaceTimeField u1 = solver1_.solve_forward(f);
        const SpaceTimeField u2 = solver2_.solve_forward(f);
        const BoundaryTrace n1 = neumann_trace(u1, cls_, &c1_.A);
        const BoundaryTrace n2 = neumann_trace(u2, cls_, &c2_.A);
        // true identity: int_Q q u2 conj(v) = -P + I_lambda  (see pairing tests)
        const Complex P = sigma_inner(n1 - n2, v_tr);
        const double m0 = fam.l2 * fam.l2;
        return -P / m0;
    }

    /// Full-line scalar ray sample of q2 - q1 (sum of the two half lines).
    RaySample q_full_line_sample(const Direction& dir, double offset, double lambda) const {
        RaySample s;
        s.omega = dir;
        s.lambda = lambda;
        s.offset = offset;
        const Vec2 z = offset * dir.omega.perp();
        s.y = place_collar_center(dom_, dir, z);
        bool cl1 = false, cl2 = false;
        const Complex Qp = q_half_datum(dir, s.y, lambda, &cl1);
        const Complex Qm = q_half_datum(dir.reversed(), s.y, lambda, &cl2);
        s.clamped = cl1 || cl2;
        s.extracted = Qp + Qm;
        ScalarField qd(g_);
        for (size_t n = 0; n < qd.v.size(); ++n) qd.v[n] = c2_.q.v[n] - c1_.q.v[n];
        s.oracle = line_quadrature(qd, dir, s.y);
        return s;
    }

    /// |X| <= e^{MT} |e^X - 1| inversion: X = i Log(1 + E), principal branch.
    static Complex ray_datum_to_line_integral(const Complex& E) {
        const Complex one_plus = 1.0 + E;
        if (std::abs(one_plus) < 1e-14)
            throw SolverError("ray_datum_to_line_integral: 1 + E at the branch point");
        const Complex lg = std::log(one_plus);
        if (std::abs(lg.imag()) > kPi - 0.1)
            throw SolverError("ray_datum_to_line_integral: exponent near the branch cut"
                              " (|X| exceeded the M T regime)");
        return Complex{0, 1} * lg;
    }

private:
    const VectorField& smooth(std::vector<std::pair<double, VectorField>>& cache,
                              const VectorField& A, double lambda) const {
        for (auto& e : cache)
            if (e.first == lambda) return e.second;
        MollifierConfig mc;
        mc.lambda = lambda;
        mc.alpha = cfg_.alpha;
        mc.kernel_radius = cfg_.kernel_radius;
        cache.emplace_back(lambda, mollify(A, mc));
        return cache.back().second;
    }

    CoefficientPair c1_, c2_;
    Domain dom_;
    std::shared_ptr<const Classification> cls_;
    Grid g_;
    RayExtractionConfig cfg_;
    WaveSolver solver1_, solver2_;
    mutable std::vector<std::pair<double, VectorField>> cache1_, cache2_;
};

// ---- Fourier machinery -------------------------------------------------------

/// Ray data for one direction: full-line values indexed by uniform offsets.
struct RayLine {
    Direction omega{0.0};
    std::vector<double> offsets;   // uniform in [-R1, R1] along omega-perp
    std::vector<Complex> values;   // full-line integrals
};

/// Slice values on a polar xi-grid: angles x radii (midpoint radii).
struct FourierSliceSet {
    std::vector<double> angles;           // xi-direction angles theta_q
    std::vector<double> radii;            // |xi| nodes
    std::vector<Complex> values;          // angle-major: values[q * nr + r]
    Complex& at(size_t q, size_t r) { return values[q * radii.size() + r]; }
    const Complex& at(size_t q, size_t r) const { return values[q * radii.size() + r]; }
};

/// 1-D discrete Fourier transform of offset-indexed ray data, evaluated at
/// |xi| = rho along the omega-perp axis: F(rho) = int e^{-i z rho} I(z) dz.
inline Complex fourier_slice_value(const RayLine& line, double rho) {
    const size_t n = line.offsets.size();
    if (n < 16) throw ConfigError("fourier_slice: fewer than 16 offsets");
    Complex acc{0, 0};
    for (size_t m = 0; m < n; ++m) {
        const double w = (m == 0 || m == n - 1) ? 0.5 : 1.0;
        acc += w * line.values[m] * std::exp(Complex{0, -1} * (line.offsets[m] * rho));
    }
    const double dz = (line.offsets.back() - line.offsets.front()) / (n - 1);
    return acc * dz;
}

/// Dense-transform oracle: f_hat(xi) = sum_nodes e^{-i x.xi} f(x) h^2.
inline Complex dense_fourier(const ScalarField& f, const Vec2& xi) {
    const Grid& g = f.grid;
    Complex acc{0, 0};
    for (int j = 0; j < g.ny; ++j)
        for (int i = 0; i < g.nx; ++i) {
            const Vec2 p = g.point(i, j);
            acc += trapezoid_weight(g, i, j) * f.at(i, j)
                   * std::exp(Complex{0, -1} * (p.x * xi.x + p.y * xi.y));
        }
    return acc * g.h * g.h;
}

/// Fan layout: the ray direction for xi-angle theta is omega = (sin t, -cos t),
/// which is perpendicular to e_xi = (cos t, sin t).
inline Direction fan_direction(double theta) {
    return Direction(Vec2{std::sin(theta), -std::cos(theta)});
}

/// sigma_hat_{12}(xi) = -i |xi| F_omega(xi)(xi) recombined from per-direction slices.
/// lines[q] must carry ray data of fan_direction(angles[q]); sigma_hat(0) = 0.
inline FourierSliceSet assemble_sigma_hat(const std::vector<RayLine>& lines,
                                          const std::vector<double>& angles,
                                          const std::vector<double>& radii) {
    FourierSliceSet out;
    out.angles = angles;
    out.radii = radii;
    out.values.assign(angles.size() * radii.size(), Complex{0, 0});
    for (size_t q = 0; q < angles.size(); ++q)
        for (size_t r = 0; r < radii.size(); ++r) {
            const double rho = radii[r];
            out.at(q, r) = rho == 0.0 ? Complex{0, 0}
                                      : Complex{0, -rho} * fourier_slice_value(lines[q], rho);
        }
    return out;
}

/// q_hat on the polar grid: the scalar slice value itself (omega(xi) ⊥ xi).
inline FourierSliceSet recover_q_hat(const std::vector<RayLine>& lines,
                                     const std::vector<double>& angles,
                                     const std::vector<double>& radii) {
    FourierSliceSet out;
    out.angles = angles;
    out.radii = radii;
    out.values.assign(angles.size() * radii.size(), Complex{0, 0});
    for (size_t q = 0; q < angles.size(); ++q)
        for (size_t r = 0; r < radii.size(); ++r)
            out.at(q, r) = fourier_slice_value(lines[q], radii[r]);
    return out;
}

struct BandNormResult {
    double value = 0.0;      // band-split H^-1 estimate
    double low_band = 0.0;   // integral over |xi| <= R
    double tail = 0.0;       // l2_bound^2 / R^2
    double R = 0.0;          // cutoff actually used
    double R_optimal = 0.0;  // R from R^{n+2} = lambda^{2 beta}
    bool clamped = false;
};

/// Band-split H^-1 norm: (2 pi)^{-2} int_{|xi|<=R} |f_hat|^2 <xi>^{-2} d xi
/// plus the tail bound l2_bound^2 / R^2. Convention: f_hat = int e^{-i x xi} f.
inline BandNormResult hminus1_band_norm(const FourierSliceSet& fhat, double R, double l2_bound,
                                        double lambda = 0.0, double beta = 0.2) {
    BandNormResult out;
    const double rmax = fhat.radii.empty() ? 0.0 : fhat.radii.back();
    out.R = R;
    if (R > rmax) {
        out.R = rmax;
        out.clamped = true;
    }
    const size_t nq = fhat.angles.size(), nr = fhat.radii.size();
    const double dtheta = 2.0 * kPi / nq;
    // radii are uniform midpoints (r + 1/2) drho
    const double drho = nr > 1 ? fhat.radii[1] - fhat.radii[0] : 2.0 * fhat.radii[0];
    double acc = 0;
    for (size_t q = 0; q < nq; ++q)
        for (size_t r = 0; r < nr; ++r) {
            const double rho = fhat.radii[r];
            if (rho > out.R) continue;
            acc += std::norm(fhat.at(q, r)) / (1.0 + rho * rho) * rho * drho * dtheta;
        }
    out.low_band = acc / (4.0 * kPi * kPi);
    out.tail = l2_bound * l2_bound / (out.R * out.R);
    out.value = std::sqrt(out.low_band + out.tail);
    if (lambda > 0) out.R_optimal = std::pow(lambda, 2.0 * beta / 4.0);  // R^{n+2} = lam^{2 beta}, n = 2
    return out;
}

}  // namespace convwave
