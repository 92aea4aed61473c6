#pragma once

#include <random>

#include "convwave/field.hpp"

namespace convwave {

/// Weight for the elliptic Carleman estimate: psi(x) = |x - x0|^2 with x0 outside
/// Omega-bar, eta = e^{beta psi}, Gamma_0 = {x in Gamma : (x - x0).nu >= 0}.
struct CarlemanWeight {
    Vec2 x0;
    double beta = 1.0;
    Grid win;                       // Omega window grid
    std::vector<double> psi, eta;   // per window node
    std::vector<bool> gamma0_side;  // per boundary-walk node of the window

    static CarlemanWeight make(const Domain& dom, const Grid& win, double beta,
                               double x0_factor = 1.5) {
        CarlemanWeight w;
        w.x0 = {dom.omega_center.x - x0_factor * dom.box_half_width, dom.omega_center.y};
        w.beta = beta;
        w.win = win;
        const int nn = win.num_nodes();
        w.psi.resize(nn);
        w.eta.resize(nn);
        for (int j = 0; j < win.ny; ++j)
            for (int i = 0; i < win.nx; ++i) {
                const Vec2 p = win.point(i, j);
                const double ps = (p - w.x0).dot(p - w.x0);
                w.psi[win.idx(i, j)] = ps;
                w.eta[win.idx(i, j)] = std::exp(beta * ps);
                if (ps <= 0.0) throw ConfigError("carleman weight: psi must be positive on Omega");
            }
        return w;
    }

    bool on_gamma0(const Vec2& p, const Vec2& nu) const { return (p - x0).dot(nu) >= 0.0; }
};

struct CarlemanCheck {
    double lhs = 0.0;   // both sides scaled by e^{-max(2 gamma eta)}
    double rhs = 0.0;
    double ratio = 0.0;
};

/// Evaluate both sides of the weighted inequality for one u with u|_Gamma = 0.
/// Integrands carry e^{2 gamma eta - S}, S = max 2 gamma eta (log-space shift;
/// e^{2 gamma eta} itself overflows for gamma eta > 350).
inline CarlemanCheck carleman_verify(const CarlemanWeight& w, const ScalarField& u, double gamma) {
    const Grid& g = w.win;
    double emax = 0;
    for (double e : w.eta) emax = std::max(emax, e);
    const double S = 2.0 * gamma * emax;

    double lhs = 0, rhs_vol = 0, rhs_bd = 0;
    for (int j = 1; j < g.ny - 1; ++j)
        for (int i = 1; i < g.nx - 1; ++i) {
            const double wexp = std::exp(2.0 * gamma * w.eta[g.idx(i, j)] - S);
            const Complex gx = (u.at(i + 1, j) - u.at(i - 1, j)) / (2 * g.h);
            const Complex gy = (u.at(i, j + 1) - u.at(i, j - 1)) / (2 * g.h);
            const Complex lap = (u.at(i + 1, j) + u.at(i - 1, j) + u.at(i, j + 1) + u.at(i, j - 1)
                                 - 4.0 * u.at(i, j)) / (g.h * g.h);
            lhs += (gamma * (std::norm(gx) + std::norm(gy))
                    + gamma * gamma * gamma * std::norm(u.at(i, j))) * wexp;
            rhs_vol += std::norm(lap) * wexp;
        }
    lhs *= g.h * g.h;
    rhs_vol *= g.h * g.h;

    auto bd = [&](int i, int j, Vec2 nu, double wgt) {
        if (!w.on_gamma0(g.point(i, j), nu)) return;
        const Vec2 p0 = g.point(i, j);
        const Vec2 p1 = p0 - g.h * nu, p2 = p0 - 2.0 * g.h * nu;
        const Complex dn = (3.0 * u.interp(p0) - 4.0 * u.interp(p1) + u.interp(p2)) / (2.0 * g.h);
        const double wexp = std::exp(2.0 * gamma * w.eta[g.idx(i, j)] - S);
        rhs_bd += gamma * std::norm(dn) * wexp * wgt;
    };
    const double is2 = 1.0 / std::sqrt(2.0);
    for (int i = 0; i < g.nx - 1; ++i) bd(i, 0, i == 0 ? Vec2{-is2, -is2} : Vec2{0, -1}, g.h);
    for (int j = 0; j < g.ny - 1; ++j) bd(g.nx - 1, j, j == 0 ? Vec2{is2, -is2} : Vec2{1, 0}, g.h);
    for (int i = g.nx - 1; i > 0; --i) bd(i, g.ny - 1, i == g.nx - 1 ? Vec2{is2, is2} : Vec2{0, 1}, g.h);
    for (int j = g.ny - 1; j > 0; --j) bd(0, j, j == g.ny - 1 ? Vec2{-is2, is2} : Vec2{-1, 0}, g.h);

    CarlemanCheck out;
    out.lhs = lhs;
    out.rhs = rhs_vol + rhs_bd;
    out.ratio = out.rhs > 0 ? out.lhs / out.rhs : (out.lhs > 0 ? 1e300 : 0.0);
    return out;
}

/// Random H^2_0-type family: sums of Dirichlet sine modes on the window, unit L^2.
inline std::vector<ScalarField> carleman_test_family(const Grid& win, int count,
                                                     std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<int> mode(1, 4);
    std::normal_distribution<double> amp(0.0, 1.0);
    std::vector<ScalarField> fam;
    const double Lx = (win.nx - 1) * win.h, Ly = (win.ny - 1) * win.h;
    for (int c = 0; c < count; ++c) {
        ScalarField u(win);
        for (int term = 0; term < 6; ++term) {
            const int kx = mode(rng), ky = mode(rng);
            const double a = amp(rng);
            for (int j = 0; j < win.ny; ++j)
                for (int i = 0; i < win.nx; ++i) {
                    const double sx = std::sin(kx * kPi * i * win.h / Lx);
                    const double sy = std::sin(ky * kPi * j * win.h / Ly);
                    u.at(i, j) += a * sx * sy;
                }
        }
        const double n = l2_norm(u);
        if (n > 0)
            for (auto& z : u.v) z /= n;
        fam.push_back(std::move(u));
    }
    return fam;
}

/// Smallest gamma in [lo, hi] with max-ratio <= 1 across the family for all
/// gamma' in [gamma, 4 gamma] (scanned on a log grid), found by bisection.
inline double carleman_find_gamma0(const CarlemanWeight& w, const std::vector<ScalarField>& fam,
                                   double lo = 0.1, double hi = 50.0, int scan = 17) {
    auto window_ok = [&](double gamma) {
        for (int s = 0; s < scan; ++s) {
            const double gp = gamma * std::pow(4.0, static_cast<double>(s) / (scan - 1));
            for (const auto& u : fam)
                if (carleman_verify(w, u, gp).ratio > 1.0) return false;
        }
        return true;
    };
    if (!window_ok(hi)) throw SolverError("carleman_find_gamma0: inequality fails even at gamma_hi");
    if (window_ok(lo)) return lo;
    double a = lo, b = hi;
    for (int it = 0; it < 40; ++it) {
        const double mid = std::sqrt(a * b);
        (window_ok(mid) ? b : a) = mid;
    }
    return b;
}

}  // namespace convwave
