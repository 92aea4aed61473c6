#pragma once

#include <cstdio>
#include <cstring>
#include <fstream>
#include <functional>
#include <vector>

#include "convwave/grid.hpp"

namespace convwave {

/// Complex-valued function sampled on a uniform grid.
struct ScalarField {
    Grid grid;
    std::vector<Complex> v;

    ScalarField() = default;
    explicit ScalarField(const Grid& g) : grid(g), v(static_cast<size_t>(g.num_nodes()), Complex{0, 0}) {}

    Complex& at(int i, int j) { return v[grid.idx(i, j)]; }
    const Complex& at(int i, int j) const { return v[grid.idx(i, j)]; }

    static ScalarField sample(const Grid& g, const std::function<Complex(Vec2)>& f) {
        ScalarField out(g);
        for (int j = 0; j < g.ny; ++j)
            for (int i = 0; i < g.nx; ++i)
                out.at(i, j) = f(g.point(i, j));
        return out;
    }

    /// Bilinear interpolation; 0 outside the grid.
    Complex interp(const Vec2& p) const {
        const double px = (p.x - grid.x0) / grid.h;
        const double py = (p.y - grid.y0) / grid.h;
        const int i = static_cast<int>(std::floor(px));
        const int j = static_cast<int>(std::floor(py));
        if (i < 0 || j < 0 || i >= grid.nx - 1 || j >= grid.ny - 1) return {0, 0};
        const double fx = px - i, fy = py - j;
        return at(i, j) * ((1 - fx) * (1 - fy)) + at(i + 1, j) * (fx * (1 - fy))
             + at(i, j + 1) * ((1 - fx) * fy) + at(i + 1, j + 1) * (fx * fy);
    }

    bool all_finite() const {
        for (const auto& z : v)
            if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) return false;
        return true;
    }

    double max_abs() const {
        double m = 0;
        for (const auto& z : v) m = std::max(m, std::abs(z));
        return m;
    }

    double max_imag_abs() const {
        double m = 0;
        for (const auto& z : v) m = std::max(m, std::abs(z.imag()));
        return m;
    }
};

/// 2-D trapezoid weight (1/2 on edges, 1/4 on corners).
inline double trapezoid_weight(const Grid& g, int i, int j) {
    double w = 1.0;
    if (i == 0 || i == g.nx - 1) w *= 0.5;
    if (j == 0 || j == g.ny - 1) w *= 0.5;
    return w;
}

inline double l2_norm(const ScalarField& f) {
    double acc = 0;
    for (int j = 0; j < f.grid.ny; ++j)
        for (int i = 0; i < f.grid.nx; ++i)
            acc += trapezoid_weight(f.grid, i, j) * std::norm(f.at(i, j));
    return std::sqrt(acc * f.grid.h * f.grid.h);
}

inline double lp_norm(const ScalarField& f, double p) {
    double acc = 0;
    for (int j = 0; j < f.grid.ny; ++j)
        for (int i = 0; i < f.grid.nx; ++i)
            acc += trapezoid_weight(f.grid, i, j) * std::pow(std::abs(f.at(i, j)), p);
    return std::pow(acc * f.grid.h * f.grid.h, 1.0 / p);
}

/// Seminorm of k-th centered differences, k = 1..3 (used for scaling checks).
inline double diff_seminorm_sup(const ScalarField& f, int order) {
    const Grid& g = f.grid;
    double m = 0;
    const double hk = std::pow(g.h, order);
    for (int j = 0; j < g.ny; ++j) {
        for (int i = 0; i < g.nx; ++i) {
            if (i >= order && i <= g.nx - 1 - order) {
                Complex d{0, 0};
                if (order == 1) d = (f.at(i + 1, j) - f.at(i - 1, j)) * 0.5;
                if (order == 2) d = f.at(i + 1, j) - 2.0 * f.at(i, j) + f.at(i - 1, j);
                if (order == 3) d = (f.at(i + 2, j) - 2.0 * f.at(i + 1, j) + 2.0 * f.at(i - 1, j) - f.at(i - 2, j)) * 0.5;
                m = std::max(m, std::abs(d) / hk);
            }
            if (j >= order && j <= g.ny - 1 - order) {
                Complex d{0, 0};
                if (order == 1) d = (f.at(i, j + 1) - f.at(i, j - 1)) * 0.5;
                if (order == 2) d = f.at(i, j + 1) - 2.0 * f.at(i, j) + f.at(i, j - 1);
                if (order == 3) d = (f.at(i, j + 2) - 2.0 * f.at(i, j + 1) + 2.0 * f.at(i, j - 1) - f.at(i, j - 2)) * 0.5;
                m = std::max(m, std::abs(d) / hk);
            }
        }
    }
    return m;
}

/// L^2 of k-th centered differences over interior nodes.
inline double diff_seminorm_l2(const ScalarField& f, int order) {
    const Grid& g = f.grid;
    double acc = 0;
    const double hk = std::pow(g.h, order);
    for (int j = order; j < g.ny - order; ++j) {
        for (int i = order; i < g.nx - order; ++i) {
            Complex dx{0, 0}, dy{0, 0};
            if (order == 1) {
                dx = (f.at(i + 1, j) - f.at(i - 1, j)) * 0.5;
                dy = (f.at(i, j + 1) - f.at(i, j - 1)) * 0.5;
            } else if (order == 2) {
                dx = f.at(i + 1, j) - 2.0 * f.at(i, j) + f.at(i - 1, j);
                dy = f.at(i, j + 1) - 2.0 * f.at(i, j) + f.at(i, j - 1);
            } else {
                dx = (f.at(i + 2, j) - 2.0 * f.at(i + 1, j) + 2.0 * f.at(i - 1, j) - f.at(i - 2, j)) * 0.5;
                dy = (f.at(i, j + 2) - 2.0 * f.at(i, j + 1) + 2.0 * f.at(i, j - 1) - f.at(i, j - 2)) * 0.5;
            }
            acc += std::norm(dx) / (hk * hk) + std::norm(dy) / (hk * hk);
        }
    }
    return std::sqrt(acc * g.h * g.h);
}

inline double h1_norm(const ScalarField& f) {
    const double a = l2_norm(f), b = diff_seminorm_l2(f, 1);
    return std::sqrt(a * a + b * b);
}

inline double h2_norm(const ScalarField& f) {
    const double a = l2_norm(f), b = diff_seminorm_l2(f, 1), c = diff_seminorm_l2(f, 2);
    return std::sqrt(a * a + b * b + c * c);
}

inline double h3_norm(const ScalarField& f) {
    const double a = h2_norm(f), b = diff_seminorm_l2(f, 3);
    return std::sqrt(a * a + b * b);
}

/// Grid W^{1,inf} surrogate: max of |values| and forward differences.
inline double w1inf_norm(const ScalarField& f) {
    const Grid& g = f.grid;
    double m = 0;
    for (int j = 0; j < g.ny; ++j)
        for (int i = 0; i < g.nx; ++i) {
            m = std::max(m, std::abs(f.at(i, j)));
            if (i + 1 < g.nx) m = std::max(m, std::abs(f.at(i + 1, j) - f.at(i, j)) / g.h);
            if (j + 1 < g.ny) m = std::max(m, std::abs(f.at(i, j + 1) - f.at(i, j)) / g.h);
        }
    return m;
}

/// Pair of scalar components (a1, a2).
struct VectorField {
    ScalarField a1, a2;

    VectorField() = default;
    explicit VectorField(const Grid& g) : a1(g), a2(g) {}

    const Grid& grid() const { return a1.grid; }

    static VectorField sample(const Grid& g, const std::function<Vec2(Vec2)>& f) {
        VectorField out(g);
        for (int j = 0; j < g.ny; ++j)
            for (int i = 0; i < g.nx; ++i) {
                const Vec2 val = f(g.point(i, j));
                out.a1.at(i, j) = val.x;
                out.a2.at(i, j) = val.y;
            }
        return out;
    }

    bool is_real(double tol = 1e-12) const {
        return a1.max_imag_abs() <= tol && a2.max_imag_abs() <= tol;
    }
    bool is_pure_imaginary(double tol = 1e-12) const {
        for (const auto& z : a1.v) if (std::abs(z.real()) > tol) return false;
        for (const auto& z : a2.v) if (std::abs(z.real()) > tol) return false;
        return true;
    }
    double max_abs() const { return std::max(a1.max_abs(), a2.max_abs()); }
};

inline double l2_norm(const VectorField& f) {
    const double a = l2_norm(f.a1), b = l2_norm(f.a2);
    return std::sqrt(a * a + b * b);
}
inline double w1inf_norm(const VectorField& f) {
    return std::max(w1inf_norm(f.a1), w1inf_norm(f.a2));
}
inline double h2_norm(const VectorField& f) {
    const double a = h2_norm(f.a1), b = h2_norm(f.a2);
    return std::sqrt(a * a + b * b);
}

/// Centered-difference divergence (one-sided at the box edge).
inline ScalarField divergence(const VectorField& f) {
    const Grid& g = f.grid();
    ScalarField out(g);
    auto dx = [&](int i, int j) {
        if (i == 0) return (f.a1.at(1, j) - f.a1.at(0, j)) / g.h;
        if (i == g.nx - 1) return (f.a1.at(i, j) - f.a1.at(i - 1, j)) / g.h;
        return (f.a1.at(i + 1, j) - f.a1.at(i - 1, j)) / (2 * g.h);
    };
    auto dy = [&](int i, int j) {
        if (j == 0) return (f.a2.at(i, 1) - f.a2.at(i, 0)) / g.h;
        if (j == g.ny - 1) return (f.a2.at(i, j) - f.a2.at(i, j - 1)) / g.h;
        return (f.a2.at(i, j + 1) - f.a2.at(i, j - 1)) / (2 * g.h);
    };
    for (int j = 0; j < g.ny; ++j)
        for (int i = 0; i < g.nx; ++i)
            out.at(i, j) = dx(i, j) + dy(i, j);
    return out;
}

/// Centered-difference curl component d(a2)/dx - d(a1)/dy (interior; one-sided at edge).
inline ScalarField curl(const VectorField& f) {
    const Grid& g = f.grid();
    ScalarField out(g);
    for (int j = 0; j < g.ny; ++j)
        for (int i = 0; i < g.nx; ++i) {
            Complex d2dx, d1dy;
            if (i == 0) d2dx = (f.a2.at(1, j) - f.a2.at(0, j)) / g.h;
            else if (i == g.nx - 1) d2dx = (f.a2.at(i, j) - f.a2.at(i - 1, j)) / g.h;
            else d2dx = (f.a2.at(i + 1, j) - f.a2.at(i - 1, j)) / (2 * g.h);
            if (j == 0) d1dy = (f.a1.at(i, 1) - f.a1.at(i, 0)) / g.h;
            else if (j == g.ny - 1) d1dy = (f.a1.at(i, j) - f.a1.at(i, j - 1)) / g.h;
            else d1dy = (f.a1.at(i, j + 1) - f.a1.at(i, j - 1)) / (2 * g.h);
            out.at(i, j) = d2dx - d1dy;
        }
    return out;
}

/// Centered gradient, one-sided at the grid edge.
inline VectorField gradient(const ScalarField& f) {
    const Grid& g = f.grid;
    VectorField out(g);
    for (int j = 0; j < g.ny; ++j)
        for (int i = 0; i < g.nx; ++i) {
            Complex gx, gy;
            if (i == 0) gx = (f.at(1, j) - f.at(0, j)) / g.h;
            else if (i == g.nx - 1) gx = (f.at(i, j) - f.at(i - 1, j)) / g.h;
            else gx = (f.at(i + 1, j) - f.at(i - 1, j)) / (2 * g.h);
            if (j == 0) gy = (f.at(i, 1) - f.at(i, 0)) / g.h;
            else if (j == g.ny - 1) gy = (f.at(i, j) - f.at(i, j - 1)) / g.h;
            else gy = (f.at(i, j + 1) - f.at(i, j - 1)) / (2 * g.h);
            out.a1.at(i, j) = gx;
            out.a2.at(i, j) = gy;
        }
    return out;
}

/// Time-indexed sequence of grid snapshots, the unit of wave solutions.
struct SpaceTimeField {
    Grid grid;                // spatial window; dt/nt live here too
    std::vector<Complex> v;   // (nt+1) * nx * ny, snapshot-major

    SpaceTimeField() = default;
    explicit SpaceTimeField(const Grid& g)
        : grid(g), v(static_cast<size_t>(g.nt + 1) * g.num_nodes(), Complex{0, 0}) {}

    Complex& at(int k, int i, int j) { return v[static_cast<size_t>(k) * grid.num_nodes() + grid.idx(i, j)]; }
    const Complex& at(int k, int i, int j) const {
        return v[static_cast<size_t>(k) * grid.num_nodes() + grid.idx(i, j)];
    }

    ScalarField snapshot(int k) const {
        ScalarField s(grid);
        std::copy(v.begin() + static_cast<size_t>(k) * grid.num_nodes(),
                  v.begin() + static_cast<size_t>(k + 1) * grid.num_nodes(), s.v.begin());
        return s;
    }

    double max_abs_snapshot(int k) const {
        double m = 0;
        for (int n = 0; n < grid.num_nodes(); ++n)
            m = std::max(m, std::abs(v[static_cast<size_t>(k) * grid.num_nodes() + n]));
        return m;
    }
};

inline double time_weight(const Grid& g, int k) { return (k == 0 || k == g.nt) ? 0.5 : 1.0; }

/// L^2(Q) norm, trapezoid in space and time.
inline double l2q_norm(const SpaceTimeField& u) {
    const Grid& g = u.grid;
    double acc = 0;
    for (int k = 0; k <= g.nt; ++k) {
        double sk = 0;
        for (int j = 0; j < g.ny; ++j)
            for (int i = 0; i < g.nx; ++i)
                sk += trapezoid_weight(g, i, j) * std::norm(u.at(k, i, j));
        acc += time_weight(g, k) * sk;
    }
    return std::sqrt(acc * g.h * g.h * g.dt);
}

/// L^2(Q) of the spatial gradient (centered, interior nodes).
inline double grad_l2q_norm(const SpaceTimeField& u) {
    const Grid& g = u.grid;
    double acc = 0;
    for (int k = 0; k <= g.nt; ++k) {
        double sk = 0;
        for (int j = 1; j < g.ny - 1; ++j)
            for (int i = 1; i < g.nx - 1; ++i) {
                const Complex gx = (u.at(k, i + 1, j) - u.at(k, i - 1, j)) / (2 * g.h);
                const Complex gy = (u.at(k, i, j + 1) - u.at(k, i, j - 1)) / (2 * g.h);
                sk += std::norm(gx) + std::norm(gy);
            }
        acc += time_weight(g, k) * sk;
    }
    return std::sqrt(acc * g.h * g.h * g.dt);
}

// ---- serialization ----------------------------------------------------------

/// CSV rows: node index, x, y, re, im (one block per component).
inline void write_field_csv(const std::string& path, const std::vector<const ScalarField*>& comps) {
    std::ofstream os(path);
    if (!os) throw std::runtime_error("write_field_csv: cannot open " + path);
    os << "component,node,x,y,re,im\n";
    char buf[160];
    for (size_t c = 0; c < comps.size(); ++c) {
        const ScalarField& f = *comps[c];
        for (int j = 0; j < f.grid.ny; ++j)
            for (int i = 0; i < f.grid.nx; ++i) {
                const Vec2 p = f.grid.point(i, j);
                const Complex z = f.at(i, j);
                std::snprintf(buf, sizeof buf, "%zu,%d,%.17g,%.17g,%.17g,%.17g\n",
                              c, f.grid.idx(i, j), p.x, p.y, z.real(), z.imag());
                os << buf;
            }
    }
}

// Flat little-endian binary: 32-byte header (magic "CWF1", u32 nx, u32 ny,
// f64 h, u32 ncomp, pad), then per component nx*ny (re, im) f64 pairs, row-major.
inline void write_field_binary(const std::string& path, const std::vector<const ScalarField*>& comps) {
    std::ofstream os(path, std::ios::binary);
    if (!os) throw std::runtime_error("write_field_binary: cannot open " + path);
    char header[32] = {0};
    std::memcpy(header, "CWF1", 4);
    const std::uint32_t nx = comps.empty() ? 0 : static_cast<std::uint32_t>(comps[0]->grid.nx);
    const std::uint32_t ny = comps.empty() ? 0 : static_cast<std::uint32_t>(comps[0]->grid.ny);
    const double h = comps.empty() ? 0.0 : comps[0]->grid.h;
    const std::uint32_t nc = static_cast<std::uint32_t>(comps.size());
    std::memcpy(header + 4, &nx, 4);
    std::memcpy(header + 8, &ny, 4);
    std::memcpy(header + 12, &h, 8);
    std::memcpy(header + 20, &nc, 4);
    os.write(header, 32);
    for (const ScalarField* f : comps)
        for (const Complex& z : f->v) {
            const double re = z.real(), im = z.imag();
            os.write(reinterpret_cast<const char*>(&re), 8);
            os.write(reinterpret_cast<const char*>(&im), 8);
        }
}

inline std::vector<ScalarField> read_field_binary(const std::string& path) {
    std::ifstream is(path, std::ios::binary);
    if (!is) throw std::runtime_error("read_field_binary: cannot open " + path);
    char header[32];
    is.read(header, 32);
    if (is.gcount() != 32 || std::memcmp(header, "CWF1", 4) != 0)
        throw std::runtime_error("read_field_binary: bad magic");
    std::uint32_t nx, ny, nc;
    double h;
    std::memcpy(&nx, header + 4, 4);
    std::memcpy(&ny, header + 8, 4);
    std::memcpy(&h, header + 12, 8);
    std::memcpy(&nc, header + 20, 4);
    Grid g;
    g.nx = static_cast<int>(nx);
    g.ny = static_cast<int>(ny);
    g.h = h;
    std::vector<ScalarField> out;
    for (std::uint32_t c = 0; c < nc; ++c) {
        ScalarField f(g);
        for (auto& z : f.v) {
            double re, im;
            is.read(reinterpret_cast<char*>(&re), 8);
            is.read(reinterpret_cast<char*>(&im), 8);
            z = {re, im};
        }
        out.push_back(std::move(f));
    }
    if (!is) throw std::runtime_error("read_field_binary: truncated payload");
    return out;
}

}  // namespace convwave
