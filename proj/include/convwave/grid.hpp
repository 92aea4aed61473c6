#pragma once

#include <cstddef>
#include <vector>

#include "convwave/core.hpp"

namespace convwave {

/// Spatial domain: Omega (square or disk) inside the enlarged box Omega~,
/// with a collar D_rho of width rho around Omega.
struct Domain {
    enum class Shape { Square, Disk };

    Shape shape = Shape::Square;
    Vec2 omega_center{0.0, 0.0};
    double omega_half_width = 0.3;   // square half-width, or disk radius
    double box_half_width = 1.0;
    double rho = 0.15;

    double diam_omega() const {
        return shape == Shape::Square ? 2.0 * omega_half_width * std::sqrt(2.0)
                                      : 2.0 * omega_half_width;
    }

    /// Signed-distance-free exterior distance to Omega (0 inside).
    double dist_to_omega(const Vec2& p) const {
        const double dx = p.x - omega_center.x;
        const double dy = p.y - omega_center.y;
        if (shape == Shape::Disk) {
            return std::max(0.0, std::sqrt(dx * dx + dy * dy) - omega_half_width);
        }
        const double ex = std::max(0.0, std::abs(dx) - omega_half_width);
        const double ey = std::max(0.0, std::abs(dy) - omega_half_width);
        return std::sqrt(ex * ex + ey * ey);
    }

    bool inside_omega(const Vec2& p) const {
        const double dx = p.x - omega_center.x;
        const double dy = p.y - omega_center.y;
        if (shape == Shape::Disk)
            return dx * dx + dy * dy < omega_half_width * omega_half_width;
        return std::abs(dx) < omega_half_width && std::abs(dy) < omega_half_width;
    }

    bool in_collar(const Vec2& p) const {
        const double d = dist_to_omega(p);
        return d > 0.0 && d < rho;
    }

    void validate() const {
        if (rho <= 0.0) throw ConfigError("domain: rho must be positive");
        if (omega_half_width <= 0.0 || box_half_width <= omega_half_width)
            throw ConfigError("domain: need 0 < omega_half_width < box_half_width");
        const double margin = box_half_width - omega_half_width
                              - std::max(std::abs(omega_center.x), std::abs(omega_center.y));
        if (margin < 2.0 * rho)
            throw ConfigError("domain: Omega must sit inside the box with margin >= 2 rho");
    }
};

/// Uniform grid over the box [-b, b]^2 plus the time axis.
struct Grid {
    int nx = 0, ny = 0;
    double h = 0.0;
    double x0 = 0.0, y0 = 0.0;  // coordinates of node (0,0)
    double dt = 0.0;
    int nt = 0;
    double T = 0.0;

    int num_nodes() const { return nx * ny; }
    int idx(int i, int j) const { return j * nx + i; }
    Vec2 point(int i, int j) const { return {x0 + i * h, y0 + j * h}; }
    double tval(int k) const { return k * dt; }

    static Grid make(const Domain& dom, int nx_box, double T, double cfl_safety) {
        if (cfl_safety <= 0.0 || cfl_safety > 0.9)
            throw ConfigError("grid: cfl_safety must lie in (0, 0.9]");
        Grid g;
        g.nx = g.ny = nx_box;
        g.h = 2.0 * dom.box_half_width / (nx_box - 1);
        g.x0 = -dom.box_half_width;
        g.y0 = -dom.box_half_width;
        if (T <= dom.diam_omega() + 4.0 * dom.rho)
            throw ConfigError("grid: probing window requires T > diam(Omega) + 4 rho");
        g.T = T;
        const double dt_max = cfl_safety * g.h / std::sqrt(2.0);
        g.nt = static_cast<int>(std::ceil(T / dt_max));
        g.dt = T / g.nt;
        return g;
    }

    /// Sub-grid spanned by node indices [i0,i1] x [j0,j1] of this grid.
    Grid window(int i0, int j0, int i1, int j1) const {
        Grid g = *this;
        g.nx = i1 - i0 + 1;
        g.ny = j1 - j0 + 1;
        g.x0 = x0 + i0 * h;
        g.y0 = y0 + j0 * h;
        return g;
    }
};

enum class NodeClass : std::uint8_t { Interior, Boundary, Collar, Exterior };

/// One outward-oriented boundary node of Gamma.
struct BoundaryNode {
    int i = 0, j = 0;      // grid indices
    Vec2 pos;
    Vec2 normal;           // outward unit normal
    double weight = 0.0;   // arclength quadrature weight
    double s = 0.0;        // arclength coordinate along Gamma
};

/// Node classification plus the ordered boundary walk.
struct Classification {
    std::vector<NodeClass> cls;        // per box node
    std::vector<BoundaryNode> boundary;  // ordered walk around Gamma
    double perimeter = 0.0;
    int iw0 = 0, jw0 = 0, iw1 = 0, jw1 = 0;  // square window of Omega-bar (square shape only)
};

/// Partition the box nodes into interior(Omega) / boundary(Gamma) / collar / exterior
/// and build the boundary walk with outward normals.
inline Classification classify_nodes(const Domain& dom, const Grid& grid) {
    dom.validate();
    Classification out;
    out.cls.assign(static_cast<size_t>(grid.num_nodes()), NodeClass::Exterior);

    if (dom.shape == Domain::Shape::Square) {
        const double w = dom.omega_half_width;
        // Gamma must pass through grid nodes
        const double fi0 = (dom.omega_center.x - w - grid.x0) / grid.h;
        const double fj0 = (dom.omega_center.y - w - grid.y0) / grid.h;
        const int i0 = static_cast<int>(std::lround(fi0));
        const int j0 = static_cast<int>(std::lround(fj0));
        if (std::abs(fi0 - i0) > 1e-9 || std::abs(fj0 - j0) > 1e-9)
            throw ConfigError("classify_nodes: square Gamma must align with grid nodes");
        const int nw = static_cast<int>(std::lround(2.0 * w / grid.h));
        const int i1 = i0 + nw, j1 = j0 + nw;
        if (i0 < 1 || j0 < 1 || i1 > grid.nx - 2 || j1 > grid.ny - 2)
            throw ConfigError("classify_nodes: Omega window exceeds the box");
        out.iw0 = i0; out.jw0 = j0; out.iw1 = i1; out.jw1 = j1;

        for (int j = 0; j < grid.ny; ++j) {
            for (int i = 0; i < grid.nx; ++i) {
                NodeClass c;
                if (i > i0 && i < i1 && j > j0 && j < j1) c = NodeClass::Interior;
                else if (i >= i0 && i <= i1 && j >= j0 && j <= j1) c = NodeClass::Boundary;
                else c = dom.in_collar(grid.point(i, j)) ? NodeClass::Collar : NodeClass::Exterior;
                out.cls[grid.idx(i, j)] = c;
            }
        }

        // counter-clockwise walk from the lower-left corner; corners get the
        // averaged diagonal normal and the shared 1/2 + 1/2 arclength weight.
        auto push = [&](int i, int j, Vec2 nrm) {
            BoundaryNode b;
            b.i = i; b.j = j;
            b.pos = grid.point(i, j);
            b.normal = nrm;
            b.weight = grid.h;
            b.s = out.perimeter;
            out.boundary.push_back(b);
            out.perimeter += grid.h;
        };
        const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
        for (int i = i0; i < i1; ++i)
            push(i, j0, i == i0 ? Vec2{-inv_sqrt2, -inv_sqrt2} : Vec2{0, -1});
        for (int j = j0; j < j1; ++j)
            push(i1, j, j == j0 ? Vec2{inv_sqrt2, -inv_sqrt2} : Vec2{1, 0});
        for (int i = i1; i > i0; --i)
            push(i, j1, i == i1 ? Vec2{inv_sqrt2, inv_sqrt2} : Vec2{0, 1});
        for (int j = j1; j > j0; --j)
            push(i0, j, j == j1 ? Vec2{-inv_sqrt2, inv_sqrt2} : Vec2{-1, 0});
    } else {
        // Disk: staircase boundary. Boundary nodes are nodes of Omega-bar with a
        // 4-neighbor strictly outside; normals from the signed-distance gradient.
        const Vec2 c = dom.omega_center;
        const double r = dom.omega_half_width;
        auto inside_closed = [&](int i, int j) {
            const Vec2 p = grid.point(i, j);
            const double dx = p.x - c.x, dy = p.y - c.y;
            return dx * dx + dy * dy <= r * r + 1e-14;
        };
        for (int j = 0; j < grid.ny; ++j) {
            for (int i = 0; i < grid.nx; ++i) {
                if (!inside_closed(i, j)) {
                    out.cls[grid.idx(i, j)] =
                        dom.in_collar(grid.point(i, j)) ? NodeClass::Collar : NodeClass::Exterior;
                    continue;
                }
                bool rim = (i == 0 || i == grid.nx - 1 || j == 0 || j == grid.ny - 1);
                if (!rim)
                    rim = !inside_closed(i - 1, j) || !inside_closed(i + 1, j)
                       || !inside_closed(i, j - 1) || !inside_closed(i, j + 1);
                out.cls[grid.idx(i, j)] = rim ? NodeClass::Boundary : NodeClass::Interior;
            }
        }
        // angular order around the center
        struct Tmp { double ang; int i, j; };
        std::vector<Tmp> ring;
        for (int j = 0; j < grid.ny; ++j)
            for (int i = 0; i < grid.nx; ++i)
                if (out.cls[grid.idx(i, j)] == NodeClass::Boundary) {
                    const Vec2 p = grid.point(i, j);
                    ring.push_back({std::atan2(p.y - c.y, p.x - c.x), i, j});
                }
        std::sort(ring.begin(), ring.end(), [](const Tmp& a, const Tmp& b) { return a.ang < b.ang; });
        const double per = 2.0 * kPi * r;
        const double wgt = ring.empty() ? 0.0 : per / ring.size();
        for (const auto& t : ring) {
            BoundaryNode b;
            b.i = t.i; b.j = t.j;
            b.pos = grid.point(t.i, t.j);
            const Vec2 d = b.pos - c;
            const double n = d.norm();
            b.normal = n > 0 ? Vec2{d.x / n, d.y / n} : Vec2{1, 0};
            b.weight = wgt;
            b.s = out.perimeter;
            out.boundary.push_back(b);
            out.perimeter += wgt;
        }
    }

    if (out.boundary.size() < 8)
        throw ConfigError("classify_nodes: grid too coarse to resolve Gamma (< 8 boundary nodes)");
    return out;
}

}  // namespace convwave
