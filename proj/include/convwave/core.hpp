#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace convwave {

using Complex = std::complex<double>;

constexpr double kPi = 3.14159265358979323846;

struct Vec2 {
    double x = 0.0;
    double y = 0.0;

    Vec2() = default;
    Vec2(double x_, double y_) : x(x_), y(y_) {}

    Vec2 operator+(const Vec2& o) const { return {x + o.x, y + o.y}; }
    Vec2 operator-(const Vec2& o) const { return {x - o.x, y - o.y}; }
    Vec2 operator*(double s) const { return {x * s, y * s}; }
    double dot(const Vec2& o) const { return x * o.x + y * o.y; }
    double norm() const { return std::sqrt(x * x + y * y); }
    Vec2 perp() const { return {-y, x}; }
};

inline Vec2 operator*(double s, const Vec2& v) { return v * s; }

/// Unit direction on S^1, angle-parameterized.
struct Direction {
    Vec2 omega;

    explicit Direction(double angle) : omega(std::cos(angle), std::sin(angle)) {}
    explicit Direction(Vec2 v) : omega(v) {
        const double n = v.norm();
        if (n == 0.0) throw std::invalid_argument("Direction: zero vector");
        omega = {v.x / n, v.y / n};
        if (std::abs(omega.norm() - 1.0) > 1e-12)
            throw std::invalid_argument("Direction: normalization failed");
    }
    Direction reversed() const { return Direction(Vec2{-omega.x, -omega.y}); }
    Vec2 perp() const { return {-omega.y, omega.x}; }
};

struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct AdmissibilityError : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct SolverError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// C^inf bump on (-1,1), value 1 at 0, identically 0 outside.
inline double bump_profile(double s) {
    const double s2 = s * s;
    if (s2 >= 1.0) return 0.0;
    return std::exp(1.0 - 1.0 / (1.0 - s2));
}

/// Radial C^inf bump on the unit disk.
inline double bump_profile_r2(double r2) {
    if (r2 >= 1.0) return 0.0;
    return std::exp(1.0 - 1.0 / (1.0 - r2));
}

/// C^2 switch: 0 at 0 (with two vanishing derivatives), 1 for s >= 1.
inline double smooth_switch(double s) {
    if (s <= 0.0) return 0.0;
    if (s >= 1.0) return 1.0;
    return s * s * s * (10.0 + s * (-15.0 + 6.0 * s));
}

/// L^2(R^2) norm of the unit radial bump, for concentrated-profile normalization.
inline double radial_bump_l2() {
    // 2*pi int_0^1 e^{2(1 - 1/(1-r^2))} r dr, composite midpoint at 1e5 cells
    static const double value = [] {
        const int n = 100000;
        double acc = 0.0;
        for (int i = 0; i < n; ++i) {
            const double r = (i + 0.5) / n;
            const double b = bump_profile_r2(r * r);
            acc += b * b * r;
        }
        return std::sqrt(2.0 * kPi * acc / n);
    }();
    return value;
}

struct LineFit {
    double slope = 0.0;
    double intercept = 0.0;
    double r2 = 0.0;
};

/// Least-squares line through (x_i, y_i).
inline LineFit fit_line(const std::vector<double>& x, const std::vector<double>& y) {
    const size_t n = x.size();
    if (n < 2 || y.size() != n) throw std::invalid_argument("fit_line: need >= 2 points");
    double mx = 0, my = 0;
    for (size_t i = 0; i < n; ++i) { mx += x[i]; my += y[i]; }
    mx /= n; my /= n;
    double sxx = 0, sxy = 0, syy = 0;
    for (size_t i = 0; i < n; ++i) {
        sxx += (x[i] - mx) * (x[i] - mx);
        sxy += (x[i] - mx) * (y[i] - my);
        syy += (y[i] - my) * (y[i] - my);
    }
    LineFit f;
    f.slope = sxy / sxx;
    f.intercept = my - f.slope * mx;
    double ssres = 0;
    for (size_t i = 0; i < n; ++i) {
        const double e = y[i] - (f.intercept + f.slope * x[i]);
        ssres += e * e;
    }
    f.r2 = (syy > 0) ? 1.0 - ssres / syy : 1.0;
    return f;
}

/// Log-log fit; all entries must be positive.
inline LineFit fit_loglog(const std::vector<double>& x, const std::vector<double>& y) {
    std::vector<double> lx(x.size()), ly(y.size());
    for (size_t i = 0; i < x.size(); ++i) {
        if (x[i] <= 0 || y[i] <= 0) throw std::invalid_argument("fit_loglog: nonpositive data");
        lx[i] = std::log(x[i]);
        ly[i] = std::log(y[i]);
    }
    return fit_line(lx, ly);
}

inline double median(std::vector<double> v) {
    if (v.empty()) throw std::invalid_argument("median: empty");
    std::sort(v.begin(), v.end());
    const size_t n = v.size();
    return (n % 2 == 1) ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

/// FNV-1a over bytes, for config/report hashing.
inline std::uint64_t fnv1a(const std::string& s) {
    std::uint64_t h = 1469598103934665603ull;
    for (unsigned char c : s) {
        h ^= c;
        h *= 1099511628211ull;
    }
    return h;
}

inline std::string hash_hex(const std::string& s) {
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(fnv1a(s)));
    return std::string(buf);
}

}  // namespace convwave
