#pragma once

#include <Eigen/Dense>

#include "convwave/field.hpp"

namespace convwave {

/// Box-periodic Sobolev norms through the separable 2-D DFT.
/// Convention: f_hat(xi) = int e^{-i x.xi} f dx, ||f||_{H^s}^2 =
/// (2 pi)^{-2} sum <xi_k>^{2s} |f_hat_k|^2 dxi^2 with dxi = 2 pi / L.
/// Intended for fields compactly supported inside the grid box.
class SpectralNorms {
public:
    explicit SpectralNorms(const Grid& g) : g_(g), n_(g.nx - 1) {
        if (g.nx != g.ny) throw ConfigError("SpectralNorms: square grid required");
        L_ = n_ * g.h;
        F_ = Eigen::MatrixXcd(n_, n_);
        for (int k = 0; k < n_; ++k)
            for (int m = 0; m < n_; ++m)
                F_(k, m) = std::exp(Complex{0, -2.0 * kPi * k * m / n_});
        xi_.resize(n_);
        for (int k = 0; k < n_; ++k) {
            const int ks = k <= n_ / 2 ? k : k - n_;
            xi_[k] = 2.0 * kPi * ks / L_;
        }
    }

    /// Transform samples (dropping the duplicated periodic edge).
    Eigen::MatrixXcd transform(const ScalarField& f) const {
        Eigen::MatrixXcd X(n_, n_);
        for (int j = 0; j < n_; ++j)
            for (int i = 0; i < n_; ++i) X(i, j) = f.at(i, j);
        return (F_ * X * F_.transpose()) * (g_.h * g_.h);
    }

    double sobolev(const ScalarField& f, double s) const {
        const Eigen::MatrixXcd X = transform(f);
        double acc = 0;
        for (int k = 0; k < n_; ++k)
            for (int m = 0; m < n_; ++m) {
                const double w = 1.0 + xi_[k] * xi_[k] + xi_[m] * xi_[m];
                acc += std::pow(w, s) * std::norm(X(k, m));
            }
        const double dxi = 2.0 * kPi / L_;
        return std::sqrt(acc * dxi * dxi / (4.0 * kPi * kPi));
    }

    double sobolev(const VectorField& f, double s) const {
        const double a = sobolev(f.a1, s), b = sobolev(f.a2, s);
        return std::sqrt(a * a + b * b);
    }

private:
    Grid g_;
    int n_;
    double L_ = 0.0;
    Eigen::MatrixXcd F_;
    std::vector<double> xi_;
};

}  // namespace convwave
