#pragma once

#include <Eigen/Sparse>
#include <Eigen/IterativeLinearSolvers>

#include "convwave/field.hpp"

namespace convwave {

/// 5-point Dirichlet Poisson solve Delta phi = rhs on the interior of the field's
/// grid window, phi = 0 on the rim. Conjugate gradient to relative residual 1e-10.
inline ScalarField poisson_dirichlet(const ScalarField& rhs) {
    const Grid& g = rhs.grid;
    const int nix = g.nx - 2, niy = g.ny - 2;
    if (nix < 1 || niy < 1) throw SolverError("poisson_dirichlet: no interior nodes");
    const int N = nix * niy;
    auto lin = [&](int i, int j) { return (j - 1) * nix + (i - 1); };

    Eigen::SparseMatrix<double> A(N, N);
    std::vector<Eigen::Triplet<double>> trip;
    trip.reserve(static_cast<size_t>(5) * N);
    for (int j = 1; j <= niy; ++j)
        for (int i = 1; i <= nix; ++i) {
            const int r = lin(i, j);
            trip.emplace_back(r, r, 4.0);
            if (i > 1) trip.emplace_back(r, lin(i - 1, j), -1.0);
            if (i < nix) trip.emplace_back(r, lin(i + 1, j), -1.0);
            if (j > 1) trip.emplace_back(r, lin(i, j - 1), -1.0);
            if (j < niy) trip.emplace_back(r, lin(i, j + 1), -1.0);
        }
    A.setFromTriplets(trip.begin(), trip.end());

    Eigen::ConjugateGradient<Eigen::SparseMatrix<double>, Eigen::Lower | Eigen::Upper> cg;
    cg.setTolerance(1e-10);
    cg.setMaxIterations(10 * N);
    cg.compute(A);

    ScalarField phi(g);
    for (int part = 0; part < 2; ++part) {
        Eigen::VectorXd b(N);
        double bnorm = 0;
        for (int j = 1; j <= niy; ++j)
            for (int i = 1; i <= nix; ++i) {
                const Complex z = rhs.at(i, j);
                const double val = part == 0 ? z.real() : z.imag();
                b(lin(i, j)) = -val * g.h * g.h;  // -Delta phi = -rhs scaled by h^2
                bnorm += val * val;
            }
        if (bnorm == 0.0) continue;
        const Eigen::VectorXd x = cg.solve(b);
        if (cg.info() != Eigen::Success)
            throw SolverError("poisson_dirichlet: CG failed to reach 1e-10 within 10 N iterations");
        for (int j = 1; j <= niy; ++j)
            for (int i = 1; i <= nix; ++i) {
                Complex& z = phi.at(i, j);
                if (part == 0) z += Complex{x(lin(i, j)), 0};
                else z += Complex{0, x(lin(i, j))};
            }
    }
    return phi;
}

}  // namespace convwave
