#pragma once

#include "convwave/experiments.hpp"

namespace convwave {

struct CheckResult {
    std::string suite;
    std::string name;
    bool pass = false;
    double value = 0.0;
    double threshold = 0.0;
    std::string note;
};

namespace detail {

inline void add(std::vector<CheckResult>& out, std::string suite, std::string name, double value,
                double threshold, bool pass, std::string note = "") {
    out.push_back({std::move(suite), std::move(name), pass, value, threshold, std::move(note)});
}

inline void add_le(std::vector<CheckResult>& out, std::string suite, std::string name,
                   double value, double threshold, std::string note = "") {
    add(out, std::move(suite), std::move(name), value, threshold, value <= threshold,
        std::move(note));
}

}  // namespace detail

/// Module property suites behind the `verify` subcommand. Each check is cheap
/// enough that the whole battery stays within a couple of minutes.
inline std::vector<CheckResult> run_verify_checks(const ExperimentConfig& cfg) {
    using detail::add;
    using detail::add_le;
    cfg.validate();
    std::vector<CheckResult> R;
    const Domain dom = cfg.domain();
    const Grid g = cfg.grid();
    auto cls = std::make_shared<Classification>(classify_nodes(dom, g));
    const Grid win = g.window(cls->iw0, cls->jw0, cls->iw1, cls->jw1);

    // ---- grid_geometry ----
    {
        size_t interior = 0, boundary = 0, collar = 0, exterior = 0;
        for (NodeClass c : cls->cls) {
            if (c == NodeClass::Interior) ++interior;
            if (c == NodeClass::Boundary) ++boundary;
            if (c == NodeClass::Collar) ++collar;
            if (c == NodeClass::Exterior) ++exterior;
        }
        const bool part = interior + boundary + collar + exterior == cls->cls.size();
        add(R, "grid_geometry", "classification_partition",
            static_cast<double>(interior + boundary + collar + exterior),
            static_cast<double>(cls->cls.size()), part);

        BoundaryTrace one(cls, g.dt, g.nt);
        for (auto& z : one.values) z = 1.0;
        const double expected = cls->perimeter * g.T;
        add_le(R, "grid_geometry", "surface_quadrature_constant",
               std::abs(surface_quadrature(one).real() - expected), 1e-10,
               "perimeter * T for the unit trace");

        VectorField constF = VectorField::sample(g, [](Vec2) { return Vec2{0.7, -0.2}; });
        // chord through the box center along e1; field constant on the whole box
        const Complex li = line_quadrature(constF, Direction(0.0), Vec2{0, 0.1});
        // trapezoid with interpolation support = exact over the box span 2b
        add_le(R, "grid_geometry", "line_quadrature_constant",
               std::abs(li.real() - 0.7 * 2.0 * dom.box_half_width), 5e-3,
               "constant chord integral");

        VectorField bumpF = bump_vector_field(g, {0.05, 0.0}, 0.2, 1.0, -0.4);
        const Direction d(0.4);
        const Complex l1 = line_quadrature(bumpF, d, Vec2{0.02, -0.05});
        const Complex l2 = line_quadrature(bumpF, d, Vec2{0.02, -0.05} + 0.37 * d.omega);
        add_le(R, "grid_geometry", "line_quadrature_shift_invariance", std::abs(l1 - l2), 1e-9,
               "same line, moved base point");
    }

    // ---- fields_coefficients ----
    {
        VectorField V = VectorField::sample(g, [](Vec2) { return Vec2{2.0, 0.0}; });
        const CoefficientPair em = reduce_to_em(V);
        double worst = 0;
        for (int n = 0; n < g.num_nodes(); ++n) {
            worst = std::max(worst, std::abs(em.A.a1.v[n] - Complex{0, 1}));
            worst = std::max(worst, std::abs(em.A.a2.v[n]));
            worst = std::max(worst, std::abs(em.q.v[n] - 1.0));
        }
        add_le(R, "fields_coefficients", "reduce_constant_field", worst, 1e-12,
               "V=(2,0): A=(i,0), q=1");

        MollifierConfig mc;
        mc.lambda = 8.0;
        mc.alpha = cfg.alpha;
        mc.kernel_radius = cfg.kernel_radius;
        ScalarField c1f(g);
        for (auto& z : c1f.v) z = 0.6;
        const ScalarField c1s = mollify(c1f, mc);
        double merr = 0;
        for (const auto& z : c1s.v) merr = std::max(merr, std::abs(z - 0.6));
        add_le(R, "fields_coefficients", "mollify_kernel_mass", merr, 1e-12,
               "constant field unchanged");

        // translation by whole grid steps commutes
        ScalarField bumpf = ScalarField::sample(g, [](Vec2 p) {
            return Complex{bump_profile_r2((p.x * p.x + p.y * p.y) / 0.09), 0};
        });
        const ScalarField sm = mollify(bumpf, mc);
        ScalarField shifted(g), sm_shifted(g);
        for (int j = 0; j < g.ny; ++j)
            for (int i = 3; i < g.nx; ++i) shifted.at(i, j) = bumpf.at(i - 3, j);
        const ScalarField sm2 = mollify(shifted, mc);
        double terr = 0;
        const int kk = static_cast<int>(std::floor(cfg.kernel_radius *
                                                   std::pow(mc.lambda, -mc.alpha) / g.h));
        for (int j = 0; j < g.ny; ++j)
            for (int i = 3 + kk; i < g.nx - kk; ++i)
                terr = std::max(terr, std::abs(sm2.at(i, j) - sm.at(i - 3, j)));
        add_le(R, "fields_coefficients", "mollify_translation_commute", terr, 1e-12);

        const VectorField big = bump_vector_field(g, {0, 0}, cfg.family_support, 0.2, 0.1);
        bool monotone = true;
        try {
            check_admissible(big, cfg.M);
            VectorField half = big;
            for (auto& z : half.a1.v) z *= 0.5;
            for (auto& z : half.a2.v) z *= 0.5;
            check_admissible(half, cfg.M);
        } catch (const AdmissibilityError&) {
            monotone = false;
        }
        add(R, "fields_coefficients", "admissibility_monotone", monotone ? 1 : 0, 1, monotone);

        const VectorField zero(g);
        const VectorField inner = bump_vector_field(g, {0, 0}, cfg.family_support, 0.3, -0.2);
        const VectorField ext = extend_by_background(inner, zero, dom);
        double collar_sup = 0;
        for (int j = 0; j < g.ny; ++j)
            for (int i = 0; i < g.nx; ++i)
                if (cls->cls[g.idx(i, j)] == NodeClass::Collar)
                    collar_sup = std::max({collar_sup, std::abs(ext.a1.at(i, j)),
                                           std::abs(ext.a2.at(i, j))});
        add_le(R, "fields_coefficients", "extension_vanishes_on_collar", collar_sup, 0.0);
    }

    // ---- wave_forward ----
    {
        const VectorField V = bump_vector_field(g, {0.03, -0.02}, cfg.family_support, 0.25, -0.18);
        WaveSolver sv(OperatorForm::Convection, V, nullptr, cls, g);

        BoundaryTrace zerof(cls, g.dt, g.nt);
        zerof.update_flags();
        const SpaceTimeField u0 = sv.solve_forward(zerof);
        double m0 = 0;
        for (const auto& z : u0.v) m0 = std::max(m0, std::abs(z));
        add_le(R, "wave_forward", "zero_data_zero_solution", m0, 0.0);

        const auto probes = make_probe_basis(cls, g, 2, 2, cfg.ramp_fraction);
        const SpaceTimeField ua = sv.solve_forward(probes[0]);
        const SpaceTimeField ub = sv.solve_forward(probes[1]);
        BoundaryTrace comb = probes[0];
        for (size_t n = 0; n < comb.values.size(); ++n)
            comb.values[n] = 0.7 * probes[0].values[n] - 1.3 * probes[1].values[n];
        comb.update_flags();
        const SpaceTimeField uc = sv.solve_forward(comb);
        double lin = 0, scale = 0;
        for (size_t n = 0; n < uc.v.size(); ++n) {
            lin = std::max(lin, std::abs(uc.v[n] - (0.7 * ua.v[n] - 1.3 * ub.v[n])));
            scale = std::max(scale, std::abs(uc.v[n]));
        }
        add_le(R, "wave_forward", "superposition", lin / std::max(scale, 1e-30), 1e-9);

        double imax = 0;
        for (const auto& z : ua.v) imax = std::max(imax, std::abs(z.imag()));
        add_le(R, "wave_forward", "real_data_real_solution", imax, 1e-12);

        // EM-form with reduced coefficients reproduces the V-form solution
        const CoefficientPair em = reduce_to_em(V);
        WaveSolver sh(OperatorForm::Magnetic, em.A, &em.q, cls, g);
        const SpaceTimeField uh = sh.solve_forward(probes[0]);
        double agree = 0;
        for (size_t n = 0; n < uh.v.size(); ++n) agree = std::max(agree, std::abs(uh.v[n] - ua.v[n]));
        add_le(R, "wave_forward", "em_vs_convection_agreement", agree / std::max(scale, 1e-30),
               50.0 * g.h * g.h, "O(h^2) stencil difference");

        // plane-wave d'Alembert oracle for V = 0
        const VectorField zeroV(g);
        WaveSolver s0(OperatorForm::Convection, zeroV, nullptr, cls, g);
        const Direction dir(cfg.go_angle);
        const double smax = dom.omega_half_width * (std::abs(dir.omega.x) + std::abs(dir.omega.y));
        auto wave = [&](Vec2 p, double t) {
            const double s = p.dot(dir.omega) + t - smax - 0.05;
            return Complex{std::sin(9.0 * s) * smooth_switch(s / 0.45), 0.0};
        };
        const BoundaryTrace fpw =
            BoundaryTrace::sample(cls, g.dt, g.nt, [&](Vec2 p, double t) { return wave(p, t); });
        const SpaceTimeField upw = s0.solve_forward(fpw);
        double werr = 0, wamp = 0;
        for (int k = 0; k <= win.nt; ++k)
            for (int j = 0; j < win.ny; ++j)
                for (int i = 0; i < win.nx; ++i) {
                    werr = std::max(werr, std::abs(upw.at(k, i, j) - wave(win.point(i, j), k * g.dt)));
                    wamp = std::max(wamp, std::abs(upw.at(k, i, j)));
                }
        add_le(R, "wave_forward", "dalembert_oracle", werr / std::max(wamp, 1e-30), 400.0 * g.h * g.h,
               "switched-on plane wave, exact solution");

        // time-reversal consistency for V = 0
        BoundaryTrace grev = fpw.time_reversed();
        const SpaceTimeField vb = s0.solve_backward(grev);
        const SpaceTimeField uf = s0.solve_forward(fpw);
        double trc = 0;
        for (int k = 0; k <= win.nt; ++k)
            for (int n = 0; n < win.num_nodes(); ++n)
                trc = std::max(trc, std::abs(vb.v[static_cast<size_t>(win.nt - k) * win.num_nodes() + n]
                                             - uf.v[static_cast<size_t>(k) * win.num_nodes() + n]));
        add_le(R, "wave_forward", "time_reversal_symmetry", trc / std::max(wamp, 1e-30), 1e-12,
               "backward solve of reversed data");

        // discrete energy conservation after the forcing window (V = 0)
        {
            BoundaryTrace pulse = BoundaryTrace::sample(cls, g.dt, g.nt, [&](Vec2 p, double t) {
                const double env = bump_profile(std::abs(t - 0.2 * g.T) / (0.15 * g.T));
                return Complex{env * std::sin(8.0 * p.x + 5.0 * t), 0};
            });
            const SpaceTimeField ue = s0.solve_forward(pulse);
            const int k0 = static_cast<int>(0.5 * g.nt);
            const double e0 = leapfrog_energy(ue, k0);
            double drift = 0;
            for (int k = k0; k < std::min(g.nt - 1, k0 + 1000); ++k)
                drift = std::max(drift, std::abs(leapfrog_energy(ue, k) - e0));
            add_le(R, "wave_forward", "energy_drift_after_forcing", drift / std::max(e0, 1e-30),
                   1e-6, "per 1000 steps");
        }

        // identical coefficients: dn difference exactly zero
        const DnOperator la = make_lambda_op(V, cls, g);
        const DnOperator lb = make_lambda_op(V, cls, g);
        const BoundaryTrace dd = la.apply(probes[0]) - lb.apply(probes[0]);
        add_le(R, "wave_forward", "dn_identical_coefficients", l2_sigma_norm(dd), 0.0);
    }

    // ---- go_probes ----
    {
        const VectorField V = go_rate_field(cfg, g);
        const CoefficientPair em = reduce_to_em(V);
        MollifierConfig mc;
        mc.lambda = cfg.go_lambdas.front();
        mc.alpha = cfg.alpha;
        mc.kernel_radius = cfg.kernel_radius;
        const VectorField As = mollify(em.A, mc);
        const Direction dir(cfg.go_angle);

        GoAnsatz an;
        an.omega = dir;
        an.lambda = cfg.go_lambdas.front();
        an.bump = BumpProfile::slab(dir, cfg.go_band_center, cfg.go_band_width,
                                    cfg.go_band_transverse);
        add(R, "go_probes", "ansatz_support_invariant", ansatz_clears_omega(an, cls, g) ? 0 : 1, 0,
            ansatz_clears_omega(an, cls, g), "leading term vanishes on Omega at t in {0,T}");

        const SpaceTimeField phi = transport_phase(an.bump, dir, win);
        double t0err = 0;
        for (int j = 0; j < win.ny; ++j)
            for (int i = 0; i < win.nx; ++i)
                t0err = std::max(t0err, std::abs(phi.at(0, i, j) - an.bump(win.point(i, j))));
        add_le(R, "go_probes", "transport_t0_slice", t0err, 0.0);

        const VectorField zeroA(g);
        const SpaceTimeField b0 = go_amplitude(zeroA, dir, SolveDirection::Forward, win);
        double b0err = 0;
        for (const auto& z : b0.v) b0err = std::max(b0err, std::abs(z - 1.0));
        add_le(R, "go_probes", "amplitude_zero_field", b0err, 1e-14, "A=0 gives b=1");

        const SpaceTimeField b = go_amplitude(As, dir, SolveDirection::Forward, win);
        double bmax = 0;
        for (const auto& z : b.v) bmax = std::max(bmax, std::abs(z));
        add_le(R, "go_probes", "amplitude_bound", bmax, std::exp(cfg.M * g.T) + 1e-9,
               "|b| <= exp(M T)");

        const GoSolution bwd = go_solution_with_residual(
            em, As, [&] { GoAnsatz a = an; a.sign = SolveDirection::Backward; return a; }(), cls, g);
        double rT = bwd.r.max_abs_snapshot(win.nt);
        add_le(R, "go_probes", "backward_terminal_residual", rT, 1e-12,
               "r(.,T) = 0 by construction");
    }

    // ---- ray_recovery ----
    {
        const StabilityFamily fam = stability_family(cfg, g);
        const VectorField V1 = family_member(fam, 0.1);
        const CoefficientPair c1 = reduce_to_em(V1), c2 = reduce_to_em(fam.base);
        RayExtractionConfig rc;
        rc.alpha = cfg.alpha;
        rc.kernel_radius = cfg.kernel_radius;
        rc.bump_scale = cfg.bump_scale;
        rc.M = cfg.M;
        {
            RayExtractor exd(c1, c1, dom, cls, g, rc);
            const RaySample s = exd.full_line_sample(fan_direction(0.3), 0.05, cfg.lambda_recovery);
            add_le(R, "ray_recovery", "equal_coefficient_diagonal", std::abs(s.extracted), 1e-12);
        }
        {
            RayExtractor ex(c1, c2, dom, cls, g, rc);
            // chord far outside the coefficient support
            const RaySample s = ex.full_line_sample(fan_direction(0.0), cfg.offset_radius * 0.98,
                                                    cfg.lambda_recovery);
            add_le(R, "ray_recovery", "missing_chord", std::abs(s.extracted),
                   5e-3, "line misses supp(A1-A2)");
        }
        // Fourier machinery on oracle ray data
        VectorField Ad(g);
        for (size_t n = 0; n < Ad.a1.v.size(); ++n) {
            Ad.a1.v[n] = c1.A.a1.v[n] - c2.A.a1.v[n];
            Ad.a2.v[n] = c1.A.a2.v[n] - c2.A.a2.v[n];
        }
        const int nq = 8, nm = 64;
        std::vector<double> angles(nq);
        std::vector<RayLine> lines(nq);
        for (int q = 0; q < nq; ++q) {
            angles[q] = 2.0 * kPi * q / nq;
            lines[q].omega = fan_direction(angles[q]);
            for (int m = 0; m < nm; ++m) {
                const double z = -cfg.offset_radius + 2.0 * cfg.offset_radius * (m + 0.5) / nm;
                lines[q].offsets.push_back(z);
                lines[q].values.push_back(
                    line_quadrature(Ad, lines[q].omega, z * lines[q].omega.perp()));
            }
        }
        // zero-frequency identity
        double zf_rel = 0;
        for (int q = 0; q < nq; ++q) {
            const Complex F0 = fourier_slice_value(lines[q], 0.0);
            ScalarField wa(g);
            for (int n = 0; n < g.num_nodes(); ++n)
                wa.v[n] = lines[q].omega.omega.x * Ad.a1.v[n] + lines[q].omega.omega.y * Ad.a2.v[n];
            const Complex total = dense_fourier(wa, {0, 0});
            zf_rel = std::max(zf_rel, std::abs(F0 - total) / std::max(std::abs(total), 1e-30));
        }
        add_le(R, "ray_recovery", "zero_frequency_identity", zf_rel, 1e-6);

        // Hermitian symmetry of a slice of a real field
        {
            RayLine lr = lines[0];
            for (auto& z : lr.values) z = Complex{z.imag(), 0.0};  // real synthetic data
            const Complex Fp = fourier_slice_value(lr, 3.0);
            const Complex Fm = fourier_slice_value(lr, -3.0);
            add_le(R, "ray_recovery", "hermitian_symmetry", std::abs(Fm - std::conj(Fp)), 1e-10);
        }

        // gradient-field annihilation in sigma_hat
        {
            ScalarField chi = ScalarField::sample(g, [&](Vec2 p) {
                return Complex{0.3 * bump_profile_r2((p.x * p.x + p.y * p.y)
                                                     / (cfg.family_support * cfg.family_support)),
                               0};
            });
            const VectorField gchi = gradient(chi);
            std::vector<RayLine> glines(nq);
            for (int q = 0; q < nq; ++q) {
                glines[q].omega = fan_direction(angles[q]);
                for (int m = 0; m < nm; ++m) {
                    const double z = -cfg.offset_radius + 2.0 * cfg.offset_radius * (m + 0.5) / nm;
                    glines[q].offsets.push_back(z);
                    glines[q].values.push_back(
                        line_quadrature(gchi, glines[q].omega, z * glines[q].omega.perp()));
                }
            }
            std::vector<double> radii(cfg.radial_nodes);
            for (int r = 0; r < cfg.radial_nodes; ++r)
                radii[r] = (r + 0.5) * cfg.radial_max / cfg.radial_nodes;
            const FourierSliceSet sg = assemble_sigma_hat(glines, angles, radii);
            double leak = 0;
            for (const auto& z : sg.values) leak = std::max(leak, std::abs(z));
            double mass = 0;
            for (size_t r = 0; r < radii.size(); ++r)
                mass = std::max(mass, std::abs(dense_fourier(gchi.a1, {radii[r], 0})));
            add_le(R, "ray_recovery", "gradient_annihilation", leak / std::max(mass, 1e-30), 1e-2);
        }

        // band norm consistency with the dense grid H^-1 at large R
        {
            ScalarField qf = ScalarField::sample(g, [&](Vec2 p) {
                return Complex{0.4 * bump_profile_r2(((p.x - 0.04) * (p.x - 0.04) + p.y * p.y)
                                                     / 0.04),
                               0};
            });
            std::vector<RayLine> qlines(nq);
            for (int q = 0; q < nq; ++q) {
                qlines[q].omega = fan_direction(angles[q]);
                for (int m = 0; m < nm; ++m) {
                    const double z = -cfg.offset_radius + 2.0 * cfg.offset_radius * (m + 0.5) / nm;
                    qlines[q].offsets.push_back(z);
                    qlines[q].values.push_back(
                        line_quadrature(qf, qlines[q].omega, z * qlines[q].omega.perp()));
                }
            }
            const int nr = 160;
            const double Rbig = 40.0;
            std::vector<double> radii(nr);
            for (int r = 0; r < nr; ++r) radii[r] = (r + 0.5) * Rbig / nr;
            const FourierSliceSet qh = recover_q_hat(qlines, angles, radii);
            const BandNormResult bn = hminus1_band_norm(qh, Rbig, 0.0);
            SpectralNorms spec(g);
            const double ref = spec.sobolev(qf, -1.0);
            add_le(R, "ray_recovery", "band_norm_dense_consistency",
                   std::abs(bn.value - ref) / std::max(ref, 1e-30), 0.05,
                   "polar band estimate vs grid spectral H^-1");
        }
    }

    // ---- hodge_carleman ----
    {
        // manufactured Poisson solution
        ScalarField rhs(win), exact(win);
        const double Lx = (win.nx - 1) * win.h;
        for (int j = 0; j < win.ny; ++j)
            for (int i = 0; i < win.nx; ++i) {
                const double sx = std::sin(kPi * i * win.h / Lx), sy = std::sin(kPi * j * win.h / Lx);
                exact.at(i, j) = sx * sy;
                rhs.at(i, j) = -2.0 * kPi * kPi / (Lx * Lx) * sx * sy;
            }
        const ScalarField phi = poisson_dirichlet(rhs);
        double perr = 0;
        for (size_t n = 0; n < phi.v.size(); ++n) perr = std::max(perr, std::abs(phi.v[n] - exact.v[n]));
        add_le(R, "hodge_carleman", "poisson_manufactured", perr, 20.0 * win.h * win.h);

        // maximum principle: rhs <= 0 gives phi >= 0
        ScalarField neg(win);
        for (int j = 1; j < win.ny - 1; ++j)
            for (int i = 1; i < win.nx - 1; ++i) neg.at(i, j) = -1.0;
        const ScalarField pos = poisson_dirichlet(neg);
        double minval = 0;
        for (const auto& z : pos.v) minval = std::min(minval, z.real());
        add(R, "hodge_carleman", "poisson_maximum_principle", minval, 0.0, minval >= -1e-12);

        // hodge: pure gradient killed to O(h)
        ScalarField chi(win);
        for (int j = 0; j < win.ny; ++j)
            for (int i = 0; i < win.nx; ++i) {
                const Vec2 p = win.point(i, j);
                chi.at(i, j) = bump_profile_r2((p.x * p.x + p.y * p.y) / 0.04);
            }
        const VectorField gchi = gradient(chi);
        const HodgeSplit hs = hodge_decompose(gchi);
        add_le(R, "hodge_carleman", "hodge_kills_gradients", hs.vprime_l2 / l2_norm(gchi),
               10.0 * win.h);

        const HodgeSplit hs2 = hodge_decompose(hs.V_prime);
        add_le(R, "hodge_carleman", "hodge_idempotent", l2_norm(hs2.phi),
               10.0 * win.h * l2_norm(hs.V_prime) + 1e-12);

        const ScalarField c0 = curl(gchi);
        const ScalarField c1 = curl(hs.V_prime);
        double cerr = 0;
        for (size_t n = 0; n < c0.v.size(); ++n) cerr = std::max(cerr, std::abs(c0.v[n] - c1.v[n]));
        // curl V' = curl V up to the O(h) boundary strip of the 9-point composition
        add_le(R, "hodge_carleman", "curl_invariance", cerr, 0.3,
               "sup |curl V - curl V'| (interior identity)");

        // carleman: weight conditions and the inequality window
        const CarlemanWeight w = CarlemanWeight::make(dom, win, cfg.carleman_beta,
                                                      cfg.carleman_x0_factor);
        const auto fam = carleman_test_family(win, std::min(cfg.carleman_family, 20), cfg.seed);
        const double g0 = carleman_find_gamma0(w, fam, cfg.gamma_lo, cfg.gamma_hi);
        double worst = 0;
        for (int s = 0; s < 9; ++s) {
            const double gp = g0 * std::pow(4.0, s / 8.0);
            for (const auto& u : fam) worst = std::max(worst, carleman_verify(w, u, gp).ratio);
        }
        add_le(R, "hodge_carleman", "carleman_window", worst, 1.0,
               "max ratio over [gamma0, 4 gamma0], gamma0 = " + std::to_string(g0));
    }

    // ---- cli_experiments ----
    {
        ExperimentConfig bad = cfg;
        bad.cfl_safety = 1.4;
        bool rejected = false;
        try {
            bad.validate();
        } catch (const ConfigError&) {
            rejected = true;
        }
        add(R, "cli_experiments", "cfl_violation_rejected", rejected ? 1 : 0, 1, rejected);

        ExperimentConfig bad2 = cfg;
        bad2.M = 3.5 / cfg.T + 1.0;
        bool rejected2 = false;
        try {
            bad2.validate();
        } catch (const ConfigError&) {
            rejected2 = true;
        }
        add(R, "cli_experiments", "branch_safety_rejected", rejected2 ? 1 : 0, 1, rejected2);
    }

    return R;
}

inline Json checks_json(const std::vector<CheckResult>& checks) {
    Json suites = Json::object();
    for (const auto& c : checks) {
        suites[c.suite].push_back(Json{{"name", c.name},
                                       {"pass", c.pass},
                                       {"value", c.value},
                                       {"threshold", c.threshold},
                                       {"note", c.note}});
    }
    bool all = true;
    std::string first_fail;
    for (const auto& c : checks)
        if (!c.pass) {
            all = false;
            if (first_fail.empty()) first_fail = c.suite + "/" + c.name;
        }
    return Json{{"pass", all}, {"first_failure", first_fail}, {"suites", suites}};
}

}  // namespace convwave
