#pragma once

#include "convwave/checks.hpp"

namespace convwave {

struct CriterionResult {
    int id = 0;
    std::string name;
    bool pass = false;
    std::string detail;
};

namespace acceptance {

/// Smooth manufactured (V, u) fixtures shared by criterion 1.
inline VectorField smooth_v(const Grid& g, int variant) {
    const double c = 0.02 * variant;
    return VectorField::sample(g, [&](Vec2 p) {
        const double b =
            std::exp(-((p.x - c) * (p.x - c) + (p.y + c / 2) * (p.y + c / 2)) / 0.02);
        return Vec2{(0.22 + 0.02 * variant) * b, (-0.15 + 0.015 * variant) * b};
    });
}

inline SpaceTimeField smooth_u(const Grid& win, int variant) {
    SpaceTimeField u(win);
    const double kx = 2.0 + 0.5 * variant, ky = 3.0 - 0.3 * variant;
    for (int k = 0; k <= win.nt; ++k) {
        const double t = k * win.dt;
        for (int j = 0; j < win.ny; ++j)
            for (int i = 0; i < win.nx; ++i) {
                const Vec2 p = win.point(i, j);
                u.at(k, i, j) = std::sin(kx * p.x + 0.3 * variant) * std::cos(ky * p.y)
                                * (1.0 + 0.5 * std::sin(2.0 * t + 0.2 * variant));
            }
    }
    return u;
}

/// Criterion 1: operator identity orders under (h, dt) halving.
inline CriterionResult criterion1(const ExperimentConfig& cfg, double* noise_floor_out = nullptr) {
    CriterionResult res{1, "operator identity (reduction lemma)", false, ""};
    ExperimentConfig coarse = cfg;
    coarse.nx = (cfg.nx - 1) / 2 + 1;
    const Domain dom = cfg.domain();
    const Grid gc = coarse.grid(), gf = cfg.grid();
    auto clc = std::make_shared<Classification>(classify_nodes(dom, gc));
    auto clf = std::make_shared<Classification>(classify_nodes(dom, gf));
    const Grid wc = gc.window(clc->iw0, clc->jw0, clc->iw1, clc->jw1);
    const Grid wf = gf.window(clf->iw0, clf->jw0, clf->iw1, clf->jw1);

    bool ok = true;
    std::string det;
    double floor = 0.0;
    for (int variant = 0; variant < 5; ++variant) {
        const double rc = em_operator_residual(smooth_v(gc, variant), smooth_u(wc, variant), clc, gc);
        const double rf = em_operator_residual(smooth_v(gf, variant), smooth_u(wf, variant), clf, gf);
        const double order = std::log2(rc / rf);
        floor = std::max(floor, rf);
        ok = ok && order >= 1.8;
        det += "em pair " + std::to_string(variant) + ": order " + std::to_string(order) + "; ";
    }
    // dn-equality residual convergence with 8 probes
    const VectorField Vc1 = smooth_v(gc, 0), Vf1 = smooth_v(gf, 0);
    const VectorField Vc2 = smooth_v(gc, 3), Vf2 = smooth_v(gf, 3);
    const auto pc = make_probe_basis(clc, gc, 4, 2, cfg.ramp_fraction);
    const auto pf = make_probe_basis(clf, gf, 4, 2, cfg.ramp_fraction);
    const double dc = dn_equality_residual(Vc1, Vc2, clc, gc, pc);
    const double df = dn_equality_residual(Vf1, Vf2, clf, gf, pf);
    const double factor = dc / df;
    ok = ok && factor >= 1.5;
    det += "dn_equality factor " + std::to_string(factor) + " (coarse " + std::to_string(dc)
           + ", fine " + std::to_string(df) + ")";
    if (noise_floor_out) *noise_floor_out = floor;
    res.pass = ok;
    res.detail = det;
    return res;
}

/// Criterion 2: magnetic Green formula.
inline CriterionResult criterion2(const ExperimentConfig& cfg) {
    CriterionResult res{2, "magnetic Green formula", false, ""};
    const Domain dom = cfg.domain();
    auto win_fields = [&](int nx) {
        ExperimentConfig c = cfg;
        c.nx = nx;
        const Grid g = c.grid();
        auto cls = std::make_shared<Classification>(classify_nodes(dom, g));
        return g.window(cls->iw0, cls->jw0, cls->iw1, cls->jw1);
    };
    const Grid w1 = win_fields(cfg.nx), w0 = win_fields((cfg.nx - 1) / 2 + 1);

    auto interior_pair = [&](const Grid& w) {
        ScalarField u(w), v(w);
        for (int j = 0; j < w.ny; ++j)
            for (int i = 0; i < w.nx; ++i) {
                const Vec2 p = w.point(i, j);
                const double b = bump_profile_r2((p.x * p.x + p.y * p.y) / 0.03);
                u.at(i, j) = b * std::sin(4.0 * p.x);
                v.at(i, j) = b * std::cos(3.0 * p.y);
            }
        return std::pair{u, v};
    };
    // A = 0, interior-supported: plain summation-by-parts identity
    {
        const auto [u, v] = interior_pair(w1);
        const VectorField A0(w1);
        const double r = green_formula_residual(A0, u, v);
        res.detail += "A=0 interior residual " + std::to_string(r) + "; ";
        if (r > 1e-8) {
            res.detail += "FAIL(A=0)";
            return res;
        }
    }
    auto general_res = [&](const Grid& w) {
        ScalarField u(w), v(w);
        VectorField A(w);
        for (int j = 0; j < w.ny; ++j)
            for (int i = 0; i < w.nx; ++i) {
                const Vec2 p = w.point(i, j);
                u.at(i, j) = std::sin(3.0 * p.x) * std::cos(2.0 * p.y);
                v.at(i, j) = std::cos(2.5 * p.x + 1.5 * p.y);
                const double b = bump_profile_r2((p.x * p.x + p.y * p.y) / 0.05);
                A.a1.at(i, j) = Complex{0, 0.3} * b;
                A.a2.at(i, j) = Complex{0, -0.2} * b;
            }
        return green_formula_residual(A, u, v);
    };
    const double rc = general_res(w0), rf = general_res(w1);
    const double order = std::log2(rc / rf);
    res.detail += "boundary-active order " + std::to_string(order);
    res.pass = order >= 0.9;
    return res;
}

/// Criterion 3: mollifier rates.
inline CriterionResult criterion3(const ExperimentConfig& cfg) {
    CriterionResult res{3, "mollifier rates", false, ""};
    const auto [err, d2] = mollifier_rate_study(cfg);
    const double s1 = err.fit.slope, s2 = d2.fit.slope;
    res.pass = std::abs(s1 + cfg.alpha) <= 0.15 && std::abs(s2 - cfg.alpha) <= 0.15;
    res.detail = "sup-error slope " + std::to_string(s1) + " (target " + std::to_string(-cfg.alpha)
                 + "), second-diff slope " + std::to_string(s2) + " (target "
                 + std::to_string(cfg.alpha) + ")";
    return res;
}

/// Criterion 4: GO residual rates and the support invariant.
inline CriterionResult criterion4(const ExperimentConfig& cfg, GoRateResult* out = nullptr) {
    CriterionResult res{4, "geometric-optics residual rates", false, ""};
    const GoRateResult go = go_rate_study(cfg);
    if (out) *out = go;
    const double bound_r = -cfg.alpha + 0.15, bound_g = 1.0 - cfg.alpha + 0.15;
    const bool ok = go.r_l2.fit.slope <= bound_r && go.grad_r.fit.slope <= bound_g
                    && go.r_l2_bwd.fit.slope <= bound_r && go.grad_r_bwd.fit.slope <= bound_g
                    && go.support_violation <= 1e-12;
    res.pass = ok;
    res.detail = "fwd |r| slope " + std::to_string(go.r_l2.fit.slope) + " <= "
                 + std::to_string(bound_r) + ", fwd |grad r| slope "
                 + std::to_string(go.grad_r.fit.slope) + " <= " + std::to_string(bound_g)
                 + ", bwd slopes " + std::to_string(go.r_l2_bwd.fit.slope) + "/"
                 + std::to_string(go.grad_r_bwd.fit.slope) + ", support violation "
                 + std::to_string(go.support_violation);
    return res;
}

/// Criterion 5: ray-extraction oracle agreement.
inline CriterionResult criterion5(const ExperimentConfig& cfg, double noise_floor) {
    CriterionResult res{5, "ray-extraction oracle", false, ""};
    const Grid g = cfg.grid();
    const StabilityFamily fam = stability_family(cfg, g);
    const CoefficientPair c1 = reduce_to_em(family_member(fam, 0.1));
    const CoefficientPair c2 = reduce_to_em(fam.base);

    const ExtractionSweep sweep =
        extraction_sweep(cfg, c1, c2, cfg.go_lambdas, cfg.fan_directions, cfg.offsets);
    bool monotone = true;
    std::string meds;
    for (size_t i = 0; i < sweep.median_err.size(); ++i) {
        if (i > 0 && sweep.median_err[i] >= sweep.median_err[i - 1]) monotone = false;
        meds += std::to_string(sweep.median_err[i]) + " ";
    }

    // equal-coefficient diagonal at the recovery frequency
    const Domain dom = cfg.domain();
    auto cls = std::make_shared<Classification>(classify_nodes(dom, g));
    RayExtractionConfig rc;
    rc.alpha = cfg.alpha;
    rc.kernel_radius = cfg.kernel_radius;
    rc.bump_scale = cfg.bump_scale;
    rc.M = cfg.M;
    RayExtractor exd(c1, c1, dom, cls, g, rc);
    std::vector<double> diag;
    for (int q = 0; q < cfg.fan_directions; ++q) {
        const Direction dir = fan_direction(2.0 * kPi * q / cfg.fan_directions);
        for (int m = 0; m < cfg.offsets; ++m) {
            const double z = -cfg.offset_radius + 2.0 * cfg.offset_radius * (m + 0.5) / cfg.offsets;
            diag.push_back(std::abs(exd.full_line_sample(dir, z, cfg.lambda_recovery).extracted));
        }
    }
    const double med_diag = median(diag);
    const bool diag_ok = med_diag <= 10.0 * std::max(noise_floor, 1e-300);
    res.pass = monotone && diag_ok;
    res.detail = "medians per lambda: " + meds + "| monotone " + (monotone ? "yes" : "NO")
                 + ", diagonal median " + std::to_string(med_diag) + " vs 10x floor "
                 + std::to_string(10.0 * noise_floor);
    return res;
}

/// Criterion 6: Fourier machinery (slices, dense oracle, gradient annihilation).
inline CriterionResult criterion6(const ExperimentConfig& cfg) {
    CriterionResult res{6, "Fourier slice machinery", false, ""};
    const Domain dom = cfg.domain();
    const Grid g = cfg.grid();
    // smooth synthetic vector field supported inside Omega
    const VectorField A = bump_vector_field(g, {0.03, -0.02}, cfg.family_support, 0.5, -0.35);

    const int nq = 8, nm = 64;
    double zf_rel = 0, dense_rel = 0;
    for (int q = 0; q < nq; ++q) {
        const double theta = 2.0 * kPi * q / nq;
        RayLine line;
        line.omega = fan_direction(theta);
        for (int m = 0; m < nm; ++m) {
            const double z = -cfg.offset_radius + 2.0 * cfg.offset_radius * (m + 0.5) / nm;
            line.offsets.push_back(z);
            line.values.push_back(line_quadrature(A, line.omega, z * line.omega.perp()));
        }
        ScalarField wa(g);
        for (int n = 0; n < g.num_nodes(); ++n)
            wa.v[n] = line.omega.omega.x * A.a1.v[n] + line.omega.omega.y * A.a2.v[n];
        const Complex total = dense_fourier(wa, {0, 0});
        zf_rel = std::max(zf_rel,
                          std::abs(fourier_slice_value(line, 0.0) - total)
                              / std::max(std::abs(total), 1e-30));
        double ref_peak = 0;
        for (double rho : {2.0, 5.0, 8.0}) {
            const Vec2 xi{rho * std::cos(theta), rho * std::sin(theta)};
            ref_peak = std::max(ref_peak, std::abs(dense_fourier(wa, xi)));
        }
        for (double rho : {2.0, 5.0, 8.0}) {
            const Vec2 xi{rho * std::cos(theta), rho * std::sin(theta)};
            const Complex ref = dense_fourier(wa, xi);
            const Complex got = fourier_slice_value(line, rho);
            dense_rel = std::max(dense_rel, std::abs(got - ref) / std::max(ref_peak, 1e-30));
        }
    }

    // gradient annihilation
    ScalarField chi = ScalarField::sample(g, [&](Vec2 p) {
        return Complex{0.4 * bump_profile_r2((p.x * p.x + p.y * p.y)
                                             / (cfg.family_support * cfg.family_support)),
                       0};
    });
    const VectorField gchi = gradient(chi);
    std::vector<double> angles(nq);
    std::vector<RayLine> glines(nq);
    for (int q = 0; q < nq; ++q) {
        angles[q] = 2.0 * kPi * q / nq;
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
    for (double rho : radii) mass = std::max(mass, std::abs(dense_fourier(gchi.a1, {rho, 0})));
    const double leak_rel = leak / std::max(mass, 1e-30);

    res.pass = zf_rel <= 1e-6 && dense_rel <= 1e-3 && leak_rel <= 1e-2;
    res.detail = "zero-frequency rel " + std::to_string(zf_rel) + ", dense oracle rel "
                 + std::to_string(dense_rel) + ", gradient leakage " + std::to_string(leak_rel);
    return res;
}

/// Criterion 7: Hodge + Carleman + gauge invariance of the DN surrogate.
inline CriterionResult criterion7(const ExperimentConfig& cfg) {
    CriterionResult res{7, "Hodge, Carleman, gauge invariance", false, ""};
    const Domain dom = cfg.domain();
    const Grid g = cfg.grid();
    auto cls = std::make_shared<Classification>(classify_nodes(dom, g));
    const Grid win = g.window(cls->iw0, cls->jw0, cls->iw1, cls->jw1);

    // Hodge kills gradients to O(h)
    ScalarField chi(win);
    for (int j = 0; j < win.ny; ++j)
        for (int i = 0; i < win.nx; ++i) {
            const Vec2 p = win.point(i, j);
            chi.at(i, j) = bump_profile_r2((p.x * p.x + p.y * p.y) / 0.04);
        }
    const VectorField gchi = gradient(chi);
    const HodgeSplit hs = hodge_decompose(gchi);
    const double kill = hs.vprime_l2 / l2_norm(gchi);
    bool ok = kill <= 10.0 * win.h;
    std::string det = "gradient kill " + std::to_string(kill) + " (O(h) bound "
                      + std::to_string(10.0 * win.h) + "); ";

    // Carleman over the 50-function family
    const CarlemanWeight w =
        CarlemanWeight::make(dom, win, cfg.carleman_beta, cfg.carleman_x0_factor);
    const auto fam = carleman_test_family(win, cfg.carleman_family, cfg.seed);
    const double g0 = carleman_find_gamma0(w, fam, cfg.gamma_lo, cfg.gamma_hi);
    double worst = 0;
    for (int s = 0; s < 17; ++s) {
        const double gp = g0 * std::pow(4.0, s / 16.0);
        for (const auto& u : fam) worst = std::max(worst, carleman_verify(w, u, gp).ratio);
    }
    ok = ok && worst <= 1.0;
    det += "carleman gamma0 " + std::to_string(g0) + ", worst ratio on [g0,4g0] "
           + std::to_string(worst) + "; ";

    // gauge invariance of the DN-norm surrogate (2% agreement)
    const StabilityFamily sf = stability_family(cfg, g);
    const VectorField V1 = family_member(sf, 0.2);
    const CoefficientPair c1 = reduce_to_em(V1), c2 = reduce_to_em(sf.base);
    const GaugeNormalized gn = gauge_normalize(c1, c2);
    const auto probes = make_probe_basis(cls, g, cfg.boundary_modes, cfg.time_modes,
                                         cfg.ramp_fraction);
    const double dn_plain =
        dn_norm_estimate(make_n_op(c1, cls, g), make_n_op(c2, cls, g), probes).value;
    const double dn_gauge =
        dn_norm_estimate(make_n_op(gn.c1, cls, g), make_n_op(gn.c2, cls, g), probes).value;
    const double gauge_rel = std::abs(dn_plain - dn_gauge) / std::max(dn_plain, 1e-300);
    ok = ok && gauge_rel <= 0.02;
    det += "gauge dn agreement " + std::to_string(gauge_rel) + " (<= 0.02)";

    res.pass = ok;
    res.detail = det;
    return res;
}

/// Criterion 8: headline Hoelder stability fits.
inline CriterionResult criterion8(const ExperimentConfig& cfg, StabilityReport* out = nullptr) {
    CriterionResult res{8, "Hoelder stability fits", false, ""};
    const StabilityReport rep = run_stability(cfg);
    if (out) *out = rep;
    const double kappa = rep.kappa_fit.slope, mu = rep.mu_fit.slope;
    bool links_ok = true;
    double cmax = 0;
    for (const auto& row : rep.rows)
        for (const auto& l : row.chain.links) {
            if (!std::isfinite(l.ratio)) links_ok = false;
            cmax = std::max(cmax, l.ratio);
        }
    // every link reported with ratio <= the fitted (max observed) constant
    res.pass = rep.fits_valid && kappa > 0.0 && kappa < 1.0 && rep.kappa_fit.r2 >= 0.9
               && mu > 0.0 && mu <= 1.0 && links_ok;
    res.detail = "kappa " + std::to_string(kappa) + " (R2 " + std::to_string(rep.kappa_fit.r2)
                 + "), mu " + std::to_string(mu) + " (R2 " + std::to_string(rep.mu_fit.r2)
                 + "), max link constant " + std::to_string(cmax)
                 + ", reference slope 1/2 plotted";
    return res;
}

/// Criterion 9: bit-identical reports for identical config + seed.
inline CriterionResult criterion9(const ExperimentConfig& cfg) {
    CriterionResult res{9, "reproducibility", false, ""};
    ExperimentConfig small = cfg;
    small.eps_sweep = {0.4, 0.2, 0.1, 0.05};
    small.recovery_fan = 4;
    small.recovery_offsets = 8;
    const std::string r1 = stability_report_json(run_stability(small)).dump();
    const std::string r2 = stability_report_json(run_stability(small)).dump();
    res.pass = r1 == r2;
    res.detail = "report hashes " + hash_hex(r1) + " / " + hash_hex(r2);
    return res;
}

}  // namespace acceptance
}  // namespace convwave
