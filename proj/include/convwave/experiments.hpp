#pragma once

#include <filesystem>
#include <fstream>

#include "convwave/chain.hpp"
#include "convwave/config.hpp"
#include "convwave/probes.hpp"
#include "convwave/ray.hpp"
#include "convwave/svg.hpp"

namespace convwave {

// ---- coefficient families ----------------------------------------------------

/// Smooth radial bump field with the given component amplitudes, supported in
/// |x - c| < R (compactly inside Omega for the stability families).
inline VectorField bump_vector_field(const Grid& g, Vec2 c, double R, double amp1, double amp2) {
    return VectorField::sample(g, [&](Vec2 p) {
        const double r2 = ((p.x - c.x) * (p.x - c.x) + (p.y - c.y) * (p.y - c.y)) / (R * R);
        const double b = bump_profile_r2(r2);
        return Vec2{amp1 * b, amp2 * b};
    });
}

/// Lipschitz (cone-type) field, W^{1,inf} but not C^1: the mollifier rate class.
inline VectorField cone_vector_field(const Grid& g, Vec2 c, double R, double amp1, double amp2) {
    return VectorField::sample(g, [&](Vec2 p) {
        const double r = std::sqrt((p.x - c.x) * (p.x - c.x) + (p.y - c.y) * (p.y - c.y));
        const double b = std::max(0.0, 1.0 - r / R);
        return Vec2{amp1 * b, amp2 * b};
    });
}

struct StabilityFamily {
    VectorField base;  // V2
    VectorField W;     // contrast direction
};

inline StabilityFamily stability_family(const ExperimentConfig& cfg, const Grid& g) {
    StabilityFamily f;
    f.base = bump_vector_field(g, {0.0, 0.0}, cfg.family_support, cfg.base_amp1, cfg.base_amp2);
    f.W = bump_vector_field(g, {0.02, -0.015}, cfg.family_support * 0.95, cfg.w_amp1, cfg.w_amp2);
    return f;
}

inline VectorField family_member(const StabilityFamily& f, double eps) {
    VectorField V = f.base;
    for (size_t n = 0; n < V.a1.v.size(); ++n) {
        V.a1.v[n] += eps * f.W.a1.v[n];
        V.a2.v[n] += eps * f.W.a2.v[n];
    }
    return V;
}

/// Lipschitz pair for the GO-rate study (cone fields, admissible at M).
inline VectorField go_rate_field(const ExperimentConfig& cfg, const Grid& g) {
    VectorField V = cone_vector_field(g, {0.0, 0.0}, 0.8 * cfg.family_support, 0.30, 0.0);
    const VectorField V2 = cone_vector_field(g, {0.05, -0.04}, 0.7 * cfg.family_support, 0.0, -0.22);
    for (size_t n = 0; n < V.a1.v.size(); ++n) {
        V.a1.v[n] += V2.a1.v[n];
        V.a2.v[n] += V2.a2.v[n];
    }
    return V;
}

// ---- rate studies --------------------------------------------------------------

struct RateRow {
    double lambda = 0.0;
    double value = 0.0;
};

struct RateStudy {
    std::string name;
    std::vector<RateRow> rows;
    LineFit fit;          // log value vs log lambda
    double target = 0.0;  // reference slope
};

/// Mollifier rates on a Lipschitz cone: sup|f - f#| ~ lambda^{-alpha} and
/// sup of second differences ~ lambda^{+alpha}.
inline std::pair<RateStudy, RateStudy> mollifier_rate_study(const ExperimentConfig& cfg) {
    Grid g;
    g.nx = g.ny = cfg.mollifier_nx;
    g.h = 2.0 / (cfg.mollifier_nx - 1);
    g.x0 = g.y0 = -1.0;
    ScalarField f = ScalarField::sample(g, [](Vec2 p) {
        return Complex{std::max(0.0, 0.75 - p.norm()), 0.0};
    });
    RateStudy err, d2;
    err.name = "mollifier_sup_error";
    err.target = -cfg.alpha;
    d2.name = "mollifier_second_diff";
    d2.target = cfg.alpha;
    std::vector<double> lams, evals, dvals;
    for (double lam : cfg.mollifier_lambdas) {
        MollifierConfig mc;
        mc.lambda = lam;
        mc.alpha = cfg.alpha;
        mc.kernel_radius = cfg.kernel_radius;
        const ScalarField fs = mollify(f, mc);
        double sup = 0;
        for (size_t n = 0; n < f.v.size(); ++n) sup = std::max(sup, std::abs(f.v[n] - fs.v[n]));
        const double dd = diff_seminorm_sup(fs, 2);
        err.rows.push_back({lam, sup});
        d2.rows.push_back({lam, dd});
        lams.push_back(lam);
        evals.push_back(sup);
        dvals.push_back(dd);
    }
    err.fit = fit_loglog(lams, evals);
    d2.fit = fit_loglog(lams, dvals);
    return {err, d2};
}

struct GoRateResult {
    RateStudy r_l2, grad_r;          // forward sweep
    RateStudy r_l2_bwd, grad_r_bwd;  // backward sweep
    double support_violation = 0.0;  // max |leading term| on Omega at t in {0, T}
};

inline GoRateResult go_rate_study(const ExperimentConfig& cfg) {
    const Domain dom = cfg.domain();
    const Grid g = cfg.grid();
    auto cls = std::make_shared<Classification>(classify_nodes(dom, g));
    const VectorField V = go_rate_field(cfg, g);
    check_admissible(V, cfg.M);
    const CoefficientPair em = reduce_to_em(V);

    const Direction dir(cfg.go_angle);
    const BumpProfile band =
        BumpProfile::slab(dir, cfg.go_band_center, cfg.go_band_width, cfg.go_band_transverse);

    GoRateResult out;
    out.r_l2.name = "go_residual_l2";
    out.r_l2.target = -cfg.alpha;
    out.grad_r.name = "go_residual_grad";
    out.grad_r.target = 1.0 - cfg.alpha;
    out.r_l2_bwd.name = "go_residual_l2_backward";
    out.r_l2_bwd.target = -cfg.alpha;
    out.grad_r_bwd.name = "go_residual_grad_backward";
    out.grad_r_bwd.target = 1.0 - cfg.alpha;

    std::vector<double> lams, rf, gf, rb, gb;
    for (double lam : cfg.go_lambdas) {
        MollifierConfig mc;
        mc.lambda = lam;
        mc.alpha = cfg.alpha;
        mc.kernel_radius = cfg.kernel_radius;
        const VectorField As = mollify(em.A, mc);

        GoAnsatz an;
        an.omega = dir;
        an.lambda = lam;
        an.bump = band;
        an.sign = SolveDirection::Forward;
        if (!ansatz_clears_omega(an, cls, g))
            throw ConfigError("go_rate_study: transported band touches Omega at t in {0,T}");
        const GoSolution fwd = go_solution_with_residual(em, As, an, cls, g);

        GoAnsatz anb = an;
        anb.sign = SolveDirection::Backward;
        const GoSolution bwd = go_solution_with_residual(em, As, anb, cls, g);

        // support invariant, asserted exactly on the window nodes
        {
            const Grid win = g.window(cls->iw0, cls->jw0, cls->iw1, cls->jw1);
            const SpaceTimeField lead = go_leading_term(an, As, win);
            out.support_violation = std::max(out.support_violation, lead.max_abs_snapshot(0));
            out.support_violation =
                std::max(out.support_violation, lead.max_abs_snapshot(win.nt));
        }

        out.r_l2.rows.push_back({lam, fwd.r_l2});
        out.grad_r.rows.push_back({lam, fwd.grad_r_l2});
        out.r_l2_bwd.rows.push_back({lam, bwd.r_l2});
        out.grad_r_bwd.rows.push_back({lam, bwd.grad_r_l2});
        lams.push_back(lam);
        rf.push_back(fwd.r_l2);
        gf.push_back(fwd.grad_r_l2);
        rb.push_back(bwd.r_l2);
        gb.push_back(bwd.grad_r_l2);
    }
    out.r_l2.fit = fit_loglog(lams, rf);
    out.grad_r.fit = fit_loglog(lams, gf);
    out.r_l2_bwd.fit = fit_loglog(lams, rb);
    out.grad_r_bwd.fit = fit_loglog(lams, gb);
    return out;
}

// ---- ray extraction sweeps -----------------------------------------------------

struct ExtractionSweep {
    std::vector<double> lambdas;
    std::vector<double> median_err;       // median |extracted - oracle| per lambda
    std::vector<std::vector<RaySample>> samples;  // per lambda
    double beta_env = 0.0;                // fitted error decay exponent
    LineFit err_fit;
};

/// Fan x offset sample set for the magnetic ray transform oracle comparison.
inline ExtractionSweep extraction_sweep(const ExperimentConfig& cfg, const CoefficientPair& c1,
                                        const CoefficientPair& c2,
                                        const std::vector<double>& lambdas, int n_dir, int n_off) {
    const Domain dom = cfg.domain();
    const Grid g = cfg.grid();
    auto cls = std::make_shared<Classification>(classify_nodes(dom, g));
    RayExtractionConfig rc;
    rc.alpha = cfg.alpha;
    rc.kernel_radius = cfg.kernel_radius;
    rc.bump_scale = cfg.bump_scale;
    rc.M = cfg.M;
    RayExtractor ex(c1, c2, dom, cls, g, rc);

    ExtractionSweep out;
    out.lambdas = lambdas;
    for (double lam : lambdas) {
        std::vector<RaySample> rows;
        std::vector<double> errs;
        for (int q = 0; q < n_dir; ++q) {
            const Direction dir = fan_direction(2.0 * kPi * q / n_dir);
            for (int m = 0; m < n_off; ++m) {
                const double z = -cfg.offset_radius
                                 + 2.0 * cfg.offset_radius * (m + 0.5) / n_off;
                RaySample s = ex.full_line_sample(dir, z, lam);
                errs.push_back(std::abs(s.extracted - s.oracle));
                rows.push_back(std::move(s));
            }
        }
        out.median_err.push_back(median(errs));
        out.samples.push_back(std::move(rows));
    }
    if (lambdas.size() >= 2) {
        out.err_fit = fit_loglog(lambdas, out.median_err);
        out.beta_env = -out.err_fit.slope;
    }
    return out;
}

// ---- recovery of H^-1 norms ----------------------------------------------------

struct RecoveryResult {
    double dalpha_hminus1 = 0.0;
    double q_hminus1 = 0.0;
    BandNormResult sigma_band, q_band;
};

/// Magnetic-field and electric-potential recovery from DN-extracted ray data on
/// a polar xi-grid; tails bounded by the true L2 norms (provenance: ground truth).
inline RecoveryResult recover_norms(const ExperimentConfig& cfg, const CoefficientPair& c1,
                                    const CoefficientPair& c2) {
    const Domain dom = cfg.domain();
    const Grid g = cfg.grid();
    auto cls = std::make_shared<Classification>(classify_nodes(dom, g));
    RayExtractionConfig rc;
    rc.alpha = cfg.alpha;
    rc.kernel_radius = cfg.kernel_radius;
    rc.bump_scale = cfg.bump_scale;
    rc.M = cfg.M;

    const int nq = cfg.recovery_fan, nm = cfg.recovery_offsets;
    std::vector<double> angles(nq);
    for (int q = 0; q < nq; ++q) angles[q] = 2.0 * kPi * q / nq;
    std::vector<double> radii(cfg.radial_nodes);
    for (int r = 0; r < cfg.radial_nodes; ++r)
        radii[r] = (r + 0.5) * cfg.radial_max / cfg.radial_nodes;

    RecoveryResult out;
    const double lam = cfg.lambda_recovery;

    {  // magnetic: rays of omega.(A1 - A2)
        RayExtractor ex(c1, c2, dom, cls, g, rc);
        std::vector<RayLine> lines(nq);
        for (int q = 0; q < nq; ++q) {
            lines[q].omega = fan_direction(angles[q]);
            for (int m = 0; m < nm; ++m) {
                const double z = -cfg.offset_radius + 2.0 * cfg.offset_radius * (m + 0.5) / nm;
                const RaySample s = ex.full_line_sample(lines[q].omega, z, lam);
                lines[q].offsets.push_back(z);
                lines[q].values.push_back(s.extracted);
            }
        }
        const FourierSliceSet sig = assemble_sigma_hat(lines, angles, radii);
        VectorField Ad(g);
        for (size_t n = 0; n < Ad.a1.v.size(); ++n) {
            Ad.a1.v[n] = c1.A.a1.v[n] - c2.A.a1.v[n];
            Ad.a2.v[n] = c1.A.a2.v[n] - c2.A.a2.v[n];
        }
        const double sigma_l2 = l2_norm(curl(Ad));
        out.sigma_band = hminus1_band_norm(sig, std::min(cfg.radial_max, std::pow(lam, cfg.beta_exponent / 2.0)),
                                           sigma_l2, lam, cfg.beta_exponent);
        out.dalpha_hminus1 = out.sigma_band.value;
    }

    {  // electric: gauge-normalize first, then scalar rays of q2 - q1
        const GaugeNormalized gn = gauge_normalize(c1, c2);
        RayExtractor ex(gn.c1, gn.c2, dom, cls, g, rc);
        std::vector<RayLine> lines(nq);
        for (int q = 0; q < nq; ++q) {
            lines[q].omega = fan_direction(angles[q]);
            for (int m = 0; m < nm; ++m) {
                const double z = -cfg.offset_radius + 2.0 * cfg.offset_radius * (m + 0.5) / nm;
                const RaySample s = ex.q_full_line_sample(lines[q].omega, z, lam);
                lines[q].offsets.push_back(z);
                lines[q].values.push_back(s.extracted);
            }
        }
        const FourierSliceSet qh = recover_q_hat(lines, angles, radii);
        ScalarField qd(g);
        for (size_t n = 0; n < qd.v.size(); ++n) qd.v[n] = c2.q.v[n] - c1.q.v[n];
        const double q_l2 = l2_norm(qd);
        out.q_band = hminus1_band_norm(qh, std::min(cfg.radial_max, std::pow(lam, cfg.beta_exponent / 2.0)),
                                       q_l2, lam, cfg.beta_exponent);
        out.q_hminus1 = out.q_band.value;
    }
    return out;
}

// ---- the headline stability experiment -----------------------------------------

struct StabilityRow {
    double eps = 0.0;
    double v_diff_l2 = 0.0;
    double dn_norm = 0.0;
    double dalpha_hminus1 = 0.0;
    double q_hminus1 = 0.0;
    StabilityChainReport chain;
};

struct StabilityReport {
    std::vector<StabilityRow> rows;
    LineFit kappa_fit;    // log |V1-V2| vs log dn
    LineFit mu_fit;       // log (|dalpha| + |q|)_{H^-1} vs log dn
    LineFit kappa1_fit;   // q_L2 vs dn  (via chain link lhs)
    LineFit kappa2_fit;   // |V'| vs dn
    LineFit kappa3_fit;   // |d_nu phi|_{Gamma0} vs dn
    bool fits_valid = false;
    std::string config_hash;
    std::uint64_t seed = 0;
};

inline StabilityReport run_stability(const ExperimentConfig& cfg) {
    cfg.validate();
    const Domain dom = cfg.domain();
    const Grid g = cfg.grid();
    auto cls = std::make_shared<Classification>(classify_nodes(dom, g));
    const StabilityFamily fam = stability_family(cfg, g);
    const Grid win = g.window(cls->iw0, cls->jw0, cls->iw1, cls->jw1);
    const Vec2 x0{dom.omega_center.x - cfg.carleman_x0_factor * dom.box_half_width,
                  dom.omega_center.y};

    const auto probes = make_probe_basis(cls, g, cfg.boundary_modes, cfg.time_modes,
                                         cfg.ramp_fraction);

    StabilityReport rep;
    rep.config_hash = cfg.hash();
    rep.seed = cfg.seed;

    for (double eps : cfg.eps_sweep) {
        StabilityRow row;
        row.eps = eps;
        const VectorField V1 = family_member(fam, eps);
        const VectorField& V2 = fam.base;
        check_admissible(V1, cfg.M);
        check_admissible(V2, cfg.M);

        const DnOperator l1 = make_lambda_op(V1, cls, g);
        const DnOperator l2 = make_lambda_op(V2, cls, g);
        row.dn_norm = dn_norm_estimate(l1, l2, probes).value;

        const CoefficientPair c1 = reduce_to_em(V1), c2 = reduce_to_em(V2);
        const RecoveryResult rec = recover_norms(cfg, c1, c2);
        row.dalpha_hminus1 = rec.dalpha_hminus1;
        row.q_hminus1 = rec.q_hminus1;

        // window restrictions for the chain
        VectorField V1w(win), V2w(win);
        for (int j = 0; j < win.ny; ++j)
            for (int i = 0; i < win.nx; ++i) {
                const int bn = g.idx(cls->iw0 + i, cls->jw0 + j);
                V1w.a1.at(i, j) = V1.a1.v[bn];
                V1w.a2.at(i, j) = V1.a2.v[bn];
                V2w.a1.at(i, j) = V2.a1.v[bn];
                V2w.a2.at(i, j) = V2.a2.v[bn];
            }
        RecoveredNorms rn;
        rn.dn_norm = row.dn_norm;
        rn.q_hminus1 = row.q_hminus1;
        rn.dalpha_hminus1 = row.dalpha_hminus1;
        row.chain = stability_chain(V1w, V2w, rn, x0);
        row.v_diff_l2 = row.chain.v_diff_l2;
        rep.rows.push_back(std::move(row));
    }

    // log-log fits over the sweep (the eps = 0 row, if present, is excluded)
    std::vector<double> dns, vns, recs, q2s, vps, traces;
    for (const auto& r : rep.rows) {
        if (r.dn_norm <= 0 || r.v_diff_l2 <= 0) continue;
        dns.push_back(r.dn_norm);
        vns.push_back(r.v_diff_l2);
        recs.push_back(r.dalpha_hminus1 + r.q_hminus1);
        for (const auto& l : r.chain.links) {
            if (l.name == "interpolation_q_l2") q2s.push_back(std::max(l.lhs, 1e-300));
            if (l.name == "vprime_vs_dn") vps.push_back(std::max(l.lhs, 1e-300));
            if (l.name == "trace_dnu_phi") traces.push_back(std::max(l.lhs, 1e-300));
        }
    }
    if (dns.size() >= 3) {
        rep.kappa_fit = fit_loglog(dns, vns);
        rep.mu_fit = fit_loglog(dns, recs);
        if (q2s.size() == dns.size()) rep.kappa1_fit = fit_loglog(dns, q2s);
        if (vps.size() == dns.size()) rep.kappa2_fit = fit_loglog(dns, vps);
        if (traces.size() == dns.size()) rep.kappa3_fit = fit_loglog(dns, traces);
        rep.fits_valid = true;
    }
    return rep;
}

// ---- report emission ------------------------------------------------------------

inline Json fit_json(const LineFit& f) {
    return Json{{"slope", f.slope}, {"intercept", f.intercept}, {"r2", f.r2}};
}

inline Json stability_report_json(const StabilityReport& rep) {
    Json rows = Json::array();
    for (const auto& r : rep.rows) {
        Json links = Json::array();
        for (const auto& l : r.chain.links)
            links.push_back(Json{{"name", l.name}, {"lhs", l.lhs}, {"rhs", l.rhs},
                                 {"ratio", l.ratio}});
        rows.push_back(Json{{"eps", r.eps},
                            {"v_diff_l2", r.v_diff_l2},
                            {"dn_norm", r.dn_norm},
                            {"dalpha_hminus1", r.dalpha_hminus1},
                            {"q_hminus1", r.q_hminus1},
                            {"vprime_l2", r.chain.vprime_l2},
                            {"grad_phi_l2", r.chain.grad_phi_l2},
                            {"links", links},
                            {"config_hash", rep.config_hash}});
    }
    return Json{
        {"rows", rows},
        {"fits",
         {{"kappa", fit_json(rep.kappa_fit)},
          {"mu", fit_json(rep.mu_fit)},
          {"kappa1", fit_json(rep.kappa1_fit)},
          {"kappa2", fit_json(rep.kappa2_fit)},
          {"kappa3", fit_json(rep.kappa3_fit)},
          {"valid", rep.fits_valid}}},
        {"provenance",
         {{"dn_norm", "probe-basis largest singular value, H1(Sigma)->L2(Sigma)"},
          {"dalpha_hminus1",
           "DN-extracted ray data, polar Fourier slices, band-split tail from the true L2 norm"},
          {"q_hminus1",
           "gauge-normalized DN extraction, band-split tail from the true L2 norm"}}},
        {"footer", "x-axis is the probe-basis operator-norm surrogate; the continuum"
                   " operator norm is not computable"},
        {"config_hash", rep.config_hash},
        {"seed", rep.seed}};
}

inline void write_text(const std::string& path, const std::string& content) {
    std::ofstream os(path, std::ios::binary);
    if (!os) throw std::runtime_error("cannot open " + path);
    os << content;
}

inline void emit_stability_outputs(const StabilityReport& rep, const std::string& out_dir) {
    std::filesystem::create_directories(out_dir);
    write_text(out_dir + "/report.json", stability_report_json(rep).dump(2) + "\n");

    std::string csv = "eps,v_diff_l2,dn_norm,dalpha_hminus1,q_hminus1\n";
    char buf[256];
    for (const auto& r : rep.rows) {
        std::snprintf(buf, sizeof buf, "%.17g,%.17g,%.17g,%.17g,%.17g\n", r.eps, r.v_diff_l2,
                      r.dn_norm, r.dalpha_hminus1, r.q_hminus1);
        csv += buf;
    }
    write_text(out_dir + "/stability_rows.csv", csv);

    if (rep.rows.size() >= 2) {
        LogLogPlot p1;
        p1.title = "coefficient difference vs DN surrogate";
        p1.x_label = "dn_norm";
        p1.y_label = "|V1-V2|_L2";
        for (const auto& r : rep.rows) {
            p1.x.push_back(r.dn_norm);
            p1.y.push_back(r.v_diff_l2);
        }
        p1.fit = rep.kappa_fit;
        p1.write(out_dir + "/fit_kappa.svg");

        LogLogPlot p2;
        p2.title = "recovered H^-1 norms vs DN surrogate";
        p2.x_label = "dn_norm";
        p2.y_label = "|dalpha|+|q| H^-1";
        for (const auto& r : rep.rows) {
            p2.x.push_back(r.dn_norm);
            p2.y.push_back(r.dalpha_hminus1 + r.q_hminus1);
        }
        p2.fit = rep.mu_fit;
        p2.has_reference = true;
        p2.reference_slope = 0.5;  // the square-root benchmark line
        p2.write(out_dir + "/fit_mu.svg");
    }
}

inline void emit_rate_outputs(const std::pair<RateStudy, RateStudy>& moll, const GoRateResult& go,
                              const std::string& out_dir) {
    std::filesystem::create_directories(out_dir);
    std::string csv = "study,lambda,value\n";
    char buf[256];
    auto add = [&](const RateStudy& s) {
        for (const auto& r : s.rows) {
            std::snprintf(buf, sizeof buf, "%s,%.17g,%.17g\n", s.name.c_str(), r.lambda, r.value);
            csv += buf;
        }
    };
    add(moll.first);
    add(moll.second);
    add(go.r_l2);
    add(go.grad_r);
    add(go.r_l2_bwd);
    add(go.grad_r_bwd);
    write_text(out_dir + "/rates.csv", csv);

    auto plot = [&](const RateStudy& s) {
        LogLogPlot p;
        p.title = s.name;
        p.x_label = "lambda";
        p.y_label = s.name;
        for (const auto& r : s.rows) {
            p.x.push_back(r.lambda);
            p.y.push_back(r.value);
        }
        p.fit = s.fit;
        p.has_reference = true;
        p.reference_slope = s.target;
        p.write(out_dir + "/" + s.name + ".svg");
    };
    plot(moll.first);
    plot(moll.second);
    plot(go.r_l2);
    plot(go.grad_r);
    plot(go.r_l2_bwd);
    plot(go.grad_r_bwd);
}

}  // namespace convwave
