// Command-line front end: config-driven verification suites, the stability
// experiment, rate studies, and plot emission.

#include <CLI11.hpp>

#include <fstream>
#include <iostream>

#include "convwave/acceptance.hpp"

using namespace convwave;

namespace {

ExperimentConfig load_config(const std::string& path, std::uint64_t seed_override,
                             const std::string& out_override) {
    ExperimentConfig cfg;
    if (!path.empty()) {
        std::ifstream is(path);
        if (!is) throw ConfigError("cannot open config file " + path);
        Json j;
        is >> j;
        cfg = ExperimentConfig::from_json(j);
    }
    if (seed_override != 0) cfg.seed = seed_override;
    if (!out_override.empty()) cfg.out_dir = out_override;
    return cfg;
}

int run_verify_cmd(const ExperimentConfig& cfg) {
    const auto checks = run_verify_checks(cfg);
    const Json j = checks_json(checks);
    std::filesystem::create_directories(cfg.out_dir);
    write_text(cfg.out_dir + "/verify.json", j.dump(2) + "\n");
    int failures = 0;
    for (const auto& c : checks) {
        std::printf("[%s] %-45s %s  (value %.6g, threshold %.6g)\n",
                    c.pass ? "PASS" : "FAIL", (c.suite + "/" + c.name).c_str(),
                    c.pass ? "ok" : "FAILED", c.value, c.threshold);
        if (!c.pass) ++failures;
    }
    if (failures) {
        std::printf("verify: %d check(s) failed; first failure: %s\n", failures,
                    j["first_failure"].get<std::string>().c_str());
        return 1;
    }
    std::printf("verify: all %zu checks passed\n", checks.size());
    return 0;
}

int run_stability_cmd(const ExperimentConfig& cfg) {
    const StabilityReport rep = run_stability(cfg);
    emit_stability_outputs(rep, cfg.out_dir);
    std::printf("stability: %zu rows; kappa %.4f (R2 %.4f), mu %.4f (R2 %.4f)\n",
                rep.rows.size(), rep.kappa_fit.slope, rep.kappa_fit.r2, rep.mu_fit.slope,
                rep.mu_fit.r2);
    std::printf("outputs in %s (report.json, stability_rows.csv, fit_*.svg)\n",
                cfg.out_dir.c_str());
    const bool ok = rep.fits_valid && rep.kappa_fit.slope > 0 && rep.kappa_fit.slope < 1
                    && rep.kappa_fit.r2 >= 0.9;
    if (!ok) std::printf("stability: fitted exponent outside (0,1) or fit degenerate\n");
    return ok ? 0 : 1;
}

int run_rates_cmd(const ExperimentConfig& cfg) {
    const auto moll = mollifier_rate_study(cfg);
    const GoRateResult go = go_rate_study(cfg);
    emit_rate_outputs(moll, go, cfg.out_dir);
    auto report = [&](const RateStudy& s, double tol, bool upper_only) {
        const double dev = s.fit.slope - s.target;
        const bool ok = upper_only ? dev <= tol : std::abs(dev) <= tol;
        std::printf("[%s] %-28s slope %+.4f target %+.4f (R2 %.4f)\n", ok ? "PASS" : "FAIL",
                    s.name.c_str(), s.fit.slope, s.target, s.fit.r2);
        return ok;
    };
    bool ok = true;
    ok &= report(moll.first, 0.15, false);
    ok &= report(moll.second, 0.15, false);
    ok &= report(go.r_l2, 0.15, true);
    ok &= report(go.grad_r, 0.15, true);
    ok &= report(go.r_l2_bwd, 0.15, true);
    ok &= report(go.grad_r_bwd, 0.15, true);
    std::printf("rates: outputs in %s (rates.csv, *.svg)\n", cfg.out_dir.c_str());
    return ok ? 0 : 1;
}

int run_plots_cmd(const ExperimentConfig& cfg, const std::string& report_path) {
    std::ifstream is(report_path.empty() ? cfg.out_dir + "/report.json" : report_path);
    if (!is) {
        std::printf("plots: no report found; nothing to do\n");
        return 0;
    }
    Json j;
    is >> j;
    if (!j.contains("rows") || j["rows"].empty()) {
        std::printf("plots: empty report; nothing to do\n");
        return 0;
    }
    LogLogPlot p;
    p.title = "coefficient difference vs DN surrogate";
    p.x_label = "dn_norm";
    p.y_label = "|V1-V2|_L2";
    for (const auto& r : j["rows"]) {
        p.x.push_back(r["dn_norm"].get<double>());
        p.y.push_back(r["v_diff_l2"].get<double>());
    }
    p.fit = fit_loglog(p.x, p.y);
    std::filesystem::create_directories(cfg.out_dir);
    p.write(cfg.out_dir + "/fit_kappa.svg");
    std::printf("plots: wrote %s/fit_kappa.svg\n", cfg.out_dir.c_str());
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"convwave: boundary-data recovery laboratory for convective wave equations"};
    app.require_subcommand(0, 1);

    std::string config_path, out_dir, report_path;
    std::uint64_t seed = 0;
    bool print_config = false;
    app.add_option("--config", config_path, "JSON config file");
    app.add_option("--out", out_dir, "output directory");
    app.add_option("--seed", seed, "seed override");
    app.add_flag("--print-config", print_config, "dump the effective config and exit");

    auto* verify = app.add_subcommand("verify", "run every module property suite");
    auto* stability = app.add_subcommand("stability", "epsilon-sweep Hoelder experiment");
    auto* rates = app.add_subcommand("rates", "mollifier and geometric-optics rate studies");
    auto* plots = app.add_subcommand("plots", "re-emit SVG plots from report.json");
    plots->add_option("--report", report_path, "report.json path");

    CLI11_PARSE(app, argc, argv);

    try {
        const ExperimentConfig cfg = load_config(config_path, seed, out_dir);
        if (print_config) {
            std::cout << cfg.to_json().dump(2) << "\n";
            return 0;
        }
        cfg.validate();
        if (verify->parsed()) return run_verify_cmd(cfg);
        if (stability->parsed()) return run_stability_cmd(cfg);
        if (rates->parsed()) return run_rates_cmd(cfg);
        if (plots->parsed()) return run_plots_cmd(cfg, report_path);
        std::cout << app.help();
        return 0;
    } catch (const ConfigError& e) {
        std::fprintf(stderr, "config error: %s\n", e.what());
        return 2;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    }
}
