#pragma once

#include <nlohmann/json.hpp>

#include "convwave/grid.hpp"

namespace convwave {

using Json = nlohmann::json;

/// Full experiment configuration; defaults embedded, JSON round-trip, validated
/// before any run. The config hash stamps every report row.
struct ExperimentConfig {
    // domain / discretization
    std::string shape = "square";
    double omega_half_width = 0.3;
    double box_half_width = 1.0;
    double rho = 0.15;
    int nx = 121;
    double T = 1.5;
    double cfl_safety = 0.9;

    // admissibility
    double M = 1.9;

    // mollifier
    double alpha = 0.25;
    double kernel_radius = 0.3;
    std::vector<double> mollifier_lambdas{4, 8, 16, 32, 64};
    int mollifier_nx = 161;

    // geometric-optics rate study
    std::vector<double> go_lambdas{5, 10, 20, 40};
    double go_angle = kPi / 4.0;
    double go_band_center = 0.56;
    double go_band_width = 0.10;
    double go_band_transverse = 0.50;

    // ray extraction / recovery
    int fan_directions = 32;
    int offsets = 16;
    double offset_radius = 0.375;
    double bump_scale = 0.07;
    double lambda_recovery = 20.0;
    double beta_exponent = 0.2;
    int radial_nodes = 16;
    double radial_max = 8.0;
    int recovery_fan = 16;
    int recovery_offsets = 24;

    // dn-norm surrogate
    int boundary_modes = 3;
    int time_modes = 2;
    double ramp_fraction = 0.3;

    // stability experiment family: V2 = base, V1 = base + eps W
    std::vector<double> eps_sweep{0.4, 0.2, 0.1, 0.05};
    double family_support = 0.24;
    double base_amp1 = 0.13, base_amp2 = -0.08;
    double w_amp1 = 0.23, w_amp2 = 0.15;

    // carleman
    double carleman_beta = 1.0;
    double carleman_x0_factor = 1.5;
    double gamma_lo = 0.1, gamma_hi = 50.0;
    int carleman_family = 50;

    std::uint64_t seed = 20250810;
    std::string out_dir = "out";

    Json to_json() const {
        return Json{
            {"domain", {{"shape", shape},
                        {"omega_half_width", omega_half_width},
                        {"box_half_width", box_half_width},
                        {"rho", rho}}},
            {"grid", {{"nx", nx}, {"T", T}, {"cfl_safety", cfl_safety}}},
            {"admissibility", {{"M", M}}},
            {"mollifier", {{"alpha", alpha},
                           {"kernel_radius", kernel_radius},
                           {"lambda_sweep", mollifier_lambdas},
                           {"nx", mollifier_nx}}},
            {"go", {{"lambda_sweep", go_lambdas},
                    {"angle", go_angle},
                    {"band_center", go_band_center},
                    {"band_width", go_band_width},
                    {"band_transverse", go_band_transverse}}},
            {"ray", {{"fan_directions", fan_directions},
                     {"offsets", offsets},
                     {"offset_radius", offset_radius},
                     {"bump_scale", bump_scale},
                     {"lambda_recovery", lambda_recovery},
                     {"beta_exponent", beta_exponent},
                     {"radial_nodes", radial_nodes},
                     {"radial_max", radial_max},
                     {"recovery_fan", recovery_fan},
                     {"recovery_offsets", recovery_offsets}}},
            {"dn_norm", {{"boundary_modes", boundary_modes},
                         {"time_modes", time_modes},
                         {"ramp_fraction", ramp_fraction}}},
            {"stability", {{"eps_sweep", eps_sweep},
                           {"family_support", family_support},
                           {"base_amp", {base_amp1, base_amp2}},
                           {"w_amp", {w_amp1, w_amp2}}}},
            {"carleman", {{"beta", carleman_beta},
                          {"x0_factor", carleman_x0_factor},
                          {"gamma_lo", gamma_lo},
                          {"gamma_hi", gamma_hi},
                          {"family_size", carleman_family}}},
            {"seed", seed},
            {"out_dir", out_dir}};
    }

    static ExperimentConfig from_json(const Json& j) {
        ExperimentConfig c;
        auto get = [&](const char* sec, const char* key, auto& dst) {
            if (j.contains(sec) && j[sec].contains(key)) dst = j[sec][key].get<std::decay_t<decltype(dst)>>();
        };
        get("domain", "shape", c.shape);
        get("domain", "omega_half_width", c.omega_half_width);
        get("domain", "box_half_width", c.box_half_width);
        get("domain", "rho", c.rho);
        get("grid", "nx", c.nx);
        get("grid", "T", c.T);
        get("grid", "cfl_safety", c.cfl_safety);
        get("admissibility", "M", c.M);
        get("mollifier", "alpha", c.alpha);
        get("mollifier", "kernel_radius", c.kernel_radius);
        get("mollifier", "lambda_sweep", c.mollifier_lambdas);
        get("mollifier", "nx", c.mollifier_nx);
        get("go", "lambda_sweep", c.go_lambdas);
        get("go", "angle", c.go_angle);
        get("go", "band_center", c.go_band_center);
        get("go", "band_width", c.go_band_width);
        get("go", "band_transverse", c.go_band_transverse);
        get("ray", "fan_directions", c.fan_directions);
        get("ray", "offsets", c.offsets);
        get("ray", "offset_radius", c.offset_radius);
        get("ray", "bump_scale", c.bump_scale);
        get("ray", "lambda_recovery", c.lambda_recovery);
        get("ray", "beta_exponent", c.beta_exponent);
        get("ray", "radial_nodes", c.radial_nodes);
        get("ray", "radial_max", c.radial_max);
        get("ray", "recovery_fan", c.recovery_fan);
        get("ray", "recovery_offsets", c.recovery_offsets);
        get("dn_norm", "boundary_modes", c.boundary_modes);
        get("dn_norm", "time_modes", c.time_modes);
        get("dn_norm", "ramp_fraction", c.ramp_fraction);
        get("stability", "eps_sweep", c.eps_sweep);
        get("stability", "family_support", c.family_support);
        if (j.contains("stability") && j["stability"].contains("base_amp")) {
            c.base_amp1 = j["stability"]["base_amp"][0].get<double>();
            c.base_amp2 = j["stability"]["base_amp"][1].get<double>();
        }
        if (j.contains("stability") && j["stability"].contains("w_amp")) {
            c.w_amp1 = j["stability"]["w_amp"][0].get<double>();
            c.w_amp2 = j["stability"]["w_amp"][1].get<double>();
        }
        get("carleman", "beta", c.carleman_beta);
        get("carleman", "x0_factor", c.carleman_x0_factor);
        get("carleman", "gamma_lo", c.gamma_lo);
        get("carleman", "gamma_hi", c.gamma_hi);
        get("carleman", "family_size", c.carleman_family);
        if (j.contains("seed")) c.seed = j["seed"].get<std::uint64_t>();
        if (j.contains("out_dir")) c.out_dir = j["out_dir"].get<std::string>();
        return c;
    }

    Domain domain() const {
        Domain d;
        d.shape = shape == "disk" ? Domain::Shape::Disk : Domain::Shape::Square;
        d.omega_half_width = omega_half_width;
        d.box_half_width = box_half_width;
        d.rho = rho;
        return d;
    }

    Grid grid() const { return Grid::make(domain(), nx, T, cfl_safety); }

    std::string hash() const { return hash_hex(to_json().dump()); }

    /// All invariants checked up front; throws ConfigError with the full list.
    void validate() const {
        std::string errs;
        auto fail = [&](const std::string& m) { errs += "  - " + m + "\n"; };
        const Domain d = domain();
        try {
            d.validate();
        } catch (const ConfigError& e) {
            fail(e.what());
        }
        if (T <= d.diam_omega() + 4.0 * rho)
            fail("T must exceed diam(Omega) + 4 rho = "
                 + std::to_string(d.diam_omega() + 4.0 * rho));
        if (cfl_safety <= 0.0 || cfl_safety > 0.9) fail("cfl_safety must lie in (0, 0.9]");
        if (M * T >= 3.0)
            fail("branch safety requires M T < 3 (got " + std::to_string(M * T) + ")");
        if (!(alpha > 0.0 && alpha <= 0.5)) fail("alpha must lie in (0, 1/2]");
        const double h = 2.0 * box_half_width / (nx - 1);
        double lam_max = 0;
        for (double l : go_lambdas) lam_max = std::max(lam_max, l);
        lam_max = std::max(lam_max, lambda_recovery);
        if (lam_max * h > 0.8)
            fail("lambda_max h = " + std::to_string(lam_max * h)
                 + " exceeds 0.8 (aliasing guard)");
        if (fan_directions < 4) fail("fan_directions must be >= 4");
        if (offsets < 2) fail("offsets must be >= 2");
        if (eps_sweep.size() < 4) fail("eps sweep needs >= 4 points for fits");
        if (!errs.empty()) throw ConfigError("invalid config:\n" + errs);
    }
};

}  // namespace convwave
