// SPDX-License-Identifier: Apache-2.0
//
// grassq: quantization on real and complex Grassmann manifolds
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
// ------------------------------------------------------------------------
//
// Command-line surface. Every subcommand is deterministic given its flags:
// the seed is part of the arguments and is echoed in the output header, and
// Monte Carlo loops use a fixed chunk schedule, so repeated runs produce
// byte-identical output for any worker count (GRASSQ_THREADS).

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "grassq/bounds.hpp"
#include "grassq/codebook.hpp"
#include "grassq/mc.hpp"
#include "grassq/mimo.hpp"
#include "grassq/volume.hpp"

namespace {

constexpr const char* kVersion = "grassq v1";

constexpr int kExitOk = 0;
constexpr int kExitNumerical = 1;
constexpr int kExitUsage = 2;

struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

std::string fmt(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

std::vector<std::string> split_list(const std::string& csv) {
    std::vector<std::string> parts;
    std::stringstream ss(csv);
    for (std::string item; std::getline(ss, item, ',');) parts.push_back(item);
    return parts;
}

std::vector<double> parse_double_grid(const std::string& csv, const std::string& flag) {
    std::vector<double> grid;
    for (const auto& item : split_list(csv)) {
        try {
            std::size_t pos = 0;
            grid.push_back(std::stod(item, &pos));
            if (pos != item.size()) throw std::invalid_argument(item);
        } catch (const std::exception&) {
            throw UsageError(flag + ": bad number '" + item + "'");
        }
    }
    if (grid.empty()) throw UsageError(flag + ": grid must be nonempty");
    for (std::size_t i = 1; i < grid.size(); ++i) {
        if (!(grid[i] > grid[i - 1])) throw UsageError(flag + ": grid must be sorted ascending");
    }
    return grid;
}

std::vector<std::int64_t> parse_int_grid(const std::string& csv, const std::string& flag) {
    std::vector<std::int64_t> grid;
    for (const auto& item : split_list(csv)) {
        try {
            std::size_t pos = 0;
            grid.push_back(std::stoll(item, &pos));
            if (pos != item.size()) throw std::invalid_argument(item);
        } catch (const std::exception&) {
            throw UsageError(flag + ": bad integer '" + item + "'");
        }
    }
    if (grid.empty()) throw UsageError(flag + ": grid must be nonempty");
    for (std::size_t i = 1; i < grid.size(); ++i) {
        if (!(grid[i] > grid[i - 1])) throw UsageError(flag + ": grid must be sorted ascending");
    }
    return grid;
}

// Ordered key=value argument echo for the output header.
struct ArgEcho {
    std::vector<std::pair<std::string, std::string>> items;

    void add(const std::string& k, const std::string& v) { items.emplace_back(k, v); }
    void add(const std::string& k, std::int64_t v) { add(k, std::to_string(v)); }
    void add(const std::string& k, std::uint64_t v) { add(k, std::to_string(v)); }
    void add(const std::string& k, double v) { add(k, fmt(v)); }

    std::string joined() const {
        std::string s;
        for (const auto& [k, v] : items) s += " " + k + "=" + v;
        return s;
    }
};

struct Table {
    std::vector<std::string> columns;
    std::vector<std::vector<std::string>> rows;
};

void emit(const Table& table, const std::string& cmd, const ArgEcho& args,
          const std::string& format, const std::string& out_path) {
    std::ostringstream body;
    if (format == "csv") {
        body << "# " << kVersion << " cmd=" << cmd << args.joined() << "\n";
        for (std::size_t i = 0; i < table.columns.size(); ++i) {
            body << (i ? "," : "") << table.columns[i];
        }
        body << "\n";
        for (const auto& row : table.rows) {
            for (std::size_t i = 0; i < row.size(); ++i) body << (i ? "," : "") << row[i];
            body << "\n";
        }
    } else if (format == "json") {
        nlohmann::ordered_json doc;
        doc["version"] = kVersion;
        doc["cmd"] = cmd;
        nlohmann::ordered_json jargs;
        for (const auto& [k, v] : args.items) jargs[k] = v;
        doc["args"] = jargs;
        nlohmann::ordered_json rows = nlohmann::ordered_json::array();
        for (const auto& row : table.rows) {
            nlohmann::ordered_json jrow;
            for (std::size_t i = 0; i < row.size(); ++i) jrow[table.columns[i]] = row[i];
            rows.push_back(jrow);
        }
        doc["rows"] = rows;
        body << doc.dump(2) << "\n";
    } else {
        throw UsageError("unknown format '" + format + "', expected csv or json");
    }

    if (out_path.empty()) {
        std::cout << body.str();
    } else {
        std::ofstream out(out_path, std::ios::binary);
        if (!out) throw UsageError("cannot open output file '" + out_path + "'");
        out << body.str();
    }
}

grassq::Field parse_field(const std::string& s) {
    try {
        return grassq::field_from_string(s);
    } catch (const grassq::ArgumentError& e) {
        throw UsageError(e.what());
    }
}

grassq::BallVolumeModel make_model(int n, int p, grassq::Field field,
                                   std::int64_t constant_samples, std::uint64_t seed) {
    if (field == grassq::Field::Complex) {
        return grassq::BallVolumeModel::complex_model(n, p);
    }
    grassq::RngStream rng(grassq::detail::derive_seed(seed, 0, 0x52));
    return grassq::BallVolumeModel::real_model(n, p, constant_samples, rng);
}

// ---------------------------------------------------------------- volume-sweep

int cmd_volume_sweep(int n, int p, const std::string& field_s, const std::string& grid_s,
                     std::int64_t samples, std::int64_t constant_samples,
                     std::uint64_t seed, const std::string& format,
                     const std::string& out_path) {
    const grassq::Field field = parse_field(field_s);
    const auto grid = parse_double_grid(grid_s, "--delta-grid");
    for (double d : grid) {
        if (d < 0.0) throw UsageError("--delta-grid: radii must be nonnegative");
    }

    const grassq::BallVolumeModel model = make_model(n, p, field, constant_samples, seed);
    const double sqrt_p = std::sqrt(static_cast<double>(p));

    ArgEcho args;
    args.add("field", std::string(1, grassq::field_code(field)));
    args.add("n", static_cast<std::int64_t>(n));
    args.add("p", static_cast<std::int64_t>(p));
    args.add("delta-grid", grid_s);
    args.add("samples", samples);
    args.add("constant-samples", constant_samples);
    args.add("seed", seed);
    args.add("format", format);

    Table table;
    table.columns = {"delta", "empirical_volume", "std_error", "theorem1_volume",
                     "barg_volume", "extrapolation_flag"};
    for (std::size_t i = 0; i < grid.size(); ++i) {
        const double delta = grid[i];
        grassq::RngStream rng(grassq::detail::derive_seed(seed, i, 0x56));
        const auto emp = grassq::empirical_volume(n, p, field, delta, samples, rng);
        const auto ball = grassq::ball_volume(model, delta);
        const double barg = (delta > 0.0 && delta <= sqrt_p)
                                ? grassq::barg_volume(n, p, field, delta)
                                : std::nan("");
        table.rows.push_back({fmt(delta), fmt(emp.value), fmt(emp.std_error),
                              fmt(ball.value), fmt(barg),
                              ball.extrapolated ? "1" : "0"});
    }
    emit(table, "volume-sweep", args, format, out_path);
    return kExitOk;
}

// ------------------------------------------------------------------- drf-sweep

int cmd_drf_sweep(int n, int p, const std::string& field_s, const std::string& grid_s,
                  std::int64_t samples, std::int64_t constant_samples, int candidates,
                  std::int64_t iterations, std::uint64_t seed, const std::string& format,
                  const std::string& out_path) {
    const grassq::Field field = parse_field(field_s);
    const auto grid = parse_int_grid(grid_s, "--k-grid");
    for (auto k : grid) {
        if (k < 2) throw UsageError("--k-grid: code sizes must be at least 2");
        if (k > 4096) throw UsageError("--k-grid: max-min design is capped at K = 4096");
    }

    const grassq::BallVolumeModel model = make_model(n, p, field, constant_samples, seed);
    grassq::DesignBudget budget{candidates, iterations};

    ArgEcho args;
    args.add("field", std::string(1, grassq::field_code(field)));
    args.add("n", static_cast<std::int64_t>(n));
    args.add("p", static_cast<std::int64_t>(p));
    args.add("k-grid", grid_s);
    args.add("samples", samples);
    args.add("constant-samples", constant_samples);
    args.add("candidates", static_cast<std::int64_t>(candidates));
    args.add("iters", iterations);
    args.add("seed", seed);
    args.add("format", format);

    Table table;
    table.columns = {"K",           "drf_lower",        "drf_upper", "distortion_maxmin",
                     "se_maxmin",   "distortion_random", "se_random"};
    for (std::size_t i = 0; i < grid.size(); ++i) {
        const std::int64_t k = grid[i];
        const auto drf = grassq::drf_bounds(model, k);

        grassq::RngStream design_rng(
            grassq::detail::derive_seed(seed, static_cast<std::uint64_t>(k), 0x44));
        const grassq::Codebook designed =
            grassq::design_maxmin(n, p, field, k, budget, design_rng);
        grassq::RngStream eval_rng(
            grassq::detail::derive_seed(seed, static_cast<std::uint64_t>(k), 0x45));
        const auto d_maxmin = grassq::mean_distortion(designed, samples, eval_rng);

        grassq::RngStream rand_rng(
            grassq::detail::derive_seed(seed, static_cast<std::uint64_t>(k), 0x52));
        const grassq::Codebook random_cb = grassq::random_codebook(n, p, field, k, rand_rng);
        const auto d_random = grassq::mean_distortion(random_cb, samples, rand_rng);

        table.rows.push_back({std::to_string(k), fmt(drf.lower), fmt(drf.upper),
                              fmt(d_maxmin.mean), fmt(d_maxmin.std_error),
                              fmt(d_random.mean), fmt(d_random.std_error)});
    }
    emit(table, "drf-sweep", args, format, out_path);
    return kExitOk;
}

// ------------------------------------------------------------------ mimo-sweep

int cmd_mimo_sweep(int lt, int lr, int s, double rho, const std::string& grid_s,
                   std::int64_t samples, std::int64_t distortion_samples,
                   const std::string& codebook_source, int candidates,
                   std::int64_t iterations, double budget_seconds,
                   const std::string& units, std::uint64_t seed, const std::string& format,
                   const std::string& out_path) {
    const auto grid = parse_double_grid(grid_s, "--rfb-grid");
    for (double r : grid) {
        if (r < 0.0) throw UsageError("--rfb-grid: feedback rates must be nonnegative");
        if (r > 14.0) throw UsageError("--rfb-grid: R_fb above 14 (K > 2^14) is not supported");
        if (r > 12.0 && codebook_source == "maxmin") {
            throw UsageError(
                "--rfb-grid: max-min design is capped at K = 4096; pass --codebook random");
        }
    }
    if (units != "nats" && units != "bits") {
        throw UsageError("--units must be nats or bits");
    }

    grassq::MimoSweepConfig cfg;
    cfg.base.lt = lt;
    cfg.base.lr = lr;
    cfg.base.s = s;
    cfg.base.rho = rho;
    try {
        cfg.base.validate();
    } catch (const grassq::ArgumentError& e) {
        throw UsageError(e.what());
    }
    cfg.rfb_grid = grid;
    cfg.samples = samples;
    cfg.distortion_samples = distortion_samples;
    if (codebook_source == "maxmin") {
        cfg.source = grassq::CodebookSource::MaxMin;
    } else if (codebook_source == "random") {
        cfg.source = grassq::CodebookSource::Random;
    } else {
        throw UsageError("--codebook must be maxmin or random");
    }
    cfg.budget = grassq::DesignBudget{candidates, iterations};
    cfg.budget_seconds = budget_seconds;
    if (const char* cache = std::getenv("GRASSQ_CACHE")) {
        if (cache[0] != '\0') cfg.cache_dir = std::filesystem::path(cache);
    }

    grassq::RngStream rng(seed);
    const auto reports = grassq::mimo_sweep(cfg, rng);
    const double unit_scale = units == "bits" ? 1.0 / std::log(2.0) : 1.0;

    ArgEcho args;
    args.add("lt", static_cast<std::int64_t>(lt));
    args.add("lr", static_cast<std::int64_t>(lr));
    args.add("s", static_cast<std::int64_t>(s));
    args.add("rho", rho);
    args.add("rfb-grid", grid_s);
    args.add("samples", samples);
    args.add("distortion-samples", distortion_samples);
    args.add("codebook", codebook_source);
    args.add("candidates", static_cast<std::int64_t>(candidates));
    args.add("iters", iterations);
    args.add("budget-seconds", budget_seconds);
    args.add("units", units);
    args.add("seed", seed);
    args.add("format", format);

    Table table;
    table.columns = {"R_fb",         "R_fb_over_m2", "rate_sim",
                     "se_sim",       "rate_pred_lo", "rate_pred_hi",
                     "rate_pred_measuredD", "rate_opt",     "flag"};
    for (const auto& r : reports) {
        if (r.computed) {
            table.rows.push_back({fmt(r.rfb), fmt(r.rfb_over_m2),
                                  fmt(r.simulated.value * unit_scale),
                                  fmt(r.simulated.std_error * unit_scale),
                                  fmt(r.rate_pred_lower * unit_scale),
                                  fmt(r.rate_pred_upper * unit_scale),
                                  fmt(r.rate_pred_measured * unit_scale),
                                  fmt(r.rate_opt * unit_scale), "ok"});
        } else {
            const std::string nan = fmt(std::nan(""));
            table.rows.push_back({fmt(r.rfb), fmt(r.rfb_over_m2), nan, nan, nan, nan, nan,
                                  fmt(r.rate_opt * unit_scale), "skipped"});
        }
    }
    emit(table, "mimo-sweep", args, format, out_path);
    return kExitOk;
}

// ---------------------------------------------------------------------- design

int cmd_design(int n, int p, const std::string& field_s, std::int64_t k, int candidates,
               std::int64_t iterations, std::uint64_t seed, const std::string& out_path) {
    if (k < 2) throw UsageError("--k: max-min design needs at least 2 codewords");
    if (k > 4096) throw UsageError("--k: max-min design is capped at K = 4096");
    const grassq::Field field = parse_field(field_s);
    grassq::RngStream rng(seed);
    const grassq::Codebook cb =
        grassq::design_maxmin(n, p, field, k, grassq::DesignBudget{candidates, iterations}, rng);
    if (!out_path.empty()) grassq::save_codebook(cb, out_path);
    std::cout << "designer=" << cb.meta().designer << " field=" << grassq::field_code(field)
              << " n=" << n << " p=" << p << " K=" << k << " seed=" << seed
              << " mindist=" << fmt(cb.meta().min_distance) << "\n";
    return kExitOk;
}

// -------------------------------------------------------------------- constant

int cmd_constant(int n, int p, const std::string& field_s, std::int64_t samples,
                 std::uint64_t seed) {
    const grassq::Field field = parse_field(field_s);
    if (field == grassq::Field::Complex) {
        std::cout << fmt(grassq::complex_constant(n, p)) << "\n";
    } else {
        grassq::RngStream rng(seed);
        const auto est = grassq::real_constant(n, p, samples, rng);
        std::cout << fmt(est.value) << " " << fmt(est.std_error) << "\n";
    }
    return kExitOk;
}

// ---------------------------------------------------------------------- bounds

int cmd_bounds(int n, int p, const std::string& field_s, bool gv, bool hamming,
               bool drf_lower_f, bool drf_upper_f, double delta, std::int64_t k,
               std::int64_t constant_samples, std::uint64_t seed) {
    const int picked = int(gv) + int(hamming) + int(drf_lower_f) + int(drf_upper_f);
    if (picked != 1) {
        throw UsageError("pick exactly one of --gv, --hamming, --drf-lower, --drf-upper");
    }
    const grassq::Field field = parse_field(field_s);
    const grassq::BallVolumeModel model = make_model(n, p, field, constant_samples, seed);
    double value = 0.0;
    if (gv || hamming) {
        if (!(delta > 0.0)) throw UsageError("--delta is required for packing bounds");
        value = gv ? grassq::gv_bound(model, delta) : grassq::hamming_bound(model, delta);
    } else {
        if (k < 1) throw UsageError("--k is required for distortion-rate bounds");
        value = drf_lower_f ? grassq::drf_lower(model, k) : grassq::drf_upper(model, k);
    }
    std::cout << fmt(value) << "\n";
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Quantization on Grassmann manifolds: metric-ball volumes, packing and "
                 "distortion-rate bounds, codebook design, and MIMO feedback simulation"};
    app.require_subcommand(1);

    // Shared option storage.
    int n = 2, p = 1, lt = 4, lr = 2, s = 2, candidates = 8;
    std::int64_t samples = 100000, constant_samples = 200000, distortion_samples = 100000;
    std::int64_t k = 2, iterations = 2000;
    double rho = 10.0, delta = 0.0, budget_seconds = 0.0;
    std::uint64_t seed = 0;
    std::string field_s = "C", grid_s, out_path, format = "csv", units = "nats";
    std::string codebook_source = "maxmin";
    bool gv = false, hamming = false, drf_lo = false, drf_hi = false;

    auto* vol = app.add_subcommand("volume-sweep", "Metric-ball volume vs radius");
    vol->add_option("--n", n)->required();
    vol->add_option("--p", p)->required();
    vol->add_option("--field", field_s, "R or C")->capture_default_str();
    vol->add_option("--delta-grid", grid_s, "comma list of radii")->required();
    vol->add_option("--samples", samples)->capture_default_str();
    vol->add_option("--constant-samples", constant_samples,
                    "Monte Carlo samples for the real-field constant")
        ->capture_default_str();
    vol->add_option("--seed", seed)->capture_default_str();
    vol->add_option("--out", out_path);
    vol->add_option("--format", format, "csv or json")->capture_default_str();

    auto* drf = app.add_subcommand("drf-sweep", "Distortion-rate bounds vs code size");
    drf->add_option("--n", n)->required();
    drf->add_option("--p", p)->required();
    drf->add_option("--field", field_s)->capture_default_str();
    drf->add_option("--k-grid", grid_s, "comma list of code sizes")->required();
    drf->add_option("--samples", samples)->capture_default_str();
    drf->add_option("--constant-samples", constant_samples)->capture_default_str();
    drf->add_option("--candidates", candidates)->capture_default_str();
    drf->add_option("--iters", iterations)->capture_default_str();
    drf->add_option("--seed", seed)->capture_default_str();
    drf->add_option("--out", out_path);
    drf->add_option("--format", format)->capture_default_str();

    auto* mimo = app.add_subcommand("mimo-sweep", "Finite-feedback information rate vs R_fb");
    mimo->add_option("--lt", lt)->required();
    mimo->add_option("--lr", lr)->required();
    auto* s_opt = mimo->add_option("--s", s, "on-beams; default min(L_T, L_R)");
    mimo->add_option("--rho", rho, "average received SNR, linear")->capture_default_str();
    mimo->add_option("--rfb-grid", grid_s, "comma list of feedback rates (bits)")->required();
    mimo->add_option("--samples", samples)->capture_default_str();
    mimo->add_option("--distortion-samples", distortion_samples)->capture_default_str();
    mimo->add_option("--codebook", codebook_source, "maxmin or random")->capture_default_str();
    mimo->add_option("--candidates", candidates)->capture_default_str();
    mimo->add_option("--iters", iterations)->capture_default_str();
    mimo->add_option("--budget-seconds", budget_seconds, "0 = unlimited")->capture_default_str();
    mimo->add_option("--units", units, "nats or bits")->capture_default_str();
    mimo->add_option("--seed", seed)->capture_default_str();
    mimo->add_option("--out", out_path);
    mimo->add_option("--format", format)->capture_default_str();

    auto* design = app.add_subcommand("design", "Max-min codebook design");
    design->add_option("--n", n)->required();
    design->add_option("--p", p)->required();
    design->add_option("--field", field_s)->capture_default_str();
    design->add_option("--k", k)->required();
    design->add_option("--candidates", candidates)->capture_default_str();
    design->add_option("--iters", iterations)->capture_default_str();
    design->add_option("--seed", seed)->capture_default_str();
    design->add_option("--out", out_path, "codebook file (GRASSQ-CB v1)");

    auto* constant = app.add_subcommand("constant", "Ball-volume constant c_{n,p,beta}");
    constant->add_option("--n", n)->required();
    constant->add_option("--p", p)->required();
    constant->add_option("--field", field_s)->capture_default_str();
    constant->add_option("--samples", constant_samples)->capture_default_str();
    constant->add_option("--seed", seed)->capture_default_str();

    auto* bounds = app.add_subcommand("bounds", "Packing and distortion-rate bounds");
    bounds->add_option("--n", n)->required();
    bounds->add_option("--p", p)->required();
    bounds->add_option("--field", field_s)->capture_default_str();
    bounds->add_flag("--gv", gv);
    bounds->add_flag("--hamming", hamming);
    bounds->add_flag("--drf-lower", drf_lo);
    bounds->add_flag("--drf-upper", drf_hi);
    bounds->add_option("--delta", delta);
    bounds->add_option("--k", k);
    bounds->add_option("--samples", constant_samples)->capture_default_str();
    bounds->add_option("--seed", seed)->capture_default_str();

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitUsage;
    }

    try {
        if (vol->parsed()) {
            return cmd_volume_sweep(n, p, field_s, grid_s, samples, constant_samples, seed,
                                    format, out_path);
        }
        if (drf->parsed()) {
            return cmd_drf_sweep(n, p, field_s, grid_s, samples, constant_samples, candidates,
                                 iterations, seed, format, out_path);
        }
        if (mimo->parsed()) {
            if (s_opt->count() == 0) s = std::min(lt, lr);
            return cmd_mimo_sweep(lt, lr, s, rho, grid_s, samples, distortion_samples,
                                  codebook_source, candidates, iterations, budget_seconds,
                                  units, seed, format, out_path);
        }
        if (design->parsed()) {
            return cmd_design(n, p, field_s, k, candidates, iterations, seed, out_path);
        }
        if (constant->parsed()) {
            return cmd_constant(n, p, field_s, constant_samples, seed);
        }
        if (bounds->parsed()) {
            return cmd_bounds(n, p, field_s, gv, hamming, drf_lo, drf_hi, delta, k,
                              constant_samples, seed);
        }
        std::cerr << "no subcommand given\n";
        return kExitUsage;
    } catch (const UsageError& e) {
        std::cerr << "usage error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const grassq::DimensionError& e) {
        std::cerr << "usage error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const grassq::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitNumerical;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitNumerical;
    }
}
