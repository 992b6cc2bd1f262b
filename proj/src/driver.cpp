#include "bubble/driver.hpp"

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <thread>

#include "bubble/acceptance.hpp"
#include "bubble/diagnostics.hpp"
#include "bubble/io.hpp"

namespace fs = std::filesystem;

namespace bubble {

RunOutputs simulate_run(const RunConfig& cfg, const std::string& out_dir) {
    const auto t0 = std::chrono::steady_clock::now();
    fs::create_directories(fs::path(out_dir) / "snapshots");

    const Grid g = build_grid(cfg.xi_max, cfg.cells + 1);
    const SimState init = make_initial_data(cfg.init, g, cfg.params);
    RunOutputs out;
    out.traj = run(init, g, cfg.params, cfg.solver);
    finalize_series(out.traj, cfg.xi0_source);

    const std::string series_path = (fs::path(out_dir) / "series.csv").string();
    write_series_csv(series_path, out.traj.series);
    out.files.push_back("series.csv");

    for (size_t k = 0; k < out.traj.snapshots.size(); ++k) {
        char name[32];
        std::snprintf(name, sizeof name, "%06zu.csv", k);
        const std::string rel = std::string("snapshots/") + name;
        write_snapshot_csv((fs::path(out_dir) / rel).string(), out.traj.snapshots[k],
                           g, cfg.params, cfg.solver.mode);
        out.files.push_back(rel);
    }

    ManifestInfo info;
    info.config = config_echo(cfg);
    info.params = cfg.params;
    info.grid_nodes = g.n;
    info.dxi = g.dxi;
    info.cmin = out.traj.series.cmin;
    info.cmax = out.traj.series.cmax;
    info.wall_time_s =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    info.outputs = out.files;
    info.outputs.push_back("manifest.json");
    info.status = "ok";
    write_manifest((fs::path(out_dir) / "manifest.json").string(), info);
    out.files.push_back("manifest.json");
    return out;
}

int simulate_cmd(const std::string& config_path, const std::string& out_dir) {
    try {
        const RunConfig cfg = parse_config(config_path);
        simulate_run(cfg, out_dir);
        return 0;
    } catch (const std::exception& e) {
        std::cerr << "simulate: " << e.what() << "\n";
        return 1;
    }
}

namespace {

struct SweepSlot {
    double value = 0.0;
    std::string dir;
    std::string status = "ok";
    std::string exponent = "n/a";
    std::string below_floor = "n/a";
};

void run_one_sweep(RunConfig cfg, const std::string& param, SweepSlot* slot) {
    try {
        if (param == "init.amplitude") {
            cfg.init.amplitude = slot->value;
        } else if (param == "cells") {
            cfg.cells = static_cast<Index>(slot->value);
            if (cfg.cells < 2 || static_cast<double>(cfg.cells) != slot->value)
                throw std::invalid_argument("cells value must be an integer >= 2");
        } else {  // cfl, validated by the caller
            cfg.solver.cfl = slot->value;
            if (!(cfg.solver.cfl > 0) || cfg.solver.cfl > 0.9)
                throw std::invalid_argument("cfl must be in (0, 0.9]");
        }
        RunOutputs out = simulate_run(cfg, slot->dir);
        const DecayComparison d = decay_comparison(out.traj.series);
        char buf[32];
        std::snprintf(buf, sizeof buf, "%.6g", d.exponent);
        slot->exponent = d.below_floor ? "below_floor" : buf;
        slot->below_floor = d.below_floor ? "1" : "0";
    } catch (const std::exception& e) {
        slot->status = std::string("failed: ") + e.what();
    }
}

}  // namespace

int sweep_cmd(const std::string& config_path, const std::string& param,
              const std::vector<double>& values, const std::string& out_dir) {
    try {
        if (values.empty()) throw std::invalid_argument("sweep: empty values list");
        if (param != "init.amplitude" && param != "cells" && param != "cfl")
            throw std::invalid_argument("sweep: param must be init.amplitude, cells or cfl");
        const RunConfig cfg = parse_config(config_path);
        fs::create_directories(out_dir);

        std::vector<SweepSlot> slots(values.size());
        for (size_t i = 0; i < values.size(); ++i) {
            char name[32];
            std::snprintf(name, sizeof name, "run_%03zu", i);
            slots[i].value = values[i];
            slots[i].dir = (fs::path(out_dir) / name).string();
        }
        // One worker per run, no shared mutable state; each run writes only
        // into its own subdirectory.
        std::vector<std::thread> workers;
        workers.reserve(slots.size());
        for (auto& slot : slots)
            workers.emplace_back(run_one_sweep, cfg, param, &slot);
        for (auto& w : workers) w.join();

        std::ofstream summary(fs::path(out_dir) / "summary.csv");
        summary << "param,value,dir,status,fit_exponent,below_floor\n";
        summary.precision(17);
        bool any_failed = false;
        for (const auto& slot : slots) {
            summary << param << "," << slot.value << "," << slot.dir << ","
                    << (slot.status == "ok" ? "ok" : "failed") << ","
                    << slot.exponent << "," << slot.below_floor << "\n";
            if (slot.status != "ok") {
                std::cerr << "sweep " << slot.dir << " " << slot.status << "\n";
                any_failed = true;
            }
        }
        return any_failed ? 1 : 0;
    } catch (const std::exception& e) {
        std::cerr << "sweep: " << e.what() << "\n";
        return 1;
    }
}

int verify_cmd(const std::string& out_dir) {
    try {
        fs::create_directories(out_dir);
        const auto results = run_acceptance(out_dir);
        bool all = true;
        for (const auto& r : results) all = all && r.pass;
        std::cout << (all ? "VERIFY PASS" : "VERIFY FAIL") << " (" << results.size()
                  << " criteria)\n";
        return all ? 0 : 1;
    } catch (const std::exception& e) {
        std::cerr << "verify: " << e.what() << "\n";
        return 1;
    }
}

}  // namespace bubble
