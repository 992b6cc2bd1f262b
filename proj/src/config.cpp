#include "bubble/config.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace bubble {

namespace {

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return "";
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

[[noreturn]] void fail(int line, const std::string& what) {
    throw std::invalid_argument("config line " + std::to_string(line) + ": " + what);
}

double to_double(const std::string& v, int line) {
    try {
        size_t pos = 0;
        const double x = std::stod(v, &pos);
        if (pos != v.size() || !std::isfinite(x)) throw std::invalid_argument(v);
        return x;
    } catch (...) {
        fail(line, "not a finite number: '" + v + "'");
    }
}

long to_long(const std::string& v, int line) {
    try {
        size_t pos = 0;
        const long x = std::stol(v, &pos);
        if (pos != v.size()) throw std::invalid_argument(v);
        return x;
    } catch (...) {
        fail(line, "not an integer: '" + v + "'");
    }
}

}  // namespace

RunConfig parse_config_text(const std::string& text) {
    RunConfig cfg;
    std::istringstream in(text);
    std::string raw;
    int lineno = 0;
    while (std::getline(in, raw)) {
        ++lineno;
        const auto hash = raw.find('#');
        if (hash != std::string::npos) raw.erase(hash);
        const std::string line = trim(raw);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos) fail(lineno, "expected 'key = value'");
        const std::string key = trim(line.substr(0, eq));
        const std::string val = trim(line.substr(eq + 1));
        if (key.empty() || val.empty()) fail(lineno, "expected 'key = value'");

        if (key == "ca") {
            cfg.params.ca = to_double(val, lineno);
            if (!(cfg.params.ca > 0)) fail(lineno, "ca must be > 0");
        } else if (key == "we") {
            cfg.params.we = to_double(val, lineno);
            if (!(cfg.params.we > 0)) fail(lineno, "we must be > 0");
        } else if (key == "gamma") {
            cfg.params.gamma = to_double(val, lineno);
            if (!(cfg.params.gamma > 1)) fail(lineno, "gamma must be > 1");
        } else if (key == "gamma0") {
            cfg.params.gamma0 = to_double(val, lineno);
            if (!(cfg.params.gamma0 > 1)) fail(lineno, "gamma0 must be > 1");
        } else if (key == "xi_max") {
            cfg.xi_max = to_double(val, lineno);
            if (!(cfg.xi_max > 1)) fail(lineno, "xi_max must be > 1");
        } else if (key == "cells") {
            const long c = to_long(val, lineno);
            if (c < 2) fail(lineno, "cells must be >= 2");
            cfg.cells = static_cast<Index>(c);
        } else if (key == "cfl") {
            cfg.solver.cfl = to_double(val, lineno);
            if (!(cfg.solver.cfl > 0) || cfg.solver.cfl > 0.9)
                fail(lineno, "cfl must be in (0, 0.9]");
        } else if (key == "t_end") {
            cfg.solver.t_end = to_double(val, lineno);
            if (!(cfg.solver.t_end > 0)) fail(lineno, "t_end must be > 0");
        } else if (key == "snapshot_dt") {
            cfg.solver.snapshot_dt = to_double(val, lineno);
            if (!(cfg.solver.snapshot_dt > 0)) fail(lineno, "snapshot_dt must be > 0");
        } else if (key == "dissipation") {
            cfg.solver.dissipation = to_double(val, lineno);
            if (cfg.solver.dissipation < 0) fail(lineno, "dissipation must be >= 0");
        } else if (key == "mode") {
            if (val == "nonlinear") cfg.solver.mode = Mode::nonlinear;
            else if (val == "linear") cfg.solver.mode = Mode::linear;
            else fail(lineno, "mode must be nonlinear or linear");
        } else if (key == "outer_bc") {
            if (val == "absorbing") cfg.solver.outer_bc = OuterBC::absorbing;
            else if (val == "reflecting") cfg.solver.outer_bc = OuterBC::reflecting;
            else fail(lineno, "outer_bc must be absorbing or reflecting");
        } else if (key == "init.kind") {
            if (val == "equilibrium") cfg.init.kind = InitKind::equilibrium;
            else if (val == "q_bump") cfg.init.kind = InitKind::q_bump;
            else if (val == "outgoing_pulse") cfg.init.kind = InitKind::outgoing_pulse;
            else if (val == "file") cfg.init.kind = InitKind::file;
            else fail(lineno, "init.kind must be equilibrium, q_bump, outgoing_pulse or file");
        } else if (key == "init.amplitude") {
            cfg.init.amplitude = to_double(val, lineno);
            if (!(std::abs(cfg.init.amplitude) < 1.0))
                fail(lineno, "init.amplitude must satisfy |amplitude| < 1");
        } else if (key == "init.center") {
            cfg.init.center = to_double(val, lineno);
            if (!(cfg.init.center > 1)) fail(lineno, "init.center must be > 1");
        } else if (key == "init.width") {
            cfg.init.width = to_double(val, lineno);
            if (!(cfg.init.width > 0)) fail(lineno, "init.width must be > 0");
        } else if (key == "init.file") {
            cfg.init.file = val;
        } else if (key == "calr.xi0") {
            if (val == "traced") cfg.xi0_source = Xi0Source::traced;
            else if (val == "linear") cfg.xi0_source = Xi0Source::linear;
            else fail(lineno, "calr.xi0 must be traced or linear");
        } else {
            fail(lineno, "unknown key '" + key + "'");
        }
    }
    return cfg;
}

RunConfig parse_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("parse_config: cannot open " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_config_text(ss.str());
}

std::map<std::string, std::string> config_echo(const RunConfig& cfg) {
    auto num = [](double x) {
        char buf[32];
        snprintf(buf, sizeof buf, "%.17g", x);
        return std::string(buf);
    };
    std::map<std::string, std::string> m;
    m["ca"] = num(cfg.params.ca);
    m["we"] = num(cfg.params.we);
    m["gamma"] = num(cfg.params.gamma);
    m["gamma0"] = num(cfg.params.gamma0);
    m["xi_max"] = num(cfg.xi_max);
    m["cells"] = std::to_string(cfg.cells);
    m["cfl"] = num(cfg.solver.cfl);
    m["t_end"] = num(cfg.solver.t_end);
    m["snapshot_dt"] = num(cfg.solver.snapshot_dt);
    m["dissipation"] = num(cfg.solver.dissipation);
    m["mode"] = cfg.solver.mode == Mode::linear ? "linear" : "nonlinear";
    m["outer_bc"] = cfg.solver.outer_bc == OuterBC::absorbing ? "absorbing" : "reflecting";
    switch (cfg.init.kind) {
        case InitKind::equilibrium: m["init.kind"] = "equilibrium"; break;
        case InitKind::q_bump: m["init.kind"] = "q_bump"; break;
        case InitKind::outgoing_pulse: m["init.kind"] = "outgoing_pulse"; break;
        case InitKind::file: m["init.kind"] = "file"; break;
    }
    m["init.amplitude"] = num(cfg.init.amplitude);
    m["init.center"] = num(cfg.init.center);
    m["init.width"] = num(cfg.init.width);
    m["init.file"] = cfg.init.file;
    m["calr.xi0"] = cfg.xi0_source == Xi0Source::traced ? "traced" : "linear";
    return m;
}

}  // namespace bubble
