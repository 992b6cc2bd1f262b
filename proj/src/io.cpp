#include "bubble/io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include <nlohmann/json.hpp>

#include "bubble/waves.hpp"

namespace bubble {

namespace {

void put(std::FILE* f, double x, char sep) {
    std::fprintf(f, "%.17g%c", x, sep);
}

struct FileCloser {
    std::FILE* f;
    ~FileCloser() { if (f) std::fclose(f); }
};

std::FILE* open_or_throw(const std::string& path) {
    std::FILE* f = std::fopen(path.c_str(), "wb");
    if (!f) throw std::runtime_error("cannot open for writing: " + path);
    return f;
}

}  // namespace

void write_series_csv(const std::string& path, const RunSeries& s) {
    std::FILE* f = open_or_throw(path);
    FileCloser guard{f};
    std::fputs("t,R,u0,q0,psi0,dtpsi0,wB0,wF0,e0,e1,e_total,F_R,calR,err,kss0\n", f);
    for (Index k = 0; k < s.t.size(); ++k) {
        put(f, s.t[k], ',');
        put(f, s.R[k], ',');
        put(f, s.u0[k], ',');
        put(f, s.q0[k], ',');
        put(f, s.psi0[k], ',');
        put(f, s.dtpsi0[k], ',');
        put(f, s.wB0[k], ',');
        put(f, s.wF0[k], ',');
        put(f, s.e0[k], ',');
        put(f, s.e1[k], ',');
        put(f, s.e_total[k], ',');
        put(f, s.F_R[k], ',');
        put(f, s.calR[k], ',');
        put(f, s.err[k], ',');
        put(f, s.kss0[k], '\n');
    }
}

void write_snapshot_csv(const std::string& path, const SimState& s, const Grid& g,
                        const FluidParams& p, Mode mode) {
    const RadiusField rf = local_fields(s, g, p, mode);
    const WaveField w = reconstruct_waves(s, g, p, mode);
    std::FILE* f = open_or_throw(path);
    FileCloser guard{f};
    std::fprintf(f, "# t=%.17g\n", s.time);
    std::fputs("xi,x,u,q,r,c,phi,psi,wB,wF\n", f);
    for (Index i = 0; i < g.n; ++i) {
        put(f, g.xi[i], ',');
        put(f, g.x[i], ',');
        put(f, s.u[i], ',');
        put(f, s.q[i], ',');
        put(f, rf.r[i], ',');
        put(f, rf.c[i], ',');
        put(f, w.phi[i], ',');
        put(f, w.psi[i], ',');
        put(f, w.wb[i], ',');
        put(f, w.wf[i], '\n');
    }
}

void write_manifest(const std::string& path, const ManifestInfo& info) {
    nlohmann::json j;
    for (const auto& [k, v] : info.config) j[k] = v;
    j["derived.c0"] = info.params.c0();
    j["derived.r_bar"] = info.params.r_bar();
    const Eigenpair e = eigenvalues(info.params);
    j["derived.lambda_re"] = e.lambda1.real();
    j["derived.lambda_im"] = std::abs(e.lambda1.imag());
    j["grid.nodes"] = info.grid_nodes;
    j["grid.dxi"] = info.dxi;
    j["run.cmin"] = info.cmin;
    j["run.cmax"] = info.cmax;
    j["wall_time_s"] = info.wall_time_s;
    j["outputs"] = info.outputs;
    j["status"] = info.status;
    j["version"] = "0.1.0";
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open for writing: " + path);
    out << j.dump(2) << "\n";
}

std::map<std::string, std::vector<double>> read_csv_columns(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open " + path);
    std::string line;
    do {
        if (!std::getline(in, line)) throw std::runtime_error("empty csv: " + path);
    } while (!line.empty() && line[0] == '#');

    std::vector<std::string> names;
    {
        std::istringstream hs(line);
        std::string tok;
        while (std::getline(hs, tok, ',')) names.push_back(tok);
    }
    std::map<std::string, std::vector<double>> cols;
    for (const auto& n : names) cols[n] = {};
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::istringstream ls(line);
        std::string tok;
        size_t i = 0;
        while (std::getline(ls, tok, ',')) {
            if (i >= names.size()) throw std::runtime_error("ragged csv row in " + path);
            cols[names[i++]].push_back(std::stod(tok));
        }
        if (i != names.size()) throw std::runtime_error("short csv row in " + path);
    }
    return cols;
}

std::uint64_t hash_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open " + path);
    std::uint64_t h = 1469598103934665603ull;
    char buf[65536];
    while (in.read(buf, sizeof buf) || in.gcount() > 0) {
        const std::streamsize n = in.gcount();
        for (std::streamsize i = 0; i < n; ++i) {
            h ^= static_cast<unsigned char>(buf[i]);
            h *= 1099511628211ull;
        }
    }
    return h;
}

}  // namespace bubble
