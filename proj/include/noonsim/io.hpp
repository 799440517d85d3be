#ifndef NOONSIM_IO_HPP
#define NOONSIM_IO_HPP

#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <nlohmann/json.hpp>

#include "noonsim/errors.hpp"
#include "noonsim/propagator.hpp"
#include "noonsim/state.hpp"

namespace noonsim {

using json = nlohmann::json;

// FNV-1a 64-bit content digest; enough to tie manifest entries to the files
// they describe.
inline std::uint64_t fnv1a64(const std::string& data) {
    std::uint64_t h = 1469598103934665603ull;
    for (unsigned char c : data) {
        h ^= c;
        h *= 1099511628211ull;
    }
    return h;
}

inline std::string fnv1a64_hex(const std::string& data) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(fnv1a64(data)));
    return buf;
}

// Shortest round-trippable decimal form, so identical doubles always print
// identically and CSV output is bit-reproducible.
inline std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    double back = std::strtod(buf, nullptr);
    for (int prec = 15; prec <= 16; ++prec) {
        char tight[40];
        std::snprintf(tight, sizeof(tight), "%.*g", prec, v);
        if (std::strtod(tight, nullptr) == back) return tight;
    }
    return buf;
}

inline void write_text_file(const std::filesystem::path& path, const std::string& content) {
    if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
    std::ofstream f(path, std::ios::binary);
    if (!f) throw Error("cannot open " + path.string() + " for writing");
    f << content;
}

inline std::string read_text_file(const std::filesystem::path& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) throw Error("cannot open " + path.string());
    std::ostringstream ss;
    ss << f.rdbuf();
    return ss.str();
}

// Fixed column order: t, norm, n_ph_raw, n_ph_cond, P_dark, P_exc,
// P_n0..P_n(M-1), loss_running.
inline std::string trajectory_csv(const Trajectory& traj, int M) {
    std::ostringstream out;
    out << "t,norm,n_ph_raw,n_ph_cond,P_dark,P_exc";
    for (int n = 0; n < M; ++n) out << ",P_n" << n;
    out << ",loss_running\n";
    for (const auto& s : traj.samples) {
        out << format_double(s.t) << ',' << format_double(s.norm) << ','
            << format_double(s.n_ph_raw) << ',' << format_double(s.n_ph_cond) << ','
            << format_double(s.p_dark) << ',' << format_double(s.p_excited);
        for (int n = 0; n < M; ++n)
            out << ',' << format_double(n < int(s.p_ladder.size()) ? s.p_ladder[std::size_t(n)] : 0.0);
        out << ',' << format_double(s.loss_running) << '\n';
    }
    return out.str();
}

// Coordinate-list dump of a sparse operator: "row col re im" per line.
inline std::string operator_coordinate_dump(const SparseOperator& op) {
    std::ostringstream out;
    op.for_each([&](std::size_t r, std::size_t c, Complex v) {
        out << r << ' ' << c << ' ' << format_double(v.real()) << ' ' << format_double(v.imag())
            << '\n';
    });
    return out.str();
}

inline json complex_to_json(Complex c) { return json::array({c.real(), c.imag()}); }

inline Complex complex_from_json(const json& j) {
    if (!j.is_array() || j.size() != 2) throw ConfigError("expected [re, im] pair");
    return Complex(j[0].get<double>(), j[1].get<double>());
}

inline json state_to_json(const StateVector& psi) {
    json j;
    j["format"] = "noonsim-state";
    j["schema_version"] = 1;
    json branches = json::array();
    for (const auto& b : psi.branches) {
        json jb;
        jb["branch"] = branch_name(b.basis->sector().branch);
        jb["M"] = b.basis->atom_count();
        jb["weight"] = complex_to_json(b.weight);
        json amps = json::array();
        for (Eigen::Index i = 0; i < b.amps.size(); ++i)
            amps.push_back(complex_to_json(b.amps[i]));
        jb["amplitudes"] = std::move(amps);
        branches.push_back(std::move(jb));
    }
    j["branches"] = std::move(branches);
    return j;
}

inline StateVector state_from_json(const json& j) {
    if (j.value("format", "") != "noonsim-state") throw ConfigError("not a noonsim state file");
    StateVector psi;
    for (const auto& jb : j.at("branches")) {
        std::string bn = jb.at("branch").get<std::string>();
        Branch br;
        if (bn == "atomic_alpha")
            br = Branch::atomic_alpha;
        else if (bn == "atomic_beta")
            br = Branch::atomic_beta;
        else if (bn == "photonic_alpha")
            br = Branch::photonic_alpha;
        else if (bn == "photonic_beta")
            br = Branch::photonic_beta;
        else
            throw ConfigError("unknown branch " + bn);
        BranchComponent c;
        c.basis = enumerate_sector(jb.at("M").get<int>(), SectorLabel::of(br));
        c.weight = complex_from_json(jb.at("weight"));
        const auto& amps = jb.at("amplitudes");
        if (amps.size() != c.basis->size())
            throw ConfigError("amplitude count " + std::to_string(amps.size()) +
                              " does not match sector dimension " + std::to_string(c.basis->size()));
        c.amps.resize(Eigen::Index(c.basis->size()));
        for (std::size_t i = 0; i < amps.size(); ++i)
            c.amps[Eigen::Index(i)] = complex_from_json(amps[i]);
        psi.branches.push_back(std::move(c));
    }
    return psi;
}

// JSON dump of a sector basis: one record per state.
inline json basis_to_json(const SectorBasis& basis) {
    json arr = json::array();
    for (std::size_t i = 0; i < basis.size(); ++i) {
        const auto& s = basis.state(i);
        json r;
        for (int k = 1; k <= 6; ++k) r["n" + std::to_string(k)] = s.level(k);
        r["na"] = s.na;
        r["nb"] = s.nb;
        r["index"] = i;
        arr.push_back(std::move(r));
    }
    return arr;
}

}

#endif
