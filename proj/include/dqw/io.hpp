#pragma once

#include <charconv>
#include <cstdint>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "dqw/core.hpp"
#include "dqw/shell.hpp"
#include "dqw/spectral.hpp"
#include "dqw/walk.hpp"

namespace dqw {

// ── Lossless number formatting ───────────────────────────────────────────────

// Shortest decimal representation that round-trips to the same double.
inline std::string format_double(double v) {
    char buf[40];
    const auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

inline double parse_double(const std::string& s) {
    double v = 0.0;
    const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
    if (res.ec != std::errc() || res.ptr != s.data() + s.size())
        throw error("parse_double: malformed number '" + s + "'");
    return v;
}

// ── CSV ──────────────────────────────────────────────────────────────────────
// Comma-delimited, UTF-8, mandatory header row. Cells never contain commas.

class CsvWriter {
public:
    explicit CsvWriter(const std::string& path) : out_(path) {
        if (!out_) throw error("CsvWriter: cannot open '" + path + "'");
    }

    void row(const std::vector<std::string>& cells) {
        for (std::size_t i = 0; i < cells.size(); ++i) {
            if (i) out_ << ',';
            out_ << cells[i];
        }
        out_ << '\n';
    }

    void close() { out_.close(); }

private:
    std::ofstream out_;
};

struct CsvTable {
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;

    double number(std::size_t row, std::size_t col) const {
        return parse_double(rows.at(row).at(col));
    }
    std::size_t column(const std::string& name) const {
        for (std::size_t i = 0; i < header.size(); ++i)
            if (header[i] == name) return i;
        throw error("CsvTable: no column '" + name + "'");
    }
};

inline CsvTable read_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw error("read_csv: cannot open '" + path + "'");
    CsvTable t;
    std::string line;
    bool first = true;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        std::vector<std::string> cells;
        std::stringstream ss(line);
        std::string cell;
        while (std::getline(ss, cell, ',')) cells.push_back(cell);
        if (first) {
            t.header = cells;
            first = false;
        } else {
            t.rows.push_back(cells);
        }
    }
    if (first) throw error("read_csv: '" + path + "' has no header row");
    return t;
}

// ── Minimal JSON emitter for metadata sidecars ───────────────────────────────

class JsonObject {
public:
    JsonObject& field(const std::string& key, const std::string& value) {
        return raw(key, '"' + value + '"');
    }
    JsonObject& field(const std::string& key, double value) {
        return raw(key, format_double(value));
    }
    JsonObject& field(const std::string& key, long value) {
        return raw(key, std::to_string(value));
    }
    JsonObject& field(const std::string& key, int value) {
        return raw(key, std::to_string(value));
    }
    JsonObject& field(const std::string& key, bool value) {
        return raw(key, value ? "true" : "false");
    }
    JsonObject& raw(const std::string& key, const std::string& json) {
        body_ += body_.empty() ? "" : ",";
        body_ += "\n  \"" + key + "\": " + json;
        return *this;
    }

    std::string str() const { return "{" + body_ + "\n}\n"; }

    void write(const std::string& path) const {
        std::ofstream out(path);
        if (!out) throw error("JsonObject: cannot open '" + path + "'");
        out << str();
    }

private:
    std::string body_;
};

// ── State snapshots ──────────────────────────────────────────────────────────
// CSV columns: x[, tau], re_R, im_R, re_L, im_L; JSON sidecar holds the mode,
// mass angle, lattice sizes and step count.

inline void write_state_csv(const std::string& path, const SpinorField& psi,
                            long step_count = 0) {
    CsvWriter w(path);
    if (psi.mode() == WalkMode::fixed_mass) {
        w.row({"x", "re_R", "im_R", "re_L", "im_L"});
        for (int x = 0; x < psi.n(); ++x)
            w.row({std::to_string(x), format_double(psi.at(0, x).real()),
                   format_double(psi.at(0, x).imag()), format_double(psi.at(1, x).real()),
                   format_double(psi.at(1, x).imag())});
    } else {
        w.row({"x", "tau", "re_R", "im_R", "re_L", "im_L"});
        for (int t = 0; t < psi.ntau(); ++t)
            for (int x = 0; x < psi.n(); ++x)
                w.row({std::to_string(x), std::to_string(t),
                       format_double(psi.at(0, t, x).real()),
                       format_double(psi.at(0, t, x).imag()),
                       format_double(psi.at(1, t, x).real()),
                       format_double(psi.at(1, t, x).imag())});
    }
    w.close();
    JsonObject meta;
    meta.field("mode", psi.mode() == WalkMode::fixed_mass ? "fixed_mass" : "variable_mass");
    if (psi.mode() == WalkMode::fixed_mass) meta.field("mu", psi.mu());
    meta.field("n", psi.n());
    if (psi.mode() == WalkMode::variable_mass) meta.field("ntau", psi.ntau());
    meta.field("steps", step_count);
    meta.write(path + ".json");
}

inline SpinorField read_state_csv(const std::string& path, WalkMode mode, double mu, int n,
                                  int ntau = 1) {
    const CsvTable t = read_csv(path);
    SpinorField psi = mode == WalkMode::fixed_mass ? SpinorField::fixed_mass(mu, n)
                                                   : SpinorField::variable_mass(n, ntau);
    const bool has_tau = mode == WalkMode::variable_mass;
    const std::size_t cx = t.column("x");
    const std::size_t cr = t.column("re_R");
    for (std::size_t r = 0; r < t.rows.size(); ++r) {
        const int x = static_cast<int>(t.number(r, cx));
        const int tau = has_tau ? static_cast<int>(t.number(r, t.column("tau"))) : 0;
        psi.at(0, tau, x) = cplx(t.number(r, cr), t.number(r, cr + 1));
        psi.at(1, tau, x) = cplx(t.number(r, cr + 2), t.number(r, cr + 3));
    }
    return psi;
}

// ── Grid exports ─────────────────────────────────────────────────────────────

// dispersion-grid: (k, mu, omega, n0, n1, n2) over an nk x nmu grid of the
// Brillouin zone
inline void write_dispersion_grid(const std::string& path, int nk, int nmu) {
    if (nk < 2 || nmu < 2) throw error("write_dispersion_grid: grid must be >= 2x2");
    CsvWriter w(path);
    w.row({"k", "mu", "omega", "n0", "n1", "n2"});
    for (int j = 0; j < nmu; ++j) {
        const double mu = -pi + 2.0 * pi * (j + 0.5) / nmu;
        for (int i = 0; i < nk; ++i) {
            const double k = -pi + 2.0 * pi * (i + 0.5) / nk;
            const NVector n = n_vector(KPoint::on_shell(k, mu));
            w.row({format_double(k), format_double(mu), format_double(dispersion(k, mu)),
                   format_double(n.n0), format_double(n.n1), format_double(n.n2)});
        }
    }
}

// cone-sample: (k, mu, omega, n0, n1, n2, region)
inline void write_cone_samples(const std::string& path, int nk, int nmu) {
    if (nk < 2 || nmu < 2) throw error("write_cone_samples: grid must be >= 2x2");
    CsvWriter w(path);
    w.row({"k", "mu", "omega", "n0", "n1", "n2", "region"});
    for (int j = 0; j < nmu; ++j) {
        const double mu = -pi + 2.0 * pi * (j + 0.5) / nmu;
        for (int i = 0; i < nk; ++i) {
            const double k = -pi + 2.0 * pi * (i + 0.5) / nk;
            const NVector n = n_vector(KPoint::on_shell(k, mu));
            w.row({format_double(k), format_double(mu), format_double(dispersion(k, mu)),
                   format_double(n.n0), format_double(n.n1), format_double(n.n2),
                   to_string(region_of(k, mu))});
        }
    }
}

// ── State hashing (for determinism reports) ─────────────────────────────────

inline std::uint64_t fnv1a64(const void* data, std::size_t bytes,
                             std::uint64_t h = 1469598103934665603ull) {
    const auto* p = static_cast<const unsigned char*>(data);
    for (std::size_t i = 0; i < bytes; ++i) {
        h ^= p[i];
        h *= 1099511628211ull;
    }
    return h;
}

inline std::uint64_t state_hash(const SpinorField& psi) {
    const auto& a = psi.amplitudes();
    return fnv1a64(a.data(), a.size() * sizeof(cplx));
}

}  // namespace dqw
