// dqw — command-line front end for the Dirac quantum walk library.
//
// Subcommands: evolve, dispersion, cone, boost, fixedmu-report, verify, bench.
// Exit codes: 0 success, 1 invariant failure, 2 config error, 3 numeric error.

#include <chrono>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "dqw/dqw.hpp"

using nlohmann::json;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitInvariant = 1;
constexpr int kExitConfig = 2;
constexpr int kExitNumeric = 3;

// a gate (not a numeric fault) failed; maps to exit code 1
struct invariant_failure : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Optional JSON config file; flags win over config values.
class Config {
public:
    void load(const std::string& path) {
        std::ifstream in(path);
        if (!in) throw CLI::ValidationError("--config", "cannot open '" + path + "'");
        try {
            in >> data_;
        } catch (const json::exception& e) {
            throw CLI::ValidationError("--config", std::string("bad JSON: ") + e.what());
        }
    }

    template <class T>
    void fill(const CLI::App& app, const std::string& flag, const char* key, T& value) const {
        if (data_.is_null() || app.count(flag) > 0) return;
        if (auto it = data_.find(key); it != data_.end()) value = it->get<T>();
    }

    const json& raw() const { return data_; }

private:
    json data_;
};

std::vector<double> parse_phase(const std::string& text) {
    std::vector<double> out;
    std::stringstream ss(text);
    std::string cell;
    while (std::getline(ss, cell, ',')) out.push_back(dqw::parse_double(cell));
    if (out.size() != 3)
        throw CLI::ValidationError("--phase", "expected three comma-separated reals a0,a1,a2");
    return out;
}

double group_velocity(double k0, double mu) {
    const double w = dqw::dispersion(k0, mu);
    if (std::sin(w) < 1e-12) return 0.0;
    return std::cos(mu) * std::sin(k0) / std::sin(w);
}

void write_marginal_csv(const std::string& path, const dqw::SpinorField& psi) {
    dqw::CsvWriter w(path);
    w.row({"x", "prob"});
    for (int x = 0; x < psi.n(); ++x) {
        double p = 0.0;
        for (int s = 0; s < 2; ++s)
            for (int t = 0; t < psi.ntau(); ++t) p += std::norm(psi.at(s, t, x));
        w.row({std::to_string(x), dqw::format_double(p)});
    }
}

// ── evolve ───────────────────────────────────────────────────────────────────

struct EvolveArgs {
    double mu = 0.0;
    int n = 512, ntau = 0;
    long steps = 100;
    std::string impl = "stencil";
    std::string out = "evolve.csv";
    double k0 = dqw::pi / 4, mu0 = 0.0, sigma_k = 0.04, sigma_mu = 0.08;
    int x0 = -1, tau0 = -1;
};

int cmd_evolve(const EvolveArgs& a) {
    using namespace dqw;
    const Representation repr =
        a.impl == "spectral" ? Representation::spectral : Representation::stencil;
    const bool variable = a.ntau > 0;
    const int x0 = a.x0 >= 0 ? a.x0 : a.n / 4;

    SpinorField psi = variable
                          ? gaussian_packet_variable(a.n, a.ntau, a.k0, a.mu0, a.sigma_k,
                                                     a.sigma_mu, x0,
                                                     a.tau0 >= 0 ? a.tau0 : a.ntau / 2)
                          : gaussian_packet_fixed(a.mu, a.n, a.k0, a.sigma_k, x0);
    const double norm0 = psi.norm();
    const int peak0 = peak_position(psi);

    const WalkOperator op = variable ? build_variable_mass_walk(a.n, a.ntau, repr)
                                     : build_fixed_mass_walk(a.mu, a.n, repr);
    const SpinorField out = evolve(op, psi, a.steps);

    write_state_csv(a.out, out, a.steps);
    write_marginal_csv(a.out + ".marginal.csv", out);

    const int peak1 = peak_position(out);
    const int displacement = cyclic_displacement(peak0, peak1, a.n);
    const double vg = group_velocity(a.k0, variable ? a.mu0 : a.mu);
    json summary = {
        {"command", "evolve"},
        {"mode", variable ? "variable_mass" : "fixed_mass"},
        {"mu", variable ? a.mu0 : a.mu},
        {"n", a.n},
        {"steps", a.steps},
        {"impl", a.impl},
        {"k0", a.k0},
        {"norm_initial", norm0},
        {"norm_final", out.norm()},
        {"norm_drift", std::abs(out.norm() - norm0)},
        {"peak_initial", peak0},
        {"peak_final", peak1},
        {"displacement", displacement},
        {"group_velocity", vg},
        {"predicted_displacement", vg * static_cast<double>(a.steps)},
    };
    if (variable) summary["ntau"] = a.ntau;
    std::ofstream(a.out + ".summary.json") << summary.dump(2) << "\n";
    std::cout << summary.dump(2) << "\n";
    return kExitOk;
}

// ── boost ────────────────────────────────────────────────────────────────────

struct BoostArgs {
    double xi = 0.5;
    std::vector<double> phase{0, 0, 0};
    std::string f = "appendixA";
    std::string modes_file;
    std::string out = "boost.csv";
    int grid = 16;
    double tol = 1e-9;
};

int cmd_boost(const BoostArgs& a) {
    using namespace dqw;
    if (a.f != "appendixA")
        throw CLI::ValidationError("--f", "only the appendixA dilation is exposed here");
    const RadialMap f = appendix_dilation();
    const FrameChange fc =
        make_frame_change(so12_boost(a.xi), f, f,
                          PhaseFunction::linear(a.phase[0], a.phase[1], a.phase[2]));

    std::vector<Mode> modes;
    if (!a.modes_file.empty()) {
        const CsvTable t = read_csv(a.modes_file);
        const auto ck = t.column("k"), cm = t.column("mu"), cr = t.column("re_R");
        for (std::size_t r = 0; r < t.rows.size(); ++r) {
            const KPoint p = KPoint::on_shell(t.number(r, ck), t.number(r, cm));
            modes.push_back(Mode{p,
                                 {cplx(t.number(r, cr), t.number(r, cr + 1)),
                                  cplx(t.number(r, cr + 2), t.number(r, cr + 3))}});
        }
    } else {
        for (int i = 0; i < a.grid; ++i)
            for (int j = 0; j < a.grid; ++j) {
                const double k = -pi / 2 + pi * (i + 0.5) / a.grid;
                const double mu = -pi / 2 + pi * (j + 0.5) / a.grid;
                modes.push_back(Mode{KPoint::on_shell(k, mu), eigensystem(k, mu).chi_plus});
            }
    }

    const ApplyResult res = apply_frame_change(fc, modes);

    CsvWriter w(a.out);
    w.row({"k", "mu", "omega", "re_R", "im_R", "re_L", "im_L", "residual"});
    double worst = 0.0;
    for (const Mode& m : res.modes) {
        const double r = kernel_residual(m.p, m.amplitude);
        worst = std::max(worst, r);
        w.row({format_double(m.p.k), format_double(m.p.mu), format_double(m.p.omega),
               format_double(m.amplitude[0].real()), format_double(m.amplitude[0].imag()),
               format_double(m.amplitude[1].real()), format_double(m.amplitude[1].imag()),
               format_double(r)});
    }
    w.close();

    json summary = {{"command", "boost"},
                    {"xi", a.xi},
                    {"phase", a.phase},
                    {"f", a.f},
                    {"modes_in", modes.size()},
                    {"modes_out", res.modes.size()},
                    {"truncated", res.truncated},
                    {"nonunitary_phase", res.nonunitary_phase},
                    {"max_residual", worst},
                    {"tolerance", a.tol}};
    std::ofstream(a.out + ".summary.json") << summary.dump(2) << "\n";
    std::cout << summary.dump(2) << "\n";
    return worst <= a.tol ? kExitOk : kExitInvariant;
}

// ── fixedmu-report ───────────────────────────────────────────────────────────

struct FixedMuArgs {
    double mu = 0.4, beta = 0.3;
    std::vector<double> mu_list{0.1, 0.05, 0.025};
    std::string out = "fixedmu.json";
};

int cmd_fixedmu_report(const FixedMuArgs& a) {
    using namespace dqw;
    const ExclusionReport ex = exclusion_report(a.mu, a.beta);
    const auto probes = relativistic_limit_probe(a.mu_list);

    // one CSV of generator tables across the mu list
    const std::string csv_path = a.out + ".generators.csv";
    CsvWriter w(csv_path);
    w.row({"mu", "k", "omega_dot", "k_dot", "lorentz_omega_dot", "lorentz_k_dot",
           "deviation"});
    for (const auto& p : probes)
        for (const auto& s : p.samples)
            w.row({format_double(p.mu), format_double(s.k), format_double(s.omega_dot),
                   format_double(s.k_dot), format_double(s.lorentz_omega_dot),
                   format_double(s.lorentz_k_dot), format_double(s.deviation)});
    w.close();

    json dev = json::array();
    for (const auto& p : probes)
        dev.push_back({{"mu", p.mu}, {"deviation_norm", p.deviation_norm}});

    // the variable-mass contrast: the deformed boost does linearize
    json contrast = json::array();
    for (const double xi : {0.1, 0.7, 1.5}) {
        const auto j = dsr_linear_limit(xi);
        const double err = std::max({std::abs(j[0][0] - std::cosh(xi)),
                                     std::abs(j[0][1] - std::sinh(xi)),
                                     std::abs(j[1][0] - std::sinh(xi)),
                                     std::abs(j[1][1] - std::cosh(xi))});
        contrast.push_back({{"xi", xi}, {"jacobian_deviation", err}});
    }

    json rep = {{"command", "fixedmu-report"},
                {"mu", a.mu},
                {"beta", a.beta},
                {"orthochronous_checks",
                 {{"t2_entry", ex.t2_entry},
                  {"t2_closed_form", ex.t2_closed_form},
                  {"t2_orthochronous", ex.t2_orthochronous},
                  {"lminus_entry", ex.lminus_entry},
                  {"lminus_closed_form", ex.lminus_closed_form},
                  {"lminus_orthochronous", ex.lminus_orthochronous},
                  {"lplus_entry", ex.lplus_entry},
                  {"lplus_closed_form", ex.lplus_closed_form},
                  {"lplus_orthochronous", ex.lplus_orthochronous}}},
                {"deviation_norms", dev},
                {"variable_mass_contrast", contrast},
                {"generator_table", csv_path}};
    std::ofstream(a.out) << rep.dump(2) << "\n";
    std::cout << rep.dump(2) << "\n";
    return kExitOk;
}

// ── verify ───────────────────────────────────────────────────────────────────

struct VerifyArgs {
    std::uint64_t seed = 20250810;
    double samples = 1.0;
    std::string inject_fault;
    std::string out;
};

int cmd_verify(const VerifyArgs& a) {
    using namespace dqw;
    VerifyOptions opt;
    opt.seed = a.seed;
    opt.samples_scale = a.samples;
    if (a.inject_fault == "clifford")
        opt.clifford_tau2_fault = 1e-6;
    else if (!a.inject_fault.empty())
        throw CLI::ValidationError("--inject-fault", "unknown fault '" + a.inject_fault + "'");

    const auto checks = verify_all(opt);
    json rep = json::array();
    bool all_pass = true;
    for (const auto& c : checks) {
        all_pass = all_pass && c.pass;
        rep.push_back({{"suite", c.suite},
                       {"invariant", c.name},
                       {"max_residual", c.max_residual},
                       {"tolerance", c.tolerance},
                       {"samples", c.samples},
                       {"pass", c.pass}});
        std::printf("[%s] %-70s residual %.3e tol %.0e\n", c.pass ? "PASS" : "FAIL",
                    (c.suite + ": " + c.name).c_str(), c.max_residual, c.tolerance);
    }
    json doc = {{"command", "verify"},
                {"generator", Rng::algorithm()},
                {"seed", a.seed},
                {"samples_scale", a.samples},
                {"all_pass", all_pass},
                {"checks", rep}};
    if (!a.out.empty()) std::ofstream(a.out) << doc.dump(2) << "\n";
    std::printf("%s (%zu checks)\n", all_pass ? "ALL PASS" : "FAILURES PRESENT",
                checks.size());
    return all_pass ? kExitOk : kExitInvariant;
}

// ── bench ────────────────────────────────────────────────────────────────────

struct BenchArgs {
    std::uint64_t seed = 12345;
    long steps = 1000;
    double tol = 1e-10;
    std::string out = "bench.json";
};

int cmd_bench(const BenchArgs& a) {
    using namespace dqw;
    using clock = std::chrono::steady_clock;
    json runs = json::array();

    auto bench_case = [&](WalkMode mode, int n, int ntau, long steps) {
        Rng rng(a.seed);
        SpinorField psi = mode == WalkMode::fixed_mass ? SpinorField::fixed_mass(0.3, n)
                                                       : SpinorField::variable_mass(n, ntau);
        for (auto& amp : psi.amplitudes()) amp = rng.complex_normal();
        psi.normalize();

        const WalkOperator sten = mode == WalkMode::fixed_mass
                                      ? build_fixed_mass_walk(0.3, n)
                                      : build_variable_mass_walk(n, ntau);
        const WalkOperator spec =
            mode == WalkMode::fixed_mass
                ? build_fixed_mass_walk(0.3, n, Representation::spectral)
                : build_variable_mass_walk(n, ntau, Representation::spectral);

        // equivalence gate before timing
        const SpinorField f1 = evolve(sten, psi, steps);
        const SpinorField f2 = evolve(spec, psi, steps);
        double diff = 0.0;
        for (std::size_t i = 0; i < f1.amplitudes().size(); ++i)
            diff = std::max(diff, std::abs(f1.amplitudes()[i] - f2.amplitudes()[i]));
        if (diff > a.tol)
            throw invariant_failure("bench: stencil/spectral equivalence gate failed, diff = " +
                                    format_double(diff));

        const double sites = static_cast<double>(n) * ntau;
        for (const char* impl : {"stencil", "spectral"}) {
            const WalkOperator& op = impl == std::string("stencil") ? sten : spec;
            const auto t0 = clock::now();
            const SpinorField out = evolve(op, psi, steps);
            const auto t1 = clock::now();
            const double secs = std::chrono::duration<double>(t1 - t0).count();
            runs.push_back(
                {{"impl", impl},
                 {"mode", mode == WalkMode::fixed_mass ? "fixed_mass" : "variable_mass"},
                 {"N", n},
                 {"Ntau", ntau},
                 {"steps", steps},
                 {"seconds", secs},
                 {"sites_per_sec", secs > 0 ? sites * steps / secs : 0.0},
                 {"state_hash", state_hash(out)},
                 {"equivalence_max_diff", diff}});
        }
    };

    for (const int n : {1 << 10, 1 << 14, 1 << 18})
        bench_case(WalkMode::fixed_mass, n, 1, a.steps);
    bench_case(WalkMode::variable_mass, 256, 256, std::min<long>(a.steps, 100));

    json doc = {{"command", "bench"},
                {"generator", Rng::algorithm()},
                {"seed", a.seed},
                {"tolerance", a.tol},
                {"runs", runs}};
    std::ofstream(a.out) << doc.dump(2) << "\n";
    std::cout << doc.dump(2) << "\n";
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Dirac quantum walk: evolution, spectra, mass-shell geometry and "
                 "changes of inertial frame"};
    app.require_subcommand(1);

    Config cfg;
    std::string config_path;

    EvolveArgs ev;
    auto* evolve_cmd = app.add_subcommand("evolve", "evolve a wavepacket");
    evolve_cmd->add_option("--config", config_path, "JSON config file (flags win)");
    evolve_cmd->add_option("--mu", ev.mu, "mass angle (fixed-mass walk)");
    evolve_cmd->add_option("--lattice-n", ev.n, "number of positions");
    evolve_cmd->add_option("--lattice-ntau", ev.ntau,
                           "proper-time sites (0 = fixed-mass walk)");
    evolve_cmd->add_option("--steps", ev.steps, "number of walk steps");
    evolve_cmd->add_option("--impl", ev.impl, "stencil|spectral")
        ->check(CLI::IsMember({"stencil", "spectral"}));
    evolve_cmd->add_option("--out", ev.out, "snapshot CSV path");
    evolve_cmd->add_option("--k0", ev.k0, "packet centre momentum");
    evolve_cmd->add_option("--mu0", ev.mu0, "packet centre mass momentum (variable)");
    evolve_cmd->add_option("--sigma-k", ev.sigma_k, "packet momentum width");
    evolve_cmd->add_option("--sigma-mu", ev.sigma_mu, "packet mass-momentum width");
    evolve_cmd->add_option("--x0", ev.x0, "packet centre position (-1 = N/4)");
    evolve_cmd->add_option("--tau0", ev.tau0, "packet centre proper time (-1 = Ntau/2)");

    int grid = 64;
    std::string grid_out = "grid.csv";
    auto* disp_cmd = app.add_subcommand("dispersion", "export the dispersion-grid CSV");
    disp_cmd->add_option("--grid", grid, "grid resolution per axis");
    disp_cmd->add_option("--out", grid_out, "output CSV path");
    auto* cone_cmd = app.add_subcommand("cone", "export the cone-sample CSV");
    cone_cmd->add_option("--grid", grid, "grid resolution per axis");
    cone_cmd->add_option("--out", grid_out, "output CSV path");

    BoostArgs bo;
    std::string phase_text;
    auto* boost_cmd = app.add_subcommand("boost", "apply a deformed boost to shell modes");
    boost_cmd->add_option("--config", config_path,
                          "JSON config {xi, phase, f, modes_file} (flags win)");
    boost_cmd->add_option("--xi", bo.xi, "boost rapidity");
    boost_cmd->add_option("--phase", phase_text, "linear phase a0,a1,a2");
    boost_cmd->add_option("--modes", bo.modes_file, "input modes CSV (k,mu,re_R,...)");
    boost_cmd->add_option("--f", bo.f, "cone dilation used for the frame change");
    boost_cmd->add_option("--grid", bo.grid, "generated mode grid when no file given");
    boost_cmd->add_option("--tol", bo.tol, "residual tolerance");
    boost_cmd->add_option("--out", bo.out, "output CSV path");

    FixedMuArgs fm;
    std::string mu_list_text;
    auto* fixedmu_cmd =
        app.add_subcommand("fixedmu-report", "fixed-mass group report and limit probe");
    fixedmu_cmd->add_option("--mu", fm.mu, "mass angle for the exclusion checks");
    fixedmu_cmd->add_option("--beta", fm.beta, "rapidity for the exclusion checks");
    fixedmu_cmd->add_option("--mu-list", mu_list_text,
                            "comma-separated mass angles for the limit probe");
    fixedmu_cmd->add_option("--out", fm.out, "output JSON path");

    VerifyArgs vf;
    auto* verify_cmd = app.add_subcommand("verify", "run every module's invariant suite");
    verify_cmd->add_option("--seed", vf.seed, "PRNG seed");
    verify_cmd->add_option("--samples", vf.samples, "sample-count scale factor");
    verify_cmd->add_option("--inject-fault", vf.inject_fault,
                           "fault-injection hook (clifford)");
    verify_cmd->add_option("--out", vf.out, "JSON report path");

    BenchArgs be;
    auto* bench_cmd = app.add_subcommand("bench", "time stencil vs spectral evolution");
    bench_cmd->add_option("--seed", be.seed, "PRNG seed");
    bench_cmd->add_option("--steps", be.steps, "steps per timing run");
    bench_cmd->add_option("--tol", be.tol, "equivalence gate tolerance");
    bench_cmd->add_option("--out", be.out, "JSON report path");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitConfig;
    }

    try {
        if (!config_path.empty()) cfg.load(config_path);

        if (evolve_cmd->parsed()) {
            cfg.fill(*evolve_cmd, "--mu", "mu", ev.mu);
            cfg.fill(*evolve_cmd, "--lattice-n", "lattice-n", ev.n);
            cfg.fill(*evolve_cmd, "--lattice-ntau", "lattice-ntau", ev.ntau);
            cfg.fill(*evolve_cmd, "--steps", "steps", ev.steps);
            cfg.fill(*evolve_cmd, "--impl", "impl", ev.impl);
            cfg.fill(*evolve_cmd, "--out", "out", ev.out);
            cfg.fill(*evolve_cmd, "--k0", "k0", ev.k0);
            if (ev.steps < 0) throw CLI::ValidationError("--steps", "must be >= 0");
            return cmd_evolve(ev);
        }
        if (disp_cmd->parsed()) {
            dqw::write_dispersion_grid(grid_out, grid, grid);
            std::cout << "wrote " << grid_out << "\n";
            return kExitOk;
        }
        if (cone_cmd->parsed()) {
            dqw::write_cone_samples(grid_out, grid, grid);
            std::cout << "wrote " << grid_out << "\n";
            return kExitOk;
        }
        if (boost_cmd->parsed()) {
            cfg.fill(*boost_cmd, "--xi", "xi", bo.xi);
            cfg.fill(*boost_cmd, "--modes", "modes_file", bo.modes_file);
            cfg.fill(*boost_cmd, "--tol", "tol", bo.tol);
            if (boost_cmd->count("--phase") > 0)
                bo.phase = parse_phase(phase_text);
            else if (cfg.raw().contains("phase"))
                bo.phase = cfg.raw()["phase"].get<std::vector<double>>();
            if (cfg.raw().contains("f") && boost_cmd->count("--f") == 0)
                bo.f = cfg.raw()["f"].get<std::string>();
            if (bo.phase.size() != 3)
                throw CLI::ValidationError("--phase", "expected three reals");
            if (bo.tol <= 0) throw CLI::ValidationError("--tol", "must be > 0");
            return cmd_boost(bo);
        }
        if (fixedmu_cmd->parsed()) {
            if (!mu_list_text.empty()) {
                fm.mu_list.clear();
                std::stringstream ss(mu_list_text);
                std::string cell;
                while (std::getline(ss, cell, ',')) fm.mu_list.push_back(dqw::parse_double(cell));
            }
            return cmd_fixedmu_report(fm);
        }
        if (verify_cmd->parsed()) {
            if (vf.samples <= 0) throw CLI::ValidationError("--samples", "must be > 0");
            return cmd_verify(vf);
        }
        if (bench_cmd->parsed()) {
            if (be.tol <= 0) throw CLI::ValidationError("--tol", "must be > 0");
            return cmd_bench(be);
        }
    } catch (const CLI::ValidationError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kExitConfig;
    } catch (const nlohmann::json::exception& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kExitConfig;
    } catch (const dqw::error& e) {
        std::cerr << "numeric/domain error: " << e.what() << "\n";
        return kExitNumeric;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitNumeric;
    }
    return kExitConfig;
}
