#include <cmath>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "json.hpp"
#include "qet/dynamics.hpp"
#include "qet/errors.hpp"
#include "qet/negative_energy.hpp"
#include "qet/results_io.hpp"
#include "qet/scenario.hpp"
#include "qet/verify.hpp"

namespace fs = std::filesystem;
using namespace qet;
using ojson = nlohmann::ordered_json;

namespace {

struct Options {
    std::string scenario;
    std::string out;
    unsigned workers = 1;
    std::optional<std::uint64_t> seed;
    std::string format;
};

Scenario load(const Options& o) {
    if (o.scenario.empty()) throw ValidationError("--scenario is required");
    Scenario s = parse_scenario(o.scenario);
    if (o.seed) s.seed = *o.seed;
    if (!o.out.empty()) s.output.dir = o.out;
    if (o.format == "binary") s.output.frames = FrameFormat::Binary;
    else if (o.format == "csv") s.output.frames = FrameFormat::Csv;
    return s;
}

std::string g17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

int cmd_energy(const Options& o) {
    const Scenario s = load(o);
    ojson j;
    j["scenario_hash"] = hex64(scenario_hash(s));
    j["E_m"] = input_energy(*s.a_m);
    j["log_D_q"] = log_damping_spin(*s.a_m);
    j["D_ho"] = damping_oscillator(*s.a_m);
    j["effective_radius"] = s.a_m->effective_radius();
    write_text_file(s.output.dir / "energy.json", j.dump(2) + "\n");
    std::cout << j.dump(2) << "\n";
    return 0;
}

int run_sweep(const Options& o, bool single_point) {
    Scenario s = load(o);
    if (single_point) {
        s.T.resize(1);
        s.lambda.resize(1);
    }
    const auto records = run_scenario(s, o.workers);
    const auto hash = scenario_hash(s);
    write_results(s.output.dir / s.output.results, hash, records);
    if (!single_point) write_text_file(s.output.dir / s.output.summary, scenario_summary(s, records).dump(2) + "\n");
    for (const auto& r : records) std::cout << record_json(r).dump() << "\n";
    return 0;
}

int cmd_density(const Options& o) {
    const Scenario s = load(o);
    const FrameGrid grid = scenario_frame_grid(s);
    const fs::path dir = s.output.dir / "frames";
    fs::create_directories(dir);
    const double E_m = input_energy(*s.a_m);
    ojson index = ojson::array();
    for (std::size_t i = 0; i < s.frames.times.size(); ++i) {
        const double t = s.frames.times[i];
        const auto frame = energy_density_frame(*s.a_m, t, grid);
        char name[64];
        const bool bin = s.output.frames == FrameFormat::Binary;
        std::snprintf(name, sizeof name, "frame_%03zu.%s", i, bin ? "bin" : "csv");
        const auto file = frame_file(frame);
        if (bin) write_frame_binary(dir / name, file);
        else write_frame_csv(dir / name, file);
        ojson e;
        e["file"] = name;
        e["t"] = t;
        e["total_energy"] = total_energy(frame);
        e["E_m"] = E_m;
        e["window_energy"] = window_energy(frame, s.window_function());
        index.push_back(e);
        std::cout << e.dump() << "\n";
    }
    write_text_file(dir / "frames.json", index.dump(2) + "\n");
    return 0;
}

int cmd_negative_energy(const Options& o, std::size_t points, double extent, std::size_t lattice) {
    const auto state = gaussian_two_photon_state({0, 0, 3}, 0.5, {1, 0, 0}, lattice);
    std::string csv = "x,A,B_re,B_im,eps_min\n";
    std::size_t negative = 0;
    for (std::size_t i = 0; i < points; ++i) {
        const double x = points == 1 ? 0.0 : -extent + 2.0 * extent * static_cast<double>(i) / (points - 1);
        const auto m = two_photon_matrix_elements(state, {x, 0.0, 0.0});
        const auto opt = optimal_superposition(m.A, m.B);
        if (opt.eps_min < 0.0) ++negative;
        csv += g17(x) + "," + g17(m.A) + "," + g17(m.B.real()) + "," + g17(m.B.imag()) + "," + g17(opt.eps_min) + "\n";
    }
    const fs::path dir = o.out.empty() ? fs::path("qet_out") : fs::path(o.out);
    write_text_file(dir / "negative_energy.csv", csv);
    std::cout << csv;
    std::cerr << negative << " of " << points << " points with eps_min < 0\n";
    return 0;
}

int cmd_verify(const Options& o) {
    Scenario s;
    if (o.scenario.empty()) {
        s = parse_scenario_text(R"({"fields": {"a_m": {"sigma": 1}}, "T": [20, 40]})");
        if (o.seed) s.seed = *o.seed;
    } else {
        s = load(o);
    }
    bool ok = true;
    for (const auto& c : run_verification(s, o.workers)) {
        std::cout << (c.skipped ? "SKIP" : (c.pass ? "PASS" : "FAIL")) << "  " << c.name << "  " << c.detail << "\n";
        ok = ok && c.pass;
    }
    return ok ? 0 : 3;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Measurement-and-operation energy extraction in the free Maxwell vacuum"};
    app.require_subcommand(1);
    Options o;
    auto common = [&](CLI::App* sub, bool needs_scenario) {
        auto* opt = sub->add_option("--scenario", o.scenario, "Scenario JSON file");
        if (needs_scenario) opt->required();
        sub->add_option("--out", o.out, "Output directory (overrides output.dir)");
        sub->add_option("--workers", o.workers, "Worker threads")->check(CLI::Range(1u, 1024u));
        sub->add_option("--seed", o.seed, "RNG seed (overrides the scenario)");
        sub->add_option("--format", o.format, "Frame format")->check(CLI::IsMember({"csv", "binary"}));
    };
    auto* energy = app.add_subcommand("energy", "Input energy and damping factors of a_m");
    common(energy, true);
    auto* teleport = app.add_subcommand("teleport", "Both protocols at the first (T, lambda)");
    common(teleport, true);
    auto* sweep = app.add_subcommand("sweep", "All (lambda, T, probe) points plus summary");
    common(sweep, true);
    auto* density = app.add_subcommand("density", "Energy-density frames of the evolved probe state");
    common(density, true);
    auto* demo = app.add_subcommand("demo", "Demonstrations");
    demo->require_subcommand(1);
    auto* neg = demo->add_subcommand("negative-energy", "Optimal |0>,|2> superposition along a line");
    common(neg, false);
    std::size_t points = 25, lattice = 24;
    double extent = 3.0;
    neg->add_option("--points", points, "Sample points")->check(CLI::Range(std::size_t{1}, std::size_t{100000}));
    neg->add_option("--extent", extent, "Half-length of the sampled line");
    neg->add_option("--lattice", lattice, "Momentum lattice nodes per axis")->check(CLI::Range(std::size_t{2}, std::size_t{64}));
    auto* verify = app.add_subcommand("verify", "Oracle cross-checks; exit 3 on failure");
    common(verify, false);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : 2;
    }

    try {
        if (*energy) return cmd_energy(o);
        if (*teleport) return run_sweep(o, true);
        if (*sweep) return run_sweep(o, false);
        if (*density) return cmd_density(o);
        if (*neg) return cmd_negative_energy(o, points, extent, lattice);
        if (*verify) return cmd_verify(o);
    } catch (const ValidationError& e) {
        std::cerr << "validation error: " << e.what() << "\n";
        return 2;
    } catch (const NumericalError& e) {
        std::cerr << "numerical error: " << e.what() << "\n";
        return 3;
    } catch (const IoError& e) {
        std::cerr << "i/o error: " << e.what() << "\n";
        return 4;
    } catch (const fs::filesystem_error& e) {
        std::cerr << "i/o error: " << e.what() << "\n";
        return 4;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
