#include "qet/results_io.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <exception>
#include <fstream>
#include <map>
#include <sstream>

#include "qet/errors.hpp"
#include "qet/reduction.hpp"

namespace qet {

using ojson = nlohmann::ordered_json;

static_assert(std::endian::native == std::endian::little, "frame binary I/O assumes a little-endian host");

namespace {

ojson number_or_null(double v) { return std::isfinite(v) ? ojson(v) : ojson(nullptr); }

struct Point {
    double lambda;
    double T;
};

// Rethrows the active exception with the sweep coordinate prepended, keeping
// its category so the CLI exit code survives.
[[noreturn]] void rethrow_at(const Point& p) {
    std::ostringstream where;
    where << "at lambda = " << p.lambda << ", T = " << p.T << ": ";
    try {
        throw;
    } catch (const ValidationError& e) {
        throw ValidationError(where.str() + e.what());
    } catch (const NumericalError& e) {
        throw NumericalError(where.str() + e.what());
    } catch (const IoError& e) {
        throw IoError(where.str() + e.what());
    } catch (const std::exception& e) {
        throw Error(where.str() + e.what());
    }
}

std::string format17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

}  // namespace

std::vector<ResultRecord> run_scenario(const Scenario& s, unsigned workers) {
    std::vector<Point> points;
    for (double l : s.lambda)
        for (double t : s.T) points.push_back({l, t});
    const std::uint64_t hash = scenario_hash(s);
    workers = std::max(1u, workers);
    // A lone point gets the workers for its own reductions instead.
    const unsigned inner = points.size() == 1 ? workers : 1;

    std::vector<ProtocolIntegrals> integrals(points.size());
    parallel_for(points.size(), workers, [&](std::size_t i) {
        try {
            integrals[i] = protocol_integrals(s.config(points[i].T, points[i].lambda), inner);
        } catch (...) {
            rethrow_at(points[i]);
        }
    });

    std::vector<ResultRecord> out;
    for (std::size_t i = 0; i < points.size(); ++i) {
        const auto& in = integrals[i];
        SpinOutcome spin;
        OscillatorOutcome osc;
        try {
            spin = spin_outcome(in);
            osc = oscillator_outcome(in);
        } catch (...) {
            rethrow_at(points[i]);
        }
        const double ratio = std::exp(std::log(osc.D_ho) - spin.log_D_q);
        ResultRecord base{hash, RecordProbe::Spin, points[i].lambda, points[i].T, std::nullopt, std::nullopt, ratio};
        if (s.probe != Probe::Oscillator) {
            ResultRecord r = base;
            r.spin = spin;
            out.push_back(r);
        }
        if (s.probe != Probe::Spin) {
            ResultRecord r = base;
            r.probe = RecordProbe::Oscillator;
            r.oscillator = osc;
            out.push_back(r);
        }
    }
    return out;
}

ojson record_json(const ResultRecord& r) {
    ojson j;
    j["scenario_hash"] = hex64(r.scenario_hash);
    j["probe"] = r.probe == RecordProbe::Spin ? "spin" : "oscillator";
    j["lambda"] = r.lambda;
    j["T"] = r.T;
    const double E_m = r.spin ? r.spin->E_m : (r.oscillator ? r.oscillator->E_m : NAN);
    const double xi = r.spin ? r.spin->xi : (r.oscillator ? r.oscillator->xi : NAN);
    j["E_m"] = number_or_null(E_m);
    j["eta"] = r.spin ? number_or_null(r.spin->eta) : ojson(nullptr);
    j["xi"] = number_or_null(xi);
    j["theta_star"] = r.spin ? number_or_null(r.spin->theta_star) : ojson(nullptr);
    j["E_o"] = r.spin ? number_or_null(r.spin->E_o) : ojson(nullptr);
    j["D_q"] = r.spin ? number_or_null(r.spin->D_q) : ojson(nullptr);
    j["eta_prime"] = r.oscillator ? number_or_null(r.oscillator->eta_prime) : ojson(nullptr);
    j["theta_prime_star"] = r.oscillator ? number_or_null(r.oscillator->theta_prime_star) : ojson(nullptr);
    j["E_o_prime"] = r.oscillator ? number_or_null(r.oscillator->E_o_prime) : ojson(nullptr);
    j["D_ho"] = r.oscillator ? number_or_null(r.oscillator->D_ho) : ojson(nullptr);
    j["ratio"] = number_or_null(r.ratio);
    return j;
}

std::string results_text(std::uint64_t scenario_hash, const std::vector<ResultRecord>& records) {
    ojson header;
    header["engine_version"] = kEngineVersion;
    header["units"] = kUnits;
    header["scenario_hash"] = hex64(scenario_hash);
    std::string text = header.dump() + "\n";
    for (const auto& r : records) text += record_json(r).dump() + "\n";
    return text;
}

void write_results(const std::filesystem::path& path, std::uint64_t scenario_hash,
                   const std::vector<ResultRecord>& records) {
    write_text_file(path, results_text(scenario_hash, records));
}

ResultFile read_results(const std::filesystem::path& path) {
    const std::string text = read_text_file(path);
    ResultFile out;
    std::istringstream in(text);
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty()) continue;
        ojson j;
        try {
            j = ojson::parse(line);
        } catch (const std::exception& e) {
            throw IoError(path.string() + ":" + std::to_string(lineno) + ": " + e.what());
        }
        if (lineno == 1) {
            if (!j.contains("engine_version")) throw IoError(path.string() + ": missing header line");
            out.header = std::move(j);
        } else {
            out.records.push_back(std::move(j));
        }
    }
    if (out.header.is_null()) throw IoError(path.string() + ": empty result file");
    return out;
}

ojson scenario_summary(const Scenario& s, const std::vector<ResultRecord>& records) {
    ojson j;
    j["engine_version"] = kEngineVersion;
    j["units"] = kUnits;
    j["scenario_hash"] = hex64(scenario_hash(s));
    j["records"] = records.size();
    j["E_m"] = input_energy(*s.a_m);

    try {
        const auto c = crossover_amplitude(*s.a_m);
        j["lambda_c"] = c.lambda_c;
        j["lambda_c_residual"] = c.residual;
    } catch (const Error& e) {
        j["lambda_c"] = nullptr;
        j["lambda_c_error"] = e.what();
    }

    // E_o'/E_o against D_ho/D_q per (lambda, T).
    std::map<std::pair<double, double>, std::pair<const ResultRecord*, const ResultRecord*>> paired;
    for (const auto& r : records) {
        auto& slot = paired[{r.lambda, r.T}];
        (r.spin ? slot.first : slot.second) = &r;
    }
    double worst = 0.0;
    bool any = false;
    for (const auto& [_, pr] : paired) {
        if (!pr.first || !pr.second || pr.first->spin->E_o == 0.0) continue;
        const double lhs = pr.second->oscillator->E_o_prime / pr.first->spin->E_o;
        const double rhs = pr.first->ratio;
        if (!std::isfinite(lhs) || !std::isfinite(rhs)) continue;
        worst = std::max(worst, std::abs(lhs - rhs) / std::abs(rhs));
        any = true;
    }
    j["ratio_identity_max_rel_gap"] = any ? ojson(worst) : ojson(nullptr);

    std::vector<double> logT, logEo, logEop, logK;
    if (!s.lambda.empty()) {
        for (const auto& r : records) {
            if (r.lambda != s.lambda.front()) continue;
            if (r.spin && std::abs(r.spin->E_o) > 1e-300) {
                logT.push_back(std::log(r.T));
                logEo.push_back(std::log(std::abs(r.spin->E_o)));
                logK.push_back(std::log(std::abs(r.spin->kernel)));
            }
            if (r.oscillator && std::abs(r.oscillator->E_o_prime) > 1e-300)
                logEop.push_back(std::log(std::abs(r.oscillator->E_o_prime)));
        }
    }
    ojson slopes;
    if (logT.size() >= 2) {
        slopes["E_o"] = least_squares_slope(logT, logEo);
        slopes["kernel"] = least_squares_slope(logT, logK);
    } else {
        slopes["E_o"] = nullptr;
        slopes["kernel"] = nullptr;
    }
    if (logEop.size() >= 2) {
        std::vector<double> t;
        for (const auto& r : records)
            if (r.lambda == s.lambda.front() && r.oscillator && std::abs(r.oscillator->E_o_prime) > 1e-300)
                t.push_back(std::log(r.T));
        slopes["E_o_prime"] = least_squares_slope(t, logEop);
    } else {
        slopes["E_o_prime"] = nullptr;
    }
    j["scaling_slopes"] = slopes;
    return j;
}

// ---------------------------------------------------------------------------
// Frames
// ---------------------------------------------------------------------------

FrameFile frame_file(const DensityFrame& frame) {
    FrameFile f;
    f.t = frame.t;
    f.dims = {frame.grid.n, frame.grid.n, frame.grid.n};
    f.spacing = frame.grid.spacing();
    f.origin = frame.grid.origin();
    f.eps = frame.eps;
    return f;
}

void write_frame_csv(const std::filesystem::path& path, const FrameFile& frame) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot write " + path.string());
    out << "t,x,y,z,eps\n";
    const std::string t = format17(frame.t);
    std::size_t idx = 0;
    for (std::uint64_t i = 0; i < frame.dims[0]; ++i)
        for (std::uint64_t j = 0; j < frame.dims[1]; ++j)
            for (std::uint64_t k = 0; k < frame.dims[2]; ++k, ++idx) {
                const Vec3 x = frame.origin + frame.spacing * Vec3{static_cast<double>(i), static_cast<double>(j),
                                                                   static_cast<double>(k)};
                out << t << ',' << format17(x.x) << ',' << format17(x.y) << ',' << format17(x.z) << ','
                    << format17(frame.eps[idx]) << '\n';
            }
    if (!out) throw IoError("write failed: " + path.string());
}

FrameFile read_frame_csv(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open " + path.string());
    std::string line;
    if (!std::getline(in, line) || line != "t,x,y,z,eps") throw IoError(path.string() + ": missing t,x,y,z,eps header");
    FrameFile f;
    std::vector<Vec3> nodes;
    std::size_t lineno = 1;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty()) continue;
        double v[5];
        const char* p = line.c_str();
        for (int c = 0; c < 5; ++c) {
            char* end = nullptr;
            v[c] = std::strtod(p, &end);
            if (end == p || (c < 4 && *end != ',') || (c == 4 && *end != '\0'))
                throw IoError(path.string() + ":" + std::to_string(lineno) + ": malformed row");
            p = end + 1;
        }
        f.t = v[0];
        nodes.push_back({v[1], v[2], v[3]});
        f.eps.push_back(v[4]);
    }
    if (nodes.empty()) throw IoError(path.string() + ": no rows");
    // Rows are in index order with the last index fastest.
    f.origin = nodes.front();
    auto count = [&](auto coord) {
        std::vector<double> c;
        for (const auto& x : nodes) c.push_back(coord(x));
        std::sort(c.begin(), c.end());
        return static_cast<std::uint64_t>(std::unique(c.begin(), c.end()) - c.begin());
    };
    f.dims = {count([](const Vec3& x) { return x.x; }), count([](const Vec3& x) { return x.y; }),
              count([](const Vec3& x) { return x.z; })};
    if (f.dims[0] * f.dims[1] * f.dims[2] != nodes.size())
        throw IoError(path.string() + ": rows do not form a regular grid");
    f.spacing = f.dims[2] > 1 ? nodes[1].z - nodes[0].z : 0.0;
    return f;
}

void write_frame_binary(const std::filesystem::path& path, const FrameFile& frame) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot write " + path.string());
    out.write(kFrameMagic, sizeof kFrameMagic);
    out.write(reinterpret_cast<const char*>(frame.dims.data()), sizeof(std::uint64_t) * 3);
    const double header[5] = {frame.spacing, frame.origin.x, frame.origin.y, frame.origin.z, frame.t};
    out.write(reinterpret_cast<const char*>(header), sizeof header);
    out.write(reinterpret_cast<const char*>(frame.eps.data()),
              static_cast<std::streamsize>(frame.eps.size() * sizeof(double)));
    if (!out) throw IoError("write failed: " + path.string());
}

FrameFile read_frame_binary(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open " + path.string());
    char magic[8];
    if (!in.read(magic, sizeof magic) || std::memcmp(magic, kFrameMagic, sizeof magic) != 0)
        throw IoError(path.string() + ": not a frame file (bad magic bytes)");
    FrameFile f;
    double header[5];
    if (!in.read(reinterpret_cast<char*>(f.dims.data()), sizeof(std::uint64_t) * 3) ||
        !in.read(reinterpret_cast<char*>(header), sizeof header))
        throw IoError(path.string() + ": truncated header");
    f.spacing = header[0];
    f.origin = {header[1], header[2], header[3]};
    f.t = header[4];
    const std::uint64_t total = f.dims[0] * f.dims[1] * f.dims[2];
    const auto here = in.tellg();
    in.seekg(0, std::ios::end);
    const auto remaining = static_cast<std::uint64_t>(in.tellg() - here);
    if (remaining != total * sizeof(double))
        throw IoError(path.string() + ": payload is " + std::to_string(remaining) + " bytes, header declares " +
                      std::to_string(total * sizeof(double)));
    in.seekg(here);
    f.eps.resize(total);
    in.read(reinterpret_cast<char*>(f.eps.data()), static_cast<std::streamsize>(total * sizeof(double)));
    if (!in) throw IoError(path.string() + ": read failed");
    return f;
}

FrameGrid scenario_frame_grid(const Scenario& s) {
    const double t_max = s.frames.times.empty() ? 0.0 : *std::max_element(s.frames.times.begin(), s.frames.times.end());
    FrameGrid g = default_frame_grid(*s.a_m, t_max);
    g.n = s.frames.n;
    if (s.frames.half_extent) g.half_extent = *s.frames.half_extent;
    return g;
}

void write_text_file(const std::filesystem::path& path, const std::string& text) {
    std::error_code ec;
    if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path(), ec);
    if (ec) throw IoError("cannot create directory " + path.parent_path().string() + ": " + ec.message());
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot write " + path.string());
    out.write(text.data(), static_cast<std::streamsize>(text.size()));
    if (!out) throw IoError("write failed: " + path.string());
}

std::string read_text_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open " + path.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

}  // namespace qet
