#include "qet/scenario.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>

#include "json.hpp"

namespace qet {

using json = nlohmann::json;
using ojson = nlohmann::ordered_json;

namespace {

const std::vector<std::string> kTopKeys = {"name",  "fields",     "probe",      "T",
                                           "lambda", "grid",      "frames",     "tolerances",
                                           "seed",  "oracle_samples", "output"};
const std::vector<std::string> kFieldsKeys = {"a_m", "f_o", "window"};
const std::vector<std::string> kCurlKeys = {"family", "amplitude", "sigma", "center", "axis"};
const std::vector<std::string> kGridFieldKeys = {"family", "path", "sigma"};
const std::vector<std::string> kWindowKeys = {"center", "radius"};
const std::vector<std::string> kGridKeys = {"n", "k_max"};
const std::vector<std::string> kFrameKeys = {"times", "n", "half_extent"};
const std::vector<std::string> kTolKeys = {"kernel_rel", "kernel_l1_floor", "divergence"};
const std::vector<std::string> kOutputKeys = {"dir", "results", "summary", "frames"};

std::string join_path(const std::string& parent, const std::string& key) {
    return parent.empty() ? key : parent + "." + key;
}

std::string show(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.10g", v);
    return buf;
}

class Reader {
public:
    std::vector<std::string> issues;

    void fail(const std::string& path, const std::string& msg) { issues.push_back(path + ": " + msg); }

    // Flags unknown keys; returns false when `j` is not an object at all.
    bool object(const json& j, const std::string& path, const std::vector<std::string>& allowed) {
        if (!j.is_object()) {
            fail(path, std::string("expected an object, got ") + j.type_name());
            return false;
        }
        for (const auto& [key, _] : j.items()) {
            if (std::find(allowed.begin(), allowed.end(), key) != allowed.end()) continue;
            std::string msg = "unknown key \"" + key + "\"";
            if (auto s = suggest_key(key, allowed)) msg += "; did you mean \"" + *s + "\"?";
            fail(join_path(path, key), msg);
        }
        return true;
    }

    std::optional<double> number(const json& obj, const std::string& key, const std::string& path) {
        if (!obj.contains(key)) return std::nullopt;
        const json& v = obj.at(key);
        if (!v.is_number()) {
            fail(join_path(path, key), std::string("expected a number, got ") + v.type_name());
            return std::nullopt;
        }
        return v.get<double>();
    }

    std::optional<std::uint64_t> unsigned_integer(const json& obj, const std::string& key, const std::string& path) {
        if (!obj.contains(key)) return std::nullopt;
        const json& v = obj.at(key);
        if (!v.is_number_unsigned()) {
            fail(join_path(path, key), "expected a non-negative integer");
            return std::nullopt;
        }
        return v.get<std::uint64_t>();
    }

    std::optional<std::string> string(const json& obj, const std::string& key, const std::string& path) {
        if (!obj.contains(key)) return std::nullopt;
        const json& v = obj.at(key);
        if (!v.is_string()) {
            fail(join_path(path, key), std::string("expected a string, got ") + v.type_name());
            return std::nullopt;
        }
        return v.get<std::string>();
    }

    std::optional<Vec3> vec3(const json& obj, const std::string& key, const std::string& path) {
        if (!obj.contains(key)) return std::nullopt;
        const json& v = obj.at(key);
        if (!v.is_array() || v.size() != 3 || !std::all_of(v.begin(), v.end(), [](const json& e) { return e.is_number(); })) {
            fail(join_path(path, key), "expected an array of 3 numbers");
            return std::nullopt;
        }
        return Vec3{v[0].get<double>(), v[1].get<double>(), v[2].get<double>()};
    }

    // A number or a non-empty array of numbers.
    std::optional<std::vector<double>> number_list(const json& obj, const std::string& key, const std::string& path) {
        if (!obj.contains(key)) return std::nullopt;
        const json& v = obj.at(key);
        if (v.is_number()) return std::vector<double>{v.get<double>()};
        if (!v.is_array() || v.empty()) {
            fail(join_path(path, key), "expected a number or a non-empty array of numbers");
            return std::nullopt;
        }
        std::vector<double> out;
        for (std::size_t i = 0; i < v.size(); ++i) {
            if (!v[i].is_number()) {
                fail(join_path(path, key) + "[" + std::to_string(i) + "]", "expected a number");
                return std::nullopt;
            }
            out.push_back(v[i].get<double>());
        }
        return out;
    }
};

std::string read_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open " + path.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    if (in.bad()) throw IoError("read failed: " + path.string());
    return ss.str();
}

void parse_field(Reader& r, const json& j, const std::string& path, const std::filesystem::path& base,
                 FieldSpec& out) {
    if (!j.is_object()) {
        r.fail(path, std::string("expected an object, got ") + j.type_name());
        return;
    }
    const std::string family = r.string(j, "family", path).value_or("curl_gaussian");
    if (family == "curl_gaussian") {
        r.object(j, path, kCurlKeys);
        out.family = FieldFamily::CurlGaussian;
        out.amplitude = r.number(j, "amplitude", path).value_or(1.0);
        out.sigma = r.number(j, "sigma", path).value_or(1.0);
        out.center = r.vec3(j, "center", path).value_or(Vec3{});
        out.axis = r.vec3(j, "axis", path).value_or(Vec3{0, 0, 1});
        if (!(out.sigma > 0.0)) r.fail(join_path(path, "sigma"), "must be > 0, got " + show(out.sigma));
        const double len = norm(out.axis);
        if (!(len > 0.0))
            r.fail(join_path(path, "axis"), "must be a non-zero vector");
        else
            out.axis = out.axis * (1.0 / len);
    } else if (family == "grid") {
        r.object(j, path, kGridFieldKeys);
        out.family = FieldFamily::GridSampled;
        out.grid_sigma = r.number(j, "sigma", path);
        if (out.grid_sigma && !(*out.grid_sigma > 0.0))
            r.fail(join_path(path, "sigma"), "must be > 0, got " + show(*out.grid_sigma));
        const auto p = r.string(j, "path", path);
        if (!p) {
            r.fail(join_path(path, "path"), "required for family \"grid\"");
            return;
        }
        out.path = std::filesystem::path(*p).is_absolute() ? std::filesystem::path(*p) : base / *p;
        try {
            out.file_digest = fnv1a(read_file(out.path));
        } catch (const IoError& e) {
            r.fail(join_path(path, "path"), e.what());
        }
    } else {
        std::string msg = "unknown family \"" + family + "\"";
        if (auto s = suggest_key(family, {"curl_gaussian", "grid"})) msg += "; did you mean \"" + *s + "\"?";
        r.fail(join_path(path, "family"), msg);
    }
}

std::optional<ShapeField> build_field(Reader& r, const FieldSpec& spec, const std::string& path) {
    try {
        if (spec.family == FieldFamily::CurlGaussian)
            return make_curl_gaussian(spec.amplitude, spec.sigma, spec.center, spec.axis);
        return load_grid_field_csv(spec.path, spec.grid_sigma);
    } catch (const Error& e) {
        r.fail(path, e.what());
        return std::nullopt;
    }
}

void check_divergence(Reader& r, const ShapeField& f, double tol, const std::string& path) {
    if (f.family() == FieldFamily::CurlGaussian) return;
    const auto rep = check_divergence_free(f, tol);
    if (!rep.pass)
        r.fail(path, "not divergence-free: max |div| = " + show(rep.max_residual) + " exceeds " + show(rep.threshold));
}

ojson field_json(const FieldSpec& f) {
    ojson j;
    if (f.family == FieldFamily::CurlGaussian) {
        j["family"] = "curl_gaussian";
        j["amplitude"] = f.amplitude;
        j["sigma"] = f.sigma;
        j["center"] = {f.center.x, f.center.y, f.center.z};
        j["axis"] = {f.axis.x, f.axis.y, f.axis.z};
    } else {
        j["family"] = "grid";
        j["digest"] = hex64(f.file_digest);
        j["sigma"] = f.grid_sigma ? ojson(*f.grid_sigma) : ojson(nullptr);
    }
    return j;
}

// Rejects repeated keys, which the JSON library would otherwise resolve silently.
json parse_strict(std::string_view text) {
    std::vector<std::set<std::string>> open;
    std::vector<std::string> duplicates;
    auto cb = [&](int, json::parse_event_t ev, json& parsed) {
        if (ev == json::parse_event_t::object_start) open.emplace_back();
        else if (ev == json::parse_event_t::object_end) open.pop_back();
        else if (ev == json::parse_event_t::key && !open.empty()) {
            const auto key = parsed.get<std::string>();
            if (!open.back().insert(key).second) duplicates.push_back(key);
        }
        return true;
    };
    json j;
    try {
        j = json::parse(text.begin(), text.end(), cb, true, true);
    } catch (const json::parse_error& e) {
        throw ScenarioError({std::string("syntax: ") + e.what()});
    }
    if (!duplicates.empty()) {
        std::vector<std::string> issues;
        for (const auto& d : duplicates) issues.push_back("syntax: duplicate key \"" + d + "\"");
        throw ScenarioError(issues);
    }
    return j;
}

}  // namespace

ScenarioError::ScenarioError(std::vector<std::string> issues)
    : ValidationError([&] {
          std::string msg = "invalid scenario";
          for (const auto& i : issues) msg += "\n  " + i;
          return msg;
      }()),
      issues_(std::move(issues)) {}

std::size_t edit_distance(std::string_view a, std::string_view b) {
    std::vector<std::size_t> row(b.size() + 1);
    for (std::size_t j = 0; j <= b.size(); ++j) row[j] = j;
    for (std::size_t i = 1; i <= a.size(); ++i) {
        std::size_t diag = row[0];
        row[0] = i;
        for (std::size_t j = 1; j <= b.size(); ++j) {
            const std::size_t up = row[j];
            row[j] = std::min({row[j] + 1, row[j - 1] + 1, diag + (a[i - 1] == b[j - 1] ? 0 : 1)});
            diag = up;
        }
    }
    return row[b.size()];
}

std::optional<std::string> suggest_key(std::string_view key, const std::vector<std::string>& candidates) {
    std::optional<std::string> best;
    std::size_t best_d = 0;
    for (const auto& c : candidates) {
        const std::size_t d = edit_distance(key, c);
        if (!best || d < best_d) {
            best = c;
            best_d = d;
        }
    }
    const std::size_t limit = std::max<std::size_t>(2, key.size() / 3);
    if (best && best_d <= limit) return best;
    return std::nullopt;
}

std::uint64_t fnv1a(std::string_view bytes, std::uint64_t h) {
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return h;
}

std::string hex64(std::uint64_t v) {
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
    return buf;
}

const char* probe_name(Probe p) {
    switch (p) {
        case Probe::Spin: return "spin";
        case Probe::Oscillator: return "oscillator";
        case Probe::Both: return "both";
    }
    return "both";
}

ProtocolConfig Scenario::config(double T_value, double lambda_value) const {
    if (!a_m || !f_o) throw ValidationError("scenario fields were not built");
    ProtocolConfig cfg{*a_m, *f_o, T_value, lambda_value, grid, {}, 1e-3};
    cfg.tolerance = KernelTolerance{tolerances.kernel_rel, tolerances.kernel_l1_floor};
    cfg.divergence_tol = tolerances.divergence;
    return cfg;
}

WindowFunction Scenario::window_function() const {
    if (window) return WindowFunction(window->center, window->radius);
    return WindowFunction(a_m ? a_m->center() : a_m_spec.center, 3.0 * (a_m ? a_m->sigma() : a_m_spec.sigma));
}

Scenario parse_scenario(const std::filesystem::path& path) {
    if (!std::filesystem::exists(path)) throw IoError("scenario file not found: " + path.string());
    return parse_scenario_text(read_file(path), path.parent_path().empty() ? "." : path.parent_path());
}

Scenario parse_scenario_text(std::string_view text, const std::filesystem::path& base_dir) {
    const json root = parse_strict(text);
    Reader r;
    Scenario s;
    if (!r.object(root, "", kTopKeys)) throw ScenarioError(r.issues);

    s.name = r.string(root, "name", "").value_or("");

    // fields
    bool have_f_o = false;
    if (!root.contains("fields")) {
        r.fail("fields", "required");
    } else if (const json& fields = root.at("fields"); r.object(fields, "fields", kFieldsKeys)) {
        if (!fields.contains("a_m"))
            r.fail("fields.a_m", "required");
        else
            parse_field(r, fields.at("a_m"), "fields.a_m", base_dir, s.a_m_spec);
        if (fields.contains("f_o")) {
            parse_field(r, fields.at("f_o"), "fields.f_o", base_dir, s.f_o_spec);
            have_f_o = true;
        }
        if (fields.contains("window")) {
            const json& w = fields.at("window");
            if (r.object(w, "fields.window", kWindowKeys)) {
                WindowSpec ws;
                ws.center = r.vec3(w, "center", "fields.window").value_or(s.a_m_spec.center);
                ws.radius = r.number(w, "radius", "fields.window").value_or(3.0 * s.a_m_spec.sigma);
                if (!(ws.radius > 0.0)) r.fail("fields.window.radius", "must be > 0, got " + show(ws.radius));
                s.window = ws;
            }
        }
    }
    if (!have_f_o) s.f_o_spec = s.a_m_spec;

    // probe
    if (auto p = r.string(root, "probe", "")) {
        if (*p == "spin") s.probe = Probe::Spin;
        else if (*p == "oscillator") s.probe = Probe::Oscillator;
        else if (*p == "both") s.probe = Probe::Both;
        else {
            std::string msg = "unknown probe \"" + *p + "\"";
            if (auto sg = suggest_key(*p, {"spin", "oscillator", "both"})) msg += "; did you mean \"" + *sg + "\"?";
            r.fail("probe", msg);
        }
    }

    if (auto t = r.number_list(root, "T", "")) s.T = *t;
    else if (!root.contains("T")) r.fail("T", "required");
    for (std::size_t i = 0; i < s.T.size(); ++i) {
        if (!(s.T[i] > 0.0)) r.fail("T[" + std::to_string(i) + "]", "must be > 0, got " + show(s.T[i]));
        if (i > 0 && !(s.T[i] > s.T[i - 1]))
            r.fail("T[" + std::to_string(i) + "]", "T list must be strictly ascending");
    }

    if (auto l = r.number_list(root, "lambda", "")) s.lambda = *l;
    for (std::size_t i = 0; i < s.lambda.size(); ++i)
        if (!(s.lambda[i] >= 0.0) || !std::isfinite(s.lambda[i]))
            r.fail("lambda[" + std::to_string(i) + "]", "must be finite and >= 0, got " + show(s.lambda[i]));

    if (root.contains("grid")) {
        const json& g = root.at("grid");
        if (r.object(g, "grid", kGridKeys)) {
            GridSpec gs;
            if (auto n = r.unsigned_integer(g, "n", "grid")) gs.n = *n;
            gs.k_max = r.number(g, "k_max", "grid");
            if (gs.n < 4 || gs.n % 2 != 0) r.fail("grid.n", "must be an even integer >= 4");
            if (gs.k_max && !(*gs.k_max > 0.0)) r.fail("grid.k_max", "must be > 0");
            s.grid = gs;
        }
    }

    if (root.contains("frames")) {
        const json& f = root.at("frames");
        if (r.object(f, "frames", kFrameKeys)) {
            if (auto t = r.number_list(f, "times", "frames")) s.frames.times = *t;
            if (auto n = r.unsigned_integer(f, "n", "frames")) s.frames.n = *n;
            s.frames.half_extent = r.number(f, "half_extent", "frames");
            for (std::size_t i = 0; i < s.frames.times.size(); ++i)
                if (!(s.frames.times[i] >= 0.0))
                    r.fail("frames.times[" + std::to_string(i) + "]", "must be >= 0");
            if (s.frames.n < 4 || s.frames.n % 2 != 0) r.fail("frames.n", "must be an even integer >= 4");
            if (s.frames.half_extent && !(*s.frames.half_extent > 0.0)) r.fail("frames.half_extent", "must be > 0");
        }
    }

    if (root.contains("tolerances")) {
        const json& t = root.at("tolerances");
        if (r.object(t, "tolerances", kTolKeys)) {
            s.tolerances.kernel_rel = r.number(t, "kernel_rel", "tolerances").value_or(s.tolerances.kernel_rel);
            s.tolerances.kernel_l1_floor =
                r.number(t, "kernel_l1_floor", "tolerances").value_or(s.tolerances.kernel_l1_floor);
            s.tolerances.divergence = r.number(t, "divergence", "tolerances").value_or(s.tolerances.divergence);
            for (const auto& [key, v] : {std::pair<const char*, double>{"kernel_rel", s.tolerances.kernel_rel},
                                         {"kernel_l1_floor", s.tolerances.kernel_l1_floor},
                                         {"divergence", s.tolerances.divergence}})
                if (!(v > 0.0)) r.fail(std::string("tolerances.") + key, "must be > 0");
        }
    }

    if (auto seed = r.unsigned_integer(root, "seed", "")) s.seed = *seed;
    if (auto n = r.unsigned_integer(root, "oracle_samples", "")) {
        s.oracle_samples = *n;
        if (*n == 0) r.fail("oracle_samples", "must be >= 1");
    }

    if (root.contains("output")) {
        const json& o = root.at("output");
        if (r.object(o, "output", kOutputKeys)) {
            if (auto d = r.string(o, "dir", "output")) s.output.dir = *d;
            if (auto d = r.string(o, "results", "output")) s.output.results = *d;
            if (auto d = r.string(o, "summary", "output")) s.output.summary = *d;
            if (auto d = r.string(o, "frames", "output")) {
                if (*d == "csv") s.output.frames = FrameFormat::Csv;
                else if (*d == "binary") s.output.frames = FrameFormat::Binary;
                else r.fail("output.frames", "expected \"csv\" or \"binary\", got \"" + *d + "\"");
            }
        }
    }

    // Physics checks need the constructed fields, so they run only on a
    // structurally clean document.
    if (!r.issues.empty()) throw ScenarioError(r.issues);
    s.a_m = build_field(r, s.a_m_spec, "fields.a_m");
    s.f_o = build_field(r, s.f_o_spec, have_f_o ? "fields.f_o" : "fields.a_m");
    if (s.a_m) check_divergence(r, *s.a_m, s.tolerances.divergence, "fields.a_m");
    if (s.f_o && have_f_o) check_divergence(r, *s.f_o, s.tolerances.divergence, "fields.f_o");
    if (s.a_m && s.f_o) {
        const double bound = causal_time_bound(*s.a_m, *s.f_o);
        for (std::size_t i = 0; i < s.T.size(); ++i)
            if (!(s.T[i] > bound))
                r.fail("T[" + std::to_string(i) + "]", "T = " + show(s.T[i]) +
                                                           " violates causal decoupling; need T > " + show(bound));
    }
    if (!r.issues.empty()) throw ScenarioError(r.issues);
    return s;
}

std::string canonical_scenario(const Scenario& s) {
    ojson j;
    j["a_m"] = field_json(s.a_m_spec);
    j["f_o"] = field_json(s.f_o_spec);
    if (s.window)
        j["window"] = {{"center", {s.window->center.x, s.window->center.y, s.window->center.z}},
                       {"radius", s.window->radius}};
    else
        j["window"] = nullptr;
    j["probe"] = probe_name(s.probe);
    j["T"] = s.T;
    j["lambda"] = s.lambda;
    if (s.grid)
        j["grid"] = {{"n", s.grid->n}, {"k_max", s.grid->k_max ? ojson(*s.grid->k_max) : ojson(nullptr)}};
    else
        j["grid"] = nullptr;
    j["frames"] = {{"times", s.frames.times},
                   {"n", s.frames.n},
                   {"half_extent", s.frames.half_extent ? ojson(*s.frames.half_extent) : ojson(nullptr)}};
    j["tolerances"] = {{"kernel_rel", s.tolerances.kernel_rel},
                       {"kernel_l1_floor", s.tolerances.kernel_l1_floor},
                       {"divergence", s.tolerances.divergence}};
    j["seed"] = s.seed;
    j["oracle_samples"] = s.oracle_samples;
    return j.dump();
}

std::uint64_t scenario_hash(const Scenario& s) { return fnv1a(canonical_scenario(s)); }

}  // namespace qet
