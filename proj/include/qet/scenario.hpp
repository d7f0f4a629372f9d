#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "qet/errors.hpp"
#include "qet/field_model.hpp"
#include "qet/qet_protocols.hpp"

namespace qet {

enum class Probe { Spin, Oscillator, Both };
enum class FrameFormat { Csv, Binary };

struct FieldSpec {
    FieldFamily family = FieldFamily::CurlGaussian;
    double amplitude = 1.0;
    double sigma = 1.0;
    Vec3 center{};
    Vec3 axis{0, 0, 1};
    // Grid-sampled fields: CSV of x,y,z,fx,fy,fz rows, resolved against the
    // scenario file's directory. sigma is optional there.
    std::filesystem::path path;
    std::optional<double> grid_sigma;
    std::uint64_t file_digest = 0;  // FNV-1a of the CSV bytes
};

struct WindowSpec {
    Vec3 center{};
    double radius = 3.0;
};

struct FrameSpec {
    std::vector<double> times{0.0};
    std::size_t n = 128;
    std::optional<double> half_extent;  // default 1.25 (t_max + 2R)
};

struct Tolerances {
    double kernel_rel = 1e-6;
    double kernel_l1_floor = 1e-13;
    double divergence = 1e-3;
};

struct OutputSpec {
    std::filesystem::path dir = "qet_out";
    std::string results = "results.jsonl";
    std::string summary = "summary.json";
    FrameFormat frames = FrameFormat::Csv;
};

struct Scenario {
    std::string name;
    FieldSpec a_m_spec;
    FieldSpec f_o_spec;
    std::optional<WindowSpec> window;
    Probe probe = Probe::Both;
    std::vector<double> T;
    std::vector<double> lambda{1.0};
    std::optional<GridSpec> grid;
    FrameSpec frames;
    Tolerances tolerances;
    std::uint64_t seed = 0;
    std::uint64_t oracle_samples = 1000000;
    OutputSpec output;

    // Built from the specs during parsing.
    std::optional<ShapeField> a_m;
    std::optional<ShapeField> f_o;

    ProtocolConfig config(double T_value, double lambda_value) const;
    // Window used by residual checks: the declared one, else 3 sigma about a_m.
    WindowFunction window_function() const;
};

// Every problem found in one pass, each prefixed with its field path.
class ScenarioError : public ValidationError {
public:
    explicit ScenarioError(std::vector<std::string> issues);
    const std::vector<std::string>& issues() const noexcept { return issues_; }

private:
    std::vector<std::string> issues_;
};

Scenario parse_scenario(const std::filesystem::path& path);
Scenario parse_scenario_text(std::string_view text, const std::filesystem::path& base_dir = ".");

// Normalized JSON of every input (defaults filled, grid files by digest).
std::string canonical_scenario(const Scenario& s);
std::uint64_t scenario_hash(const Scenario& s);

std::uint64_t fnv1a(std::string_view bytes, std::uint64_t h = 0xcbf29ce484222325ULL);
std::string hex64(std::uint64_t v);

// Closest candidate by edit distance, if it is close enough to be a typo.
std::optional<std::string> suggest_key(std::string_view key, const std::vector<std::string>& candidates);
std::size_t edit_distance(std::string_view a, std::string_view b);

const char* probe_name(Probe p);

}  // namespace qet
