#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "qet/dynamics.hpp"
#include "qet/qet_protocols.hpp"
#include "qet/scenario.hpp"

namespace qet {

inline constexpr const char* kEngineVersion = "1.0.0";
inline constexpr const char* kUnits =
    "natural units c = hbar = 1; lengths in the scenario base length L, energies in 1/L";

enum class RecordProbe { Spin, Oscillator };

struct ResultRecord {
    std::uint64_t scenario_hash = 0;
    RecordProbe probe = RecordProbe::Spin;
    double lambda = 0.0;
    double T = 0.0;
    std::optional<SpinOutcome> spin;
    std::optional<OscillatorOutcome> oscillator;
    double ratio = 0.0;  // D_ho / D_q
};

// One record per (lambda, T, probe), lambda-major, then T, spin before
// oscillator. Points run on `workers` threads; the output never depends on it.
std::vector<ResultRecord> run_scenario(const Scenario& s, unsigned workers = 1);

// Keys in the fixed order scenario_hash, probe, lambda, T, E_m, eta, xi,
// theta_star, E_o, D_q, eta_prime, theta_prime_star, E_o_prime, D_ho, ratio.
// Fields belonging to the other probe are null.
nlohmann::ordered_json record_json(const ResultRecord& r);

// Header line (engine_version, units, scenario_hash) then one record per line.
std::string results_text(std::uint64_t scenario_hash, const std::vector<ResultRecord>& records);
void write_results(const std::filesystem::path& path, std::uint64_t scenario_hash,
                   const std::vector<ResultRecord>& records);

struct ResultFile {
    nlohmann::ordered_json header;
    std::vector<nlohmann::ordered_json> records;
};
ResultFile read_results(const std::filesystem::path& path);

// Crossover amplitude, ratio-identity gap and (with at least two T values)
// the log-log slopes against T at the first lambda.
nlohmann::ordered_json scenario_summary(const Scenario& s, const std::vector<ResultRecord>& records);

// ---------------------------------------------------------------------------
// Frames
// ---------------------------------------------------------------------------

// Binary layout, little-endian: "QETFRM01", uint64 dims[3], float64 spacing,
// float64 origin[3], float64 t, then dims[0]*dims[1]*dims[2] float64 eps with
// the last index fastest.
inline constexpr char kFrameMagic[8] = {'Q', 'E', 'T', 'F', 'R', 'M', '0', '1'};

struct FrameFile {
    double t = 0.0;
    std::array<std::uint64_t, 3> dims{0, 0, 0};
    double spacing = 0.0;
    Vec3 origin{};
    std::vector<double> eps;
};

FrameFile frame_file(const DensityFrame& frame);

// Columns t,x,y,z,eps at 17 significant digits.
void write_frame_csv(const std::filesystem::path& path, const FrameFile& frame);
FrameFile read_frame_csv(const std::filesystem::path& path);
void write_frame_binary(const std::filesystem::path& path, const FrameFile& frame);
FrameFile read_frame_binary(const std::filesystem::path& path);

// Grid shared by all frames of a scenario.
FrameGrid scenario_frame_grid(const Scenario& s);

void write_text_file(const std::filesystem::path& path, const std::string& text);
std::string read_text_file(const std::filesystem::path& path);

}  // namespace qet
