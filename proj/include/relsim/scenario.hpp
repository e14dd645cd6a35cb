#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace relsim::scenario {

enum class Kind { Bell, DoubleBell, Foliation, Dilation, FrameScan };

const char* to_string(Kind k);

struct GeometryConfig {
    double L = 1.0;
    double d = 0.25;
    double offset = 0.2;
};

struct FieldConfig {
    double a = 1.0;
    double t0 = 0.0;
    double epsilon = 0.0;      // perturbation amplitude
    double k = 0.0;            // perturbation wavenumber; 0 selects 2*pi/length
    std::size_t grid = 128;    // points per dimension
    double length = 0.0;       // domain length; 0 selects a scenario default
    double dt = 0.0;           // 0 selects half the CFL limit
    std::size_t steps = 0;     // 0 selects enough to cover the scenario window
};

struct AngleConfig {
    double a = 0.0;
    double a_prime = 1.5707963267948966;   // pi/2
    double b = 0.7853981633974483;         // pi/4
    double b_prime = 2.356194490192345;    // 3*pi/4
    double theta_base = 0.0;
    double delta = 0.7853981633974483;
};

struct DilationConfig {
    double g = 9.8;
    double h = 10.0;
    double t = 3.156e7;
};

struct ScenarioConfig {
    int schema = 1;
    Kind kind = Kind::Bell;
    std::uint64_t seed = 1;
    std::uint64_t trials = 100000;
    GeometryConfig geometry;
    FieldConfig field;
    AngleConfig angles;
    DilationConfig dilation;
    std::vector<double> velocities = {-0.9, -0.6, -0.3, 0.0, 0.3, 0.6, 0.9};
    std::vector<double> levels;    // foliation levels; empty selects 5 spread levels
    bool force_dual_ni = false;    // assert both Eq.-style NI edges on purpose
};

// Strict parse: unknown keys and invalid values are rejected with a message
// naming the offending field. Throws ConfigError.
struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

ScenarioConfig parse_config(const std::string& text);

std::string config_json(const ScenarioConfig& c);

enum class Format { Csv, Json };

// Executes the scenario and writes summary.json, config_echo.json, and the
// scenario's CSV tables under out_dir. Returns the summary document.
std::string run(const ScenarioConfig& config, const std::filesystem::path& out_dir,
                Format format = Format::Csv);

}  // namespace relsim::scenario
