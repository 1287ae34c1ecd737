#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "recdft/filterbank.hpp"

namespace recdft {

enum class NoiseKind { none, gaussian, impulsive };
enum class ScenarioKind { table1, detection, response_dump, impulse_dump };

std::string to_string(NoiseKind kind);
NoiseKind noise_from_string(const std::string& s);
std::string to_string(ScenarioKind kind);

struct Scenario {
    ScenarioKind kind = ScenarioKind::table1;
    int K = 64;
    int B = 32;
    double sigma = 0.0;  // 0 selects the per-method default exp(-1/(2M)) block decay
    int l = 1;
    std::vector<int> methods;
    int segments = 2;
    long long segment_length = 1000000;
    NoiseKind noise = NoiseKind::none;
    std::uint64_t seed = 1;
    int probe_bin = 16;
    Precision precision = Precision::f32;
    bool long_run = false;   // adds the n = 100 segment-length checkpoint
    int grid_points = 1024;  // response dumps
    std::string out_dir;     // empty: no CSV side effects

    int M() const { return 2 * K + 1; }
};

void validate(const Scenario& s);

// per-method run configuration with scenario defaults resolved
MethodConfig method_config(const Scenario& s, int method_id);

// bin-coincident multi-tone with seeded phases; exactly M-periodic
std::vector<double> gen_signal(const Scenario& s, long long n0, long long count);

// additive noise for samples n0..n0+xs.size()-1; double precision throughout
std::vector<double> add_noise(std::vector<double> xs, const Scenario& s, long long n0);

struct MethodReport {
    int method_id = 0;
    Precision precision = Precision::f32;
    std::vector<long long> checkpoint_n;    // segment ends
    std::vector<double> err_at_checkpoint;  // signed |X_ref| - |X_hat| at the probe bin
    std::vector<double> rmse_per_segment;
    double seconds = 0.0;
};

struct ErrorReport {
    Scenario scenario;
    std::vector<MethodReport> methods;
};

// selected-precision bank against a lockstep double-precision noise-free reference
ErrorReport run_table1(const Scenario& s);

struct DetectionRow {
    int method_id = 0;
    std::vector<double> measured;       // time-averaged |bin| for k = 0..B
    std::vector<double> oracle_full;    // direct windowed transform, both tones
    std::vector<double> oracle_strong;  // strong tone only
    std::vector<double> oracle_weak;    // weak tone only
};

struct DetectionReport {
    Scenario scenario;
    std::vector<DetectionRow> rows;
};

// two-tone probe: 1.0 at 7.5/M and 0.01 at 17.5/M, double precision
DetectionReport run_detection(const Scenario& s);

// per-method response / impulse dumps; return written file paths
std::vector<std::string> run_response_dump(const Scenario& s);
std::vector<std::string> run_impulse_dump(const Scenario& s);

void export_table1_csv(const ErrorReport& report, const std::string& dir);
void export_detection_csv(const DetectionReport& report, const std::string& dir);

}  // namespace recdft
