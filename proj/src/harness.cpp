#include "recdft/harness.hpp"

#include <chrono>
#include <cmath>
#include <complex>

#include "recdft/csv.hpp"
#include "recdft/errors.hpp"
#include "recdft/mixing.hpp"
#include "recdft/response.hpp"
#include "recdft/rng.hpp"
#include "recdft/windows.hpp"

namespace recdft {

namespace {

constexpr double kPi = 3.14159265358979323846;

double noise_at(const Scenario& s, long long n) {
    switch (s.noise) {
        case NoiseKind::none:
            return 0.0;
        case NoiseKind::gaussian:
            return CounterRng(s.seed, rng_stream::gaussian).gaussian(static_cast<std::uint64_t>(n));
        case NoiseKind::impulsive:
            if (n % s.segment_length != 0) return 0.0;
            return CounterRng(s.seed, rng_stream::impulse)
                           .uniform(static_cast<std::uint64_t>(n / s.segment_length)) *
                       2.0e6 -
                   1.0e6;
    }
    return 0.0;
}

// one exact period of the bin-coincident tone mix
std::vector<double> period_table(const Scenario& s) {
    const int m_len = s.M();
    CounterRng rng(s.seed, rng_stream::phases);
    std::vector<double> phases(s.B + 1);
    for (int k = 0; k <= s.B; ++k) phases[k] = 2.0 * kPi * rng.uniform(k);
    std::vector<double> table(m_len, 0.0);
    for (int m = 0; m < m_len; ++m)
        for (int k = 0; k <= s.B; ++k)
            table[m] += std::cos(2.0 * kPi * k * m / m_len + phases[k]);
    return table;
}

std::string csv_path(const Scenario& s, const std::string& kind, int method, Precision prec) {
    std::string dir = s.out_dir.empty() ? "." : s.out_dir;
    return dir + "/" + kind + "_" + std::to_string(method) + "_" + to_string(prec) + ".csv";
}

}  // namespace

std::string to_string(NoiseKind kind) {
    switch (kind) {
        case NoiseKind::none: return "none";
        case NoiseKind::gaussian: return "gaussian";
        case NoiseKind::impulsive: return "impulsive";
    }
    return "none";
}

NoiseKind noise_from_string(const std::string& s) {
    if (s == "none") return NoiseKind::none;
    if (s == "gaussian") return NoiseKind::gaussian;
    if (s == "impulsive") return NoiseKind::impulsive;
    throw InvalidInput("noise must be none, gaussian or impulsive");
}

std::string to_string(ScenarioKind kind) {
    switch (kind) {
        case ScenarioKind::table1: return "table1";
        case ScenarioKind::detection: return "detection";
        case ScenarioKind::response_dump: return "response_dump";
        case ScenarioKind::impulse_dump: return "impulse_dump";
    }
    return "table1";
}

void validate(const Scenario& s) {
    if (s.K < 0) throw InvalidInput("K must be nonnegative");
    if (s.B < 0 || s.B > s.K) throw InvalidInput("B must lie in [0, K]");
    if (s.methods.empty()) throw InvalidInput("methods must be nonempty");
    if (s.segments < 1) throw InvalidInput("segments must be at least 1");
    if (s.segment_length < s.M()) throw InvalidInput("segment_length must be at least M");
    if (s.probe_bin < -s.B || s.probe_bin > s.B)
        throw InvalidInput("probe_bin outside the analysis band");
    if (s.l < 1) throw InvalidInput("prediction horizon l must be at least 1");
    if (s.grid_points < 2) throw InvalidInput("grid_points must be at least 2");
}

MethodConfig method_config(const Scenario& s, int method_id) {
    MethodConfig cfg;
    cfg.method_id = method_id;
    cfg.K = s.K;
    cfg.B = s.B;
    cfg.l = s.l;
    cfg.precision = s.precision;
    bool fading = (method_id >= 9 && method_id <= 12) || method_id == MethodConfig::bandpass_id;
    if (fading) cfg.sigma = s.sigma < 0.0 ? s.sigma : -1.0 / (2.0 * s.M());
    return cfg;
}

std::vector<double> gen_signal(const Scenario& s, long long n0, long long count) {
    if (n0 < 0 || count < 0) throw InvalidInput("sample range must be nonnegative");
    validate(s);
    auto table = period_table(s);
    std::vector<double> x(count);
    for (long long i = 0; i < count; ++i) x[i] = table[(n0 + i) % s.M()];
    return x;
}

std::vector<double> add_noise(std::vector<double> xs, const Scenario& s, long long n0) {
    for (size_t i = 0; i < xs.size(); ++i) xs[i] += noise_at(s, n0 + i);
    return xs;
}

ErrorReport run_table1(const Scenario& s) {
    validate(s);
    const int M = s.M();
    const long long L = s.segment_length;
    const long long n_reported = s.segments * L;
    const long long n_total = s.long_run ? 100 * L : n_reported;

    ErrorReport report;
    report.scenario = s;
    auto table = period_table(s);

    for (int method : s.methods) {
        MethodConfig cfg = method_config(s, method);
        MethodConfig ref_cfg = cfg;
        ref_cfg.precision = Precision::f64;
        auto bank = build(cfg);
        auto ref = build(ref_cfg);

        MethodReport mr;
        mr.method_id = method;
        mr.precision = s.precision;
        mr.rmse_per_segment.assign(s.segments, 0.0);

        const int probe = s.probe_bin + s.B;
        auto t0 = std::chrono::steady_clock::now();
        for (long long n = 0; n < n_total; ++n) {
            double clean = table[n % M];
            const SpectrumFrame& fm = bank->step(clean + noise_at(s, n));
            const SpectrumFrame& fr = ref->step(clean);
            double err = std::abs(fr.windowed[probe]) - std::abs(fm.windowed[probe]);
            if (n < n_reported) mr.rmse_per_segment[n / L] += err * err;
            if ((n + 1) % L == 0 && (n + 1) <= n_reported) {
                mr.checkpoint_n.push_back(n + 1);
                mr.err_at_checkpoint.push_back(err);
            }
            if (s.long_run && n + 1 == n_total) {
                mr.checkpoint_n.push_back(n + 1);
                mr.err_at_checkpoint.push_back(err);
            }
        }
        mr.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        for (double& v : mr.rmse_per_segment) v = std::sqrt(v / L);
        report.methods.push_back(std::move(mr));
    }
    if (!s.out_dir.empty()) export_table1_csv(report, s.out_dir);
    return report;
}

DetectionReport run_detection(const Scenario& s) {
    validate(s);
    const int M = s.M(), B = s.B;
    for (int m : s.methods)
        if (m < 1 || m > 6)
            throw InvalidInput("detection supports the open-loop FIR analyzers (methods 1-6)");
    if (B < 18) throw InvalidInput("detection needs B >= 18: tones sit at 7.5/M and 17.5/M");

    auto strong = [&](long long n) { return std::cos(2.0 * kPi * 7.5 * n / M); };
    auto weak = [&](long long n) { return 0.01 * std::cos(2.0 * kPi * 17.5 * n / M); };

    const long long warm = 4LL * M;
    const long long span = 2LL * M;  // whole periods of both tones

    DetectionReport report;
    report.scenario = s;

    for (int method : s.methods) {
        MethodConfig cfg = method_config(s, method);
        cfg.precision = Precision::f64;

        DetectionRow row;
        row.method_id = method;
        row.measured.assign(B + 1, 0.0);

        auto bank = build(cfg);
        for (long long n = 0; n < warm + span; ++n) {
            const SpectrumFrame& f = bank->step(strong(n) + weak(n));
            if (n < warm) continue;
            for (int k = 0; k <= B; ++k) row.measured[k] += std::abs(f.windowed[k + B]);
        }
        for (double& v : row.measured) v /= span;

        // direct windowed transform with the method's analysis window
        std::vector<double> w;
        double gain = 1.0;
        if (method == 2) {
            w = slepian_time(M, 2.0 / M).coeffs;
            double sum = 0.0;
            for (double v : w) sum += v;
            gain = 1.0 / sum;
        } else {
            w.assign(M, 1.0);
            gain = 1.0 / M;
        }
        bool windowed = method == 6;
        FreqWindow fw;
        int bw = 0;
        if (windowed) {
            bw = std::min(2, B);
            fw = slepian_freq(M, bw, 3.0 / M);
        }
        auto oracle = [&](auto&& sig) {
            std::vector<double> avg(B + 1, 0.0);
            std::vector<cplx> bins(2 * B + 1);
            for (long long n = warm; n < warm + span; ++n) {
                for (int k = -B; k <= B; ++k) {
                    cplx acc(0, 0);
                    for (int m = 0; m < M; ++m)
                        acc += w[m] * sig(n - m) * std::polar(1.0, 2.0 * kPi * k * m / M);
                    bins[k + B] = acc * gain;
                }
                if (windowed && bw > 0) bins = apply_freq_window(fw, bins, B, M);
                for (int k = 0; k <= B; ++k) avg[k] += std::abs(bins[k + B]);
            }
            for (double& v : avg) v /= span;
            return avg;
        };
        row.oracle_full = oracle([&](long long n) { return strong(n) + weak(n); });
        row.oracle_strong = oracle(strong);
        row.oracle_weak = oracle(weak);
        report.rows.push_back(std::move(row));
    }
    if (!s.out_dir.empty()) export_detection_csv(report, s.out_dir);
    return report;
}

std::vector<std::string> run_response_dump(const Scenario& s) {
    validate(s);
    std::vector<double> grid(s.grid_points);
    for (int i = 0; i < s.grid_points; ++i)
        grid[i] = -0.5 + static_cast<double>(i) / s.grid_points;
    std::vector<std::string> paths;
    for (int method : s.methods) {
        MethodConfig cfg = method_config(s, method);
        ResponseCurve curve = cfg.observer() ? empirical_response(cfg, s.probe_bin, grid)
                                             : analytic_response(cfg, s.probe_bin, grid);
        std::string path = csv_path(s, "response_dump", method, s.precision);
        export_response_csv(curve, path);
        paths.push_back(path);
    }
    return paths;
}

std::vector<std::string> run_impulse_dump(const Scenario& s) {
    validate(s);
    std::vector<std::string> paths;
    for (int method : s.methods) {
        MethodConfig cfg = method_config(s, method);
        auto h = impulse_response(cfg, s.probe_bin, 5LL * s.M());
        std::string path = csv_path(s, "impulse_dump", method, s.precision);
        CsvWriter out(path);
        out.line("n,re,im,mag");
        for (size_t n = 0; n < h.size(); ++n)
            out.row({csv_num(static_cast<double>(n)), csv_num(h[n].real()),
                     csv_num(h[n].imag()), csv_num(std::abs(h[n]))});
        paths.push_back(path);
    }
    return paths;
}

void export_table1_csv(const ErrorReport& report, const std::string& dir) {
    for (const MethodReport& mr : report.methods) {
        Scenario s = report.scenario;
        s.out_dir = dir;
        CsvWriter out(csv_path(s, "table1", mr.method_id, mr.precision));
        out.line("metric,n,value");
        for (size_t i = 0; i < mr.rmse_per_segment.size(); ++i)
            out.row({"rmse_segment", std::to_string(i), csv_num(mr.rmse_per_segment[i])});
        for (size_t i = 0; i < mr.checkpoint_n.size(); ++i)
            out.row({"err_checkpoint", std::to_string(mr.checkpoint_n[i]),
                     csv_num(mr.err_at_checkpoint[i])});
        out.row({"seconds", "0", csv_num(mr.seconds)});
    }
}

void export_detection_csv(const DetectionReport& report, const std::string& dir) {
    for (const DetectionRow& row : report.rows) {
        Scenario s = report.scenario;
        s.out_dir = dir;
        CsvWriter out(csv_path(s, "detection", row.method_id, Precision::f64));
        out.line("k,measured,oracle_full,oracle_strong,oracle_weak");
        for (size_t k = 0; k < row.measured.size(); ++k)
            out.row({std::to_string(k), csv_num(row.measured[k]), csv_num(row.oracle_full[k]),
                     csv_num(row.oracle_strong[k]), csv_num(row.oracle_weak[k])});
    }
}

}  // namespace recdft
