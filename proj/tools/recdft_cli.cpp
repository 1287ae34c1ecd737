#include <CLI11.hpp>

#include <algorithm>
#include <cctype>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include "recdft/csv.hpp"
#include "recdft/harness.hpp"
#include "recdft/mixing.hpp"
#include "recdft/windows.hpp"

using namespace recdft;

namespace {

std::string trim(const std::string& s) {
    size_t a = s.find_first_not_of(" \t\r");
    if (a == std::string::npos) return "";
    size_t b = s.find_last_not_of(" \t\r");
    return s.substr(a, b - a + 1);
}

// expands `--config <file>` (flat key=value lines mirroring the flags) into
// flags appended after the user's own; explicitly passed flags win
std::vector<std::string> expand_config(int argc, char** argv) {
    std::vector<std::string> args(argv + 1, argv + argc);
    for (const std::string& a : args)
        if (a == "--help" || a == "-h") return args;
    std::string path;
    for (size_t i = 0; i < args.size(); ++i) {
        if (args[i] == "--config" && i + 1 < args.size()) {
            path = args[i + 1];
            args.erase(args.begin() + i, args.begin() + i + 2);
            break;
        }
        if (args[i].rfind("--config=", 0) == 0) {
            path = args[i].substr(9);
            args.erase(args.begin() + i);
            break;
        }
    }
    if (path.empty()) return args;

    auto canonical = [](std::string key) { return key == "method" ? "methods" : key; };
    std::vector<std::string> given;
    for (const std::string& a : args)
        if (a.rfind("--", 0) == 0)
            given.push_back(canonical(a.substr(2, a.find('=') - 2)));

    std::ifstream in(path);
    if (!in) throw InvalidInput("cannot open config file: " + path);
    std::string line;
    while (std::getline(in, line)) {
        line = trim(line);
        if (line.empty() || line[0] == '#' || line[0] == ';') continue;
        size_t eq = line.find('=');
        if (eq == std::string::npos)
            throw InvalidInput("config line lacks '=': " + line);
        std::string key = trim(line.substr(0, eq));
        std::string value = trim(line.substr(eq + 1));
        if (key.empty()) throw InvalidInput("config line lacks a key: " + line);
        bool overridden = false;
        for (const std::string& g : given) overridden = overridden || g == canonical(key);
        if (overridden) continue;
        if (value == "true" || value == "false") {
            if (value == "true") args.push_back("--" + key);
            continue;
        }
        args.push_back("--" + key);
        args.push_back(value);
    }
    return args;
}

void add_common(CLI::App* cmd, Scenario& s, std::string& precision) {
    cmd->add_option("--K", s.K, "one-sided bin count; M = 2K+1");
    cmd->add_option("--B", s.B, "one-sided analysis band");
    cmd->add_option("--sigma", s.sigma, "per-sample damping exponent (negative)");
    cmd->add_option("--l", s.l, "prediction horizon of the observer synthesis");
    cmd->add_option("--methods,--method", s.methods, "method ids (1-12)")->delimiter(',');
    cmd->add_option("--precision", precision, "single or double")
        ->check(CLI::IsMember({"single", "double"}));
    cmd->add_option("--seed", s.seed, "RNG seed");
    cmd->add_option("--probe-bin", s.probe_bin, "bin index reported or dumped");
    cmd->add_option("--out", s.out_dir, "output directory for CSV files");
    cmd->add_option("--config", "flat key=value file with the same keys as the flags");
}

void finish_scenario(Scenario& s, const std::string& precision) {
    s.precision = precision_from_string(precision);
    if (s.out_dir.empty()) s.out_dir = ".";
    std::filesystem::create_directories(s.out_dir);
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"recursive DFT filter bank toolkit"};
    app.require_subcommand(1);

    // design-window
    int dw_k = 64, dw_bwin = -1;
    double dw_fdelta = 0.0;
    std::string dw_out;
    auto* dw = app.add_subcommand("design-window", "design a Slepian analysis window");
    dw->add_option("--K", dw_k, "one-sided bin count; M = 2K+1");
    dw->add_option("--Bwin", dw_bwin, "frequency-window half width; omit for a time window");
    dw->add_option("--f-delta", dw_fdelta, "design band half width (cycles/sample)");
    dw->add_option("--out", dw_out, "output directory");
    dw->add_option("--config", "flat key=value file with the same keys as the flags");

    // design-mixing
    int dm_k = 64, dm_b = 32;
    double dm_sigma = 0.0;
    std::string dm_out;
    auto* dm = app.add_subcommand("design-mixing", "design the resonator mixing matrix");
    dm->add_option("--K", dm_k, "one-sided bin count; M = 2K+1");
    dm->add_option("--B", dm_b, "one-sided analysis band");
    dm->add_option("--sigma", dm_sigma, "per-sample damping exponent (negative)");
    dm->add_option("--out", dm_out, "output directory");
    dm->add_option("--config", "flat key=value file with the same keys as the flags");

    // freq-response
    Scenario fr;
    fr.kind = ScenarioKind::response_dump;
    fr.K = 8;
    fr.B = 4;
    fr.probe_bin = 2;
    fr.methods = {1, 2, 3, 8, 9, 12};
    std::string fr_precision = "double";
    auto* frc = app.add_subcommand("freq-response", "dump per-bin frequency responses");
    add_common(frc, fr, fr_precision);
    frc->add_option("--grid", fr.grid_points, "frequency grid resolution");

    // impulse-response
    Scenario ir;
    ir.kind = ScenarioKind::impulse_dump;
    ir.K = 64;
    ir.B = 64;
    ir.probe_bin = 2;
    ir.methods = {9, 11};
    std::string ir_precision = "double";
    auto* irc = app.add_subcommand("impulse-response", "dump per-bin impulse responses");
    add_common(irc, ir, ir_precision);

    // table1
    Scenario t1;
    t1.kind = ScenarioKind::table1;
    t1.methods = {1, 3, 4, 5, 8, 9, 10, 12};
    std::string t1_precision = "single";
    bool quick = false;
    auto* t1c = app.add_subcommand("table1", "precision drift and noise error benchmark");
    add_common(t1c, t1, t1_precision);
    auto* seg_opt = t1c->add_option("--segments", t1.segments, "segment count");
    auto* len_opt = t1c->add_option("--segment-length", t1.segment_length, "samples per segment");
    t1c->add_option("--noise", t1.noise, "none, gaussian or impulsive")
        ->transform(CLI::CheckedTransformer(
            std::map<std::string, NoiseKind>{{"none", NoiseKind::none},
                                             {"gaussian", NoiseKind::gaussian},
                                             {"impulsive", NoiseKind::impulsive}}));
    t1c->add_flag("--quick", quick, "CI-scale run: segment length 1e5");
    t1c->add_flag("--long", t1.long_run, "append the 100-segment checkpoint");

    // detection
    Scenario det;
    det.kind = ScenarioKind::detection;
    det.probe_bin = 16;
    det.methods = {1, 2, 5, 6};
    std::string det_precision = "double";
    auto* detc = app.add_subcommand("detection", "two-tone weak-component detection scenario");
    add_common(detc, det, det_precision);

    std::vector<std::string> args;
    try {
        args = expand_config(argc, argv);
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    }
    std::reverse(args.begin(), args.end());
    try {
        app.parse(args);
    } catch (const CLI::ParseError& e) {
        return app.exit(e);
    }

    try {
        if (dw->parsed()) {
            std::string dir = dw_out.empty() ? "." : dw_out;
            std::filesystem::create_directories(dir);
            int m_len = 2 * dw_k + 1;
            CsvWriter out(dir + "/design_window.csv");
            if (dw_bwin >= 1) {
                double fd = dw_fdelta > 0.0 ? dw_fdelta : 3.0 / m_len;
                FreqWindow w = slepian_freq(m_len, dw_bwin, fd);
                out.line("k,raw,re,im");
                for (int k = -w.B_win; k <= w.B_win; ++k)
                    out.row({std::to_string(k), csv_num(w.raw(k)), csv_num(w.coeff(k).real()),
                             csv_num(w.coeff(k).imag())});
                std::printf("frequency window: M=%d B_win=%d f_delta=%.6g alpha=%.12g\n", m_len,
                            w.B_win, w.f_delta, w.alpha);
            } else {
                double fd = dw_fdelta > 0.0 ? dw_fdelta : 2.0 / m_len;
                TimeWindow w = slepian_time(m_len, fd);
                out.line("m,w");
                for (int m = 0; m < m_len; ++m)
                    out.row({std::to_string(m), csv_num(w.coeffs[m])});
                std::printf("time window: M=%d f_delta=%.6g alpha=%.12g\n", m_len, w.f_delta,
                            w.alpha);
            }
        } else if (dm->parsed()) {
            std::string dir = dm_out.empty() ? "." : dm_out;
            std::filesystem::create_directories(dir);
            int m_len = 2 * dm_k + 1;
            double sigma = dm_sigma < 0.0 ? dm_sigma : -1.0 / m_len;
            MixingMatrix mix = design_mixing(dm_b, m_len, sigma);
            export_mixing_csv(mix, dir + "/design_mixing.csv");
            std::printf("mixing matrix: B=%d M=%d sigma=%.6g condition=%.6g\n", mix.B, m_len,
                        mix.sigma, mix.condition);
        } else if (frc->parsed()) {
            finish_scenario(fr, fr_precision);
            for (const std::string& p : run_response_dump(fr))
                std::printf("wrote %s\n", p.c_str());
        } else if (irc->parsed()) {
            if (!irc->count("--sigma")) ir.sigma = -1.0 / ir.M();
            finish_scenario(ir, ir_precision);
            for (const std::string& p : run_impulse_dump(ir))
                std::printf("wrote %s\n", p.c_str());
        } else if (t1c->parsed()) {
            if (quick && !len_opt->count()) t1.segment_length = 100000;
            if (quick && !seg_opt->count()) t1.segments = 2;
            finish_scenario(t1, t1_precision);
            ErrorReport report = run_table1(t1);
            for (const MethodReport& mr : report.methods) {
                std::printf("method %d (%s): seconds=%.3f", mr.method_id,
                            to_string(mr.precision).c_str(), mr.seconds);
                for (size_t i = 0; i < mr.rmse_per_segment.size(); ++i)
                    std::printf(" rmse[%zu]=%.3e", i, mr.rmse_per_segment[i]);
                for (size_t i = 0; i < mr.checkpoint_n.size(); ++i)
                    std::printf(" err[%lld]=%.3e", mr.checkpoint_n[i], mr.err_at_checkpoint[i]);
                std::printf("\n");
            }
        } else if (detc->parsed()) {
            det.precision = Precision::f64;
            if (det.out_dir.empty()) det.out_dir = ".";
            std::filesystem::create_directories(det.out_dir);
            DetectionReport report = run_detection(det);
            for (const DetectionRow& row : report.rows)
                std::printf("method %d: bin17 measured=%.4e weak-oracle=%.4e, "
                            "bin18 measured=%.4e weak-oracle=%.4e\n",
                            row.method_id, row.measured[17], row.oracle_weak[17],
                            row.measured[18], row.oracle_weak[18]);
        }
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    }
    return 0;
}
