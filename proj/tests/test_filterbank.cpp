#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <complex>
#include <cstdio>
#include <vector>

#include "recdft/filterbank.hpp"
#include "recdft/mixing.hpp"
#include "recdft/rng.hpp"
#include "recdft/windows.hpp"

using namespace recdft;

namespace {

constexpr double kPi = 3.14159265358979323846;

MethodConfig cfg_for(int method, int K, int B, double sigma = 0.0) {
    MethodConfig c;
    c.method_id = method;
    c.K = K;
    c.B = B;
    c.sigma = sigma;
    return c;
}

std::vector<double> random_stream(size_t len, std::uint64_t seed) {
    CounterRng rng(seed, 9);
    std::vector<double> x(len);
    for (size_t i = 0; i < len; ++i) x[i] = rng.uniform(i) * 2.0 - 1.0;
    return x;
}

// reference: gain * sum_m w(m) x(n-m) e^{+j w_k m} with zero history
cplx direct_bin(const std::vector<double>& x, long long n, int k, int m_len,
                const std::vector<double>& w, double gain) {
    cplx acc(0, 0);
    for (int m = 0; m < m_len; ++m) {
        long long i = n - m;
        if (i < 0) break;
        acc += w[m] * x[i] * std::polar(1.0, 2.0 * kPi * k * m / m_len);
    }
    return acc * gain;
}

// bin-coincident multi-tone test signal
std::vector<double> tone_mix(size_t len, int m_len, int b, std::uint64_t seed) {
    CounterRng rng(seed, rng_stream::phases);
    std::vector<double> phases(b + 1);
    for (int k = 0; k <= b; ++k) phases[k] = 2.0 * kPi * rng.uniform(k);
    std::vector<double> x(len, 0.0);
    for (size_t n = 0; n < len; ++n)
        for (int k = 0; k <= b; ++k)
            x[n] += std::cos(2.0 * kPi * k * (n % m_len) / m_len + phases[k]);
    return x;
}

}  // namespace

TEST_CASE("config validation names the violated rule") {
    CHECK_THROWS_AS(build(cfg_for(13, 4, 4)), InvalidInput);
    CHECK_THROWS_AS(build(cfg_for(1, 4, 5)), InvalidInput);   // B > K
    CHECK_THROWS_AS(build(cfg_for(7, 4, 3)), InvalidInput);   // deadbeat needs B = K
    CHECK_THROWS_AS(build(cfg_for(8, 4, 4)), InvalidInput);   // band-limited needs B < K
    CHECK_THROWS_AS(build(cfg_for(9, 4, 4, 0.0)), InvalidInput);
    CHECK_THROWS_AS(build(cfg_for(12, 4, 4, 0.1)), InvalidInput);
    CHECK_THROWS_AS(build(cfg_for(MethodConfig::bandpass_id, 4, 4, 0.0)), InvalidInput);
    MethodConfig bad = cfg_for(7, 4, 4);
    bad.l = 2;
    CHECK_THROWS_AS(build(bad), InvalidInput);
    bad = cfg_for(5, 4, 2);
    bad.B_win = 3;  // wider than B
    CHECK_THROWS_AS(build(bad), InvalidInput);
    bad = cfg_for(3, 4, 4);
    bad.fused_hann = true;  // only meaningful with mixing
    CHECK_THROWS_AS(build(bad), InvalidInput);
}

TEST_CASE("FIR equivalence of the sliding analyzers") {
    const int K = 8, m_len = 17;
    auto x = random_stream(4 * m_len, 31);
    std::vector<double> rect(m_len, 1.0);
    for (int B : {8, 6}) {
        for (int method : {1, 3, 4, 5}) {
            if (method == 1 && B != K) continue;  // direct bank tested full width
            auto bank = build(cfg_for(method, K, B));
            for (size_t n = 0; n < x.size(); ++n) {
                const SpectrumFrame& f = bank->step(x[n]);
                if (n < static_cast<size_t>(m_len)) continue;
                for (int k = -B; k <= B; ++k) {
                    cplx want = direct_bin(x, f.n, k, m_len, rect, 1.0 / m_len);
                    CHECK(std::abs(f.raw[k + B] - want) < 1e-10);
                }
            }
        }
    }
}

TEST_CASE("slepian-weighted direct bank matches its defining sum") {
    const int K = 8, m_len = 17;
    auto x = random_stream(3 * m_len, 32);
    MethodConfig cfg = cfg_for(2, K, K);
    auto bank = build(cfg);
    TimeWindow w = slepian_time(m_len, 2.0 / m_len);
    double sum = 0.0;
    for (double v : w.coeffs) sum += v;
    for (size_t n = 0; n < x.size(); ++n) {
        const SpectrumFrame& f = bank->step(x[n]);
        if (n < static_cast<size_t>(m_len)) continue;
        for (int k = -K; k <= K; ++k) {
            cplx want = direct_bin(x, f.n, k, m_len, w.coeffs, 1.0 / sum);
            CHECK(std::abs(f.raw[k + K] - want) < 1e-10);
        }
    }
}

TEST_CASE("constant input lands in the dc bin") {
    const int K = 8, m_len = 17;
    for (int method : {1, 3, 4, 5}) {
        auto bank = build(cfg_for(method, K, K));
        const SpectrumFrame* f = nullptr;
        for (int n = 0; n < 3 * m_len; ++n) f = &bank->step(1.0);
        CHECK(std::abs(f->raw[K] - cplx(1, 0)) < 1e-10);
        for (int k = -K; k <= K; ++k)
            if (k != 0) CHECK(std::abs(f->raw[k + K]) < 1e-10);
    }
}

TEST_CASE("bin-centred cosine splits into two half-amplitude lines") {
    const int K = 8, m_len = 17, k0 = 3;
    for (int method : {1, 3, 4, 5}) {
        auto bank = build(cfg_for(method, K, K));
        const SpectrumFrame* f = nullptr;
        for (int n = 0; n < 4 * m_len; ++n)
            f = &bank->step(std::cos(2.0 * kPi * k0 * n / m_len + 0.4));
        CHECK(std::abs(f->raw[k0 + K]) == doctest::Approx(0.5).epsilon(1e-9));
        CHECK(std::abs(f->raw[-k0 + K]) == doctest::Approx(0.5).epsilon(1e-9));
    }
}

TEST_CASE("fading-memory impulse response descends in flat terraces") {
    const int K = 64, m_len = 129;
    const double sigma = -1.0 / m_len;
    auto bank = build(cfg_for(9, K, K, sigma));
    double r = std::exp(sigma * m_len);
    std::vector<double> x(4 * m_len, 0.0);
    x[0] = 1.0;
    auto frames = bank->process(x);
    for (size_t n = 0; n < frames.size(); ++n) {
        double want = (1.0 - r) / m_len * std::exp(sigma * m_len * (n / m_len));
        for (int k : {-30, 0, 16, 50})
            CHECK(std::abs(frames[n].raw[k + K]) == doctest::Approx(want).epsilon(1e-9));
    }
}

TEST_CASE("deadbeat observer reproduces the direct bank") {
    const int K = 8;
    auto x = random_stream(5 * 17, 33);
    auto direct = build(cfg_for(1, K, K));
    auto observer = build(cfg_for(7, K, K));
    for (double v : x) {
        const SpectrumFrame& fd = direct->step(v);
        const SpectrumFrame& fo = observer->step(v);
        for (int i = 0; i < 2 * K + 1; ++i) CHECK(std::abs(fd.raw[i] - fo.raw[i]) < 1e-9);
    }
}

TEST_CASE("process semantics") {
    auto bank = build(cfg_for(5, 4, 4));
    CHECK(bank->process({}).empty());

    // stream splitting
    auto x = random_stream(40, 34);
    auto whole = build(cfg_for(5, 4, 4))->process(x);
    auto split_bank = build(cfg_for(5, 4, 4));
    std::vector<double> a(x.begin(), x.begin() + 17), b(x.begin() + 17, x.end());
    auto fa = split_bank->process(a);
    auto fb = split_bank->process(b);
    fa.insert(fa.end(), fb.begin(), fb.end());
    REQUIRE(fa.size() == whole.size());
    for (size_t i = 0; i < whole.size(); ++i)
        for (size_t j = 0; j < whole[i].raw.size(); ++j)
            CHECK(whole[i].raw[j] == fa[i].raw[j]);

    // table and resonator realizations agree in double
    auto x3 = random_stream(3 * 9, 35);
    auto f3 = build(cfg_for(3, 4, 4))->process(x3);
    auto f5 = build(cfg_for(5, 4, 4))->process(x3);
    for (size_t i = 0; i < f3.size(); ++i)
        for (size_t j = 0; j < f3[i].raw.size(); ++j)
            CHECK(std::abs(f3[i].raw[j] - f5[i].raw[j]) < 1e-10);
}

TEST_CASE("reset restores the zero state bit-exactly") {
    for (int method : {4, 5, 9}) {
        double sigma = method == 9 ? -0.05 : 0.0;
        auto bank = build(cfg_for(method, 4, 4, sigma));
        auto fresh = build(cfg_for(method, 4, 4, sigma));
        CounterRng rng(88, 17);
        for (long long n = 0; n < 1000000; ++n) bank->step(rng.uniform(n) * 2.0 - 1.0);
        bank->reset();
        auto x = random_stream(100, 36);
        for (double v : x) {
            const SpectrumFrame& fa = bank->step(v);
            const SpectrumFrame& fb = fresh->step(v);
            for (size_t j = 0; j < fa.raw.size(); ++j) CHECK(fa.raw[j] == fb.raw[j]);
        }
    }
}

TEST_CASE("quality of the deadbeat observer on coherent tones") {
    const int K = 8, m_len = 17;
    auto x = tone_mix(6 * m_len, m_len, K, 77);
    auto bank = build(cfg_for(7, K, K));
    std::vector<SpectrumFrame> kept;
    for (size_t n = 0; n < x.size(); ++n) {
        const SpectrumFrame& f = bank->step(x[n]);
        if (n >= static_cast<size_t>(2 * m_len)) kept.push_back(f);
    }
    CHECK(quality(kept) < 1e-9);

    // noise keeps the prediction error alive
    auto noisy = build(cfg_for(7, K, K));
    CounterRng rng(3, rng_stream::gaussian);
    std::vector<SpectrumFrame> nf;
    for (int n = 0; n < 4 * m_len; ++n) nf.push_back(noisy->step(rng.gaussian(n)));
    CHECK(quality(nf) > 0.0);

    CHECK_THROWS_AS(quality(build(cfg_for(3, 4, 4))->process(random_stream(10, 2))),
                    InvalidInput);
}

TEST_CASE("quality is stable under a whole-period shift") {
    const int K = 8, m_len = 17;
    // period-2M tone, off the bin grid
    auto sig = [&](long long n) { return std::cos(2.0 * kPi * 3.5 * n / m_len + 0.2); };
    auto run = [&](long long shift) {
        auto bank = build(cfg_for(7, K, K));
        std::vector<SpectrumFrame> kept;
        for (long long n = 0; n < 12 * m_len; ++n) {
            const SpectrumFrame& f = bank->step(sig(n + shift));
            if (n >= 8 * m_len) kept.push_back(f);  // four whole periods
        }
        return quality(kept);
    };
    double q0 = run(0), qm = run(m_len);
    CHECK(q0 == doctest::Approx(qm).epsilon(1e-9));
    CHECK(q0 > 0.0);  // tone off the grid cannot be predicted one step ahead
}

TEST_CASE("windowed bank equals convolution of the raw bank") {
    const int K = 8, m_len = 17;
    auto x = random_stream(4 * m_len, 38);
    for (int B : {8, 5}) {
        MethodConfig mc6 = cfg_for(6, K, B);
        auto b6 = build(mc6);
        auto b5 = build(cfg_for(5, K, B));
        int bw = std::min(2, B);
        FreqWindow win = slepian_freq(m_len, bw, 3.0 / m_len);
        for (double v : x) {
            const SpectrumFrame& f6 = b6->step(v);
            const SpectrumFrame& f5 = b5->step(v);
            // raw path unchanged by the window stage
            for (size_t j = 0; j < f5.raw.size(); ++j)
                CHECK(std::abs(f6.raw[j] - f5.raw[j]) < 1e-12);
            auto want = apply_freq_window(win, f5.raw, B, m_len);
            for (size_t j = 0; j < want.size(); ++j)
                CHECK(std::abs(f6.windowed[j] - want[j]) < 1e-10);
        }
    }
}

TEST_CASE("every method is linear") {
    struct Probe { int method; double sigma; };
    auto x = random_stream(60, 39);
    auto y = random_stream(60, 40);
    const double a = 1.7, b = -0.6;
    for (Probe p : {Probe{1, 0.0}, Probe{2, 0.0}, Probe{3, 0.0}, Probe{4, 0.0}, Probe{5, 0.0},
                    Probe{6, 0.0}, Probe{7, 0.0}, Probe{8, 0.0}, Probe{9, -0.1}, Probe{10, -0.1},
                    Probe{11, -0.1}, Probe{12, -0.1},
                    Probe{MethodConfig::bandpass_id, -0.1}}) {
        int K = 4, B = (p.method == 8) ? 3 : 4;
        auto bx = build(cfg_for(p.method, K, B, p.sigma));
        auto by = build(cfg_for(p.method, K, B, p.sigma));
        auto bxy = build(cfg_for(p.method, K, B, p.sigma));
        for (size_t n = 0; n < x.size(); ++n) {
            const SpectrumFrame& fx = bx->step(x[n]);
            const SpectrumFrame& fy = by->step(y[n]);
            const SpectrumFrame& fxy = bxy->step(a * x[n] + b * y[n]);
            for (size_t j = 0; j < fx.windowed.size(); ++j) {
                cplx want = a * fx.windowed[j] + b * fy.windowed[j];
                CHECK(std::abs(fxy.windowed[j] - want) < 1e-9);
            }
        }
    }
}

TEST_CASE("full-width mixed bank matches the fading-memory bank") {
    const int K = 4, m_len = 9;
    const double sigma = -0.05;
    auto b12 = build(cfg_for(12, K, K, sigma));
    auto b9 = build(cfg_for(9, K, K, sigma));
    CounterRng rng(11, 19);
    const SpectrumFrame *f12 = nullptr, *f9 = nullptr;
    for (long long n = 0; n < 20000; ++n) {
        double v = rng.uniform(n) * 2.0 - 1.0;
        f12 = &b12->step(v);
        f9 = &b9->step(v);
        if (n < 18000) continue;
        for (int j = 0; j < 2 * K + 1; ++j)
            CHECK(std::abs(f12->raw[j] - f9->raw[j]) < 1e-6);
    }
}

TEST_CASE("real input gives Hermitian bins") {
    auto x = random_stream(120, 41);
    struct Probe { int method; double sigma; double tol; };
    for (Probe p : {Probe{1, 0.0, 1e-14}, Probe{3, 0.0, 1e-14}, Probe{5, 0.0, 1e-14},
                    Probe{9, -0.1, 1e-14}, Probe{12, -0.1, 1e-9},
                    Probe{MethodConfig::bandpass_id, -0.1, 1e-14}}) {
        int K = 5;
        auto bank = build(cfg_for(p.method, K, K, p.sigma));
        const SpectrumFrame* f = nullptr;
        for (double v : x) f = &bank->step(v);
        for (int k = 1; k <= K; ++k)
            CHECK(std::abs(f->raw[k + K] - std::conj(f->raw[-k + K])) < p.tol);
    }
}

TEST_CASE("complex input streams are accepted") {
    const int K = 4, m_len = 9;
    auto bank = build(cfg_for(1, K, K));
    // analytic tone e^{j w n} shows up in one bin only
    const SpectrumFrame* f = nullptr;
    for (int n = 0; n < 3 * m_len; ++n)
        f = &bank->step(std::polar(1.0, 2.0 * kPi * 2 * n / m_len));
    // bin k0 carries the rotating phasor itself, the mirror bin is empty
    CHECK(std::abs(f->raw[2 + K]) == doctest::Approx(1.0).epsilon(1e-10));
    CHECK(std::abs(f->raw[-2 + K]) < 1e-10);
}

TEST_CASE("bandpass diagnostic has unit dc-equivalent gain") {
    const int K = 4;
    auto bank = build(cfg_for(MethodConfig::bandpass_id, K, K, -0.2));
    const SpectrumFrame* f = nullptr;
    for (int n = 0; n < 400; ++n) f = &bank->step(1.0);
    CHECK(std::abs(f->raw[K] - cplx(1, 0)) < 1e-12);
}

TEST_CASE("single-precision drift separates the structures") {
    // bin-coincident tone mix, band-limited probe, single vs double reference
    const int K = 16, m_len = 33, B = 8, probe = 4;
    const double sigma = -1.0 / (2.0 * m_len);
    auto x = tone_mix(250000, m_len, B, 2024);

    auto err_at_checkpoints = [&](int method, double sg) {
        MethodConfig single = cfg_for(method, K, B, sg);
        single.precision = Precision::f32;
        if (method == 8) single.l = 1;
        MethodConfig ref = single;
        ref.precision = Precision::f64;
        auto bs = build(single);
        auto bd = build(ref);
        std::vector<double> errs;
        for (size_t n = 0; n < x.size(); ++n) {
            const SpectrumFrame& fs = bs->step(x[n]);
            const SpectrumFrame& fd = bd->step(x[n]);
            if ((n + 1) % 50000 == 0)
                errs.push_back(std::abs(std::abs(fd.raw[probe + B]) -
                                        std::abs(fs.raw[probe + B])));
        }
        return errs;
    };

    auto e3 = err_at_checkpoints(3, 0.0);
    auto e9 = err_at_checkpoints(9, sigma);
    for (size_t i = 1; i < e3.size(); ++i) CHECK(e3[i] > e3[i - 1]);
    for (size_t i = 1; i < e9.size(); ++i) CHECK(e9[i] > e9[i - 1]);

    auto e8 = err_at_checkpoints(8, 0.0);
    auto e12 = err_at_checkpoints(12, sigma);
    for (double e : e8) CHECK(e < 1e-4);
    for (double e : e12) CHECK(e < 1e-4);
}

TEST_CASE("config text round trip") {
    MethodConfig cfg = cfg_for(12, 64, 32, -1.0 / 258.0);
    cfg.precision = Precision::f32;
    cfg.fused_hann = true;
    cfg.l = 2;
    cfg.f_delta = 0.031;
    MethodConfig back = config_from_keyvalues(config_to_keyvalues(cfg));
    CHECK(back.method_id == cfg.method_id);
    CHECK(back.K == cfg.K);
    CHECK(back.B == cfg.B);
    CHECK(back.B_win == cfg.B_win);
    CHECK(back.sigma == cfg.sigma);
    CHECK(back.l == cfg.l);
    CHECK(back.precision == cfg.precision);
    CHECK(back.f_delta == cfg.f_delta);
    CHECK(back.fused_hann == cfg.fused_hann);
    CHECK(back.synthesis == cfg.synthesis);
    CHECK_THROWS_AS(config_from_keyvalues("bogus=1\n"), InvalidInput);
}

TEST_CASE("frame csv export") {
    auto frames = build(cfg_for(5, 2, 2))->process(random_stream(3, 44));
    const char* path = "frames_tmp.csv";
    export_frames_csv(frames, path);
    std::FILE* fh = std::fopen(path, "r");
    REQUIRE(fh != nullptr);
    int lines = 0;
    for (int c; (c = std::fgetc(fh)) != EOF;)
        if (c == '\n') ++lines;
    std::fclose(fh);
    std::remove(path);
    CHECK(lines == 1 + 3 * 5);  // header + frames * bins
}
