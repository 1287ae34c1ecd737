#include "recdft/response.hpp"

#include <cmath>
#include <complex>
#include <memory>

#include "recdft/csv.hpp"
#include "recdft/errors.hpp"
#include "recdft/mixing.hpp"
#include "recdft/windows.hpp"

namespace recdft {

namespace {

constexpr double kPi = 3.14159265358979323846;

// sum_{m=0}^{M-1} e^{j(w_k - 2pi f)m}; the comb zero divided by the resonator
// pole, reduced to a polynomial so bin centres need no limit handling
cplx geometric_sum(int m_len, int k, double f) {
    double ang = 2.0 * kPi * (static_cast<double>(k) / m_len - f);
    cplx acc(0, 0);
    for (int m = 0; m < m_len; ++m) acc += std::polar(1.0, ang * m);
    return acc;
}

cplx fir_sum(const std::vector<double>& w, double gain, int m_len, int k, double f) {
    cplx acc(0, 0);
    for (int m = 0; m < m_len; ++m)
        acc += w[m] * std::polar(1.0, 2.0 * kPi * (static_cast<double>(k) / m_len - f) * m);
    return acc * gain;
}

// open-loop response of one analyzer bin before any mixing or window stage;
// window designs and damping factors hoisted out of the grid loop
struct BaseEval {
    enum class Form { fir, comb, fading_comb, single_pole } form;
    int m_len = 1;
    double gain = 1.0;
    double r = 0.0;  // block damping (fading_comb) or pole radius (single_pole)
    std::vector<double> w;

    cplx operator()(int k, double f) const {
        switch (form) {
            case Form::fir:
                return fir_sum(w, gain, m_len, k, f);
            case Form::comb:
                return geometric_sum(m_len, k, f) / static_cast<double>(m_len);
            case Form::fading_comb: {
                cplx comb_pole = 1.0 - r * std::polar(1.0, -2.0 * kPi * f * m_len);
                return (1.0 - r) / m_len * geometric_sum(m_len, k, f) / comb_pole;
            }
            case Form::single_pole: {
                cplx pole = 1.0 - r * std::polar(1.0, 2.0 * kPi * k / m_len - 2.0 * kPi * f);
                return gain / pole;
            }
        }
        return cplx(0, 0);
    }
};

BaseEval make_base(const MethodConfig& cfg) {
    BaseEval e;
    e.m_len = cfg.M();
    switch (cfg.method_id) {
        case 1:
            e.form = BaseEval::Form::fir;
            e.w = rectangular_time(e.m_len).coeffs;
            e.gain = 1.0 / e.m_len;
            break;
        case 2: {
            e.form = BaseEval::Form::fir;
            double fd = cfg.f_delta > 0.0 ? cfg.f_delta : 2.0 / e.m_len;
            e.w = slepian_time(e.m_len, fd).coeffs;
            double sum = 0.0;
            for (double v : e.w) sum += v;
            e.gain = 1.0 / sum;
            break;
        }
        case 3:
        case 4:
        case 5:
        case 6:
            e.form = BaseEval::Form::comb;
            break;
        case 9:
        case 10:
        case 11:
            e.form = BaseEval::Form::fading_comb;
            e.r = std::exp(cfg.sigma * e.m_len);
            break;
        case 12:
            e.form = BaseEval::Form::single_pole;
            e.r = std::exp(cfg.sigma);
            e.gain = 1.0;
            break;
        case MethodConfig::bandpass_id:
            e.form = BaseEval::Form::single_pole;
            e.r = std::exp(cfg.sigma);
            e.gain = 1.0 - e.r;
            break;
        default:
            throw InvalidInput("observer methods have no open-loop response; use empirical_response");
    }
    return e;
}

}  // namespace

double dirichlet(int m_len, double f, int k) {
    if (m_len <= 0 || m_len % 2 == 0) throw InvalidInput("dirichlet needs odd positive M");
    double u = f - static_cast<double>(k) / m_len;
    u -= std::round(u);  // both sine factors are jointly 1-periodic for odd M
    if (std::abs(u) < 1e-12) return 1.0;
    return std::sin(m_len * kPi * u) / (m_len * std::sin(kPi * u));
}

ResponseCurve analytic_response(const MethodConfig& cfg, int k,
                                const std::vector<double>& f_grid) {
    validate(cfg);
    if (cfg.observer())
        throw InvalidInput("observer methods have no open-loop response; use empirical_response");
    const int m_len = cfg.M();
    const int B = cfg.B, K = cfg.K;
    if (k < -B || k > B) throw InvalidInput("bin index outside the analysis band");

    ResponseCurve curve;
    curve.f_grid = f_grid;
    curve.k = k;
    curve.config = cfg;
    curve.values.reserve(f_grid.size());

    // stage configuration mirroring the runtime bank
    bool mixed = cfg.method_id == 12;
    MixingMatrix mix;
    if (mixed) {
        mix = design_mixing(B, m_len, cfg.sigma);
        if (cfg.fused_hann) mix = fuse_window(mix, hann_window(m_len));
    }
    int bw = 0;
    FreqWindow win;
    if (cfg.method_id == 6) {
        bw = cfg.B_win >= 0 ? cfg.B_win : std::min(2, B);
        double fd = cfg.f_delta > 0.0 ? cfg.f_delta : 3.0 / m_len;
        if (bw > 0) win = slepian_freq(m_len, bw, fd);
    } else if (cfg.method_id == 11) {
        bw = 1;
        win = hann_window(m_len);
    }

    BaseEval base = make_base(cfg);
    for (double f : f_grid) {
        cplx v;
        if (mixed) {
            v = cplx(0, 0);
            for (int k1 = -B; k1 <= B; ++k1)
                v += mix.entries(k + B, k1 + B) * base(k1, f);
        } else if (bw > 0 && (B == K || std::abs(k) <= B - bw)) {
            v = cplx(0, 0);
            for (int kp = -bw; kp <= bw; ++kp) {
                int kk = k + kp;
                if (B == K) {
                    if (kk > K) kk -= m_len;
                    if (kk < -K) kk += m_len;
                }
                v += win.coeff(kp) * base(kk, f);
            }
        } else {
            v = base(k, f);
        }
        if (!std::isfinite(v.real()) || !std::isfinite(v.imag()))
            throw NumericalFailure("non-finite response value", 0);
        curve.values.push_back(v);
    }
    return curve;
}

ResponseCurve empirical_response(const MethodConfig& cfg, int k,
                                 const std::vector<double>& f_grid, long long settle) {
    validate(cfg);
    const int m_len = cfg.M();
    if (k < -cfg.B || k > cfg.B) throw InvalidInput("bin index outside the analysis band");
    if (settle < 0) settle = 50LL * m_len;

    ResponseCurve curve;
    curve.f_grid = f_grid;
    curve.k = k;
    curve.config = cfg;
    curve.values.reserve(f_grid.size());

    auto bank = build(cfg);
    for (double f : f_grid) {
        bank->reset();
        for (long long n = 0; n < settle; ++n)
            bank->step(std::polar(1.0, 2.0 * kPi * f * n));
        cplx acc(0, 0);
        for (long long n = settle; n < settle + m_len; ++n) {
            const SpectrumFrame& frame = bank->step(std::polar(1.0, 2.0 * kPi * f * n));
            acc += frame.windowed[k + cfg.B] * std::polar(1.0, -2.0 * kPi * f * n);
        }
        curve.values.push_back(acc / static_cast<double>(m_len));
    }
    return curve;
}

std::vector<cplx> impulse_response(const MethodConfig& cfg, int k, long long n_len) {
    validate(cfg);
    if (k < -cfg.B || k > cfg.B) throw InvalidInput("bin index outside the analysis band");
    if (n_len < 1) throw InvalidInput("impulse response needs n_len >= 1");
    auto bank = build(cfg);
    std::vector<cplx> h;
    h.reserve(n_len);
    for (long long n = 0; n < n_len; ++n) {
        const SpectrumFrame& frame = bank->step(n == 0 ? 1.0 : 0.0);
        h.push_back(frame.windowed[k + cfg.B]);
    }
    return h;
}

void export_response_csv(const ResponseCurve& curve, const std::string& path) {
    CsvWriter out(path);
    out.line("f,mag_db,phase_rad");
    for (size_t i = 0; i < curve.f_grid.size(); ++i) {
        double mag = std::abs(curve.values[i]);
        double db = 20.0 * std::log10(std::max(mag, 1e-300));
        out.row({csv_num(curve.f_grid[i]), csv_num(db), csv_num(std::arg(curve.values[i]))});
    }
}

}  // namespace recdft
