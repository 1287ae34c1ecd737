#include "recdft/filterbank.hpp"

#include <cmath>
#include <sstream>

#include "recdft/csv.hpp"
#include "recdft/mixing.hpp"
#include "recdft/windows.hpp"

namespace recdft {

namespace {
constexpr double kPi = 3.14159265358979323846;
}

std::string to_string(Precision p) { return p == Precision::f32 ? "single" : "double"; }

Precision precision_from_string(const std::string& s) {
    if (s == "single") return Precision::f32;
    if (s == "double") return Precision::f64;
    throw InvalidInput("precision must be 'single' or 'double'");
}

void validate(const MethodConfig& cfg) {
    if (cfg.method_id < 0 || cfg.method_id > 12)
        throw InvalidInput("method_id must be 1..12 or 0 (bandpass diagnostic)");
    if (cfg.K < 0) throw InvalidInput("K must be nonnegative (M = 2K+1)");
    if (cfg.B < 0 || cfg.B > cfg.K) throw InvalidInput("B must satisfy 0 <= B <= K");
    if (cfg.B_win != -1 && (cfg.B_win < 0 || cfg.B_win > cfg.B))
        throw InvalidInput("B_win must satisfy 0 <= B_win <= B");
    if (cfg.method_id == 7 && cfg.B != cfg.K)
        throw InvalidInput("method 7 requires B = K (full bank); use method 8 for B < K");
    if (cfg.method_id == 8 && cfg.B >= cfg.K)
        throw InvalidInput("method 8 requires B < K; use method 7 for the full bank");
    if (cfg.method_id == 7 && cfg.l != 1) throw InvalidInput("method 7 requires l = 1");
    if (cfg.observer() && cfg.l < 1) throw InvalidInput("observer methods require l >= 1");
    bool needs_sigma = (cfg.method_id >= 9 && cfg.method_id <= 12) ||
                       cfg.method_id == MethodConfig::bandpass_id;
    if (needs_sigma && !(cfg.sigma < 0.0))
        throw InvalidInput("sigma < 0 required for methods 9-12 and bandpass mode");
    if (cfg.fused_hann && cfg.method_id != 12)
        throw InvalidInput("fused_hann applies to method 12 only");
    if (cfg.f_delta != 0.0 && (!(cfg.f_delta > 0.0) || cfg.f_delta > 0.5))
        throw InvalidInput("f_delta must lie in (0, 1/2]");
}

namespace {

enum class Pre { scale, comb, fading_comb, unit, bandpass };
enum class Ana { fir, resonator, damped, mod_table, mod_recursive };

template <typename T>
class BankImpl final : public FilterBank {
public:
    using C = std::complex<T>;

    explicit BankImpl(const MethodConfig& cfg) : cfg_(cfg) {
        M_ = cfg.M();
        K_ = cfg.K;
        B_ = cfg.B;
        nb_ = 2 * B_ + 1;
        wire();
        alloc_state();
        reset();
    }

    const SpectrumFrame& step(double x) override { return step_impl(static_cast<T>(x), T(0)); }

    const SpectrumFrame& step(cplx x) override {
        if (x.imag() != 0.0) imag_seen_ = true;
        return step_impl(static_cast<T>(x.real()), static_cast<T>(x.imag()));
    }

    std::vector<SpectrumFrame> process(const std::vector<double>& xs) override {
        std::vector<SpectrumFrame> out;
        out.reserve(xs.size());
        for (double x : xs) out.push_back(step(x));
        return out;
    }

    void reset() override {
        std::fill(xr_.begin(), xr_.end(), T(0));
        std::fill(xi_.begin(), xi_.end(), T(0));
        std::fill(vline_.begin(), vline_.end(), C(0, 0));
        std::fill(acc_.begin(), acc_.end(), C(0, 0));
        std::fill(mod_p_.begin(), mod_p_.end(), C(1, 0));
        std::fill(fb_.begin(), fb_.end(), C(0, 0));
        std::fill(idx_.begin(), idx_.end(), 0);
        fb_pos_ = 0;
        n_ = 0;
        phase_ = 0;
        imag_seen_ = false;
    }

    const MethodConfig& config() const override { return cfg_; }

private:
    void wire() {
        switch (cfg_.method_id) {
            case 1:
                build_fir(rectangular_time(M_), 1.0 / M_);
                break;
            case 2: {
                double fd = cfg_.f_delta > 0.0 ? cfg_.f_delta : 2.0 / M_;
                TimeWindow w = slepian_time(M_, fd);
                double sum = 0.0;
                for (double v : w.coeffs) sum += v;
                build_fir(w, 1.0 / sum);
                break;
            }
            case 3:
                pre_ = Pre::comb;
                ana_ = Ana::resonator;
                pre_gain_ = static_cast<T>(1.0 / M_);
                build_rot(0.0);
                break;
            case 4:
                pre_ = Pre::comb;
                ana_ = Ana::mod_recursive;
                pre_gain_ = static_cast<T>(1.0 / M_);
                build_modulator();
                break;
            case 5:
                pre_ = Pre::comb;
                ana_ = Ana::mod_table;
                pre_gain_ = static_cast<T>(1.0 / M_);
                build_modulator();
                break;
            case 6: {
                pre_ = Pre::comb;
                ana_ = Ana::mod_table;
                pre_gain_ = static_cast<T>(1.0 / M_);
                build_modulator();
                int bw = cfg_.B_win >= 0 ? cfg_.B_win : std::min(2, B_);
                double fd = cfg_.f_delta > 0.0 ? cfg_.f_delta : 3.0 / M_;
                if (bw > 0) build_window(slepian_freq(M_, bw, fd));
                break;
            }
            case 7:
            case 8:
                feedback_ = true;
                ana_ = Ana::resonator;
                pre_gain_ = static_cast<T>(1.0 / M_);
                build_rot(0.0);
                build_synthesis();
                break;
            case 9:
                pre_ = Pre::fading_comb;
                ana_ = Ana::resonator;
                build_fading_comb();
                build_rot(0.0);
                break;
            case 10:
                pre_ = Pre::fading_comb;
                ana_ = Ana::mod_table;
                build_fading_comb();
                build_modulator();
                break;
            case 11:
                if (B_ < 1) throw InvalidInput("method 11 requires B >= 1 for the Hann window");
                pre_ = Pre::fading_comb;
                ana_ = Ana::mod_table;
                build_fading_comb();
                build_modulator();
                build_window(hann_window(M_));
                break;
            case 12: {
                pre_ = Pre::unit;
                ana_ = Ana::damped;
                build_rot(cfg_.sigma);
                MixingMatrix mix = design_mixing(B_, M_, cfg_.sigma);
                if (cfg_.fused_hann) mix = fuse_window(mix, hann_window(M_));
                mix_rows_.resize(static_cast<size_t>(nb_) * nb_);
                for (int i = 0; i < nb_; ++i)
                    for (int j = 0; j < nb_; ++j)
                        mix_rows_[static_cast<size_t>(i) * nb_ + j] =
                            C(static_cast<T>(mix.entries(i, j).real()),
                              static_cast<T>(mix.entries(i, j).imag()));
                mixing_ = true;
                break;
            }
            case MethodConfig::bandpass_id:
                pre_ = Pre::bandpass;
                ana_ = Ana::damped;
                pre_gain_ = static_cast<T>(1.0 - std::exp(cfg_.sigma));
                build_rot(cfg_.sigma);
                break;
            default:
                throw InvalidInput("method_id must be 1..12 or 0 (bandpass diagnostic)");
        }
        if (cfg_.observer() || cfg_.synthesis) {
            if (syn_.empty()) build_synthesis();
            synth_out_ = true;
        }
    }

    void build_fir(const TimeWindow& w, double gain) {
        pre_ = Pre::scale;
        ana_ = Ana::fir;
        fir_re_.resize(static_cast<size_t>(nb_) * M_);
        fir_im_.resize(static_cast<size_t>(nb_) * M_);
        for (int k = -B_; k <= B_; ++k) {
            size_t row = static_cast<size_t>(k + B_) * M_;
            for (int m = 0; m < M_; ++m) {
                double c = gain * w.coeffs[m];
                fir_re_[row + m] = static_cast<T>(c * std::cos(2.0 * kPi * k * m / M_));
                fir_im_[row + m] = static_cast<T>(c * std::sin(2.0 * kPi * k * m / M_));
            }
        }
    }

    void build_rot(double sigma) {
        double r = std::exp(sigma);  // 1 when undamped
        rot_.resize(nb_);
        for (int k = -B_; k <= B_; ++k) {
            double th = 2.0 * kPi * k / M_;
            rot_[k + B_] = C(static_cast<T>(r * std::cos(th)), static_cast<T>(r * std::sin(th)));
        }
    }

    void build_modulator() {
        // one exact length-M table of e^{-j 2 pi q / M}, mirrored so that
        // root[M-q] is the exact conjugate of root[q]
        root_.resize(M_);
        for (int q = 0; q <= M_ / 2; ++q) {
            double th = -2.0 * kPi * q / M_;
            C v(static_cast<T>(std::cos(th)), static_cast<T>(std::sin(th)));
            root_[q] = v;
            if (q) root_[M_ - q] = std::conj(v);
        }
        stride_.resize(nb_);
        for (int k = -B_; k <= B_; ++k) stride_[k + B_] = ((k % M_) + M_) % M_;
        if (ana_ == Ana::mod_recursive) {
            mod_rot_.resize(nb_);
            for (int k = -B_; k <= B_; ++k) {
                double th = -2.0 * kPi * k / M_;
                mod_rot_[k + B_] =
                    C(static_cast<T>(std::cos(th)), static_cast<T>(std::sin(th)));
            }
            mod_p_.resize(nb_);
        }
        idx_.resize(nb_, 0);
    }

    void build_fading_comb() {
        double r_m = std::exp(cfg_.sigma * M_);
        comb_r_ = static_cast<T>(r_m);
        pre_gain_ = static_cast<T>((1.0 - r_m) / M_);
    }

    void build_window(const FreqWindow& win) {
        win_b_ = win.B_win;
        win_coeffs_.resize(2 * win_b_ + 1);
        for (int kp = -win_b_; kp <= win_b_; ++kp)
            win_coeffs_[kp + win_b_] = C(static_cast<T>(win.coeff(kp).real()),
                                         static_cast<T>(win.coeff(kp).imag()));
        windowed_ = win_b_ > 0;
    }

    void build_synthesis() {
        syn_.resize(nb_);
        for (int k = -B_; k <= B_; ++k) {
            double th = 2.0 * kPi * k * cfg_.l / M_;
            syn_[k + B_] = C(static_cast<T>(std::cos(th)), static_cast<T>(std::sin(th)));
        }
    }

    void alloc_state() {
        xr_.assign(M_, T(0));
        xi_.assign(M_, T(0));
        if (pre_ == Pre::fading_comb) vline_.assign(M_, C(0, 0));
        acc_.assign(nb_, C(0, 0));
        if (ana_ == Ana::mod_recursive) mod_p_.assign(nb_, C(1, 0));
        if (feedback_ || cfg_.synthesis) fb_.assign(std::max(cfg_.l, 1), C(0, 0));
        ybuf_.assign(nb_, C(0, 0));
        stage_.assign(nb_, C(0, 0));
        wstage_.assign(nb_, C(0, 0));
        frame_.raw.assign(nb_, cplx(0, 0));
        frame_.windowed.assign(nb_, cplx(0, 0));
        frame_.has_synthesis = synth_out_;
    }

    // dot of the coefficient row against the delay line, newest sample first
    void fir_dot(const T* c, T& out) const {
        T s = 0;
        int m = 0;
        for (int pos = phase_; pos >= 0; --pos, ++m) s += c[m] * xr_[pos];
        for (int pos = M_ - 1; pos > phase_; --pos, ++m) s += c[m] * xr_[pos];
        out = s;
    }
    void fir_dot_imag(const T* c, T& out) const {
        T s = 0;
        int m = 0;
        for (int pos = phase_; pos >= 0; --pos, ++m) s += c[m] * xi_[pos];
        for (int pos = M_ - 1; pos > phase_; --pos, ++m) s += c[m] * xi_[pos];
        out = s;
    }

    const SpectrumFrame& step_impl(T x_re, T x_im) {
        C x(x_re, x_im);
        C e = x;
        if (feedback_ || cfg_.synthesis) e -= fb_[fb_pos_];

        // pre-filter; observers feed the error, everything else the input
        C v(0, 0);
        C ana_in = feedback_ ? e : x;
        switch (pre_) {
            case Pre::scale:
                v = ana_in * pre_gain_;
                break;
            case Pre::comb: {
                C old(xr_[phase_], xi_[phase_]);
                v = (x - old) * pre_gain_;
                break;
            }
            case Pre::fading_comb: {
                C old(xr_[phase_], xi_[phase_]);
                C vm = vline_[phase_];
                v = comb_r_ * vm + pre_gain_ * (x - old);
                vline_[phase_] = v;
                break;
            }
            case Pre::unit:
                v = ana_in;
                break;
            case Pre::bandpass:
                v = ana_in * pre_gain_;
                break;
        }
        // the raw input enters the delay line after the comb has read x(n-M)
        xr_[phase_] = x_re;
        xi_[phase_] = x_im;

        // analyzer bank
        switch (ana_) {
            case Ana::fir: {
                for (int i = 0; i < nb_; ++i) {
                    const T* cr = &fir_re_[static_cast<size_t>(i) * M_];
                    const T* ci = &fir_im_[static_cast<size_t>(i) * M_];
                    T rr, ri;
                    fir_dot(cr, rr);
                    fir_dot(ci, ri);
                    if (imag_seen_) {
                        T jr, ji;
                        fir_dot_imag(ci, jr);
                        fir_dot_imag(cr, ji);
                        ybuf_[i] = C(rr - jr, ri + ji);
                    } else {
                        ybuf_[i] = C(rr, ri);
                    }
                }
                break;
            }
            case Ana::resonator:
            case Ana::damped:
                for (int i = 0; i < nb_; ++i) {
                    acc_[i] = v + rot_[i] * acc_[i];
                    ybuf_[i] = acc_[i];
                }
                break;
            case Ana::mod_table:
                for (int i = 0; i < nb_; ++i) {
                    C w = root_[idx_[i]];
                    acc_[i] += w * v;
                    ybuf_[i] = std::conj(w) * acc_[i];
                    idx_[i] += stride_[i];
                    if (idx_[i] >= M_) idx_[i] -= M_;
                }
                break;
            case Ana::mod_recursive:
                for (int i = 0; i < nb_; ++i) {
                    C p = (phase_ == 0) ? C(1, 0) : mod_p_[i] * mod_rot_[i];
                    mod_p_[i] = p;
                    acc_[i] += p * v;
                    ybuf_[i] = std::conj(p) * acc_[i];
                }
                break;
        }

        // mixing stage (method 12); its output is the method's spectrum
        C* bins = ybuf_.data();
        if (mixing_) {
            for (int i = 0; i < nb_; ++i) {
                C s(0, 0);
                const C* row = &mix_rows_[static_cast<size_t>(i) * nb_];
                for (int j = 0; j < nb_; ++j) s += row[j] * ybuf_[j];
                stage_[i] = s;
            }
            bins = stage_.data();
        }

        // frequency-domain window; edge bins pass through on a partial bank
        C* final_bins = bins;
        if (windowed_) {
            bool full = (B_ == K_);
            for (int k = -B_; k <= B_; ++k) {
                if (!full && std::abs(k) > B_ - win_b_) {
                    wstage_[k + B_] = bins[k + B_];
                    continue;
                }
                C s(0, 0);
                for (int kp = -win_b_; kp <= win_b_; ++kp) {
                    int kk = k + kp;
                    if (full) {
                        if (kk > K_) kk -= M_;
                        if (kk < -K_) kk += M_;
                    }
                    s += win_coeffs_[kp + win_b_] * bins[kk + B_];
                }
                wstage_[k + B_] = s;
            }
            final_bins = wstage_.data();
        }

        // synthesis and the feedback register
        C xhat(0, 0);
        if (synth_out_) {
            for (int i = 0; i < nb_; ++i) xhat += syn_[i] * final_bins[i];
            fb_[fb_pos_] = xhat;
            fb_pos_ = fb_pos_ + 1 == static_cast<int>(fb_.size()) ? 0 : fb_pos_ + 1;
        }

        frame_.n = n_;
        for (int i = 0; i < nb_; ++i) {
            frame_.raw[i] = cplx(bins[i].real(), bins[i].imag());
            frame_.windowed[i] = cplx(final_bins[i].real(), final_bins[i].imag());
        }
        frame_.x_hat = cplx(xhat.real(), xhat.imag());
        frame_.err = synth_out_ ? cplx(e.real(), e.imag()) : cplx(0, 0);
        frame_.has_synthesis = synth_out_;

        ++n_;
        phase_ = phase_ + 1 == M_ ? 0 : phase_ + 1;
        return frame_;
    }

    MethodConfig cfg_;
    int M_ = 0, K_ = 0, B_ = 0, nb_ = 0;

    Pre pre_ = Pre::scale;
    Ana ana_ = Ana::resonator;
    bool mixing_ = false, windowed_ = false, feedback_ = false, synth_out_ = false;

    std::vector<T> fir_re_, fir_im_;
    std::vector<C> rot_, root_, mod_rot_, mix_rows_, win_coeffs_, syn_;
    std::vector<int> stride_;
    T pre_gain_ = T(0);
    T comb_r_ = T(0);
    int win_b_ = 0;

    std::vector<T> xr_, xi_;
    std::vector<C> vline_, acc_, mod_p_, fb_;
    std::vector<int> idx_;
    int fb_pos_ = 0;
    long long n_ = 0;
    int phase_ = 0;
    bool imag_seen_ = false;

    std::vector<C> ybuf_, stage_, wstage_;
    SpectrumFrame frame_;
};

}  // namespace

std::unique_ptr<FilterBank> build(const MethodConfig& cfg) {
    validate(cfg);
    if (cfg.precision == Precision::f32) return std::make_unique<BankImpl<float>>(cfg);
    return std::make_unique<BankImpl<double>>(cfg);
}

double quality(const std::vector<SpectrumFrame>& frames) {
    double sum = 0.0;
    long long count = 0;
    for (const SpectrumFrame& f : frames) {
        if (!f.has_synthesis) continue;
        sum += std::abs(f.err);
        ++count;
    }
    if (count == 0) throw InvalidInput("quality: no frames with synthesis output");
    return sum / static_cast<double>(count);
}

void export_frames_csv(const std::vector<SpectrumFrame>& frames, const std::string& path) {
    CsvWriter w(path);
    w.line("n,k,raw_re,raw_im,win_re,win_im");
    for (const SpectrumFrame& f : frames) {
        int b = static_cast<int>(f.raw.size() / 2);
        for (int k = -b; k <= b; ++k) {
            const cplx& r = f.raw[k + b];
            const cplx& win = f.windowed[k + b];
            w.row({std::to_string(f.n), std::to_string(k), csv_num(r.real()), csv_num(r.imag()),
                   csv_num(win.real()), csv_num(win.imag())});
        }
    }
}

std::string config_to_keyvalues(const MethodConfig& cfg) {
    std::ostringstream out;
    out << "method_id=" << cfg.method_id << '\n'
        << "K=" << cfg.K << '\n'
        << "B=" << cfg.B << '\n'
        << "B_win=" << cfg.B_win << '\n'
        << "sigma=" << csv_num(cfg.sigma) << '\n'
        << "l=" << cfg.l << '\n'
        << "precision=" << to_string(cfg.precision) << '\n'
        << "f_delta=" << csv_num(cfg.f_delta) << '\n'
        << "fused_hann=" << (cfg.fused_hann ? 1 : 0) << '\n'
        << "synthesis=" << (cfg.synthesis ? 1 : 0) << '\n';
    return out.str();
}

MethodConfig config_from_keyvalues(const std::string& text) {
    MethodConfig cfg;
    std::istringstream in(text);
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty() || line[0] == '#') continue;
        size_t eq = line.find('=');
        if (eq == std::string::npos) throw InvalidInput("config line missing '=': " + line);
        std::string key = line.substr(0, eq);
        std::string val = line.substr(eq + 1);
        if (key == "method_id") cfg.method_id = std::stoi(val);
        else if (key == "K") cfg.K = std::stoi(val);
        else if (key == "B") cfg.B = std::stoi(val);
        else if (key == "B_win") cfg.B_win = std::stoi(val);
        else if (key == "sigma") cfg.sigma = std::stod(val);
        else if (key == "l") cfg.l = std::stoi(val);
        else if (key == "precision") cfg.precision = precision_from_string(val);
        else if (key == "f_delta") cfg.f_delta = std::stod(val);
        else if (key == "fused_hann") cfg.fused_hann = std::stoi(val) != 0;
        else if (key == "synthesis") cfg.synthesis = std::stoi(val) != 0;
        else throw InvalidInput("unknown config key: " + key);
    }
    return cfg;
}

}  // namespace recdft
