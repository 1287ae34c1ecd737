#ifndef RECDFT_FILTERBANK_HPP
#define RECDFT_FILTERBANK_HPP

#include <memory>
#include <string>
#include <vector>

#include "recdft/matrix.hpp"

namespace recdft {

enum class Precision { f32, f64 };

std::string to_string(Precision p);
Precision precision_from_string(const std::string& s);

// Static description of one analysis method. Methods 1..12 select the block
// wiring listed in build(); bandpass_id is the diagnostic bank of damped
// resonators without mixing.
struct MethodConfig {
    static constexpr int bandpass_id = 0;

    int method_id = 1;
    int K = 64;           // bank covers bins -K..K, M = 2K+1
    int B = 64;           // bins actually produced: -B..B
    int B_win = -1;       // window half-width; -1 selects the method default
    double sigma = 0.0;   // forgetting factor, < 0 where required
    int l = 1;            // prediction horizon / synthesis phase
    Precision precision = Precision::f64;
    double f_delta = 0.0;      // window design half-bandwidth; 0 selects default
    bool fused_hann = false;   // method 12: pre-multiply a Hann window into the mixing matrix
    bool synthesis = false;    // emit x_hat/err for non-observer methods too

    int M() const { return 2 * K + 1; }
    bool observer() const { return method_id == 7 || method_id == 8; }
};

// Throws InvalidInput naming the violated rule.
void validate(const MethodConfig& cfg);

struct SpectrumFrame {
    long long n = 0;
    std::vector<cplx> raw;       // bins -B..B at index k+B
    std::vector<cplx> windowed;  // after the frequency-window stage (= raw when absent)
    cplx x_hat{0.0, 0.0};        // predicted x(n+l) when synthesis is on
    cplx err{0.0, 0.0};          // prediction error e(n)
    bool has_synthesis = false;
};

class FilterBank {
public:
    virtual ~FilterBank() = default;

    // One sample in, one frame out. The frame reference stays valid until the
    // next step/reset on this bank.
    virtual const SpectrumFrame& step(double x) = 0;
    virtual const SpectrumFrame& step(cplx x) = 0;

    virtual std::vector<SpectrumFrame> process(const std::vector<double>& xs) = 0;
    virtual void reset() = 0;
    virtual const MethodConfig& config() const = 0;
};

std::unique_ptr<FilterBank> build(const MethodConfig& cfg);

// Mean |err| over frames carrying synthesis output.
double quality(const std::vector<SpectrumFrame>& frames);

void export_frames_csv(const std::vector<SpectrumFrame>& frames, const std::string& path);

std::string config_to_keyvalues(const MethodConfig& cfg);
MethodConfig config_from_keyvalues(const std::string& text);

}  // namespace recdft

#endif
