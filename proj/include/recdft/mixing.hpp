#ifndef RECDFT_MIXING_HPP
#define RECDFT_MIXING_HPP

#include <string>

#include "recdft/matrix.hpp"
#include "recdft/windows.hpp"

namespace recdft {

// Orthonormalizing mixing matrix for a bank of damped resonators covering
// bins -B..+B of an M-point analysis (M = 2K+1).
struct MixingMatrix {
    ComplexMatrix entries;  // (2B+1) x (2B+1)
    int B = 0;
    int K = 0;
    double sigma = 0.0;
    double condition = 1.0;     // condition estimate of the Gram matrix
    bool fused_window = false;  // true once a window has been pre-multiplied

    int size() const { return 2 * B + 1; }
};

// Gram matrix of exponentially weighted analysis sinusoids,
// entry(k2, k1) = 1 / (1 - e^{sigma + j(w_k2 - w_k1)}), w_k = 2 pi k / M.
ComplexMatrix gram_matrix(int B, int M, double sigma);

// H_mix = inverse of the Gram matrix. Refuses designs whose Gram condition
// exceeds cond_bound instead of returning a poorly resolved matrix.
MixingMatrix design_mixing(int B, int M, double sigma, double cond_bound = 1e12);

// Pre-multiply a banded window matrix: result row k combines mixed rows
// k-B_win..k+B_win. Edge rows pass through unwindowed unless the bank spans
// all M bins, in which case the band wraps circularly.
MixingMatrix fuse_window(const MixingMatrix& mix, const FreqWindow& win);

// Convolve a spectrum vector (bins -B..+B at index k+B) with a frequency
// window under the same edge convention as fuse_window.
std::vector<cplx> apply_freq_window(const FreqWindow& win, const std::vector<cplx>& bins,
                                    int B, int M);

struct OrthoReport {
    double max_gram_deviation = 0.0;    // mixed responses vs analysis sinusoids
    double max_interp_deviation = 0.0;  // mixed response at bin centres vs identity
    bool ok = false;
};

// Verify the design numerically: truncated-sum correlation of the mixed
// impulse responses against the undamped analysis sinusoids, plus the mixed
// frequency response evaluated at every in-band bin centre.
OrthoReport orthonormality_check(const MixingMatrix& mix, double tolerance);

void export_mixing_csv(const MixingMatrix& mix, const std::string& path);
MixingMatrix import_mixing_csv(const std::string& path);

}  // namespace recdft

#endif
