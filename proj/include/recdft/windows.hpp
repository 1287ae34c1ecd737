#ifndef RECDFT_WINDOWS_HPP
#define RECDFT_WINDOWS_HPP

#include <string>
#include <vector>

#include "recdft/matrix.hpp"

namespace recdft {

// Causal time-domain window w(m), m = 0..M-1, centre at K = (M-1)/2.
struct TimeWindow {
    std::vector<double> coeffs;
    int M = 0;
    double f_delta = 0.0;  // design half-bandwidth, 0 when not applicable
    double alpha = 0.0;    // in-band power fraction, 0 when not computed
};

enum class FreqWindowKind { hann, slepian_freq, custom };

// Frequency-domain window over bins k = -B_win..+B_win, stored at index
// k + B_win. coeffs carry the causal phase factor e^{-j 2 pi k K / M};
// raw_coeffs are the real pre-phase values.
struct FreqWindow {
    std::vector<cplx> coeffs;
    std::vector<double> raw_coeffs;
    int B_win = 0;
    int M = 0;
    FreqWindowKind kind = FreqWindowKind::custom;
    double f_delta = 0.0;
    double alpha = 0.0;  // set for slepian_freq designs only

    double raw(int k) const { return raw_coeffs[k + B_win]; }
    cplx coeff(int k) const { return coeffs[k + B_win]; }
};

// M x M matrix whose quadratic form w'Qw measures the window power falling
// inside |f| <= f_delta; diagonal is exactly 2 f_delta.
RealMatrix concentration_matrix(int M, double f_delta);

// All-ones window of odd length M.
TimeWindow rectangular_time(int M);

// Maximally concentrated unit-norm time window: top eigenvector of the
// concentration matrix, sign fixed so the coefficients sum positive.
TimeWindow slepian_time(int M, double f_delta);

// Maximally concentrated window expressible with 2*B_win+1 frequency-domain
// coefficients. The implied time window (freq_to_time) has unit norm.
FreqWindow slepian_freq(int M, int B_win, double f_delta);

// Sum-of-cosine window from raw coefficients with raw(0) = 1; applies the
// causal phase factor. hann() is the fixed (1/2, 1, 1/2) instance.
FreqWindow sum_of_cosine(const std::vector<double>& raw, int M);
FreqWindow hann_window(int M);

// In-band power fraction of an arbitrary window (Rayleigh quotient).
double concentration(const TimeWindow& window, double f_delta);

// Expand a frequency window into its causal time-domain equivalent.
TimeWindow freq_to_time(const FreqWindow& window, int M);

std::string to_string(FreqWindowKind kind);

}  // namespace recdft

#endif
