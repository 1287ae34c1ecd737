#include "recdft/windows.hpp"

#include <algorithm>
#include <cmath>

#include "recdft/linalg.hpp"

namespace recdft {

namespace {

constexpr double kPi = 3.14159265358979323846;

void check_length(int m_len) {
    if (m_len < 1 || m_len % 2 == 0) throw InvalidInput("window length must be odd and positive");
}

void check_f_delta(double f_delta) {
    if (!(f_delta > 0.0) || f_delta > 0.5)
        throw InvalidInput("half-bandwidth must lie in (0, 1/2]");
}

}  // namespace

RealMatrix concentration_matrix(int m_len, double f_delta) {
    check_length(m_len);
    check_f_delta(f_delta);
    RealMatrix q(m_len, m_len);
    for (int i = 0; i < m_len; ++i)
        for (int j = 0; j < m_len; ++j) {
            int d = i - j;
            q(i, j) = (d == 0) ? 2.0 * f_delta : std::sin(2.0 * kPi * d * f_delta) / (kPi * d);
        }
    return q;
}

TimeWindow rectangular_time(int m_len) {
    check_length(m_len);
    TimeWindow w;
    w.M = m_len;
    w.coeffs.assign(m_len, 1.0);
    return w;
}

TimeWindow slepian_time(int m_len, double f_delta) {
    check_length(m_len);
    check_f_delta(f_delta);
    EigResult e = eig_sym(concentration_matrix(m_len, f_delta));
    TimeWindow w;
    w.M = m_len;
    w.f_delta = f_delta;
    w.alpha = std::clamp(e.values[0], 0.0, 1.0);
    w.coeffs.resize(m_len);
    double sum = 0.0;
    for (int m = 0; m < m_len; ++m) sum += e.vectors(m, 0);
    double sign = (sum >= 0.0) ? 1.0 : -1.0;
    for (int m = 0; m < m_len; ++m) w.coeffs[m] = sign * e.vectors(m, 0);
    return w;
}

FreqWindow slepian_freq(int m_len, int b_win, double f_delta) {
    check_length(m_len);
    check_f_delta(f_delta);
    int k_max = (m_len - 1) / 2;
    if (b_win < 1 || b_win > k_max)
        throw InvalidInput("frequency window half-width must lie in [1, K]");

    int n = 2 * b_win + 1;
    RealMatrix q = concentration_matrix(m_len, f_delta);
    // G = (1/M) F' Q F with F(m,k) = e^{j 2 pi m k / M}, m = -K..K. Q depends
    // only on m2-m1, which makes G real up to rounding.
    ComplexMatrix f(m_len, n);
    for (int m = -k_max; m <= k_max; ++m)
        for (int k = -b_win; k <= b_win; ++k)
            f(m + k_max, k + b_win) = std::polar(1.0, 2.0 * kPi * m * k / m_len);
    ComplexMatrix qf(m_len, n);
    for (int i = 0; i < m_len; ++i)
        for (int j = 0; j < m_len; ++j) {
            double qv = q(i, j);
            for (int k = 0; k < n; ++k) qf(i, k) += qv * f(j, k);
        }
    RealMatrix g(n, n);
    double max_imag = 0.0;
    for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b) {
            cplx acc(0, 0);
            for (int m = 0; m < m_len; ++m) acc += std::conj(f(m, a)) * qf(m, b);
            acc /= m_len;
            g(a, b) = acc.real();
            max_imag = std::max(max_imag, std::abs(acc.imag()));
        }
    if (max_imag > 1e-9) throw NumericalFailure("slepian_freq: basis product not real", 0);

    EigResult e = eig_sym(g);
    FreqWindow w;
    w.M = m_len;
    w.B_win = b_win;
    w.kind = FreqWindowKind::slepian_freq;
    w.f_delta = f_delta;
    w.alpha = std::clamp(e.values[0], 0.0, 1.0);
    // eigenvector is unit norm; 1/sqrt(M) makes the implied time window unit norm
    double scale = 1.0 / std::sqrt(static_cast<double>(m_len));
    if (e.vectors(b_win, 0) < 0.0) scale = -scale;
    w.raw_coeffs.resize(n);
    w.coeffs.resize(n);
    for (int k = -b_win; k <= b_win; ++k) {
        double v = scale * e.vectors(k + b_win, 0);
        w.raw_coeffs[k + b_win] = v;
        w.coeffs[k + b_win] = v * std::polar(1.0, -2.0 * kPi * k * k_max / m_len);
    }
    return w;
}

FreqWindow sum_of_cosine(const std::vector<double>& raw, int m_len) {
    check_length(m_len);
    if (raw.empty() || raw.size() % 2 == 0)
        throw InvalidInput("sum-of-cosine coefficients must have odd count");
    int b_win = static_cast<int>(raw.size() / 2);
    int k_max = (m_len - 1) / 2;
    if (b_win > k_max) throw InvalidInput("frequency window wider than the bank");
    if (std::abs(raw[b_win] - 1.0) > 1e-12)
        throw InvalidInput("sum-of-cosine centre coefficient must be 1");
    FreqWindow w;
    w.M = m_len;
    w.B_win = b_win;
    w.kind = FreqWindowKind::custom;
    w.raw_coeffs = raw;
    w.coeffs.resize(raw.size());
    for (int k = -b_win; k <= b_win; ++k)
        w.coeffs[k + b_win] = raw[k + b_win] * std::polar(1.0, -2.0 * kPi * k * k_max / m_len);
    return w;
}

FreqWindow hann_window(int m_len) {
    FreqWindow w = sum_of_cosine({0.5, 1.0, 0.5}, m_len);
    w.kind = FreqWindowKind::hann;
    return w;
}

double concentration(const TimeWindow& window, double f_delta) {
    check_f_delta(f_delta);
    int m_len = static_cast<int>(window.coeffs.size());
    if (m_len == 0 || m_len != window.M) throw InvalidInput("window length mismatch");
    RealMatrix q = concentration_matrix(m_len, f_delta);
    double num = 0.0, den = 0.0;
    for (int i = 0; i < m_len; ++i) {
        den += window.coeffs[i] * window.coeffs[i];
        for (int j = 0; j < m_len; ++j) num += window.coeffs[i] * q(i, j) * window.coeffs[j];
    }
    if (den == 0.0) throw InvalidInput("window is identically zero");
    return std::clamp(num / den, 0.0, 1.0);
}

TimeWindow freq_to_time(const FreqWindow& window, int m_len) {
    check_length(m_len);
    if (window.M != m_len) throw InvalidInput("frequency window designed for a different length");
    int k_max = (m_len - 1) / 2;
    if (window.B_win > k_max) throw InvalidInput("frequency window wider than the bank");
    TimeWindow t;
    t.M = m_len;
    t.f_delta = window.f_delta;
    t.coeffs.resize(m_len);
    for (int m = 0; m < m_len; ++m) {
        cplx acc(0, 0);
        for (int k = -window.B_win; k <= window.B_win; ++k)
            acc += window.raw(k) * std::polar(1.0, 2.0 * kPi * k * (m - k_max) / m_len);
        t.coeffs[m] = acc.real();
    }
    if (window.f_delta > 0.0) t.alpha = concentration(t, window.f_delta);
    return t;
}

std::string to_string(FreqWindowKind kind) {
    switch (kind) {
        case FreqWindowKind::hann: return "hann";
        case FreqWindowKind::slepian_freq: return "slepian_freq";
        case FreqWindowKind::custom: return "custom";
    }
    return "custom";
}

}  // namespace recdft
