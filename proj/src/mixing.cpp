#include "recdft/mixing.hpp"

#include <cmath>

#include "recdft/csv.hpp"
#include "recdft/linalg.hpp"

namespace recdft {

namespace {

constexpr double kPi = 3.14159265358979323846;

void check_geometry(int b, int m_len, double sigma) {
    if (m_len < 1 || m_len % 2 == 0) throw InvalidInput("bank length must be odd and positive");
    if (b < 0 || 2 * b + 1 > m_len) throw InvalidInput("bin half-width must lie in [0, K]");
    if (!(sigma < 0.0)) throw InvalidInput("forgetting factor must be negative");
}

}  // namespace

ComplexMatrix gram_matrix(int b, int m_len, double sigma) {
    check_geometry(b, m_len, sigma);
    int n = 2 * b + 1;
    double r = std::exp(sigma);
    // one value per diagonal, mirrored conjugate for exact Hermitian symmetry;
    // 1 - r cos(dw) written as -expm1(sigma) cos(dw) + 2 sin^2(dw/2), two
    // nonnegative terms, so the near-unit-circle diagonal stays fully accurate
    std::vector<cplx> diag(n);
    for (int d = 0; d < n; ++d) {
        double dw = 2.0 * kPi * d / m_len;
        double s_half = std::sin(0.5 * dw);
        cplx denom(-std::expm1(sigma) * std::cos(dw) + 2.0 * s_half * s_half,
                   -r * std::sin(dw));
        diag[d] = 1.0 / denom;
    }
    ComplexMatrix g(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) g(i, j) = (i >= j) ? diag[i - j] : std::conj(diag[j - i]);
    g.hermitian = true;
    return g;
}

MixingMatrix design_mixing(int b, int m_len, double sigma, double cond_bound) {
    ComplexMatrix gram = gram_matrix(b, m_len, sigma);
    MixingMatrix mix;
    mix.B = b;
    mix.K = (m_len - 1) / 2;
    mix.sigma = sigma;
    mix.condition = condition_estimate(gram);
    if (!(mix.condition <= cond_bound))
        throw IllConditioned("design_mixing: Gram matrix condition exceeds bound",
                             mix.condition);
    mix.entries = solve_linear(gram, ComplexMatrix::identity(gram.rows()), cond_bound);
    // inverse of Hermitian is Hermitian; make it exact
    int n = mix.entries.rows();
    for (int i = 0; i < n; ++i)
        for (int j = i; j < n; ++j) {
            cplx v = 0.5 * (mix.entries(i, j) + std::conj(mix.entries(j, i)));
            mix.entries(i, j) = v;
            mix.entries(j, i) = std::conj(v);
        }
    mix.entries.hermitian = true;
    return mix;
}

MixingMatrix fuse_window(const MixingMatrix& mix, const FreqWindow& win) {
    if (mix.fused_window) throw InvalidInput("fuse_window: matrix already fused");
    int m_len = 2 * mix.K + 1;
    if (win.M != m_len) throw InvalidInput("fuse_window: window designed for a different length");
    if (win.B_win > mix.B) throw InvalidInput("fuse_window: window wider than the bank");

    int n = mix.size();
    bool full = (mix.B == mix.K);
    ComplexMatrix h_win(n, n);
    for (int k = -mix.B; k <= mix.B; ++k) {
        if (!full && std::abs(k) > mix.B - win.B_win) {
            h_win(k + mix.B, k + mix.B) = 1.0;  // edge bin passes through
            continue;
        }
        for (int kp = -win.B_win; kp <= win.B_win; ++kp) {
            int kk = k + kp;
            if (full) {  // full-width bank: bins wrap modulo M
                if (kk > mix.K) kk -= m_len;
                if (kk < -mix.K) kk += m_len;
            }
            h_win(k + mix.B, kk + mix.B) = win.coeff(kp);
        }
    }
    MixingMatrix fused = mix;
    fused.entries = h_win * mix.entries;
    fused.entries.hermitian = false;
    fused.fused_window = true;
    return fused;
}

std::vector<cplx> apply_freq_window(const FreqWindow& win, const std::vector<cplx>& bins,
                                    int b, int m_len) {
    if (static_cast<int>(bins.size()) != 2 * b + 1)
        throw InvalidInput("apply_freq_window: bin count mismatch");
    int k_max = (m_len - 1) / 2;
    if (win.B_win > b) throw InvalidInput("apply_freq_window: window wider than the bank");
    bool full = (b == k_max);
    std::vector<cplx> out(bins.size());
    for (int k = -b; k <= b; ++k) {
        if (!full && std::abs(k) > b - win.B_win) {
            out[k + b] = bins[k + b];
            continue;
        }
        cplx acc(0, 0);
        for (int kp = -win.B_win; kp <= win.B_win; ++kp) {
            int kk = k + kp;
            if (full) {
                if (kk > k_max) kk -= m_len;
                if (kk < -k_max) kk += m_len;
            }
            acc += win.coeff(kp) * bins[kk + b];
        }
        out[k + b] = acc;
    }
    return out;
}

OrthoReport orthonormality_check(const MixingMatrix& mix, double tolerance) {
    if (mix.fused_window) throw InvalidInput("orthonormality_check: requires an unfused matrix");
    int n = mix.size();
    int m_len = 2 * mix.K + 1;
    double r = std::exp(mix.sigma);
    // truncate once the damped terms drop below double resolution
    int m_max = static_cast<int>(std::ceil(std::log(1e-16) / mix.sigma));

    // mixed impulse responses h_k(m) = sum_k1 H[k,k1] (r e^{j w_k1})^m
    std::vector<std::vector<cplx>> h(n, std::vector<cplx>(m_max + 1));
    std::vector<cplx> pole(n), pw(n, cplx(1, 0));
    for (int k1 = 0; k1 < n; ++k1)
        pole[k1] = r * std::polar(1.0, 2.0 * kPi * (k1 - mix.B) / m_len);
    for (int m = 0; m <= m_max; ++m) {
        for (int k = 0; k < n; ++k) {
            cplx acc(0, 0);
            for (int k1 = 0; k1 < n; ++k1) acc += mix.entries(k, k1) * pw[k1];
            h[k][m] = acc;
        }
        for (int k1 = 0; k1 < n; ++k1) pw[k1] *= pole[k1];
    }

    OrthoReport rep;
    // correlate against the undamped analysis sinusoids e^{j w_k2 m}
    for (int k2 = 0; k2 < n; ++k2) {
        cplx rot = std::polar(1.0, -2.0 * kPi * (k2 - mix.B) / m_len);
        for (int k1 = 0; k1 < n; ++k1) {
            cplx acc(0, 0), ph(1, 0);
            for (int m = 0; m <= m_max; ++m) {
                acc += ph * h[k1][m];
                ph *= rot;
            }
            double dev = std::abs(acc - (k1 == k2 ? cplx(1, 0) : cplx(0, 0)));
            rep.max_gram_deviation = std::max(rep.max_gram_deviation, dev);
        }
    }

    // mixed frequency response at every bin centre
    for (int k2 = 0; k2 < n; ++k2)
        for (int k1 = 0; k1 < n; ++k1) {
            cplx acc(0, 0);
            for (int k = 0; k < n; ++k)
                acc += mix.entries(k1, k) /
                       (1.0 - r * std::polar(1.0, 2.0 * kPi * (k - k2) / m_len));
            double dev = std::abs(acc - (k1 == k2 ? cplx(1, 0) : cplx(0, 0)));
            rep.max_interp_deviation = std::max(rep.max_interp_deviation, dev);
        }

    rep.ok = rep.max_gram_deviation <= tolerance && rep.max_interp_deviation <= tolerance;
    return rep;
}

void export_mixing_csv(const MixingMatrix& mix, const std::string& path) {
    CsvWriter w(path);
    w.line("B,M,sigma,condition,fused");
    w.row({std::to_string(mix.B), std::to_string(2 * mix.K + 1), csv_num(mix.sigma),
           csv_num(mix.condition), mix.fused_window ? "1" : "0"});
    w.line("row,col,real,imag");
    for (int i = 0; i < mix.entries.rows(); ++i)
        for (int j = 0; j < mix.entries.cols(); ++j)
            w.row({std::to_string(i), std::to_string(j), csv_num(mix.entries(i, j).real()),
                   csv_num(mix.entries(i, j).imag())});
}

MixingMatrix import_mixing_csv(const std::string& path) {
    auto rows = read_csv(path);
    if (rows.size() < 3 || rows[1].size() < 5) throw InvalidInput("mixing csv: malformed header");
    MixingMatrix mix;
    mix.B = std::stoi(rows[1][0]);
    mix.K = (std::stoi(rows[1][1]) - 1) / 2;
    mix.sigma = std::stod(rows[1][2]);
    mix.condition = std::stod(rows[1][3]);
    mix.fused_window = rows[1][4] == "1";
    int n = 2 * mix.B + 1;
    mix.entries = ComplexMatrix(n, n);
    for (size_t r = 3; r < rows.size(); ++r) {
        if (rows[r].size() < 4) throw InvalidInput("mixing csv: malformed entry row");
        int i = std::stoi(rows[r][0]), j = std::stoi(rows[r][1]);
        if (i < 0 || i >= n || j < 0 || j >= n) throw InvalidInput("mixing csv: index out of range");
        mix.entries(i, j) = cplx(std::stod(rows[r][2]), std::stod(rows[r][3]));
    }
    mix.entries.hermitian = !mix.fused_window;
    return mix;
}

}  // namespace recdft
