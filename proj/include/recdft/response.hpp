#pragma once

#include <string>
#include <vector>

#include "recdft/filterbank.hpp"
#include "recdft/matrix.hpp"

namespace recdft {

// frequency response samples of one analysis bin
struct ResponseCurve {
    std::vector<double> f_grid;  // cycles per sample
    std::vector<cplx> values;
    int k = 0;
    MethodConfig config;
};

// sin(M pi u) / (M sin(pi u)) with u = f - k/M; 1 at the removable singularities
double dirichlet(int m_len, double f, int k);

// closed-form response of bin k; open-loop methods only
ResponseCurve analytic_response(const MethodConfig& cfg, int k,
                                const std::vector<double>& f_grid);

// steady-state probe with e^{j2pi f n}; settle < 0 means 50*M samples
ResponseCurve empirical_response(const MethodConfig& cfg, int k,
                                 const std::vector<double>& f_grid,
                                 long long settle = -1);

// final spectral output of bin k for x = delta(n), n = 0..n_len-1
std::vector<cplx> impulse_response(const MethodConfig& cfg, int k, long long n_len);

// columns: f, mag_db, phase_rad
void export_response_csv(const ResponseCurve& curve, const std::string& path);

}  // namespace recdft
