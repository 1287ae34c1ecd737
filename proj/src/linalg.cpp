#include "recdft/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

namespace recdft {

namespace {

// One LU factorization with partial pivoting, shared by the solver and the
// condition estimator. Returns false when a pivot degenerates to exact zero.
struct LuFactors {
    ComplexMatrix lu;
    std::vector<int> perm;
    bool singular = false;
};

LuFactors lu_factor(const ComplexMatrix& a) {
    int n = a.rows();
    LuFactors f{a, std::vector<int>(n), false};
    std::iota(f.perm.begin(), f.perm.end(), 0);
    for (int k = 0; k < n; ++k) {
        int piv = k;
        double best = std::abs(f.lu(k, k));
        for (int i = k + 1; i < n; ++i) {
            double v = std::abs(f.lu(i, k));
            if (v > best) { best = v; piv = i; }
        }
        if (best == 0.0) { f.singular = true; return f; }
        if (piv != k) {
            std::swap(f.perm[piv], f.perm[k]);
            for (int j = 0; j < n; ++j) std::swap(f.lu(piv, j), f.lu(k, j));
        }
        cplx inv_piv = 1.0 / f.lu(k, k);
        for (int i = k + 1; i < n; ++i) {
            cplx m = f.lu(i, k) * inv_piv;
            f.lu(i, k) = m;
            for (int j = k + 1; j < n; ++j) f.lu(i, j) -= m * f.lu(k, j);
        }
    }
    return f;
}

ComplexMatrix lu_solve(const LuFactors& f, const ComplexMatrix& b) {
    int n = f.lu.rows();
    ComplexMatrix x(n, b.cols());
    for (int c = 0; c < b.cols(); ++c) {
        std::vector<cplx> y(n);
        for (int i = 0; i < n; ++i) {
            cplx s = b(f.perm[i], c);
            for (int j = 0; j < i; ++j) s -= f.lu(i, j) * y[j];
            y[i] = s;
        }
        for (int i = n - 1; i >= 0; --i) {
            cplx s = y[i];
            for (int j = i + 1; j < n; ++j) s -= f.lu(i, j) * x(j, c);
            x(i, c) = s / f.lu(i, i);
        }
    }
    return x;
}

double condition_from_factors(const ComplexMatrix& a, const LuFactors& f) {
    if (f.singular) return std::numeric_limits<double>::infinity();
    ComplexMatrix inv = lu_solve(f, ComplexMatrix::identity(a.rows()));
    double c = a.one_norm() * inv.one_norm();
    if (!std::isfinite(c)) return std::numeric_limits<double>::infinity();
    return std::max(c, 1.0);
}

}  // namespace

EigResult eig_sym(const RealMatrix& a) {
    if (a.rows() != a.cols()) throw InvalidInput("eig_sym: matrix must be square");
    int n = a.rows();
    if (n == 0) throw InvalidInput("eig_sym: matrix must be nonempty");
    if (!a.is_symmetric(1e-10)) throw InvalidInput("eig_sym: matrix must be symmetric");

    RealMatrix w = a;
    RealMatrix v = RealMatrix::identity(n);
    // Cyclic Jacobi: n is at most a few hundred here, convergence is quadratic.
    const int max_sweeps = 100;
    bool converged = false;
    int sweeps = 0;
    for (; sweeps < max_sweeps; ++sweeps) {
        double off = 0.0;
        for (int i = 0; i < n; ++i)
            for (int j = i + 1; j < n; ++j) off += w(i, j) * w(i, j);
        double scale = 0.0;
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) scale = std::max(scale, std::abs(w(i, j)));
        if (off <= (scale * 1e-15) * (scale * 1e-15) * n * n || scale == 0.0) {
            converged = true;
            break;
        }
        for (int p = 0; p < n - 1; ++p) {
            for (int q = p + 1; q < n; ++q) {
                double apq = w(p, q);
                if (std::abs(apq) <= scale * 1e-18) continue;
                double theta = (w(q, q) - w(p, p)) / (2.0 * apq);
                double t = (theta >= 0 ? 1.0 : -1.0) /
                           (std::abs(theta) + std::sqrt(theta * theta + 1.0));
                double c = 1.0 / std::sqrt(t * t + 1.0);
                double s = t * c;
                for (int k = 0; k < n; ++k) {
                    double wkp = w(k, p), wkq = w(k, q);
                    w(k, p) = c * wkp - s * wkq;
                    w(k, q) = s * wkp + c * wkq;
                }
                for (int k = 0; k < n; ++k) {
                    double wpk = w(p, k), wqk = w(q, k);
                    w(p, k) = c * wpk - s * wqk;
                    w(q, k) = s * wpk + c * wqk;
                }
                for (int k = 0; k < n; ++k) {
                    double vkp = v(k, p), vkq = v(k, q);
                    v(k, p) = c * vkp - s * vkq;
                    v(k, q) = s * vkp + c * vkq;
                }
            }
        }
    }
    if (!converged) throw NumericalFailure("eig_sym: Jacobi sweeps did not converge", sweeps);

    std::vector<int> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](int i, int j) { return w(i, i) > w(j, j); });

    EigResult r;
    r.values.resize(n);
    r.vectors = RealMatrix(n, n);
    for (int j = 0; j < n; ++j) {
        r.values[j] = w(order[j], order[j]);
        for (int i = 0; i < n; ++i) r.vectors(i, j) = v(i, order[j]);
    }
    return r;
}

ComplexMatrix solve_linear(const ComplexMatrix& a, const ComplexMatrix& b, double cond_bound) {
    if (a.rows() != a.cols()) throw InvalidInput("solve_linear: matrix must be square");
    if (a.rows() == 0) throw InvalidInput("solve_linear: matrix must be nonempty");
    if (b.rows() != a.rows()) throw InvalidInput("solve_linear: right-hand side row mismatch");
    LuFactors f = lu_factor(a);
    double cond = condition_from_factors(a, f);
    if (!(cond <= cond_bound))
        throw IllConditioned("solve_linear: condition estimate exceeds bound", cond);
    return lu_solve(f, b);
}

double condition_estimate(const ComplexMatrix& a) {
    if (a.rows() != a.cols()) throw InvalidInput("condition_estimate: matrix must be square");
    if (a.rows() == 0) throw InvalidInput("condition_estimate: matrix must be nonempty");
    return condition_from_factors(a, lu_factor(a));
}

ComplexMatrix invert(const ComplexMatrix& a, double cond_bound) {
    return solve_linear(a, ComplexMatrix::identity(a.rows()), cond_bound);
}

}  // namespace recdft
