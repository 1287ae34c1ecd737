#ifndef RECDFT_LINALG_HPP
#define RECDFT_LINALG_HPP

#include "recdft/matrix.hpp"

namespace recdft {

struct EigResult {
    std::vector<double> values;  // descending
    RealMatrix vectors;          // orthonormal, column j pairs with values[j]
};

// Full eigendecomposition of a real symmetric matrix (cyclic Jacobi).
// The input must be symmetric to within 1e-10 relative to its largest entry.
EigResult eig_sym(const RealMatrix& a);

// Solve A X = B for complex square A via LU with partial pivoting.
// Throws IllConditioned when the 1-norm condition estimate exceeds cond_bound.
ComplexMatrix solve_linear(const ComplexMatrix& a, const ComplexMatrix& b,
                           double cond_bound = 1e12);

// 1-norm condition number ||A||_1 ||A^-1||_1 (exact inverse, fine at these sizes).
// Returns +inf when A is numerically singular. Always >= 1 otherwise.
double condition_estimate(const ComplexMatrix& a);

ComplexMatrix invert(const ComplexMatrix& a, double cond_bound = 1e12);

}  // namespace recdft

#endif
