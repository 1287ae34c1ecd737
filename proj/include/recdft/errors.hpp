#ifndef RECDFT_ERRORS_HPP
#define RECDFT_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace recdft {

// Bad arguments or an invalid configuration.
struct InvalidInput : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

// An iterative routine failed to converge.
struct NumericalFailure : std::runtime_error {
    int iterations;
    NumericalFailure(const std::string& msg, int iters)
        : std::runtime_error(msg), iterations(iters) {}
};

// A matrix was too ill-conditioned to use; carries the condition estimate.
struct IllConditioned : std::runtime_error {
    double condition;
    IllConditioned(const std::string& msg, double cond)
        : std::runtime_error(msg), condition(cond) {}
};

}  // namespace recdft

#endif
