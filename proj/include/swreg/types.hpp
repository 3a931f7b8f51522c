#pragma once

#include <Eigen/Dense>
#include <stdexcept>
#include <string>

namespace swreg {

using Mat = Eigen::MatrixXd;
using Vec = Eigen::VectorXd;

// Invalid user input: malformed files, mismatched dimensions, bad arguments.
// The CLI maps this to exit code 2. Mathematical failures (infeasible LMIs,
// unsolvable equations, rejected certificates) are reported as result values,
// never as exceptions.
struct InputError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

inline void require(bool cond, const std::string& what) {
    if (!cond)
        throw InputError(what);
}

}  // namespace swreg
