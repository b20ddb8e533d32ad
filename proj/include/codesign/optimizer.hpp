#pragma once

#include <functional>

#include <Eigen/Dense>

namespace codesign {

struct BfgsOptions {
    int max_iterations = 500;
    double f_target = 0.0;    // stop once f <= f_target
    double grad_tol = 1e-14;
    int stall_iterations = 8; // stop after this many steps without meaningful decrease
};

struct BfgsResult {
    Eigen::VectorXd x;
    double f = 0.0;
    int iterations = 0;
};

// f(x, grad) returns the objective and fills grad (same size as x).
using ObjectiveFn = std::function<double(const Eigen::VectorXd&, Eigen::VectorXd&)>;

BfgsResult bfgs_minimize(const ObjectiveFn& f, Eigen::VectorXd x0, const BfgsOptions& opt);

} // namespace codesign
