#pragma once

#include <Eigen/Dense>

#include "toricstab/polytope.hpp"

namespace toricstab {

struct SolitonVector {
    Eigen::VectorXd theta;
    double residual = 0.0;  // ||g||_inf / V at theta
    int iterations = 0;
    double volume_weighted = 0.0;  // V(theta) = int_P e^theta
};

/// Minimizes V(theta) = int_P e^{<theta, x>} dx by damped Newton from theta = 0.
/// Throws NoConvergence after max_iter iterations.
SolitonVector solve_soliton(const Polytope& p, double tol = 1e-12, int max_iter = 100);

/// <theta, x>. Throws DimensionMismatch.
double theta_eval(const Eigen::VectorXd& theta, const Eigen::VectorXd& x);

}  // namespace toricstab
