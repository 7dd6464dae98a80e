#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include <Eigen/Dense>

#include "toricstab/pl_function.hpp"
#include "toricstab/polytope.hpp"

namespace toricstab {

/// N_k = #(Z^n cap kP), counted slab by slab. Throws CapacityExceeded.
std::uint64_t lattice_count(const Polytope& p, std::int64_t k, std::uint64_t capacity = default_lattice_capacity);

/// Weighted traces over B_k = Z^n cap kP with w(I) = e^{theta(I/k)}:
///   S1 = k * sum w (R - u)(I/k),  S2 = (1/2) sum w theta(I/k) (R - u)(I/k).
/// The u-independent and u-dependent parts are kept separately so S1 and S2
/// are affine in R by construction.
struct WeightedSums {
    std::int64_t k = 0;
    std::uint64_t n_k = 0;
    double w = 0.0;    // sum w
    double wu = 0.0;   // sum w u
    double wt = 0.0;   // sum w theta
    double wtu = 0.0;  // sum w theta u
    double s1 = 0.0;
    double s2 = 0.0;
    double ratio = 0.0;  // -(S1 - S2) / (k N_k)
};

WeightedSums weighted_sums(const Polytope& p, const Eigen::VectorXd& theta, const PLConvexFunction& u, double r,
                           std::int64_t k, std::uint64_t capacity = default_lattice_capacity);

/// Least-squares fit of values against a + b/k + c/k^2.
struct ExpansionFit {
    double a = 0.0;
    double b = 0.0;
    double c = 0.0;
    double residual_norm = 0.0;
};
ExpansionFit fit_expansion(const std::vector<std::int64_t>& ks, const std::vector<double>& values);

struct RRReport {
    std::vector<std::int64_t> k_values;
    std::vector<WeightedSums> records;
    ExpansionFit fit;
    double f0_est = 0.0;
    double f1_est = 0.0;
    double f0_integral = 0.0;
    double f1_integral = 0.0;
};

/// k = 10, 15, ..., 60
std::vector<std::int64_t> default_k_range();
std::vector<std::int64_t> k_range(std::int64_t kmin, std::int64_t kmax, std::int64_t step);

/// Fits ratio_k and attaches futaki_f0 / futaki_f1 for comparison. Needs at
/// least three strictly increasing k values.
RRReport riemann_roch_check(const Polytope& p, const Eigen::VectorXd& theta, const PLConvexFunction& u, double r,
                            const std::vector<std::int64_t>& ks = default_k_range());

enum class PhiKind { One, Coordinate, PiecewiseLinear, ExpAffine };

/// Test function for the lattice expansion:
///   One               1
///   Coordinate        x_alpha
///   PiecewiseLinear   u
///   ExpAffine         e^{theta(x)} (<a, x> + c)
struct PhiSpec {
    PhiKind kind = PhiKind::One;
    int alpha = 0;
    std::optional<PLConvexFunction> u;
    Eigen::VectorXd theta;
    Eigen::VectorXd a;
    double c = 1.0;

    static PhiSpec one();
    static PhiSpec coordinate(int alpha);
    static PhiSpec piecewise_linear(PLConvexFunction u);
    static PhiSpec exp_affine(Eigen::VectorXd theta, Eigen::VectorXd a, double c);
};

struct PhiRecord {
    std::int64_t k = 0;
    double lattice_sum = 0.0;
    double error = 0.0;   // E(k)
    double scaled = 0.0;  // |E(k)| / k^{n-2}
    std::optional<Rational> exact_error;  // phi = 1 only
};

struct PhiReport {
    double interior = 0.0;  // int_P phi
    double boundary = 0.0;  // int_{dP} phi dsigma
    std::vector<PhiRecord> records;
    double sup_scaled = 0.0;
};

/// E(k) = sum phi(I/k) - k^n int_P phi - (k^{n-1}/2) int_{dP} phi dsigma.
PhiReport phi_sum_check(const Polytope& p, const PhiSpec& phi, const std::vector<std::int64_t>& ks);

}  // namespace toricstab
