#pragma once

#include <cmath>
#include <cstdint>
#include <random>

#include <Eigen/Dense>

#include "toricstab/parallel.hpp"
#include "toricstab/pl_function.hpp"

namespace toricstab::testing {

// Frozen oracle values computed with mpmath at 30 digits (tests/oracles/oracles.py).
inline constexpr double bl1cp2_soliton_a = 0.527619519896962824848607139062;
inline constexpr double segment_kenergy_theta0 = -0.613705638880109381165535757084;
inline constexpr double segment_kenergy_theta1 = -0.60173422745278143896959311797;
inline constexpr double segment_tau_theta1 = 0.313035285499331303636161246931;
inline constexpr double segment_beta_bar_theta1 = 0.761594155955764888119458282605;
inline constexpr double segment_angle1_half = 0.343482357250334348181919376535;
inline constexpr double segment_angle2_half = 0.656517642749665651818080623465;
inline constexpr double segment_conical_kenergy = -2.98981185664115841587942945332;
inline constexpr double segment_l_step_theta1 = 1.0;
inline constexpr double segment_l_beta_tau_step = 0.231058578630004879251159241822;

// Sets the worker count for one scope.
struct ThreadScope {
    int saved = thread_count();
    explicit ThreadScope(int t) { set_thread_count(t); }
    ~ThreadScope() { set_thread_count(saved); }
};

// Uniform in [0, 1) from 53 random bits.
inline double unit_uniform(std::mt19937_64& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

// Point of the closed ball of the given radius; direction from the cube,
// radius uniform.
inline Eigen::VectorXd random_in_ball(int dim, double radius, std::mt19937_64& rng) {
    Eigen::VectorXd v(dim);
    do {
        for (int i = 0; i < dim; ++i) v[i] = 2.0 * unit_uniform(rng) - 1.0;
    } while (v.norm() < 1e-3);
    return v * (radius * unit_uniform(rng) / v.norm());
}

inline bool close_rel(double a, double b, double rel) { return std::abs(a - b) <= rel * std::max(std::abs(a), std::abs(b)); }

inline RationalVector rv(std::initializer_list<long> xs) {
    RationalVector v;
    for (long x : xs) v.emplace_back(x);
    return v;
}

// max(0, x_alpha) in dimension dim.
inline PLConvexFunction step(int dim, int alpha) {
    RationalVector zero(dim, Rational(0)), e(dim, Rational(0));
    e[alpha] = 1;
    return PLConvexFunction({AffinePiece{zero, 0}, AffinePiece{e, 0}});
}

}  // namespace toricstab::testing
