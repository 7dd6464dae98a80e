#pragma once

#include <vector>

#include <Eigen/Dense>

#include "toricstab/functional.hpp"
#include "toricstab/pl_function.hpp"
#include "toricstab/polytope.hpp"

namespace toricstab {

inline constexpr double tau_interior_margin = 1e-12;
inline constexpr double beta_tolerance = 1e-12;

struct TauReport {
    Eigen::VectorXd tau;  // int x e^theta / int e^theta
    std::vector<double> slacks;  // l_i(tau) = 1 - <l_i, tau>
    double min_slack = 0.0;
    bool inside = false;  // min_slack >= margin
};

TauReport compute_tau(const Polytope& p, const Eigen::VectorXd& theta);

struct ConicalData {
    Eigen::VectorXd theta;
    Eigen::VectorXd tau;
    bool tau_inside = false;
    double beta = 0.0;
    std::vector<double> slacks;
    std::vector<double> angles;  // beta_i = beta * l_i(tau)
    double beta_bar = 0.0;       // 1 / max_i l_i(tau)
};

/// Throws TauOutsidePolytope, or BetaOutOfRange when beta <= 0 or beta > beta_bar + 1e-12.
ConicalData angles_and_beta_bar(const Polytope& p, const Eigen::VectorXd& theta, double beta);

struct LBetaTauReport {
    double value = 0.0;
    LReport l;               // plain L(u)
    double tau_term = 0.0;   // int_P <tau, grad u> e^theta
    double scale() const;
};

/// beta * (L(u) - int_P <tau, grad u> e^theta), grad u chamber-wise constant.
LBetaTauReport l_beta_tau(const Polytope& p, const Eigen::VectorXd& theta, double beta, const Eigen::VectorXd& tau,
                          const PLConvexFunction& u);
LBetaTauReport l_beta_tau(const Polytope& p, const Eigen::VectorXd& theta, double beta, const PLConvexFunction& u);

/// -int_P log det(D^2 u0) e^theta + beta int_P <x - tau, grad u0> e^theta for the
/// conical Guillemin potential built from the same (beta, tau).
KEnergyReport conical_k_energy(const Polytope& p, const Eigen::VectorXd& theta, double beta,
                               const SymplecticPotential& potential, const GradedOptions& options = {});

}  // namespace toricstab
