#include "toricstab/conical.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "toricstab/errors.hpp"
#include "toricstab/integrate.hpp"

namespace toricstab {

TauReport compute_tau(const Polytope& p, const Eigen::VectorXd& theta) {
    if (theta.size() != p.dim()) throw Error(ErrorKind::DimensionMismatch, "theta dimension differs from polytope");
    const auto m = exp_moments(p.simplices(), theta);
    TauReport r;
    r.tau = m.first / m.mass;
    r.min_slack = std::numeric_limits<double>::infinity();
    for (const auto& l : p.normals()) {
        double s = 1.0;
        for (int j = 0; j < p.dim(); ++j) s -= static_cast<double>(l[j]) * r.tau[j];
        r.slacks.push_back(s);
        r.min_slack = std::min(r.min_slack, s);
    }
    r.inside = r.min_slack >= tau_interior_margin;
    return r;
}

ConicalData angles_and_beta_bar(const Polytope& p, const Eigen::VectorXd& theta, double beta) {
    const auto t = compute_tau(p, theta);
    if (!t.inside)
        throw Error(ErrorKind::TauOutsidePolytope,
                    "tau is not interior to P (min slack " + std::to_string(t.min_slack) + ")");
    ConicalData d;
    d.theta = theta;
    d.tau = t.tau;
    d.tau_inside = t.inside;
    d.beta = beta;
    d.slacks = t.slacks;
    d.beta_bar = 1.0 / *std::max_element(t.slacks.begin(), t.slacks.end());
    if (!(beta > 0.0) || beta > d.beta_bar + beta_tolerance)
        throw Error(ErrorKind::BetaOutOfRange,
                    "beta = " + std::to_string(beta) + " outside (0, " + std::to_string(d.beta_bar) + "]");
    for (double s : t.slacks) d.angles.push_back(beta * s);
    return d;
}

double LBetaTauReport::scale() const { return l.scale() + std::abs(tau_term); }

LBetaTauReport l_beta_tau(const Polytope& p, const Eigen::VectorXd& theta, double beta, const Eigen::VectorXd& tau,
                          const PLConvexFunction& u) {
    if (tau.size() != p.dim()) throw Error(ErrorKind::DimensionMismatch, "tau dimension differs from polytope");
    const auto chambers = refine_by_pl(p, u);
    LBetaTauReport r;
    r.l = l_functional(chambers, theta);
    r.tau_term = chamberwise_integral(chambers, [&](const AffinePiece& piece) {
        return IntegralSpec::affine(Eigen::VectorXd::Zero(p.dim()), tau.dot(to_eigen(piece.a)), theta);
    });
    r.value = beta * (r.l.value - r.tau_term);
    return r;
}

LBetaTauReport l_beta_tau(const Polytope& p, const Eigen::VectorXd& theta, double beta, const PLConvexFunction& u) {
    return l_beta_tau(p, theta, beta, compute_tau(p, theta).tau, u);
}

KEnergyReport conical_k_energy(const Polytope& p, const Eigen::VectorXd& theta, double beta,
                               const SymplecticPotential& potential, const GradedOptions& options) {
    if (theta.size() != p.dim()) throw Error(ErrorKind::DimensionMismatch, "theta dimension differs from polytope");
    if (potential.kind() != PotentialKind::ConicalGuillemin || potential.polytope().normals() != p.normals())
        throw Error(ErrorKind::InvalidArgument, "conical K-energy needs the conical potential of the same polytope");
    if (std::abs(potential.beta() - beta) > beta_tolerance)
        throw Error(ErrorKind::InvalidArgument, "potential was built for a different beta");
    const Eigen::VectorXd tau = potential.tau();

    KEnergyReport r;
    const auto log_det = graded_integral_converged(
        p, [&](const Eigen::VectorXd& x) { return potential.log_det_hessian(x) * std::exp(theta.dot(x)); }, options);
    const auto l_term = graded_integral_converged(
        p,
        [&](const Eigen::VectorXd& x) { return beta * (x - tau).dot(potential.gradient(x)) * std::exp(theta.dot(x)); },
        options);
    r.log_det_term = log_det.first;
    r.l_term = l_term.first;
    r.value = -r.log_det_term + r.l_term;
    r.levels = std::max(log_det.second, l_term.second);
    return r;
}

}  // namespace toricstab
