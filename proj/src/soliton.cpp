#include "toricstab/soliton.hpp"

#include <cmath>
#include <string>

#include "toricstab/errors.hpp"
#include "toricstab/integrate.hpp"

namespace toricstab {

double theta_eval(const Eigen::VectorXd& theta, const Eigen::VectorXd& x) {
    if (theta.size() != x.size())
        throw Error(ErrorKind::DimensionMismatch,
                    "theta has " + std::to_string(theta.size()) + " entries, point has " + std::to_string(x.size()));
    return theta.dot(x);
}

SolitonVector solve_soliton(const Polytope& p, double tol, int max_iter) {
    const auto& cells = p.simplices();
    auto residual_of = [](const ExpMoments& m) { return m.first.lpNorm<Eigen::Infinity>() / m.mass; };

    SolitonVector out;
    out.theta = Eigen::VectorXd::Zero(p.dim());
    ExpMoments m = exp_moments(cells, out.theta);
    for (int iter = 0;; ++iter) {
        out.residual = residual_of(m);
        out.iterations = iter;
        out.volume_weighted = m.mass;
        if (out.residual <= tol) return out;
        if (iter == max_iter)
            throw Error(ErrorKind::NoConvergence, "soliton solve stopped after " + std::to_string(max_iter) +
                                                      " iterations with residual " + std::to_string(out.residual));

        const Eigen::VectorXd step = m.second.ldlt().solve(-m.first);
        const double slope = m.first.dot(step);
        double t = 1.0;
        Eigen::VectorXd trial;
        ExpMoments next;
        while (true) {
            trial = out.theta + t * step;
            next = exp_moments(cells, trial);
            // Near the minimum the decrease drops below rounding; take the Newton step.
            if (std::abs(slope) <= 1e-14 * m.mass) break;
            if (next.mass <= m.mass + 1e-4 * t * slope) break;
            t *= 0.5;
            if (t < 1e-12) break;
        }
        out.theta = trial;
        m = std::move(next);
    }
}

}  // namespace toricstab
