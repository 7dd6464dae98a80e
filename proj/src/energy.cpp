#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "toricstab/errors.hpp"
#include "toricstab/functional.hpp"
#include "toricstab/parallel.hpp"

namespace toricstab {

SymplecticPotential::SymplecticPotential(Polytope p, PotentialKind kind, double beta, Eigen::VectorXd tau,
                                         std::vector<double> w)
    : polytope_(std::move(p)), kind_(kind), beta_(beta), tau_(std::move(tau)), weights_(std::move(w)) {
    const int n = polytope_.dim();
    const auto& normals = polytope_.normals();
    const int d = static_cast<int>(normals.size());
    normals_.resize(d, n);
    for (int i = 0; i < d; ++i)
        for (int j = 0; j < n; ++j) normals_(i, j) = static_cast<double>(normals[i][j]);

    std::vector<int> subset(n);
    for (int j = 0; j < n; ++j) subset[j] = j;
    while (true) {
        Eigen::MatrixXd minor(n, n);
        for (int r = 0; r < n; ++r) minor.row(r) = normals_.row(subset[r]);
        const double det = minor.determinant();  // integer matrix, small entries
        if (std::abs(det) > 0.5) {
            double log_w = 0.0;
            for (int i : subset) log_w += std::log(weights_[i]);
            subsets_.push_back(subset);
            log_minor_sq_.push_back(2.0 * std::log(std::abs(det)) + log_w);
        }
        int pos = n - 1;
        while (pos >= 0 && subset[pos] == d - n + pos) --pos;
        if (pos < 0) break;
        ++subset[pos];
        for (int j = pos + 1; j < n; ++j) subset[j] = subset[j - 1] + 1;
    }
}

SymplecticPotential SymplecticPotential::guillemin(const Polytope& p) {
    return SymplecticPotential(p, PotentialKind::Guillemin, 1.0, Eigen::VectorXd::Zero(p.dim()),
                               std::vector<double>(p.normals().size(), 1.0));
}

SymplecticPotential SymplecticPotential::conical(const Polytope& p, double beta, const Eigen::VectorXd& tau) {
    if (tau.size() != p.dim()) throw Error(ErrorKind::DimensionMismatch, "tau dimension differs from polytope");
    if (!(beta > 0.0)) throw Error(ErrorKind::BetaOutOfRange, "beta must be positive");
    std::vector<double> w;
    for (const auto& l : p.normals()) {
        double lt = 1.0;
        for (int j = 0; j < p.dim(); ++j) lt -= static_cast<double>(l[j]) * tau[j];
        if (!(lt > 0.0)) throw Error(ErrorKind::TauOutsidePolytope, "tau is not interior to P");
        w.push_back(1.0 / (beta * lt));
    }
    return SymplecticPotential(p, PotentialKind::ConicalGuillemin, beta, tau, std::move(w));
}

double SymplecticPotential::value(const Eigen::VectorXd& x) const {
    const Eigen::VectorXd l = Eigen::VectorXd::Ones(normals_.rows()) - normals_ * x;
    double v = 0.0;
    for (int i = 0; i < l.size(); ++i)
        if (l[i] > 0.0) v += weights_[i] * l[i] * std::log(l[i]);
    return v;
}

Eigen::VectorXd SymplecticPotential::gradient(const Eigen::VectorXd& x) const {
    const Eigen::VectorXd l = Eigen::VectorXd::Ones(normals_.rows()) - normals_ * x;
    Eigen::VectorXd g = Eigen::VectorXd::Zero(x.size());
    for (int i = 0; i < l.size(); ++i) g -= weights_[i] * (std::log(l[i]) + 1.0) * normals_.row(i).transpose();
    return g;
}

Eigen::MatrixXd SymplecticPotential::hessian(const Eigen::VectorXd& x) const {
    const Eigen::VectorXd l = Eigen::VectorXd::Ones(normals_.rows()) - normals_ * x;
    Eigen::MatrixXd h = Eigen::MatrixXd::Zero(x.size(), x.size());
    for (int i = 0; i < l.size(); ++i)
        h += (weights_[i] / l[i]) * normals_.row(i).transpose() * normals_.row(i);
    return h;
}

double SymplecticPotential::log_det_hessian(const Eigen::VectorXd& x) const {
    const Eigen::VectorXd l = Eigen::VectorXd::Ones(normals_.rows()) - normals_ * x;
    Eigen::VectorXd log_l(l.size());
    for (int i = 0; i < l.size(); ++i) log_l[i] = std::log(l[i]);
    std::vector<double> terms(subsets_.size());
    double top = -std::numeric_limits<double>::infinity();
    for (std::size_t s = 0; s < subsets_.size(); ++s) {
        double t = log_minor_sq_[s];
        for (int i : subsets_[s]) t -= log_l[i];
        terms[s] = t;
        top = std::max(top, t);
    }
    double sum = 0.0;
    for (double t : terms) sum += std::exp(t - top);
    return top + std::log(sum);
}

namespace {

constexpr double kGradingRatio = 0.25;
constexpr int kGaussOrder = 8;
// 0.25^22 ~ 6e-14; deeper layers put nodes at 1.0 in double precision.
constexpr int kMaxResolvedLevels = 22;

using Rule1D = GaussRule;

// [0, 1] split at 1 - rho^j, j = 1..levels, Gauss on every piece.
Rule1D graded_unit_rule(int levels) {
    levels = std::min(levels, kMaxResolvedLevels);
    Rule1D out;
    double lo = 0.0;
    for (int j = 1; j <= levels + 1; ++j) {
        const double hi = j <= levels ? 1.0 - std::pow(kGradingRatio, j) : 1.0;
        const auto piece = gauss_legendre(kGaussOrder, lo, hi);
        out.nodes.insert(out.nodes.end(), piece.nodes.begin(), piece.nodes.end());
        out.weights.insert(out.weights.end(), piece.weights.begin(), piece.weights.end());
        lo = hi;
    }
    return out;
}

struct WeightedPoint {
    Eigen::VectorXd y;
    double w;
};

// Rule for the k-dimensional Lebesgue measure on a cell, coned from the
// barycenter onto each face and graded toward the faces.
void coned_rule(const std::vector<Eigen::VectorXd>& cell, const Rule1D& radial, std::vector<WeightedPoint>& out) {
    const int k = static_cast<int>(cell.size()) - 1;
    if (k == 0) {
        out.push_back({cell[0], 1.0});
        return;
    }
    const double cell_volume = make_simplex(cell).volume;
    Eigen::VectorXd b = Eigen::VectorXd::Zero(cell[0].size());
    for (const auto& v : cell) b += v;
    b /= static_cast<double>(k + 1);
    for (int j = 0; j <= k; ++j) {
        std::vector<Eigen::VectorXd> face;
        for (int i = 0; i <= k; ++i)
            if (i != j) face.push_back(cell[i]);
        const double face_volume = k == 1 ? 1.0 : make_simplex(face).volume;
        const double height = k * cell_volume / ((k + 1) * face_volume);
        std::vector<WeightedPoint> base;
        coned_rule(face, radial, base);
        for (std::size_t r = 0; r < radial.nodes.size(); ++r) {
            const double t = radial.nodes[r];
            const double jac = radial.weights[r] * std::pow(t, k - 1) * height;
            for (const auto& z : base) out.push_back({b + t * (z.y - b), z.w * jac});
        }
    }
}

}  // namespace

double graded_integral(const Polytope& p, int levels, const std::function<double(const Eigen::VectorXd&)>& f) {
    const int n = p.dim();
    const Rule1D radial = graded_unit_rule(levels);

    struct Job {
        const Simplex* cell;
        double height;
    };
    std::vector<Job> jobs;
    for (const auto& facet : p.facets())
        for (const auto& cell : p.facet_simplices(facet.index)) jobs.push_back({&cell, facet.measure_weight});

    std::vector<double> partial(jobs.size(), 0.0);
    parallel_for(jobs.size(), [&](std::size_t j) {
        std::vector<WeightedPoint> base;
        coned_rule(jobs[j].cell->vertices, radial, base);
        CompensatedSum sum;
        for (std::size_t r = 0; r < radial.nodes.size(); ++r) {
            const double s = radial.nodes[r];
            const double jac = radial.weights[r] * std::pow(s, n - 1) * jobs[j].height;
            CompensatedSum inner;
            for (const auto& y : base) inner.add(y.w * f(s * y.y));
            sum.add(jac * inner.value());
        }
        partial[j] = sum.value();
    });
    return compensated_sum(partial);
}

std::pair<double, int> graded_integral_converged(const Polytope& p,
                                                 const std::function<double(const Eigen::VectorXd&)>& f,
                                                 const GradedOptions& options) {
    int levels = options.start_levels;
    double prev = graded_integral(p, levels, f);
    while (true) {
        const int next_levels = levels + options.level_step;
        if (next_levels > options.max_levels)
            throw Error(ErrorKind::ToleranceNotMet,
                        "graded quadrature did not settle within " + std::to_string(options.max_levels) + " levels");
        const double cur = graded_integral(p, next_levels, f);
        if (std::abs(cur - prev) <= options.rel_tol * std::abs(cur)) return {cur, next_levels};
        prev = cur;
        levels = next_levels;
    }
}

KEnergyReport k_energy(const Polytope& p, const Eigen::VectorXd& theta, const SymplecticPotential& potential,
                       const GradedOptions& options) {
    if (theta.size() != p.dim()) throw Error(ErrorKind::DimensionMismatch, "theta dimension differs from polytope");
    if (potential.polytope().dim() != p.dim() || potential.polytope().normals() != p.normals())
        throw Error(ErrorKind::InvalidArgument, "potential belongs to a different polytope");
    KEnergyReport r;
    const auto log_det = graded_integral_converged(
        p, [&](const Eigen::VectorXd& x) { return potential.log_det_hessian(x) * std::exp(theta.dot(x)); }, options);
    const auto l_term = graded_integral_converged(
        p, [&](const Eigen::VectorXd& x) { return x.dot(potential.gradient(x)) * std::exp(theta.dot(x)); }, options);
    r.log_det_term = log_det.first;
    r.l_term = l_term.first;
    r.value = -r.log_det_term + r.l_term;
    r.levels = std::max(log_det.second, l_term.second);
    return r;
}

}  // namespace toricstab
