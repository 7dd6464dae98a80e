#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include <Eigen/Dense>

#include "toricstab/integrate.hpp"
#include "toricstab/pl_function.hpp"
#include "toricstab/polytope.hpp"

namespace toricstab {

/// L(u) = boundary - interior with
///   boundary = int_{dP} u e^theta dsigma,  interior = int_P (n + theta(x)) u e^theta dx.
struct LReport {
    double value = 0.0;
    double boundary = 0.0;
    double interior = 0.0;
    double scale() const;  // 1 + |boundary| + |interior|
};

LReport l_functional(const ChamberDecomposition& chambers, const Eigen::VectorXd& theta,
                     QuadratureMethod method = QuadratureMethod::ClosedForm);
LReport l_functional(const Polytope& p, const Eigen::VectorXd& theta, const PLConvexFunction& u,
                     QuadratureMethod method = QuadratureMethod::ClosedForm);

/// L(u) / (2 |P|)
double futaki_f1(const Polytope& p, const Eigen::VectorXd& theta, const PLConvexFunction& u);

/// -(1/|P|) int_P e^theta (R - u). Throws RNotDominating when R <= max_P u.
double futaki_f0(const Polytope& p, const Eigen::VectorXd& theta, const PLConvexFunction& u, double r);

/// max_P u, attained at a vertex.
Rational max_on_polytope(const Polytope& p, const PLConvexFunction& u);

/// u - u(p) - <g, x - p>, g the mean gradient of the pieces active at p.
PLConvexFunction normalize_at(const PLConvexFunction& u, const RationalVector& point);
PLConvexFunction normalize_at_origin(const PLConvexFunction& u);

/// H(u) = int_P u e^theta dx
double h_functional(const Polytope& p, const Eigen::VectorXd& theta, const PLConvexFunction& u);
double h_functional(const ChamberDecomposition& chambers, const Eigen::VectorXd& theta);

/// u vanishes identically on P (checked at the vertices, exactly).
bool vanishes_on(const Polytope& p, const PLConvexFunction& u);

/// Random convex PL function: 2..6 pieces, slopes p/1000 with p uniform in
/// [-3000, 3000], offsets p/1000 with p uniform in [-1000, 1000].
PLConvexFunction random_pl(int dim, std::uint64_t seed);

struct StabilitySample {
    std::size_t index = 0;
    bool degenerate = false;
    PLConvexFunction u{std::vector<AffinePiece>{AffinePiece{{0}, 0}}};
    double l = 0.0;
    double boundary = 0.0;
    double h = 0.0;
    double scale = 0.0;
    double ratio = 0.0;
};

struct StabilityScan {
    double min_ratio = 0.0;
    std::size_t argmin_index = 0;
    PLConvexFunction argmin{std::vector<AffinePiece>{AffinePiece{{0}, 0}}};
    std::size_t used = 0;
    std::size_t discarded = 0;
    std::vector<StabilitySample> samples;
};

/// Min over seeded random normalized PL functions of L(u) / int_{dP} u e^theta dsigma.
/// Throws AllSamplesDegenerate when no sample is usable, InvalidArgument when
/// theta does not annihilate the linear functions.
StabilityScan stability_margin(const Polytope& p, const Eigen::VectorXd& theta, std::size_t sample_count,
                               std::uint64_t seed);

enum class PotentialKind { Guillemin, ConicalGuillemin };

/// u0 = sum_i w_i l_i log l_i, l_i = 1 - <l_i, x>, with w_i = 1 (Guillemin) or
/// 1 / (beta * l_i(tau)) (conical).
class SymplecticPotential {
public:
    static SymplecticPotential guillemin(const Polytope& p);
    static SymplecticPotential conical(const Polytope& p, double beta, const Eigen::VectorXd& tau);

    PotentialKind kind() const { return kind_; }
    const Polytope& polytope() const { return polytope_; }
    double beta() const { return beta_; }
    const Eigen::VectorXd& tau() const { return tau_; }
    const std::vector<double>& weights() const { return weights_; }

    double value(const Eigen::VectorXd& x) const;
    Eigen::VectorXd gradient(const Eigen::VectorXd& x) const;
    Eigen::MatrixXd hessian(const Eigen::VectorXd& x) const;
    /// log det of the Hessian by Cauchy-Binet, stable up to the boundary.
    double log_det_hessian(const Eigen::VectorXd& x) const;

private:
    SymplecticPotential(Polytope p, PotentialKind kind, double beta, Eigen::VectorXd tau, std::vector<double> w);

    Polytope polytope_;
    PotentialKind kind_;
    double beta_;
    Eigen::VectorXd tau_;
    std::vector<double> weights_;
    Eigen::MatrixXd normals_;                 // d x n
    std::vector<std::vector<int>> subsets_;   // n-subsets with nonzero minor
    std::vector<double> log_minor_sq_;
};

/// int_P f over a quadrature rule graded geometrically toward dP: x = s y
/// with y on a facet cell, cells coned recursively from their barycenters,
/// `levels` dyadic layers in every radial variable.
double graded_integral(const Polytope& p, int levels, const std::function<double(const Eigen::VectorXd&)>& f);

struct GradedOptions {
    int start_levels = 10;
    int level_step = 2;
    int max_levels = 40;
    double rel_tol = 1e-7;
};

/// Repeats graded_integral with more levels until two successive values
/// agree to rel_tol. Throws ToleranceNotMet. Returns (value, levels used).
std::pair<double, int> graded_integral_converged(const Polytope& p,
                                                 const std::function<double(const Eigen::VectorXd&)>& f,
                                                 const GradedOptions& options = {});

struct KEnergyReport {
    double value = 0.0;
    double log_det_term = 0.0;  // int_P log det(u_ij) e^theta
    double l_term = 0.0;        // L(u0) in interior form
    int levels = 0;
};

/// F(u0) = -int_P log det(D^2 u0) e^theta + int_P <x, grad u0> e^theta.
KEnergyReport k_energy(const Polytope& p, const Eigen::VectorXd& theta, const SymplecticPotential& potential,
                       const GradedOptions& options = {});

}  // namespace toricstab
