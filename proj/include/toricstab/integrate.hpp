#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "toricstab/pl_function.hpp"
#include "toricstab/polytope.hpp"

namespace toricstab {

enum class IntegrandKind { One, Coordinate, Affine, AffineTimesLinear, Quadratic };

/// Integrand p(x) * exp(<theta, x>) with p of degree <= 2:
///   One                 p = 1
///   Coordinate          p = x_alpha
///   Affine              p = <a, x> + c
///   AffineTimesLinear   p = (<a, x> + c) * <b, x>
///   Quadratic           p = x_alpha * x_beta
struct IntegralSpec {
    IntegrandKind kind = IntegrandKind::One;
    int alpha = 0;
    int beta = 0;
    Eigen::VectorXd a;
    Eigen::VectorXd b;
    double c = 0.0;
    Eigen::VectorXd theta;

    static IntegralSpec one(Eigen::VectorXd theta);
    static IntegralSpec coordinate(int alpha, Eigen::VectorXd theta);
    static IntegralSpec affine(Eigen::VectorXd a, double c, Eigen::VectorXd theta);
    static IntegralSpec affine_times_linear(Eigen::VectorXd a, double c, Eigen::VectorXd b, Eigen::VectorXd theta);
    static IntegralSpec quadratic(int alpha, int beta, Eigen::VectorXd theta);

    int dim() const { return static_cast<int>(theta.size()); }
    double polynomial(const Eigen::VectorXd& x) const;
};

enum class QuadratureMethod { ClosedForm, Adaptive };

struct QuadratureReport {
    double value = 0.0;
    double abs_error_estimate = 0.0;
    std::size_t subdivisions = 0;
    QuadratureMethod method = QuadratureMethod::ClosedForm;
};

struct AdaptiveOptions {
    std::size_t max_simplices = 1'000'000;
    double abs_tol = 1e-13;
    double rel_tol = 1e-12;
};

/// q-point Gauss-Legendre rule on [a, b].
struct GaussRule {
    std::vector<double> nodes, weights;
};
GaussRule gauss_legendre(int q, double a = 0.0, double b = 1.0);

/// Divided difference exp[t_0, ..., t_m]; nodes may coincide.
double exp_divided_difference(std::span<const double> nodes);

/// Integral of exp(<theta, x>) over S (Lebesgue measure of the simplex's flat).
double exp_integral_simplex(const Simplex& s, const Eigen::VectorXd& theta);

QuadratureReport poly_exp_integral(std::span<const Simplex> cells, const IntegralSpec& spec,
                                   QuadratureMethod method = QuadratureMethod::ClosedForm,
                                   const AdaptiveOptions& options = {});
QuadratureReport poly_exp_integral(const Simplex& s, const IntegralSpec& spec,
                                   QuadratureMethod method = QuadratureMethod::ClosedForm,
                                   const AdaptiveOptions& options = {});
QuadratureReport poly_exp_integral(const Polytope& p, const IntegralSpec& spec,
                                   QuadratureMethod method = QuadratureMethod::ClosedForm,
                                   const AdaptiveOptions& options = {});
QuadratureReport poly_exp_integral(const Chamber& chamber, const IntegralSpec& spec,
                                   QuadratureMethod method = QuadratureMethod::ClosedForm,
                                   const AdaptiveOptions& options = {});

/// V = int e^theta, g = int x e^theta, H = int x x^T e^theta over the cells,
/// in one pass over the divided differences.
struct ExpMoments {
    double mass = 0.0;
    Eigen::VectorXd first;
    Eigen::MatrixXd second;
};
ExpMoments exp_moments(std::span<const Simplex> cells, const Eigen::VectorXd& theta);

/// Chambers thinner than this fraction of |P| are skipped in interior integrals.
inline constexpr double degenerate_chamber_fraction = 1e-14;

/// int_{dP} u e^theta dsigma with dsigma = dsigma_0 / |l_i| on facet i.
double boundary_integral(const ChamberDecomposition& chambers, const Eigen::VectorXd& theta,
                         QuadratureMethod method = QuadratureMethod::ClosedForm);
double boundary_integral(const Polytope& p, const PLConvexFunction& u, const Eigen::VectorXd& theta,
                         QuadratureMethod method = QuadratureMethod::ClosedForm);
double boundary_integral(const Polytope& p, const IntegralSpec& spec,
                         QuadratureMethod method = QuadratureMethod::ClosedForm);

/// sum over chambers of int_C spec_l, where spec_l is built from the chamber's
/// active piece l by `make_spec`.
double chamberwise_integral(const ChamberDecomposition& chambers,
                            const std::function<IntegralSpec(const AffinePiece&)>& make_spec,
                            QuadratureMethod method = QuadratureMethod::ClosedForm);

/// int_P e^theta (<x, grad u> + n u + theta(x) u) dx, chamber-wise; equals the
/// boundary integral by the divergence theorem.
double divergence_interior_form(const ChamberDecomposition& chambers, const Eigen::VectorXd& theta,
                                QuadratureMethod method = QuadratureMethod::ClosedForm);

Eigen::VectorXd to_eigen(const RationalVector& v);

}  // namespace toricstab
