#pragma once

#include <vector>

#include <Eigen/Dense>

#include "toricstab/rational.hpp"

namespace toricstab {

/// x -> <a, x> + c with rational data.
struct AffinePiece {
    RationalVector a;
    Rational c;

    bool operator==(const AffinePiece&) const = default;
};

/// Convex piecewise-linear function u(x) = max over pieces of <a, x> + c.
/// All data are rational, so the "rational PL" property always holds.
class PLConvexFunction {
public:
    explicit PLConvexFunction(std::vector<AffinePiece> pieces);

    static PLConvexFunction affine(RationalVector a, Rational c = 0);
    static PLConvexFunction constant(int dim, Rational c);
    /// u = x_alpha
    static PLConvexFunction coordinate(int dim, int alpha);

    int dim() const { return static_cast<int>(pieces_.front().a.size()); }
    const std::vector<AffinePiece>& pieces() const { return pieces_; }
    bool rational() const { return true; }

    Rational operator()(const RationalVector& x) const;
    double operator()(const Eigen::VectorXd& x) const;
    Rational piece_value(int piece, const RationalVector& x) const;

    /// Pieces attaining the maximum at x (exact comparison).
    std::vector<int> active_pieces(const RationalVector& x) const;

    /// u(x) + <a, x> + c
    PLConvexFunction plus_affine(const RationalVector& a, const Rational& c) const;
    /// s * u, s >= 0
    PLConvexFunction scaled(const Rational& s) const;

    bool operator==(const PLConvexFunction&) const = default;

private:
    std::vector<AffinePiece> pieces_;
};

/// max_i f_i + max_j g_j = max_{i,j} (f_i + g_j)
PLConvexFunction operator+(const PLConvexFunction& u, const PLConvexFunction& v);

}  // namespace toricstab
