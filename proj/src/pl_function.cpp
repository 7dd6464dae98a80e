#include "toricstab/pl_function.hpp"

#include <algorithm>
#include <limits>

#include "toricstab/errors.hpp"

namespace toricstab {

PLConvexFunction::PLConvexFunction(std::vector<AffinePiece> pieces) : pieces_(std::move(pieces)) {
    if (pieces_.empty()) throw Error(ErrorKind::InvalidArgument, "PL function needs at least one piece");
    const auto n = pieces_.front().a.size();
    if (n == 0) throw Error(ErrorKind::InvalidArgument, "PL function pieces must have dimension >= 1");
    for (const auto& p : pieces_)
        if (p.a.size() != n) throw Error(ErrorKind::DimensionMismatch, "PL pieces have inconsistent dimensions");
}

PLConvexFunction PLConvexFunction::affine(RationalVector a, Rational c) {
    return PLConvexFunction({AffinePiece{std::move(a), std::move(c)}});
}

PLConvexFunction PLConvexFunction::constant(int dim, Rational c) {
    return affine(RationalVector(dim, Rational(0)), std::move(c));
}

PLConvexFunction PLConvexFunction::coordinate(int dim, int alpha) {
    RationalVector a(dim, Rational(0));
    a.at(alpha) = 1;
    return affine(std::move(a));
}

Rational PLConvexFunction::piece_value(int piece, const RationalVector& x) const {
    return dot(pieces_[piece].a, x) + pieces_[piece].c;
}

Rational PLConvexFunction::operator()(const RationalVector& x) const {
    if (x.size() != pieces_.front().a.size()) throw Error(ErrorKind::DimensionMismatch, "point dimension");
    Rational best = piece_value(0, x);
    for (int i = 1; i < static_cast<int>(pieces_.size()); ++i) {
        Rational v = piece_value(i, x);
        if (v > best) best = v;
    }
    return best;
}

double PLConvexFunction::operator()(const Eigen::VectorXd& x) const {
    double best = -std::numeric_limits<double>::infinity();
    for (const auto& p : pieces_) {
        double v = to_double(p.c);
        for (std::size_t i = 0; i < p.a.size(); ++i) v += to_double(p.a[i]) * x[i];
        best = std::max(best, v);
    }
    return best;
}

std::vector<int> PLConvexFunction::active_pieces(const RationalVector& x) const {
    const Rational best = (*this)(x);
    std::vector<int> ids;
    for (int i = 0; i < static_cast<int>(pieces_.size()); ++i)
        if (piece_value(i, x) == best) ids.push_back(i);
    return ids;
}

PLConvexFunction PLConvexFunction::plus_affine(const RationalVector& a, const Rational& c) const {
    auto pieces = pieces_;
    for (auto& p : pieces) {
        for (std::size_t i = 0; i < a.size(); ++i) p.a[i] += a[i];
        p.c += c;
    }
    return PLConvexFunction(std::move(pieces));
}

PLConvexFunction PLConvexFunction::scaled(const Rational& s) const {
    if (s < 0) throw Error(ErrorKind::InvalidArgument, "negative scaling breaks convexity");
    auto pieces = pieces_;
    for (auto& p : pieces) {
        for (auto& x : p.a) x *= s;
        p.c *= s;
    }
    return PLConvexFunction(std::move(pieces));
}

PLConvexFunction operator+(const PLConvexFunction& u, const PLConvexFunction& v) {
    if (u.dim() != v.dim()) throw Error(ErrorKind::DimensionMismatch, "PL sum of different dimensions");
    std::vector<AffinePiece> pieces;
    for (const auto& p : u.pieces())
        for (const auto& q : v.pieces()) {
            AffinePiece s{p.a, p.c + q.c};
            for (std::size_t i = 0; i < s.a.size(); ++i) s.a[i] += q.a[i];
            pieces.push_back(std::move(s));
        }
    return PLConvexFunction(std::move(pieces));
}

}  // namespace toricstab
