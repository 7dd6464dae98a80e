#include "toricstab/functional.hpp"

#include <cmath>
#include <limits>
#include <random>
#include <string>

#include "toricstab/errors.hpp"
#include "toricstab/parallel.hpp"

namespace toricstab {

double LReport::scale() const { return 1.0 + std::abs(boundary) + std::abs(interior); }

LReport l_functional(const ChamberDecomposition& chambers, const Eigen::VectorXd& theta, QuadratureMethod method) {
    const int n = chambers.parent.dim();
    if (theta.size() != n) throw Error(ErrorKind::DimensionMismatch, "theta dimension differs from polytope");
    LReport r;
    r.boundary = boundary_integral(chambers, theta, method);
    const double plain = chamberwise_integral(
        chambers,
        [&](const AffinePiece& piece) {
            return IntegralSpec::affine(n * to_eigen(piece.a), n * to_double(piece.c), theta);
        },
        method);
    const double weighted = chamberwise_integral(
        chambers,
        [&](const AffinePiece& piece) {
            return IntegralSpec::affine_times_linear(to_eigen(piece.a), to_double(piece.c), theta, theta);
        },
        method);
    r.interior = plain + weighted;
    r.value = r.boundary - r.interior;
    return r;
}

LReport l_functional(const Polytope& p, const Eigen::VectorXd& theta, const PLConvexFunction& u,
                     QuadratureMethod method) {
    if (u.dim() != p.dim()) throw Error(ErrorKind::DimensionMismatch, "PL function dimension differs from polytope");
    return l_functional(refine_by_pl(p, u), theta, method);
}

double futaki_f1(const Polytope& p, const Eigen::VectorXd& theta, const PLConvexFunction& u) {
    return l_functional(p, theta, u).value / (2.0 * p.volume());
}

Rational max_on_polytope(const Polytope& p, const PLConvexFunction& u) {
    Rational best = u(p.vertices().front());
    for (const auto& v : p.vertices()) best = std::max(best, u(v));
    return best;
}

double futaki_f0(const Polytope& p, const Eigen::VectorXd& theta, const PLConvexFunction& u, double r) {
    if (u.dim() != p.dim()) throw Error(ErrorKind::DimensionMismatch, "PL function dimension differs from polytope");
    const Rational top = max_on_polytope(p, u);
    if (!std::isfinite(r) || from_double(r) <= top)
        throw Error(ErrorKind::RNotDominating, "R = " + std::to_string(r) + " does not exceed max u = " +
                                                   format_rational(top));
    const double mass = poly_exp_integral(p, IntegralSpec::one(theta)).value;
    return -(r * mass - h_functional(p, theta, u)) / p.volume();
}

PLConvexFunction normalize_at(const PLConvexFunction& u, const RationalVector& point) {
    if (static_cast<int>(point.size()) != u.dim())
        throw Error(ErrorKind::DimensionMismatch, "base point dimension differs from PL function");
    const auto active = u.active_pieces(point);
    RationalVector g(u.dim(), Rational(0));
    for (int i : active)
        for (int j = 0; j < u.dim(); ++j) g[j] += u.pieces()[i].a[j];
    for (auto& x : g) x /= static_cast<long>(active.size());
    RationalVector neg_g(g.size());
    for (std::size_t j = 0; j < g.size(); ++j) neg_g[j] = -g[j];
    return u.plus_affine(neg_g, dot(g, point) - u(point));
}

PLConvexFunction normalize_at_origin(const PLConvexFunction& u) {
    return normalize_at(u, RationalVector(u.dim(), Rational(0)));
}

double h_functional(const ChamberDecomposition& chambers, const Eigen::VectorXd& theta) {
    return chamberwise_integral(chambers, [&](const AffinePiece& piece) {
        return IntegralSpec::affine(to_eigen(piece.a), to_double(piece.c), theta);
    });
}

double h_functional(const Polytope& p, const Eigen::VectorXd& theta, const PLConvexFunction& u) {
    if (u.dim() != p.dim()) throw Error(ErrorKind::DimensionMismatch, "PL function dimension differs from polytope");
    return h_functional(refine_by_pl(p, u), theta);
}

bool vanishes_on(const Polytope& p, const PLConvexFunction& u) {
    for (const auto& v : p.vertices())
        if (u(v) != 0) return false;
    return true;
}

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

// Uniform integer in [lo, hi] by rejection; std distributions are not
// specified bit-for-bit across standard libraries.
std::int64_t uniform_int(std::mt19937_64& rng, std::int64_t lo, std::int64_t hi) {
    const std::uint64_t span = static_cast<std::uint64_t>(hi - lo) + 1;
    const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() - std::numeric_limits<std::uint64_t>::max() % span;
    std::uint64_t x;
    do x = rng();
    while (x >= limit);
    return lo + static_cast<std::int64_t>(x % span);
}

}  // namespace

PLConvexFunction random_pl(int dim, std::uint64_t seed) {
    std::mt19937_64 rng(splitmix64(seed));
    const int count = static_cast<int>(uniform_int(rng, 2, 6));
    std::vector<AffinePiece> pieces;
    for (int k = 0; k < count; ++k) {
        AffinePiece piece;
        for (int j = 0; j < dim; ++j) piece.a.emplace_back(Rational(uniform_int(rng, -3000, 3000), 1000));
        piece.c = Rational(uniform_int(rng, -1000, 1000), 1000);
        pieces.push_back(std::move(piece));
    }
    return PLConvexFunction(std::move(pieces));
}

StabilityScan stability_margin(const Polytope& p, const Eigen::VectorXd& theta, std::size_t sample_count,
                               std::uint64_t seed) {
    const int n = p.dim();
    if (theta.size() != n) throw Error(ErrorKind::DimensionMismatch, "theta dimension differs from polytope");
    if (sample_count == 0) throw Error(ErrorKind::AllSamplesDegenerate, "no samples requested");
    for (int alpha = 0; alpha < n; ++alpha) {
        const auto lin = l_functional(p, theta, PLConvexFunction::coordinate(n, alpha));
        if (std::abs(lin.value) > 1e-8 * lin.scale())
            throw Error(ErrorKind::InvalidArgument, "theta is not the soliton vector: L(x_" + std::to_string(alpha) +
                                                        ") = " + std::to_string(lin.value));
    }

    StabilityScan scan;
    scan.samples.resize(sample_count);
    parallel_for(sample_count, [&](std::size_t s) {
        StabilitySample& rec = scan.samples[s];
        rec.index = s;
        rec.u = normalize_at_origin(random_pl(n, seed + s));
        if (vanishes_on(p, rec.u)) {
            rec.degenerate = true;
            return;
        }
        const auto chambers = refine_by_pl(p, rec.u);
        const auto l = l_functional(chambers, theta);
        rec.l = l.value;
        rec.boundary = l.boundary;
        rec.scale = l.scale();
        rec.h = h_functional(chambers, theta);
        rec.ratio = l.value / l.boundary;
    });

    bool any = false;
    for (const auto& rec : scan.samples) {
        if (rec.degenerate) {
            ++scan.discarded;
            continue;
        }
        ++scan.used;
        if (!any || rec.ratio < scan.min_ratio) {
            any = true;
            scan.min_ratio = rec.ratio;
            scan.argmin_index = rec.index;
            scan.argmin = rec.u;
        }
    }
    if (!any) throw Error(ErrorKind::AllSamplesDegenerate, "every sample vanished on P after normalization");
    return scan;
}

}  // namespace toricstab
