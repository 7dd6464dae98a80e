#include "toricstab/lattice.hpp"

#include <cmath>
#include <string>

#include "toricstab/errors.hpp"
#include "toricstab/functional.hpp"
#include "toricstab/integrate.hpp"
#include "toricstab/parallel.hpp"

namespace toricstab {

namespace {

void check_k(std::int64_t k) {
    if (k < 1) throw Error(ErrorKind::InvalidArgument, "dilation k must be >= 1, got " + std::to_string(k));
}

// Runs fn(slab_index, point) over Z^n cap kP, slabs of the first coordinate in
// parallel; callers accumulate into per-slab slots.
void for_each_slab(const Polytope& p, std::int64_t k, const std::function<void(std::size_t, const IntVector&)>& fn) {
    const auto box = p.lattice_box(k);
    const std::int64_t lo = box.front().first;
    const auto slabs = static_cast<std::size_t>(box.front().second - lo + 1);
    parallel_for(slabs, [&](std::size_t s) {
        for_each_lattice_point_in_slab(p, k, lo + static_cast<std::int64_t>(s),
                                       [&](const IntVector& v) { fn(s, v); });
    });
}

std::size_t slab_count(const Polytope& p, std::int64_t k) {
    const auto box = p.lattice_box(k);
    return static_cast<std::size_t>(box.front().second - box.front().first + 1);
}

void check_capacity(std::uint64_t count, std::uint64_t capacity, std::int64_t k) {
    if (count > capacity)
        throw Error(ErrorKind::CapacityExceeded,
                    "more than " + std::to_string(capacity) + " lattice points in " + std::to_string(k) + "P");
}

// Cheap upper bound on N_k from the bounding box, so huge dilations fail
// before enumeration.
void precheck_capacity(const Polytope& p, std::int64_t k, std::uint64_t capacity) {
    double bound = 1.0;
    for (const auto& [lo, hi] : p.lattice_box(k)) bound *= static_cast<double>(hi - lo + 1);
    const double vol_bound = std::pow(static_cast<double>(k), p.dim()) * p.volume();
    if (vol_bound > 1.5 * static_cast<double>(capacity) && bound > static_cast<double>(capacity))
        throw Error(ErrorKind::CapacityExceeded,
                    "about " + std::to_string(static_cast<long double>(vol_bound)) + " lattice points in " +
                        std::to_string(k) + "P exceed capacity " + std::to_string(capacity));
}

}  // namespace

std::uint64_t lattice_count(const Polytope& p, std::int64_t k, std::uint64_t capacity) {
    check_k(k);
    precheck_capacity(p, k, capacity);
    std::vector<std::uint64_t> counts(slab_count(p, k), 0);
    for_each_slab(p, k, [&](std::size_t s, const IntVector&) { ++counts[s]; });
    std::uint64_t total = 0;
    for (auto c : counts) total += c;
    check_capacity(total, capacity, k);
    return total;
}

WeightedSums weighted_sums(const Polytope& p, const Eigen::VectorXd& theta, const PLConvexFunction& u, double r,
                           std::int64_t k, std::uint64_t capacity) {
    check_k(k);
    const int n = p.dim();
    if (theta.size() != n || u.dim() != n)
        throw Error(ErrorKind::DimensionMismatch, "theta or PL function dimension differs from polytope");
    const Rational top = max_on_polytope(p, u);
    if (!std::isfinite(r) || from_double(r) <= top)
        throw Error(ErrorKind::RNotDominating, "R = " + std::to_string(r) + " does not exceed max u = " +
                                                   format_rational(top));
    precheck_capacity(p, k, capacity);

    struct Slab {
        std::uint64_t count = 0;
        CompensatedSum w, wu, wt, wtu;
    };
    std::vector<Slab> slabs(slab_count(p, k));
    const double inv_k = 1.0 / static_cast<double>(k);
    for_each_slab(p, k, [&](std::size_t s, const IntVector& v) {
        Eigen::VectorXd x(n);
        for (int j = 0; j < n; ++j) x[j] = static_cast<double>(v[j]) * inv_k;
        const double t = theta.dot(x);
        const double e = std::exp(t);
        const double ux = u(x);
        auto& slab = slabs[s];
        ++slab.count;
        slab.w.add(e);
        slab.wu.add(e * ux);
        slab.wt.add(e * t);
        slab.wtu.add(e * t * ux);
    });

    WeightedSums out;
    out.k = k;
    CompensatedSum w, wu, wt, wtu;
    for (const auto& slab : slabs) {
        out.n_k += slab.count;
        w.merge(slab.w);
        wu.merge(slab.wu);
        wt.merge(slab.wt);
        wtu.merge(slab.wtu);
    }
    check_capacity(out.n_k, capacity, k);
    out.w = w.value();
    out.wu = wu.value();
    out.wt = wt.value();
    out.wtu = wtu.value();
    const double kd = static_cast<double>(k);
    out.s1 = kd * (r * out.w - out.wu);
    out.s2 = 0.5 * (r * out.wt - out.wtu);
    out.ratio = -(out.s1 - out.s2) / (kd * static_cast<double>(out.n_k));
    return out;
}

ExpansionFit fit_expansion(const std::vector<std::int64_t>& ks, const std::vector<double>& values) {
    if (ks.size() != values.size() || ks.size() < 3)
        throw Error(ErrorKind::InvalidArgument, "expansion fit needs at least three (k, value) pairs");
    const Eigen::Index m = static_cast<Eigen::Index>(ks.size());
    Eigen::MatrixXd a(m, 3);
    Eigen::VectorXd y(m);
    for (Eigen::Index i = 0; i < m; ++i) {
        const double inv = 1.0 / static_cast<double>(ks[i]);
        a(i, 0) = 1.0;
        a(i, 1) = inv;
        a(i, 2) = inv * inv;
        y[i] = values[i];
    }
    const Eigen::VectorXd coef = a.colPivHouseholderQr().solve(y);
    ExpansionFit fit;
    fit.a = coef[0];
    fit.b = coef[1];
    fit.c = coef[2];
    fit.residual_norm = (a * coef - y).norm();
    return fit;
}

std::vector<std::int64_t> k_range(std::int64_t kmin, std::int64_t kmax, std::int64_t step) {
    if (kmin < 1 || kmax < kmin || step < 1)
        throw Error(ErrorKind::InvalidArgument, "invalid k range " + std::to_string(kmin) + ".." +
                                                    std::to_string(kmax) + " step " + std::to_string(step));
    std::vector<std::int64_t> ks;
    for (std::int64_t k = kmin; k <= kmax; k += step) ks.push_back(k);
    return ks;
}

std::vector<std::int64_t> default_k_range() { return k_range(10, 60, 5); }

RRReport riemann_roch_check(const Polytope& p, const Eigen::VectorXd& theta, const PLConvexFunction& u, double r,
                            const std::vector<std::int64_t>& ks) {
    if (ks.size() < 3) throw Error(ErrorKind::InvalidArgument, "need at least three k values");
    for (std::size_t i = 1; i < ks.size(); ++i)
        if (ks[i] <= ks[i - 1]) throw Error(ErrorKind::InvalidArgument, "k values must be strictly increasing");
    RRReport rep;
    rep.k_values = ks;
    std::vector<double> ratios;
    for (auto k : ks) {
        rep.records.push_back(weighted_sums(p, theta, u, r, k));
        ratios.push_back(rep.records.back().ratio);
    }
    rep.fit = fit_expansion(ks, ratios);
    rep.f0_est = rep.fit.a;
    rep.f1_est = rep.fit.b;
    rep.f0_integral = futaki_f0(p, theta, u, r);
    rep.f1_integral = futaki_f1(p, theta, u);
    return rep;
}

PhiSpec PhiSpec::one() { return PhiSpec{}; }

PhiSpec PhiSpec::coordinate(int alpha) {
    PhiSpec s;
    s.kind = PhiKind::Coordinate;
    s.alpha = alpha;
    return s;
}

PhiSpec PhiSpec::piecewise_linear(PLConvexFunction u) {
    PhiSpec s;
    s.kind = PhiKind::PiecewiseLinear;
    s.u = std::move(u);
    return s;
}

PhiSpec PhiSpec::exp_affine(Eigen::VectorXd theta, Eigen::VectorXd a, double c) {
    PhiSpec s;
    s.kind = PhiKind::ExpAffine;
    s.theta = std::move(theta);
    s.a = std::move(a);
    s.c = c;
    return s;
}

PhiReport phi_sum_check(const Polytope& p, const PhiSpec& phi, const std::vector<std::int64_t>& ks) {
    const int n = p.dim();
    const Eigen::VectorXd zero = Eigen::VectorXd::Zero(n);
    PhiReport rep;
    std::function<double(const Eigen::VectorXd&)> eval;
    switch (phi.kind) {
        case PhiKind::One:
            rep.interior = p.volume();
            rep.boundary = p.boundary_measure();
            eval = [](const Eigen::VectorXd&) { return 1.0; };
            break;
        case PhiKind::Coordinate: {
            if (phi.alpha < 0 || phi.alpha >= n) throw Error(ErrorKind::InvalidArgument, "alpha out of range");
            const auto spec = IntegralSpec::coordinate(phi.alpha, zero);
            rep.interior = poly_exp_integral(p, spec).value;
            rep.boundary = boundary_integral(p, spec);
            eval = [a = phi.alpha](const Eigen::VectorXd& x) { return x[a]; };
            break;
        }
        case PhiKind::PiecewiseLinear: {
            if (!phi.u || phi.u->dim() != n) throw Error(ErrorKind::DimensionMismatch, "PL test function dimension");
            const auto chambers = refine_by_pl(p, *phi.u);
            rep.interior = h_functional(chambers, zero);
            rep.boundary = boundary_integral(chambers, zero);
            eval = [u = *phi.u](const Eigen::VectorXd& x) { return u(x); };
            break;
        }
        case PhiKind::ExpAffine: {
            if (phi.theta.size() != n || phi.a.size() != n)
                throw Error(ErrorKind::DimensionMismatch, "exp-affine test function dimension");
            const auto spec = IntegralSpec::affine(phi.a, phi.c, phi.theta);
            rep.interior = poly_exp_integral(p, spec).value;
            rep.boundary = boundary_integral(p, spec);
            eval = [&phi](const Eigen::VectorXd& x) { return std::exp(phi.theta.dot(x)) * (phi.a.dot(x) + phi.c); };
            break;
        }
    }

    const auto exact_boundary = p.boundary_measure_exact();
    for (auto k : ks) {
        check_k(k);
        PhiRecord rec;
        rec.k = k;
        const double kd = static_cast<double>(k);
        if (phi.kind == PhiKind::One) {
            const std::uint64_t count = lattice_count(p, k);
            rec.lattice_sum = static_cast<double>(count);
            if (exact_boundary) {
                Rational kn = 1, kn1 = 1;
                for (int i = 0; i < n; ++i) kn *= k;
                for (int i = 0; i + 1 < n; ++i) kn1 *= k;
                const Rational e = Rational(count) - kn * p.volume_exact() - kn1 * (*exact_boundary) / 2;
                rec.exact_error = e;
                rec.error = to_double(e);
            } else {
                rec.error = rec.lattice_sum - std::pow(kd, n) * rep.interior - 0.5 * std::pow(kd, n - 1) * rep.boundary;
            }
        } else {
            precheck_capacity(p, k, default_lattice_capacity);
            std::vector<CompensatedSum> partial(slab_count(p, k));
            const double inv_k = 1.0 / kd;
            for_each_slab(p, k, [&](std::size_t s, const IntVector& v) {
                Eigen::VectorXd x(n);
                for (int j = 0; j < n; ++j) x[j] = static_cast<double>(v[j]) * inv_k;
                partial[s].add(eval(x));
            });
            CompensatedSum total;
            for (const auto& s : partial) total.merge(s);
            rec.lattice_sum = total.value();
            rec.error = rec.lattice_sum - std::pow(kd, n) * rep.interior - 0.5 * std::pow(kd, n - 1) * rep.boundary;
        }
        rec.scaled = std::abs(rec.error) / std::pow(kd, n - 2);
        rep.sup_scaled = std::max(rep.sup_scaled, rec.scaled);
        rep.records.push_back(std::move(rec));
    }
    return rep;
}

}  // namespace toricstab
