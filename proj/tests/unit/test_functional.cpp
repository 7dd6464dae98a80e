#include <doctest.h>

#include <cmath>
#include <random>

#include "support.hpp"
#include "toricstab/catalog.hpp"
#include "toricstab/errors.hpp"
#include "toricstab/functional.hpp"
#include "toricstab/integrate.hpp"
#include "toricstab/soliton.hpp"

using namespace toricstab;
using namespace toricstab::testing;

namespace {

const Polytope& seg() { return find_entry("CP1").polytope; }
const Polytope& cp2() { return find_entry("CP2").polytope; }

Eigen::VectorXd zeros(int n) { return Eigen::VectorXd::Zero(n); }
Eigen::VectorXd scalar(double t) { return Eigen::VectorXd::Constant(1, t); }

PLConvexFunction abs_half() {
    return PLConvexFunction({AffinePiece{{Rational(-1, 2)}, 0}, AffinePiece{{Rational(1, 2)}, 0}});
}

ErrorKind kind_of(const std::function<void()>& f) {
    try {
        f();
    } catch (const Error& e) {
        return e.kind();
    }
    FAIL("expected an error");
    return ErrorKind::InvalidArgument;
}

}  // namespace

TEST_CASE("L functional examples") {
    const auto a = l_functional(seg(), zeros(1), step(1, 0));
    CHECK(a.value == doctest::Approx(0.5).epsilon(1e-14));
    CHECK(a.boundary == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(a.interior == doctest::Approx(0.5).epsilon(1e-14));
    const auto b = l_functional(cp2(), zeros(2), step(2, 0));
    CHECK(b.value == doctest::Approx(4.0 / 3.0).epsilon(1e-13));
    CHECK(b.boundary == doctest::Approx(4.0).epsilon(1e-13));
    CHECK(b.interior == doctest::Approx(8.0 / 3.0).epsilon(1e-13));
    CHECK(b.scale() == doctest::Approx(1.0 + 4.0 + 8.0 / 3.0));
    const auto c = l_functional(cp2(), zeros(2), step(2, 0), QuadratureMethod::Adaptive);
    CHECK(c.value == doctest::Approx(4.0 / 3.0).epsilon(1e-11));
}

TEST_CASE("L vanishes on linear functions at the soliton") {
    for (const auto& e : catalog()) {
        const auto& p = e.polytope;
        const auto s = solve_soliton(p);
        for (int a = 0; a < p.dim(); ++a) {
            const auto r = l_functional(p, s.theta, PLConvexFunction::coordinate(p.dim(), a));
            CHECK(std::abs(r.value) <= 1e-9);
            CHECK(std::abs(futaki_f1(p, s.theta, PLConvexFunction::coordinate(p.dim(), a))) <= 1e-9);
        }
    }
}

TEST_CASE("Futaki invariants") {
    CHECK(futaki_f1(seg(), zeros(1), step(1, 0)) == doctest::Approx(1.0 / 8.0).epsilon(1e-14));
    CHECK(futaki_f1(cp2(), zeros(2), step(2, 0)) == doctest::Approx(4.0 / 27.0).epsilon(1e-13));
    CHECK(futaki_f0(seg(), zeros(1), step(1, 0), 2.0) == doctest::Approx(-7.0 / 4.0).epsilon(1e-14));
    CHECK(futaki_f0(seg(), zeros(1), step(1, 0), 3.0) == doctest::Approx(-11.0 / 4.0).epsilon(1e-14));
    CHECK(futaki_f0(seg(), zeros(1), PLConvexFunction::constant(1, 0), 1.0) == doctest::Approx(-1.0).epsilon(1e-14));
    CHECK(kind_of([] { futaki_f0(seg(), zeros(1), step(1, 0), 1.0); }) == ErrorKind::RNotDominating);
    CHECK(kind_of([] { futaki_f0(seg(), zeros(1), step(1, 0), 0.5); }) == ErrorKind::RNotDominating);
    CHECK_NOTHROW(futaki_f0(seg(), zeros(1), step(1, 0), std::nextafter(1.0, 2.0)));
}

TEST_CASE("max on polytope") {
    CHECK(max_on_polytope(seg(), step(1, 0)) == 1);
    CHECK(max_on_polytope(cp2(), step(2, 0)) == 1);
    CHECK(max_on_polytope(cp2(), PLConvexFunction::affine(rv({-1, 0}), Rational(1, 3))) == Rational(7, 3));
}

TEST_CASE("normalization at the origin") {
    const auto check_abs_half = [](const PLConvexFunction& v) {
        for (int i = -8; i <= 8; ++i) {
            const Rational x(i, 4);
            CHECK(v(RationalVector{x}) == abs(x) / 2);
        }
    };
    check_abs_half(normalize_at_origin(step(1, 0)));
    check_abs_half(normalize_at_origin(PLConvexFunction({AffinePiece{{1}, 0}, AffinePiece{{2}, 0}})));
    const auto lin = normalize_at_origin(PLConvexFunction::affine(rv({3, -2}), Rational(5, 7)));
    CHECK(vanishes_on(cp2(), lin));
    CHECK(!vanishes_on(cp2(), normalize_at_origin(step(2, 0))));
    for (std::uint64_t seed = 0; seed < 50; ++seed) {
        const auto v = normalize_at_origin(random_pl(2, seed));
        CHECK(v(rv({0, 0})) == 0);
        for (const auto& x : cp2().vertices()) CHECK(v(x) >= 0);
    }
}

TEST_CASE("H functional examples") {
    CHECK(h_functional(seg(), zeros(1), abs_half()) == doctest::Approx(0.5).epsilon(1e-14));
    CHECK(h_functional(seg(), zeros(1), PLConvexFunction::constant(1, 1)) == doctest::Approx(2.0).epsilon(1e-14));
    CHECK(h_functional(cp2(), zeros(2), step(2, 0)) == doctest::Approx(4.0 / 3.0).epsilon(1e-13));
}

TEST_CASE("random PL functions are seeded and in range") {
    CHECK(random_pl(3, 17) == random_pl(3, 17));
    CHECK(!(random_pl(3, 17) == random_pl(3, 18)));
    for (std::uint64_t seed = 0; seed < 200; ++seed) {
        const auto u = random_pl(2, seed);
        CHECK(u.pieces().size() >= 2);
        CHECK(u.pieces().size() <= 6);
        for (const auto& piece : u.pieces()) {
            for (const auto& a : piece.a) {
                CHECK(abs(a) <= 3);
                CHECK(denominator(Rational(a * 1000)) == 1);
            }
            CHECK(abs(piece.c) <= 1);
        }
    }
}

TEST_CASE("stability margin on the segment") {
    const auto r = l_functional(seg(), zeros(1), abs_half());
    CHECK(r.value / r.boundary == doctest::Approx(0.5).epsilon(1e-14));
    const auto scan = stability_margin(seg(), zeros(1), 200, 1);
    CHECK(scan.used + scan.discarded == 200);
    CHECK(scan.samples.size() == 200);
    CHECK(scan.min_ratio > 0.0);
    CHECK(scan.min_ratio <= 1.0);
    CHECK(scan.samples[scan.argmin_index].ratio == scan.min_ratio);
    CHECK(scan.argmin == scan.samples[scan.argmin_index].u);
}

TEST_CASE("stability margin errors") {
    CHECK(kind_of([] { stability_margin(seg(), zeros(1), 0, 1); }) == ErrorKind::AllSamplesDegenerate);
    CHECK(kind_of([] { stability_margin(seg(), scalar(1.0), 10, 1); }) == ErrorKind::InvalidArgument);
}

TEST_CASE("stability margin is deterministic across runs and thread counts") {
    const auto& p = find_entry("Bl1CP2").polytope;
    const auto s = solve_soliton(p);
    StabilityScan a, b, c;
    {
        ThreadScope one(1);
        a = stability_margin(p, s.theta, 60, 9);
    }
    {
        ThreadScope four(4);
        b = stability_margin(p, s.theta, 60, 9);
        c = stability_margin(p, s.theta, 60, 10);
    }
    CHECK(a.min_ratio == b.min_ratio);
    CHECK(a.argmin_index == b.argmin_index);
    REQUIRE(a.samples.size() == b.samples.size());
    for (std::size_t i = 0; i < a.samples.size(); ++i) {
        CHECK(a.samples[i].l == b.samples[i].l);
        CHECK(a.samples[i].h == b.samples[i].h);
    }
    CHECK(!(a.samples[0].u == c.samples[0].u));
    CHECK(a.min_ratio > 0.0);
}

TEST_CASE("L is additive and positively homogeneous") {
    std::mt19937_64 rng(8);
    for (const auto& e : catalog()) {
        const auto& p = e.polytope;
        const Eigen::VectorXd theta = random_in_ball(p.dim(), 1.5, rng);
        const auto u = random_pl(p.dim(), 2 * rng() % 1000);
        const auto v = random_pl(p.dim(), 2 * rng() % 1000 + 1);
        const Rational alpha(3, 2), beta(2, 5);
        const double lu = l_functional(p, theta, u).value, lv = l_functional(p, theta, v).value;
        const auto lc = l_functional(p, theta, u.scaled(alpha) + v.scaled(beta));
        CHECK(std::abs(lc.value - (1.5 * lu + 0.4 * lv)) <= 1e-9 * lc.scale());
    }
}

TEST_CASE("properties at the soliton") {
    for (const auto& e : catalog()) {
        const auto& p = e.polytope;
        const auto s = solve_soliton(p);
        for (std::uint64_t seed = 0; seed < 8; ++seed) {
            const auto v = normalize_at_origin(random_pl(p.dim(), 1000 + seed));
            if (vanishes_on(p, v)) continue;
            const auto l = l_functional(p, s.theta, v);
            RationalVector a(p.dim());
            for (int i = 0; i < p.dim(); ++i) a[i] = Rational(static_cast<long>(seed) - 3 + i, 7);
            const auto shifted = l_functional(p, s.theta, v.plus_affine(a, Rational(1, 3)));
            CHECK(std::abs(shifted.value - l.value) <= 1e-9 * l.scale());
            CHECK(l.value >= h_functional(p, s.theta, v) - 1e-9 * l.scale());
            CHECK(futaki_f1(p, s.theta, v) >= 0.0);
        }
    }
}

TEST_CASE("Guillemin potential derivatives") {
    std::mt19937_64 rng(12);
    for (const char* name : {"CP1", "Bl1CP2", "CP3"}) {
        const auto& p = find_entry(name).polytope;
        const auto u = SymplecticPotential::guillemin(p);
        CHECK(u.kind() == PotentialKind::Guillemin);
        for (double w : u.weights()) CHECK(w == 1.0);
        for (int c = 0; c < 10; ++c) {
            const Eigen::VectorXd x = random_in_ball(p.dim(), 0.3, rng);
            const Eigen::VectorXd g = u.gradient(x);
            const Eigen::MatrixXd h = u.hessian(x);
            const double eps = 1e-6;
            for (int a = 0; a < p.dim(); ++a) {
                Eigen::VectorXd xp = x, xm = x;
                xp[a] += eps;
                xm[a] -= eps;
                CHECK((u.value(xp) - u.value(xm)) / (2 * eps) == doctest::Approx(g[a]).epsilon(1e-7));
                const Eigen::VectorXd dg = (u.gradient(xp) - u.gradient(xm)) / (2 * eps);
                for (int b = 0; b < p.dim(); ++b) CHECK(dg[b] == doctest::Approx(h(b, a)).epsilon(1e-6));
            }
            CHECK(u.log_det_hessian(x) == doctest::Approx(std::log(h.determinant())).epsilon(1e-12));
            CHECK(Eigen::LLT<Eigen::MatrixXd>(h).info() == Eigen::Success);
        }
    }
    // Segment: u0 = (1-x)log(1-x) + (1+x)log(1+x), u0'' = 2/(1-x^2).
    const auto u = SymplecticPotential::guillemin(seg());
    CHECK(u.value(scalar(0.5)) == doctest::Approx(0.5 * std::log(0.5) + 1.5 * std::log(1.5)).epsilon(1e-14));
    CHECK(u.hessian(scalar(0.5))(0, 0) == doctest::Approx(2.0 / 0.75).epsilon(1e-14));
}

TEST_CASE("log det stays accurate near the boundary") {
    const auto u = SymplecticPotential::guillemin(cp2());
    for (double d : {1e-4, 1e-8, 1e-12}) {
        const Eigen::VectorXd x = (Eigen::VectorXd(2) << 1.0 - d, 0.0).finished();
        const double direct = std::log(u.hessian(x).determinant());
        CHECK(std::isfinite(u.log_det_hessian(x)));
        CHECK(u.log_det_hessian(x) == doctest::Approx(direct).epsilon(1e-8));
    }
}

TEST_CASE("graded quadrature integrates smooth and log-singular functions") {
    const auto one = [](const Eigen::VectorXd&) { return 1.0; };
    CHECK(graded_integral(cp2(), 10, one) == doctest::Approx(4.5).epsilon(1e-12));
    CHECK(graded_integral(find_entry("CP3").polytope, 6, one) ==
          doctest::Approx(find_entry("CP3").polytope.volume()).epsilon(1e-12));
    // int_{-1}^{1} log(1 - x) dx = 2 log 2 - 2
    const auto [v, levels] = graded_integral_converged(seg(), [](const Eigen::VectorXd& x) { return std::log(1.0 - x[0]); });
    CHECK(v == doctest::Approx(2 * std::log(2.0) - 2).epsilon(1e-7));
    CHECK(levels >= 12);
    GradedOptions o;
    o.start_levels = 2;
    o.max_levels = 3;
    o.level_step = 1;
    o.rel_tol = 1e-15;
    CHECK(kind_of([&] {
              graded_integral_converged(seg(), [](const Eigen::VectorXd& x) { return std::log(1.0 - x[0]); }, o);
          }) == ErrorKind::ToleranceNotMet);
}

TEST_CASE("k-energy of the segment") {
    const auto u = SymplecticPotential::guillemin(seg());
    const auto a = k_energy(seg(), zeros(1), u);
    CHECK(a.value == doctest::Approx(segment_kenergy_theta0).epsilon(1e-7));
    CHECK(a.value == doctest::Approx(-a.log_det_term + a.l_term).epsilon(1e-14));
    const auto b = k_energy(seg(), scalar(1.0), u);
    CHECK(b.value == doctest::Approx(segment_kenergy_theta1).epsilon(1e-7));
    CHECK(b.levels >= 12);
}

TEST_CASE("k-energy is finite on the catalog") {
    for (const char* name : {"CP2", "Bl1CP2", "Bl3CP2"}) {
        const auto& p = find_entry(name).polytope;
        const auto s = solve_soliton(p);
        const auto r = k_energy(p, s.theta, SymplecticPotential::guillemin(p));
        CHECK(std::isfinite(r.value));
        CHECK(r.l_term > 0.0);
    }
}
