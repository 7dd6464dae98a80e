#include "toricstab/integrate.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <queue>

#include "toricstab/errors.hpp"
#include "toricstab/parallel.hpp"

namespace toricstab {

namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();

double factorial(int n) {
    double f = 1.0;
    for (int i = 2; i <= n; ++i) f *= i;
    return f;
}

// exp[t_0..t_m] as entry (0, m) of exp(A), A = diag(t) + superdiagonal ones.
// Nodes are shifted by their minimum so every Taylor and squaring term is
// nonnegative; the evaluation is then free of cancellation.
double exp_dd_confluent(std::span<const double> t) {
    const int m = static_cast<int>(t.size()) - 1;
    const double lo = *std::min_element(t.begin(), t.end());
    const double hi = *std::max_element(t.begin(), t.end());
    const double spread = hi - lo;
    int squarings = 0;
    while (std::ldexp(spread, -squarings) > 0.5) ++squarings;
    const double scale = std::ldexp(1.0, -squarings);

    const int size = m + 1;
    Eigen::MatrixXd b = Eigen::MatrixXd::Zero(size, size);
    for (int j = 0; j < size; ++j) {
        b(j, j) = (t[j] - lo) * scale;
        if (j + 1 < size) b(j, j + 1) = scale;
    }
    Eigen::MatrixXd term = Eigen::MatrixXd::Identity(size, size);
    Eigen::MatrixXd sum = term;
    for (int p = 1; p <= m + 30; ++p) {
        term = (term * b) / static_cast<double>(p);
        sum += term;
    }
    for (int s = 0; s < squarings; ++s) sum = (sum * sum).eval();
    return std::exp(lo) * sum(0, m);
}

}  // namespace

GaussRule gauss_legendre(int q, double a, double b) {
    GaussRule r;
    for (int i = 1; i <= q; ++i) {
        double x = std::cos(std::numbers::pi * (i - 0.25) / (q + 0.5));
        double dp = 0.0;
        for (int iter = 0; iter < 100; ++iter) {
            double p0 = 1.0, p1 = x;
            for (int j = 2; j <= q; ++j) {
                const double p2 = ((2.0 * j - 1.0) * x * p1 - (j - 1.0) * p0) / j;
                p0 = p1;
                p1 = p2;
            }
            dp = q * (x * p1 - p0) / (x * x - 1.0);
            const double dx = p1 / dp;
            x -= dx;
            if (std::abs(dx) < 1e-16) break;
        }
        r.nodes.push_back(a + 0.5 * (b - a) * (1.0 - x));
        r.weights.push_back((b - a) / ((1.0 - x * x) * dp * dp));
    }
    return r;
}

double exp_divided_difference(std::span<const double> nodes) {
    const int m = static_cast<int>(nodes.size()) - 1;
    if (m < 0) throw Error(ErrorKind::InvalidArgument, "divided difference needs at least one node");
    if (m == 0) return std::exp(nodes[0]);

    std::vector<double> sorted(nodes.begin(), nodes.end());
    std::sort(sorted.begin(), sorted.end());
    double min_gap = std::numeric_limits<double>::infinity();
    for (int j = 0; j < m; ++j) min_gap = std::min(min_gap, sorted[j + 1] - sorted[j]);
    const double tmax = std::max(std::abs(sorted.front()), std::abs(sorted.back()));

    if (min_gap >= 1e-4 * (1.0 + tmax)) {
        CompensatedSum sum;
        double abs_sum = 0.0;
        for (int j = 0; j <= m; ++j) {
            double denom = 1.0;
            for (int k = 0; k <= m; ++k)
                if (k != j) denom *= nodes[j] - nodes[k];
            const double term = std::exp(nodes[j]) / denom;
            sum.add(term);
            abs_sum += std::abs(term);
        }
        // Distinct-node formula only while its cancellation stays small.
        if (abs_sum <= 16.0 * std::abs(sum.value())) return sum.value();
    }
    return exp_dd_confluent(nodes);
}

double exp_integral_simplex(const Simplex& s, const Eigen::VectorXd& theta) {
    const int k = s.simplex_dim();
    if (k < 0 || !(s.volume > 0.0) || !std::isfinite(s.volume))
        throw Error(ErrorKind::DegenerateSimplex, "simplex has zero volume");
    if (s.ambient_dim() != theta.size()) throw Error(ErrorKind::DimensionMismatch, "theta dimension");
    std::vector<double> t(k + 1);
    for (int j = 0; j <= k; ++j) t[j] = theta.dot(s.vertices[j]);
    return factorial(k) * s.volume * exp_divided_difference(t);
}

IntegralSpec IntegralSpec::one(Eigen::VectorXd theta) {
    IntegralSpec s;
    s.theta = std::move(theta);
    return s;
}

IntegralSpec IntegralSpec::coordinate(int alpha, Eigen::VectorXd theta) {
    IntegralSpec s;
    s.kind = IntegrandKind::Coordinate;
    s.alpha = alpha;
    s.theta = std::move(theta);
    return s;
}

IntegralSpec IntegralSpec::affine(Eigen::VectorXd a, double c, Eigen::VectorXd theta) {
    IntegralSpec s;
    s.kind = IntegrandKind::Affine;
    s.a = std::move(a);
    s.c = c;
    s.theta = std::move(theta);
    return s;
}

IntegralSpec IntegralSpec::affine_times_linear(Eigen::VectorXd a, double c, Eigen::VectorXd b, Eigen::VectorXd theta) {
    IntegralSpec s;
    s.kind = IntegrandKind::AffineTimesLinear;
    s.a = std::move(a);
    s.c = c;
    s.b = std::move(b);
    s.theta = std::move(theta);
    return s;
}

IntegralSpec IntegralSpec::quadratic(int alpha, int beta, Eigen::VectorXd theta) {
    IntegralSpec s;
    s.kind = IntegrandKind::Quadratic;
    s.alpha = alpha;
    s.beta = beta;
    s.theta = std::move(theta);
    return s;
}

double IntegralSpec::polynomial(const Eigen::VectorXd& x) const {
    switch (kind) {
        case IntegrandKind::One: return 1.0;
        case IntegrandKind::Coordinate: return x[alpha];
        case IntegrandKind::Affine: return a.dot(x) + c;
        case IntegrandKind::AffineTimesLinear: return (a.dot(x) + c) * b.dot(x);
        case IntegrandKind::Quadratic: return x[alpha] * x[beta];
    }
    return 0.0;
}

namespace {

void check_spec(const IntegralSpec& spec, int n) {
    if (spec.dim() != n) throw Error(ErrorKind::DimensionMismatch, "theta dimension differs from region");
    const bool needs_alpha = spec.kind == IntegrandKind::Coordinate || spec.kind == IntegrandKind::Quadratic;
    if (needs_alpha && (spec.alpha < 0 || spec.alpha >= n)) throw Error(ErrorKind::InvalidArgument, "alpha out of range");
    if (spec.kind == IntegrandKind::Quadratic && (spec.beta < 0 || spec.beta >= n))
        throw Error(ErrorKind::InvalidArgument, "beta out of range");
    if ((spec.kind == IntegrandKind::Affine || spec.kind == IntegrandKind::AffineTimesLinear) && spec.a.size() != n)
        throw Error(ErrorKind::DimensionMismatch, "affine coefficient dimension");
    if (spec.kind == IntegrandKind::AffineTimesLinear && spec.b.size() != n)
        throw Error(ErrorKind::DimensionMismatch, "linear factor dimension");
}

struct SimplexValue {
    double value = 0.0;
    double magnitude = 0.0;  // sum of |terms|, for the rounding bound
};

// Integrals of lambda-monomials of degree <= 2 times e^{<theta,x>} are
// divided differences with the matching nodes repeated.
SimplexValue closed_form_simplex(const Simplex& s, const IntegralSpec& spec) {
    const int k = s.simplex_dim();
    if (!(s.volume > 0.0)) throw Error(ErrorKind::DegenerateSimplex, "simplex has zero volume");
    std::vector<double> t(k + 1);
    for (int j = 0; j <= k; ++j) t[j] = spec.theta.dot(s.vertices[j]);
    const double scale = factorial(k) * s.volume;

    auto dd_with = [&](std::initializer_list<int> extra) {
        std::vector<double> nodes = t;
        for (int j : extra) nodes.push_back(t[j]);
        return exp_divided_difference(nodes);
    };

    SimplexValue out;
    switch (spec.kind) {
        case IntegrandKind::One: {
            out.value = scale * exp_divided_difference(t);
            out.magnitude = std::abs(out.value);
            return out;
        }
        case IntegrandKind::Coordinate:
        case IntegrandKind::Affine: {
            CompensatedSum sum;
            for (int j = 0; j <= k; ++j) {
                const double f = spec.kind == IntegrandKind::Affine ? spec.a.dot(s.vertices[j]) + spec.c
                                                                     : s.vertices[j][spec.alpha];
                const double term = scale * f * dd_with({j});
                sum.add(term);
                out.magnitude += std::abs(term);
            }
            out.value = sum.value();
            return out;
        }
        case IntegrandKind::AffineTimesLinear:
        case IntegrandKind::Quadratic: {
            std::vector<double> f(k + 1), g(k + 1);
            for (int j = 0; j <= k; ++j) {
                if (spec.kind == IntegrandKind::Quadratic) {
                    f[j] = s.vertices[j][spec.alpha];
                    g[j] = s.vertices[j][spec.beta];
                } else {
                    f[j] = spec.a.dot(s.vertices[j]) + spec.c;
                    g[j] = spec.b.dot(s.vertices[j]);
                }
            }
            CompensatedSum sum;
            for (int i = 0; i <= k; ++i)
                for (int j = i; j <= k; ++j) {
                    const double coeff = (i == j) ? 2.0 * f[i] * g[i] : f[i] * g[j] + f[j] * g[i];
                    if (coeff == 0.0) continue;
                    const double term = scale * coeff * dd_with({i, j});
                    sum.add(term);
                    out.magnitude += std::abs(term);
                }
            out.value = sum.value();
            return out;
        }
    }
    return out;
}

// Collapsed-coordinate product rule on the standard k-simplex: barycentric
// points and weights summing to 1/k!.
struct SimplexRule {
    std::vector<std::vector<double>> bary;
    std::vector<double> weights;
};

SimplexRule collapsed_rule(int k, int q) {
    SimplexRule rule;
    if (k == 0) {
        rule.bary.push_back({1.0});
        rule.weights.push_back(1.0);
        return rule;
    }
    const GaussRule line = gauss_legendre(q);
    std::vector<int> idx(k, 0);
    while (true) {
        std::vector<double> lambda(k + 1);
        double remaining = 1.0, w = 1.0;
        for (int i = 0; i < k; ++i) {
            const double u = line.nodes[idx[i]];
            lambda[i + 1] = remaining * u;
            w *= line.weights[idx[i]] * std::pow(1.0 - u, k - 1 - i);
            remaining *= 1.0 - u;
        }
        lambda[0] = remaining;
        rule.bary.push_back(std::move(lambda));
        rule.weights.push_back(w);
        int i = k - 1;
        while (i >= 0 && ++idx[i] == q) idx[i--] = 0;
        if (i < 0) break;
    }
    return rule;
}

double apply_rule(const SimplexRule& rule, const Simplex& s, const IntegralSpec& spec) {
    const int k = s.simplex_dim();
    CompensatedSum sum;
    Eigen::VectorXd x(s.ambient_dim());
    for (std::size_t p = 0; p < rule.weights.size(); ++p) {
        x.setZero();
        for (int j = 0; j <= k; ++j) x += rule.bary[p][j] * s.vertices[j];
        sum.add(rule.weights[p] * spec.polynomial(x) * std::exp(spec.theta.dot(x)));
    }
    return factorial(k) * s.volume * sum.value();
}

std::pair<Simplex, Simplex> bisect_longest_edge(const Simplex& s) {
    const int k = s.simplex_dim();
    int bi = 0, bj = 1;
    double best = -1.0;
    for (int i = 0; i <= k; ++i)
        for (int j = i + 1; j <= k; ++j) {
            const double len = (s.vertices[i] - s.vertices[j]).squaredNorm();
            if (len > best) {
                best = len;
                bi = i;
                bj = j;
            }
        }
    const Eigen::VectorXd mid = 0.5 * (s.vertices[bi] + s.vertices[bj]);
    Simplex a = s, b = s;
    a.vertices[bj] = mid;
    b.vertices[bi] = mid;
    a.volume = b.volume = 0.5 * s.volume;
    return {std::move(a), std::move(b)};
}

QuadratureReport adaptive_integral(std::span<const Simplex> cells, const IntegralSpec& spec,
                                   const AdaptiveOptions& options) {
    constexpr int kLowOrder = 8;
    constexpr int kHighOrder = 12;
    std::vector<SimplexRule> low, high;
    int max_k = 0;
    for (const auto& s : cells) max_k = std::max(max_k, s.simplex_dim());
    for (int k = 0; k <= max_k; ++k) {
        low.push_back(collapsed_rule(k, kLowOrder));
        high.push_back(collapsed_rule(k, kHighOrder));
    }

    struct Cell {
        Simplex simplex;
        double value;
        double error;
        std::size_t id;
    };
    auto worse = [](const Cell* a, const Cell* b) {
        if (a->error != b->error) return a->error < b->error;
        return a->id > b->id;
    };
    std::vector<std::unique_ptr<Cell>> storage;
    std::priority_queue<Cell*, std::vector<Cell*>, decltype(worse)> heap(worse);
    std::vector<bool> alive;
    CompensatedSum total, total_error;

    auto push = [&](Simplex s) {
        const int k = s.simplex_dim();
        const double hi = apply_rule(high[k], s, spec);
        const double err = k == 0 ? 0.0 : std::abs(hi - apply_rule(low[k], s, spec));
        storage.push_back(std::make_unique<Cell>(Cell{std::move(s), hi, err, storage.size()}));
        alive.push_back(true);
        total.add(hi);
        total_error.add(err);
        heap.push(storage.back().get());
    };
    for (const auto& s : cells) {
        if (!(s.volume > 0.0)) throw Error(ErrorKind::DegenerateSimplex, "simplex has zero volume");
        push(s);
    }

    std::size_t live = cells.size();
    auto target = [&] { return std::max(options.abs_tol, options.rel_tol * std::abs(total.value())); };
    while (!heap.empty() && total_error.value() > target()) {
        if (live >= options.max_simplices)
            throw Error(ErrorKind::ToleranceNotMet, "adaptive quadrature hit " + std::to_string(live) + " simplices");
        Cell* worst = heap.top();
        heap.pop();
        alive[worst->id] = false;
        total.add(-worst->value);
        total_error.add(-worst->error);
        auto [a, b] = bisect_longest_edge(worst->simplex);
        push(std::move(a));
        push(std::move(b));
        ++live;
    }

    QuadratureReport report;
    report.method = QuadratureMethod::Adaptive;
    CompensatedSum value, error;
    for (const auto& c : storage)
        if (alive[c->id]) {
            value.add(c->value);
            error.add(c->error);
        }
    report.value = value.value();
    report.abs_error_estimate = std::abs(error.value());
    report.subdivisions = live;
    return report;
}

}  // namespace

QuadratureReport poly_exp_integral(std::span<const Simplex> cells, const IntegralSpec& spec, QuadratureMethod method,
                                   const AdaptiveOptions& options) {
    if (!cells.empty()) check_spec(spec, cells.front().ambient_dim());
    if (method == QuadratureMethod::Adaptive) return adaptive_integral(cells, spec, options);

    QuadratureReport report;
    report.method = QuadratureMethod::ClosedForm;
    CompensatedSum sum;
    double magnitude = 0.0;
    for (const auto& s : cells) {
        const auto v = closed_form_simplex(s, spec);
        sum.add(v.value);
        magnitude += v.magnitude;
    }
    report.value = sum.value();
    report.abs_error_estimate = 64.0 * kEps * magnitude;
    report.subdivisions = cells.size();
    return report;
}

QuadratureReport poly_exp_integral(const Simplex& s, const IntegralSpec& spec, QuadratureMethod method,
                                   const AdaptiveOptions& options) {
    return poly_exp_integral(std::span<const Simplex>(&s, 1), spec, method, options);
}

QuadratureReport poly_exp_integral(const Polytope& p, const IntegralSpec& spec, QuadratureMethod method,
                                   const AdaptiveOptions& options) {
    return poly_exp_integral(std::span<const Simplex>(p.simplices()), spec, method, options);
}

QuadratureReport poly_exp_integral(const Chamber& chamber, const IntegralSpec& spec, QuadratureMethod method,
                                   const AdaptiveOptions& options) {
    return poly_exp_integral(std::span<const Simplex>(chamber.cells), spec, method, options);
}

ExpMoments exp_moments(std::span<const Simplex> cells, const Eigen::VectorXd& theta) {
    const int n = static_cast<int>(theta.size());
    CompensatedSum mass;
    std::vector<CompensatedSum> first(n), second(n * n);
    for (const auto& s : cells) {
        if (s.ambient_dim() != n) throw Error(ErrorKind::DimensionMismatch, "theta dimension");
        const int k = s.simplex_dim();
        const double scale = factorial(k) * s.volume;
        std::vector<double> t(k + 1);
        for (int j = 0; j <= k; ++j) t[j] = theta.dot(s.vertices[j]);
        mass.add(scale * exp_divided_difference(t));

        std::vector<double> nodes = t;
        nodes.push_back(0.0);
        Eigen::VectorXd g = Eigen::VectorXd::Zero(n);
        for (int j = 0; j <= k; ++j) {
            nodes.back() = t[j];
            g += exp_divided_difference(nodes) * s.vertices[j];
        }
        nodes = t;
        nodes.push_back(0.0);
        nodes.push_back(0.0);
        Eigen::MatrixXd h = Eigen::MatrixXd::Zero(n, n);
        for (int i = 0; i <= k; ++i)
            for (int j = i; j <= k; ++j) {
                nodes[k + 1] = t[i];
                nodes[k + 2] = t[j];
                const double dd = exp_divided_difference(nodes);
                if (i == j)
                    h += 2.0 * dd * s.vertices[i] * s.vertices[i].transpose();
                else
                    h += dd * (s.vertices[i] * s.vertices[j].transpose() + s.vertices[j] * s.vertices[i].transpose());
            }
        for (int a = 0; a < n; ++a) {
            first[a].add(scale * g[a]);
            for (int b = 0; b < n; ++b) second[a * n + b].add(scale * h(a, b));
        }
    }
    ExpMoments m;
    m.mass = mass.value();
    m.first.resize(n);
    m.second.resize(n, n);
    for (int a = 0; a < n; ++a) {
        m.first[a] = first[a].value();
        for (int b = 0; b < n; ++b) m.second(a, b) = second[a * n + b].value();
    }
    return m;
}

Eigen::VectorXd to_eigen(const RationalVector& v) {
    Eigen::VectorXd x(v.size());
    for (std::size_t i = 0; i < v.size(); ++i) x[i] = to_double(v[i]);
    return x;
}

double boundary_integral(const ChamberDecomposition& chambers, const Eigen::VectorXd& theta, QuadratureMethod method) {
    const auto& facets = chambers.parent.facets();
    CompensatedSum sum;
    for (const auto& ch : chambers.pieces) {
        const auto& piece = chambers.function.pieces()[ch.piece];
        const auto spec = IntegralSpec::affine(to_eigen(piece.a), to_double(piece.c), theta);
        for (const auto& bp : ch.boundary)
            sum.add(facets[bp.facet].measure_weight * poly_exp_integral(bp.cells, spec, method).value);
    }
    return sum.value();
}

double boundary_integral(const Polytope& p, const PLConvexFunction& u, const Eigen::VectorXd& theta,
                         QuadratureMethod method) {
    return boundary_integral(refine_by_pl(p, u), theta, method);
}

double boundary_integral(const Polytope& p, const IntegralSpec& spec, QuadratureMethod method) {
    CompensatedSum sum;
    for (const auto& f : p.facets())
        sum.add(f.measure_weight * poly_exp_integral(p.facet_simplices(f.index), spec, method).value);
    return sum.value();
}

double chamberwise_integral(const ChamberDecomposition& chambers,
                            const std::function<IntegralSpec(const AffinePiece&)>& make_spec,
                            QuadratureMethod method) {
    const double cutoff = degenerate_chamber_fraction * chambers.parent.volume();
    CompensatedSum sum;
    for (const auto& ch : chambers.pieces) {
        if (ch.volume < cutoff) continue;
        sum.add(poly_exp_integral(ch, make_spec(chambers.function.pieces()[ch.piece]), method).value);
    }
    return sum.value();
}

double divergence_interior_form(const ChamberDecomposition& chambers, const Eigen::VectorXd& theta,
                                QuadratureMethod method) {
    const int n = chambers.parent.dim();
    // <x, a> + n (<a, x> + c) + (<a, x> + c) <theta, x>
    const double linear_part = chamberwise_integral(
        chambers,
        [&](const AffinePiece& piece) {
            const Eigen::VectorXd a = to_eigen(piece.a);
            return IntegralSpec::affine((n + 1.0) * a, n * to_double(piece.c), theta);
        },
        method);
    const double theta_part = chamberwise_integral(
        chambers,
        [&](const AffinePiece& piece) {
            return IntegralSpec::affine_times_linear(to_eigen(piece.a), to_double(piece.c), theta, theta);
        },
        method);
    return linear_part + theta_part;
}

}  // namespace toricstab
