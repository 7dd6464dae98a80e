#include "toricstab/polytope.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "toricstab/errors.hpp"

namespace toricstab {

struct Polytope::Impl {
    int dim = 0;
    std::vector<IntVector> normals;
    std::string label;
    bool reflexive = false;
    ConvexBody body;
    std::vector<Facet> facets;
    Rational volume_exact;
    double volume = 0.0;
    std::vector<double> facet_areas;
    double boundary_measure = 0.0;
    std::optional<Rational> boundary_measure_exact;
    std::vector<Simplex> simplices;
    std::vector<std::vector<Simplex>> facet_simplices;
};

namespace {

double factorial_d(int n) {
    double f = 1.0;
    for (int i = 2; i <= n; ++i) f *= i;
    return f;
}

Rational gram_determinant(const std::vector<RationalVector>& pts) {
    const int k = static_cast<int>(pts.size()) - 1;
    const int n = static_cast<int>(pts.front().size());
    RationalMatrix g(k, RationalVector(k));
    for (int i = 0; i < k; ++i)
        for (int j = 0; j < k; ++j) {
            Rational s = 0;
            for (int c = 0; c < n; ++c) s += (pts[i + 1][c] - pts[0][c]) * (pts[j + 1][c] - pts[0][c]);
            g[i][j] = s;
        }
    return k == 0 ? Rational(1) : determinant(std::move(g));
}

// Direction spanning the null space of an (n-1) x n matrix of rank n-1.
RationalVector null_direction(const RationalMatrix& rows, int n) {
    RationalVector y(n);
    for (int j = 0; j < n; ++j) {
        RationalMatrix minor;
        for (const auto& r : rows) {
            RationalVector m;
            for (int c = 0; c < n; ++c)
                if (c != j) m.push_back(r[c]);
            minor.push_back(std::move(m));
        }
        const Rational d = minor.empty() ? Rational(1) : determinant(std::move(minor));
        y[j] = (j % 2 == 0) ? d : Rational(-d);
    }
    return y;
}

// Bounded iff the recession cone {y : <l_i, y> <= 0} is {0}: full rank and no
// extreme ray, where extreme rays are cut out by n-1 independent normals.
bool is_bounded(const std::vector<IntVector>& normals, int n) {
    RationalMatrix all;
    for (const auto& l : normals) all.push_back(to_rational(l));
    if (rank(all) < n) return false;

    const int d = static_cast<int>(normals.size());
    std::vector<int> idx(n - 1);
    std::function<bool(int, int)> search = [&](int start, int depth) -> bool {
        if (depth == n - 1) {
            RationalMatrix rows;
            for (int i : idx) rows.push_back(all[i]);
            if (rank(rows) != n - 1) return false;
            const RationalVector y = null_direction(rows, n);
            for (int sign : {1, -1}) {
                bool inside = true;
                for (const auto& l : all)
                    if (sign * dot(l, y) > 0) {
                        inside = false;
                        break;
                    }
                if (inside) return true;
            }
            return false;
        }
        for (int i = start; i < d; ++i) {
            idx[depth] = i;
            if (search(i + 1, depth + 1)) return true;
        }
        return false;
    };
    return !search(0, 0);
}

std::int64_t floor_rational(const Rational& r) {
    auto q = numerator(r) / denominator(r);  // truncates toward zero
    if (r < 0 && Rational(q) != r) q -= 1;
    return q.convert_to<std::int64_t>();
}

std::int64_t ceil_rational(const Rational& r) { return -floor_rational(-r); }

}  // namespace

Simplex make_simplex(std::vector<Eigen::VectorXd> vertices) {
    Simplex s;
    const int k = static_cast<int>(vertices.size()) - 1;
    if (k < 0) throw Error(ErrorKind::DegenerateSimplex, "empty simplex");
    const int n = static_cast<int>(vertices.front().size());
    if (k == 0) {
        s.volume = 1.0;
    } else {
        Eigen::MatrixXd e(n, k);
        for (int j = 0; j < k; ++j) e.col(j) = vertices[j + 1] - vertices[0];
        const double det = (k == n) ? std::abs(e.determinant()) : std::sqrt(std::max(0.0, (e.transpose() * e).determinant()));
        s.volume = det / factorial_d(k);
    }
    s.vertices = std::move(vertices);
    return s;
}

Simplex make_simplex(const std::vector<RationalVector>& vertices) {
    Simplex s;
    for (const auto& v : vertices) {
        Eigen::VectorXd x(v.size());
        for (std::size_t c = 0; c < v.size(); ++c) x[c] = to_double(v[c]);
        s.vertices.push_back(std::move(x));
    }
    const int k = static_cast<int>(vertices.size()) - 1;
    if (k < 0) throw Error(ErrorKind::DegenerateSimplex, "empty simplex");
    const int n = static_cast<int>(vertices.front().size());
    if (k == 0) {
        s.volume = 1.0;
    } else if (k == n) {
        s.volume = to_double(simplex_volume(vertices));
    } else {
        s.volume = std::sqrt(to_double(gram_determinant(vertices))) / factorial_d(k);
    }
    return s;
}

Polytope build_polytope(std::vector<IntVector> normals, bool require_reflexive, std::string label) {
    auto impl = std::make_shared<Polytope::Impl>();
    if (normals.empty()) throw Error(ErrorKind::EmptyOrDegenerate, "no facet normals given");
    const int n = static_cast<int>(normals.front().size());
    if (n == 0) throw Error(ErrorKind::EmptyOrDegenerate, "normals must have dimension >= 1");
    for (std::size_t i = 0; i < normals.size(); ++i) {
        if (static_cast<int>(normals[i].size()) != n)
            throw Error(ErrorKind::EmptyOrDegenerate, "normal " + std::to_string(i) + " has the wrong dimension");
        if (gcd_of(normals[i]) != 1)
            throw Error(ErrorKind::NonPrimitiveNormal, "normal " + std::to_string(i) + " is not primitive");
    }
    {
        std::set<IntVector> seen(normals.begin(), normals.end());
        if (seen.size() != normals.size()) throw Error(ErrorKind::EmptyOrDegenerate, "repeated facet normal");
    }
    if (!is_bounded(normals, n))
        throw Error(ErrorKind::Unbounded, "normals do not positively span R^" + std::to_string(n));

    std::vector<HalfSpace> hs;
    for (const auto& l : normals) hs.push_back(HalfSpace{to_rational(l), Rational(1)});
    impl->body = ConvexBody::from_halfspaces(n, std::move(hs));
    impl->dim = n;
    impl->normals = std::move(normals);
    impl->label = std::move(label);
    const auto& body = impl->body;
    if (!body.full_dimensional()) throw Error(ErrorKind::EmptyOrDegenerate, "polytope has empty interior");

    impl->reflexive = std::all_of(body.vertices().begin(), body.vertices().end(), [](const RationalVector& v) {
        return std::all_of(v.begin(), v.end(), [](const Rational& x) { return denominator(x) == 1; });
    });
    if (require_reflexive && !impl->reflexive)
        throw Error(ErrorKind::NotReflexive, "polytope has a non-integral vertex");

    impl->volume_exact = 0;
    for (const auto& ids : body.triangulate()) {
        std::vector<RationalVector> pts;
        for (int id : ids) pts.push_back(body.vertices()[id]);
        impl->volume_exact += simplex_volume(pts);
        impl->simplices.push_back(make_simplex(pts));
    }
    impl->volume = to_double(impl->volume_exact);

    Rational exact_boundary = 0;
    bool boundary_is_rational = true;
    Rational fact = 1;
    for (int i = 2; i < n; ++i) fact *= i;
    for (int i = 0; i < static_cast<int>(impl->normals.size()); ++i) {
        const auto face = body.face_vertices(i);
        if (body.affine_dimension(face) != n - 1)
            throw Error(ErrorKind::EmptyOrDegenerate, "normal " + std::to_string(i) + " does not define a facet");
        Facet f;
        f.index = i;
        f.normal = impl->normals[i];
        f.vertex_indices = face;
        double norm2 = 0.0;
        Rational norm2_exact = 0;
        for (auto c : f.normal) {
            norm2 += static_cast<double>(c * c);
            norm2_exact += c * c;
        }
        f.measure_weight = 1.0 / std::sqrt(norm2);

        std::vector<Simplex> cells;
        double area = 0.0;
        for (const auto& ids : body.triangulate_face(face, n - 1)) {
            std::vector<RationalVector> pts;
            for (int id : ids) pts.push_back(body.vertices()[id]);
            if (auto root = exact_sqrt(gram_determinant(pts) / norm2_exact))
                exact_boundary += *root / fact;
            else
                boundary_is_rational = false;
            cells.push_back(make_simplex(pts));
            area += cells.back().volume;
        }
        impl->facet_areas.push_back(area);
        impl->boundary_measure += area * f.measure_weight;
        impl->facet_simplices.push_back(std::move(cells));
        impl->facets.push_back(std::move(f));
    }
    if (boundary_is_rational) impl->boundary_measure_exact = exact_boundary;

    Polytope p;
    p.impl_ = std::move(impl);
    return p;
}

int Polytope::dim() const { return impl_->dim; }
const std::vector<IntVector>& Polytope::normals() const { return impl_->normals; }
const std::string& Polytope::label() const { return impl_->label; }
bool Polytope::reflexive() const { return impl_->reflexive; }
const ConvexBody& Polytope::body() const { return impl_->body; }
const std::vector<RationalVector>& Polytope::vertices() const { return impl_->body.vertices(); }
const std::vector<Facet>& Polytope::facets() const { return impl_->facets; }
Rational Polytope::volume_exact() const { return impl_->volume_exact; }
double Polytope::volume() const { return impl_->volume; }
double Polytope::boundary_measure() const { return impl_->boundary_measure; }
std::optional<Rational> Polytope::boundary_measure_exact() const { return impl_->boundary_measure_exact; }
double Polytope::facet_area(int facet) const { return impl_->facet_areas.at(facet); }
const std::vector<Simplex>& Polytope::simplices() const { return impl_->simplices; }
const std::vector<Simplex>& Polytope::facet_simplices(int facet) const { return impl_->facet_simplices.at(facet); }

std::vector<std::pair<std::int64_t, std::int64_t>> Polytope::lattice_box(std::int64_t k) const {
    std::vector<std::pair<std::int64_t, std::int64_t>> box;
    for (int c = 0; c < dim(); ++c) {
        Rational lo = vertices().front()[c], hi = lo;
        for (const auto& v : vertices()) {
            lo = std::min(lo, v[c]);
            hi = std::max(hi, v[c]);
        }
        box.emplace_back(ceil_rational(lo * k), floor_rational(hi * k));
    }
    return box;
}

std::vector<Simplex> triangulate(const Polytope& p) { return p.simplices(); }

std::vector<Simplex> triangulate_facet(const Polytope& p, int facet) { return p.facet_simplices(facet); }

ChamberDecomposition refine_by_pl(const Polytope& p, const PLConvexFunction& u) {
    if (u.dim() != p.dim()) throw Error(ErrorKind::DimensionMismatch, "PL function and polytope dimensions differ");
    const int n = p.dim();
    const auto& pieces = u.pieces();
    ChamberDecomposition out{p, u, {}};

    for (int l = 0; l < static_cast<int>(pieces.size()); ++l) {
        if (std::find(pieces.begin(), pieces.begin() + l, pieces[l]) != pieces.begin() + l) continue;
        ConvexBody body = p.body();
        for (int m = 0; m < static_cast<int>(pieces.size()) && !body.empty(); ++m) {
            if (m == l) continue;
            HalfSpace h{RationalVector(n), pieces[l].c - pieces[m].c};
            for (int c = 0; c < n; ++c) h.normal[c] = pieces[m].a[c] - pieces[l].a[c];
            body = body.clipped(h);
        }
        if (body.empty() || !body.full_dimensional()) continue;

        Chamber ch;
        ch.piece = l;
        ch.volume_exact = 0;
        for (const auto& ids : body.triangulate()) {
            std::vector<RationalVector> pts;
            for (int id : ids) pts.push_back(body.vertices()[id]);
            ch.volume_exact += simplex_volume(pts);
            ch.cells.push_back(make_simplex(pts));
        }
        ch.volume = to_double(ch.volume_exact);
        for (int i = 0; i < static_cast<int>(p.facets().size()); ++i) {
            const auto face = body.face_vertices(i);
            if (body.affine_dimension(face) != n - 1) continue;
            BoundaryPiece bp;
            bp.facet = i;
            for (const auto& ids : body.triangulate_face(face, n - 1)) {
                std::vector<RationalVector> pts;
                for (int id : ids) pts.push_back(body.vertices()[id]);
                bp.cells.push_back(make_simplex(pts));
            }
            ch.boundary.push_back(std::move(bp));
        }
        ch.body = std::move(body);
        out.pieces.push_back(std::move(ch));
    }
    return out;
}

void for_each_lattice_point_in_slab(const Polytope& p, std::int64_t k, std::int64_t x0,
                                    const std::function<void(const IntVector&)>& fn) {
    const int n = p.dim();
    const auto box = p.lattice_box(k);
    if (x0 < box[0].first || x0 > box[0].second) return;
    IntVector point(n, 0);
    point[0] = x0;
    std::function<void(int)> rec = [&](int c) {
        if (c == n) {
            for (const auto& l : p.normals()) {
                std::int64_t s = 0;
                for (int j = 0; j < n; ++j) s += l[j] * point[j];
                if (s > k) return;
            }
            fn(point);
            return;
        }
        for (std::int64_t x = box[c].first; x <= box[c].second; ++x) {
            point[c] = x;
            rec(c + 1);
        }
    };
    rec(1);
}

std::vector<IntVector> lattice_points(const Polytope& p, std::int64_t k, std::size_t capacity) {
    if (k < 1) throw Error(ErrorKind::InvalidArgument, "dilation k must be >= 1");
    std::vector<IntVector> pts;
    const auto box = p.lattice_box(k);
    for (std::int64_t x0 = box[0].first; x0 <= box[0].second; ++x0) {
        for_each_lattice_point_in_slab(p, k, x0, [&](const IntVector& v) {
            if (pts.size() >= capacity)
                throw Error(ErrorKind::CapacityExceeded,
                            "more than " + std::to_string(capacity) + " lattice points in " + std::to_string(k) + "P");
            pts.push_back(v);
        });
    }
    return pts;
}

}  // namespace toricstab
