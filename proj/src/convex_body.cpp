#include "toricstab/convex_body.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <set>

#include "toricstab/errors.hpp"

namespace toricstab {

namespace {

// Calls fn(indices) for every k-subset of {0..m-1} in lexicographic order.
template <class Fn>
void for_each_subset(int m, int k, Fn&& fn) {
    if (k > m) return;
    std::vector<int> idx(k);
    std::iota(idx.begin(), idx.end(), 0);
    while (true) {
        fn(idx);
        int i = k - 1;
        while (i >= 0 && idx[i] == m - k + i) --i;
        if (i < 0) return;
        ++idx[i];
        for (int j = i + 1; j < k; ++j) idx[j] = idx[j - 1] + 1;
    }
}

Rational factorial(int n) {
    Rational f = 1;
    for (int i = 2; i <= n; ++i) f *= i;
    return f;
}

}  // namespace

ConvexBody ConvexBody::from_halfspaces(int dim, std::vector<HalfSpace> halfspaces) {
    ConvexBody body;
    body.dim_ = dim;
    body.halfspaces_ = std::move(halfspaces);
    const int m = static_cast<int>(body.halfspaces_.size());

    std::set<RationalVector> found;
    for_each_subset(m, dim, [&](const std::vector<int>& ids) {
        RationalMatrix a;
        RationalVector b;
        for (int id : ids) {
            a.push_back(body.halfspaces_[id].normal);
            b.push_back(body.halfspaces_[id].offset);
        }
        auto x = solve(std::move(a), std::move(b));
        if (!x) return;
        for (const auto& h : body.halfspaces_)
            if (dot(h.normal, *x) > h.offset) return;
        found.insert(std::move(*x));
    });

    for (const auto& v : found) {
        std::vector<int> tight;
        for (int h = 0; h < m; ++h)
            if (dot(body.halfspaces_[h].normal, v) == body.halfspaces_[h].offset) tight.push_back(h);
        body.vertices_.push_back(v);
        body.incidence_.push_back(std::move(tight));
    }
    return body;
}

ConvexBody ConvexBody::clipped(const HalfSpace& h) const {
    ConvexBody out;
    out.dim_ = dim_;
    out.halfspaces_ = halfspaces_;
    out.halfspaces_.push_back(h);
    const int new_id = static_cast<int>(halfspaces_.size());

    const std::size_t nv = vertices_.size();
    std::vector<Rational> slack(nv);
    for (std::size_t i = 0; i < nv; ++i) slack[i] = dot(h.normal, vertices_[i]) - h.offset;

    for (std::size_t i = 0; i < nv; ++i) {
        if (slack[i] > 0) continue;
        out.vertices_.push_back(vertices_[i]);
        auto tight = incidence_[i];
        if (slack[i] == 0) tight.push_back(new_id);
        out.incidence_.push_back(std::move(tight));
    }

    for (std::size_t i = 0; i < nv; ++i) {
        if (slack[i] >= 0) continue;
        for (std::size_t j = 0; j < nv; ++j) {
            if (slack[j] <= 0) continue;
            std::vector<int> common;
            std::set_intersection(incidence_[i].begin(), incidence_[i].end(), incidence_[j].begin(),
                                  incidence_[j].end(), std::back_inserter(common));
            if (rank_of_normals(common) != dim_ - 1) continue;
            const Rational t = slack[i] / (slack[i] - slack[j]);
            RationalVector p(dim_);
            for (int c = 0; c < dim_; ++c) p[c] = vertices_[i][c] + t * (vertices_[j][c] - vertices_[i][c]);
            common.push_back(new_id);
            out.vertices_.push_back(std::move(p));
            out.incidence_.push_back(std::move(common));
        }
    }
    out.canonicalize();
    return out;
}

void ConvexBody::canonicalize() {
    std::vector<std::size_t> order(vertices_.size());
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return vertices_[a] < vertices_[b]; });
    std::vector<RationalVector> v;
    std::vector<std::vector<int>> inc;
    for (auto i : order) {
        v.push_back(std::move(vertices_[i]));
        std::sort(incidence_[i].begin(), incidence_[i].end());
        inc.push_back(std::move(incidence_[i]));
    }
    vertices_ = std::move(v);
    incidence_ = std::move(inc);
}

int ConvexBody::rank_of_normals(const std::vector<int>& ids) const {
    RationalMatrix rows;
    rows.reserve(ids.size());
    for (int id : ids) rows.push_back(halfspaces_[id].normal);
    return rank(std::move(rows));
}

int ConvexBody::affine_dimension(const std::vector<int>& ids) const {
    if (ids.empty()) return -1;
    RationalMatrix rows;
    const auto& base = vertices_[ids.front()];
    for (std::size_t k = 1; k < ids.size(); ++k) {
        RationalVector d(dim_);
        for (int c = 0; c < dim_; ++c) d[c] = vertices_[ids[k]][c] - base[c];
        rows.push_back(std::move(d));
    }
    return rank(std::move(rows));
}

int ConvexBody::affine_dimension() const {
    std::vector<int> all(vertices_.size());
    std::iota(all.begin(), all.end(), 0);
    return affine_dimension(all);
}

std::vector<int> ConvexBody::face_vertices(int h) const {
    std::vector<int> ids;
    for (std::size_t v = 0; v < vertices_.size(); ++v)
        if (std::binary_search(incidence_[v].begin(), incidence_[v].end(), h)) ids.push_back(static_cast<int>(v));
    return ids;
}

std::vector<std::vector<int>> ConvexBody::triangulate_face(const std::vector<int>& face, int face_dim) const {
    if (face.empty()) return {};
    if (face_dim == 0) return {{face.front()}};
    if (static_cast<int>(face.size()) == face_dim + 1) return {face};

    // Cone from the first vertex over every sub-facet that misses it.
    const int apex = face.front();
    std::set<std::vector<int>> subfacets;
    for (int h = 0; h < static_cast<int>(halfspaces_.size()); ++h) {
        std::vector<int> sub;
        for (int v : face)
            if (std::binary_search(incidence_[v].begin(), incidence_[v].end(), h)) sub.push_back(v);
        if (sub.size() == face.size() || static_cast<int>(sub.size()) < face_dim) continue;
        if (std::binary_search(sub.begin(), sub.end(), apex)) continue;
        if (affine_dimension(sub) != face_dim - 1) continue;
        subfacets.insert(std::move(sub));
    }

    std::vector<std::vector<int>> simplices;
    for (const auto& sub : subfacets) {
        for (auto s : triangulate_face(sub, face_dim - 1)) {
            s.insert(s.begin(), apex);
            simplices.push_back(std::move(s));
        }
    }
    return simplices;
}

std::vector<std::vector<int>> ConvexBody::triangulate() const {
    std::vector<int> all(vertices_.size());
    std::iota(all.begin(), all.end(), 0);
    return triangulate_face(all, affine_dimension(all));
}

Rational ConvexBody::volume() const {
    if (!full_dimensional()) return 0;
    Rational total = 0;
    for (const auto& s : triangulate()) {
        std::vector<RationalVector> pts;
        for (int id : s) pts.push_back(vertices_[id]);
        total += simplex_volume(pts);
    }
    return total;
}

Rational simplex_volume(const std::vector<RationalVector>& points) {
    const int n = static_cast<int>(points.size()) - 1;
    if (n <= 0) throw Error(ErrorKind::DegenerateSimplex, "simplex needs at least two points");
    RationalMatrix m(n, RationalVector(n));
    for (int i = 0; i < n; ++i)
        for (int c = 0; c < n; ++c) m[i][c] = points[i + 1][c] - points[0][c];
    Rational det = determinant(std::move(m));
    if (det < 0) det = -det;
    return det / factorial(n);
}

}  // namespace toricstab
