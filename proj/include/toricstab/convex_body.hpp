#pragma once

#include <vector>

#include "toricstab/rational.hpp"

namespace toricstab {

/// Closed half-space {x : normal . x <= offset}.
struct HalfSpace {
    RationalVector normal;
    Rational offset;
};

/// Bounded convex polytope in exact rational arithmetic, carried as its
/// half-spaces together with its vertex list and vertex/half-space incidence.
///
/// Vertices are kept in lexicographic order. A vertex's incidence list holds
/// every half-space that is tight at it, which is what the clipping and face
/// routines rely on.
class ConvexBody {
public:
    ConvexBody() = default;

    /// Vertex enumeration over all dim-subsets of the half-spaces. The caller
    /// must guarantee boundedness.
    static ConvexBody from_halfspaces(int dim, std::vector<HalfSpace> halfspaces);

    /// Intersection with one more half-space, by clipping the vertex list: kept
    /// vertices plus one new vertex on every edge crossing the hyperplane.
    ConvexBody clipped(const HalfSpace& h) const;

    int dim() const { return dim_; }
    bool empty() const { return vertices_.empty(); }
    /// Affine dimension of the vertex set (-1 when empty).
    int affine_dimension() const;
    bool full_dimensional() const { return affine_dimension() == dim_; }

    const std::vector<HalfSpace>& halfspaces() const { return halfspaces_; }
    const std::vector<RationalVector>& vertices() const { return vertices_; }
    const std::vector<int>& tight_set(int vertex) const { return incidence_[vertex]; }

    /// Indices of the vertices lying on the hyperplane of half-space `h`.
    std::vector<int> face_vertices(int h) const;
    int affine_dimension(const std::vector<int>& vertex_ids) const;

    /// Pulling triangulation of the face spanned by `face` (vertex ids, sorted)
    /// of affine dimension `face_dim`. Each simplex is face_dim+1 vertex ids.
    std::vector<std::vector<int>> triangulate_face(const std::vector<int>& face, int face_dim) const;
    std::vector<std::vector<int>> triangulate() const;

    /// Exact Lebesgue volume (full-dimensional bodies; 0 otherwise).
    Rational volume() const;

private:
    int dim_ = 0;
    std::vector<HalfSpace> halfspaces_;
    std::vector<RationalVector> vertices_;
    std::vector<std::vector<int>> incidence_;

    void canonicalize();
    int rank_of_normals(const std::vector<int>& ids) const;
};

/// |det(v1-v0, ..., vn-v0)| / n! for n+1 points in Q^n.
Rational simplex_volume(const std::vector<RationalVector>& points);

}  // namespace toricstab
