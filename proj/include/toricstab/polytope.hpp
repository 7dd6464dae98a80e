#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "toricstab/convex_body.hpp"
#include "toricstab/pl_function.hpp"
#include "toricstab/rational.hpp"

namespace toricstab {

/// Floating-point simplex used at integration time. `vertices` holds k+1
/// points of R^n spanning a k-flat; `volume` is its k-dimensional Lebesgue
/// measure (1 for a single point).
struct Simplex {
    std::vector<Eigen::VectorXd> vertices;
    double volume = 0.0;

    int simplex_dim() const { return static_cast<int>(vertices.size()) - 1; }
    int ambient_dim() const { return vertices.empty() ? 0 : static_cast<int>(vertices.front().size()); }
};

/// Builds a Simplex and computes its k-volume sqrt(det Gram)/k!.
Simplex make_simplex(std::vector<Eigen::VectorXd> vertices);
Simplex make_simplex(const std::vector<RationalVector>& vertices);

struct Facet {
    int index = 0;
    IntVector normal;
    std::vector<int> vertex_indices;
    /// Density of the boundary measure with respect to Lebesgue measure on the
    /// facet: <n, x> = 1/|l_i| on {<l_i, x> = 1}.
    double measure_weight = 0.0;
};

/// Reflexive lattice polytope {x : <x, l_i> <= 1 for all i}, immutable.
/// Copies share the underlying data.
class Polytope {
public:
    int dim() const;
    const std::vector<IntVector>& normals() const;
    const std::string& label() const;
    /// True when all vertices are lattice points.
    bool reflexive() const;

    const ConvexBody& body() const;
    const std::vector<RationalVector>& vertices() const;
    const std::vector<Facet>& facets() const;

    Rational volume_exact() const;
    double volume() const;
    /// Sum over facets of Lebesgue facet area times 1/|l_i|.
    double boundary_measure() const;
    /// Same quantity, when every facet contributes a rational amount.
    std::optional<Rational> boundary_measure_exact() const;
    double facet_area(int facet) const;

    const std::vector<Simplex>& simplices() const;
    const std::vector<Simplex>& facet_simplices(int facet) const;

    /// Integer bounding box of kP, per coordinate [lo, hi].
    std::vector<std::pair<std::int64_t, std::int64_t>> lattice_box(std::int64_t k) const;

    struct Impl;

private:
    std::shared_ptr<const Impl> impl_;
    friend Polytope build_polytope(std::vector<IntVector>, bool, std::string);
};

/// Validates the normals and computes vertices, facets and triangulations.
/// Errors: Unbounded, EmptyOrDegenerate, NonPrimitiveNormal, NotReflexive.
Polytope build_polytope(std::vector<IntVector> normals, bool require_reflexive = true, std::string label = {});

std::vector<Simplex> triangulate(const Polytope& p);
std::vector<Simplex> triangulate_facet(const Polytope& p, int facet);

/// One linearity region of a PL function inside P.
struct BoundaryPiece {
    int facet = 0;
    std::vector<Simplex> cells;
};

struct Chamber {
    int piece = 0;
    ConvexBody body;
    Rational volume_exact;
    double volume = 0.0;
    std::vector<Simplex> cells;
    std::vector<BoundaryPiece> boundary;
};

struct ChamberDecomposition {
    Polytope parent;
    PLConvexFunction function;
    std::vector<Chamber> pieces;
};

/// Chamber of piece l is P intersected with {<a^m - a^l, x> <= c^l - c^m for all m}.
/// Lower-dimensional chambers and exact duplicate pieces are dropped.
ChamberDecomposition refine_by_pl(const Polytope& p, const PLConvexFunction& u);

inline constexpr std::size_t default_lattice_capacity = 100'000'000;

/// Lattice points of kP in lexicographic order. Throws CapacityExceeded.
std::vector<IntVector> lattice_points(const Polytope& p, std::int64_t k,
                                      std::size_t capacity = default_lattice_capacity);

/// Visits the lattice points of kP whose first coordinate equals x0, in
/// lexicographic order.
void for_each_lattice_point_in_slab(const Polytope& p, std::int64_t k, std::int64_t x0,
                                    const std::function<void(const IntVector&)>& fn);

}  // namespace toricstab
