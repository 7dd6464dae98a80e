#pragma once

#include <string>
#include <vector>

#include "toricstab/polytope.hpp"

namespace toricstab {

/// Integer n x n matrix acting on normals (and on theta) by l -> A l.
using IntMatrix = std::vector<IntVector>;

struct CatalogEntry {
    std::string name;
    std::string description;
    Polytope polytope;
    std::vector<IntMatrix> symmetry_generators;
    /// The generators fix no nonzero vector, so the soliton theta must vanish.
    bool soliton_zero_by_symmetry = false;
};

const std::vector<CatalogEntry>& catalog();

/// Throws NotFound.
const CatalogEntry& find_entry(const std::string& name);

/// A maps the normal set of P onto itself.
bool preserves_normals(const Polytope& p, const IntMatrix& a);

/// Dimension of {v : A v = v for every generator A}.
int fixed_subspace_dim(int dim, const std::vector<IntMatrix>& generators);

}  // namespace toricstab
