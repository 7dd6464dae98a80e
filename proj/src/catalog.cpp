#include "toricstab/catalog.hpp"

#include <algorithm>

#include "toricstab/errors.hpp"

namespace toricstab {

namespace {

CatalogEntry make_entry(std::string name, std::string description, std::vector<IntVector> normals,
                        std::vector<IntMatrix> generators, bool zero_by_symmetry) {
    Polytope p = build_polytope(std::move(normals), true, name);
    return CatalogEntry{std::move(name), std::move(description), std::move(p), std::move(generators),
                        zero_by_symmetry};
}

std::vector<CatalogEntry> build_catalog() {
    std::vector<CatalogEntry> c;
    c.push_back(make_entry("CP1", "segment [-1, 1]", {{1}, {-1}}, {{{-1}}}, true));
    c.push_back(make_entry("CP2", "triangle", {{1, 0}, {0, 1}, {-1, -1}},
                           {{{0, 1}, {1, 0}}, {{0, -1}, {1, -1}}}, true));
    c.push_back(make_entry("CP1xCP1", "square", {{1, 0}, {-1, 0}, {0, 1}, {0, -1}},
                           {{{-1, 0}, {0, 1}}, {{0, 1}, {1, 0}}}, true));
    c.push_back(make_entry("Bl1CP2", "CP2 blown up at one point", {{1, 0}, {0, 1}, {-1, -1}, {1, 1}},
                           {{{0, 1}, {1, 0}}}, false));
    c.push_back(make_entry("Bl2CP2", "CP2 blown up at two points", {{1, 0}, {0, 1}, {-1, -1}, {1, 1}, {-1, 0}},
                           {{{-1, 0}, {-1, 1}}}, false));
    c.push_back(make_entry("Bl3CP2", "CP2 blown up at three points (hexagon)",
                           {{1, 0}, {-1, 0}, {0, 1}, {0, -1}, {1, 1}, {-1, -1}},
                           {{{0, 1}, {1, 0}}, {{0, -1}, {1, -1}}, {{-1, 0}, {0, -1}}}, true));
    c.push_back(make_entry("CP3", "tetrahedron", {{1, 0, 0}, {0, 1, 0}, {0, 0, 1}, {-1, -1, -1}},
                           {{{0, 1, 0}, {1, 0, 0}, {0, 0, 1}}, {{0, 0, -1}, {1, 0, -1}, {0, 1, -1}}}, true));
    return c;
}

}  // namespace

const std::vector<CatalogEntry>& catalog() {
    static const std::vector<CatalogEntry> entries = build_catalog();
    return entries;
}

const CatalogEntry& find_entry(const std::string& name) {
    for (const auto& e : catalog())
        if (e.name == name) return e;
    throw Error(ErrorKind::NotFound, "no catalog entry named '" + name + "'");
}

bool preserves_normals(const Polytope& p, const IntMatrix& a) {
    const int n = p.dim();
    if (static_cast<int>(a.size()) != n) return false;
    auto sorted = p.normals();
    std::sort(sorted.begin(), sorted.end());
    std::vector<IntVector> image;
    for (const auto& l : p.normals()) {
        IntVector m(n, 0);
        for (int i = 0; i < n; ++i) {
            if (static_cast<int>(a[i].size()) != n) return false;
            for (int j = 0; j < n; ++j) m[i] += a[i][j] * l[j];
        }
        image.push_back(std::move(m));
    }
    std::sort(image.begin(), image.end());
    return image == sorted;
}

int fixed_subspace_dim(int dim, const std::vector<IntMatrix>& generators) {
    RationalMatrix stacked;
    for (const auto& a : generators)
        for (int i = 0; i < dim; ++i) {
            RationalVector row(dim);
            for (int j = 0; j < dim; ++j) row[j] = Rational(a[i][j] - (i == j ? 1 : 0));
            stacked.push_back(std::move(row));
        }
    return stacked.empty() ? dim : dim - rank(std::move(stacked));
}

}  // namespace toricstab
