#pragma once

#include <cstdint>
#include <map>
#include <vector>

namespace cubetower {

// Full cubical chain complexes on regular grids over [0,1]^d. A cell is
// (mask, pos): mask flags the extended axes (popcount = dimension), pos runs
// to n-1 on extended axes and to n on point axes. Signs follow the Leibniz
// rule, matching the facet convention of the cube-complex module.
class GridComplex {
  public:
    GridComplex(int d, long n);

    int d() const { return d_; }
    long n() const { return n_; }
    double side() const { return 1.0 / static_cast<double>(n_); }
    double volume(int k) const;  // side^k

    long cell_count(int k) const;  // number of k-cells
    long total_cells() const { return offsets_.back(); }

    // global id <-> (mask, pos)
    long id(std::uint32_t mask, const std::vector<long>& pos) const;
    void decode(long id, std::uint32_t& mask, std::vector<long>& pos) const;
    int dim_of(long id) const;

    /// ids of all k-cells, ascending.
    std::vector<long> cells_of_dim(int k) const;

    /// Boundary faces of one cell with signs.
    void boundary_of(long id, std::vector<std::pair<long, int>>& out) const;

  private:
    int d_;
    long n_;
    std::vector<long> mask_count_;  // cells per mask
    std::vector<long> offsets_;    // prefix over masks
};

struct GridChain {
    const GridComplex* grid = nullptr;
    int dim = 0;
    std::map<long, double> entries;

    double coefficient(long id) const {
        auto it = entries.find(id);
        return it == entries.end() ? 0.0 : it->second;
    }
    void prune(double eps = 1e-12);
};

GridChain boundary(const GridChain& t);
double mass(const GridChain& t);

/// Same chain on an r-fold refinement of its grid (r = fine.n / coarse.n).
GridChain refine_chain(const GridChain& t, const GridComplex& fine);

}  // namespace cubetower
