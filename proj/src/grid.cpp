#include "cubetower/grid.hpp"

#include <bit>
#include <cmath>
#include <stdexcept>

namespace cubetower {

GridComplex::GridComplex(int d, long n) : d_(d), n_(n) {
    if (d < 1 || d > 20) throw std::invalid_argument("grid dimension out of range");
    if (n < 1) throw std::invalid_argument("grid resolution must be >= 1");
    const std::uint32_t masks = 1u << d;
    mask_count_.resize(masks);
    offsets_.resize(masks + 1, 0);
    for (std::uint32_t m = 0; m < masks; ++m) {
        long c = 1;
        for (int i = 0; i < d; ++i) c *= ((m >> i) & 1u) ? n : (n + 1);
        mask_count_[m] = c;
        offsets_[m + 1] = offsets_[m] + c;
    }
}

double GridComplex::volume(int k) const { return std::pow(side(), k); }

long GridComplex::cell_count(int k) const {
    long total = 0;
    for (std::uint32_t m = 0; m < mask_count_.size(); ++m)
        if (std::popcount(m) == k) total += mask_count_[m];
    return total;
}

long GridComplex::id(std::uint32_t mask, const std::vector<long>& pos) const {
    long lin = 0;
    for (int i = 0; i < d_; ++i) {
        long extent = ((mask >> i) & 1u) ? n_ : (n_ + 1);
        lin = lin * extent + pos[i];
    }
    return offsets_[mask] + lin;
}

void GridComplex::decode(long id, std::uint32_t& mask, std::vector<long>& pos) const {
    mask = 0;
    while (offsets_[mask + 1] <= id) ++mask;
    long lin = id - offsets_[mask];
    pos.assign(d_, 0);
    for (int i = d_ - 1; i >= 0; --i) {
        long extent = ((mask >> i) & 1u) ? n_ : (n_ + 1);
        pos[i] = lin % extent;
        lin /= extent;
    }
}

int GridComplex::dim_of(long id) const {
    std::uint32_t mask = 0;
    while (offsets_[mask + 1] <= id) ++mask;
    return std::popcount(mask);
}

std::vector<long> GridComplex::cells_of_dim(int k) const {
    std::vector<long> out;
    for (std::uint32_t m = 0; m < mask_count_.size(); ++m) {
        if (std::popcount(m) != k) continue;
        for (long i = 0; i < mask_count_[m]; ++i) out.push_back(offsets_[m] + i);
    }
    return out;
}

void GridComplex::boundary_of(long cell, std::vector<std::pair<long, int>>& out) const {
    out.clear();
    std::uint32_t mask;
    std::vector<long> pos;
    decode(cell, mask, pos);
    int j = 0;  // rank of the axis within the mask
    for (int axis = 0; axis < d_; ++axis) {
        if (!((mask >> axis) & 1u)) continue;
        int sign = (j % 2 == 0) ? 1 : -1;
        std::uint32_t fmask = mask & ~(1u << axis);
        std::vector<long> fpos = pos;
        out.emplace_back(id(fmask, fpos), -sign);  // low face
        fpos[axis] += 1;
        out.emplace_back(id(fmask, fpos), sign);  // high face
        ++j;
    }
}

void GridChain::prune(double eps) {
    for (auto it = entries.begin(); it != entries.end();)
        it = std::abs(it->second) <= eps ? entries.erase(it) : std::next(it);
}

GridChain boundary(const GridChain& t) {
    GridChain out;
    out.grid = t.grid;
    out.dim = t.dim - 1;
    if (t.dim < 1) throw std::invalid_argument("boundary of a 0-chain");
    std::vector<std::pair<long, int>> faces;
    for (const auto& [id, coef] : t.entries) {
        t.grid->boundary_of(id, faces);
        for (auto [fid, sign] : faces) out.entries[fid] += coef * sign;
    }
    out.prune();
    return out;
}

double mass(const GridChain& t) {
    double total = 0.0;
    double vol = t.grid->volume(t.dim);
    for (const auto& [id, coef] : t.entries) total += std::abs(coef) * vol;
    return total;
}

GridChain refine_chain(const GridChain& t, const GridComplex& fine) {
    const GridComplex& coarse = *t.grid;
    if (fine.n() % coarse.n() != 0) throw std::invalid_argument("refinement ratio must be integral");
    long r = fine.n() / coarse.n();
    GridChain out;
    out.grid = &fine;
    out.dim = t.dim;
    const int d = coarse.d();
    std::uint32_t mask;
    std::vector<long> pos, fpos(d);
    for (const auto& [id, coef] : t.entries) {
        coarse.decode(id, mask, pos);
        // extended axes split into r, point axes scale
        std::vector<int> ext;
        for (int i = 0; i < d; ++i)
            if ((mask >> i) & 1u) ext.push_back(i);
        std::vector<long> off(ext.size(), 0);
        while (true) {
            for (int i = 0; i < d; ++i) fpos[i] = pos[i] * r;
            for (std::size_t e = 0; e < ext.size(); ++e) fpos[ext[e]] += off[e];
            out.entries[fine.id(mask, fpos)] += coef;
            int i = static_cast<int>(ext.size()) - 1;
            for (; i >= 0; --i) {
                if (++off[i] < r) break;
                off[i] = 0;
            }
            if (i < 0) break;
        }
    }
    return out;
}

}  // namespace cubetower
