#include "spt/gf2.hpp"

#include <stdexcept>

namespace spt {

BitVec Gf2Basis::reduce(BitVec v) const {
    for (std::size_t r = 0; r < rows_.size(); ++r)
        if (v.test(pivots_[r])) v ^= rows_[r];
    return v;
}

bool Gf2Basis::insert(BitVec v) {
    if (v.size() != n_) throw std::invalid_argument("Gf2Basis: length mismatch");
    v = reduce(std::move(v));
    if (v.none()) return false;
    std::size_t p = v.first();
    for (auto& r : rows_)
        if (r.test(p)) r ^= v;
    rows_.push_back(std::move(v));
    pivots_.push_back(p);
    return true;
}

Gf2Solver::Gf2Solver(const std::vector<BitVec>& columns, std::size_t rows) : ncols_(columns.size()) {
    for (std::size_t j = 0; j < columns.size(); ++j) {
        if (columns[j].size() != rows) throw std::invalid_argument("Gf2Solver: column length mismatch");
        BitVec v = columns[j];
        BitVec c(ncols_);
        c.set(j);
        for (std::size_t r = 0; r < basis_.size(); ++r) {
            if (v.test(pivots_[r])) {
                v ^= basis_[r];
                c ^= combo_[r];
            }
        }
        if (v.none()) continue;
        std::size_t p = v.first();
        basis_.push_back(std::move(v));
        combo_.push_back(std::move(c));
        pivots_.push_back(p);
    }
}

std::optional<BitVec> Gf2Solver::solve(const BitVec& rhs) const {
    BitVec v = rhs;
    BitVec x(ncols_);
    // Basis is only forward reduced, so walk in insertion order.
    for (std::size_t r = 0; r < basis_.size(); ++r) {
        if (v.test(pivots_[r])) {
            v ^= basis_[r];
            x ^= combo_[r];
        }
    }
    if (v.any()) return std::nullopt;
    return x;
}

std::size_t gf2_rank(std::vector<BitVec> rows) {
    std::size_t rank = 0;
    if (rows.empty()) return 0;
    std::size_t n = rows[0].size();
    for (std::size_t col = 0; col < n && rank < rows.size(); ++col) {
        std::size_t piv = rank;
        while (piv < rows.size() && !rows[piv].test(col)) ++piv;
        if (piv == rows.size()) continue;
        std::swap(rows[rank], rows[piv]);
        for (std::size_t r = rank + 1; r < rows.size(); ++r)
            if (rows[r].test(col)) rows[r] ^= rows[rank];
        ++rank;
    }
    return rank;
}

std::vector<BitVec> gf2_kernel(std::vector<BitVec> rows, std::size_t ncols) {
    std::vector<std::size_t> pivot_col;
    std::size_t rank = 0;
    for (std::size_t col = 0; col < ncols && rank < rows.size(); ++col) {
        std::size_t piv = rank;
        while (piv < rows.size() && !rows[piv].test(col)) ++piv;
        if (piv == rows.size()) continue;
        std::swap(rows[rank], rows[piv]);
        for (std::size_t r = 0; r < rows.size(); ++r)
            if (r != rank && rows[r].test(col)) rows[r] ^= rows[rank];
        pivot_col.push_back(col);
        ++rank;
    }
    std::vector<char> is_pivot(ncols, 0);
    for (auto c : pivot_col) is_pivot[c] = 1;

    std::vector<BitVec> basis;
    for (std::size_t f = 0; f < ncols; ++f) {
        if (is_pivot[f]) continue;
        BitVec v(ncols);
        v.set(f);
        for (std::size_t r = 0; r < rank; ++r)
            if (rows[r].test(f)) v.set(pivot_col[r]);
        basis.push_back(std::move(v));
    }
    return basis;
}

}  // namespace spt
