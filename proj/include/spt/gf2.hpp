#pragma once

#include <optional>
#include <vector>

#include "spt/bitvec.hpp"

namespace spt {

// Reduced row echelon basis of a GF(2) subspace. reduce() returns the unique
// coset representative with no pivot bits set.
class Gf2Basis {
public:
    explicit Gf2Basis(std::size_t n) : n_(n) {}

    std::size_t dim() const { return rows_.size(); }
    std::size_t ambient() const { return n_; }
    const std::vector<BitVec>& rows() const { return rows_; }

    BitVec reduce(BitVec v) const;
    bool contains(const BitVec& v) const { return reduce(v).none(); }
    // Returns true if v was independent.
    bool insert(BitVec v);

private:
    std::size_t n_;
    std::vector<BitVec> rows_;
    std::vector<std::size_t> pivots_;
};

// Solves sum_j x_j * columns[j] = rhs. Precomputes elimination once.
class Gf2Solver {
public:
    Gf2Solver(const std::vector<BitVec>& columns, std::size_t rows);

    std::size_t rank() const { return basis_.size(); }
    std::optional<BitVec> solve(const BitVec& rhs) const;

private:
    std::size_t ncols_;
    std::vector<BitVec> basis_;  // reduced columns
    std::vector<BitVec> combo_;  // which original columns make each basis vector
    std::vector<std::size_t> pivots_;
};

std::size_t gf2_rank(std::vector<BitVec> rows);

// Basis of {x : rows . x = 0}; ncols = length of each row.
std::vector<BitVec> gf2_kernel(std::vector<BitVec> rows, std::size_t ncols);

}  // namespace spt
