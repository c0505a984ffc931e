#pragma once

#include <cstddef>
#include <utility>
#include <vector>

#include "rational.hpp"

namespace lspace {

// Sparse vector: (index, coefficient) pairs, sorted by index, no zero entries.
using SparseVec = std::vector<std::pair<std::size_t, Rat>>;

void sparse_add(SparseVec& acc, const SparseVec& v, const Rat& scale);
void sparse_add_term(SparseVec& acc, std::size_t idx, const Rat& coeff);
QVec sparse_to_dense(const SparseVec& v, std::size_t n);
SparseVec dense_to_sparse(const QVec& v);

}  // namespace lspace
