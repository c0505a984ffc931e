#pragma once

#include <map>
#include <string>
#include <vector>

#include "qmatrix.hpp"
#include "rational.hpp"

namespace lspace {

// Finite graded Q-module given by an ordered basis with integer degrees.
struct GradedModule {
  std::vector<std::string> labels;
  std::vector<int> degrees;

  std::size_t dim() const { return labels.size(); }
  void check() const;  // unique labels, matching sizes

  // Indices of basis vectors of a given degree.
  std::vector<std::size_t> degree_indices(int deg) const;
  int min_degree() const;
  int max_degree() const;
  std::size_t index_of(const std::string& label) const;  // throws InputError
};

// Koszul sign accumulated by moving an element of degree a past one of degree b.
inline int koszul(int a, int b) { return ((a % 2) && (b % 2)) ? -1 : 1; }

// Sign of sorting `degs` (paired with distinct keys already in target order is
// the caller's business): given a permutation applied step by step, returns
// the Koszul sign of bubble-sorting `items` by `key` ascending, where swapping
// adjacent items of degrees a,b contributes koszul(a,b).
int koszul_sort_sign(std::vector<std::pair<std::size_t, int>>& items);

}  // namespace lspace
