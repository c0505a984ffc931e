#include "graded.hpp"

#include <algorithm>
#include <set>

#include "errors.hpp"

namespace lspace {

void GradedModule::check() const {
  if (labels.size() != degrees.size())
    throw InputError("graded module: labels/degrees size mismatch");
  std::set<std::string> seen;
  for (const auto& l : labels)
    if (!seen.insert(l).second) throw InputError("graded module: duplicate label '" + l + "'");
}

std::vector<std::size_t> GradedModule::degree_indices(int deg) const {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < degrees.size(); ++i)
    if (degrees[i] == deg) out.push_back(i);
  return out;
}

int GradedModule::min_degree() const {
  return degrees.empty() ? 0 : *std::min_element(degrees.begin(), degrees.end());
}

int GradedModule::max_degree() const {
  return degrees.empty() ? 0 : *std::max_element(degrees.begin(), degrees.end());
}

std::size_t GradedModule::index_of(const std::string& label) const {
  for (std::size_t i = 0; i < labels.size(); ++i)
    if (labels[i] == label) return i;
  throw InputError("graded module: unknown label '" + label + "'");
}

int koszul_sort_sign(std::vector<std::pair<std::size_t, int>>& items) {
  // bubble sort by .first, accumulating Koszul signs of adjacent swaps
  int sign = 1;
  for (std::size_t i = 0; i + 1 < items.size(); ++i)
    for (std::size_t j = 0; j + 1 < items.size() - i; ++j)
      if (items[j].first > items[j + 1].first) {
        sign *= koszul(items[j].second, items[j + 1].second);
        std::swap(items[j], items[j + 1]);
      }
  return sign;
}

}  // namespace lspace
