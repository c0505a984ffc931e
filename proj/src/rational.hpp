#pragma once

#include <gmpxx.h>
#include <string>
#include <vector>

namespace lspace {

// Exact arbitrary-precision rational scalar. All arithmetic in the library
// is over Q; there is no floating point anywhere.
using Rat = mpq_class;

// Parses "p/q" or "p" (decimal integers, optional sign). Throws
// std::invalid_argument on malformed input or zero denominator.
Rat parse_rational(const std::string& s);

// Canonical form "p/q", or "p" when the denominator is 1.
std::string format_rational(const Rat& r);

inline bool is_zero(const Rat& r) { return sgn(r) == 0; }

// n! as an exact rational.
Rat factorial(unsigned n);

using QVec = std::vector<Rat>;

QVec zero_vec(std::size_t n);
bool vec_is_zero(const QVec& v);
void vec_axpy(QVec& y, const Rat& a, const QVec& x);  // y += a*x

}  // namespace lspace
