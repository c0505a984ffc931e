#include "rational.hpp"

#include <cctype>
#include <stdexcept>

namespace lspace {

Rat parse_rational(const std::string& s) {
  if (s.empty()) throw std::invalid_argument("empty rational literal");
  std::size_t i = 0;
  auto check_int = [&](const std::string& part) {
    if (part.empty()) throw std::invalid_argument("bad rational literal: " + s);
    std::size_t j = 0;
    if (part[j] == '+' || part[j] == '-') ++j;
    if (j == part.size()) throw std::invalid_argument("bad rational literal: " + s);
    for (; j < part.size(); ++j)
      if (!std::isdigit(static_cast<unsigned char>(part[j])))
        throw std::invalid_argument("bad rational literal: " + s);
  };
  std::size_t slash = s.find('/');
  if (slash == std::string::npos) {
    check_int(s);
    return Rat(s);
  }
  std::string num = s.substr(0, slash), den = s.substr(slash + 1);
  check_int(num);
  check_int(den);
  Rat d(den);
  if (sgn(d) == 0) throw std::invalid_argument("zero denominator: " + s);
  Rat r(num + "/" + den);
  r.canonicalize();
  (void)i;
  return r;
}

std::string format_rational(const Rat& r) {
  if (r.get_den() == 1) return r.get_num().get_str();
  return r.get_num().get_str() + "/" + r.get_den().get_str();
}

Rat factorial(unsigned n) {
  Rat r = 1;
  for (unsigned k = 2; k <= n; ++k) r *= k;
  return r;
}

QVec zero_vec(std::size_t n) { return QVec(n, Rat(0)); }

bool vec_is_zero(const QVec& v) {
  for (const auto& x : v)
    if (!is_zero(x)) return false;
  return true;
}

void vec_axpy(QVec& y, const Rat& a, const QVec& x) {
  for (std::size_t i = 0; i < y.size(); ++i) y[i] += a * x[i];
}

}  // namespace lspace
