#pragma once

#include <stdexcept>
#include <string>

namespace maggeo {

// Pseudo-Euclidean signature (m pluses, k minuses), eta = diag(+..+,-..-).
// Generators are 1-based: eta(a) = +1 for a <= m, -1 otherwise.
struct Signature {
  int m = 0;
  int k = 0;

  Signature() = default;
  Signature(int plus, int minus) : m(plus), k(minus) {
    if (m < 0 || k < 0 || dim() < 1 || dim() > 8)
      throw std::invalid_argument("signature: need m,k >= 0 and 1 <= m+k <= 8");
  }

  int dim() const { return m + k; }

  int metric(int a) const {
    if (a < 1 || a > dim()) throw std::out_of_range("signature: generator index");
    return a <= m ? 1 : -1;
  }

  bool operator==(const Signature &o) const { return m == o.m && k == o.k; }
  bool operator!=(const Signature &o) const { return !(*this == o); }

  std::string str() const { return "(" + std::to_string(m) + "," + std::to_string(k) + ")"; }
};

} // namespace maggeo
