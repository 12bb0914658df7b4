#pragma once

#include <bit>
#include <cmath>
#include <complex>
#include <map>
#include <stdexcept>
#include <vector>

#include "maggeo/linalg.hpp"
#include "maggeo/signature.hpp"

namespace maggeo {

// Sign from reordering the concatenation of two index-sorted blades into
// index-sorted form: counts, for each generator in a, the generators in b
// it has to move past.
inline int blade_reorder_sign(unsigned a, unsigned b) {
  int swaps = 0;
  a >>= 1;
  while (a != 0) {
    swaps += std::popcount(a & b);
    a >>= 1;
  }
  return (swaps & 1) ? -1 : 1;
}

// Element of Cl(m,k) or its complexification, stored blade -> coefficient.
// Blade masks index subsets of {1..n}; bit (a-1) marks generator v^a.
// Coefficients that are exactly zero are dropped, so integer inputs keep
// the structure-constant arithmetic exact.
class Multivector {
public:
  Multivector() = default;
  explicit Multivector(Signature sig) : sig_(sig) {}

  static Multivector unit(Signature sig) { return blade(sig, 0u, 1.0); }

  static Multivector blade(Signature sig, unsigned mask, cplx c) {
    if (mask >= (1u << sig.dim())) throw std::invalid_argument("multivector: blade mask out of range");
    Multivector m(sig);
    if (c != 0.0) m.coef_[mask] = c;
    m.update_real_flag();
    return m;
  }

  // grade-1 generator v^a, 1-based
  static Multivector generator(Signature sig, int a) {
    if (a < 1 || a > sig.dim()) throw std::out_of_range("multivector: generator index");
    return blade(sig, 1u << (a - 1), 1.0);
  }

  static Multivector vector(Signature sig, const Vec &components) {
    if (components.size() != sig.dim()) throw std::invalid_argument("multivector: vector size");
    Multivector m(sig);
    for (int a = 0; a < sig.dim(); ++a)
      if (components(a) != 0.0) m.coef_[1u << a] = components(a);
    m.update_real_flag();
    return m;
  }

  const Signature &sig() const { return sig_; }
  bool real_only() const { return real_only_; }
  const std::map<unsigned, cplx> &coefficients() const { return coef_; }
  bool is_zero() const { return coef_.empty(); }

  cplx coefficient(unsigned mask) const {
    auto it = coef_.find(mask);
    return it == coef_.end() ? cplx(0.0) : it->second;
  }

  Multivector &set(unsigned mask, cplx c) {
    if (c == 0.0)
      coef_.erase(mask);
    else
      coef_[mask] = c;
    update_real_flag();
    return *this;
  }

  Multivector operator+(const Multivector &o) const {
    check_context(o);
    Multivector r = *this;
    for (const auto &[mask, c] : o.coef_) {
      cplx s = r.coefficient(mask) + c;
      if (s == 0.0)
        r.coef_.erase(mask);
      else
        r.coef_[mask] = s;
    }
    r.update_real_flag();
    return r;
  }

  Multivector operator-(const Multivector &o) const { return *this + (o * cplx(-1.0)); }

  Multivector operator*(cplx s) const {
    Multivector r(sig_);
    if (s != 0.0)
      for (const auto &[mask, c] : coef_) r.coef_[mask] = c * s;
    r.update_real_flag();
    return r;
  }

  // geometric product
  Multivector operator*(const Multivector &o) const {
    check_context(o);
    Multivector r(sig_);
    for (const auto &[ma, ca] : coef_) {
      for (const auto &[mb, cb] : o.coef_) {
        int sign = blade_reorder_sign(ma, mb);
        unsigned common = ma & mb;
        while (common != 0) {
          int bit = std::countr_zero(common);
          sign *= sig_.metric(bit + 1);
          common &= common - 1;
        }
        const unsigned mask = ma ^ mb;
        cplx s = r.coefficient(mask) + static_cast<double>(sign) * ca * cb;
        if (s == 0.0)
          r.coef_.erase(mask);
        else
          r.coef_[mask] = s;
      }
    }
    r.update_real_flag();
    return r;
  }

  Multivector grade_project(int r) const {
    Multivector out(sig_);
    for (const auto &[mask, c] : coef_)
      if (std::popcount(mask) == r) out.coef_[mask] = c;
    out.update_real_flag();
    return out;
  }

  // reversion: blade order flipped, sign (-1)^{r(r-1)/2}
  Multivector reverse() const {
    Multivector out(sig_);
    for (const auto &[mask, c] : coef_) {
      const int r = std::popcount(mask);
      const int s = ((r * (r - 1) / 2) & 1) ? -1 : 1;
      out.coef_[mask] = static_cast<double>(s) * c;
    }
    out.update_real_flag();
    return out;
  }

  Multivector even_part() const {
    Multivector out(sig_);
    for (const auto &[mask, c] : coef_)
      if ((std::popcount(mask) & 1) == 0) out.coef_[mask] = c;
    out.update_real_flag();
    return out;
  }

  // Hermitian involution *: reversion + complex conjugation + a sign per
  // timelike (eta = -1) generator contained in the blade.  Each generator is
  // then *-Hermitian (spacelike) or *-anti-Hermitian (timelike).
  Multivector star() const {
    Multivector out(sig_);
    unsigned timelike = 0;
    for (int a = sig_.m + 1; a <= sig_.dim(); ++a) timelike |= 1u << (a - 1);
    for (const auto &[mask, c] : coef_) {
      const int r = std::popcount(mask);
      int s = ((r * (r - 1) / 2) & 1) ? -1 : 1;
      if (std::popcount(mask & timelike) & 1) s = -s;
      out.coef_[mask] = static_cast<double>(s) * std::conj(c);
    }
    out.update_real_flag();
    return out;
  }

  double max_abs_coeff() const {
    double m = 0.0;
    for (const auto &[mask, c] : coef_) m = std::max(m, std::abs(c));
    return m;
  }

  // The exact path: with integer coefficients (well inside the 2^53 window)
  // the structure constants are +-1, so sums and products stay integers and
  // relation defects are exact zeros.
  bool integer_valued() const {
    for (const auto &[mask, c] : coef_) {
      if (c.imag() != 0.0 || c.real() != std::floor(c.real())) return false;
      if (std::abs(c.real()) > 0x1p40) return false;
    }
    return true;
  }

  // coefficient vector of length 2^n, blade-mask order
  CVec to_coeff_vector() const {
    CVec v = CVec::Zero(1 << sig_.dim());
    for (const auto &[mask, c] : coef_) v(mask) = c;
    return v;
  }

  static Multivector from_coeff_vector(Signature sig, const CVec &v) {
    Multivector m(sig);
    for (int mask = 0; mask < v.size(); ++mask)
      if (v(mask) != 0.0) m.coef_[static_cast<unsigned>(mask)] = v(mask);
    m.update_real_flag();
    return m;
  }

private:
  void check_context(const Multivector &o) const {
    if (sig_ != o.sig_) throw std::invalid_argument("multivector: signature mismatch");
  }
  void update_real_flag() {
    real_only_ = true;
    for (const auto &[mask, c] : coef_)
      if (c.imag() != 0.0) {
        real_only_ = false;
        break;
      }
  }

  Signature sig_{1, 0};
  std::map<unsigned, cplx> coef_;
  bool real_only_ = true;
};

inline Multivector operator*(cplx s, const Multivector &m) { return m * s; }

inline double max_abs_diff(const Multivector &a, const Multivector &b) {
  return (a - b).max_abs_coeff();
}

// Generators v^1..v^n of Cl(m,k); they satisfy v^a v^b + v^b v^a = 2 eta^{ab} e.
inline std::vector<Multivector> construct_algebra(Signature sig) {
  std::vector<Multivector> gens;
  gens.reserve(sig.dim());
  for (int a = 1; a <= sig.dim(); ++a) gens.push_back(Multivector::generator(sig, a));
  return gens;
}

// Images of the Cl(m,k) generators inside the complex Clifford algebra,
// realized on the signature-(n,0) basis: v^a -> e^a for spacelike a,
// v^a -> i e^a for timelike a.  The images satisfy the source relations.
inline std::vector<Multivector> complexify_map(Signature sig_from) {
  const Signature target(sig_from.dim(), 0);
  std::vector<Multivector> images;
  images.reserve(sig_from.dim());
  for (int a = 1; a <= sig_from.dim(); ++a) {
    const cplx scale = sig_from.metric(a) == 1 ? cplx(1.0, 0.0) : cplx(0.0, 1.0);
    images.push_back(Multivector::blade(target, 1u << (a - 1), scale));
  }
  return images;
}

// exp by scaled Taylor series; adequate for the rotor-scale elements used here.
inline Multivector exp(const Multivector &a) {
  int squarings = 0;
  double norm = a.max_abs_coeff() * (1 << a.sig().dim());
  while (norm > 0.5 && squarings < 40) {
    norm *= 0.5;
    ++squarings;
  }
  const Multivector as = a * cplx(std::pow(0.5, squarings));
  Multivector result = Multivector::unit(a.sig());
  Multivector term = Multivector::unit(a.sig());
  for (int k = 1; k <= 24; ++k) {
    term = term * as * cplx(1.0 / k);
    result = result + term;
  }
  for (int s = 0; s < squarings; ++s) result = result * result;
  return result;
}

} // namespace maggeo
