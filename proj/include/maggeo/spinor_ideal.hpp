#pragma once

#include <stdexcept>
#include <vector>

#include "maggeo/linalg.hpp"
#include "maggeo/multivector.hpp"

namespace maggeo {

inline bool is_idempotent(const Multivector &p, double tol = 1e-12) {
  return max_abs_diff(p * p, p) <= tol;
}

inline bool is_hermitian(const Multivector &p, double tol = 1e-12) {
  return max_abs_diff(p.star(), p) <= tol;
}

inline bool is_hermitian_idempotent(const Multivector &p, double tol = 1e-12) {
  return is_idempotent(p, tol) && is_hermitian(p, tol);
}

struct LeftIdeal {
  std::vector<Multivector> basis; // linearly independent spanning set of Cl * p
  int dimension = 0;
  bool minimal = false; // dimension == 2^{n/2} (even n)
};

// Hermitian idempotent (e + s)/2 from s with s^2 = e, s* = s, s != e.
inline Multivector half_unit_plus(const Multivector &s) {
  return (Multivector::unit(s.sig()) + s) * cplx(0.5);
}

// Product of the first `factors` commuting primitive Hermitian idempotents
// (e + i e^{2j-1} e^{2j})/2 of the complex Clifford algebra (signature (n,0)
// basis).  With factors = n/2 the result generates a minimal left ideal.
inline Multivector commuting_idempotent_product(Signature sig, int factors) {
  if (sig.k != 0) throw std::invalid_argument("idempotent product: wants the complex algebra basis (n,0)");
  if (factors < 0 || 2 * factors > sig.dim()) throw std::invalid_argument("idempotent product: factor count");
  Multivector p = Multivector::unit(sig);
  for (int j = 1; j <= factors; ++j) {
    const unsigned mask = (1u << (2 * j - 2)) | (1u << (2 * j - 1));
    const Multivector s = Multivector::blade(sig, mask, cplx(0.0, 1.0));
    p = p * half_unit_plus(s);
  }
  return p;
}

inline Multivector minimal_idempotent(Signature sig) {
  return commuting_idempotent_product(sig, sig.dim() / 2);
}

// Basis of the left ideal Cl * p by row reduction over all blade * p
// products, taken in blade order so the result is deterministic.
inline LeftIdeal minimal_left_ideal(const Multivector &p, double tol = 1e-10) {
  if (!is_idempotent(p))
    throw std::invalid_argument("minimal_left_ideal: p is not idempotent");
  if (!is_hermitian(p))
    throw std::invalid_argument("minimal_left_ideal: p is not Hermitian");

  const Signature sig = p.sig();
  const int n = sig.dim();
  const int total = 1 << n;

  LeftIdeal ideal;
  std::vector<CVec> reduced; // row-echelon representatives
  std::vector<int> pivots;

  for (int mask = 0; mask < total; ++mask) {
    const Multivector w = Multivector::blade(sig, static_cast<unsigned>(mask), 1.0) * p;
    CVec v = w.to_coeff_vector();
    const double scale = std::max(1.0, v.cwiseAbs().maxCoeff());
    for (size_t r = 0; r < reduced.size(); ++r) v -= v(pivots[r]) * reduced[r];
    int pivot = -1;
    double best = tol * scale;
    for (int i = 0; i < total; ++i)
      if (std::abs(v(i)) > best) {
        best = std::abs(v(i));
        pivot = i;
      }
    if (pivot < 0) continue;
    v /= v(pivot);
    // keep earlier rows reduced against the new pivot
    for (size_t r = 0; r < reduced.size(); ++r) reduced[r] -= reduced[r](pivot) * v;
    reduced.push_back(v);
    pivots.push_back(pivot);
    ideal.basis.push_back(w);
  }

  ideal.dimension = static_cast<int>(ideal.basis.size());
  ideal.minimal = (n % 2 == 0) && ideal.dimension == (1 << (n / 2));
  return ideal;
}

// Residual of a against span(basis), via least squares on coefficient vectors.
inline double span_residual(const std::vector<Multivector> &basis, const Multivector &a) {
  if (basis.empty()) return a.max_abs_coeff();
  const int total = 1 << a.sig().dim();
  CMat B(total, static_cast<int>(basis.size()));
  for (size_t j = 0; j < basis.size(); ++j) B.col(static_cast<int>(j)) = basis[j].to_coeff_vector();
  const CVec v = a.to_coeff_vector();
  const CVec x = B.colPivHouseholderQr().solve(v);
  return (B * x - v).cwiseAbs().maxCoeff();
}

// Matrices of left multiplication by the generators on the ideal basis:
// e^a w_j = sum_i L_a(i,j) w_i.  For a minimal ideal of the complex algebra
// this is the spinor representation carried by the ideal.
inline std::vector<CMat> left_regular_representation(const std::vector<Multivector> &basis) {
  if (basis.empty()) throw std::invalid_argument("left_regular_representation: empty basis");
  const Signature sig = basis.front().sig();
  const int n = sig.dim();
  const int total = 1 << n;
  const int d = static_cast<int>(basis.size());

  CMat B(total, d);
  for (int j = 0; j < d; ++j) B.col(j) = basis[j].to_coeff_vector();
  const auto qr = B.colPivHouseholderQr();

  std::vector<CMat> rep;
  rep.reserve(n);
  for (int a = 1; a <= n; ++a) {
    const Multivector gen = Multivector::generator(sig, a);
    CMat L(d, d);
    for (int j = 0; j < d; ++j) {
      const CVec target = (gen * basis[j]).to_coeff_vector();
      const CVec x = qr.solve(target);
      if ((B * x - target).cwiseAbs().maxCoeff() > 1e-9)
        throw std::runtime_error("left_regular_representation: basis does not span the ideal");
      L.col(j) = x;
    }
    rep.push_back(L);
  }
  return rep;
}

} // namespace maggeo
