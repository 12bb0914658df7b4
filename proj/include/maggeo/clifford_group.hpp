#pragma once

#include <set>
#include <stdexcept>
#include <vector>

#include "maggeo/linalg.hpp"
#include "maggeo/multivector.hpp"
#include "maggeo/rng.hpp"

namespace maggeo {

// Element of the Clifford group, carried together with the generating unit
// vectors whose geometric product produced it.  The certificate makes the
// inverse exact: v^{-1} = v / eta(v,v) = +-v for unit vectors.
struct GroupElement {
  Multivector value;
  std::vector<Multivector> certificate;

  static GroupElement identity(Signature sig) { return {Multivector::unit(sig), {}}; }

  static GroupElement from_vectors(const std::vector<Multivector> &vs) {
    if (vs.empty()) throw std::invalid_argument("group element: empty vector list");
    Multivector prod = Multivector::unit(vs.front().sig());
    for (const auto &v : vs) {
      const double vv = ((v * v).coefficient(0u)).real();
      if (std::abs(vv) < 1e-12)
        throw std::invalid_argument("group element: null generating vector is not invertible");
      prod = prod * v;
    }
    return {prod, vs};
  }

  bool even() const { return certificate.size() % 2 == 0; }

  Multivector inverse() const {
    Multivector inv = Multivector::unit(value.sig());
    for (auto it = certificate.rbegin(); it != certificate.rend(); ++it) {
      const Multivector &v = *it;
      const double vv = ((v * v).coefficient(0u)).real();
      inv = inv * (v * cplx(1.0 / vv));
    }
    return inv;
  }

  // -g: same group element image under zeta; flip one certificate vector
  GroupElement negated() const {
    GroupElement out = *this;
    out.value = value * cplx(-1.0);
    if (!out.certificate.empty()) out.certificate.front() = out.certificate.front() * cplx(-1.0);
    return out;
  }
};

// g a g^{-1}.  With a certificate g = v_1 ... v_k this is evaluated as nested
// unit-vector conjugations, which is the same element by associativity but
// avoids the cancellation of conjugating by the expanded product.
inline Multivector adjoint_action(const GroupElement &g, const Multivector &a) {
  if (g.certificate.empty()) return g.value * a * g.inverse();
  Multivector out = a;
  for (auto it = g.certificate.rbegin(); it != g.certificate.rend(); ++it) {
    const Multivector &v = *it;
    const double vv = ((v * v).coefficient(0u)).real();
    out = v * out * (v * cplx(1.0 / vv));
  }
  return out;
}

// Matrix of v -> g v g^{-1} on the grade-1 subspace: column a holds the
// components of the image of v^a.  Errors out if the action leaves grade 1,
// which signals a corrupted certificate.
inline Mat zeta_matrix(const GroupElement &g) {
  const Signature sig = g.value.sig();
  const int n = sig.dim();
  Mat z(n, n);
  for (int a = 1; a <= n; ++a) {
    const Multivector image = adjoint_action(g, Multivector::generator(sig, a));
    const Multivector off = image - image.grade_project(1);
    if (off.max_abs_coeff() > 1e-9 * std::max(1.0, image.max_abs_coeff()))
      throw std::runtime_error("zeta_matrix: adjoint action leaves the grade-1 subspace");
    for (int b = 1; b <= n; ++b) z(b - 1, a - 1) = image.coefficient(1u << (b - 1)).real();
  }
  return z;
}

inline Mat eta_matrix(Signature sig) {
  Mat eta = Mat::Zero(sig.dim(), sig.dim());
  for (int a = 1; a <= sig.dim(); ++a) eta(a - 1, a - 1) = sig.metric(a);
  return eta;
}

// M^T eta M - eta
inline double eta_orthogonality_defect(Signature sig, const Mat &m) {
  const Mat eta = eta_matrix(sig);
  return max_abs(Mat(m.transpose() * eta * m - eta));
}

// Random unit vector, resampled while |eta(v,v)| < 1e-9 (null rejection) or
// while eta(v,v) is small against the Euclidean norm (keeps the normalized
// components bounded, so downstream conjugations stay well conditioned),
// then normalized to eta(v,v) = +-1.
inline Multivector random_unit_vector(Signature sig, Rng &rng) {
  const int n = sig.dim();
  for (int attempt = 0; attempt < 1000; ++attempt) {
    Vec comp(n);
    double e2 = 0.0;
    for (int i = 0; i < n; ++i) {
      comp(i) = rng.uniform(-1.0, 1.0);
      e2 += comp(i) * comp(i);
    }
    double vv = 0.0;
    for (int a = 1; a <= n; ++a) vv += sig.metric(a) * comp(a - 1) * comp(a - 1);
    if (std::abs(vv) < 1e-9 || std::abs(vv) < 0.4 * e2) continue;
    comp /= std::sqrt(std::abs(vv));
    return Multivector::vector(sig, comp);
  }
  throw std::runtime_error("random_unit_vector: repeated null draws");
}

// Product of an even number (2 or 4) of random unit vectors: a Spin element
// with its certificate.  For non-compact signatures the raw product can be an
// arbitrarily large boost, which would push the eta-orthogonality residual of
// its zeta matrix above rounding scale, so vectors whose partial product
// exceeds a fixed coefficient bound are redrawn.
inline GroupElement random_spin_element(Signature sig, Rng &rng) {
  const int count = (rng.next_u64() & 1) ? 2 : 4;
  std::vector<Multivector> vs;
  vs.reserve(count);
  Multivector partial = Multivector::unit(sig);
  for (int i = 0; i < count; ++i) {
    for (int attempt = 0; attempt < 1000; ++attempt) {
      const Multivector v = random_unit_vector(sig, rng);
      const Multivector next = partial * v;
      if (next.max_abs_coeff() > 3.0) continue;
      partial = next;
      vs.push_back(v);
      break;
    }
  }
  if (static_cast<int>(vs.size()) != count)
    throw std::runtime_error("random_spin_element: could not draw a moderate element");
  return GroupElement{partial, vs};
}

inline GroupElement random_spin_element(Signature sig, std::uint64_t seed) {
  Rng rng(seed);
  return random_spin_element(sig, rng);
}

// Blade masks reachable from the unit by repeated products of the given
// generators; with all n generators this enumerates the 2^n algebra basis,
// with products of pairs the 2^{n-1} even subalgebra.
inline std::set<unsigned> reachable_blades(const std::vector<Multivector> &products) {
  std::set<unsigned> reached = {0u};
  bool grew = true;
  while (grew) {
    grew = false;
    std::set<unsigned> next = reached;
    for (unsigned mask : reached) {
      for (const auto &p : products) {
        for (const auto &[pm, pc] : p.coefficients()) {
          // blade product of basis blades is a single basis blade
          unsigned out = mask ^ pm;
          if (next.insert(out).second) grew = true;
        }
      }
    }
    reached.swap(next);
  }
  return reached;
}

} // namespace maggeo
