#pragma once

#include <stdexcept>
#include <vector>

#include "maggeo/linalg.hpp"
#include "maggeo/signature.hpp"

namespace maggeo {

// Ordered gamma matrices realizing the generators of the complexified
// Clifford algebra on spinor space, dimension d = 2^{n/2} (even n only).
struct GammaRep {
  Signature sig;
  std::vector<CMat> gammas;

  int n() const { return sig.dim(); }
  int dim() const { return gammas.empty() ? 0 : static_cast<int>(gammas.front().rows()); }
};

namespace detail {

inline CMat pauli(int which) {
  CMat s(2, 2);
  switch (which) {
    case 1: s << 0, 1, 1, 0; break;
    case 2: s << cplx(0, 0), cplx(0, -1), cplx(0, 1), cplx(0, 0); break;
    default: s << 1, 0, 0, -1; break;
  }
  return s;
}

} // namespace detail

// Recursive construction, fixed seed and tensoring order for determinism:
// starting from the empty list, each step n -> n+2 maps every generator g to
// g (x) sigma3 and appends I (x) sigma1, I (x) sigma2.  The Euclidean result
// is Hermitian with square +I; the last k generators are then multiplied by i
// to realize signature (m,k).
inline GammaRep gamma_matrices(Signature sig) {
  const int n = sig.dim();
  if (n % 2 != 0) throw std::invalid_argument("gamma_matrices: odd dimension unsupported");

  std::vector<CMat> gam;
  int d = 1;
  for (int step = 0; step < n / 2; ++step) {
    const CMat id = CMat::Identity(d, d);
    std::vector<CMat> next;
    next.reserve(gam.size() + 2);
    for (const auto &g : gam) next.push_back(kronecker(g, detail::pauli(3)));
    next.push_back(kronecker(id, detail::pauli(1)));
    next.push_back(kronecker(id, detail::pauli(2)));
    gam.swap(next);
    d *= 2;
  }
  for (int a = sig.m; a < n; ++a) gam[a] *= cplx(0.0, 1.0);
  return {sig, gam};
}

// max_{a,b} | {gamma^a, gamma^b} - 2 eta^{ab} I |
inline double clifford_relation_defect(const GammaRep &rep) {
  const int d = rep.dim();
  double worst = 0.0;
  for (int a = 0; a < rep.n(); ++a)
    for (int b = 0; b < rep.n(); ++b) {
      const double eta = (a == b) ? rep.sig.metric(a + 1) : 0.0;
      const CMat anti = rep.gammas[a] * rep.gammas[b] + rep.gammas[b] * rep.gammas[a];
      worst = std::max(worst, max_abs(CMat(anti - 2.0 * eta * CMat::Identity(d, d))));
    }
  return worst;
}

// Dimension of {X : [X, A_i] = 0 for all i} via the stacked commutator
// operator; 1 for an irreducible family.
inline int commutant_dimension(const std::vector<CMat> &rep) {
  if (rep.empty()) throw std::invalid_argument("commutant_dimension: empty family");
  const int d = static_cast<int>(rep.front().rows());
  const CMat id = CMat::Identity(d, d);
  CMat stacked(static_cast<int>(rep.size()) * d * d, d * d);
  for (size_t i = 0; i < rep.size(); ++i)
    stacked.middleRows(static_cast<int>(i) * d * d, d * d) =
        kronecker(rep[i].transpose(), id) - kronecker(id, rep[i]);
  return nullspace(stacked).dimension;
}

inline int commutant_dimension(const GammaRep &rep) { return commutant_dimension(rep.gammas); }

struct IntertwinerSpace {
  int dimension = 0;
  std::vector<CMat> basis; // solutions Phi of Phi A_i = B_i Phi
};

// Solution space of Phi A_i = B_i Phi via the stacked Sylvester operator,
// nullspace cut at 1e-8 * sigma_max.
inline IntertwinerSpace intertwiner_space(const std::vector<CMat> &rep_a,
                                          const std::vector<CMat> &rep_b) {
  if (rep_a.size() != rep_b.size())
    throw std::invalid_argument("intertwiner_space: family size mismatch");
  if (rep_a.empty()) throw std::invalid_argument("intertwiner_space: empty family");
  const int d = static_cast<int>(rep_a.front().rows());
  for (size_t i = 0; i < rep_a.size(); ++i)
    if (rep_a[i].rows() != d || rep_b[i].rows() != d)
      throw std::invalid_argument("intertwiner_space: matrix dimension mismatch");

  const CMat id = CMat::Identity(d, d);
  CMat stacked(static_cast<int>(rep_a.size()) * d * d, d * d);
  for (size_t i = 0; i < rep_a.size(); ++i)
    stacked.middleRows(static_cast<int>(i) * d * d, d * d) =
        kronecker(rep_a[i].transpose(), id) - kronecker(id, rep_b[i]);

  const Nullspace ns = nullspace(stacked);
  IntertwinerSpace out;
  out.dimension = ns.dimension;
  for (const auto &v : ns.basis) out.basis.push_back(unvectorize(v, d, d));
  return out;
}

} // namespace maggeo
