#pragma once

#include <complex>
#include <memory>
#include <vector>

#include <Eigen/Dense>

#include "qwalk/qarith.hpp"

namespace qwalk {

template <class R>
using Mat = Eigen::Matrix<R, Eigen::Dynamic, Eigen::Dynamic>;
template <class R>
using Vec = Eigen::Matrix<R, Eigen::Dynamic, 1>;

// pi_s(k), pi_s(e), pi_s(f) and rho_s = pi_s(k^-2) in the basis xi_j, j = -s..s.
template <class R>
struct IrrepBlockT {
  SpinLabel s;
  Mat<R> K, E, F, rho;
  int dim = 1;
  R qdim = R(1);
};
using IrrepBlock = IrrepBlockT<double>;

template <class R>
IrrepBlockT<R> irrep_t(const R& q, SpinLabel s);
IrrepBlock irrep(const QContext& ctx, SpinLabel s);

// Tr(x rho^-1) / d_s.
std::complex<double> phi_state(const QContext& ctx, SpinLabel s, const Eigen::MatrixXcd& x);

// |t-s|, ..., t+s in increasing order.
std::vector<SpinLabel> fusion_components(SpinLabel t, SpinLabel s);

// C_q(1/2, s, target; eps/2, j, j + eps/2) with target = s +- 1/2 and j = twice_j / 2.
template <class R>
R cg_half_t(const R& q, SpinLabel s, int eps, SpinLabel target, int twice_j);
double cg_half(const QContext& ctx, SpinLabel s, int eps, SpinLabel target, int twice_j);

// Isometries H_v -> H_t (x) H_s stored weight-sparse. Basis vector b of H_v (weight
// m = b - v) only touches the pairs (a, i) with a + i = b + offset, a = first-leg index.
template <class R>
class IntertwinerBasisT {
 public:
  struct Component {
    SpinLabel v;
    int offset = 0;
    std::vector<int> a_lo;             // per b
    std::vector<std::vector<R>> coef;  // per b, indexed by a - a_lo[b]

    R at(int b, int a) const {
      const auto& c = coef[b];
      const int k = a - a_lo[b];
      return (k >= 0 && k < static_cast<int>(c.size())) ? c[k] : R(0);
    }
  };

  SpinLabel t, s;
  std::vector<Component> components;  // ascending v

  const Component* find(SpinLabel v) const {
    for (const auto& c : components)
      if (c.v == v) return &c;
    return nullptr;
  }

  // Dense (2t+1)(2s+1) x (2v+1) matrix, row index a*(2s+1) + i.
  Mat<R> isometry(const Component& c) const {
    const int ns = s.dim();
    Mat<R> T = Mat<R>::Zero(t.dim() * ns, c.v.dim());
    for (int b = 0; b < c.v.dim(); ++b)
      for (std::size_t k = 0; k < c.coef[b].size(); ++k) {
        const int a = c.a_lo[b] + static_cast<int>(k);
        const int i = b + c.offset - a;
        T(a * ns + i, b) = c.coef[b][k];
      }
    return T;
  }
};
using IntertwinerBasis = IntertwinerBasisT<double>;

// Memoized per (q, t, s); concurrent callers for one key share a single construction.
template <class R>
std::shared_ptr<const IntertwinerBasisT<R>> intertwiner_basis_t(double q, SpinLabel t, SpinLabel s);
std::shared_ptr<const IntertwinerBasis> intertwiner_basis(const QContext& ctx, SpinLabel t,
                                                          SpinLabel s);

}  // namespace qwalk
