#pragma once

#include <complex>
#include <cstdint>
#include <limits>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "qwalk/measure.hpp"
#include "qwalk/repsuq2.hpp"

namespace qwalk {

using cplx = std::complex<double>;

enum class Gen : std::uint8_t { K, Kinv, E, F };

// Central elements acting as spin-dependent scalars.
//   lambda:       q(q^{2s+1} + q^{-2s-1}) / ((q - q^-1) sqrt([2]))
//   lambda_tilde: q^{-2s}
enum class Central : std::uint8_t { Lambda, LambdaInv, LambdaTilde, LambdaTildeInv };

template <class R>
R central_value(const R& q, Central c, SpinLabel s);

// Sum of coef * (product of central scalars) * word.
class AlgebraElement {
 public:
  struct Term {
    cplx coef;
    std::vector<Gen> word;
    std::vector<Central> central;
  };

  AlgebraElement() = default;
  static AlgebraElement scalar(cplx c);
  static AlgebraElement generator(Gen g);
  static AlgebraElement central(Central c);
  static AlgebraElement k() { return generator(Gen::K); }
  static AlgebraElement kinv() { return generator(Gen::Kinv); }
  static AlgebraElement e() { return generator(Gen::E); }
  static AlgebraElement f() { return generator(Gen::F); }

  const std::vector<Term>& terms() const { return terms_; }
  bool has_central() const;
  std::string str() const;

  friend AlgebraElement operator+(AlgebraElement a, const AlgebraElement& b);
  friend AlgebraElement operator-(AlgebraElement a, const AlgebraElement& b);
  friend AlgebraElement operator*(const AlgebraElement& a, const AlgebraElement& b);
  friend AlgebraElement operator*(cplx c, AlgebraElement a);

 private:
  std::vector<Term> terms_;
};

// pi_s(a) as separate real and imaginary parts.
template <class R>
std::pair<Mat<R>, Mat<R>> eval_block_split(const R& q, const AlgebraElement& a, SpinLabel s);
Eigen::MatrixXcd eval_block(const QContext& ctx, const AlgebraElement& a, SpinLabel s);

// Finitely supported element of the direct sum of B(H_s); absent blocks are zero.
class BlockOperator {
 public:
  using Map = std::map<SpinLabel, Eigen::MatrixXcd>;

  BlockOperator() = default;
  static BlockOperator identity(SpinLabel s);
  static BlockOperator identity_window(int twice_max);
  static BlockOperator matrix_unit(SpinLabel s, int i, int j);

  void set(SpinLabel s, Eigen::MatrixXcd m);
  bool contains(SpinLabel s) const { return blocks_.count(s) != 0; }
  const Eigen::MatrixXcd& at(SpinLabel s) const;
  Eigen::MatrixXcd block(SpinLabel s) const;
  std::vector<SpinLabel> support() const;
  const Map& blocks() const { return blocks_; }
  double norm() const;

  BlockOperator& operator+=(const BlockOperator& other);
  friend BlockOperator operator*(cplx c, BlockOperator x);

 private:
  Map blocks_;
};

// Matrix on H_t (x) H_s, row index a*(2s+1) + i.
struct PairOperator {
  SpinLabel t, s;
  Eigen::MatrixXcd matrix;
};

// Kronecker route: Delta(k) = k(x)k, Delta(e) = e(x)k^-1 + k(x)e, Delta(f) = f(x)k^-1 + k(x)f.
PairOperator coproduct_pair_word(const QContext& ctx, const AlgebraElement& a, SpinLabel t,
                                 SpinLabel s);
// Spectral route: sum_v T_v pi_v(a) T_v^*.
PairOperator coproduct_pair(const QContext& ctx, const AlgebraElement& a, SpinLabel t, SpinLabel s);

// P_mu(x) = (phi_mu (x) id) Delta(x); measure labels are doubled spins.
BlockOperator markov_apply(const QContext& ctx, const Measure& mu, const BlockOperator& x);

std::complex<double> haar_weight(const QContext& ctx, const BlockOperator& x);

// P_mu maps the band j' - j = delta of every block into the same band, so propagation
// can store diagonals only. Keys: doubled spin, then delta.
using BandedOperator = std::map<int, std::map<int, Eigen::VectorXcd>>;

BandedOperator to_banded(const BlockOperator& x);
BlockOperator to_dense(const BandedOperator& x);
// Output blocks above max_twice are dropped.
BandedOperator markov_apply_banded(const QContext& ctx, const Measure& mu, const BandedOperator& x,
                                   int max_twice = std::numeric_limits<int>::max());
// Spectral norm of one dense-equivalent block.
double banded_block_norm(int twice, const std::map<int, Eigen::VectorXcd>& bands);

}  // namespace qwalk
