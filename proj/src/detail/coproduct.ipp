#pragma once

#include "detail/repsuq2.ipp"
#include "qwalk/coproduct.hpp"

namespace qwalk {

template <class R>
R central_value(const R& q, Central c, SpinLabel s) {
  using std::pow;
  using std::sqrt;
  const int ts = s.twice();
  switch (c) {
    case Central::Lambda:
    case Central::LambdaInv: {
      const R lam = q * (pow(q, ts + 1) + pow(q, -(ts + 1))) / ((q - R(1) / q) * sqrt(q + R(1) / q));
      return c == Central::Lambda ? lam : R(1) / lam;
    }
    case Central::LambdaTilde:
      return pow(q, -ts);
    case Central::LambdaTildeInv:
      return pow(q, ts);
  }
  throw DomainError("unknown central element");
}

namespace detail {

// M <- M * pi_s(g), using the one-diagonal structure of the generators.
template <class R>
void right_multiply(Mat<R>& M, Gen g, const R& q, int ts, const std::vector<R>& qn) {
  using std::pow;
  using std::sqrt;
  const int d = ts + 1;
  const R qh = sqrt(q);
  switch (g) {
    case Gen::K:
      for (int a = 0; a < d; ++a) M.col(a) *= pow(qh, ts - 2 * a);
      break;
    case Gen::Kinv:
      for (int a = 0; a < d; ++a) M.col(a) *= pow(qh, 2 * a - ts);
      break;
    case Gen::E:  // E(a-1, a) = sqrt([a][2s-a+1])
      for (int a = d - 1; a >= 1; --a) M.col(a) = M.col(a - 1) * sqrt(qn[a] * qn[ts - a + 1]);
      M.col(0).setZero();
      break;
    case Gen::F:  // F(a+1, a) = sqrt([2s-a][a+1])
      for (int a = 0; a + 1 < d; ++a) M.col(a) = M.col(a + 1) * sqrt(qn[ts - a] * qn[a + 1]);
      M.col(d - 1).setZero();
      break;
  }
}

}  // namespace detail

template <class R>
std::pair<Mat<R>, Mat<R>> eval_block_split(const R& q, const AlgebraElement& a, SpinLabel s) {
  const int d = s.dim();
  const auto qn = detail::q_number_table(q, d + 1);
  Mat<R> re = Mat<R>::Zero(d, d), im = Mat<R>::Zero(d, d);
  for (const auto& term : a.terms()) {
    Mat<R> M = Mat<R>::Identity(d, d);
    for (Gen g : term.word) detail::right_multiply(M, g, q, s.twice(), qn);
    R scale = R(1);
    for (Central c : term.central) scale *= central_value(q, c, s);
    if (term.coef.real() != 0.0) re += (scale * R(term.coef.real())) * M;
    if (term.coef.imag() != 0.0) im += (scale * R(term.coef.imag())) * M;
  }
  return {std::move(re), std::move(im)};
}

}  // namespace qwalk
