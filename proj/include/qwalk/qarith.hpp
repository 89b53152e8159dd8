#pragma once

#include <cmath>
#include <compare>
#include <string>
#include <string_view>

#include "qwalk/errors.hpp"

namespace qwalk {

// Spin s stored as the integer 2s.
class SpinLabel {
 public:
  constexpr SpinLabel() = default;
  explicit SpinLabel(int twice_s);

  static SpinLabel from_twice(int twice_s) { return SpinLabel(twice_s); }
  // Accepts "3", "1/2", "1.5".
  static SpinLabel parse(std::string_view text);

  int twice() const { return twice_; }
  int dim() const { return twice_ + 1; }
  double value() const { return 0.5 * twice_; }
  bool half_integer() const { return (twice_ & 1) != 0; }
  std::string str() const;

  auto operator<=>(const SpinLabel&) const = default;

 private:
  int twice_ = 0;
};

class QContext {
 public:
  explicit QContext(double q, double tol = 1e-10);

  double q() const { return q_; }
  double tol() const { return tol_; }

 private:
  double q_;
  double tol_;
};

// [n]_{q^b} in the summed form q^{b(n-1)} + q^{b(n-3)} + ... + q^{-b(n-1)}.
template <class R>
R q_number_t(const R& q, int n, int base_power = 1) {
  using std::pow;
  if (n == 0) return R(0);
  if (n < 0) return -q_number_t(q, -n, base_power);
  const R qb = pow(q, base_power);
  const R qb2 = qb * qb;
  // Largest term first; later terms shrink by q^{2b}, so their rounding is negligible.
  R term = pow(qb, -(n - 1));
  R sum = R(0);
  for (int k = 0; k < n; ++k) {
    sum += term;
    term *= qb2;
  }
  return sum;
}

double q_number(const QContext& ctx, int n);
double q_number_base(const QContext& ctx, int n, int base_power);
double quantum_dim(const QContext& ctx, SpinLabel s);

}  // namespace qwalk
