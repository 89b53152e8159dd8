#pragma once

#include <map>
#include <utility>
#include <vector>

#include "qwalk/chain.hpp"
#include "qwalk/coproduct.hpp"

namespace qwalk {

// value = (phi_t (x) phi_s)(D^* D), value_star = (phi_t (x) phi_s)(D D^*) with
// D = 1 (x) pi_s(x) - (pi_t (x) pi_s) Delta(x). Evaluated in 80-digit arithmetic.
struct DeviationRecord {
  SpinLabel t, s;
  AlgebraElement x;
  double value = 0.0;
  double value_star = 0.0;
};

DeviationRecord deviation(const QContext& ctx, SpinLabel t, SpinLabel s, const AlgebraElement& x);
double deviation_mu(const QContext& ctx, const Measure& mu, SpinLabel s, const AlgebraElement& x);

// d_{1/2}^{-1} d_s^{-2} q^{4s} (q - q^-1) ((q^{2s-2} + q^{2s+4}) [2s+1]_{q^3} - (q^-2 + q^2) [2s+1]_{q^2}),
// the t = 1/2 deviation of lambda~^{-1} k^2 in closed form.
double deviation_closed_form_xt0(const QContext& ctx, SpinLabel s);

// ||j_n(x) - j_{n+1}(x)||^2 = sum_s c_{n,s}(mu) deviation_mu(s, x).
double jn_gap(const QContext& ctx, const Measure& mu, const AlgebraElement& x, int n);

// max over 1/2 <= s <= s_max of d_s * deviation(1/2, s, x).
double observed_constant(const QContext& ctx, const AlgebraElement& x, int twice_s_max);
// C' = C [2] / (sqrt([2]) - sqrt(2))^2 * sum_t mu(t) d_{1/2}^{2t} / d_t.
double envelope_constant(const QContext& ctx, const Measure& mu, double C);

struct ThmCondition {
  double value = 0.0;         // sum_t mu(t) (1 + q^2)^{2t}
  bool half_integer = false;  // condition (i), via is_generating
};
ThmCondition thm_condition(const QContext& ctx, const Measure& mu);

struct RateReport {
  Measure mu;
  AlgebraElement x;
  struct Row {
    int n;
    double gap_sq;
    double bound;  // C' lambda^n
    double partial_sum;
  };
  std::vector<Row> series;
  double lambda = 1.0;
  double envelope_C = 0.0;
  double envelope_Cprime = 0.0;
  bool summable = false;  // every gap under the envelope and lambda < 1
  double thm_condition = 0.0;
  bool half_integer = false;
};

// Gaps for n = 1..n_max sharing one deviation cache across n.
RateReport rate_report(const QContext& ctx, const Measure& mu, const AlgebraElement& x, int n_max, double C);

}  // namespace qwalk
