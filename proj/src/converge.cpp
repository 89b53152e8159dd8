#include "qwalk/converge.hpp"

#include <cmath>

#include "detail/highprec_api.hpp"

namespace qwalk {

DeviationRecord deviation(const QContext& ctx, SpinLabel t, SpinLabel s, const AlgebraElement& x) {
  const auto [value, value_star] = detail::deviation_hp(ctx.q(), t, s, x);
  return {t, s, x, value, value_star};
}

double deviation_mu(const QContext& ctx, const Measure& mu, SpinLabel s, const AlgebraElement& x) {
  double acc = 0.0;
  for (const auto& [tw, w] : mu.weights()) acc += w * deviation(ctx, SpinLabel(tw), s, x).value;
  return acc;
}

double deviation_closed_form_xt0(const QContext& ctx, SpinLabel s) {
  return detail::closed_form_xt0_hp(ctx.q(), s);
}

namespace {

class DeviationCache {
 public:
  DeviationCache(const QContext& ctx, const Measure& mu, const AlgebraElement& x) : ctx_(ctx), mu_(mu), x_(x) {}
  double operator()(int twice_s) {
    auto it = cache_.find(twice_s);
    if (it == cache_.end()) it = cache_.emplace(twice_s, deviation_mu(ctx_, mu_, SpinLabel(twice_s), x_)).first;
    return it->second;
  }

 private:
  const QContext& ctx_;
  const Measure& mu_;
  const AlgebraElement& x_;
  std::map<int, double> cache_;
};

double gap_from(const std::map<int, double>& c, DeviationCache& dev) {
  // Ascending labels: deterministic order.
  double acc = 0.0;
  for (const auto& [tw, cs] : c) acc += cs * dev(tw);
  return acc;
}

}  // namespace

double jn_gap(const QContext& ctx, const Measure& mu, const AlgebraElement& x, int n) {
  if (n < 1) throw DomainError("jn_gap needs n >= 1");
  const SUq2Ring ring(ctx);
  DeviationCache dev(ctx, mu, x);
  return gap_from(c_constants(ring, mu, n, n * mu.max_label()), dev);
}

double observed_constant(const QContext& ctx, const AlgebraElement& x, int twice_s_max) {
  double C = 0.0;
  for (int ts = 1; ts <= twice_s_max; ++ts) {
    const SpinLabel s(ts);
    C = std::max(C, quantum_dim(ctx, s) * deviation(ctx, SpinLabel(1), s, x).value);
  }
  return C;
}

double envelope_constant(const QContext& ctx, const Measure& mu, double C) {
  const double d2 = q_number(ctx, 2);
  const double gap = std::sqrt(d2) - std::sqrt(2.0);
  double sum = 0.0;
  for (const auto& [tw, w] : mu.weights()) sum += w * std::pow(d2, tw) / quantum_dim(ctx, SpinLabel(tw));
  return C * d2 / (gap * gap) * sum;
}

ThmCondition thm_condition(const QContext& ctx, const Measure& mu) {
  ThmCondition out;
  const double base = 1.0 + ctx.q() * ctx.q();
  for (const auto& [tw, w] : mu.weights()) out.value += w * std::pow(base, tw);
  const SUq2Ring ring(ctx);
  out.half_integer = is_generating(ring, mu, mu.max_label() + 1).generating;
  return out;
}

RateReport rate_report(const QContext& ctx, const Measure& mu, const AlgebraElement& x, int n_max, double C) {
  const SUq2Ring ring(ctx);
  RateReport rep;
  rep.mu = mu;
  rep.x = x;
  rep.lambda = lambda_rate(ring, mu);
  rep.envelope_C = C;
  rep.envelope_Cprime = envelope_constant(ctx, mu, C);
  const auto cond = thm_condition(ctx, mu);
  rep.thm_condition = cond.value;
  rep.half_integer = cond.half_integer;

  DeviationCache dev(ctx, mu, x);
  rep.summable = rep.lambda < 1.0;
  std::map<int, double> c = mu.weights();
  double partial = 0.0;
  for (int n = 1; n <= n_max; ++n) {
    if (n > 1) c = c_step(ring, mu, c);
    const double gap = gap_from(c, dev);
    partial += gap;
    const double bound = rep.envelope_Cprime * std::pow(rep.lambda, n);
    rep.series.push_back({n, gap, bound, partial});
    if (!(gap <= bound)) rep.summable = false;
  }
  return rep;
}

}  // namespace qwalk
