#include "qwalk/martin.hpp"

#include <algorithm>
#include <cmath>

namespace qwalk {

namespace {

double max_abs(const std::map<int, Eigen::VectorXcd>& bands) {
  double m = 0.0;
  for (const auto& [delta, band] : bands)
    if (band.size()) m = std::max(m, band.cwiseAbs().maxCoeff());
  return m;
}

void accumulate(BandedOperator& acc, const BandedOperator& y, int max_twice) {
  for (const auto& [tw, bands] : y) {
    if (tw > max_twice) continue;
    auto& target = acc[tw];
    for (const auto& [delta, band] : bands) {
      auto it = target.find(delta);
      if (it == target.end())
        target.emplace(delta, band);
      else
        it->second += band;
    }
  }
}

}  // namespace

GreenBlockResult green_block(const QContext& ctx, const Measure& mu, const BlockOperator& x, int n_max,
                             int window_twice, double early_stop_rel) {
  const SUq2Ring ring(ctx);
  validate(ring, mu);
  const double lambda = lambda_rate(ring, mu);
  if (!(lambda < 1.0)) throw Refusal("green_block: lambda >= 1, no transience certificate");
  if (n_max < 0) throw DomainError("n_max must be nonnegative");

  const double xnorm = x.blocks().empty() ? 0.0 : x.norm();
  const int step = mu.max_label();
  // sum_{s0 in supp x} (d_{s0}/d_t)(dim_t/dim_{s0}) lambda^{n+1}/(1-lambda) without the lambda part.
  std::map<int, double> tail_weight;
  for (int t = 0; t <= window_twice; ++t) {
    double w = 0.0;
    for (SpinLabel s0 : x.support())
      w += ring.qdim(s0.twice()) / ring.qdim(t) * (t + 1.0) / s0.dim();
    tail_weight[t] = xnorm * w / (1.0 - lambda);
  }

  BandedOperator y = to_banded(x), acc;
  accumulate(acc, y, window_twice);
  int n = 0;
  auto converged = [&]() {
    const double geo = std::pow(lambda, n + 1);
    for (int t = 0; t <= window_twice; ++t) {
      const double tail = tail_weight[t] * geo;
      if (tail == 0.0) continue;
      auto it = acc.find(t);
      if (it == acc.end() || !(tail <= early_stop_rel * max_abs(it->second))) return false;
    }
    return true;
  };
  while (n < n_max && !converged()) {
    ++n;
    const long long reach = window_twice + static_cast<long long>(n_max - n) * step;
    y = markov_apply_banded(ctx, mu, y, static_cast<int>(std::min<long long>(reach, 1 << 30)));
    accumulate(acc, y, window_twice);
  }

  GreenBlockResult out;
  out.n_used = n;
  const double geo = std::pow(lambda, n + 1);
  for (int t = 0; t <= window_twice; ++t) out.tail_bound[SpinLabel(t)] = tail_weight[t] * geo;
  out.value = to_dense(acc);
  return out;
}

const Eigen::MatrixXcd& MartinTable::block(SpinLabel t) const {
  if (ill_conditioned.count(t))
    throw IllConditionedError("Martin kernel block " + t.str() + " is ill-conditioned");
  auto it = kernel_blocks.find(t);
  if (it == kernel_blocks.end()) throw DomainError("spin " + t.str() + " outside the Martin window");
  return it->second;
}

MartinTable martin_block(const QContext& ctx, const Measure& mu, const BlockOperator& x, int n_max,
                         int window_twice) {
  const SUq2Ring ring(ctx);
  const Measure mubar = mu.dual(ring);
  if (!is_generating(ring, mubar, window_twice).generating)
    throw Refusal("martin_block: measure does not reach every block of the window");

  const auto G = green_block(ctx, mubar, x, n_max, window_twice);
  const auto column = green_column(ring, mubar, 0, n_max);

  MartinTable table;
  table.input = x;
  table.n_max = n_max;
  for (int tw = 0; tw <= window_twice; ++tw) {
    const SpinLabel t(tw);
    auto cit = column.find(tw);
    const GreenValue g0 = cit != column.end() ? cit->second : GreenValue{0.0, 0.0};
    table.divisor[t] = g0;
    if (!(g0.value > 0.0) || g0.value < 10.0 * g0.tail_bound) {
      table.ill_conditioned.insert(t);
      continue;
    }
    const Eigen::MatrixXcd Gt = G.value.block(t);
    const double tau_x = G.tail_bound.at(t);
    // |G/g - G_true/g_true| <= tau_x/g + ||G|| tau_0 / g^2, since g <= g_true.
    table.kernel_blocks[t] = Gt / g0.value;
    table.tail_bound_per_block[t] =
        tau_x / g0.value + Gt.norm() * g0.tail_bound / (g0.value * g0.value);
  }
  return table;
}

const AlgebraElement& GeneratorSet::X(int j) const {
  switch (j) {
    case -1: return X_m1;
    case 0: return X_0;
    case 1: return X_1;
  }
  throw DomainError("generator index must be -1, 0 or 1");
}

const AlgebraElement& GeneratorSet::Xt(int j) const {
  switch (j) {
    case -1: return Xt_m1;
    case 0: return Xt_0;
    case 1: return Xt_1;
  }
  throw DomainError("generator index must be -1, 0 or 1");
}

GeneratorSet boundary_generators(const QContext& ctx) {
  using A = AlgebraElement;
  const double q = ctx.q();
  const A k = A::k(), e = A::e(), f = A::f();
  const A lam_inv = A::central(Central::LambdaInv);
  const A lt_inv = A::central(Central::LambdaTildeInv);
  GeneratorSet g;
  g.chi_m1 = cplx(-q) * (f * k);
  g.chi_0 = cplx(1.0 / std::sqrt(q_number(ctx, 2))) * (e * f - cplx(q * q) * (f * e));
  g.chi_1 = cplx(q) * (e * k);
  g.X_m1 = lam_inv * g.chi_m1;
  g.X_0 = lam_inv * g.chi_0;
  g.X_1 = lam_inv * g.chi_1;
  g.Xt_m1 = lt_inv * (f * k);
  g.Xt_0 = lt_inv * (k * k);
  g.Xt_1 = lt_inv * (e * k);
  return g;
}

HarmonicCheck verify_harmonic_rep_unit(const QContext& ctx, const Measure& mu, const BlockOperator& x,
                                       int n_max, const HarmonicOptions& opts) {
  const SUq2Ring ring(ctx);
  validate(ring, mu);
  if (!(lambda_rate(ring, mu) < 1.0)) throw Refusal("harmonic check needs lambda < 1");
  const Measure mubar = mu.dual(ring);

  HarmonicCheck out;
  out.lhs = haar_weight(ctx, x);
  const int window = n_max * mu.max_label();
  const auto c = c_constants(ring, mu, n_max, window);
  const auto table = martin_block(ctx, mu, x, opts.green_n_max, window);

  // sup_s |phi_s(K(x))| <= ||x|| sum_{a in supp x} g(a,a)/g(a,0), by the strong Markov property.
  double sup = 0.0;
  for (SpinLabel a : x.support()) {
    const auto row = green_row(ring, mubar, a.twice(), opts.green_n_max);
    const GreenValue gaa = row.at(a.twice());
    const GreenValue ga0 = table.divisor.at(a);
    sup += (gaa.value + gaa.tail_bound) / ga0.value;
  }
  out.kernel_sup = (x.blocks().empty() ? 0.0 : x.norm()) * sup;

  double magnitude = std::abs(out.lhs);
  for (const auto& [tw, cs] : c) {
    const SpinLabel s(tw);
    if (table.ill_conditioned.count(s)) {
      out.excluded_mass += cs;
      continue;
    }
    const cplx phi = phi_state(ctx, s, table.block(s));
    out.rhs += cs * phi;
    out.kernel_slack += cs * table.tail_bound_per_block.at(s);
    magnitude += cs * std::abs(phi);
  }
  // Allowance for rounding in the n_max-step recursions behind c and K.
  out.rounding = 1e-12 * magnitude;
  out.gap = std::abs(out.lhs - out.rhs);
  out.slack = out.kernel_slack + out.excluded_mass * out.kernel_sup + out.rounding;
  return out;
}

}  // namespace qwalk
