// One PASS/FAIL line per acceptance criterion; nonzero exit if any fails.
#include <chrono>
#include <cmath>
#include <functional>
#include <string>

#include <fmt/format.h>

#include "oracles.hpp"
#include "qwalk/chain.hpp"
#include "qwalk/converge.hpp"
#include "qwalk/martin.hpp"

using namespace qwalk;
using Eigen::MatrixXcd;
using Eigen::MatrixXd;

namespace {

struct Outcome {
  bool pass;
  std::string detail;
};

const double kQs[] = {0.3, 0.5, 0.8};

MatrixXd kron(const MatrixXd& X, const MatrixXd& Y) {
  MatrixXd out(X.rows() * Y.rows(), X.cols() * Y.cols());
  for (int i = 0; i < X.rows(); ++i)
    for (int j = 0; j < X.cols(); ++j) out.block(i * Y.rows(), j * Y.cols(), Y.rows(), Y.cols()) = X(i, j) * Y;
  return out;
}

Outcome hopf_relations() {
  double worst = 0.0;
  for (double q : kQs) {
    const QContext ctx(q);
    for (int ts = 0; ts <= 40; ++ts) {
      const auto p = irrep(ctx, SpinLabel(ts));
      const MatrixXd Ki = p.K.inverse();
      worst = std::max(worst, oracle::rel_residual(MatrixXd(p.K * p.E * Ki), MatrixXd(q * p.E)));
      worst = std::max(worst, oracle::rel_residual(MatrixXd(p.K * p.F * Ki), MatrixXd(p.F / q)));
      const MatrixXd comm = p.E * p.F - p.F * p.E;
      const MatrixXd rhs = (p.K * p.K - Ki * Ki) / (q - 1 / q);
      worst = std::max(worst, oracle::rel_residual(comm, rhs));
    }
  }
  return {worst < 1e-12, fmt::format("max relative residual {:.3e} (tol 1e-12)", worst)};
}

Outcome intertwiners() {
  double orth = 0.0, compl_ = 0.0, inter = 0.0, cg = 0.0, norm = 0.0;
  for (double q : kQs) {
    const QContext ctx(q);
    for (int tt = 0; tt <= 12; ++tt)
      for (int ts = 0; ts <= 12; ++ts) {
        const auto B = intertwiner_basis(ctx, SpinLabel(tt), SpinLabel(ts));
        const auto pt = irrep(ctx, SpinLabel(tt)), ps = irrep(ctx, SpinLabel(ts));
        const MatrixXd ksi = ps.K.inverse();
        const MatrixXd dk = kron(pt.K, ps.K), de = kron(pt.E, ksi) + kron(pt.K, ps.E),
                       df = kron(pt.F, ksi) + kron(pt.K, ps.F);
        const int n = (tt + 1) * (ts + 1);
        MatrixXd sum = MatrixXd::Zero(n, n);
        for (const auto& c : B->components) {
          const MatrixXd T = B->isometry(c);
          const auto pv = irrep(ctx, c.v);
          orth = std::max(orth, (T.transpose() * T - MatrixXd::Identity(c.v.dim(), c.v.dim())).cwiseAbs().maxCoeff());
          inter = std::max({inter, oracle::rel_residual(MatrixXd(dk * T), MatrixXd(T * pv.K)),
                            oracle::rel_residual(MatrixXd(de * T), MatrixXd(T * pv.E)),
                            oracle::rel_residual(MatrixXd(df * T), MatrixXd(T * pv.F))});
          sum += T * T.transpose();
        }
        compl_ = std::max(compl_, (sum - MatrixXd::Identity(n, n)).cwiseAbs().maxCoeff());
        if (tt != 1) continue;
        for (const auto& c : B->components)
          for (int b = 0; b < c.v.dim(); ++b)
            for (int a = 0; a < 2; ++a) {
              const int i = b + c.offset - a;
              if (i < 0 || i > ts) continue;
              cg = std::max(cg, std::abs(c.at(b, a) - cg_half(ctx, SpinLabel(ts), a == 0 ? -1 : 1, c.v, 2 * i - ts)));
            }
        for (int tj = -ts; tj <= ts; tj += 2)
          for (int eps : {-1, 1}) {
            const double up = cg_half(ctx, SpinLabel(ts), eps, SpinLabel(ts + 1), tj);
            const double dn = ts > 0 && std::abs(tj + eps) <= ts - 1
                                  ? cg_half(ctx, SpinLabel(ts), eps, SpinLabel(ts - 1), tj)
                                  : 0.0;
            norm = std::max(norm, std::abs(up * up + dn * dn - 1.0));
          }
      }
  }
  const double worst = std::max({orth, compl_, inter, cg, norm});
  return {worst < 1e-10,
          fmt::format("orthonormality {:.2e}, completeness {:.2e}, intertwining {:.2e}, explicit 1/2 (x) s {:.2e}, "
                      "a+^2 + a-^2 - 1 {:.2e} (tol 1e-10)",
                      orth, compl_, inter, cg, norm)};
}

Outcome route_agreement() {
  using A = AlgebraElement;
  const A words[] = {A::k(), A::k() * A::k(), A::e() * A::k(), A::f() * A::k()};
  double worst = 0.0;
  for (double q : kQs) {
    const QContext ctx(q);
    for (int tt = 0; tt <= 10; ++tt)
      for (int ts = 0; ts <= 10; ++ts)
        for (const auto& a : words)
          worst = std::max(worst, oracle::rel_residual(coproduct_pair_word(ctx, a, SpinLabel(tt), SpinLabel(ts)).matrix,
                                                       coproduct_pair(ctx, a, SpinLabel(tt), SpinLabel(ts)).matrix));
  }
  return {worst < 1e-10, fmt::format("max relative residual {:.3e} (tol 1e-10)", worst)};
}

Outcome chi0_identity() {
  using A = AlgebraElement;
  double worst = 0.0;
  for (double q : kQs) {
    const QContext ctx(q);
    const auto g = boundary_generators(ctx);
    const A rhs = A::scalar(-1.0) * A::central(Central::Lambda) +
                  A::scalar(q * std::sqrt(q_number(ctx, 2)) / (q - 1 / q)) * (A::k() * A::k());
    for (int ts = 0; ts <= 40; ++ts)
      worst = std::max(worst, oracle::rel_residual(eval_block(ctx, g.chi_0, SpinLabel(ts)),
                                                   eval_block(ctx, rhs, SpinLabel(ts))));
  }
  return {worst < 1e-12, fmt::format("max relative residual {:.3e} (tol 1e-12)", worst)};
}

Outcome classical_chain() {
  const QContext ctx(0.5);
  const SUq2Ring ring(ctx);
  double row = 0.0, dual = 0.0, csum = 0.0, cbound = -1e300;
  for (const auto& mu : {Measure::dirac(1), Measure({{1, 0.5}, {2, 0.3}, {3, 0.2}})}) {
    for (int s = 0; s <= 40; ++s) {
      double sum = 0.0;
      for (const auto& [t, p] : transition_row(ring, mu, s)) sum += p;
      row = std::max(row, std::abs(sum - 1.0));
    }
    const auto mubar = mu.dual(ring);
    for (int n = 0; n <= 8; ++n)
      for (int s = 0; s <= 12; ++s)
        for (int t = 0; t <= 12; ++t) {
          const double r = ring.qdim(t) / ring.qdim(s);
          const double lhs = p_n(ring, mubar, s, t, n), rhs = r * r * p_n(ring, mu, t, s, n);
          dual = std::max(dual, std::abs(lhs - rhs) / std::max(1.0, std::abs(rhs)));
        }
    const double lam = lambda_rate(ring, mu);
    for (int n = 1; n <= 12; ++n) {
      double total = 0.0, weighted = 0.0;
      for (const auto& [r, v] : c_constants(ring, mu, n, n * mu.max_label())) {
        total += v;
        weighted += v / ring.qdim(r);
      }
      csum = std::max(csum, std::abs(total - 1.0));
      cbound = std::max(cbound, weighted / std::pow(lam, n) - 1.0);
    }
  }
  const auto g = green_classical(ring, Measure::dirac(1), 0, 0, 400);
  const auto mc = oracle::green00_monte_carlo(0.5, 1000000, 120, 20261018);
  const double z = std::abs(g.value - mc.mean) / mc.stderr_;
  const bool pass = row < 1e-12 && dual < 1e-10 && csum < 1e-12 && cbound <= 1e-12 && z < 3.0;
  return {pass, fmt::format("row sums {:.2e}, duality {:.2e}, |sum c - 1| {:.2e}, max(sum c/d / lambda^n) - 1 = "
                            "{:.2e}, g(0,0) = {:.12f} vs Monte Carlo {:.6f} +- {:.6f} ({:.2f} s.e.)",
                            row, dual, csum, cbound, g.value, mc.mean, mc.stderr_, z)};
}

Outcome closed_form_deviation() {
  double worst = 0.0, worst_lib = 0.0;
  for (double q : kQs) {
    const QContext ctx(q);
    const auto g = boundary_generators(ctx);
    for (int ts = 1; ts <= 60; ++ts) {
      const double v = deviation(ctx, SpinLabel(1), SpinLabel(ts), g.Xt_0).value;
      const double o = oracle::deviation_xt0_closed(q, ts);
      worst = std::max(worst, std::abs(v - o) / std::abs(o));
      worst_lib = std::max(worst_lib, std::abs(v - deviation_closed_form_xt0(ctx, SpinLabel(ts))) / std::abs(o));
    }
  }
  return {worst < 1e-9 && worst_lib < 1e-9,
          fmt::format("max relative error {:.3e} vs independent oracle, {:.3e} vs library closed form (tol 1e-9)",
                      worst, worst_lib)};
}

Outcome estimate_boundedness() {
  const QContext ctx(0.5);
  const auto g = boundary_generators(ctx);
  bool pass = true;
  std::string detail;
  for (int i : {-1, 0, 1}) {
    auto scaled = [&](int ts) {
      return quantum_dim(ctx, SpinLabel(ts)) * deviation(ctx, SpinLabel(1), SpinLabel(ts), g.Xt(i)).value;
    };
    const double a = scaled(40), b = scaled(80);
    double peak = 0.0;
    for (int ts = 40; ts <= 80; ++ts) peak = std::max(peak, scaled(ts));
    const double growth = peak / a - 1.0;
    pass = pass && growth < 0.01;
    detail += fmt::format("i={}: d_s*dev s=20 {:.6e}, s=40 {:.6e}, max growth {:+.3e}, variation {:+.3e}; ", i, a, b,
                          growth, b / a - 1.0);
  }
  double early = 0.0, late = 0.0;
  for (int ts = 1; ts <= 80; ++ts) {
    const double d = quantum_dim(ctx, SpinLabel(ts));
    const double v = d * d * deviation(ctx, SpinLabel(1), SpinLabel(ts), g.Xt_0).value;
    (ts <= 40 ? early : late) = std::max(ts <= 40 ? early : late, v);
  }
  pass = pass && late <= 1.01 * early;
  detail += fmt::format("d_s^2*dev(X~0): max s<=20 {:.6e}, max 20<s<=40 {:.6e}", early, late);
  return {pass, detail};
}

Outcome exponential_convergence() {
  const QContext ctx(0.5);
  const auto g = boundary_generators(ctx);
  const auto mu = Measure::dirac(1);
  const double C = observed_constant(ctx, g.Xt_0, 80);
  const auto rep = rate_report(ctx, mu, g.Xt_0, 160, C);
  double worst_ratio = 0.0;
  bool under = true;
  for (const auto& row : rep.series) {
    if (row.n > 60) break;
    worst_ratio = std::max(worst_ratio, row.gap_sq / row.bound);
    under = under && row.gap_sq <= row.bound;
  }
  double cauchy = 0.0;
  for (int m = 80; m <= 160; ++m)
    for (int n = m; n <= 160; ++n)
      cauchy = std::max(cauchy, std::abs(rep.series[n - 1].partial_sum - rep.series[m - 1].partial_sum));
  return {under && cauchy < 1e-10,
          fmt::format("C = {:.6e}, C' = {:.6e}, max gap/(C' 0.8^n) over n<=60 = {:.3e}, "
                      "max |S_N - S_M| for 80<=M<=N<=160 = {:.3e} (tol 1e-10)",
                      C, rep.envelope_Cprime, worst_ratio, cauchy)};
}

Outcome harmonic_unit() {
  const QContext ctx(0.5);
  const auto mu = Measure::dirac(1);
  const std::pair<std::string, BlockOperator> inputs[] = {
      {"I_0", BlockOperator::identity(SpinLabel(0))},
      {"I_1/2", BlockOperator::identity(SpinLabel(1))},
      {"I_1", BlockOperator::identity(SpinLabel(2))},
      {"m_01^1/2", BlockOperator::matrix_unit(SpinLabel(1), 0, 1)},
  };
  bool pass = true;
  std::string detail;
  for (const auto& [name, x] : inputs) {
    const auto h = verify_harmonic_rep_unit(ctx, mu, x, 200);
    pass = pass && h.within();
    detail += fmt::format("{}{}: lhs {:.12g}, gap {:.2e} <= slack {:.2e}", detail.empty() ? "" : "; ", name,
                          h.lhs.real(), h.gap, h.slack);
  }
  return {pass, detail};
}

Outcome fusion_agreement() {
  const QContext ctx(0.5);
  const SUq2Ring direct(ctx);
  const auto table = TableFusionRing::from_suq2(ctx, 80);
  double worst = 0.0;
  for (const auto& mu : {Measure::dirac(1), Measure({{1, 0.5}, {2, 0.3}, {3, 0.2}})}) {
    worst = std::max(worst, std::abs(lambda_rate(table, mu) - lambda_rate(direct, mu)));
    for (int s = 0; s <= 40; ++s)
      for (int t = 0; t <= 40; ++t) worst = std::max(worst, std::abs(p_mu(table, mu, s, t) - p_mu(direct, mu, s, t)));
    for (int n = 1; n <= 12; ++n) {
      const auto a = c_constants(table, mu, n, 40), b = c_constants(direct, mu, n, 40);
      if (a.size() != b.size()) return {false, "c-constant supports differ"};
      for (const auto& [r, v] : a) worst = std::max(worst, std::abs(v - b.at(r)));
    }
  }
  return {worst <= 1e-14, fmt::format("max difference {:.3e} (tol 1e-14)", worst)};
}

}  // namespace

int main() {
  const std::pair<int, std::function<Outcome()>> criteria[] = {
      {1, hopf_relations},  {2, intertwiners},          {3, route_agreement},         {4, chi0_identity},
      {5, classical_chain}, {6, closed_form_deviation}, {7, estimate_boundedness},    {8, exponential_convergence},
      {9, harmonic_unit},   {10, fusion_agreement},
  };
  int failures = 0;
  for (const auto& [id, run] : criteria) {
    const auto start = std::chrono::steady_clock::now();
    Outcome out{false, ""};
    try {
      out = run();
    } catch (const std::exception& e) {
      out = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (!out.pass) ++failures;
    fmt::print("{} criterion {}: {} [{:.2f} s]\n", out.pass ? "PASS" : "FAIL", id, out.detail, secs);
    std::fflush(stdout);
  }
  return failures == 0 ? 0 : 1;
}
