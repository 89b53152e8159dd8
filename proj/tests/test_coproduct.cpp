#include <cmath>

#include "doctest.h"
#include "oracles.hpp"
#include "qwalk/coproduct.hpp"
#include "qwalk/martin.hpp"

using namespace qwalk;
using Eigen::MatrixXcd;
using A = AlgebraElement;

namespace {

MatrixXcd kron(const MatrixXcd& X, const MatrixXcd& Y) {
  MatrixXcd out(X.rows() * Y.rows(), X.cols() * Y.cols());
  for (int i = 0; i < X.rows(); ++i)
    for (int j = 0; j < X.cols(); ++j) out.block(i * Y.rows(), j * Y.cols(), Y.rows(), Y.cols()) = X(i, j) * Y;
  return out;
}

// (phi_mu (x) id) Delta(x) on block t with dense isometries and an explicit partial trace.
MatrixXcd markov_dense(const QContext& ctx, const Measure& mu, const BlockOperator& x, SpinLabel t) {
  MatrixXcd out = MatrixXcd::Zero(t.dim(), t.dim());
  const double q = ctx.q();
  for (const auto& [tr, w] : mu.weights()) {
    const SpinLabel r(tr);
    const auto B = intertwiner_basis(ctx, r, t);
    MatrixXcd big = MatrixXcd::Zero(r.dim() * t.dim(), r.dim() * t.dim());
    for (const auto& c : B->components) {
      const MatrixXcd T = B->isometry(c).cast<cplx>();
      big += T * x.block(c.v) * T.transpose();
    }
    for (int a = 0; a < r.dim(); ++a)
      out += w * std::pow(q, tr - 2 * a) / quantum_dim(ctx, r) *
             big.block(a * t.dim(), a * t.dim(), t.dim(), t.dim());
  }
  return out;
}

BlockOperator random_positive(int twice_max, unsigned seed) {
  std::srand(seed);
  BlockOperator x;
  for (int tw = 0; tw <= twice_max; ++tw) {
    MatrixXcd a = MatrixXcd::Random(tw + 1, tw + 1);
    x.set(SpinLabel(tw), a * a.adjoint());
  }
  return x;
}

}  // namespace

TEST_CASE("eval_block of lambda~^-1 k^2 is diag(q^{2s-2j})") {
  const QContext ctx(0.5);
  const auto g = boundary_generators(ctx);
  for (int ts = 0; ts <= 10; ++ts) {
    const MatrixXcd m = eval_block(ctx, g.Xt_0, SpinLabel(ts));
    double top = 0.0;
    for (int a = 0; a <= ts; ++a) {
      const int twice_j = 2 * a - ts;
      CHECK(std::abs(m(a, a) - std::pow(0.5, ts - twice_j)) < 1e-13);
      top = std::max(top, m(a, a).real());
    }
    CHECK(top == doctest::Approx(1.0));
    CHECK(std::abs(m(0, 0)) > 0.0);
  }
}

TEST_CASE("chi_0 = -lambda + q sqrt([2]) / (q - 1/q) k^2") {
  for (double q : {0.3, 0.5, 0.8}) {
    const QContext ctx(q);
    const auto g = boundary_generators(ctx);
    const A rhs = A::scalar(-1.0) * A::central(Central::Lambda) +
                  A::scalar(q * std::sqrt(q_number(ctx, 2)) / (q - 1 / q)) * (A::k() * A::k());
    for (int ts = 0; ts <= 40; ++ts)
      CHECK(oracle::rel_residual(eval_block(ctx, g.chi_0, SpinLabel(ts)), eval_block(ctx, rhs, SpinLabel(ts))) < 1e-12);
  }
}

TEST_CASE("Kronecker and spectral routes agree") {
  const std::vector<A> words{A::k(), A::k() * A::k(), A::e() * A::k(), A::f() * A::k(), A::e(), A::f(),
                             A::kinv() * A::e() + A::scalar(cplx(0.0, 2.0)) * A::f()};
  for (double q : {0.3, 0.5, 0.8}) {
    const QContext ctx(q);
    for (int tt = 0; tt <= 10; ++tt)
      for (int ts = 0; ts <= 10; ++ts)
        for (const auto& a : words) {
          const auto kr = coproduct_pair_word(ctx, a, SpinLabel(tt), SpinLabel(ts));
          const auto sp = coproduct_pair(ctx, a, SpinLabel(tt), SpinLabel(ts));
          CHECK(oracle::rel_residual(kr.matrix, sp.matrix) < 1e-10);
        }
  }
}

TEST_CASE("coproduct special cases") {
  const QContext ctx(0.5);
  const auto pt = irrep(ctx, SpinLabel(2)), ps = irrep(ctx, SpinLabel(3));
  const auto k = coproduct_pair_word(ctx, A::k(), SpinLabel(2), SpinLabel(3));
  CHECK((k.matrix - kron(pt.K.cast<cplx>(), ps.K.cast<cplx>())).cwiseAbs().maxCoeff() < 1e-15);
  const auto one = coproduct_pair_word(ctx, A::scalar(1.0), SpinLabel(2), SpinLabel(3));
  CHECK((one.matrix - MatrixXcd::Identity(12, 12)).cwiseAbs().maxCoeff() == 0.0);
  const auto one_sp = coproduct_pair(ctx, A::scalar(1.0), SpinLabel(2), SpinLabel(3));
  CHECK((one_sp.matrix - MatrixXcd::Identity(12, 12)).cwiseAbs().maxCoeff() < 1e-14);
  CHECK_THROWS_AS(coproduct_pair_word(ctx, A::central(Central::Lambda), SpinLabel(1), SpinLabel(1)),
                  UnsupportedElementError);
}

TEST_CASE("lambda~^-1 on 1/2 (x) s splits into the two branch projections") {
  const QContext ctx(0.5);
  const double q = ctx.q();
  for (int ts = 1; ts <= 12; ++ts) {
    const auto pair = coproduct_pair(ctx, A::central(Central::LambdaTildeInv), SpinLabel(1), SpinLabel(ts));
    const auto B = intertwiner_basis(ctx, SpinLabel(1), SpinLabel(ts));
    MatrixXcd expect = MatrixXcd::Zero(2 * (ts + 1), 2 * (ts + 1));
    for (const auto& c : B->components) {
      const MatrixXcd T = B->isometry(c).cast<cplx>();
      expect += std::pow(q, c.v.twice()) * T * T.transpose();
    }
    CHECK(oracle::rel_residual(pair.matrix, expect) < 1e-13);
  }
}

TEST_CASE("markov_apply: P(I_0) at spin 1/2") {
  const QContext ctx(0.5);
  const auto y = markov_apply(ctx, Measure::dirac(1), BlockOperator::identity(SpinLabel(0)));
  REQUIRE(y.support().size() == 1);
  CHECK(y.support()[0] == SpinLabel(1));
  CHECK((y.at(SpinLabel(1)) - 0.16 * MatrixXcd::Identity(2, 2)).cwiseAbs().maxCoeff() < 1e-15);
}

TEST_CASE("markov_apply matches a dense partial-trace computation") {
  const QContext ctx(0.45);
  const Measure mu({{1, 0.5}, {2, 0.3}, {3, 0.2}});
  BlockOperator x;
  std::srand(7);
  for (int tw : {0, 2, 3, 5}) x.set(SpinLabel(tw), MatrixXcd::Random(tw + 1, tw + 1));
  const auto y = markov_apply(ctx, mu, x);
  for (const auto& [t, m] : y.blocks()) CHECK(oracle::rel_residual(m, markov_dense(ctx, mu, x, t)) < 1e-13);
  // support: t with fusion(r, t) meeting supp(x)
  CHECK(y.contains(SpinLabel(8)));
  CHECK_FALSE(y.contains(SpinLabel(9)));
}

TEST_CASE("markov_apply: unital on saturated windows, positive, linear") {
  const QContext ctx(0.5);
  const Measure mu({{1, 0.6}, {2, 0.4}});
  const auto y = markov_apply(ctx, mu, BlockOperator::identity_window(12));
  for (int tw = 0; tw <= 10; ++tw)
    CHECK((y.at(SpinLabel(tw)) - MatrixXcd::Identity(tw + 1, tw + 1)).cwiseAbs().maxCoeff() < 1e-13);

  const auto xp = random_positive(6, 3);
  const auto yp = markov_apply(ctx, mu, xp);
  for (const auto& [t, m] : yp.blocks()) {
    Eigen::SelfAdjointEigenSolver<MatrixXcd> es(m);
    CHECK(es.eigenvalues().minCoeff() > -1e-12 * std::max(1.0, es.eigenvalues().maxCoeff()));
  }

  const auto x1 = random_positive(5, 11), x2 = random_positive(4, 12);
  BlockOperator lin = cplx(2.0, -1.0) * x1;
  lin += cplx(0.5) * x2;
  auto lhs = markov_apply(ctx, mu, lin);
  auto rhs = cplx(2.0, -1.0) * markov_apply(ctx, mu, x1);
  rhs += cplx(0.5) * markov_apply(ctx, mu, x2);
  for (const auto& [t, m] : lhs.blocks()) CHECK(oracle::rel_residual(m, rhs.block(t)) < 1e-13);
}

TEST_CASE("central inputs stay central and follow the shadow chain") {
  const QContext ctx(0.5);
  std::vector<double> scal{1.0, -0.3, 2.0, 0.7, 1.5, -1.0, 0.25};
  BlockOperator x;
  for (int tw = 0; tw < 7; ++tw) x.set(SpinLabel(tw), scal[tw] * MatrixXcd::Identity(tw + 1, tw + 1));
  for (int r : {1, 2, 3}) {
    const auto y = markov_apply(ctx, Measure::dirac(r), x);
    for (const auto& [t, m] : y.blocks()) {
      const cplx c = m(0, 0);
      CHECK((m - c * MatrixXcd::Identity(t.dim(), t.dim())).cwiseAbs().maxCoeff() < 1e-13);
      double expect = 0.0;
      for (auto v : fusion_components(SpinLabel(r), t))
        if (v.twice() < 7)
          expect += quantum_dim(ctx, v) / (quantum_dim(ctx, SpinLabel(r)) * quantum_dim(ctx, t)) * scal[v.twice()];
      CHECK(std::abs(phi_state(ctx, t, m) - expect) < 1e-10);
    }
  }
}

TEST_CASE("two slices compose in either order on central elements") {
  const QContext ctx(0.6);
  BlockOperator x;
  for (int tw = 0; tw <= 6; ++tw) x.set(SpinLabel(tw), (1.0 + tw * tw) * MatrixXcd::Identity(tw + 1, tw + 1));
  const auto ab = markov_apply(ctx, Measure::dirac(1), markov_apply(ctx, Measure::dirac(2), x));
  const auto ba = markov_apply(ctx, Measure::dirac(2), markov_apply(ctx, Measure::dirac(1), x));
  // phi_{1/2} * phi_1 = (d_{1/2}/(d_{1/2} d_1)) phi_{1/2} + (d_{3/2}/(d_{1/2} d_1)) phi_{3/2}
  const double d1 = quantum_dim(ctx, SpinLabel(1)), d2 = quantum_dim(ctx, SpinLabel(2)),
               d3 = quantum_dim(ctx, SpinLabel(3));
  const auto conv = markov_apply(ctx, Measure({{1, d1 / (d1 * d2)}, {3, d3 / (d1 * d2)}}), x);
  for (const auto& [t, m] : conv.blocks()) {
    if (t.twice() > 3) continue;  // blocks fed only by the window
    CHECK(oracle::rel_residual(ab.block(t), m) < 1e-10);
    CHECK(oracle::rel_residual(ba.block(t), m) < 1e-10);
  }
}

TEST_CASE("banded and dense representations round-trip") {
  std::srand(5);
  BlockOperator x;
  for (int tw : {0, 1, 4}) {
    MatrixXcd m = MatrixXcd::Random(tw + 1, tw + 1);
    if (tw == 4) m(0, 4) = 0.0;
    x.set(SpinLabel(tw), m);
  }
  const auto back = to_dense(to_banded(x));
  for (const auto& [s, m] : x.blocks()) CHECK((back.at(s) - m).cwiseAbs().maxCoeff() == 0.0);
  for (const auto& [tw, bands] : to_banded(x)) {
    const MatrixXcd m = x.at(SpinLabel(tw));
    Eigen::JacobiSVD<MatrixXcd> svd(m);
    CHECK(banded_block_norm(tw, bands) >= svd.singularValues()(0) * (1 - 1e-12));
  }
}

TEST_CASE("haar weight") {
  const QContext ctx(0.5);
  CHECK(std::abs(haar_weight(ctx, BlockOperator::identity(SpinLabel(0))) - 1.0) < 1e-15);
  for (int tw = 0; tw <= 8; ++tw) {
    const double d = quantum_dim(ctx, SpinLabel(tw));
    CHECK(std::abs(haar_weight(ctx, BlockOperator::identity(SpinLabel(tw))) - d * d) < 1e-12 * d * d);
  }
  CHECK(haar_weight(ctx, random_positive(5, 9)).real() >= 0.0);
  CHECK(std::abs(haar_weight(ctx, BlockOperator::matrix_unit(SpinLabel(1), 0, 1))) == 0.0);
}

TEST_CASE("BlockOperator shape validation") {
  BlockOperator x;
  CHECK_THROWS_AS(x.set(SpinLabel(2), MatrixXcd::Zero(2, 2)), DimensionError);
  CHECK_THROWS_AS(BlockOperator::matrix_unit(SpinLabel(1), 0, 2), DomainError);
  CHECK_THROWS_AS(x.at(SpinLabel(0)), DomainError);
  CHECK(x.block(SpinLabel(3)).rows() == 4);
}
