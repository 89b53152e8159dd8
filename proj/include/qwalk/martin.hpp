#pragma once

#include <map>
#include <set>

#include "qwalk/chain.hpp"
#include "qwalk/coproduct.hpp"

namespace qwalk {

struct GreenBlockResult {
  BlockOperator value;                    // blocks reached within the window
  std::map<SpinLabel, double> tail_bound;  // spectral-norm bound, every window block
  int n_used = 0;
};

// sum_{n=0}^{n_used} P_mu^n(x) on blocks 2t <= window_twice. Stops before n_max once
// every window block's remaining tail is below early_stop_rel times its size.
GreenBlockResult green_block(const QContext& ctx, const Measure& mu, const BlockOperator& x, int n_max,
                             int window_twice, double early_stop_rel = 1e-14);

struct MartinTable {
  BlockOperator input;
  std::map<SpinLabel, Eigen::MatrixXcd> kernel_blocks;  // well-conditioned blocks only
  std::map<SpinLabel, double> tail_bound_per_block;
  std::map<SpinLabel, GreenValue> divisor;  // g_{mu-bar}(t, 0)
  std::set<SpinLabel> ill_conditioned;
  int n_max = 0;

  // IllConditionedError for flagged blocks, DomainError outside the window.
  const Eigen::MatrixXcd& block(SpinLabel t) const;
};

// K(x)|_t = G_{mu-bar}(x)|_t / g_{mu-bar}(t, 0); blocks with g < 10 * tail are flagged.
MartinTable martin_block(const QContext& ctx, const Measure& mu, const BlockOperator& x, int n_max,
                         int window_twice);

struct GeneratorSet {
  AlgebraElement chi_m1, chi_0, chi_1;
  AlgebraElement X_m1, X_0, X_1;
  AlgebraElement Xt_m1, Xt_0, Xt_1;

  const AlgebraElement& X(int j) const;
  const AlgebraElement& Xt(int j) const;
};
GeneratorSet boundary_generators(const QContext& ctx);

struct HarmonicOptions {
  int green_n_max = 800;  // Green truncation for the kernel, independent of n_max
};

struct HarmonicCheck {
  cplx lhs = 0.0, rhs = 0.0;
  double gap = 0.0;
  double slack = 0.0;
  double kernel_slack = 0.0;    // sum_s c_s * kernel tail on s
  double excluded_mass = 0.0;   // c-mass on ill-conditioned blocks
  double kernel_sup = 0.0;      // bound on |phi_s(K(x))| used for that mass
  double rounding = 0.0;
  bool within() const { return gap <= slack; }
};

// lhs = Haar weight of x; rhs = sum_s c_{n_max,s}(mu) phi_s(K_{mu-bar}(x)|_s).
HarmonicCheck verify_harmonic_rep_unit(const QContext& ctx, const Measure& mu, const BlockOperator& x,
                                       int n_max, const HarmonicOptions& opts = {});

}  // namespace qwalk
