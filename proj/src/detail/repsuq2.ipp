// Template bodies for repsuq2; included by the translation units that instantiate them.
#pragma once

#include <future>
#include <map>
#include <mutex>
#include <tuple>

#include "qwalk/repsuq2.hpp"

namespace qwalk::detail {

template <class R>
std::vector<R> q_number_table(const R& q, int n_max) {
  std::vector<R> out(n_max + 1);
  for (int n = 0; n <= n_max; ++n) out[n] = q_number_t(q, n);
  return out;
}

// Lowest-weight-first construction. pi(e) lowers j, so the e-annihilated vector of
// component v sits at weight -v; raising with pi(f) fills the rest. Components are
// built in descending v and every new vector is re-orthogonalized against the higher
// components on its weight space: the bare f-chain is unstable for v < t+s.
template <class R>
IntertwinerBasisT<R> build_intertwiner(const R& q, SpinLabel t, SpinLabel s) {
  using std::abs;
  using std::pow;
  using std::sqrt;
  const int tt = t.twice(), ts = s.twice();
  const auto qn = q_number_table(q, tt + ts + 2);
  const R qh = sqrt(q);

  // q^{-j_a} on the first leg and q^{+j_i} on the second (pi(k) = q^{-j}).
  std::vector<R> k_t(tt + 1), kinv_s(ts + 1);
  for (int a = 0; a <= tt; ++a) k_t[a] = pow(qh, tt - 2 * a);
  for (int i = 0; i <= ts; ++i) kinv_s[i] = pow(qh, 2 * i - ts);
  auto e_coef = [&](int twice, int a) { return sqrt(qn[a] * qn[twice - a + 1]); };  // xi_a -> xi_{a-1}
  auto f_coef = [&](int twice, int a) { return sqrt(qn[twice - a] * qn[a + 1]); };  // xi_a -> xi_{a+1}
  auto a_range = [&](int n) { return std::pair{std::max(0, n - ts), std::min(tt, n)}; };

  IntertwinerBasisT<R> out;
  out.t = t;
  out.s = s;
  std::vector<typename IntertwinerBasisT<R>::Component> built;  // descending v

  auto orthogonalize = [&](std::vector<R>& y, int n, int lo) {
    for (const auto& hc : built) {
      const int b = n - hc.offset;
      if (b < 0 || b >= hc.v.dim()) continue;
      R dot = R(0);
      for (std::size_t k = 0; k < y.size(); ++k) dot += y[k] * hc.at(b, lo + static_cast<int>(k));
      for (std::size_t k = 0; k < y.size(); ++k) y[k] -= dot * hc.at(b, lo + static_cast<int>(k));
    }
    R norm = R(0);
    for (const auto& c : y) norm += c * c;
    norm = sqrt(norm);
    for (auto& c : y) c /= norm;
  };

  for (int tv = tt + ts; tv >= std::abs(tt - ts); tv -= 2) {
    typename IntertwinerBasisT<R>::Component comp;
    comp.v = SpinLabel(tv);
    comp.offset = (tt + ts - tv) / 2;
    comp.a_lo.resize(tv + 1);
    comp.coef.resize(tv + 1);

    // Kernel of Delta(e) from weight space n = offset to n - 1.
    const int n0 = comp.offset;
    auto [lo, hi] = a_range(n0);
    const int dim_w = hi - lo + 1;
    std::vector<R> x(dim_w, R(0));
    if (n0 == 0) {
      x[0] = R(1);
    } else {
      auto [lo1, hi1] = a_range(n0 - 1);
      Mat<R> M = Mat<R>::Zero(hi1 - lo1 + 1, dim_w);
      for (int a = lo; a <= hi; ++a) {
        const int i = n0 - a;
        if (a > 0) M(a - 1 - lo1, a - lo) += e_coef(tt, a) * kinv_s[i];
        if (i > 0) M(a - lo1, a - lo) += k_t[a] * e_coef(ts, i);
      }
      Eigen::JacobiSVD<Mat<R>> svd(M, Eigen::ComputeFullV);
      const auto& sv = svd.singularValues();
      const R smax = sv.size() > 0 ? sv(0) : R(0);
      int rank = 0;
      for (Eigen::Index k = 0; k < sv.size(); ++k)
        if (sv(k) > R(1e-8) * smax) ++rank;
      if (dim_w - rank != 1)
        throw DecompositionError("highest-weight kernel for v=" + comp.v.str() + " in " +
                                 t.str() + "(x)" + s.str() + " has dimension " +
                                 std::to_string(dim_w - rank));
      for (int k = 0; k < dim_w; ++k) x[k] = svd.matrixV()(k, dim_w - 1);
    }
    orthogonalize(x, n0, lo);
    // Phase: coefficient on xi^t_{-t} (x) xi^s_{t-v} positive; a = 0 lies in range.
    if (lo != 0 || abs(x[0]) < R(1e-300))
      throw DecompositionError("phase reference vanishes for v=" + comp.v.str());
    if (x[0] < R(0))
      for (auto& c : x) c = -c;
    comp.a_lo[0] = lo;
    comp.coef[0] = x;

    for (int b = 0; b < tv; ++b) {
      const int n = n0 + b;
      auto [plo, phi] = a_range(n);
      auto [nlo, nhi] = a_range(n + 1);
      std::vector<R> y(nhi - nlo + 1, R(0));
      const auto& prev = comp.coef[b];
      for (int a = plo; a <= phi; ++a) {
        const R c = prev[a - plo];
        const int i = n - a;
        if (a < tt) y[a + 1 - nlo] += f_coef(tt, a) * kinv_s[i] * c;
        if (i < ts) y[a - nlo] += k_t[a] * f_coef(ts, i) * c;
      }
      const R norm_f = sqrt(qn[tv - b] * qn[b + 1]);
      for (auto& c : y) c /= norm_f;
      orthogonalize(y, n + 1, nlo);
      comp.a_lo[b + 1] = nlo;
      comp.coef[b + 1] = std::move(y);
    }
    built.push_back(std::move(comp));
  }
  out.components.assign(built.rbegin(), built.rend());
  return out;
}

template <class R>
std::shared_ptr<const IntertwinerBasisT<R>> cached_intertwiner(double q, SpinLabel t, SpinLabel s) {
  using Ptr = std::shared_ptr<const IntertwinerBasisT<R>>;
  using Key = std::tuple<double, int, int>;
  static std::mutex mutex;
  static std::map<Key, std::shared_future<Ptr>> cache;

  const Key key{q, t.twice(), s.twice()};
  std::promise<Ptr> promise;
  std::shared_future<Ptr> future;
  bool owner = false;
  {
    std::lock_guard lock(mutex);
    auto it = cache.find(key);
    if (it != cache.end()) {
      future = it->second;
    } else {
      future = promise.get_future().share();
      cache.emplace(key, future);
      owner = true;
    }
  }
  if (owner) {
    try {
      promise.set_value(std::make_shared<const IntertwinerBasisT<R>>(build_intertwiner<R>(R(q), t, s)));
    } catch (...) {
      {
        std::lock_guard lock(mutex);
        cache.erase(key);
      }
      promise.set_exception(std::current_exception());
    }
  }
  return future.get();
}

}  // namespace qwalk::detail

namespace qwalk {

template <class R>
IrrepBlockT<R> irrep_t(const R& q, SpinLabel s) {
  using std::pow;
  using std::sqrt;
  const int ts = s.twice(), d = s.dim();
  const auto qn = detail::q_number_table(q, ts + 1);
  const R qh = sqrt(q);
  IrrepBlockT<R> out;
  out.s = s;
  out.dim = d;
  out.K = Mat<R>::Zero(d, d);
  out.E = Mat<R>::Zero(d, d);
  out.F = Mat<R>::Zero(d, d);
  out.rho = Mat<R>::Zero(d, d);
  for (int a = 0; a < d; ++a) {
    const int twice_j = 2 * a - ts;
    out.K(a, a) = pow(qh, -twice_j);
    out.rho(a, a) = pow(q, twice_j);
    if (a > 0) out.E(a - 1, a) = sqrt(qn[a] * qn[ts - a + 1]);
    if (a < ts) out.F(a + 1, a) = sqrt(qn[ts - a] * qn[a + 1]);
  }
  out.qdim = qn[ts + 1];
  return out;
}

template <class R>
R cg_half_t(const R& q, SpinLabel s, int eps, SpinLabel target, int twice_j) {
  using std::pow;
  using std::sqrt;
  const int ts = s.twice();
  if (eps != 1 && eps != -1) throw DomainError("eps must be +1 or -1");
  if (std::abs(twice_j) > ts || ((twice_j + ts) & 1))
    throw DomainError("magnetic index outside spin " + s.str());
  const bool up = target.twice() == ts + 1;
  if (!up && target.twice() != ts - 1)
    throw DomainError("target must be s +- 1/2");
  if (std::abs(twice_j + eps) > target.twice())
    throw DomainError("resulting magnetic index outside target spin");
  const R q4 = sqrt(sqrt(q));
  const R denom = q_number_t(q, ts + 1);
  const int sp = (ts + twice_j) / 2;  // s + j
  const int sm = (ts - twice_j) / 2;  // s - j
  if (up) {
    if (eps > 0) return pow(q4, twice_j - ts) * sqrt(q_number_t(q, sp + 1) / denom);
    return pow(q4, ts + twice_j) * sqrt(q_number_t(q, sm + 1) / denom);
  }
  if (eps > 0) return -pow(q4, ts + twice_j + 2) * sqrt(q_number_t(q, sm) / denom);
  return pow(q4, twice_j - ts - 2) * sqrt(q_number_t(q, sp) / denom);
}

template <class R>
std::shared_ptr<const IntertwinerBasisT<R>> intertwiner_basis_t(double q, SpinLabel t, SpinLabel s) {
  return detail::cached_intertwiner<R>(q, t, s);
}

}  // namespace qwalk
