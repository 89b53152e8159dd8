// All 80-digit instantiations live here so the multiprecision templates compile once.
#include <set>

#include "detail/coproduct.ipp"
#include "detail/highprec_api.hpp"
#include "qwalk/highprec.hpp"

namespace qwalk {

template IrrepBlockT<HighReal> irrep_t<HighReal>(const HighReal&, SpinLabel);
template HighReal cg_half_t<HighReal>(const HighReal&, SpinLabel, int, SpinLabel, int);
template std::shared_ptr<const IntertwinerBasisT<HighReal>> intertwiner_basis_t<HighReal>(double, SpinLabel,
                                                                                          SpinLabel);
template HighReal central_value<HighReal>(const HighReal&, Central, SpinLabel);
template std::pair<Mat<HighReal>, Mat<HighReal>> eval_block_split<HighReal>(const HighReal&,
                                                                            const AlgebraElement&, SpinLabel);

namespace detail {

// Entry ((a,i),(a',i')) of D is delta_{aa'} X_s(i,i') - sum_v C_v(b;a) X_v(b,b') C_v(b';a')
// with b = a+i-offset_v. Entries vanish unless the weight shift (a'+i') - (a+i) is a
// band of some X, which keeps the loop linear in dim for fixed t.
std::pair<double, double> deviation_hp(double q_d, SpinLabel t, SpinLabel s, const AlgebraElement& x) {
  using R = HighReal;
  const R q(q_d);
  const int tt = t.twice(), ts = s.twice();
  const auto basis = intertwiner_basis_t<R>(q_d, t, s);

  std::set<int> shifts;
  auto collect = [&](const Mat<R>& re, const Mat<R>& im) {
    for (Eigen::Index r = 0; r < re.rows(); ++r)
      for (Eigen::Index c = 0; c < re.cols(); ++c)
        if (re(r, c) != 0 || im(r, c) != 0) shifts.insert(static_cast<int>(c - r));
  };
  const auto xs = eval_block_split(q, x, s);
  collect(xs.first, xs.second);
  std::vector<std::pair<Mat<R>, Mat<R>>> xv;
  for (const auto& comp : basis->components) {
    xv.push_back(eval_block_split(q, x, comp.v));
    collect(xv.back().first, xv.back().second);
  }

  std::vector<R> wt(tt + 1), ws(ts + 1);
  for (int a = 0; a <= tt; ++a) wt[a] = pow(q, tt - 2 * a);
  for (int i = 0; i <= ts; ++i) ws[i] = pow(q, ts - 2 * i);

  R value = 0, value_star = 0;
  for (int a = 0; a <= tt; ++a)
    for (int i = 0; i <= ts; ++i) {
      const int n = a + i;
      for (int shift : shifts) {
        const int np = n + shift;
        for (int ap = std::max(0, np - ts); ap <= std::min(tt, np); ++ap) {
          const int ip = np - ap;
          R re = 0, im = 0;
          if (a == ap) {
            re = xs.first(i, ip);
            im = xs.second(i, ip);
          }
          for (std::size_t k = 0; k < basis->components.size(); ++k) {
            const auto& comp = basis->components[k];
            const int b = n - comp.offset, bp = np - comp.offset;
            const int dv = comp.v.dim();
            if (b < 0 || b >= dv || bp < 0 || bp >= dv) continue;
            const R c = comp.at(b, a) * comp.at(bp, ap);
            re -= c * xv[k].first(b, bp);
            im -= c * xv[k].second(b, bp);
          }
          const R mag2 = re * re + im * im;
          value += mag2 * wt[ap] * ws[ip];
          value_star += mag2 * wt[a] * ws[i];
        }
      }
    }
  const R norm = q_number_t(q, tt + 1) * q_number_t(q, ts + 1);
  return {static_cast<double>(value / norm), static_cast<double>(value_star / norm)};
}

double closed_form_xt0_hp(double q_d, SpinLabel s) {
  using R = HighReal;
  const R q(q_d);
  const int ts = s.twice();
  const R ds = q_number_t(q, ts + 1);
  const R bracket = (pow(q, ts - 2) + pow(q, ts + 4)) * q_number_t(q, ts + 1, 3) -
                    (pow(q, -2) + pow(q, 2)) * q_number_t(q, ts + 1, 2);
  const R v = pow(q, 2 * ts) * (q - 1 / q) * bracket / (q_number_t(q, 2) * ds * ds);
  return static_cast<double>(v);
}

}  // namespace detail
}  // namespace qwalk
