#include "detail/repsuq2.ipp"

namespace qwalk {

template IrrepBlockT<double> irrep_t<double>(const double&, SpinLabel);
template double cg_half_t<double>(const double&, SpinLabel, int, SpinLabel, int);
template std::shared_ptr<const IntertwinerBasisT<double>> intertwiner_basis_t<double>(double, SpinLabel,
                                                                                      SpinLabel);

IrrepBlock irrep(const QContext& ctx, SpinLabel s) { return irrep_t(ctx.q(), s); }

std::complex<double> phi_state(const QContext& ctx, SpinLabel s, const Eigen::MatrixXcd& x) {
  const int d = s.dim();
  if (x.rows() != d || x.cols() != d)
    throw DimensionError("phi_state: expected " + std::to_string(d) + "x" + std::to_string(d) +
                         " matrix for spin " + s.str());
  std::complex<double> acc = 0.0;
  for (int a = 0; a < d; ++a) acc += x(a, a) * std::pow(ctx.q(), s.twice() - 2 * a);
  return acc / quantum_dim(ctx, s);
}

std::vector<SpinLabel> fusion_components(SpinLabel t, SpinLabel s) {
  std::vector<SpinLabel> out;
  for (int v = std::abs(t.twice() - s.twice()); v <= t.twice() + s.twice(); v += 2)
    out.emplace_back(v);
  return out;
}

double cg_half(const QContext& ctx, SpinLabel s, int eps, SpinLabel target, int twice_j) {
  return cg_half_t(ctx.q(), s, eps, target, twice_j);
}

std::shared_ptr<const IntertwinerBasis> intertwiner_basis(const QContext& ctx, SpinLabel t,
                                                          SpinLabel s) {
  return intertwiner_basis_t<double>(ctx.q(), t, s);
}

}  // namespace qwalk
