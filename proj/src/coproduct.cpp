#include "qwalk/coproduct.hpp"

#include <set>
#include <sstream>

#include "detail/coproduct.ipp"

namespace qwalk {

template double central_value<double>(const double&, Central, SpinLabel);
template std::pair<Mat<double>, Mat<double>> eval_block_split<double>(const double&,
                                                                      const AlgebraElement&, SpinLabel);

AlgebraElement AlgebraElement::scalar(cplx c) {
  AlgebraElement out;
  out.terms_.push_back({c, {}, {}});
  return out;
}

AlgebraElement AlgebraElement::generator(Gen g) {
  AlgebraElement out;
  out.terms_.push_back({1.0, {g}, {}});
  return out;
}

AlgebraElement AlgebraElement::central(Central c) {
  AlgebraElement out;
  out.terms_.push_back({1.0, {}, {c}});
  return out;
}

bool AlgebraElement::has_central() const {
  for (const auto& t : terms_)
    if (!t.central.empty()) return true;
  return false;
}

std::string AlgebraElement::str() const {
  static const char* gen_names[] = {"k", "k^-1", "e", "f"};
  static const char* central_names[] = {"lambda", "lambda^-1", "lambda~", "lambda~^-1"};
  if (terms_.empty()) return "0";
  std::ostringstream os;
  for (std::size_t n = 0; n < terms_.size(); ++n) {
    const auto& t = terms_[n];
    if (n) os << " + ";
    os << "(" << t.coef.real() << (t.coef.imag() < 0 ? "" : "+") << t.coef.imag() << "i)";
    for (Central c : t.central) os << "*" << central_names[static_cast<int>(c)];
    for (Gen g : t.word) os << "*" << gen_names[static_cast<int>(g)];
  }
  return os.str();
}

AlgebraElement operator+(AlgebraElement a, const AlgebraElement& b) {
  a.terms_.insert(a.terms_.end(), b.terms_.begin(), b.terms_.end());
  return a;
}

AlgebraElement operator-(AlgebraElement a, const AlgebraElement& b) {
  return std::move(a) + cplx(-1.0) * b;
}

AlgebraElement operator*(const AlgebraElement& a, const AlgebraElement& b) {
  AlgebraElement out;
  for (const auto& x : a.terms_)
    for (const auto& y : b.terms_) {
      AlgebraElement::Term t{x.coef * y.coef, x.word, x.central};
      t.word.insert(t.word.end(), y.word.begin(), y.word.end());
      t.central.insert(t.central.end(), y.central.begin(), y.central.end());
      out.terms_.push_back(std::move(t));
    }
  return out;
}

AlgebraElement operator*(cplx c, AlgebraElement a) {
  for (auto& t : a.terms_) t.coef *= c;
  return a;
}

Eigen::MatrixXcd eval_block(const QContext& ctx, const AlgebraElement& a, SpinLabel s) {
  auto [re, im] = eval_block_split(ctx.q(), a, s);
  Eigen::MatrixXcd out(re.rows(), re.cols());
  out.real() = re;
  out.imag() = im;
  return out;
}

// ---------------------------------------------------------------------------

BlockOperator BlockOperator::identity(SpinLabel s) {
  BlockOperator out;
  out.set(s, Eigen::MatrixXcd::Identity(s.dim(), s.dim()));
  return out;
}

BlockOperator BlockOperator::identity_window(int twice_max) {
  BlockOperator out;
  for (int t = 0; t <= twice_max; ++t) out.set(SpinLabel(t), Eigen::MatrixXcd::Identity(t + 1, t + 1));
  return out;
}

BlockOperator BlockOperator::matrix_unit(SpinLabel s, int i, int j) {
  if (i < 0 || j < 0 || i >= s.dim() || j >= s.dim())
    throw DomainError("matrix unit index outside spin " + s.str());
  Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(s.dim(), s.dim());
  m(i, j) = 1.0;
  BlockOperator out;
  out.set(s, std::move(m));
  return out;
}

void BlockOperator::set(SpinLabel s, Eigen::MatrixXcd m) {
  if (m.rows() != s.dim() || m.cols() != s.dim())
    throw DimensionError("block for spin " + s.str() + " must be " + std::to_string(s.dim()) + "x" +
                         std::to_string(s.dim()));
  blocks_[s] = std::move(m);
}

const Eigen::MatrixXcd& BlockOperator::at(SpinLabel s) const {
  auto it = blocks_.find(s);
  if (it == blocks_.end()) throw DomainError("spin " + s.str() + " not in support");
  return it->second;
}

Eigen::MatrixXcd BlockOperator::block(SpinLabel s) const {
  auto it = blocks_.find(s);
  return it == blocks_.end() ? Eigen::MatrixXcd::Zero(s.dim(), s.dim()) : it->second;
}

std::vector<SpinLabel> BlockOperator::support() const {
  std::vector<SpinLabel> out;
  for (const auto& [s, _] : blocks_) out.push_back(s);
  return out;
}

double BlockOperator::norm() const {
  double n = 0.0;
  for (const auto& [s, m] : blocks_) {
    Eigen::JacobiSVD<Eigen::MatrixXcd> svd(m);
    n = std::max(n, svd.singularValues()(0));
  }
  return n;
}

BlockOperator& BlockOperator::operator+=(const BlockOperator& other) {
  for (const auto& [s, m] : other.blocks_) {
    auto it = blocks_.find(s);
    if (it == blocks_.end())
      blocks_.emplace(s, m);
    else
      it->second += m;
  }
  return *this;
}

BlockOperator operator*(cplx c, BlockOperator x) {
  for (auto& [s, m] : x.blocks_) m *= c;
  return x;
}

// ---------------------------------------------------------------------------

namespace {

Eigen::MatrixXcd kron(const Eigen::MatrixXd& A, const Eigen::MatrixXd& B) {
  Eigen::MatrixXcd out(A.rows() * B.rows(), A.cols() * B.cols());
  for (Eigen::Index i = 0; i < A.rows(); ++i)
    for (Eigen::Index j = 0; j < A.cols(); ++j)
      out.block(i * B.rows(), j * B.cols(), B.rows(), B.cols()) = (A(i, j) * B).cast<cplx>();
  return out;
}

}  // namespace

PairOperator coproduct_pair_word(const QContext& ctx, const AlgebraElement& a, SpinLabel t,
                                 SpinLabel s) {
  if (a.has_central())
    throw UnsupportedElementError("Kronecker route cannot evaluate central factors");
  const auto pt = irrep(ctx, t), ps = irrep(ctx, s);
  const Eigen::MatrixXd kti = pt.K.inverse(), ksi = ps.K.inverse();
  const Eigen::MatrixXcd dk = kron(pt.K, ps.K), dkinv = kron(kti, ksi);
  const Eigen::MatrixXcd de = kron(pt.E, ksi) + kron(pt.K, ps.E);
  const Eigen::MatrixXcd df = kron(pt.F, ksi) + kron(pt.K, ps.F);
  const int n = t.dim() * s.dim();
  PairOperator out{t, s, Eigen::MatrixXcd::Zero(n, n)};
  for (const auto& term : a.terms()) {
    Eigen::MatrixXcd M = Eigen::MatrixXcd::Identity(n, n);
    for (Gen g : term.word) {
      switch (g) {
        case Gen::K: M = M * dk; break;
        case Gen::Kinv: M = M * dkinv; break;
        case Gen::E: M = M * de; break;
        case Gen::F: M = M * df; break;
      }
    }
    out.matrix += term.coef * M;
  }
  return out;
}

PairOperator coproduct_pair(const QContext& ctx, const AlgebraElement& a, SpinLabel t, SpinLabel s) {
  const auto basis = intertwiner_basis(ctx, t, s);
  const int n = t.dim() * s.dim();
  PairOperator out{t, s, Eigen::MatrixXcd::Zero(n, n)};
  for (const auto& comp : basis->components) {
    const Eigen::MatrixXcd T = basis->isometry(comp).cast<cplx>();
    out.matrix += T * eval_block(ctx, a, comp.v) * T.transpose();
  }
  return out;
}

// ---------------------------------------------------------------------------

BandedOperator to_banded(const BlockOperator& x) {
  BandedOperator out;
  for (const auto& [s, m] : x.blocks()) {
    auto& bands = out[s.twice()];
    const int d = s.dim();
    for (int delta = -(d - 1); delta <= d - 1; ++delta) {
      Eigen::VectorXcd band = m.diagonal(delta);
      if ((band.array() != cplx(0.0)).any()) bands.emplace(delta, std::move(band));
    }
  }
  return out;
}

BlockOperator to_dense(const BandedOperator& x) {
  BlockOperator out;
  for (const auto& [tw, bands] : x) {
    Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(tw + 1, tw + 1);
    for (const auto& [delta, band] : bands) m.diagonal(delta) = band;
    out.set(SpinLabel(tw), std::move(m));
  }
  return out;
}

double banded_block_norm(int twice, const std::map<int, Eigen::VectorXcd>& bands) {
  // sqrt(||A||_1 ||A||_inf) bounds the spectral norm and stays O(bands * dim).
  const int d = twice + 1;
  std::vector<double> row(d, 0.0), col(d, 0.0);
  for (const auto& [delta, band] : bands) {
    const int r0 = std::max(0, -delta);
    for (Eigen::Index k = 0; k < band.size(); ++k) {
      const double v = std::abs(band[k]);
      row[r0 + k] += v;
      col[r0 + k + delta] += v;
    }
  }
  const double r = *std::max_element(row.begin(), row.end());
  const double c = *std::max_element(col.begin(), col.end());
  return std::sqrt(r * c);
}

BandedOperator markov_apply_banded(const QContext& ctx, const Measure& mu, const BandedOperator& x,
                                   int max_twice) {
  const double q = ctx.q();
  BandedOperator out;
  for (const auto& [tr, mur] : mu.weights()) {
    const SpinLabel r(tr);
    const double dr = q_number(ctx, tr + 1);
    std::vector<double> w(tr + 1);
    for (int a = 0; a <= tr; ++a) w[a] = std::pow(q, tr - 2 * a) / dr;

    std::set<int> targets;
    for (const auto& [tv, _] : x)
      for (int tt = std::abs(tv - tr); tt <= tv + tr && tt <= max_twice; tt += 2) targets.insert(tt);

    for (int tt : targets) {
      const auto basis = intertwiner_basis(ctx, r, SpinLabel(tt));
      auto& ob = out[tt];
      for (const auto& comp : basis->components) {
        auto it = x.find(comp.v.twice());
        if (it == x.end()) continue;
        const int tv = comp.v.twice(), off = comp.offset;
        for (const auto& [delta, band] : it->second) {
          if (std::abs(delta) > tt) continue;
          auto& o = ob[delta];
          if (o.size() == 0) o = Eigen::VectorXcd::Zero(tt + 1 - std::abs(delta));
          const int i0 = std::max(0, -delta);
          for (Eigen::Index k = 0; k < o.size(); ++k) {
            const int i = static_cast<int>(k) + i0, ip = i + delta;
            const int a_lo = std::max({0, off - i, off - ip});
            const int a_hi = std::min({tr, tv + off - i, tv + off - ip});
            cplx acc = 0.0;
            for (int a = a_lo; a <= a_hi; ++a) {
              const int b = a + i - off, bp = a + ip - off;
              acc += (w[a] * comp.at(b, a) * comp.at(bp, a)) * band[b - i0];
            }
            o[k] += mur * acc;
          }
        }
      }
    }
  }
  return out;
}

BlockOperator markov_apply(const QContext& ctx, const Measure& mu, const BlockOperator& x) {
  return to_dense(markov_apply_banded(ctx, mu, to_banded(x)));
}

std::complex<double> haar_weight(const QContext& ctx, const BlockOperator& x) {
  cplx acc = 0.0;
  for (const auto& [s, m] : x.blocks()) {
    const double d = quantum_dim(ctx, s);
    acc += d * d * phi_state(ctx, s, m);
  }
  return acc;
}

}  // namespace qwalk
