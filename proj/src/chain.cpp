#include "qwalk/chain.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "json.hpp"
#include "qwalk/repsuq2.hpp"

namespace qwalk {

int FusionRing::multiplicity(int r, int s, int t) const {
  for (const auto& [label, m] : product(r, s))
    if (label == t) return m;
  return 0;
}

std::vector<std::pair<int, int>> SUq2Ring::product(int r, int s) const {
  if (r < 0 || s < 0) throw DomainError("negative SU_q(2) label");
  std::vector<std::pair<int, int>> out;
  for (int t = std::abs(r - s); t <= r + s; t += 2) out.emplace_back(t, 1);
  return out;
}

TableFusionRing::TableFusionRing(std::string name, std::map<int, double> qdims, std::map<int, int> cdims,
                                 std::map<int, int> duals, const std::vector<Triple>& triples)
    : name_(std::move(name)), qdims_(std::move(qdims)), cdims_(std::move(cdims)), duals_(std::move(duals)) {
  if (qdims_.empty() || !qdims_.count(0)) throw DomainError("fusion table must contain the unit label 0");
  for (const auto& [label, d] : qdims_) {
    if (!(d > 0.0)) throw DomainError("quantum dimensions must be positive");
    if (!cdims_.count(label) || !duals_.count(label))
      throw DomainError("label " + std::to_string(label) + " lacks cdim or dual");
  }
  for (const auto& tr : triples) {
    if (!has_label(tr.r) || !has_label(tr.s) || !has_label(tr.t))
      throw DomainError("fusion triple refers to an unknown label");
    if (tr.m < 0) throw DomainError("negative multiplicity");
    if (tr.m > 0) products_[{tr.r, tr.s}].emplace_back(tr.t, tr.m);
  }
  for (auto& [key, list] : products_) std::sort(list.begin(), list.end());
}

TableFusionRing TableFusionRing::from_suq2(const QContext& ctx, int twice_max) {
  std::map<int, double> qdims;
  std::map<int, int> cdims, duals;
  std::vector<Triple> triples;
  for (int s = 0; s <= twice_max; ++s) {
    qdims[s] = quantum_dim(ctx, SpinLabel(s));
    cdims[s] = SpinLabel(s).dim();
    duals[s] = s;
  }
  for (int r = 0; r <= twice_max; ++r)
    for (int s = 0; r + s <= twice_max; ++s)
      for (SpinLabel t : fusion_components(SpinLabel(r), SpinLabel(s))) triples.push_back({r, s, t.twice(), 1});
  return TableFusionRing("SU_q(2) table", std::move(qdims), std::move(cdims), std::move(duals), triples);
}

TableFusionRing TableFusionRing::from_json(const std::string& text) {
  const auto j = nlohmann::json::parse(text);
  std::map<int, double> qdims;
  std::map<int, int> cdims, duals;
  for (const auto& l : j.at("labels")) {
    const int label = l.at("label").get<int>();
    qdims[label] = l.at("qdim").get<double>();
    cdims[label] = l.at("cdim").get<int>();
    duals[label] = l.at("dual").get<int>();
  }
  std::vector<Triple> triples;
  for (const auto& p : j.at("products")) {
    if (p.size() != 4) throw DomainError("product entries must be [r, s, t, m]");
    triples.push_back({p[0].get<int>(), p[1].get<int>(), p[2].get<int>(), p[3].get<int>()});
  }
  return TableFusionRing(j.value("name", std::string("table")), std::move(qdims), std::move(cdims),
                         std::move(duals), triples);
}

std::string TableFusionRing::to_json() const {
  nlohmann::json j;
  j["name"] = name_;
  j["labels"] = nlohmann::json::array();
  for (const auto& [label, d] : qdims_)
    j["labels"].push_back({{"label", label}, {"qdim", d}, {"cdim", cdims_.at(label)}, {"dual", duals_.at(label)}});
  j["products"] = nlohmann::json::array();
  for (const auto& [key, list] : products_)
    for (const auto& [t, m] : list) j["products"].push_back({key.first, key.second, t, m});
  return j.dump(1);
}

std::vector<std::pair<int, int>> TableFusionRing::product(int r, int s) const {
  auto it = products_.find({r, s});
  if (it == products_.end())
    throw WindowError("product " + std::to_string(r) + " (x) " + std::to_string(s) + " is not tabulated");
  return it->second;
}

double TableFusionRing::qdim(int s) const {
  auto it = qdims_.find(s);
  if (it == qdims_.end()) throw WindowError("label " + std::to_string(s) + " outside the table");
  return it->second;
}

int TableFusionRing::cdim(int s) const {
  auto it = cdims_.find(s);
  if (it == cdims_.end()) throw WindowError("label " + std::to_string(s) + " outside the table");
  return it->second;
}

int TableFusionRing::dual(int s) const {
  auto it = duals_.find(s);
  if (it == duals_.end()) throw WindowError("label " + std::to_string(s) + " outside the table");
  return it->second;
}

// ---------------------------------------------------------------------------

void validate(const FusionRing& ring, const Measure& mu) {
  for (int r : mu.support())
    if (!ring.has_label(r)) throw DomainError("measure charges unknown label " + std::to_string(r));
}

std::map<int, double> transition_row(const FusionRing& ring, const Measure& mu, int s) {
  std::map<int, double> row;
  const double ds = ring.qdim(s);
  for (const auto& [r, w] : mu.weights()) {
    const double dr = ring.qdim(r);
    for (const auto& [t, m] : ring.product(r, s)) row[t] += w * m * ring.qdim(t) / (dr * ds);
  }
  return row;
}

double p_mu(const FusionRing& ring, const Measure& mu, int s, int t) {
  double p = 0.0;
  const double ds = ring.qdim(s), dt = ring.qdim(t);
  for (const auto& [r, w] : mu.weights()) p += w * ring.multiplicity(r, s, t) * dt / (ring.qdim(r) * ds);
  return p;
}

namespace {

class RowCache {
 public:
  RowCache(const FusionRing& ring, const Measure& mu) : ring_(ring), mu_(mu) {}
  const std::map<int, double>& row(int s) {
    auto it = rows_.find(s);
    if (it == rows_.end()) it = rows_.emplace(s, transition_row(ring_, mu_, s)).first;
    return it->second;
  }
  std::map<int, double> step(const std::map<int, double>& v) {
    std::map<int, double> out;
    for (const auto& [s, x] : v)
      for (const auto& [t, p] : row(s)) out[t] += x * p;
    return out;
  }

 private:
  const FusionRing& ring_;
  const Measure& mu_;
  std::map<int, std::map<int, double>> rows_;
};

void require_transient(double lambda) {
  if (!(lambda < 1.0))
    throw NoCertificateError("lambda = " + std::to_string(lambda) + " >= 1: no Green tail certificate");
}

}  // namespace

std::map<int, double> pn_row(const FusionRing& ring, const Measure& mu, int s, int n) {
  if (n < 0) throw DomainError("negative power");
  RowCache cache(ring, mu);
  std::map<int, double> v{{s, 1.0}};
  for (int k = 0; k < n; ++k) v = cache.step(v);
  return v;
}

double p_n(const FusionRing& ring, const Measure& mu, int s, int t, int n) {
  const auto row = pn_row(ring, mu, s, n);
  auto it = row.find(t);
  return it == row.end() ? 0.0 : it->second;
}

std::map<int, double> c_step(const FusionRing& ring, const Measure& mu, const std::map<int, double>& c) {
  std::map<int, double> next;
  for (const auto& [r, cr] : c) {
    const double dr = ring.qdim(r);
    for (const auto& [t, w] : mu.weights()) {
      const double dt = ring.qdim(t);
      for (const auto& [s, m] : ring.product(r, t)) next[s] += cr * w * m * ring.qdim(s) / (dr * dt);
    }
  }
  return next;
}

std::map<int, double> c_constants(const FusionRing& ring, const Measure& mu, int n, int max_label) {
  if (n < 1) throw DomainError("c_constants needs n >= 1");
  auto check = [&](const std::map<int, double>& c) {
    for (const auto& [r, v] : c)
      if (r > max_label && v > 0.0)
        throw WindowError("c_{n,r} charges label " + std::to_string(r) + " beyond window " +
                          std::to_string(max_label));
  };
  std::map<int, double> c = mu.weights();
  check(c);
  for (int k = 1; k < n; ++k) {
    c = c_step(ring, mu, c);
    check(c);
  }
  return c;
}

double lambda_rate(const FusionRing& ring, const Measure& mu) {
  double lambda = 0.0;
  for (const auto& [r, w] : mu.weights()) lambda += w * ring.cdim(r) / ring.qdim(r);
  return lambda;
}

std::map<int, long long> tensor_multiplicities(const FusionRing& ring, const std::vector<int>& labels) {
  std::map<int, long long> acc{{0, 1}};
  for (int l : labels) {
    std::map<int, long long> next;
    for (const auto& [r, m] : acc)
      for (const auto& [t, mm] : ring.product(r, l)) next[t] += m * mm;
    acc = std::move(next);
  }
  return acc;
}

GeneratingReport is_generating(const FusionRing& ring, const Measure& mu, int max_label, int step_limit) {
  GeneratingReport rep;
  if (step_limit <= 0) step_limit = 4 * (max_label + 2);
  std::set<int> wanted;
  for (int l = 0; l <= max_label; ++l)
    if (ring.has_label(l)) wanted.insert(l);

  RowCache cache(ring, mu);
  std::set<int> frontier{0};
  for (int n = 1; n <= step_limit && rep.witness.size() < wanted.size(); ++n) {
    std::set<int> next;
    for (int s : frontier)
      for (const auto& [t, p] : cache.row(s))
        if (p > 0.0) next.insert(t);
    for (int t : next)
      if (wanted.count(t) && !rep.witness.count(t)) rep.witness[t] = n;
    rep.steps_explored = n;
    if (next == frontier) break;  // reach sets are periodic from here on
    frontier = std::move(next);
  }
  rep.generating = rep.witness.size() == wanted.size();
  if (dynamic_cast<const SUq2Ring*>(&ring)) {
    bool half = false;
    for (int r : mu.support()) half = half || (r % 2 == 1);
    rep.closed_criterion = half;
  }
  return rep;
}

std::map<int, GreenValue> green_row(const FusionRing& ring, const Measure& mu, int s, int n_max) {
  const double lambda = lambda_rate(ring, mu);
  require_transient(lambda);
  RowCache cache(ring, mu);
  std::map<int, double> v{{s, 1.0}}, acc;
  for (int n = 0; n <= n_max; ++n) {
    for (const auto& [t, x] : v) acc[t] += x;
    if (n < n_max) v = cache.step(v);
  }
  const double geo = std::pow(lambda, n_max + 1) / (1.0 - lambda);
  const double ds = ring.qdim(s);
  const int cs = ring.cdim(s);
  std::map<int, GreenValue> out;
  for (const auto& [t, g] : acc)
    out[t] = {g, ring.qdim(t) / ds * static_cast<double>(cs) / ring.cdim(t) * geo};
  return out;
}

namespace {

GreenValue unreached_tail(const FusionRing& ring, const Measure& mu, int s, int t, int n_max) {
  const double lambda = lambda_rate(ring, mu);
  return {0.0, ring.qdim(t) / ring.qdim(s) * static_cast<double>(ring.cdim(s)) / ring.cdim(t) *
                   std::pow(lambda, n_max + 1) / (1.0 - lambda)};
}

}  // namespace

GreenValue green_classical(const FusionRing& ring, const Measure& mu, int s, int t, int n_max) {
  const auto row = green_row(ring, mu, s, n_max);
  auto it = row.find(t);
  return it != row.end() ? it->second : unreached_tail(ring, mu, s, t, n_max);
}

std::map<int, GreenValue> green_column(const FusionRing& ring, const Measure& mu, int t, int n_max) {
  const double lambda = lambda_rate(ring, mu);
  const auto row = green_row(ring, mu.dual(ring), t, n_max);
  const double geo = std::pow(lambda, n_max + 1) / (1.0 - lambda);
  const double dt = ring.qdim(t);
  std::map<int, GreenValue> out;
  for (const auto& [s, g] : row) {
    const double ratio = dt / ring.qdim(s);
    const double direct = ratio * static_cast<double>(ring.cdim(s)) / ring.cdim(t) * geo;
    out[s] = {ratio * ratio * g.value, std::min(direct, ratio * ratio * g.tail_bound)};
  }
  return out;
}

ChainReport chain_report(const FusionRing& ring, const Measure& mu, int max_label, int n_max) {
  validate(ring, mu);
  ChainReport rep;
  rep.lambda = lambda_rate(ring, mu);
  rep.generating = is_generating(ring, mu, max_label);
  rep.transient_sufficient = rep.lambda < 1.0;
  if (!rep.transient_sufficient) return rep;
  for (int s = 0; s <= max_label; ++s) {
    if (!ring.has_label(s)) continue;
    const auto row = green_row(ring, mu, s, n_max);
    for (int t = 0; t <= max_label; ++t) {
      if (!ring.has_label(t)) continue;
      auto it = row.find(t);
      rep.green_table[{s, t}] = it != row.end() ? it->second : unreached_tail(ring, mu, s, t, n_max);
    }
  }
  return rep;
}

}  // namespace qwalk
