#pragma once

#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "qwalk/measure.hpp"
#include "qwalk/qarith.hpp"

namespace qwalk {

// Fusion data on integer labels; label 0 is the unit.
class FusionRing {
 public:
  virtual ~FusionRing() = default;

  virtual std::string name() const = 0;
  virtual bool has_label(int s) const = 0;
  // Pairs (t, m_{r,s}^t) with positive multiplicity, t ascending.
  virtual std::vector<std::pair<int, int>> product(int r, int s) const = 0;
  virtual double qdim(int s) const = 0;
  virtual int cdim(int s) const = 0;
  virtual int dual(int s) const = 0;
  virtual std::string label_name(int s) const { return std::to_string(s); }

  int multiplicity(int r, int s, int t) const;
};

// SU_q(2): label = 2s, fusion |r-s|, ..., r+s.
class SUq2Ring final : public FusionRing {
 public:
  explicit SUq2Ring(const QContext& ctx) : ctx_(ctx) {}

  std::string name() const override { return "SU_q(2)"; }
  bool has_label(int s) const override { return s >= 0; }
  std::vector<std::pair<int, int>> product(int r, int s) const override;
  double qdim(int s) const override { return q_number(ctx_, s + 1); }
  int cdim(int s) const override { return s + 1; }
  int dual(int s) const override { return s; }
  std::string label_name(int s) const override { return SpinLabel(s).str(); }
  const QContext& context() const { return ctx_; }

 private:
  QContext ctx_;
};

// Finite table of fusion data. Products that are not tabulated raise WindowError.
class TableFusionRing final : public FusionRing {
 public:
  struct Triple {
    int r, s, t, m;
  };

  TableFusionRing(std::string name, std::map<int, double> qdims, std::map<int, int> cdims,
                  std::map<int, int> duals, const std::vector<Triple>& triples);

  // All pairs (r, s) with r + s <= twice_max, built from repsuq2 fusion data.
  static TableFusionRing from_suq2(const QContext& ctx, int twice_max);
  // {"name", "labels": [{"label","qdim","cdim","dual"}], "products": [[r,s,t,m], ...]}
  static TableFusionRing from_json(const std::string& text);
  std::string to_json() const;

  std::string name() const override { return name_; }
  bool has_label(int s) const override { return qdims_.count(s) != 0; }
  std::vector<std::pair<int, int>> product(int r, int s) const override;
  double qdim(int s) const override;
  int cdim(int s) const override;
  int dual(int s) const override;

 private:
  std::string name_;
  std::map<int, double> qdims_;
  std::map<int, int> cdims_, duals_;
  std::map<std::pair<int, int>, std::vector<std::pair<int, int>>> products_;
};

void validate(const FusionRing& ring, const Measure& mu);

// p_mu(s,t) = sum_r mu(r) m_{r,s}^t d_t / (d_r d_s).
double p_mu(const FusionRing& ring, const Measure& mu, int s, int t);
std::map<int, double> transition_row(const FusionRing& ring, const Measure& mu, int s);
// Row s of p_mu^n, propagated exactly over the finite support.
std::map<int, double> pn_row(const FusionRing& ring, const Measure& mu, int s, int n);
double p_n(const FusionRing& ring, const Measure& mu, int s, int t, int n);

// c_{n,r}(mu); WindowError if some positive coefficient lands above max_label.
std::map<int, double> c_constants(const FusionRing& ring, const Measure& mu, int n, int max_label);

// One step of the recursion: c_{n+1,s} = sum_{r,t} c_{n,r} mu(t) m_{r,t}^s d_s / (d_r d_t).
std::map<int, double> c_step(const FusionRing& ring, const Measure& mu, const std::map<int, double>& c);

double lambda_rate(const FusionRing& ring, const Measure& mu);

// Decomposition of s_1 (x) ... (x) s_n: label -> multiplicity.
std::map<int, long long> tensor_multiplicities(const FusionRing& ring, const std::vector<int>& labels);

struct GeneratingReport {
  bool generating = false;
  std::map<int, int> witness;            // label -> first n >= 1 with p^n(0, label) > 0
  std::optional<bool> closed_criterion;  // SU_q(2): supp(mu) has a half-integer spin
  int steps_explored = 0;
};
// Exact reach sets from 0 (not clipped to the window) for at most step_limit steps;
// generating means every label <= max_label was reached.
GeneratingReport is_generating(const FusionRing& ring, const Measure& mu, int max_label,
                               int step_limit = 0);

struct GreenValue {
  double value = 0.0;
  double tail_bound = 0.0;
};
// sum_{n=0}^{n_max} p^n(s,t) with tail (d_t/d_s)(dim_s/dim_t) lambda^{n_max+1} / (1 - lambda).
GreenValue green_classical(const FusionRing& ring, const Measure& mu, int s, int t, int n_max);
// g(s, .) for every reachable label.
std::map<int, GreenValue> green_row(const FusionRing& ring, const Measure& mu, int s, int n_max);
// g(., t) through p_mu^n(s,t) = (d_t/d_s)^2 p_{mu-bar}^n(t,s).
std::map<int, GreenValue> green_column(const FusionRing& ring, const Measure& mu, int t, int n_max);

struct ChainReport {
  double lambda = 1.0;
  GeneratingReport generating;
  bool transient_sufficient = false;
  std::map<std::pair<int, int>, GreenValue> green_table;
};
// Green table over all (s, t) with s, t <= max_label; empty when lambda >= 1.
ChainReport chain_report(const FusionRing& ring, const Measure& mu, int max_label, int n_max);

}  // namespace qwalk
