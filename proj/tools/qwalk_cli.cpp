// Batch driver: irreps, chain, martin, estimate, converge.
// Exit codes: 0 all PASS, 1 usage error, 2 some FAIL verdict, 3 precondition refusal.
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <variant>
#include <vector>

#include <fmt/format.h>

#include "CLI11.hpp"
#include "json.hpp"
#include "qwalk/chain.hpp"
#include "qwalk/converge.hpp"
#include "qwalk/io.hpp"
#include "qwalk/martin.hpp"

using namespace qwalk;
using nlohmann::json;

namespace {

constexpr int kExitUsage = 1;
constexpr int kExitFail = 2;
constexpr int kExitRefusal = 3;

struct Config {
  double q = 0.5;
  Measure mu = Measure::dirac(1);
  int twice_s_max = 20;
  int n_max = 200;
  double tol = 1e-12;
  std::string out_dir = ".";
  std::string format = "csv";
  std::uint64_t seed = 20261018;
  // martin
  std::string input = "I:0";
  // chain
  bool green = true;
  long mc_paths = 0;
  int mc_cutoff_twice = 120;
  // estimate / converge
  std::vector<int> generators{-1, 0, 1};
  int converge_generator = 0;
  int constant_twice_s_max = 80;
};

int parse_twice_spin(const json& v) {
  if (v.is_string()) return SpinLabel::parse(v.get<std::string>()).twice();
  if (v.is_number()) return SpinLabel::parse(fmt::format("{}", v.get<double>())).twice();
  throw DomainError("spin must be a number or a string such as \"3/2\"");
}

Measure parse_measure(const json& v) {
  if (v.is_string()) return Measure::parse_spins(v.get<std::string>());
  if (!v.is_array()) throw DomainError("mu must be a string or a list of [twice_s, weight] pairs");
  std::map<int, double> w;
  for (const auto& p : v) {
    if (!p.is_array() || p.size() != 2) throw DomainError("mu entries must be [twice_s, weight]");
    w[p[0].get<int>()] += p[1].get<double>();
  }
  return Measure(std::move(w));
}

int parse_generator(const std::string& name) {
  if (name == "xtm1" || name == "-1") return -1;
  if (name == "xt0" || name == "0") return 0;
  if (name == "xt1" || name == "1") return 1;
  throw DomainError("generator must be xtm1, xt0 or xt1");
}

std::string generator_name(int i) { return i < 0 ? "xtm1" : (i == 0 ? "xt0" : "xt1"); }

void load_config_file(Config& cfg, const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DomainError("cannot open config " + path);
  const json j = json::parse(in);
  if (j.contains("q")) cfg.q = j["q"].get<double>();
  if (j.contains("mu")) cfg.mu = parse_measure(j["mu"]);
  if (j.contains("s_max")) cfg.twice_s_max = parse_twice_spin(j["s_max"]);
  if (j.contains("n_max")) cfg.n_max = j["n_max"].get<int>();
  if (j.contains("tol")) cfg.tol = j["tol"].get<double>();
  if (j.contains("out_dir")) cfg.out_dir = j["out_dir"].get<std::string>();
  if (j.contains("format")) cfg.format = j["format"].get<std::string>();
  if (j.contains("seed")) cfg.seed = j["seed"].get<std::uint64_t>();
  if (j.contains("chain")) {
    const auto& c = j["chain"];
    if (c.contains("green")) cfg.green = c["green"].get<bool>();
    if (c.contains("mc_paths")) cfg.mc_paths = c["mc_paths"].get<long>();
    if (c.contains("mc_cutoff")) cfg.mc_cutoff_twice = parse_twice_spin(c["mc_cutoff"]);
  }
  if (j.contains("martin") && j["martin"].contains("input")) cfg.input = j["martin"]["input"].get<std::string>();
  if (j.contains("estimate") && j["estimate"].contains("generators")) {
    cfg.generators.clear();
    for (const auto& g : j["estimate"]["generators"]) cfg.generators.push_back(parse_generator(g.get<std::string>()));
  }
  if (j.contains("converge")) {
    const auto& c = j["converge"];
    if (c.contains("generator")) cfg.converge_generator = parse_generator(c["generator"].get<std::string>());
    if (c.contains("constant_s_max")) cfg.constant_twice_s_max = parse_twice_spin(c["constant_s_max"]);
  }
}

void check_config(const Config& cfg) {
  if (!(cfg.q > 0.0 && cfg.q < 1.0)) throw DomainError("q must lie in (0, 1)");
  if (cfg.twice_s_max < 1) throw DomainError("s_max must be at least 1/2");
  if (cfg.n_max < 1) throw DomainError("n_max must be at least 1");
  if (!(cfg.tol > 0.0)) throw DomainError("tol must be positive");
  if (cfg.format != "csv" && cfg.format != "json") throw DomainError("format must be csv or json");
}

// Rows of numbers and strings, written as CSV or as a JSON array of objects.
class Table {
 public:
  using Cell = std::variant<std::string, double, long long>;
  explicit Table(std::vector<std::string> header) : header_(std::move(header)) {}
  void add(std::vector<Cell> row) {
    if (row.size() != header_.size()) throw DimensionError("table row width does not match header");
    rows_.push_back(std::move(row));
  }
  std::string csv() const {
    io::CsvTable t(header_);
    for (const auto& r : rows_) {
      std::vector<std::string> cells;
      for (const auto& c : r) {
        if (auto s = std::get_if<std::string>(&c)) cells.push_back(*s);
        else if (auto d = std::get_if<double>(&c)) cells.push_back(io::num(*d));
        else cells.push_back(std::to_string(std::get<long long>(c)));
      }
      t.add(std::move(cells));
    }
    return t.str();
  }
  json to_json() const {
    json out = json::array();
    for (const auto& r : rows_) {
      json o = json::object();
      for (std::size_t i = 0; i < r.size(); ++i) std::visit([&](const auto& v) { o[header_[i]] = v; }, r[i]);
      out.push_back(std::move(o));
    }
    return out;
  }

 private:
  std::vector<std::string> header_;
  std::vector<std::vector<Cell>> rows_;
};

class Output {
 public:
  explicit Output(const Config& cfg) : dir_(cfg.out_dir), format_(cfg.format) {
    std::filesystem::create_directories(dir_);
  }
  void table(const std::string& stem, const Table& t) {
    if (format_ == "csv") write(stem + ".csv", t.csv());
    else write(stem + ".json", t.to_json().dump(2) + "\n");
  }
  void raw(const std::string& name, const std::string& text) { write(name, text); }

 private:
  void write(const std::string& name, const std::string& text) {
    const auto path = dir_ / name;
    std::ofstream out(path, std::ios::binary);
    if (!out) throw DomainError("cannot write " + path.string());
    out << text;
    std::cout << path.string() << "\n";
  }
  std::filesystem::path dir_;
  std::string format_;
};

std::string verdict(bool ok, bool& all) {
  all = all && ok;
  return ok ? "PASS" : "FAIL";
}

double rel_res(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b) {
  const double scale = std::max({1.0, a.cwiseAbs().maxCoeff(), b.cwiseAbs().maxCoeff()});
  return (a - b).cwiseAbs().maxCoeff() / scale;
}

int cmd_irreps(const Config& cfg) {
  const QContext ctx(cfg.q);
  const double q = cfg.q;
  Output out(cfg);
  Table t({"twice_s", "spin", "dim", "qdim", "res_kek", "res_kfk", "res_ef", "verdict"});
  json blocks = json::array();
  bool all = true;
  for (int ts = 0; ts <= cfg.twice_s_max; ++ts) {
    const SpinLabel s(ts);
    const auto p = irrep(ctx, s);
    const Eigen::MatrixXd Ki = p.K.inverse();
    const double r1 = rel_res(p.K * p.E * Ki, q * p.E);
    const double r2 = rel_res(p.K * p.F * Ki, p.F / q);
    const double r3 = rel_res(p.E * p.F - p.F * p.E, (p.K * p.K - Ki * Ki) / (q - 1 / q));
    const std::string v = verdict(std::max({r1, r2, r3}) < cfg.tol, all);
    t.add({static_cast<long long>(ts), s.str(), static_cast<long long>(s.dim()), p.qdim, r1, r2, r3, v});
    blocks.push_back({{"twice_s", ts},
                      {"spin", s.str()},
                      {"dim", s.dim()},
                      {"qdim", p.qdim},
                      {"K", io::matrix_json(p.K)},
                      {"E", io::matrix_json(p.E)},
                      {"F", io::matrix_json(p.F)},
                      {"rho", io::matrix_json(p.rho)},
                      {"residuals", {{"kek", r1}, {"kfk", r2}, {"ef", r3}}},
                      {"verdict", v}});
  }
  out.raw("irreps.json", json{{"q", q}, {"tol", cfg.tol}, {"blocks", blocks}}.dump(2) + "\n");
  if (cfg.format == "csv") out.table("irreps", t);
  return all ? 0 : kExitFail;
}

struct McEstimate {
  double mean = 0.0, stderr_ = 0.0;
};

// Expected visits to `target` from `start`, absorbing at labels >= cutoff.
McEstimate green_monte_carlo(const FusionRing& ring, const Measure& mu, int start, int target, long paths,
                             int cutoff, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::map<int, std::pair<std::vector<int>, std::discrete_distribution<int>>> rows;
  auto step = [&](int s) {
    auto it = rows.find(s);
    if (it == rows.end()) {
      std::vector<int> labels;
      std::vector<double> probs;
      for (const auto& [t, p] : transition_row(ring, mu, s)) {
        labels.push_back(t);
        probs.push_back(p);
      }
      it = rows.emplace(s, std::make_pair(labels, std::discrete_distribution<int>(probs.begin(), probs.end()))).first;
    }
    return it->second.first[it->second.second(rng)];
  };
  double sum = 0.0, sum2 = 0.0;
  for (long p = 0; p < paths; ++p) {
    int s = start;
    double visits = s == target ? 1.0 : 0.0;
    while (s < cutoff) {
      s = step(s);
      if (s == target) visits += 1.0;
    }
    sum += visits;
    sum2 += visits * visits;
  }
  const double mean = sum / paths;
  return {mean, std::sqrt(std::max(0.0, sum2 / paths - mean * mean) / paths)};
}

int cmd_chain(const Config& cfg) {
  const QContext ctx(cfg.q);
  const SUq2Ring ring(ctx);
  validate(ring, cfg.mu);
  Output out(cfg);
  const int W = cfg.twice_s_max;
  bool all = true;

  Table p({"twice_s", "twice_t", "p"});
  Table rows({"twice_s", "row_sum", "verdict"});
  for (int s = 0; s <= W; ++s) {
    double sum = 0.0;
    for (const auto& [t, v] : transition_row(ring, cfg.mu, s)) {
      sum += v;
      p.add({static_cast<long long>(s), static_cast<long long>(t), v});
    }
    rows.add({static_cast<long long>(s), sum, verdict(std::abs(sum - 1.0) <= 1e-12, all)});
  }
  out.table("chain_p", p);
  out.table("chain_rows", rows);

  const double lambda = lambda_rate(ring, cfg.mu);
  const int n_c = 12;
  Table c({"n", "twice_r", "c"});
  Table csum({"n", "sum_c", "sum_c_over_d", "lambda_pow_n", "verdict"});
  for (int n = 1; n <= n_c; ++n) {
    double total = 0.0, weighted = 0.0;
    for (const auto& [r, v] : c_constants(ring, cfg.mu, n, n * cfg.mu.max_label())) {
      c.add({static_cast<long long>(n), static_cast<long long>(r), v});
      total += v;
      weighted += v / ring.qdim(r);
    }
    const double ln = std::pow(lambda, n);
    csum.add({static_cast<long long>(n), total, weighted, ln,
              verdict(std::abs(total - 1.0) <= 1e-12 && weighted <= ln * (1 + 1e-12), all)});
  }
  out.table("chain_c", c);
  out.table("chain_c_sums", csum);

  Table dual({"n", "twice_s", "twice_t", "p_mubar_n", "dual_rhs", "gap", "verdict"});
  const auto mubar = cfg.mu.dual(ring);
  const int Wd = std::min(W, 12);
  for (int n = 0; n <= 8; ++n)
    for (int s = 0; s <= Wd; ++s)
      for (int t = 0; t <= Wd; ++t) {
        const double r = ring.qdim(t) / ring.qdim(s);
        const double lhs = p_n(ring, mubar, s, t, n), rhs = r * r * p_n(ring, cfg.mu, t, s, n);
        const double gap = std::abs(lhs - rhs) / std::max(1.0, std::abs(rhs));
        dual.add({static_cast<long long>(n), static_cast<long long>(s), static_cast<long long>(t), lhs, rhs, gap,
                  verdict(gap < 1e-10, all)});
      }
  out.table("chain_duality", dual);

  const auto gen = is_generating(ring, cfg.mu, W);
  Table summary({"quantity", "value", "verdict"});
  summary.add({"lambda", lambda, lambda < 1.0 ? "transient" : "no_certificate"});
  summary.add({"generating", gen.generating ? "true" : "false", ""});
  summary.add({"half_integer_support", gen.closed_criterion && *gen.closed_criterion ? "true" : "false",
               verdict(!gen.closed_criterion || *gen.closed_criterion == gen.generating, all)});
  out.table("chain_summary", summary);

  if (!cfg.green) return all ? 0 : kExitFail;
  if (!(lambda < 1.0)) {
    std::cerr << "refusal: lambda = " << io::num(lambda) << " >= 1, no Green certificate\n";
    return kExitRefusal;
  }
  const auto rep = chain_report(ring, cfg.mu, W, cfg.n_max);
  Table green({"twice_s", "twice_t", "value", "tail_bound"});
  for (const auto& [st, g] : rep.green_table)
    green.add({static_cast<long long>(st.first), static_cast<long long>(st.second), g.value, g.tail_bound});
  out.table("chain_green", green);

  if (cfg.mc_paths > 0) {
    const auto g = green_classical(ring, cfg.mu, 0, 0, cfg.n_max);
    const auto mc = green_monte_carlo(ring, cfg.mu, 0, 0, cfg.mc_paths, cfg.mc_cutoff_twice, cfg.seed);
    const double z = mc.stderr_ > 0.0 ? std::abs(g.value - mc.mean) / mc.stderr_ : 0.0;
    Table t({"twice_s", "twice_t", "value", "tail_bound", "mc_mean", "mc_stderr", "z", "verdict"});
    t.add({0LL, 0LL, g.value, g.tail_bound, mc.mean, mc.stderr_, z, verdict(z < 3.0, all)});
    out.table("chain_monte_carlo", t);
  }
  return all ? 0 : kExitFail;
}

BlockOperator parse_input(const std::string& text) {
  std::vector<std::string> parts;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ':')) parts.push_back(item);
  if (parts.size() == 2 && parts[0] == "I") return BlockOperator::identity(SpinLabel::parse(parts[1]));
  if (parts.size() == 4 && parts[0] == "E")
    return BlockOperator::matrix_unit(SpinLabel::parse(parts[1]), std::stoi(parts[2]), std::stoi(parts[3]));
  throw DomainError("input must be I:<spin> or E:<spin>:<i>:<j>");
}

int cmd_martin(const Config& cfg) {
  const QContext ctx(cfg.q);
  const SUq2Ring ring(ctx);
  const BlockOperator x = parse_input(cfg.input);
  const auto table = martin_block(ctx, cfg.mu, x, cfg.n_max, cfg.twice_s_max);
  Output out(cfg);
  if (cfg.format == "csv") out.raw("martin.csv", io::martin_csv(table));
  else out.raw("martin.json", io::martin_json(table).dump(2) + "\n");

  bool all = true;
  if (cfg.input.rfind("I:", 0) == 0) {
    // Central input: compare with the shadow chain's kernel g(t,s)/g(t,0).
    const int s = x.support().front().twice();
    const auto mubar = cfg.mu.dual(ring);
    Table check({"twice_t", "kernel_scalar", "offdiag_max", "classical", "diff", "tail_bound", "verdict"});
    for (const auto& [t, K] : table.kernel_blocks) {
      const double classical = green_classical(ring, mubar, t.twice(), s, cfg.n_max).value /
                               green_classical(ring, mubar, t.twice(), 0, cfg.n_max).value;
      const Eigen::MatrixXcd off = K - K(0, 0) * Eigen::MatrixXcd::Identity(K.rows(), K.cols());
      const double offmax = off.cwiseAbs().maxCoeff();
      const double diff = std::abs(K(0, 0).real() - classical);
      const double tb = table.tail_bound_per_block.at(t);
      check.add({static_cast<long long>(t.twice()), K(0, 0).real(), offmax, classical, diff, tb,
                 verdict(offmax <= 1e-10 * std::max(1.0, classical) && diff <= tb + 1e-10 * std::max(1.0, classical),
                         all)});
    }
    out.table("martin_check", check);
  }
  return all ? 0 : kExitFail;
}

int cmd_estimate(const Config& cfg) {
  const QContext ctx(cfg.q);
  const auto g = boundary_generators(ctx);
  Output out(cfg);
  Table t({"generator", "twice_s", "d_s", "value", "value_times_d_s", "closed_form", "rel_err", "verdict"});
  bool all = true;
  for (int i : cfg.generators) {
    double running = 0.0;
    for (int ts = 1; ts <= cfg.twice_s_max; ++ts) {
      const SpinLabel s(ts);
      const double d = quantum_dim(ctx, s);
      const double v = deviation(ctx, SpinLabel(1), s, g.Xt(i)).value;
      bool ok = std::isfinite(v) && v >= 0.0 && (ts > 1 || v > 0.0);
      // no growth of d_s * value beyond 1% over its running maximum
      ok = ok && (running == 0.0 || d * v <= 1.01 * running);
      running = std::max(running, d * v);
      Table::Cell closed = std::string(), rel = std::string();
      if (i == 0) {
        const double c = deviation_closed_form_xt0(ctx, s);
        const double r = std::abs(v - c) / std::abs(c);
        ok = ok && r < 1e-9;
        closed = c;
        rel = r;
      }
      t.add({generator_name(i), static_cast<long long>(ts), d, v, d * v, closed, rel, verdict(ok, all)});
    }
  }
  out.table("estimate", t);
  return all ? 0 : kExitFail;
}

int cmd_converge(const Config& cfg) {
  const QContext ctx(cfg.q);
  const SUq2Ring ring(ctx);
  validate(ring, cfg.mu);
  const auto g = boundary_generators(ctx);
  const auto& x = g.Xt(cfg.converge_generator);
  if (!(lambda_rate(ring, cfg.mu) < 1.0)) {
    std::cerr << "refusal: lambda >= 1, the gap envelope is not summable\n";
    return kExitRefusal;
  }
  const double C = observed_constant(ctx, x, cfg.constant_twice_s_max);
  const auto rep = rate_report(ctx, cfg.mu, x, cfg.n_max, C);
  Output out(cfg);
  if (cfg.format == "csv") out.raw("converge.csv", io::rate_report_csv(rep));
  else out.raw("converge.json", io::rate_report_json(rep).dump(2) + "\n");
  bool all = rep.summable;
  Table cond({"quantity", "value", "verdict"});
  cond.add({"generator", generator_name(cfg.converge_generator), ""});
  cond.add({"lambda", rep.lambda, rep.lambda < 1.0 ? "PASS" : "FAIL"});
  cond.add({"envelope_C", rep.envelope_C, ""});
  cond.add({"envelope_Cprime", rep.envelope_Cprime, ""});
  cond.add({"thm_condition", rep.thm_condition, std::isfinite(rep.thm_condition) ? "PASS" : "FAIL"});
  cond.add({"half_integer_support", rep.half_integer ? "true" : "false", verdict(rep.half_integer, all)});
  cond.add({"summable", rep.summable ? "true" : "false", rep.summable ? "PASS" : "FAIL"});
  out.table("converge_condition", cond);
  return all ? 0 : kExitFail;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Random walks on the dual of SU_q(2): chains, Green and Martin kernels, convergence estimates"};
  app.require_subcommand(1);
  app.fallthrough();

  std::string config_path, mu_text, s_max_text, out_dir, format, input, generator;
  std::optional<double> q, tol;
  std::optional<int> n_max;
  std::optional<std::uint64_t> seed;
  std::optional<long> mc_paths;
  bool no_green = false;

  app.add_option("--config", config_path, "JSON config file")->check(CLI::ExistingFile);
  app.add_option("--q", q, "deformation parameter in (0,1)");
  app.add_option("--mu", mu_text, "measure as spin:weight pairs, e.g. \"1/2:0.5,1:0.5\"");
  app.add_option("--s-max", s_max_text, "largest spin, e.g. 10 or 21/2");
  app.add_option("--n-max", n_max, "number of steps");
  app.add_option("--tol", tol, "residual tolerance for irreps");
  app.add_option("--out-dir", out_dir, "output directory");
  app.add_option("--format", format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
  app.add_option("--seed", seed, "Monte Carlo seed");

  auto* irreps = app.add_subcommand("irreps", "representation matrices and Hopf-relation residuals");
  auto* chain = app.add_subcommand("chain", "shadow chain: p, c constants, lambda, duality, Green table");
  chain->add_flag("--no-green", no_green, "skip the Green table");
  chain->add_option("--mc-paths", mc_paths, "Monte Carlo paths for g(0,0); 0 disables");
  auto* martin = app.add_subcommand("martin", "Martin kernel of a block operator");
  martin->add_option("--input", input, "I:<spin> or E:<spin>:<i>:<j>");
  auto* estimate = app.add_subcommand("estimate", "deviation norms of the boundary generators");
  auto* converge = app.add_subcommand("converge", "gap series and envelope");
  converge->add_option("--generator", generator, "xtm1, xt0 or xt1");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : kExitUsage;
  }

  Config cfg;
  try {
    if (const char* env = std::getenv("QWALK_OUT_DIR")) cfg.out_dir = env;
    if (!config_path.empty()) load_config_file(cfg, config_path);
    if (q) cfg.q = *q;
    if (!mu_text.empty()) cfg.mu = Measure::parse_spins(mu_text);
    if (!s_max_text.empty()) cfg.twice_s_max = SpinLabel::parse(s_max_text).twice();
    if (n_max) cfg.n_max = *n_max;
    if (tol) cfg.tol = *tol;
    if (!out_dir.empty()) cfg.out_dir = out_dir;
    if (!format.empty()) cfg.format = format;
    if (seed) cfg.seed = *seed;
    if (no_green) cfg.green = false;
    if (mc_paths) cfg.mc_paths = *mc_paths;
    if (!input.empty()) cfg.input = input;
    if (!generator.empty()) cfg.converge_generator = parse_generator(generator);
    check_config(cfg);
  } catch (const std::exception& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return kExitUsage;
  }

  try {
    if (irreps->parsed()) return cmd_irreps(cfg);
    if (chain->parsed()) return cmd_chain(cfg);
    if (martin->parsed()) return cmd_martin(cfg);
    if (estimate->parsed()) return cmd_estimate(cfg);
    if (converge->parsed()) return cmd_converge(cfg);
  } catch (const Refusal& e) {
    std::cerr << "refusal: " << e.what() << "\n";
    return kExitRefusal;
  } catch (const NoCertificateError& e) {
    std::cerr << "refusal: " << e.what() << "\n";
    return kExitRefusal;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  }
  return kExitUsage;
}
