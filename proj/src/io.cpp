#include "qwalk/io.hpp"

#include <fmt/format.h>

namespace qwalk::io {

std::string num(double v) { return fmt::format("{:.17g}", v); }

nlohmann::json matrix_json(const Eigen::MatrixXcd& m) {
  auto out = nlohmann::json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r)
    for (Eigen::Index c = 0; c < m.cols(); ++c) out.push_back({m(r, c).real(), m(r, c).imag()});
  return out;
}

nlohmann::json matrix_json(const Eigen::MatrixXd& m) { return matrix_json(Eigen::MatrixXcd(m.cast<cplx>())); }

nlohmann::json martin_json(const MartinTable& table) {
  nlohmann::json j;
  j["n_max"] = table.n_max;
  j["input"] = nlohmann::json::object();
  for (const auto& [s, m] : table.input.blocks()) j["input"][s.str()] = matrix_json(m);
  j["blocks"] = nlohmann::json::array();
  for (const auto& [t, g] : table.divisor) {
    nlohmann::json b{{"spin", t.str()}, {"twice", t.twice()}, {"divisor", g.value}, {"divisor_tail", g.tail_bound}};
    if (table.ill_conditioned.count(t)) {
      b["status"] = "ill_conditioned";
    } else {
      b["status"] = "ok";
      b["tail_bound"] = table.tail_bound_per_block.at(t);
      b["matrix"] = matrix_json(table.kernel_blocks.at(t));
    }
    j["blocks"].push_back(std::move(b));
  }
  return j;
}

std::string martin_csv(const MartinTable& table) {
  CsvTable csv({"twice_t", "spin", "row", "col", "re", "im", "tail_bound", "status"});
  for (const auto& [t, g] : table.divisor) {
    if (table.ill_conditioned.count(t)) {
      csv.add({std::to_string(t.twice()), t.str(), "", "", "", "", "", "ill_conditioned"});
      continue;
    }
    const auto& m = table.kernel_blocks.at(t);
    const std::string tail = num(table.tail_bound_per_block.at(t));
    for (Eigen::Index r = 0; r < m.rows(); ++r)
      for (Eigen::Index c = 0; c < m.cols(); ++c)
        csv.add({std::to_string(t.twice()), t.str(), std::to_string(r), std::to_string(c), num(m(r, c).real()),
                 num(m(r, c).imag()), tail, "ok"});
  }
  return csv.str();
}

nlohmann::json rate_report_json(const RateReport& rep) {
  nlohmann::json j;
  j["mu"] = nlohmann::json::object();
  for (const auto& [tw, w] : rep.mu.weights()) j["mu"][SpinLabel(tw).str()] = w;
  j["x"] = rep.x.str();
  j["lambda"] = rep.lambda;
  j["envelope_C"] = rep.envelope_C;
  j["envelope_Cprime"] = rep.envelope_Cprime;
  j["summable"] = rep.summable;
  j["thm_condition"] = rep.thm_condition;
  j["half_integer_support"] = rep.half_integer;
  j["series"] = nlohmann::json::array();
  for (const auto& row : rep.series)
    j["series"].push_back({{"n", row.n}, {"gap_sq", row.gap_sq}, {"bound", row.bound}, {"partial_sum", row.partial_sum}});
  return j;
}

std::string rate_report_csv(const RateReport& rep) {
  CsvTable csv({"n", "gap_sq", "bound", "partial_sum", "verdict"});
  for (const auto& row : rep.series)
    csv.add({std::to_string(row.n), num(row.gap_sq), num(row.bound), num(row.partial_sum),
             row.gap_sq <= row.bound ? "PASS" : "FAIL"});
  return csv.str();
}

CsvTable::CsvTable(std::vector<std::string> header) : header_(std::move(header)) {}

void CsvTable::add(std::vector<std::string> row) {
  if (row.size() != header_.size()) throw DimensionError("CSV row width does not match header");
  rows_.push_back(std::move(row));
}

std::string CsvTable::str() const {
  std::string out;
  auto line = [&](const std::vector<std::string>& cells) {
    for (std::size_t i = 0; i < cells.size(); ++i) {
      if (i) out += ',';
      out += cells[i];
    }
    out += '\n';
  };
  line(header_);
  for (const auto& r : rows_) line(r);
  return out;
}

}  // namespace qwalk::io
