#pragma once

#include <string>
#include <vector>

#include "json.hpp"
#include "qwalk/converge.hpp"
#include "qwalk/martin.hpp"

namespace qwalk::io {

// 17 significant digits, '.' decimal point, independent of locale.
std::string num(double v);

// Row-major list of [re, im] pairs.
nlohmann::json matrix_json(const Eigen::MatrixXcd& m);
nlohmann::json matrix_json(const Eigen::MatrixXd& m);

nlohmann::json martin_json(const MartinTable& table);
// twice_t,spin,row,col,re,im,tail_bound,status; flagged blocks get one row with status only.
std::string martin_csv(const MartinTable& table);

nlohmann::json rate_report_json(const RateReport& rep);
// n,gap_sq,bound,partial_sum,verdict
std::string rate_report_csv(const RateReport& rep);

class CsvTable {
 public:
  explicit CsvTable(std::vector<std::string> header);
  void add(std::vector<std::string> row);
  std::string str() const;

 private:
  std::vector<std::string> header_;
  std::vector<std::vector<std::string>> rows_;
};

}  // namespace qwalk::io
