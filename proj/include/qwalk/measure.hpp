#pragma once

#include <map>
#include <string>
#include <vector>

namespace qwalk {

class FusionRing;

// Finitely supported probability measure on fusion-ring labels. For SU_q(2) the
// label is the doubled spin.
class Measure {
 public:
  Measure() = default;
  explicit Measure(std::map<int, double> weights);

  static Measure dirac(int label) { return Measure({{label, 1.0}}); }
  // "1/2:0.5,1:0.5" style; spins as decimal or fraction.
  static Measure parse_spins(const std::string& text);

  const std::map<int, double>& weights() const { return weights_; }
  double weight(int label) const;
  std::vector<int> support() const;
  int max_label() const { return weights_.rbegin()->first; }
  Measure dual(const FusionRing& ring) const;

 private:
  std::map<int, double> weights_;
};

}  // namespace qwalk
