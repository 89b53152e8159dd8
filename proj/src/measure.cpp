#include "qwalk/measure.hpp"

#include <cmath>
#include <sstream>

#include "qwalk/chain.hpp"
#include "qwalk/errors.hpp"
#include "qwalk/qarith.hpp"

namespace qwalk {

Measure::Measure(std::map<int, double> weights) : weights_(std::move(weights)) {
  if (weights_.empty()) throw DomainError("measure has empty support");
  double total = 0.0;
  for (const auto& [label, w] : weights_) {
    if (!(w > 0.0)) throw DomainError("measure weights must be positive on the support");
    total += w;
  }
  if (std::abs(total - 1.0) > 1e-12) throw DomainError("measure weights must sum to 1");
}

Measure Measure::parse_spins(const std::string& text) {
  std::map<int, double> weights;
  std::stringstream ss(text);
  std::string item;
  auto trim = [](const std::string& v) {
    const auto b = v.find_first_not_of(" \t");
    return b == std::string::npos ? std::string() : v.substr(b, v.find_last_not_of(" \t") - b + 1);
  };
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    auto colon = item.find(':');
    if (colon == std::string::npos) throw DomainError("measure entry '" + item + "' needs spin:weight");
    const SpinLabel s = SpinLabel::parse(trim(item.substr(0, colon)));
    std::size_t used = 0;
    const std::string wtext = trim(item.substr(colon + 1));
    double w = 0.0;
    try {
      w = std::stod(wtext, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used != wtext.size() || wtext.empty()) throw DomainError("bad weight in '" + item + "'");
    weights[s.twice()] += w;
  }
  return Measure(std::move(weights));
}

double Measure::weight(int label) const {
  auto it = weights_.find(label);
  return it == weights_.end() ? 0.0 : it->second;
}

std::vector<int> Measure::support() const {
  std::vector<int> out;
  for (const auto& [label, _] : weights_) out.push_back(label);
  return out;
}

Measure Measure::dual(const FusionRing& ring) const {
  std::map<int, double> out;
  for (const auto& [label, w] : weights_) out[ring.dual(label)] += w;
  return Measure(std::move(out));
}

}  // namespace qwalk
