#include "qwalk/qarith.hpp"

#include <charconv>
#include <cmath>

namespace qwalk {

SpinLabel::SpinLabel(int twice_s) : twice_(twice_s) {
  if (twice_s < 0) throw DomainError("spin label must be nonnegative");
}

SpinLabel SpinLabel::parse(std::string_view text) {
  auto to_int = [&](std::string_view part) {
    int v = 0;
    auto [ptr, ec] = std::from_chars(part.data(), part.data() + part.size(), v);
    if (ec != std::errc() || ptr != part.data() + part.size())
      throw DomainError("bad spin '" + std::string(text) + "'");
    return v;
  };
  if (auto slash = text.find('/'); slash != std::string_view::npos) {
    int num = to_int(text.substr(0, slash));
    int den = to_int(text.substr(slash + 1));
    if (den == 1) return SpinLabel(2 * num);
    if (den == 2) return SpinLabel(num);
    throw DomainError("spin '" + std::string(text) + "' is not in (1/2)Z");
  }
  double v = 0.0;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (ec != std::errc() || ptr != text.data() + text.size())
    throw DomainError("bad spin '" + std::string(text) + "'");
  double twice = 2.0 * v;
  if (std::abs(twice - std::round(twice)) > 1e-12)
    throw DomainError("spin '" + std::string(text) + "' is not in (1/2)Z");
  return SpinLabel(static_cast<int>(std::lround(twice)));
}

std::string SpinLabel::str() const {
  if (twice_ % 2 == 0) return std::to_string(twice_ / 2);
  return std::to_string(twice_) + "/2";
}

QContext::QContext(double q, double tol) : q_(q), tol_(tol) {
  if (!(q > 0.0 && q < 1.0)) throw DomainError("q must lie in (0,1)");
  if (!(tol >= 0.0)) throw DomainError("tolerance must be nonnegative");
}

double q_number(const QContext& ctx, int n) { return q_number_t(ctx.q(), n); }

double q_number_base(const QContext& ctx, int n, int base_power) {
  if (base_power < 1 || base_power > 3)
    throw DomainError("base power must be 1, 2 or 3");
  return q_number_t(ctx.q(), n, base_power);
}

double quantum_dim(const QContext& ctx, SpinLabel s) {
  return q_number_t(ctx.q(), s.dim());
}

}  // namespace qwalk
