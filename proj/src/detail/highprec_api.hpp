#pragma once

#include <utility>

#include "qwalk/coproduct.hpp"

// Entry points into the high-precision translation unit; results rounded to double.
namespace qwalk::detail {

std::pair<double, double> deviation_hp(double q, SpinLabel t, SpinLabel s, const AlgebraElement& x);
double closed_form_xt0_hp(double q, SpinLabel s);

}  // namespace qwalk::detail
