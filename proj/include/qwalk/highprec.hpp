#pragma once

#include <boost/multiprecision/cpp_bin_float.hpp>
#include <boost/multiprecision/eigen.hpp>

namespace qwalk {

// 80 significant decimal digits; deviation norms cancel about 2s*log10(1/q) digits.
using HighReal =
    boost::multiprecision::number<boost::multiprecision::cpp_bin_float<80>, boost::multiprecision::et_off>;

}  // namespace qwalk
