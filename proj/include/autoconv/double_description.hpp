#pragma once

#include <vector>

#include <boost/dynamic_bitset.hpp>

#include "autoconv/exact.hpp"

namespace autoconv::exact {

struct ExtremeRay {
  Vector direction;
  boost::dynamic_bitset<> tight;  // rows i with a_i . direction = 0
};

/// Extreme rays of the pointed cone {x : A x <= 0}.
///
/// Incremental double description with the combinatorial adjacency test. The
/// rows must have full column rank (pointedness); otherwise std::logic_error.
/// Each ray is scaled so its first nonzero entry has absolute value 1.
std::vector<ExtremeRay> extreme_rays(const Matrix& rows, std::size_t cols);

}  // namespace autoconv::exact
