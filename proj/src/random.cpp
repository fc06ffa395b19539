// SPDX-License-Identifier: Apache-2.0

#include "mmnc/random.hpp"

#include <cmath>
#include <numbers>

namespace mmnc {

double RandomStream::normal()
{
    // 1 - u keeps the log argument in (0, 1].
    const double u1 = 1.0 - uniform01();
    const double u2 = uniform01();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

} // namespace mmnc
