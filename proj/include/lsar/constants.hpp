#ifndef LSAR_CONSTANTS_HPP
#define LSAR_CONSTANTS_HPP

#include <numbers>

namespace lsar {

inline constexpr double kSpeedOfLight = 299792458.0;  // m/s
inline constexpr double kFreeSpaceImpedance = 376.730313668;  // ohms
inline constexpr double kPi = std::numbers::pi;

}  // namespace lsar

#endif  // LSAR_CONSTANTS_HPP
