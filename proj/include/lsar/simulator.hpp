#ifndef LSAR_SIMULATOR_HPP
#define LSAR_SIMULATOR_HPP

#include <cstdint>
#include <filesystem>
#include <limits>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "lsar/em_core.hpp"
#include "lsar/scene.hpp"
#include "lsar/tensor.hpp"

namespace lsar {

struct PointTarget {
  Point3 position;
  cplx reflectivity{1.0, 0.0};
};

enum class LinkSide { Transmit, Receive };

// exp(-j (k R_air + k_eps R_med)) along the refracted path. Both sides use the
// same formula with their own refraction solve; attenuation is not modeled.
cplx green_one_way(const ValidatedScene& scene, double k, const Point3& antenna, const Point3& target,
                   LinkSide side);

// Born-approximation echo: y = j eta0 k sum_targets sigma A_T A_R for every
// (tx, rx, scan, freq). Transmitter and receiver share the scan height z'.
EchoTensor synthesize_echo(const ValidatedScene& scene, std::span<const PointTarget> targets);

// Upper bound on a single tensor allocation accepted by the simulator.
inline constexpr std::size_t kMaxTensorBytes = std::size_t{8} << 30;

inline constexpr double kNoNoise = std::numeric_limits<double>::infinity();

// Adds circular complex white Gaussian noise at the requested SNR (dB, relative
// to the mean signal power). snr_db = +inf returns the input unchanged.
EchoTensor add_noise(const EchoTensor& echo, double snr_db, std::uint64_t seed);

// Targets outside the grid bounding box (non-fatal).
std::vector<std::string> target_warnings(const ValidatedScene& scene, std::span<const PointTarget> targets);

// JSON list: [{"position": [x, y, z], "reflectivity": [re, im]}, ...]
std::vector<PointTarget> parse_targets(std::string_view text);
std::vector<PointTarget> load_targets(const std::filesystem::path& path);

}  // namespace lsar

#endif  // LSAR_SIMULATOR_HPP
