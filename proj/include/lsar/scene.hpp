#ifndef LSAR_SCENE_HPP
#define LSAR_SCENE_HPP

#include <cstddef>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "lsar/constants.hpp"
#include "lsar/tensor.hpp"

namespace lsar {

// Half-space dielectric below the plane y = 0; air (and the array) at y < 0.
struct MediumSpec {
  double permittivity = 1.0;
  bool operator==(const MediumSpec&) const = default;
};

struct ArrayGeometry {
  std::vector<double> tx_x;    // any layout
  std::vector<double> rx_x;    // uniformly spaced
  double aperture_y = -0.3;    // standoff of the aperture plane, < 0
  std::vector<double> scan_z;  // uniformly spaced scan positions
  bool operator==(const ArrayGeometry&) const = default;
};

struct FrequencySweep {
  double f_min = 0.0;
  double f_max = 0.0;
  std::size_t n_freq = 0;
  bool operator==(const FrequencySweep&) const = default;
};

struct VoxelGrid {
  std::vector<double> x;
  std::vector<double> y;
  std::vector<double> z;
  bool operator==(const VoxelGrid&) const = default;
};

// Real-valued echo weighting applied inside the sensing operators.
enum class Taper { None, Hann };

struct SceneConfig {
  MediumSpec medium;
  ArrayGeometry arrays;
  FrequencySweep sweep;
  VoxelGrid grid;
  double eta0 = kFreeSpaceImpedance;
  Taper taper = Taper::None;
  bool operator==(const SceneConfig&) const = default;
};

// Immutable, validated scene with derived sampling quantities precomputed.
class ValidatedScene {
 public:
  const SceneConfig& config() const noexcept { return config_; }

  double permittivity() const noexcept { return config_.medium.permittivity; }
  double aperture_y() const noexcept { return config_.arrays.aperture_y; }
  double eta0() const noexcept { return config_.eta0; }

  std::size_t n_tx() const noexcept { return config_.arrays.tx_x.size(); }
  std::size_t n_rx() const noexcept { return config_.arrays.rx_x.size(); }
  std::size_t n_scan() const noexcept { return config_.arrays.scan_z.size(); }
  std::size_t n_freq() const noexcept { return frequencies_.size(); }
  std::size_t nx() const noexcept { return config_.grid.x.size(); }
  std::size_t ny() const noexcept { return config_.grid.y.size(); }
  std::size_t nz() const noexcept { return config_.grid.z.size(); }

  const std::vector<double>& frequencies() const noexcept { return frequencies_; }
  const std::vector<double>& wavenumbers() const noexcept { return wavenumbers_; }
  double rx_spacing() const noexcept { return rx_spacing_; }
  double scan_spacing() const noexcept { return scan_spacing_; }

  // Spectral axes of the padded FFT grids, natural FFT order.
  const std::vector<double>& kx_axis() const noexcept { return kx_axis_; }
  const std::vector<double>& kz_axis() const noexcept { return kz_axis_; }

  EchoTensor::Extents echo_extents() const noexcept {
    return {n_tx(), n_rx(), n_scan(), n_freq()};
  }
  ImageVolume::Extents image_extents() const noexcept { return {nx(), ny(), nz()}; }

  EchoTensor make_echo() const;
  ImageVolume make_image() const;

  // Non-fatal findings from validation (e.g. grid beyond the alias-free extent).
  const std::vector<std::string>& warnings() const noexcept { return warnings_; }

  bool operator==(const ValidatedScene&) const = default;

 private:
  friend ValidatedScene validate(const SceneConfig& config);

  SceneConfig config_;
  std::vector<double> frequencies_;
  std::vector<double> wavenumbers_;
  double rx_spacing_ = 0.0;
  double scan_spacing_ = 0.0;
  std::vector<double> kx_axis_;
  std::vector<double> kz_axis_;
  std::vector<std::string> warnings_;
};

inline constexpr double kUniformityTolerance = 1e-9;  // m

ValidatedScene validate(const SceneConfig& config);

struct SpectralAxes {
  std::vector<double> kx;
  std::vector<double> kz;
};

// k_n = 2*pi*n / (N * spacing) with n >= N/2 wrapped to n - N, so the axis
// covers [-pi/spacing, pi/spacing) in FFT-natural order.
std::vector<double> fft_wavenumbers(std::size_t n, double spacing);

SpectralAxes spectral_axes(const ValidatedScene& scene);

std::vector<double> uniform_axis(double start, double step, std::size_t count);

// c / (2 B sqrt(eps)).
double default_depth_step(const FrequencySweep& sweep, double permittivity);

// Structured-text (JSON) configuration. Axes accept either an explicit list
// or {"start", "step", "count"}; grid x/z may give only "count" to center on
// the aperture with the receiver / scan pitch.
SceneConfig parse_scene_config(std::string_view text);
SceneConfig load_scene_config(const std::filesystem::path& path);
std::string dump_scene_config(const SceneConfig& config);

}  // namespace lsar

#endif  // LSAR_SCENE_HPP
