#include "lsar/scene.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "lsar/em_core.hpp"
#include "lsar/error.hpp"

namespace lsar {

namespace {

using nlohmann::json;

// Mean step of a strictly increasing, uniformly spaced axis; NaN if the axis
// is not uniform within kUniformityTolerance.
double uniform_step(const std::vector<double>& v) {
  if (v.size() < 2) return std::nan("");
  const double mean = (v.back() - v.front()) / static_cast<double>(v.size() - 1);
  if (!(mean > 0.0)) return std::nan("");
  for (std::size_t i = 0; i + 1 < v.size(); ++i) {
    if (std::abs((v[i + 1] - v[i]) - mean) >= kUniformityTolerance) return std::nan("");
  }
  return mean;
}

void require_finite(const std::vector<double>& v, const char* name) {
  for (double x : v) {
    if (!std::isfinite(x)) throw Error(ErrorCode::InvalidConfig, std::string(name) + " has non-finite entries");
  }
}

}  // namespace

EchoTensor ValidatedScene::make_echo() const {
  EchoTensor echo(echo_extents());
  const auto& a = config_.arrays;
  echo.axes[0] = Axis{0.0, 1.0, "index"};
  echo.axes[1] = Axis{a.rx_x.front(), rx_spacing_, "m"};
  echo.axes[2] = Axis{a.scan_z.front(), scan_spacing_, "m"};
  const double df = n_freq() > 1 ? frequencies_[1] - frequencies_[0] : 0.0;
  echo.axes[3] = Axis{frequencies_.front(), df, "Hz"};
  return echo;
}

ImageVolume ValidatedScene::make_image() const {
  ImageVolume image(image_extents());
  const auto& g = config_.grid;
  const auto step_or_zero = [](const std::vector<double>& v) {
    return v.size() > 1 ? (v.back() - v.front()) / static_cast<double>(v.size() - 1) : 0.0;
  };
  image.axes[0] = Axis{g.x.front(), step_or_zero(g.x), "m"};
  image.axes[1] = Axis{g.y.front(), step_or_zero(g.y), "m"};
  image.axes[2] = Axis{g.z.front(), step_or_zero(g.z), "m"};
  return image;
}

ValidatedScene validate(const SceneConfig& config) {
  const auto& med = config.medium;
  const auto& arr = config.arrays;
  const auto& sw = config.sweep;
  const auto& grid = config.grid;

  if (!std::isfinite(med.permittivity) || med.permittivity < 1.0) {
    throw Error(ErrorCode::BadPermittivity, "relative permittivity must be >= 1");
  }
  if (arr.tx_x.empty()) throw Error(ErrorCode::EmptyAxis, "no transmitters");
  if (arr.rx_x.empty()) throw Error(ErrorCode::EmptyAxis, "no receivers");
  if (arr.scan_z.empty()) throw Error(ErrorCode::EmptyAxis, "no scan positions");
  if (sw.n_freq == 0) throw Error(ErrorCode::EmptyAxis, "no frequency samples");
  if (grid.x.empty() || grid.y.empty() || grid.z.empty()) {
    throw Error(ErrorCode::EmptyAxis, "voxel grid axis is empty");
  }
  require_finite(arr.tx_x, "tx_x");
  require_finite(arr.rx_x, "rx_x");
  require_finite(arr.scan_z, "scan_z");
  require_finite(grid.x, "grid.x");
  require_finite(grid.y, "grid.y");
  require_finite(grid.z, "grid.z");

  if (arr.rx_x.size() < 2) throw Error(ErrorCode::InvalidConfig, "at least two receivers are required");
  if (arr.scan_z.size() < 2) throw Error(ErrorCode::InvalidConfig, "at least two scan positions are required");
  const double drx = uniform_step(arr.rx_x);
  if (std::isnan(drx)) throw Error(ErrorCode::NonUniformReceivers, "receiver positions must be uniformly spaced");
  const double dz = uniform_step(arr.scan_z);
  if (std::isnan(dz)) throw Error(ErrorCode::NonUniformScan, "scan positions must be uniformly spaced");

  if (!(arr.aperture_y < 0.0) || !std::isfinite(arr.aperture_y)) {
    throw Error(ErrorCode::InvalidConfig, "aperture_y must be negative (array on the air side)");
  }
  if (!(sw.f_min > 0.0)) throw Error(ErrorCode::NonPositiveFrequency, "f_min must be positive");
  if (!(sw.f_min < sw.f_max) || !std::isfinite(sw.f_max)) {
    throw Error(ErrorCode::InvalidConfig, "f_min must be below f_max");
  }
  if (!(config.eta0 > 0.0)) throw Error(ErrorCode::InvalidConfig, "eta0 must be positive");

  const double gx = grid.x.size() > 1 ? uniform_step(grid.x) : drx;
  const double gz = grid.z.size() > 1 ? uniform_step(grid.z) : dz;
  if (std::isnan(gx) || std::isnan(gz)) throw Error(ErrorCode::InvalidConfig, "grid x/z axes must be uniform and increasing");
  if (grid.y.size() > 1 && std::isnan(uniform_step(grid.y))) {
    throw Error(ErrorCode::InvalidConfig, "grid y axis must be uniform and increasing");
  }
  if (std::abs(gx - drx) >= kUniformityTolerance || grid.x.size() < arr.rx_x.size()) {
    throw Error(ErrorCode::GridSpacingMismatch,
                "grid x must use the receiver pitch and have at least as many samples as receivers");
  }
  if (std::abs(gz - dz) >= kUniformityTolerance || grid.z.size() < arr.scan_z.size()) {
    throw Error(ErrorCode::GridSpacingMismatch,
                "grid z must use the scan pitch and have at least as many samples as scan positions");
  }
  for (double y : grid.y) {
    if (y <= arr.aperture_y) throw Error(ErrorCode::GridOutsideMedium, "grid y must lie beyond the aperture plane");
    if (med.permittivity > 1.0 && y < 0.0) {
      throw Error(ErrorCode::GridOutsideMedium, "grid y must be >= 0 inside a dielectric");
    }
  }

  ValidatedScene s;
  s.config_ = config;
  s.rx_spacing_ = drx;
  s.scan_spacing_ = dz;
  s.frequencies_.resize(sw.n_freq);
  s.wavenumbers_.resize(sw.n_freq);
  for (std::size_t i = 0; i < sw.n_freq; ++i) {
    const double f = sw.n_freq == 1
                         ? sw.f_min
                         : sw.f_min + (sw.f_max - sw.f_min) * static_cast<double>(i) /
                                          static_cast<double>(sw.n_freq - 1);
    s.frequencies_[i] = f;
    s.wavenumbers_[i] = wavenumber(f);
  }
  s.kx_axis_ = fft_wavenumbers(grid.x.size(), drx);
  s.kz_axis_ = fft_wavenumbers(grid.z.size(), dz);

  // Receive-leg aliasing: beyond sin(theta) = lambda_min / (2 dx) the
  // receiver sampling no longer resolves the incoming wavefront.
  const double lambda_min = kSpeedOfLight / sw.f_max;
  const double s_max = std::min(1.0, lambda_min / (2.0 * drx));
  const double reach = s_max >= 1.0 ? std::numeric_limits<double>::infinity()
                                    : std::abs(arr.aperture_y) * s_max / std::sqrt(1.0 - s_max * s_max);
  if (grid.x.front() < arr.rx_x.front() - reach || grid.x.back() > arr.rx_x.back() + reach) {
    std::ostringstream os;
    os << "grid x-extent [" << grid.x.front() << ", " << grid.x.back()
       << "] exceeds the alias-free extent implied by the receiver pitch";
    s.warnings_.push_back(os.str());
  }
  return s;
}

std::vector<double> fft_wavenumbers(std::size_t n, double spacing) {
  std::vector<double> k(n);
  const double base = 2.0 * kPi / (static_cast<double>(n) * spacing);
  for (std::size_t i = 0; i < n; ++i) {
    const auto m = static_cast<std::ptrdiff_t>(i);
    const auto wrapped = i < (n + 1) / 2 ? m : m - static_cast<std::ptrdiff_t>(n);
    k[i] = base * static_cast<double>(wrapped);
  }
  return k;
}

SpectralAxes spectral_axes(const ValidatedScene& scene) {
  return {scene.kx_axis(), scene.kz_axis()};
}

std::vector<double> uniform_axis(double start, double step, std::size_t count) {
  std::vector<double> v(count);
  for (std::size_t i = 0; i < count; ++i) v[i] = start + static_cast<double>(i) * step;
  return v;
}

double default_depth_step(const FrequencySweep& sweep, double permittivity) {
  return kSpeedOfLight / (2.0 * (sweep.f_max - sweep.f_min) * std::sqrt(permittivity));
}

// ---------------------------------------------------------------------------
// configuration file

namespace {

std::vector<double> parse_axis(const json& j, const char* name) {
  if (j.is_array()) return j.get<std::vector<double>>();
  if (j.is_object() && j.contains("start") && j.contains("step") && j.contains("count")) {
    return uniform_axis(j.at("start").get<double>(), j.at("step").get<double>(),
                        j.at("count").get<std::size_t>());
  }
  throw Error(ErrorCode::InvalidConfig,
              std::string(name) + " must be a list or an object with start/step/count");
}

// Grid x/z: explicit, or {"count": N} centered on the given reference axis.
std::vector<double> parse_grid_axis(const json& j, const std::vector<double>& reference, const char* name) {
  if (j.is_object() && j.contains("count") && !j.contains("start")) {
    const auto n = j.at("count").get<std::size_t>();
    const double step = j.value("step", reference.size() > 1 ? reference[1] - reference[0] : 1.0);
    const double center = 0.5 * (reference.front() + reference.back());
    return uniform_axis(center - 0.5 * static_cast<double>(n - 1) * step, step, n);
  }
  return parse_axis(j, name);
}

}  // namespace

SceneConfig parse_scene_config(std::string_view text) {
  SceneConfig c;
  try {
    const json j = json::parse(text);
    c.medium.permittivity = j.at("medium").value("permittivity", 1.0);

    const auto& a = j.at("array");
    c.arrays.tx_x = parse_axis(a.at("tx_x"), "array.tx_x");
    c.arrays.rx_x = parse_axis(a.at("rx_x"), "array.rx_x");
    c.arrays.aperture_y = a.at("aperture_y").get<double>();
    c.arrays.scan_z = parse_axis(a.at("scan_z"), "array.scan_z");

    const auto& s = j.at("sweep");
    c.sweep.f_min = s.at("f_min").get<double>();
    c.sweep.f_max = s.at("f_max").get<double>();
    c.sweep.n_freq = s.at("n_freq").get<std::size_t>();

    const auto& g = j.at("grid");
    if (c.arrays.rx_x.empty() || c.arrays.scan_z.empty()) {
      throw Error(ErrorCode::EmptyAxis, "receiver and scan axes must be non-empty");
    }
    c.grid.x = parse_grid_axis(g.at("x"), c.arrays.rx_x, "grid.x");
    c.grid.z = parse_grid_axis(g.at("z"), c.arrays.scan_z, "grid.z");
    const auto& gy = g.at("y");
    if (gy.is_object() && !gy.contains("step")) {
      const double step = default_depth_step(c.sweep, c.medium.permittivity);
      c.grid.y = uniform_axis(gy.value("start", 0.0), step, gy.at("count").get<std::size_t>());
    } else {
      c.grid.y = parse_axis(gy, "grid.y");
    }

    c.eta0 = j.value("eta0", kFreeSpaceImpedance);
    if (j.contains("reconstruction")) {
      const auto taper = j.at("reconstruction").value("taper", std::string("none"));
      if (taper == "none") {
        c.taper = Taper::None;
      } else if (taper == "hann") {
        c.taper = Taper::Hann;
      } else {
        throw Error(ErrorCode::InvalidConfig, "unknown taper '" + taper + "'");
      }
    }
  } catch (const json::exception& e) {
    throw Error(ErrorCode::InvalidConfig, e.what());
  }
  return c;
}

SceneConfig load_scene_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::IoFailure, "cannot open config " + path.string());
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_scene_config(buf.str());
}

std::string dump_scene_config(const SceneConfig& c) {
  json j;
  j["medium"]["permittivity"] = c.medium.permittivity;
  j["array"]["tx_x"] = c.arrays.tx_x;
  j["array"]["rx_x"] = c.arrays.rx_x;
  j["array"]["aperture_y"] = c.arrays.aperture_y;
  j["array"]["scan_z"] = c.arrays.scan_z;
  j["sweep"]["f_min"] = c.sweep.f_min;
  j["sweep"]["f_max"] = c.sweep.f_max;
  j["sweep"]["n_freq"] = c.sweep.n_freq;
  j["grid"]["x"] = c.grid.x;
  j["grid"]["y"] = c.grid.y;
  j["grid"]["z"] = c.grid.z;
  j["eta0"] = c.eta0;
  j["reconstruction"]["taper"] = c.taper == Taper::Hann ? "hann" : "none";
  return j.dump(2);
}

}  // namespace lsar
