#include "lsar/simulator.hpp"

#include <cmath>
#include <fstream>
#include <random>
#include <sstream>

#include <json.hpp>

#include "lsar/error.hpp"

namespace lsar {

cplx green_one_way(const ValidatedScene& scene, double k, const Point3& antenna, const Point3& target,
                   LinkSide /*side*/) {
  const double path = optical_path(antenna, target, scene.permittivity());
  return std::polar(1.0, -k * path);
}

EchoTensor synthesize_echo(const ValidatedScene& scene, std::span<const PointTarget> targets) {
  if (targets.empty()) throw Error(ErrorCode::InvalidParameter, "target list is empty");
  const auto extents = scene.echo_extents();
  if (EchoTensor::count(extents) > kMaxTensorBytes / sizeof(cplx)) {
    throw Error(ErrorCode::SizingError, "echo tensor exceeds the allocation limit");
  }

  const auto& arr = scene.config().arrays;
  const std::size_t n_tx = scene.n_tx();
  const std::size_t n_rx = scene.n_rx();
  const std::size_t n_scan = scene.n_scan();
  const std::size_t n_freq = scene.n_freq();
  const auto& ks = scene.wavenumbers();
  const double Y = scene.aperture_y();

  // One-way optical paths per target: tx legs [target][tx][scan], rx legs [target][rx][scan].
  RefractionCache cache(Y, scene.permittivity());
  std::vector<double> tx_path(targets.size() * n_tx * n_scan);
  std::vector<double> rx_path(targets.size() * n_rx * n_scan);
  for (std::size_t t = 0; t < targets.size(); ++t) {
    const Point3& p = targets[t].position;
    for (std::size_t s = 0; s < n_scan; ++s) {
      for (std::size_t i = 0; i < n_tx; ++i) {
        tx_path[(t * n_tx + i) * n_scan + s] = cache.optical_path({arr.tx_x[i], Y, arr.scan_z[s]}, p);
      }
      for (std::size_t r = 0; r < n_rx; ++r) {
        rx_path[(t * n_rx + r) * n_scan + s] = cache.optical_path({arr.rx_x[r], Y, arr.scan_z[s]}, p);
      }
    }
  }

  EchoTensor echo = scene.make_echo();
  echo.provenance = "simulated: " + std::to_string(targets.size()) + " point target(s)";
  const double eta0 = scene.eta0();
  cplx* out = echo.data();

  // Each output sample is owned by one (tx, rx) iteration and summed over
  // targets in list order, so results do not depend on the worker count.
#pragma omp parallel for schedule(static)
  for (std::size_t pair = 0; pair < n_tx * n_rx; ++pair) {
    const std::size_t i = pair / n_rx;
    const std::size_t r = pair % n_rx;
    for (std::size_t s = 0; s < n_scan; ++s) {
      cplx* row = out + ((i * n_rx + r) * n_scan + s) * n_freq;
      for (std::size_t t = 0; t < targets.size(); ++t) {
        const double path = tx_path[(t * n_tx + i) * n_scan + s] + rx_path[(t * n_rx + r) * n_scan + s];
        const cplx sigma = targets[t].reflectivity;
        for (std::size_t f = 0; f < n_freq; ++f) {
          const double k = ks[f];
          row[f] += cplx(0.0, eta0 * k) * sigma * std::polar(1.0, -k * path);
        }
      }
    }
  }
  return echo;
}

EchoTensor add_noise(const EchoTensor& echo, double snr_db, std::uint64_t seed) {
  EchoTensor noisy = echo;
  if (std::isinf(snr_db) && snr_db > 0.0) return noisy;
  if (echo.empty()) return noisy;

  double power = 0.0;
  for (const auto& v : echo.values()) power += std::norm(v);
  power /= static_cast<double>(echo.size());
  const double noise_power = power / std::pow(10.0, snr_db / 10.0);
  const double sigma = std::sqrt(noise_power / 2.0);

  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  for (auto& v : noisy.values()) {
    const double re = gauss(rng);
    const double im = gauss(rng);
    v += cplx(sigma * re, sigma * im);
  }
  std::ostringstream os;
  os << echo.provenance << "; noise snr_db=" << snr_db << " seed=" << seed;
  noisy.provenance = os.str();
  return noisy;
}

std::vector<std::string> target_warnings(const ValidatedScene& scene, std::span<const PointTarget> targets) {
  const auto& g = scene.config().grid;
  std::vector<std::string> out;
  for (std::size_t t = 0; t < targets.size(); ++t) {
    const auto& p = targets[t].position;
    const bool inside = p.x >= g.x.front() && p.x <= g.x.back() && p.y >= g.y.front() && p.y <= g.y.back() &&
                        p.z >= g.z.front() && p.z <= g.z.back();
    if (!inside) out.push_back("target " + std::to_string(t) + " lies outside the voxel grid");
  }
  return out;
}

std::vector<PointTarget> parse_targets(std::string_view text) {
  std::vector<PointTarget> targets;
  try {
    const auto j = nlohmann::json::parse(text);
    const auto& list = j.is_object() ? j.at("targets") : j;
    for (const auto& item : list) {
      const auto pos = item.at("position").get<std::vector<double>>();
      if (pos.size() != 3) throw Error(ErrorCode::InvalidConfig, "target position needs 3 coordinates");
      PointTarget t;
      t.position = {pos[0], pos[1], pos[2]};
      if (item.contains("reflectivity")) {
        const auto& r = item.at("reflectivity");
        if (r.is_number()) {
          t.reflectivity = {r.get<double>(), 0.0};
        } else {
          const auto ri = r.get<std::vector<double>>();
          if (ri.size() != 2) throw Error(ErrorCode::InvalidConfig, "reflectivity must be [re, im]");
          t.reflectivity = {ri[0], ri[1]};
        }
      }
      targets.push_back(t);
    }
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::InvalidConfig, e.what());
  }
  return targets;
}

std::vector<PointTarget> load_targets(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::IoFailure, "cannot open targets file " + path.string());
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_targets(buf.str());
}

}  // namespace lsar
