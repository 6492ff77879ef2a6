#include "lsar/ibp.hpp"

#include <cmath>
#include <vector>

#include "lsar/em_core.hpp"
#include "lsar/error.hpp"

namespace lsar {

ImageVolume ibp_reconstruct(const EchoTensor& echo, const ValidatedScene& scene, const IbpStride& stride) {
  if (echo.extents() != scene.echo_extents()) {
    throw Error(ErrorCode::DimensionMismatch, "echo dimensions do not match the scene");
  }
  if (stride.tx == 0 || stride.rx == 0 || stride.scan == 0 || stride.freq == 0) {
    throw Error(ErrorCode::InvalidParameter, "strides must be >= 1");
  }

  const auto& arr = scene.config().arrays;
  const auto& grid = scene.config().grid;
  const double Y = scene.aperture_y();
  const double eps = scene.permittivity();
  const std::size_t n_tx = scene.n_tx();
  const std::size_t n_rx = scene.n_rx();
  const std::size_t n_scan = scene.n_scan();
  const std::size_t n_freq = scene.n_freq();
  const auto& ks = scene.wavenumbers();

  std::vector<std::size_t> txs, rxs, scans, freqs;
  for (std::size_t i = 0; i < n_tx; i += stride.tx) txs.push_back(i);
  for (std::size_t i = 0; i < n_rx; i += stride.rx) rxs.push_back(i);
  for (std::size_t i = 0; i < n_scan; i += stride.scan) scans.push_back(i);
  for (std::size_t i = 0; i < n_freq; i += stride.freq) freqs.push_back(i);

  ImageVolume image = scene.make_image();
  image.provenance = stride.full() ? "ibp" : "ibp (strided)";
  const std::size_t nx = scene.nx(), ny = scene.ny(), nz = scene.nz();
  const cplx* in = echo.data();
  cplx* out = image.data();

#pragma omp parallel
  {
    RefractionCache cache(Y, eps);
    std::vector<double> tx_path(txs.size() * scans.size());
    std::vector<double> rx_path(rxs.size() * scans.size());

#pragma omp for schedule(dynamic, 16)
    for (std::size_t v = 0; v < nx * ny * nz; ++v) {
      const Point3 b{grid.x[v / (ny * nz)], grid.y[(v / nz) % ny], grid.z[v % nz]};
      for (std::size_t s = 0; s < scans.size(); ++s) {
        const double z = arr.scan_z[scans[s]];
        for (std::size_t i = 0; i < txs.size(); ++i) {
          tx_path[i * scans.size() + s] = cache.optical_path({arr.tx_x[txs[i]], Y, z}, b);
        }
        for (std::size_t r = 0; r < rxs.size(); ++r) {
          rx_path[r * scans.size() + s] = cache.optical_path({arr.rx_x[rxs[r]], Y, z}, b);
        }
      }

      cplx acc{0.0, 0.0};
      for (std::size_t i = 0; i < txs.size(); ++i) {
        for (std::size_t r = 0; r < rxs.size(); ++r) {
          for (std::size_t s = 0; s < scans.size(); ++s) {
            const double path = tx_path[i * scans.size() + s] + rx_path[r * scans.size() + s];
            const cplx* row = in + ((txs[i] * n_rx + rxs[r]) * n_scan + scans[s]) * n_freq;
            for (const std::size_t f : freqs) acc += row[f] * std::polar(1.0, ks[f] * path);
          }
        }
      }
      out[v] = acc;
    }
  }
  return image;
}

}  // namespace lsar
