#ifndef LSAR_OPERATORS_HPP
#define LSAR_OPERATORS_HPP

#include <cstddef>
#include <cstdint>
#include <vector>

#include "lsar/fft.hpp"
#include "lsar/scene.hpp"
#include "lsar/tensor.hpp"

namespace lsar {

// Phase compensation maps for one (wavenumber, transmitter) pair.
//   phi_A [y][kx][kz] = exp(j (k_yR1 y - k_yR0 Y))
//   phi_BC[y][x][kz]  = exp(j k_xYT R_air') * exp(j k_xyT R_med')
// where R_air' / R_med' are the in-plane transmit leg lengths through the
// crossing x_bT(x_T, x, y). Evanescent entries are exactly zero.
struct PhaseCompensationSet {
  double k = 0.0;
  std::size_t tx_index = 0;
  std::size_t ny = 0;
  std::size_t nkx = 0;
  std::size_t nx = 0;
  std::size_t nkz = 0;
  std::vector<cplx> phi_A;
  std::vector<cplx> phi_BC;
  std::vector<std::uint8_t> propagating_A;   // 1 where phi_A is not masked
  std::vector<std::uint8_t> propagating_BC;  // 1 where phi_BC is not masked
  std::vector<double> air_leg;               // [y][x] sqrt((x_T - x_bT)^2 + Y^2)
  std::vector<double> med_leg;               // [y][x] sqrt((x_bT - x)^2 + y^2)
  std::vector<double> crossing_x;            // [y][x] x_bT

  cplx A(std::size_t iy, std::size_t ikx, std::size_t ikz) const { return phi_A[(iy * nkx + ikx) * nkz + ikz]; }
  cplx BC(std::size_t iy, std::size_t ix, std::size_t ikz) const { return phi_BC[(iy * nx + ix) * nkz + ikz]; }
};

PhaseCompensationSet build_phase_maps(const ValidatedScene& scene, double k, std::size_t tx_index);

// Matrix-free sensing operator pair on a validated scene.
//   adjoint(): Psi^dagger, the DT-FDA image formation (echo -> image)
//   forward(): Psi, its exact adjoint under unitary FFTs (image -> echo)
// The receiver / scan axes are zero-padded to the grid x / z sizes. Phase maps
// are built per (tx, k) on demand; transmit crossings are cached per tx.
class SensingOperator {
 public:
  explicit SensingOperator(const ValidatedScene& scene);

  ImageVolume adjoint(const EchoTensor& echo) const;
  EchoTensor forward(const ImageVolume& image) const;

  const ValidatedScene& scene() const noexcept { return scene_; }

 private:
  struct BlockSpectra;

  BlockSpectra spectra_for(std::size_t freq_index) const;
  void fill_phase_a(const BlockSpectra& b, std::size_t iy, cplx* out) const;
  void fill_phase_bc(const BlockSpectra& b, std::size_t tx, std::size_t iy, cplx* out) const;
  double echo_weight(std::size_t r, std::size_t s, std::size_t f) const;

  ValidatedScene scene_;
  Fft2D fft_;
  std::size_t nx_, ny_, nz_;
  std::vector<cplx> grid_shift_;  // [kx][kz] aligns the IFFT output with the grid origin
  std::vector<double> air_leg_;   // [tx][y][x]
  std::vector<double> med_leg_;   // [tx][y][x]
  std::vector<double> w_rx_, w_scan_, w_freq_;
};

ImageVolume dtfda_reconstruct(const EchoTensor& echo, const ValidatedScene& scene);
EchoTensor forward_project(const ImageVolume& image, const ValidatedScene& scene);

}  // namespace lsar

#endif  // LSAR_OPERATORS_HPP
