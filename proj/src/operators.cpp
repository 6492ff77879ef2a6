#include "lsar/operators.hpp"

#include <cmath>
#include <string>

#include "lsar/em_core.hpp"
#include "lsar/error.hpp"

namespace lsar {

namespace {

struct TransmitLegs {
  double air;
  double med;
  double crossing;
};

// In-plane (z-independent) transmit geometry from (x_T, Y) to (x, y).
TransmitLegs transmit_legs(double x_t, double aperture_y, double x, double y, double permittivity) {
  if (permittivity == 1.0 && y < 0.0) {
    // Free space above the nominal interface: only the total length matters.
    return {std::hypot(x - x_t, y - aperture_y), 0.0, x};
  }
  const auto sol = solve_refraction({x_t, aperture_y, 0.0}, {x, y, 0.0}, permittivity);
  return {sol.R_air, sol.R_med, sol.x_b};
}

std::vector<double> hann(std::size_t n) {
  std::vector<double> w(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double s = std::sin(kPi * (static_cast<double>(i) + 0.5) / static_cast<double>(n));
    w[i] = s * s;
  }
  return w;
}

}  // namespace

struct SensingOperator::BlockSpectra {
  double k = 0.0;
  cplx weight;                      // 1 / (j eta0 k)
  std::vector<double> k_yR0, k_yR1;  // [kx][kz]
  std::vector<std::uint8_t> prop_A;  // [kx][kz]
  std::vector<double> k_xYT, k_xyT;  // [kz]
  std::vector<std::uint8_t> prop_T;  // [kz]
};

SensingOperator::SensingOperator(const ValidatedScene& scene)
    : scene_(scene), fft_(scene.nx(), scene.nz()), nx_(scene.nx()), ny_(scene.ny()), nz_(scene.nz()) {
  const auto& cfg = scene_.config();
  const auto& kx = scene_.kx_axis();
  const auto& kz = scene_.kz_axis();
  const double shift_x = cfg.grid.x.front() - cfg.arrays.rx_x.front();
  const double shift_z = cfg.grid.z.front() - cfg.arrays.scan_z.front();
  grid_shift_.resize(nx_ * nz_);
  for (std::size_t a = 0; a < nx_; ++a) {
    for (std::size_t c = 0; c < nz_; ++c) {
      grid_shift_[a * nz_ + c] = std::polar(1.0, kx[a] * shift_x + kz[c] * shift_z);
    }
  }

  const std::size_t n_tx = scene_.n_tx();
  air_leg_.resize(n_tx * ny_ * nx_);
  med_leg_.resize(n_tx * ny_ * nx_);
  for (std::size_t t = 0; t < n_tx; ++t) {
    for (std::size_t iy = 0; iy < ny_; ++iy) {
      for (std::size_t ix = 0; ix < nx_; ++ix) {
        const auto legs = transmit_legs(cfg.arrays.tx_x[t], scene_.aperture_y(), cfg.grid.x[ix], cfg.grid.y[iy],
                                        scene_.permittivity());
        const std::size_t o = (t * ny_ + iy) * nx_ + ix;
        air_leg_[o] = legs.air;
        med_leg_[o] = legs.med;
      }
    }
  }

  if (cfg.taper == Taper::Hann) {
    w_rx_ = hann(scene_.n_rx());
    w_scan_ = hann(scene_.n_scan());
    w_freq_ = hann(scene_.n_freq());
  }
}

double SensingOperator::echo_weight(std::size_t r, std::size_t s, std::size_t f) const {
  if (w_rx_.empty()) return 1.0;
  return w_rx_[r] * w_scan_[s] * w_freq_[f];
}

SensingOperator::BlockSpectra SensingOperator::spectra_for(std::size_t freq_index) const {
  BlockSpectra b;
  b.k = scene_.wavenumbers()[freq_index];
  b.weight = 1.0 / cplx(0.0, scene_.eta0() * b.k);
  const auto& kx = scene_.kx_axis();
  const auto& kz = scene_.kz_axis();
  const double eps = scene_.permittivity();
  b.k_yR0.resize(nx_ * nz_);
  b.k_yR1.resize(nx_ * nz_);
  b.prop_A.resize(nx_ * nz_);
  b.k_xYT.resize(nz_);
  b.k_xyT.resize(nz_);
  b.prop_T.resize(nz_);
  for (std::size_t c = 0; c < nz_; ++c) {
    const auto t = spectral_components(b.k, eps, 0.0, kz[c]);
    b.k_xYT[c] = t.k_xYT;
    b.k_xyT[c] = t.k_xyT;
    b.prop_T[c] = t.transmit_propagating() ? 1 : 0;
  }
  for (std::size_t a = 0; a < nx_; ++a) {
    for (std::size_t c = 0; c < nz_; ++c) {
      const auto sc = spectral_components(b.k, eps, kx[a], kz[c]);
      b.k_yR0[a * nz_ + c] = sc.k_yR0;
      b.k_yR1[a * nz_ + c] = sc.k_yR1;
      b.prop_A[a * nz_ + c] = sc.receive_propagating() ? 1 : 0;
    }
  }
  return b;
}

void SensingOperator::fill_phase_a(const BlockSpectra& b, std::size_t iy, cplx* out) const {
  const double y = scene_.config().grid.y[iy];
  const double Y = scene_.aperture_y();
  for (std::size_t i = 0; i < nx_ * nz_; ++i) {
    out[i] = b.prop_A[i] ? std::polar(1.0, b.k_yR1[i] * y - b.k_yR0[i] * Y) : cplx{};
  }
}

void SensingOperator::fill_phase_bc(const BlockSpectra& b, std::size_t tx, std::size_t iy, cplx* out) const {
  const double* air = &air_leg_[(tx * ny_ + iy) * nx_];
  const double* med = &med_leg_[(tx * ny_ + iy) * nx_];
  for (std::size_t a = 0; a < nx_; ++a) {
    for (std::size_t c = 0; c < nz_; ++c) {
      out[a * nz_ + c] = b.prop_T[c] ? std::polar(1.0, b.k_xYT[c] * air[a] + b.k_xyT[c] * med[a]) : cplx{};
    }
  }
}

ImageVolume SensingOperator::adjoint(const EchoTensor& echo) const {
  if (echo.extents() != scene_.echo_extents()) {
    throw Error(ErrorCode::DimensionMismatch, "echo dimensions do not match the scene");
  }
  const std::size_t n_tx = scene_.n_tx(), n_rx = scene_.n_rx(), n_scan = scene_.n_scan(), n_freq = scene_.n_freq();
  const std::size_t plane = nx_ * nz_;
  ImageVolume image = scene_.make_image();
  image.provenance = "dtfda";
  cplx* img = image.data();
  std::vector<cplx> spectrum(plane);
  std::vector<BlockSpectra> blocks;
  blocks.reserve(n_freq);
  for (std::size_t f = 0; f < n_freq; ++f) blocks.push_back(spectra_for(f));

  // Sub-images accumulate in fixed (tx outer, k inner) order; y slices are
  // independent and write disjoint voxels.
  for (std::size_t t = 0; t < n_tx; ++t) {
    for (std::size_t f = 0; f < n_freq; ++f) {
      const BlockSpectra& b = blocks[f];
      std::fill(spectrum.begin(), spectrum.end(), cplx{});
      for (std::size_t r = 0; r < n_rx; ++r) {
        for (std::size_t s = 0; s < n_scan; ++s) {
          spectrum[r * nz_ + s] = echo(t, r, s, f) * echo_weight(r, s, f);
        }
      }
      fft_.both(spectrum.data(), FftDirection::Forward);

#pragma omp parallel
      {
        std::vector<cplx> buf(plane);
        std::vector<cplx> phase(plane);
#pragma omp for schedule(static)
        for (std::size_t iy = 0; iy < ny_; ++iy) {
          fill_phase_a(b, iy, phase.data());
          for (std::size_t i = 0; i < plane; ++i) buf[i] = spectrum[i] * phase[i] * grid_shift_[i];
          fft_.along_rows(buf.data(), FftDirection::Inverse);
          fill_phase_bc(b, t, iy, phase.data());
          for (std::size_t i = 0; i < plane; ++i) buf[i] *= phase[i];
          fft_.along_cols(buf.data(), FftDirection::Inverse);
          for (std::size_t ix = 0; ix < nx_; ++ix) {
            cplx* dst = img + (ix * ny_ + iy) * nz_;
            const cplx* src = buf.data() + ix * nz_;
            for (std::size_t iz = 0; iz < nz_; ++iz) dst[iz] += b.weight * src[iz];
          }
        }
      }
    }
  }
  return image;
}

EchoTensor SensingOperator::forward(const ImageVolume& image) const {
  if (image.extents() != scene_.image_extents()) {
    throw Error(ErrorCode::DimensionMismatch, "image dimensions do not match the scene grid");
  }
  const std::size_t n_tx = scene_.n_tx(), n_rx = scene_.n_rx(), n_scan = scene_.n_scan(), n_freq = scene_.n_freq();
  const std::size_t plane = nx_ * nz_;
  EchoTensor echo = scene_.make_echo();
  echo.provenance = "forward projection";
  const cplx* img = image.data();
  std::vector<cplx> slices(ny_ * plane);
  std::vector<cplx> spectrum(plane);
  std::vector<BlockSpectra> blocks;
  blocks.reserve(n_freq);
  for (std::size_t f = 0; f < n_freq; ++f) blocks.push_back(spectra_for(f));

  for (std::size_t t = 0; t < n_tx; ++t) {
    for (std::size_t f = 0; f < n_freq; ++f) {
      const BlockSpectra& b = blocks[f];
      const cplx cw = std::conj(b.weight);

#pragma omp parallel
      {
        std::vector<cplx> phase(plane);
#pragma omp for schedule(static)
        for (std::size_t iy = 0; iy < ny_; ++iy) {
          cplx* buf = slices.data() + iy * plane;
          for (std::size_t ix = 0; ix < nx_; ++ix) {
            const cplx* src = img + (ix * ny_ + iy) * nz_;
            for (std::size_t iz = 0; iz < nz_; ++iz) buf[ix * nz_ + iz] = cw * src[iz];
          }
          fft_.along_cols(buf, FftDirection::Forward);
          fill_phase_bc(b, t, iy, phase.data());
          for (std::size_t i = 0; i < plane; ++i) buf[i] *= std::conj(phase[i]);
          fft_.along_rows(buf, FftDirection::Forward);
          fill_phase_a(b, iy, phase.data());
          for (std::size_t i = 0; i < plane; ++i) buf[i] *= std::conj(phase[i] * grid_shift_[i]);
        }
      }

      std::fill(spectrum.begin(), spectrum.end(), cplx{});
      for (std::size_t iy = 0; iy < ny_; ++iy) {
        const cplx* src = slices.data() + iy * plane;
        for (std::size_t i = 0; i < plane; ++i) spectrum[i] += src[i];
      }
      fft_.both(spectrum.data(), FftDirection::Inverse);
      for (std::size_t r = 0; r < n_rx; ++r) {
        for (std::size_t s = 0; s < n_scan; ++s) {
          echo(t, r, s, f) = spectrum[r * nz_ + s] * echo_weight(r, s, f);
        }
      }
    }
  }
  return echo;
}

PhaseCompensationSet build_phase_maps(const ValidatedScene& scene, double k, std::size_t tx_index) {
  if (tx_index >= scene.n_tx()) throw Error(ErrorCode::IndexOutOfRange, "transmitter index out of range");
  if (!(k > 0.0)) throw Error(ErrorCode::NonPositiveFrequency, "wavenumber must be positive");
  const auto& cfg = scene.config();
  const auto& kx = scene.kx_axis();
  const auto& kz = scene.kz_axis();
  const double eps = scene.permittivity();
  const double Y = scene.aperture_y();

  PhaseCompensationSet p;
  p.k = k;
  p.tx_index = tx_index;
  p.ny = scene.ny();
  p.nkx = kx.size();
  p.nx = scene.nx();
  p.nkz = kz.size();
  p.phi_A.resize(p.ny * p.nkx * p.nkz);
  p.propagating_A.resize(p.phi_A.size());
  p.phi_BC.resize(p.ny * p.nx * p.nkz);
  p.propagating_BC.resize(p.phi_BC.size());
  p.air_leg.resize(p.ny * p.nx);
  p.med_leg.resize(p.ny * p.nx);
  p.crossing_x.resize(p.ny * p.nx);

  for (std::size_t iy = 0; iy < p.ny; ++iy) {
    const double y = cfg.grid.y[iy];
    for (std::size_t a = 0; a < p.nkx; ++a) {
      for (std::size_t c = 0; c < p.nkz; ++c) {
        const auto sc = spectral_components(k, eps, kx[a], kz[c]);
        const std::size_t o = (iy * p.nkx + a) * p.nkz + c;
        p.propagating_A[o] = sc.receive_propagating() ? 1 : 0;
        p.phi_A[o] = p.propagating_A[o] ? std::polar(1.0, sc.k_yR1 * y - sc.k_yR0 * Y) : cplx{};
      }
    }
    for (std::size_t ix = 0; ix < p.nx; ++ix) {
      const auto legs = transmit_legs(cfg.arrays.tx_x[tx_index], Y, cfg.grid.x[ix], y, eps);
      p.air_leg[iy * p.nx + ix] = legs.air;
      p.med_leg[iy * p.nx + ix] = legs.med;
      p.crossing_x[iy * p.nx + ix] = legs.crossing;
      for (std::size_t c = 0; c < p.nkz; ++c) {
        const auto sc = spectral_components(k, eps, 0.0, kz[c]);
        const std::size_t o = (iy * p.nx + ix) * p.nkz + c;
        p.propagating_BC[o] = sc.transmit_propagating() ? 1 : 0;
        p.phi_BC[o] = p.propagating_BC[o] ? std::polar(1.0, sc.k_xYT * legs.air + sc.k_xyT * legs.med) : cplx{};
      }
    }
  }
  return p;
}

ImageVolume dtfda_reconstruct(const EchoTensor& echo, const ValidatedScene& scene) {
  return SensingOperator(scene).adjoint(echo);
}

EchoTensor forward_project(const ImageVolume& image, const ValidatedScene& scene) {
  return SensingOperator(scene).forward(image);
}

}  // namespace lsar
