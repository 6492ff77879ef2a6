#include "lsar/fft.hpp"

#include <cmath>
#include <mutex>

#include <fftw3.h>

#include "lsar/error.hpp"

namespace lsar {

namespace {

// The FFTW planner is not re-entrant.
std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}

fftw_complex* as_fftw(cplx* p) { return reinterpret_cast<fftw_complex*>(p); }

void scale(cplx* data, std::size_t n, double factor) {
  for (std::size_t i = 0; i < n; ++i) data[i] *= factor;
}

}  // namespace

struct Fft2D::Plans {
  fftw_plan both_fwd = nullptr;
  fftw_plan both_inv = nullptr;
  fftw_plan rows_fwd = nullptr;
  fftw_plan rows_inv = nullptr;
  fftw_plan cols_fwd = nullptr;
  fftw_plan cols_inv = nullptr;

  ~Plans() {
    std::lock_guard lock(planner_mutex());
    for (fftw_plan p : {both_fwd, both_inv, rows_fwd, rows_inv, cols_fwd, cols_inv}) {
      if (p) fftw_destroy_plan(p);
    }
  }
};

Fft2D::Fft2D(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), plans_(std::make_unique<Plans>()) {
  if (rows == 0 || cols == 0) throw Error(ErrorCode::InvalidParameter, "FFT extents must be positive");
  const int r = static_cast<int>(rows);
  const int c = static_cast<int>(cols);
  const unsigned flags = FFTW_ESTIMATE | FFTW_UNALIGNED;

  std::lock_guard lock(planner_mutex());
  fftw_complex* buf = fftw_alloc_complex(rows * cols);
  plans_->both_fwd = fftw_plan_dft_2d(r, c, buf, buf, FFTW_FORWARD, flags);
  plans_->both_inv = fftw_plan_dft_2d(r, c, buf, buf, FFTW_BACKWARD, flags);
  // Along rows: length r, stride c, c transforms offset by 1.
  plans_->rows_fwd = fftw_plan_many_dft(1, &r, c, buf, nullptr, c, 1, buf, nullptr, c, 1, FFTW_FORWARD, flags);
  plans_->rows_inv = fftw_plan_many_dft(1, &r, c, buf, nullptr, c, 1, buf, nullptr, c, 1, FFTW_BACKWARD, flags);
  // Along cols: length c, contiguous, r transforms offset by c.
  plans_->cols_fwd = fftw_plan_many_dft(1, &c, r, buf, nullptr, 1, c, buf, nullptr, 1, c, FFTW_FORWARD, flags);
  plans_->cols_inv = fftw_plan_many_dft(1, &c, r, buf, nullptr, 1, c, buf, nullptr, 1, c, FFTW_BACKWARD, flags);
  fftw_free(buf);
}

Fft2D::~Fft2D() = default;
Fft2D::Fft2D(Fft2D&&) noexcept = default;
Fft2D& Fft2D::operator=(Fft2D&&) noexcept = default;

void Fft2D::both(cplx* data, FftDirection dir) const {
  fftw_execute_dft(dir == FftDirection::Forward ? plans_->both_fwd : plans_->both_inv, as_fftw(data), as_fftw(data));
  scale(data, rows_ * cols_, 1.0 / std::sqrt(static_cast<double>(rows_ * cols_)));
}

void Fft2D::along_rows(cplx* data, FftDirection dir) const {
  fftw_execute_dft(dir == FftDirection::Forward ? plans_->rows_fwd : plans_->rows_inv, as_fftw(data), as_fftw(data));
  scale(data, rows_ * cols_, 1.0 / std::sqrt(static_cast<double>(rows_)));
}

void Fft2D::along_cols(cplx* data, FftDirection dir) const {
  fftw_execute_dft(dir == FftDirection::Forward ? plans_->cols_fwd : plans_->cols_inv, as_fftw(data), as_fftw(data));
  scale(data, rows_ * cols_, 1.0 / std::sqrt(static_cast<double>(cols_)));
}

}  // namespace lsar
