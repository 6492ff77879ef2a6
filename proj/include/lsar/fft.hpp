#ifndef LSAR_FFT_HPP
#define LSAR_FFT_HPP

#include <cstddef>
#include <memory>

#include "lsar/tensor.hpp"

namespace lsar {

enum class FftDirection { Forward, Inverse };

// Unitary (1/sqrt(N) per axis) in-place DFTs on a row-major rows x cols
// buffer. Forward uses exp(-j 2 pi m n / N). Plans are created once; execute
// calls are safe from multiple threads on distinct buffers.
class Fft2D {
 public:
  Fft2D(std::size_t rows, std::size_t cols);
  ~Fft2D();
  Fft2D(const Fft2D&) = delete;
  Fft2D& operator=(const Fft2D&) = delete;
  Fft2D(Fft2D&&) noexcept;
  Fft2D& operator=(Fft2D&&) noexcept;

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }

  void both(cplx* data, FftDirection dir) const;
  // Transform along the row index (one DFT of length `rows` per column).
  void along_rows(cplx* data, FftDirection dir) const;
  // Transform along the column index (one DFT of length `cols` per row).
  void along_cols(cplx* data, FftDirection dir) const;

 private:
  struct Plans;
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::unique_ptr<Plans> plans_;
};

}  // namespace lsar

#endif  // LSAR_FFT_HPP
