#ifndef LSAR_TENSOR_HPP
#define LSAR_TENSOR_HPP

#include <array>
#include <cmath>
#include <complex>
#include <cstddef>
#include <functional>
#include <numeric>
#include <span>
#include <string>
#include <vector>

namespace lsar {

using cplx = std::complex<double>;

// Physical sampling of one tensor axis: value(i) = start + i * step.
struct Axis {
  double start = 0.0;
  double step = 1.0;
  std::string unit = "index";

  double at(std::size_t i) const { return start + static_cast<double>(i) * step; }
  bool operator==(const Axis&) const = default;
};

// Dense row-major complex array. Tag keeps echo and image tensors distinct types.
template <std::size_t Rank, typename Tag>
class Tensor {
 public:
  using Extents = std::array<std::size_t, Rank>;

  Tensor() { extents_.fill(0); }
  explicit Tensor(const Extents& extents) : extents_(extents), data_(count(extents)) {}

  const Extents& extents() const noexcept { return extents_; }
  std::size_t extent(std::size_t dim) const { return extents_.at(dim); }
  std::size_t size() const noexcept { return data_.size(); }
  bool empty() const noexcept { return data_.empty(); }

  std::span<cplx> values() noexcept { return data_; }
  std::span<const cplx> values() const noexcept { return data_; }
  cplx* data() noexcept { return data_.data(); }
  const cplx* data() const noexcept { return data_.data(); }

  template <typename... Index>
  std::size_t offset(Index... idx) const noexcept {
    static_assert(sizeof...(Index) == Rank);
    const std::array<std::size_t, Rank> i{static_cast<std::size_t>(idx)...};
    std::size_t off = 0;
    for (std::size_t d = 0; d < Rank; ++d) off = off * extents_[d] + i[d];
    return off;
  }

  template <typename... Index>
  cplx& operator()(Index... idx) noexcept { return data_[offset(idx...)]; }
  template <typename... Index>
  const cplx& operator()(Index... idx) const noexcept { return data_[offset(idx...)]; }

  bool same_shape(const Tensor& other) const noexcept { return extents_ == other.extents_; }

  static std::size_t count(const Extents& e) {
    return std::accumulate(e.begin(), e.end(), std::size_t{1}, std::multiplies<>{});
  }

  std::array<Axis, Rank> axes{};
  std::string provenance;

 private:
  Extents extents_;
  std::vector<cplx> data_;
};

struct EchoTag {};
struct ImageTag {};

// Indexed (tx, rx, scan, freq).
using EchoTensor = Tensor<4, EchoTag>;
// Indexed (x, y, z) on the scene voxel grid.
using ImageVolume = Tensor<3, ImageTag>;

// Sesquilinear inner product <a, b> = sum conj(a) * b.
template <typename T>
cplx inner(const T& a, const T& b) {
  cplx acc{0.0, 0.0};
  const auto va = a.values();
  const auto vb = b.values();
  for (std::size_t i = 0; i < va.size(); ++i) acc += std::conj(va[i]) * vb[i];
  return acc;
}

template <typename T>
double norm2(const T& a) {
  double acc = 0.0;
  for (const auto& v : a.values()) acc += std::norm(v);
  return std::sqrt(acc);
}

}  // namespace lsar

#endif  // LSAR_TENSOR_HPP
