#ifndef LSAR_IBP_HPP
#define LSAR_IBP_HPP

#include <cstddef>

#include "lsar/scene.hpp"
#include "lsar/tensor.hpp"

namespace lsar {

// Keep every n-th sample along each echo axis. Anything other than all ones
// is an approximation for quick desk-scale runs.
struct IbpStride {
  std::size_t tx = 1;
  std::size_t rx = 1;
  std::size_t scan = 1;
  std::size_t freq = 1;

  bool full() const noexcept { return tx == 1 && rx == 1 && scan == 1 && freq == 1; }
};

// Matched-filter back-projection through the interface:
//   I(b) = sum_{tx,rx,z',k} echo(tx,rx,z',k) exp(+j k (L_T(b) + L_R(b)))
// with L the one-way optical path R_air + sqrt(eps) R_med.
ImageVolume ibp_reconstruct(const EchoTensor& echo, const ValidatedScene& scene, const IbpStride& stride = {});

}  // namespace lsar

#endif  // LSAR_IBP_HPP
