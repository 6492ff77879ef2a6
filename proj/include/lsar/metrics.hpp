#ifndef LSAR_METRICS_HPP
#define LSAR_METRICS_HPP

#include <array>
#include <cstddef>
#include <limits>
#include <string>
#include <vector>

#include "lsar/tensor.hpp"

namespace lsar {

enum class ImageAxis { X = 0, Y = 1, Z = 2 };

ImageAxis parse_axis(const std::string& name);
const char* axis_name(ImageAxis axis);

inline constexpr double kZeroImageEntropy = std::numeric_limits<double>::infinity();

// Shannon entropy (bits) of the normalized intensity p_i = |I_i|^2 / sum |I|^2.
// An all-zero image returns kZeroImageEntropy.
double image_entropy(const ImageVolume& image);
double image_entropy(std::span<const cplx> values);

// 2-D section of a volume at `index` along `axis` (the remaining axes in order).
std::vector<cplx> extract_section(const ImageVolume& image, ImageAxis axis, std::size_t index);

struct Peak {
  std::array<std::size_t, 3> voxel{};
  double magnitude = 0.0;
};

// argmax |I|; ties resolve to the lexicographically smallest index.
Peak peak_location(const ImageVolume& image);

// Max projection along `axis`, 20 log10(max|I| / global peak), clipped below at -range.
struct Projection {
  ImageAxis axis = ImageAxis::Y;
  std::size_t rows = 0;  // first remaining axis
  std::size_t cols = 0;  // second remaining axis
  double dynamic_range_db = 30.0;
  std::vector<double> db;

  double at(std::size_t r, std::size_t c) const { return db[r * cols + c]; }
};

Projection max_projection(const ImageVolume& image, ImageAxis axis, double dynamic_range_db);

// Same dB mapping applied to a single section instead of a projection.
Projection section_db(const ImageVolume& image, ImageAxis axis, std::size_t index, double dynamic_range_db);

// Strict 8-neighbour local maxima above `floor_db`.
std::size_t count_local_maxima(const Projection& p, double floor_db);

struct MetricsReport {
  bool has_entropy = true;
  double image_entropy = 0.0;
  std::string entropy_scope = "volume";  // "volume" or e.g. "section y=3"
  Peak peak;
  bool has_projection = false;
  Projection projection;

  // One "key=value" per line.
  std::string to_text() const;
};

}  // namespace lsar

#endif  // LSAR_METRICS_HPP
