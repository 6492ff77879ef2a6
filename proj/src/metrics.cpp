#include "lsar/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "lsar/error.hpp"

namespace lsar {

namespace {

// Remaining axes after removing `axis`, in order.
std::array<std::size_t, 2> remaining(ImageAxis axis) {
  switch (axis) {
    case ImageAxis::X: return {1, 2};
    case ImageAxis::Y: return {0, 2};
    case ImageAxis::Z: return {0, 1};
  }
  return {0, 2};
}

std::array<std::size_t, 3> voxel_of(std::size_t a, std::size_t r, std::size_t c, ImageAxis axis) {
  switch (axis) {
    case ImageAxis::X: return {a, r, c};
    case ImageAxis::Y: return {r, a, c};
    case ImageAxis::Z: return {r, c, a};
  }
  return {r, a, c};
}

void to_db(std::vector<double>& mags, double peak, double range) {
  for (auto& v : mags) {
    const double db = (peak > 0.0 && v > 0.0) ? 20.0 * std::log10(v / peak) : -range;
    v = std::max(db, -range);
  }
}

}  // namespace

ImageAxis parse_axis(const std::string& name) {
  if (name == "x") return ImageAxis::X;
  if (name == "y") return ImageAxis::Y;
  if (name == "z") return ImageAxis::Z;
  throw Error(ErrorCode::InvalidParameter, "axis must be x, y or z");
}

const char* axis_name(ImageAxis axis) {
  switch (axis) {
    case ImageAxis::X: return "x";
    case ImageAxis::Y: return "y";
    case ImageAxis::Z: return "z";
  }
  return "?";
}

double image_entropy(std::span<const cplx> values) {
  double total = 0.0;
  for (const auto& v : values) total += std::norm(v);
  if (!(total > 0.0)) return kZeroImageEntropy;
  double h = 0.0;
  for (const auto& v : values) {
    const double p = std::norm(v) / total;
    if (p > 0.0) h -= p * std::log2(p);
  }
  return std::max(h, 0.0);
}

double image_entropy(const ImageVolume& image) { return image_entropy(image.values()); }

std::vector<cplx> extract_section(const ImageVolume& image, ImageAxis axis, std::size_t index) {
  const auto a = static_cast<std::size_t>(axis);
  if (index >= image.extent(a)) throw Error(ErrorCode::IndexOutOfRange, "section index out of range");
  const auto rem = remaining(axis);
  const std::size_t rows = image.extent(rem[0]);
  const std::size_t cols = image.extent(rem[1]);
  std::vector<cplx> out(rows * cols);
  for (std::size_t r = 0; r < rows; ++r) {
    for (std::size_t c = 0; c < cols; ++c) {
      const auto v = voxel_of(index, r, c, axis);
      out[r * cols + c] = image(v[0], v[1], v[2]);
    }
  }
  return out;
}

Peak peak_location(const ImageVolume& image) {
  if (image.empty()) throw Error(ErrorCode::EmptyImage, "image has no voxels");
  std::size_t best = 0;
  double best_mag = -1.0;
  const auto vals = image.values();
  for (std::size_t i = 0; i < vals.size(); ++i) {
    const double m = std::abs(vals[i]);
    if (m > best_mag) {  // strict: first (row-major smallest) index wins ties
      best_mag = m;
      best = i;
    }
  }
  const auto& e = image.extents();
  Peak p;
  p.voxel = {best / (e[1] * e[2]), (best / e[2]) % e[1], best % e[2]};
  p.magnitude = best_mag;
  return p;
}

Projection max_projection(const ImageVolume& image, ImageAxis axis, double dynamic_range_db) {
  if (image.empty()) throw Error(ErrorCode::EmptyImage, "image has no voxels");
  if (!(dynamic_range_db > 0.0)) throw Error(ErrorCode::InvalidParameter, "dynamic range must be > 0");
  const auto a = static_cast<std::size_t>(axis);
  const auto rem = remaining(axis);
  Projection p;
  p.axis = axis;
  p.rows = image.extent(rem[0]);
  p.cols = image.extent(rem[1]);
  p.dynamic_range_db = dynamic_range_db;
  p.db.assign(p.rows * p.cols, 0.0);
  double peak = 0.0;
  for (std::size_t r = 0; r < p.rows; ++r) {
    for (std::size_t c = 0; c < p.cols; ++c) {
      double m = 0.0;
      for (std::size_t k = 0; k < image.extent(a); ++k) {
        const auto v = voxel_of(k, r, c, axis);
        m = std::max(m, std::abs(image(v[0], v[1], v[2])));
      }
      p.db[r * p.cols + c] = m;
      peak = std::max(peak, m);
    }
  }
  to_db(p.db, peak, dynamic_range_db);
  return p;
}

Projection section_db(const ImageVolume& image, ImageAxis axis, std::size_t index, double dynamic_range_db) {
  if (!(dynamic_range_db > 0.0)) throw Error(ErrorCode::InvalidParameter, "dynamic range must be > 0");
  const auto section = extract_section(image, axis, index);
  const auto rem = remaining(axis);
  Projection p;
  p.axis = axis;
  p.rows = image.extent(rem[0]);
  p.cols = image.extent(rem[1]);
  p.dynamic_range_db = dynamic_range_db;
  p.db.resize(section.size());
  double peak = 0.0;
  for (std::size_t i = 0; i < section.size(); ++i) {
    p.db[i] = std::abs(section[i]);
    peak = std::max(peak, p.db[i]);
  }
  to_db(p.db, peak, dynamic_range_db);
  return p;
}

std::size_t count_local_maxima(const Projection& p, double floor_db) {
  std::size_t count = 0;
  for (std::size_t r = 0; r < p.rows; ++r) {
    for (std::size_t c = 0; c < p.cols; ++c) {
      const double v = p.at(r, c);
      if (v <= floor_db) continue;
      bool is_max = true;
      for (int dr = -1; dr <= 1 && is_max; ++dr) {
        for (int dc = -1; dc <= 1; ++dc) {
          if (dr == 0 && dc == 0) continue;
          const auto rr = static_cast<std::ptrdiff_t>(r) + dr;
          const auto cc = static_cast<std::ptrdiff_t>(c) + dc;
          if (rr < 0 || cc < 0 || rr >= static_cast<std::ptrdiff_t>(p.rows) ||
              cc >= static_cast<std::ptrdiff_t>(p.cols)) {
            continue;
          }
          if (p.at(static_cast<std::size_t>(rr), static_cast<std::size_t>(cc)) >= v) {
            is_max = false;
            break;
          }
        }
      }
      if (is_max) ++count;
    }
  }
  return count;
}

std::string MetricsReport::to_text() const {
  std::ostringstream os;
  os.precision(10);
  if (has_entropy) {
    os << "image_entropy_bits=" << image_entropy << "\n";
    os << "entropy_scope=" << entropy_scope << "\n";
  }
  os << "peak_x=" << peak.voxel[0] << "\n";
  os << "peak_y=" << peak.voxel[1] << "\n";
  os << "peak_z=" << peak.voxel[2] << "\n";
  os << "peak_value=" << peak.magnitude << "\n";
  if (has_projection) {
    os << "projection_axis=" << axis_name(projection.axis) << "\n";
    os << "projection_shape=" << projection.rows << "x" << projection.cols << "\n";
    os << "projection_range_db=" << projection.dynamic_range_db << "\n";
  }
  return os.str();
}

}  // namespace lsar
