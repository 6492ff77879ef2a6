#ifndef LSAR_DATAIO_HPP
#define LSAR_DATAIO_HPP

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "lsar/metrics.hpp"
#include "lsar/tensor.hpp"

namespace lsar {

// On-disk layout, all integers and floats little-endian:
//
//   offset  size  field
//   0       8     magic "LSARVOL\0"
//   8       4     u32 format version (kFormatVersion)
//   12      4     u32 element type (1 = complex64, 2 = complex128)
//   16      4     u32 tensor kind (0 = echo, 1 = image)
//   20      4     u32 rank
//   24      8*r   u64 extent per axis
//   ...           per axis: f64 start, f64 step, u32 unit length, unit bytes
//   ...     8     u64 metadata length, then UTF-8 JSON metadata
//   ...           payload: interleaved (re, im) in row-major order
inline constexpr char kMagic[8] = {'L', 'S', 'A', 'R', 'V', 'O', 'L', '\0'};
inline constexpr std::uint32_t kFormatVersion = 1;

enum class ElementType : std::uint32_t { Complex64 = 1, Complex128 = 2 };
enum class TensorKind : std::uint32_t { Echo = 0, Image = 1 };

std::size_t element_size(ElementType type);

struct VolumeFileHeader {
  std::uint32_t version = kFormatVersion;
  ElementType element = ElementType::Complex128;
  TensorKind kind = TensorKind::Image;
  std::vector<std::uint64_t> extents;
  std::vector<Axis> axes;
  std::string provenance;
  std::string scene_hash;
  std::uint64_t header_bytes = 0;  // offset of the payload

  std::uint64_t payload_bytes() const;
};

using AnyTensor = std::variant<EchoTensor, ImageVolume>;

void write_tensor(const std::filesystem::path& path, const EchoTensor& echo,
                  ElementType element = ElementType::Complex64, const std::string& scene_hash = {});
void write_tensor(const std::filesystem::path& path, const ImageVolume& image,
                  ElementType element = ElementType::Complex128, const std::string& scene_hash = {});

// Parses and checks the header only (including the file length).
VolumeFileHeader read_header(const std::filesystem::path& path);

AnyTensor read_tensor(const std::filesystem::path& path, VolumeFileHeader* header = nullptr);
EchoTensor read_echo(const std::filesystem::path& path);
ImageVolume read_image(const std::filesystem::path& path);

// 8-bit grayscale PNG of a section (`index` given) or of the max projection
// along `axis` (no index). dB values map linearly: -range -> 0, 0 dB -> 255.
// The first remaining axis runs along the image width.
void export_slice_image(const ImageVolume& image, ImageAxis axis, std::optional<std::size_t> index,
                        double dynamic_range_db, const std::filesystem::path& path);

// Pixel value for a dB level under the export mapping.
std::uint8_t db_to_gray(double db, double dynamic_range_db);

}  // namespace lsar

#endif  // LSAR_DATAIO_HPP
