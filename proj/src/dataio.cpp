#include "lsar/dataio.hpp"

#include <png.h>

#include <algorithm>
#include <bit>
#include <climits>
#include <cstdint>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <iterator>
#include <memory>

#include <json.hpp>

#include "lsar/error.hpp"

namespace lsar {

namespace {

constexpr std::uint32_t kMaxUnitLength = 256;

// Thrown when parsing runs past the bytes available to the reader.
struct Exhausted {};

class ByteWriter {
 public:
  void bytes(const void* p, std::size_t n) {
    const auto* c = static_cast<const unsigned char*>(p);
    buf_.insert(buf_.end(), c, c + n);
  }
  void u32(std::uint32_t v) {
    for (int i = 0; i < 4; ++i) buf_.push_back(static_cast<unsigned char>(v >> (8 * i)));
  }
  void u64(std::uint64_t v) {
    for (int i = 0; i < 8; ++i) buf_.push_back(static_cast<unsigned char>(v >> (8 * i)));
  }
  void f32(float v) { u32(std::bit_cast<std::uint32_t>(v)); }
  void f64(double v) { u64(std::bit_cast<std::uint64_t>(v)); }
  void reserve(std::size_t n) { buf_.reserve(n); }
  const std::vector<unsigned char>& data() const { return buf_; }

 private:
  std::vector<unsigned char> buf_;
};

class ByteReader {
 public:
  ByteReader(const unsigned char* p, std::size_t n) : p_(p), n_(n) {}

  void need(std::size_t k) const {
    if (n_ - pos_ < k) throw Exhausted{};
  }
  std::uint32_t u32() {
    need(4);
    std::uint32_t v = 0;
    for (int i = 0; i < 4; ++i) v |= static_cast<std::uint32_t>(p_[pos_ + i]) << (8 * i);
    pos_ += 4;
    return v;
  }
  std::uint64_t u64() {
    need(8);
    std::uint64_t v = 0;
    for (int i = 0; i < 8; ++i) v |= static_cast<std::uint64_t>(p_[pos_ + i]) << (8 * i);
    pos_ += 8;
    return v;
  }
  float f32() { return std::bit_cast<float>(u32()); }
  double f64() { return std::bit_cast<double>(u64()); }
  std::string str(std::size_t k) {
    need(k);
    std::string s(reinterpret_cast<const char*>(p_ + pos_), k);
    pos_ += k;
    return s;
  }
  std::size_t pos() const { return pos_; }
  std::size_t remaining() const { return n_ - pos_; }

 private:
  const unsigned char* p_;
  std::size_t n_;
  std::size_t pos_ = 0;
};

std::vector<unsigned char> slurp(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::IoFailure, "cannot open " + path.string());
  std::vector<unsigned char> buf((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  if (in.bad()) throw Error(ErrorCode::IoFailure, "read failed for " + path.string());
  return buf;
}

VolumeFileHeader parse_header(ByteReader& r, std::size_t file_size) {
  if (file_size < sizeof(kMagic) || std::memcmp(r.str(sizeof(kMagic)).data(), kMagic, sizeof(kMagic)) != 0) {
    throw Error(ErrorCode::BadMagic, "not a volume file");
  }
  VolumeFileHeader h;
  h.version = r.u32();
  if (h.version != kFormatVersion) {
    throw Error(ErrorCode::VersionUnsupported, "format version " + std::to_string(h.version) + " is not supported");
  }
  const std::uint32_t element = r.u32();
  if (element != 1 && element != 2) throw Error(ErrorCode::UnsupportedElementType, "unknown element type");
  h.element = static_cast<ElementType>(element);
  const std::uint32_t kind = r.u32();
  if (kind > 1) throw Error(ErrorCode::InvalidConfig, "unknown tensor kind");
  h.kind = static_cast<TensorKind>(kind);
  const std::uint32_t rank = r.u32();
  if (rank != (h.kind == TensorKind::Echo ? 4u : 3u)) {
    throw Error(ErrorCode::DimensionMismatch, "rank does not match the tensor kind");
  }
  for (std::uint32_t d = 0; d < rank; ++d) h.extents.push_back(r.u64());
  for (std::uint32_t d = 0; d < rank; ++d) {
    Axis a;
    a.start = r.f64();
    a.step = r.f64();
    const std::uint32_t len = r.u32();
    if (len > kMaxUnitLength) throw Error(ErrorCode::InvalidConfig, "axis unit is too long");
    a.unit = r.str(len);
    h.axes.push_back(a);
  }
  const std::uint64_t meta_len = r.u64();
  r.need(static_cast<std::size_t>(std::min<std::uint64_t>(meta_len, SIZE_MAX)));
  const std::string meta = r.str(static_cast<std::size_t>(meta_len));
  if (!meta.empty()) {
    try {
      const auto j = nlohmann::json::parse(meta);
      h.provenance = j.value("provenance", "");
      h.scene_hash = j.value("scene_hash", "");
    } catch (const nlohmann::json::exception& e) {
      throw Error(ErrorCode::InvalidConfig, std::string("bad metadata: ") + e.what());
    }
  }
  h.header_bytes = r.pos();

  // Guard the product against overflow before comparing sizes.
  std::uint64_t count = 1;
  for (auto e : h.extents) {
    if (e != 0 && count > (std::uint64_t{1} << 60) / e) {
      throw Error(ErrorCode::PayloadSizeMismatch, "declared extents are implausibly large");
    }
    count *= e;
  }
  if (h.header_bytes + h.payload_bytes() != file_size) {
    throw Error(ErrorCode::PayloadSizeMismatch, "file holds " + std::to_string(file_size - h.header_bytes) +
                                                    " payload bytes, header declares " +
                                                    std::to_string(h.payload_bytes()));
  }
  return h;
}

template <typename T>
void write_impl(const std::filesystem::path& path, const T& tensor, TensorKind kind, ElementType element,
                const std::string& scene_hash) {
  if (element != ElementType::Complex64 && element != ElementType::Complex128) {
    throw Error(ErrorCode::UnsupportedElementType, "element type must be complex64 or complex128");
  }
  ByteWriter w;
  w.reserve(256 + tensor.size() * element_size(element));
  w.bytes(kMagic, sizeof(kMagic));
  w.u32(kFormatVersion);
  w.u32(static_cast<std::uint32_t>(element));
  w.u32(static_cast<std::uint32_t>(kind));
  w.u32(static_cast<std::uint32_t>(tensor.extents().size()));
  for (auto e : tensor.extents()) w.u64(e);
  for (const auto& a : tensor.axes) {
    if (a.unit.size() > kMaxUnitLength) throw Error(ErrorCode::InvalidConfig, "axis unit is too long");
    w.f64(a.start);
    w.f64(a.step);
    w.u32(static_cast<std::uint32_t>(a.unit.size()));
    w.bytes(a.unit.data(), a.unit.size());
  }
  nlohmann::json meta = {{"provenance", tensor.provenance}, {"scene_hash", scene_hash}};
  const std::string text = meta.dump();
  w.u64(text.size());
  w.bytes(text.data(), text.size());
  for (const auto& v : tensor.values()) {
    if (element == ElementType::Complex64) {
      w.f32(static_cast<float>(v.real()));
      w.f32(static_cast<float>(v.imag()));
    } else {
      w.f64(v.real());
      w.f64(v.imag());
    }
  }

  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorCode::IoFailure, "cannot open " + path.string() + " for writing");
  out.write(reinterpret_cast<const char*>(w.data().data()), static_cast<std::streamsize>(w.data().size()));
  out.close();
  if (!out) throw Error(ErrorCode::IoFailure, "write failed for " + path.string());
}

template <typename T>
T decode(const VolumeFileHeader& h, ByteReader& r) {
  typename T::Extents ext{};
  for (std::size_t d = 0; d < ext.size(); ++d) ext[d] = static_cast<std::size_t>(h.extents[d]);
  T t(ext);
  for (std::size_t d = 0; d < ext.size(); ++d) t.axes[d] = h.axes[d];
  t.provenance = h.provenance;
  for (auto& v : t.values()) {
    if (h.element == ElementType::Complex64) {
      const float re = r.f32();
      const float im = r.f32();
      v = {re, im};
    } else {
      const double re = r.f64();
      const double im = r.f64();
      v = {re, im};
    }
  }
  return t;
}

}  // namespace

std::size_t element_size(ElementType type) {
  switch (type) {
    case ElementType::Complex64: return 8;
    case ElementType::Complex128: return 16;
  }
  throw Error(ErrorCode::UnsupportedElementType, "unknown element type");
}

std::uint64_t VolumeFileHeader::payload_bytes() const {
  std::uint64_t n = element_size(element);
  for (auto e : extents) n *= e;
  return n;
}

void write_tensor(const std::filesystem::path& path, const EchoTensor& echo, ElementType element,
                  const std::string& scene_hash) {
  write_impl(path, echo, TensorKind::Echo, element, scene_hash);
}

void write_tensor(const std::filesystem::path& path, const ImageVolume& image, ElementType element,
                  const std::string& scene_hash) {
  write_impl(path, image, TensorKind::Image, element, scene_hash);
}

VolumeFileHeader read_header(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary | std::ios::ate);
  if (!in) throw Error(ErrorCode::IoFailure, "cannot open " + path.string());
  const auto file_size = static_cast<std::size_t>(in.tellg());
  in.seekg(0);
  // Grow the prefix until the header parses; payload bytes are never read.
  std::size_t chunk = std::min<std::size_t>(file_size, 4096);
  for (;;) {
    std::vector<unsigned char> buf(chunk);
    in.seekg(0);
    in.read(reinterpret_cast<char*>(buf.data()), static_cast<std::streamsize>(chunk));
    if (!in) throw Error(ErrorCode::IoFailure, "read failed for " + path.string());
    ByteReader r(buf.data(), buf.size());
    try {
      return parse_header(r, file_size);
    } catch (const Exhausted&) {
      if (chunk == file_size) throw Error(ErrorCode::PayloadSizeMismatch, "file ends inside the header");
      chunk = std::min(file_size, chunk * 4);
    }
  }
}

AnyTensor read_tensor(const std::filesystem::path& path, VolumeFileHeader* header) {
  const auto buf = slurp(path);
  ByteReader r(buf.data(), buf.size());
  VolumeFileHeader h;
  try {
    h = parse_header(r, buf.size());
  } catch (const Exhausted&) {
    throw Error(ErrorCode::PayloadSizeMismatch, "file ends inside the header");
  }
  if (header) *header = h;
  if (h.kind == TensorKind::Echo) return decode<EchoTensor>(h, r);
  return decode<ImageVolume>(h, r);
}

EchoTensor read_echo(const std::filesystem::path& path) {
  auto t = read_tensor(path);
  if (auto* e = std::get_if<EchoTensor>(&t)) return std::move(*e);
  throw Error(ErrorCode::DimensionMismatch, path.string() + " holds an image volume, not an echo");
}

ImageVolume read_image(const std::filesystem::path& path) {
  auto t = read_tensor(path);
  if (auto* i = std::get_if<ImageVolume>(&t)) return std::move(*i);
  throw Error(ErrorCode::DimensionMismatch, path.string() + " holds an echo, not an image volume");
}

std::uint8_t db_to_gray(double db, double dynamic_range_db) {
  const double t = std::clamp((db + dynamic_range_db) / dynamic_range_db, 0.0, 1.0);
  return static_cast<std::uint8_t>(std::lround(255.0 * t));
}

void export_slice_image(const ImageVolume& image, ImageAxis axis, std::optional<std::size_t> index,
                        double dynamic_range_db, const std::filesystem::path& path) {
  const Projection p = index ? section_db(image, axis, *index, dynamic_range_db)
                             : max_projection(image, axis, dynamic_range_db);
  const std::size_t width = p.rows;
  const std::size_t height = p.cols;
  std::vector<png_byte> pixels(width * height);
  for (std::size_t y = 0; y < height; ++y) {
    for (std::size_t x = 0; x < width; ++x) pixels[y * width + x] = db_to_gray(p.at(x, y), dynamic_range_db);
  }

  std::unique_ptr<FILE, int (*)(FILE*)> fp(std::fopen(path.c_str(), "wb"), &std::fclose);
  if (!fp) throw Error(ErrorCode::IoFailure, "cannot open " + path.string() + " for writing");
  png_structp png = png_create_write_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
  png_infop info = png ? png_create_info_struct(png) : nullptr;
  if (!png || !info) {
    png_destroy_write_struct(&png, &info);
    throw Error(ErrorCode::IoFailure, "libpng initialisation failed");
  }
  std::vector<png_bytep> rows(height);
  for (std::size_t y = 0; y < height; ++y) rows[y] = pixels.data() + y * width;
  if (setjmp(png_jmpbuf(png))) {
    png_destroy_write_struct(&png, &info);
    throw Error(ErrorCode::IoFailure, "PNG encoding failed for " + path.string());
  }
  png_init_io(png, fp.get());
  png_set_IHDR(png, info, static_cast<png_uint_32>(width), static_cast<png_uint_32>(height), 8, PNG_COLOR_TYPE_GRAY,
               PNG_INTERLACE_NONE, PNG_COMPRESSION_TYPE_DEFAULT, PNG_FILTER_TYPE_DEFAULT);
  png_write_info(png, info);
  png_write_image(png, rows.data());
  png_write_end(png, nullptr);
  png_destroy_write_struct(&png, &info);
}

}  // namespace lsar
