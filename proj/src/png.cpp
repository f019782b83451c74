#include <png.h>

#include <algorithm>
#include <cmath>

#include "crossdiff/errors.hpp"
#include "crossdiff/io.hpp"

namespace crossdiff {

std::array<std::uint8_t, 3> colormap(double t) {
  // Five samples of viridis; luminance increases monotonically along them.
  static constexpr std::array<std::array<double, 3>, 5> kStops{{
      {68, 1, 84}, {59, 82, 139}, {33, 145, 140}, {94, 201, 98}, {253, 231, 37},
  }};
  if (!(t >= 0.0)) t = 0.0;
  t = std::min(t, 1.0);
  const double s = t * (kStops.size() - 1);
  const auto k = std::min<std::size_t>(static_cast<std::size_t>(s), kStops.size() - 2);
  const double f = s - static_cast<double>(k);
  std::array<std::uint8_t, 3> rgb{};
  for (std::size_t c = 0; c < 3; ++c)
    rgb[c] = static_cast<std::uint8_t>(std::lround(kStops[k][c] + f * (kStops[k + 1][c] - kStops[k][c])));
  return rgb;
}

namespace {

void append_bytes(png_structp png, png_bytep data, png_size_t n) {
  auto* out = static_cast<std::vector<std::uint8_t>*>(png_get_io_ptr(png));
  out->insert(out->end(), data, data + n);
}

void flush_nothing(png_structp) {}

}  // namespace

std::vector<std::uint8_t> encode_png_rgb(std::size_t width, std::size_t height, std::span<const std::uint8_t> rgb) {
  if (width == 0 || height == 0 || rgb.size() != 3 * width * height)
    throw ArgumentError("encode_png_rgb: buffer does not match the image size");
  png_structp png = png_create_write_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
  if (!png) throw Error("encode_png_rgb: libpng initialisation failed");
  png_infop info = png_create_info_struct(png);
  if (!info) {
    png_destroy_write_struct(&png, nullptr);
    throw Error("encode_png_rgb: libpng initialisation failed");
  }
  std::vector<std::uint8_t> out;
  std::vector<png_bytep> rows(height);
  for (std::size_t r = 0; r < height; ++r) rows[r] = const_cast<png_bytep>(rgb.data() + 3 * width * r);
  if (setjmp(png_jmpbuf(png))) {
    png_destroy_write_struct(&png, &info);
    throw Error("encode_png_rgb: libpng write failed");
  }
  png_set_write_fn(png, &out, append_bytes, flush_nothing);
  png_set_IHDR(png, info, static_cast<png_uint_32>(width), static_cast<png_uint_32>(height), 8, PNG_COLOR_TYPE_RGB,
               PNG_INTERLACE_NONE, PNG_COMPRESSION_TYPE_DEFAULT, PNG_FILTER_TYPE_DEFAULT);
  png_set_rows(png, info, rows.data());
  png_write_png(png, info, PNG_TRANSFORM_IDENTITY, nullptr);
  png_destroy_write_struct(&png, &info);
  return out;
}

std::vector<std::uint8_t> heatmap_png(std::span<const double> field, std::size_t nx, std::size_t ny) {
  if (field.size() != nx * ny || field.empty()) throw ArgumentError("heatmap_png: field size does not match nx*ny");
  const auto [lo, hi] = std::minmax_element(field.begin(), field.end());
  const double range = *hi - *lo;
  std::vector<std::uint8_t> rgb;
  rgb.reserve(3 * field.size());
  for (std::size_t r = 0; r < ny; ++r) {
    const std::size_t j = ny - 1 - r;  // first image row is y = 1
    for (std::size_t i = 0; i < nx; ++i) {
      const double t = range > 0.0 ? (field[j * nx + i] - *lo) / range : 0.0;
      const auto c = colormap(t);
      rgb.insert(rgb.end(), c.begin(), c.end());
    }
  }
  return encode_png_rgb(nx, ny, rgb);
}

}  // namespace crossdiff
