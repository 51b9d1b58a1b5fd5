#include "chromaharmony/render.hpp"

#include <png.h>

#include <algorithm>
#include <cmath>
#include <csetjmp>
#include <cstring>
#include <fstream>
#include <numbers>
#include <sstream>

namespace chromaharmony {

namespace {

constexpr Rgb8 kBackground{128, 128, 128};

struct PngWriteBuffer {
  std::vector<std::uint8_t>* out;
};

void png_append(png_structp png, png_bytep data, png_size_t length) {
  auto* buf = static_cast<PngWriteBuffer*>(png_get_io_ptr(png));
  buf->out->insert(buf->out->end(), data, data + length);
}

void png_flush_noop(png_structp) {}

struct PngReadCursor {
  std::span<const std::uint8_t> data;
  std::size_t pos = 0;
};

void png_consume(png_structp png, png_bytep out, png_size_t length) {
  auto* cur = static_cast<PngReadCursor*>(png_get_io_ptr(png));
  if (cur->pos + length > cur->data.size())
    png_error(png, "truncated data");
  std::memcpy(out, cur->data.data() + cur->pos, length);
  cur->pos += length;
}

// libpng reports errors by longjmp; these helpers keep only trivially
// destructible locals so that the jump is safe.
bool write_rows(png_structp png, png_infop info, const Image& image, png_byte* row,
                PngWriteBuffer* buf) {
  if (setjmp(png_jmpbuf(png)))
    return false;
  png_set_write_fn(png, buf, png_append, png_flush_noop);
  png_set_IHDR(png, info, image.width, image.height, 8, PNG_COLOR_TYPE_RGB, PNG_INTERLACE_NONE,
               PNG_COMPRESSION_TYPE_DEFAULT, PNG_FILTER_TYPE_DEFAULT);
  png_write_info(png, info);
  for (int y = 0; y < image.height; ++y) {
    for (int x = 0; x < image.width; ++x) {
      const Rgb8 p = image.at(x, y);
      row[3 * x] = p.r;
      row[3 * x + 1] = p.g;
      row[3 * x + 2] = p.b;
    }
    png_write_row(png, row);
  }
  png_write_end(png, nullptr);
  return true;
}

bool read_header(png_structp png, png_infop info, PngReadCursor* cur, png_uint_32* width,
                 png_uint_32* height) {
  if (setjmp(png_jmpbuf(png)))
    return false;
  png_set_read_fn(png, cur, png_consume);
  png_read_info(png, info);
  png_set_expand(png);
  png_set_strip_16(png);
  png_set_strip_alpha(png);
  png_set_gray_to_rgb(png);
  png_read_update_info(png, info);
  *width = png_get_image_width(png, info);
  *height = png_get_image_height(png, info);
  return png_get_rowbytes(png, info) == *width * 3;
}

bool read_rows(png_structp png, png_uint_32 height, png_uint_32 stride, png_byte* out) {
  if (setjmp(png_jmpbuf(png)))
    return false;
  for (png_uint_32 y = 0; y < height; ++y)
    png_read_row(png, out + static_cast<std::size_t>(y) * stride, nullptr);
  return true;
}

}  // namespace

Image render_strip(std::span<const Color> colors, int band_width, int height) {
  if (colors.empty())
    throw HarmonyError("nothing to render");
  Image img{band_width * static_cast<int>(colors.size()), height, {}};
  img.pixels.reserve(static_cast<std::size_t>(img.width) * height);
  std::vector<Rgb8> rgb;
  for (const Color& c : colors)
    rgb.push_back(color_to_srgb(c).rgb);
  for (int y = 0; y < height; ++y)
    for (int x = 0; x < img.width; ++x)
      img.pixels.push_back(rgb[x / band_width]);
  return img;
}

Image render_circle(std::span<const Color> colors, int size) {
  if (colors.empty())
    throw HarmonyError("nothing to render");
  Image img{size, size, std::vector<Rgb8>(static_cast<std::size_t>(size) * size, kBackground)};
  std::vector<Rgb8> rgb;
  for (const Color& c : colors)
    rgb.push_back(color_to_srgb(c).rgb);
  const double center = 0.5 * size, radius = 0.45 * size;
  const double sector = 2 * std::numbers::pi / static_cast<double>(colors.size());
  for (int y = 0; y < size; ++y) {
    for (int x = 0; x < size; ++x) {
      const double dx = x + 0.5 - center, dy = y + 0.5 - center;
      if (dx * dx + dy * dy > radius * radius)
        continue;
      // clockwise from 12 o'clock in image coordinates (y down)
      double a = std::atan2(dx, -dy);
      if (a < 0)
        a += 2 * std::numbers::pi;
      const auto idx = std::min(colors.size() - 1, static_cast<std::size_t>(a / sector));
      img.pixels[static_cast<std::size_t>(y) * size + x] = rgb[idx];
    }
  }
  return img;
}

std::vector<std::uint8_t> encode_png(const Image& image) {
  std::vector<std::uint8_t> out;
  std::vector<png_byte> row(static_cast<std::size_t>(image.width) * 3);
  PngWriteBuffer buf{&out};
  png_structp png = png_create_write_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
  png_infop info = png ? png_create_info_struct(png) : nullptr;
  if (!info || !write_rows(png, info, image, row.data(), &buf)) {
    png_destroy_write_struct(&png, &info);
    throw HarmonyError("png: encoding failed");
  }
  png_destroy_write_struct(&png, &info);
  return out;
}

Image decode_png(std::span<const std::uint8_t> data) {
  if (data.size() < 8 || png_sig_cmp(data.data(), 0, 8) != 0)
    throw HarmonyError("png: bad signature");
  PngReadCursor cur{data, 0};
  png_structp png = png_create_read_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
  png_infop info = png ? png_create_info_struct(png) : nullptr;
  png_uint_32 width = 0, height = 0;
  if (!info || !read_header(png, info, &cur, &width, &height)) {
    png_destroy_read_struct(&png, &info, nullptr);
    throw HarmonyError("png: decoding failed");
  }
  Image img{static_cast<int>(width), static_cast<int>(height), {}};
  std::vector<png_byte> bytes(static_cast<std::size_t>(width) * height * 3);
  const bool ok = read_rows(png, height, width * 3, bytes.data());
  png_destroy_read_struct(&png, &info, nullptr);
  if (!ok)
    throw HarmonyError("png: decoding failed");
  img.pixels.reserve(static_cast<std::size_t>(width) * height);
  for (std::size_t i = 0; i < bytes.size(); i += 3)
    img.pixels.push_back({bytes[i], bytes[i + 1], bytes[i + 2]});
  return img;
}

void write_png(const std::string& path, const Image& image) {
  const std::vector<std::uint8_t> bytes = encode_png(image);
  std::ofstream f(path, std::ios::binary);
  f.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
  if (!f)
    throw HarmonyError("cannot write " + path);
}

std::string ansi_swatches(std::span<const Color> colors) {
  std::ostringstream out;
  out.setf(std::ios::fixed);
  out.precision(1);
  for (const Color& c : colors) {
    const Rgb8 p = color_to_srgb(c).rgb;
    out << "\x1b[48;2;" << int(p.r) << ';' << int(p.g) << ';' << int(p.b) << "m      \x1b[0m  L "
        << c.L() << "  c " << c.c() << "  h " << c.h() << "  " << to_hex(p) << '\n';
  }
  return out.str();
}

}  // namespace chromaharmony
