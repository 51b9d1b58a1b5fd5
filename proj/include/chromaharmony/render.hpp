// Swatch rendering: PNG images and ANSI truecolor terminal output.
#pragma once

#include "chromaharmony/color_model.hpp"

#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace chromaharmony {

struct Image {
  int width = 0;
  int height = 0;
  std::vector<Rgb8> pixels;  // row-major

  Rgb8 at(int x, int y) const { return pixels[static_cast<std::size_t>(y) * width + x]; }
};

/// Horizontal strip, one band per color.
Image render_strip(std::span<const Color> colors, int band_width = 120, int height = 120);

/// Disc split into equal sectors (one per color, starting at 12 o'clock,
/// clockwise) on a neutral gray background.
Image render_circle(std::span<const Color> colors, int size = 360);

std::vector<std::uint8_t> encode_png(const Image& image);
Image decode_png(std::span<const std::uint8_t> data);

/// Throws HarmonyError when the file cannot be written.
void write_png(const std::string& path, const Image& image);

/// One line per color: a truecolor block followed by its L, c, h and hex.
std::string ansi_swatches(std::span<const Color> colors);

}  // namespace chromaharmony
