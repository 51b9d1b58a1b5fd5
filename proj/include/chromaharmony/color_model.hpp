// Core color types, sRGB <-> CIELCh conversion and the per-color uncertainty
// model used by the harmony evaluators.
#pragma once

#include <Eigen/Dense>

#include <array>
#include <cstdint>
#include <stdexcept>
#include <string>

namespace chromaharmony {

/// Raised for invalid inputs to the harmony engine (bad colors, empty palettes,
/// degenerate fits).
class HarmonyError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// Tunable constants of the uncertainty model and of the harmony gates.
struct HarmonyParams {
  double k_h = 3.0;     // degrees
  double k_N = 120.0;   // degrees, neutral-color hue spread
  double gamma = 5.0;   // chroma below which a color reads as neutral
  double k_c = 2.0;
  double k_L = 2.0;
  double hue_db_threshold = 3.0;        // D_B <= this: hues harmonious
  double ambiguity_db_threshold = 3.0;  // D_B >= this: tones distinguishable
  double t_line = 5.0;                  // inlier tolerance in the tone plane
  double maha_threshold = 3.0;          // generator snap gate
  double min_sep = 20.0;                // generator point separation

  // Test hook: when false the hue rotation term is replaced by 1, which makes
  // the hue model exactly rotation invariant.
  bool use_rotation_term = true;

  /// Throws HarmonyError naming the first field that is not strictly positive.
  void validate() const;
};

/// A point (L, c, h) in CIELCh with L, c in [0, 100] and h in [0, 360).
class Color {
public:
  Color() = default;
  /// Validates ranges and normalizes h mod 360. Throws HarmonyError.
  Color(double L, double c, double h);

  double L() const { return L_; }
  double c() const { return c_; }
  double h() const { return h_; }

  friend bool operator==(const Color&, const Color&) = default;

private:
  double L_ = 0.0;
  double c_ = 0.0;
  double h_ = 0.0;
};

/// Projection of a color onto the chroma-lightness plane.
struct Tone {
  double c = 0.0;
  double L = 0.0;

  friend bool operator==(const Tone&, const Tone&) = default;
};

inline Tone tone_of(const Color& color) { return {color.c(), color.L()}; }

struct HueDistribution {
  double mean_h = 0.0;  // degrees
  double var_h = 1.0;   // degrees^2
};

struct ToneDistribution {
  Eigen::Vector2d mean = Eigen::Vector2d::Zero();  // (c, L)
  Eigen::Matrix2d cov = Eigen::Matrix2d::Identity();
};

/// Unbounded-chroma LCh triple used at the sRGB boundary.
struct Lch {
  double L = 0.0;
  double c = 0.0;
  double h = 0.0;
};

struct Rgb8 {
  std::uint8_t r = 0;
  std::uint8_t g = 0;
  std::uint8_t b = 0;

  friend bool operator==(const Rgb8&, const Rgb8&) = default;
};

/// Normalizes any finite angle into [0, 360).
double wrap_degrees(double deg);

// Uncertainty model ----------------------------------------------------------

/// Hue rotation term: 1 - 0.17 cos(h-30) + 0.24 cos(2h) + 0.32 cos(3h+6)
/// - 0.20 cos(4h-65), h in degrees.
double rotation_term(double h);

/// Hue standard deviation f(h, c) in degrees.
double hue_stddev(double h, double c, const HarmonyParams& p);

HueDistribution hue_distribution(const Color& color, const HarmonyParams& p);

struct ToneScale {
  double S_c = 1.0;
  double S_L = 1.0;
};

ToneScale tone_scale_factors(double c, double L);

/// diag((k_c S_c)^2, (k_L S_L)^2)
Eigen::Matrix2d tone_covariance(double c, double L, const HarmonyParams& p);

ToneDistribution tone_distribution(const Color& color, const HarmonyParams& p);

// sRGB conversion -------------------------------------------------------------

/// sRGB (D65, 2 degree observer) to CIELCh without any clamping.
Lch srgb_to_lch(Rgb8 rgb);

struct LchToSrgb {
  Rgb8 rgb;
  bool in_gamut = true;
};

/// CIELCh to sRGB. Out-of-gamut inputs are mapped by reducing chroma at
/// constant (L, h) and reported with in_gamut = false.
LchToSrgb lch_to_srgb(const Lch& lch);

/// True when the color rounds to a valid 8-bit sRGB triple.
bool srgb_realizable(const Lch& lch);

/// Largest realizable chroma at (L, h), found by bisection to 1e-3.
double max_chroma(double L, double h);

struct ConvertedColor {
  Color color;
  double raw_chroma = 0.0;     // chroma before clamping to 100
  bool chroma_clamped = false;
};

ConvertedColor srgb_to_color(Rgb8 rgb);

inline LchToSrgb color_to_srgb(const Color& color) {
  return lch_to_srgb({color.L(), color.c(), color.h()});
}

std::string to_hex(Rgb8 rgb);

}  // namespace chromaharmony
