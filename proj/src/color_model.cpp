#include "chromaharmony/color_model.hpp"

#include <Eigen/LU>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numbers>

namespace chromaharmony {

namespace {

constexpr double kDegToRad = std::numbers::pi / 180.0;

double cosd(double deg) { return std::cos(deg * kDegToRad); }

// linear sRGB -> XYZ, D65
const Eigen::Matrix3d& rgb_to_xyz() {
  static const Eigen::Matrix3d m = (Eigen::Matrix3d() <<
      0.4124564, 0.3575761, 0.1804375,
      0.2126729, 0.7151522, 0.0721750,
      0.0193339, 0.1191920, 0.9503041).finished();
  return m;
}

const Eigen::Matrix3d& xyz_to_rgb() {
  static const Eigen::Matrix3d m = rgb_to_xyz().inverse();
  return m;
}

// White point taken from the matrix itself so that R = G = B maps to a* = b* = 0.
const Eigen::Vector3d& white() {
  static const Eigen::Vector3d w = rgb_to_xyz() * Eigen::Vector3d::Ones();
  return w;
}

constexpr double kEps = 6.0 / 29.0;

double lab_f(double t) {
  return t > kEps * kEps * kEps ? std::cbrt(t) : t / (3.0 * kEps * kEps) + 4.0 / 29.0;
}

double lab_finv(double f) {
  return f > kEps ? f * f * f : 3.0 * kEps * kEps * (f - 4.0 / 29.0);
}

double decode(std::uint8_t v8) {
  const double v = v8 / 255.0;
  return v <= 0.04045 ? v / 12.92 : std::pow((v + 0.055) / 1.055, 2.4);
}

double encode(double v) {
  if (v <= 0.0031308)
    return 12.92 * v;
  return 1.055 * std::pow(v, 1.0 / 2.4) - 0.055;
}

// Gamma-encoded channels scaled to [0, 255], unrounded.
Eigen::Vector3d lch_to_encoded(const Lch& lch) {
  const double a = lch.c * std::cos(lch.h * kDegToRad);
  const double b = lch.c * std::sin(lch.h * kDegToRad);
  const double fy = (lch.L + 16.0) / 116.0;
  const double fx = fy + a / 500.0;
  const double fz = fy - b / 200.0;
  const Eigen::Vector3d xyz(lab_finv(fx) * white().x(), lab_finv(fy) * white().y(),
                            lab_finv(fz) * white().z());
  const Eigen::Vector3d lin = xyz_to_rgb() * xyz;
  return {255.0 * encode(lin.x()), 255.0 * encode(lin.y()), 255.0 * encode(lin.z())};
}

bool rounds_into_range(const Eigen::Vector3d& enc) {
  for (int i = 0; i < 3; ++i) {
    if (!(enc[i] >= -0.5 && enc[i] < 255.5))
      return false;
  }
  return true;
}

std::uint8_t round_channel(double v) {
  const double r = std::floor(v + 0.5);
  return static_cast<std::uint8_t>(r < 0.0 ? 0.0 : (r > 255.0 ? 255.0 : r));
}

// Largest c in [0, c_hi] that is realizable at (L, h); 1e-3 tolerance.
double bisect_chroma(double L, double h, double c_hi) {
  double lo = 0.0;
  double hi = c_hi;
  while (hi - lo > 1e-3) {
    const double mid = 0.5 * (lo + hi);
    if (rounds_into_range(lch_to_encoded({L, mid, h})))
      lo = mid;
    else
      hi = mid;
  }
  return lo;
}

}  // namespace

void HarmonyParams::validate() const {
  const std::pair<const char*, double> fields[] = {
      {"k_h", k_h},
      {"k_N", k_N},
      {"gamma", gamma},
      {"k_c", k_c},
      {"k_L", k_L},
      {"hue_db_threshold", hue_db_threshold},
      {"ambiguity_db_threshold", ambiguity_db_threshold},
      {"t_line", t_line},
      {"maha_threshold", maha_threshold},
      {"min_sep", min_sep},
  };
  for (const auto& [name, value] : fields) {
    if (!(value > 0.0) || !std::isfinite(value))
      throw HarmonyError(std::string("parameter ") + name + " must be finite and > 0");
  }
}

Color::Color(double L, double c, double h) {
  if (!std::isfinite(L) || !std::isfinite(c) || !std::isfinite(h))
    throw HarmonyError("color components must be finite");
  if (L < 0.0 || L > 100.0)
    throw HarmonyError("lightness out of [0,100]: " + std::to_string(L));
  if (c < 0.0 || c > 100.0)
    throw HarmonyError("chroma out of [0,100]: " + std::to_string(c));
  L_ = L;
  c_ = c;
  h_ = wrap_degrees(h);
}

double wrap_degrees(double deg) {
  double r = std::fmod(deg, 360.0);
  if (r < 0.0)
    r += 360.0;
  // fmod of a tiny negative value can round up to exactly 360
  return r >= 360.0 ? 0.0 : r;
}

double rotation_term(double h) {
  h = wrap_degrees(h);
  // CIEDE2000's T term uses 63 degrees in the last cosine; this model
  // deliberately uses 65.
  return 1.0 - 0.17 * cosd(h - 30.0) + 0.24 * cosd(2.0 * h) + 0.32 * cosd(3.0 * h + 6.0) -
         0.20 * cosd(4.0 * h - 65.0);
}

double hue_stddev(double h, double c, const HarmonyParams& p) {
  const double ht = p.use_rotation_term ? rotation_term(h) : 1.0;
  const double g2 = p.gamma * p.gamma;
  return p.k_h * (1.0 + 0.015 * c * ht) + p.k_N * g2 / (c * c + g2);
}

HueDistribution hue_distribution(const Color& color, const HarmonyParams& p) {
  const double s = hue_stddev(color.h(), color.c(), p);
  return {color.h(), s * s};
}

ToneScale tone_scale_factors(double c, double L) {
  const double dl2 = (L - 50.0) * (L - 50.0);
  return {1.0 + 0.045 * c, 1.0 + 0.015 * dl2 / std::sqrt(20.0 + dl2)};
}

Eigen::Matrix2d tone_covariance(double c, double L, const HarmonyParams& p) {
  const ToneScale s = tone_scale_factors(c, L);
  const double sc = p.k_c * s.S_c;
  const double sl = p.k_L * s.S_L;
  Eigen::Matrix2d cov = Eigen::Matrix2d::Zero();
  cov(0, 0) = sc * sc;
  cov(1, 1) = sl * sl;
  return cov;
}

ToneDistribution tone_distribution(const Color& color, const HarmonyParams& p) {
  return {Eigen::Vector2d(color.c(), color.L()), tone_covariance(color.c(), color.L(), p)};
}

Lch srgb_to_lch(Rgb8 rgb) {
  const Eigen::Vector3d lin(decode(rgb.r), decode(rgb.g), decode(rgb.b));
  const Eigen::Vector3d xyz = rgb_to_xyz() * lin;
  const double fx = lab_f(xyz.x() / white().x());
  const double fy = lab_f(xyz.y() / white().y());
  const double fz = lab_f(xyz.z() / white().z());
  const double L = 116.0 * fy - 16.0;
  const double a = 500.0 * (fx - fy);
  const double b = 200.0 * (fy - fz);
  const double c = std::hypot(a, b);
  const double h = c == 0.0 ? 0.0 : wrap_degrees(std::atan2(b, a) / kDegToRad);
  // cbrt round-off can leave L a hair outside [0, 100]
  return {std::clamp(L, 0.0, 100.0), c, h};
}

bool srgb_realizable(const Lch& lch) { return rounds_into_range(lch_to_encoded(lch)); }

double max_chroma(double L, double h) { return bisect_chroma(L, h, 200.0); }

LchToSrgb lch_to_srgb(const Lch& lch) {
  Eigen::Vector3d enc = lch_to_encoded(lch);
  bool in_gamut = true;
  if (!rounds_into_range(enc)) {
    in_gamut = false;
    enc = lch_to_encoded({lch.L, bisect_chroma(lch.L, lch.h, lch.c), lch.h});
  }
  return {{round_channel(enc.x()), round_channel(enc.y()), round_channel(enc.z())}, in_gamut};
}

ConvertedColor srgb_to_color(Rgb8 rgb) {
  const Lch lch = srgb_to_lch(rgb);
  const bool clamped = lch.c > 100.0;
  return {Color(lch.L, clamped ? 100.0 : lch.c, lch.h), lch.c, clamped};
}

std::string to_hex(Rgb8 rgb) {
  char buf[8];
  std::snprintf(buf, sizeof buf, "#%02x%02x%02x", rgb.r, rgb.g, rgb.b);
  return buf;
}

}  // namespace chromaharmony
