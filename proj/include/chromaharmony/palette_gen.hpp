// Generation of test palettes whose tones follow a given line in the
// chroma-lightness plane and whose hues follow a sampled hue pattern.
#pragma once

#include "chromaharmony/color_model.hpp"

#include <optional>
#include <random>
#include <string>
#include <vector>

namespace chromaharmony {

using Rng = std::mt19937_64;

/// Hue layouts the generator can draw. IncompleteTriad uses two of the three
/// triad vertices.
enum class GenPattern : int { Analog = 0, Opposite = 1, Triad = 2, IncompleteTriad = 3 };

const char* to_string(GenPattern pattern);
std::optional<GenPattern> gen_pattern_from_string(const std::string& name);

struct GenSpec {
  double r = 0.0;
  double phi_deg = 0.0;
  int k = 3;
  std::uint64_t seed = 0;
  std::optional<GenPattern> pattern_override;
};

struct TonePoint {
  double x = 0.0;  // chroma
  double y = 0.0;  // lightness
};

/// Ideal (c, L) targets on the line, sorted along the line direction, with
/// pairwise separation >= min_sep. nullopt if the clipped segment is too short
/// or 1000 rejection rounds fail.
std::optional<std::vector<TonePoint>> place_points_on_line(double r, double phi_deg, int k,
                                                           double min_sep, Rng& rng);

/// Length of the line's intersection with the [0,100]^2 tone square (0 when
/// it misses).
double clipped_segment_length(double r, double phi_deg);

/// Draws analog/opposite/triad/incomplete-triad with probabilities
/// 0.3/0.3/0.1/0.3.
GenPattern sample_hue_pattern(Rng& rng);

/// Nominal hue of the n-th color (round-robin over the pattern's positions).
double nominal_hue(GenPattern pattern, double base_h, int n);

/// Nominal hues perturbed by N(0, f(h_i, c_i)^2). perturb = false yields the
/// nominal hues.
std::vector<double> assign_hues(GenPattern pattern, double base_h, int k,
                                const std::vector<double>& chromas, const HarmonyParams& p,
                                Rng& rng, bool perturb = true);

struct RealizedColor {
  Color color;
  double maha = 0.0;  // target tone vs N(t(color), Sigma_cL)
  double snap = 0.0;  // Euclidean (c, L) displacement
};

/// Nearest sRGB-realizable color at the target hue, searching (L, c).
RealizedColor realize_color(double target_L, double target_c, double target_h,
                            const HarmonyParams& p);

/// sqrt(d^T Sigma^-1 d), d = target - t(color), Sigma from the color's tone.
double tone_mahalanobis(const Color& color, double target_c, double target_L,
                        const HarmonyParams& p);

struct GenResult {
  std::vector<Color> colors;  // empty on failure
  GenPattern pattern_used = GenPattern::Analog;
  std::string reason;         // empty on success
  std::vector<TonePoint> targets;
  std::vector<double> target_hues;
  std::vector<double> maha;
  std::vector<double> snap;
};

GenResult generate_line_palette(const GenSpec& spec, const HarmonyParams& p);

}  // namespace chromaharmony
