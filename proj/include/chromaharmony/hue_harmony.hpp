// Pattern detection on the hue circle: analog, opposite and triad relations
// tested with a Bhattacharyya gate on standardized angular differences.
#pragma once

#include "chromaharmony/color_model.hpp"

#include <array>
#include <optional>
#include <span>

namespace chromaharmony {

/// The numeric value of Analog/Opposite/Triad is the fold order i used by
/// standardized_diff.
enum class HuePattern : int { NoHarmony = 0, Analog = 1, Opposite = 2, Triad = 3 };

const char* to_string(HuePattern pattern);

struct FusedHue {
  double h_hat = 0.0;
  double c_hat = 0.0;
  HueDistribution dist;
};

/// Central angle between two directions, in [0, 180].
double central_angle(double a, double b);

/// Angular difference after folding the circle i times (i in {1, 2, 3}):
/// central_angle(alpha(a), alpha(b)) / i with alpha(t) = i * (t mod 360/i).
double standardized_diff(int i, double a, double b);

/// Univariate Bhattacharyya distance with the mean difference replaced by d.
double bhattacharyya_1d(double var_a, double var_b, double d);

bool hue_pair_harmonic(int i, const HueDistribution& a, const HueDistribution& b,
                       const HarmonyParams& p);

/// Inverse-variance fusion of two hue estimates for pattern i. Hues are fused
/// in the i-folded space, unwrapped to the shorter arc, and mapped back next
/// to a's hue. The fused variance is recomputed from the fused (h, c).
FusedHue fuse_hues(const HueDistribution& a, double c_a, const HueDistribution& b, double c_b,
                   const HarmonyParams& p, int i = 1);

/// Outcome of testing one color against the running fused hue of a pattern.
struct HueStep {
  double std_diff = 0.0;
  double db = 0.0;
  bool accepted = false;
};

/// Incremental form of the hue evaluator: one fold per pattern, each either
/// alive (with its fused estimate) or stopped at the first rejection.
class HueTracker {
public:
  explicit HueTracker(const HarmonyParams& params);

  /// Feeds the next color; returns the per-pattern test outcomes (empty for
  /// the first color and for patterns that already stopped).
  std::array<std::optional<HueStep>, 3> add(const Color& color);

  /// Lowest alive pattern order, NoHarmony when none is alive. Patterns above
  /// max_pattern are ignored. Throws on an empty tracker.
  HuePattern label(int max_pattern = 3) const;

  std::size_t size() const { return count_; }
  const std::optional<FusedHue>& fused(int i) const { return fused_[i - 1]; }

private:
  HarmonyParams params_;
  std::size_t count_ = 0;
  std::array<std::optional<FusedHue>, 3> fused_;  // nullopt once the pattern failed
};

/// Tries analog, opposite, triad in that order and returns the first pattern
/// that absorbs the whole list. max_pattern restricts the search.
HuePattern evaluate_hue_harmony(std::span<const Color> colors, const HarmonyParams& p,
                                int max_pattern = 3);

}  // namespace chromaharmony
