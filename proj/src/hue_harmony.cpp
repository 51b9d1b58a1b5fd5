#include "chromaharmony/hue_harmony.hpp"

#include <algorithm>
#include <cmath>

namespace chromaharmony {

namespace {

void check_order(int i) {
  if (i < 1 || i > 3)
    throw HarmonyError("pattern order must be 1, 2 or 3");
}

double fold(int i, double theta) {
  const double period = 360.0 / i;
  double r = std::fmod(theta, period);
  if (r < 0.0)
    r += period;
  return i * r;
}

// Representative of x (mod period) closest to ref.
double nearest_representative(double x, double ref, double period) {
  return x - period * std::round((x - ref) / period);
}

}  // namespace

const char* to_string(HuePattern pattern) {
  switch (pattern) {
    case HuePattern::Analog:
      return "analog";
    case HuePattern::Opposite:
      return "opposite";
    case HuePattern::Triad:
      return "triad";
    case HuePattern::NoHarmony:
      break;
  }
  return "none";
}

double central_angle(double a, double b) {
  const double d = wrap_degrees(std::fabs(a - b));
  return std::min(d, 360.0 - d);
}

double standardized_diff(int i, double a, double b) {
  check_order(i);
  return central_angle(fold(i, a), fold(i, b)) / i;
}

double bhattacharyya_1d(double var_a, double var_b, double d) {
  const double sum = var_a + var_b;
  return d * d / (4.0 * sum) + 0.5 * std::log(sum / (2.0 * std::sqrt(var_a * var_b)));
}

bool hue_pair_harmonic(int i, const HueDistribution& a, const HueDistribution& b,
                       const HarmonyParams& p) {
  const double d = standardized_diff(i, a.mean_h, b.mean_h);
  return bhattacharyya_1d(a.var_h, b.var_h, d) <= p.hue_db_threshold;
}

FusedHue fuse_hues(const HueDistribution& a, double c_a, const HueDistribution& b, double c_b,
                   const HarmonyParams& p, int i) {
  check_order(i);
  const double va = 1.0 / a.var_h;
  const double vb = 1.0 / b.var_h;
  const double fa = fold(i, a.mean_h);
  const double fb = nearest_representative(fold(i, b.mean_h), fa, 360.0);
  const double folded = (va * fa + vb * fb) / (va + vb);

  const double h_hat = wrap_degrees(nearest_representative(folded / i, a.mean_h, 360.0 / i));
  const double c_hat = (va * c_a + vb * c_b) / (va + vb);
  const double s = hue_stddev(h_hat, c_hat, p);
  return {h_hat, c_hat, {h_hat, s * s}};
}

HueTracker::HueTracker(const HarmonyParams& params) : params_(params) {}

std::array<std::optional<HueStep>, 3> HueTracker::add(const Color& color) {
  std::array<std::optional<HueStep>, 3> steps;
  const HueDistribution dist = hue_distribution(color, params_);
  if (count_++ == 0) {
    for (auto& f : fused_)
      f = FusedHue{color.h(), color.c(), dist};
    return steps;
  }
  for (int i = 1; i <= 3; ++i) {
    auto& fused = fused_[i - 1];
    if (!fused)
      continue;
    HueStep step;
    step.std_diff = standardized_diff(i, fused->dist.mean_h, dist.mean_h);
    step.db = bhattacharyya_1d(fused->dist.var_h, dist.var_h, step.std_diff);
    step.accepted = step.db <= params_.hue_db_threshold;
    if (step.accepted)
      fused = fuse_hues(fused->dist, fused->c_hat, dist, color.c(), params_, i);
    else
      fused.reset();
    steps[i - 1] = step;
  }
  return steps;
}

HuePattern HueTracker::label(int max_pattern) const {
  if (count_ == 0)
    throw HarmonyError("empty palette");
  for (int i = 1; i <= std::min(max_pattern, 3); ++i) {
    if (fused_[i - 1])
      return static_cast<HuePattern>(i);
  }
  return HuePattern::NoHarmony;
}

HuePattern evaluate_hue_harmony(std::span<const Color> colors, const HarmonyParams& p,
                                int max_pattern) {
  if (colors.empty())
    throw HarmonyError("empty palette");
  HueTracker tracker(p);
  for (const Color& c : colors)
    tracker.add(c);
  return tracker.label(max_pattern);
}

}  // namespace chromaharmony
