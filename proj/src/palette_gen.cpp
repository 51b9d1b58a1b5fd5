#include "chromaharmony/palette_gen.hpp"

#include "chromaharmony/tone_harmony.hpp"

#include <Eigen/LU>

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numbers>

namespace chromaharmony {

namespace {

constexpr double kDegToRad = std::numbers::pi / 180.0;
constexpr int kPlacementAttempts = 1000;

struct Segment {
  double t0 = 0.0;
  double t1 = -1.0;
  Eigen::Vector2d origin;  // foot of the normal
  Eigen::Vector2d dir;     // unit direction along the line

  double length() const { return std::max(0.0, t1 - t0); }
};

// Liang-Barsky clip of the line against [0,100]^2.
Segment clip_to_tone_square(double r, double phi_deg) {
  const double phi = phi_deg * kDegToRad;
  Segment s;
  s.origin = {r * std::cos(phi), r * std::sin(phi)};
  s.dir = {-std::sin(phi), std::cos(phi)};
  s.t0 = -std::numeric_limits<double>::infinity();
  s.t1 = std::numeric_limits<double>::infinity();
  for (int axis = 0; axis < 2; ++axis) {
    const double o = s.origin[axis];
    const double u = s.dir[axis];
    if (std::fabs(u) < 1e-15) {
      if (o < 0.0 || o > 100.0)
        return {0.0, -1.0, s.origin, s.dir};
      continue;
    }
    double a = (0.0 - o) / u;
    double b = (100.0 - o) / u;
    if (a > b)
      std::swap(a, b);
    s.t0 = std::max(s.t0, a);
    s.t1 = std::min(s.t1, b);
  }
  return s;
}

// Golden-section minimization of a unimodal function on [lo, hi].
template <class F>
double golden_min(F&& f, double lo, double hi, double tol) {
  const double g = (std::sqrt(5.0) - 1.0) / 2.0;
  double a = lo, b = hi;
  double x1 = b - g * (b - a), x2 = a + g * (b - a);
  double f1 = f(x1), f2 = f(x2);
  while (b - a > tol) {
    if (f1 <= f2) {
      b = x2;
      x2 = x1;
      f2 = f1;
      x1 = b - g * (b - a);
      f1 = f(x1);
    } else {
      a = x1;
      x1 = x2;
      f1 = f2;
      x2 = a + g * (b - a);
      f2 = f(x2);
    }
  }
  return 0.5 * (a + b);
}

}  // namespace

const char* to_string(GenPattern pattern) {
  switch (pattern) {
    case GenPattern::Analog:
      return "analog";
    case GenPattern::Opposite:
      return "opposite";
    case GenPattern::Triad:
      return "triad";
    case GenPattern::IncompleteTriad:
      return "incomplete_triad";
  }
  return "analog";
}

std::optional<GenPattern> gen_pattern_from_string(const std::string& name) {
  for (GenPattern p : {GenPattern::Analog, GenPattern::Opposite, GenPattern::Triad,
                       GenPattern::IncompleteTriad}) {
    if (name == to_string(p))
      return p;
  }
  return std::nullopt;
}

double clipped_segment_length(double r, double phi_deg) {
  return clip_to_tone_square(r, phi_deg).length();
}

std::optional<std::vector<TonePoint>> place_points_on_line(double r, double phi_deg, int k,
                                                           double min_sep, Rng& rng) {
  if (k < 2)
    throw HarmonyError("k must be >= 2");
  const Segment seg = clip_to_tone_square(r, phi_deg);
  if (seg.t1 < seg.t0 || seg.length() < (k - 1) * min_sep)
    return std::nullopt;

  std::uniform_real_distribution<double> along(seg.t0, seg.t1);
  std::vector<double> ts(static_cast<std::size_t>(k));
  for (int attempt = 0; attempt < kPlacementAttempts; ++attempt) {
    for (double& t : ts)
      t = along(rng);
    std::sort(ts.begin(), ts.end());
    bool ok = true;
    for (std::size_t i = 1; i < ts.size() && ok; ++i)
      ok = ts[i] - ts[i - 1] >= min_sep;
    if (!ok)
      continue;
    std::vector<TonePoint> points;
    points.reserve(ts.size());
    for (double t : ts) {
      const Eigen::Vector2d q = seg.origin + t * seg.dir;
      points.push_back({std::clamp(q.x(), 0.0, 100.0), std::clamp(q.y(), 0.0, 100.0)});
    }
    return points;
  }
  return std::nullopt;
}

GenPattern sample_hue_pattern(Rng& rng) {
  std::discrete_distribution<int> dist({0.3, 0.3, 0.1, 0.3});
  return static_cast<GenPattern>(dist(rng));
}

double nominal_hue(GenPattern pattern, double base_h, int n) {
  switch (pattern) {
    case GenPattern::Analog:
      return wrap_degrees(base_h);
    case GenPattern::Opposite:
      return wrap_degrees(base_h + 180.0 * (n % 2));
    case GenPattern::Triad:
      return wrap_degrees(base_h + 120.0 * (n % 3));
    case GenPattern::IncompleteTriad:
      return wrap_degrees(base_h + 120.0 * (n % 2));
  }
  return wrap_degrees(base_h);
}

std::vector<double> assign_hues(GenPattern pattern, double base_h, int k,
                                const std::vector<double>& chromas, const HarmonyParams& p,
                                Rng& rng, bool perturb) {
  if (chromas.size() != static_cast<std::size_t>(k))
    throw HarmonyError("one chroma per color required");
  std::vector<double> hues(static_cast<std::size_t>(k));
  for (int n = 0; n < k; ++n) {
    const double h = nominal_hue(pattern, base_h, n);
    double noise = 0.0;
    if (perturb) {
      std::normal_distribution<double> err(0.0, hue_stddev(h, chromas[n], p));
      noise = err(rng);
    }
    hues[n] = wrap_degrees(h + noise);
  }
  return hues;
}

double tone_mahalanobis(const Color& color, double target_c, double target_L,
                        const HarmonyParams& p) {
  const Eigen::Matrix2d cov = tone_covariance(color.c(), color.L(), p);
  const Eigen::Vector2d d(target_c - color.c(), target_L - color.L());
  return std::sqrt(d.dot(cov.inverse() * d));
}

RealizedColor realize_color(double target_L, double target_c, double target_h,
                            const HarmonyParams& p) {
  target_L = std::clamp(target_L, 0.0, 100.0);
  target_c = std::clamp(target_c, 0.0, 100.0);
  target_h = wrap_degrees(target_h);
  if (srgb_realizable({target_L, target_c, target_h}))
    return {Color(target_L, target_c, target_h), 0.0, 0.0};

  // squared (c, L) distance from the target to the nearest realizable tone at
  // lightness L
  auto cost = [&](double L) {
    const double excess = std::max(0.0, target_c - max_chroma(L, target_h));
    return (L - target_L) * (L - target_L) + excess * excess;
  };
  double best_L = target_L;
  double best = cost(target_L);
  for (int i = 0; i <= 200; ++i) {
    const double L = 0.5 * i;
    const double v = cost(L);
    if (v < best) {
      best = v;
      best_L = L;
    }
  }
  best_L = golden_min(cost, std::max(0.0, best_L - 0.5), std::min(100.0, best_L + 0.5), 1e-3);
  const double c = std::min(target_c, max_chroma(best_L, target_h));
  const Color color(best_L, c, target_h);
  return {color, tone_mahalanobis(color, target_c, target_L, p),
          std::hypot(target_c - c, target_L - best_L)};
}

GenResult generate_line_palette(const GenSpec& spec, const HarmonyParams& p) {
  if (spec.k < 2)
    throw HarmonyError("k must be >= 2");
  GenResult result;
  Rng rng(spec.seed);
  const auto points = place_points_on_line(spec.r, spec.phi_deg, spec.k, p.min_sep, rng);
  if (!points) {
    result.reason = "no_feasible_points";
    return result;
  }
  result.targets = *points;

  std::uniform_real_distribution<double> uniform_hue(0.0, 360.0);
  const double base_h = uniform_hue(rng);
  result.pattern_used = spec.pattern_override ? *spec.pattern_override : sample_hue_pattern(rng);

  std::vector<double> chromas;
  for (const TonePoint& pt : *points)
    chromas.push_back(pt.x);
  result.target_hues = assign_hues(result.pattern_used, base_h, spec.k, chromas, p, rng);

  std::vector<Color> colors;
  for (std::size_t i = 0; i < points->size(); ++i) {
    const TonePoint& pt = (*points)[i];
    const RealizedColor rc = realize_color(pt.y, pt.x, result.target_hues[i], p);
    result.maha.push_back(rc.maha);
    result.snap.push_back(rc.snap);
    if (rc.maha >= p.maha_threshold) {
      result.reason = "mahalanobis_gate";
      return result;
    }
    colors.push_back(rc.color);
  }

  for (std::size_t i = 0; i < colors.size(); ++i) {
    for (std::size_t j = i + 1; j < colors.size(); ++j) {
      if (!tones_unambiguous(tone_distribution(colors[i], p), tone_distribution(colors[j], p), p)) {
        result.reason = "ambiguous_tones";
        return result;
      }
    }
  }
  result.colors = std::move(colors);
  return result;
}

}  // namespace chromaharmony
