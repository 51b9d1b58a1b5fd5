// Combined hue + tone evaluation, incremental sessions and next-color
// suggestions.
#pragma once

#include "chromaharmony/hue_harmony.hpp"
#include "chromaharmony/tone_harmony.hpp"

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace chromaharmony {

struct ColorDiagnostics {
  std::size_t index = 0;  // position in the evaluated order
  Color color;
  double hue_sigma = 0.0;
  // Against the fused hue of the reported pattern (analog when none).
  std::optional<double> hue_std_diff;
  std::optional<double> hue_db;
  std::optional<double> tone_min_db;
  std::optional<double> d_perp;
  std::optional<double> sigma_d_perp;
  std::optional<bool> inlier;
  bool evaluated = true;  // false once an earlier color stopped the tone test
};

struct HarmonyReport {
  HuePattern hue_label = HuePattern::NoHarmony;
  TonePattern tone_label = TonePattern::NoHarmony;
  bool harmonic = false;
  // Heuristic 0-10 summary: 5 + 5 * (worst normalized gate margin), clamped.
  double score = 0.0;
  std::optional<FusedHue> fused_hue;
  std::optional<ToneLine> line;
  std::vector<ColorDiagnostics> per_color;
};

/// Ordered palette with incremental evaluators and per-step snapshots, so
/// that undo restores the previous state exactly.
class Session {
public:
  explicit Session(HarmonyParams params = {}, std::string id = {});

  const std::string& id() const { return id_; }
  const HarmonyParams& params() const { return params_; }
  const std::vector<Color>& colors() const { return colors_; }
  bool empty() const { return colors_.empty(); }

  /// Appends a color; disharmonious additions are kept and reported.
  HarmonyReport add(const Color& color);

  /// Drops the last color. Returns false on an empty session.
  bool undo();

  /// Throws HarmonyError on an empty session.
  HarmonyReport report() const;

  const HueTracker& hue_state() const { return states_.back().hue; }
  const ToneTracker& tone_state() const { return states_.back().tone; }

private:
  struct Step {
    std::array<std::optional<HueStep>, 3> hue;
    std::optional<ToneStep> tone;
  };
  struct State {
    HueTracker hue;
    ToneTracker tone;
  };

  HarmonyParams params_;
  std::string id_;
  std::vector<Color> colors_;
  std::vector<Step> steps_;
  std::vector<State> states_;  // states_[n] holds the trackers after n colors
};

/// Evaluates a palette in the given order. With weights (e.g. areas), colors
/// are first stably sorted by descending weight.
HarmonyReport evaluate_palette(std::span<const Color> colors, const HarmonyParams& p,
                               std::span<const double> weights = {});

struct Suggestion {
  Color color;
  double score = 0.0;
};

/// Up to n colors that keep the session harmonic when appended, best first.
/// Returns fewer (possibly none) when not enough candidates pass the gates.
std::vector<Suggestion> suggest_next(const Session& session, std::size_t n,
                                     std::uint64_t seed = 0);

/// Inclination preference in [0, 1]: 0 for a vertical normal (phi = 90 deg),
/// rising linearly to 1 at 10 degrees away.
double inclination_prior(double phi_deg);

}  // namespace chromaharmony
