#include "chromaharmony/engine.hpp"

#include "chromaharmony/palette_gen.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <random>

namespace chromaharmony {

namespace {

constexpr std::size_t kSuggestionCandidates = 600;
constexpr double kDegToRad = std::numbers::pi / 180.0;

double clip_unit(double x) { return std::clamp(x, -1.0, 1.0); }

// Gate margins normalized so that >= 0 means the gate passed.
double hue_margin(double db, const HarmonyParams& p) {
  return clip_unit((p.hue_db_threshold - db) / p.hue_db_threshold);
}

double ambiguity_margin(double db, const HarmonyParams& p) {
  return clip_unit((db - p.ambiguity_db_threshold) / p.ambiguity_db_threshold);
}

double inlier_margin(double d, double sigma, const HarmonyParams& p) {
  return clip_unit((p.t_line - (d - 2.0 * sigma)) / p.t_line);
}

Eigen::Vector3d to_lab(const Color& c) {
  return {c.L(), c.c() * std::cos(c.h() * kDegToRad), c.c() * std::sin(c.h() * kDegToRad)};
}

}  // namespace

Session::Session(HarmonyParams params, std::string id) : params_(params), id_(std::move(id)) {
  params_.validate();
  states_.push_back({HueTracker(params_), ToneTracker(params_)});
}

HarmonyReport Session::add(const Color& color) {
  State next = states_.back();
  Step step;
  step.hue = next.hue.add(color);
  step.tone = next.tone.add(color);
  colors_.push_back(color);
  steps_.push_back(step);
  states_.push_back(std::move(next));
  return report();
}

bool Session::undo() {
  if (colors_.empty())
    return false;
  colors_.pop_back();
  steps_.pop_back();
  states_.pop_back();
  return true;
}

HarmonyReport Session::report() const {
  if (colors_.empty())
    throw HarmonyError("empty palette");
  const State& st = states_.back();
  HarmonyReport rep;
  rep.hue_label = st.hue.label();
  rep.tone_label = st.tone.label();
  rep.harmonic = rep.hue_label != HuePattern::NoHarmony && rep.tone_label != TonePattern::NoHarmony;
  const int pattern = rep.hue_label == HuePattern::NoHarmony ? 1 : static_cast<int>(rep.hue_label);
  if (rep.hue_label != HuePattern::NoHarmony)
    rep.fused_hue = st.hue.fused(pattern);
  rep.line = st.tone.line();

  double worst = 1.0;
  bool tone_stopped = false;
  for (std::size_t i = 0; i < colors_.size(); ++i) {
    ColorDiagnostics d;
    d.index = i;
    d.color = colors_[i];
    d.hue_sigma = hue_stddev(colors_[i].h(), colors_[i].c(), params_);
    if (const auto& hs = steps_[i].hue[pattern - 1]) {
      d.hue_std_diff = hs->std_diff;
      d.hue_db = hs->db;
      worst = std::min(worst, hue_margin(hs->db, params_));
    }
    d.evaluated = !tone_stopped;
    if (const auto& ts = steps_[i].tone) {
      d.tone_min_db = ts->min_db;
      d.d_perp = ts->d_perp;
      d.sigma_d_perp = ts->sigma_d_perp;
      d.inlier = ts->inlier;
      worst = std::min(worst, ambiguity_margin(ts->min_db, params_));
      if (ts->d_perp)
        worst = std::min(worst, inlier_margin(*ts->d_perp, *ts->sigma_d_perp, params_));
      if (!ts->accepted)
        tone_stopped = true;
    }
    rep.per_color.push_back(d);
  }
  rep.score = std::clamp(5.0 + 5.0 * worst, 0.0, 10.0);
  return rep;
}

HarmonyReport evaluate_palette(std::span<const Color> colors, const HarmonyParams& p,
                               std::span<const double> weights) {
  if (colors.empty())
    throw HarmonyError("empty palette");
  std::vector<std::size_t> order(colors.size());
  std::iota(order.begin(), order.end(), 0);
  if (!weights.empty()) {
    if (weights.size() != colors.size())
      throw HarmonyError("one weight per color required");
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return weights[a] > weights[b]; });
  }
  Session s(p);
  for (std::size_t i : order)
    s.add(colors[i]);
  HarmonyReport rep = s.report();
  for (std::size_t i = 0; i < order.size(); ++i)
    rep.per_color[i].index = order[i];
  return rep;
}

double inclination_prior(double phi_deg) {
  double a = std::fmod(phi_deg, 180.0);
  if (a < 0.0)
    a += 180.0;
  return std::min(1.0, std::fabs(a - 90.0) / 10.0);
}

std::vector<Suggestion> suggest_next(const Session& session, std::size_t n, std::uint64_t seed) {
  if (session.empty())
    throw HarmonyError("empty palette");
  const HarmonyParams& p = session.params();
  const HueTracker& hue = session.hue_state();
  const ToneTracker& tone = session.tone_state();
  const HuePattern label = hue.label();
  // Both evaluators stop for good at their first rejection.
  if (n == 0 || label == HuePattern::NoHarmony || tone.failed())
    return {};

  Rng rng(seed ^ (0x9e3779b97f4a7c15ULL * (session.colors().size() + 1)));
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::normal_distribution<double> gauss(0.0, 1.0);

  const int order = static_cast<int>(label);
  const FusedHue& fused = *hue.fused(order);
  const double hue_spread = 0.5 * std::sqrt(fused.dist.var_h);

  struct Candidate {
    Color color;
    double score;
  };
  std::vector<Candidate> passed;

  for (std::size_t iter = 0; iter < kSuggestionCandidates; ++iter) {
    double h;
    if (unit(rng) < 0.3) {
      h = 360.0 * unit(rng);
    } else {
      const int slot = static_cast<int>(unit(rng) * order) % order;
      h = fused.h_hat + slot * 360.0 / order + hue_spread * gauss(rng);
    }
    h = wrap_degrees(h);

    double c, L;
    if (const auto& line = tone.line()) {
      const double len = 100.0 * std::numbers::sqrt2;
      const double t = (2.0 * unit(rng) - 1.0) * len;
      c = line->r * std::cos(line->phi) - t * std::sin(line->phi);
      L = line->r * std::sin(line->phi) + t * std::cos(line->phi);
      if (c < 0.0 || c > 100.0 || L < 0.0 || L > 100.0)
        continue;
    } else {
      c = 100.0 * unit(rng);
      L = 100.0 * unit(rng);
    }
    c = std::min(c, max_chroma(L, h));
    const Color candidate(L, c, h);

    HueTracker h2 = hue;
    ToneTracker t2 = tone;
    const auto hue_step = h2.add(candidate);
    const auto tone_step = t2.add(candidate);
    if (h2.label() == HuePattern::NoHarmony || t2.label() == TonePattern::NoHarmony)
      continue;

    const int new_order = static_cast<int>(h2.label());
    double margin_sum = 0.0;
    int margins = 0;
    if (const auto& hs = hue_step[new_order - 1]) {
      margin_sum += std::max(0.0, hue_margin(hs->db, p));
      ++margins;
    }
    if (tone_step) {
      margin_sum += std::max(0.0, ambiguity_margin(tone_step->min_db, p));
      ++margins;
      if (tone_step->d_perp) {
        margin_sum += std::max(0.0, inlier_margin(*tone_step->d_perp, *tone_step->sigma_d_perp, p));
        ++margins;
      }
    }
    const double margin = margins ? margin_sum / margins : 0.0;
    const double prior = t2.line() ? inclination_prior(t2.line()->phi_degrees()) : 1.0;
    passed.push_back({candidate, 0.7 * margin + 0.3 * prior});
  }

  std::stable_sort(passed.begin(), passed.end(),
                   [](const Candidate& a, const Candidate& b) { return a.score > b.score; });
  std::vector<Suggestion> out;
  for (const Candidate& cand : passed) {
    if (out.size() == n)
      break;
    const Eigen::Vector3d lab = to_lab(cand.color);
    const bool near_duplicate = std::any_of(out.begin(), out.end(), [&](const Suggestion& s) {
      return (to_lab(s.color) - lab).norm() < 5.0;
    });
    if (!near_duplicate)
      out.push_back({cand.color, cand.score});
  }
  return out;
}

}  // namespace chromaharmony
