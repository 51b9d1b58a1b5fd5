#include "chromaharmony/engine.hpp"

#include <doctest.h>

#include <cmath>
#include <random>

using namespace chromaharmony;

TEST_CASE("palette evaluation") {
  const HarmonyParams p;
  const std::vector<Color> good{{20, 10, 100}, {40, 30, 104}, {60, 50, 97}};
  const HarmonyReport rep = evaluate_palette(good, p);
  CHECK(rep.hue_label == HuePattern::Analog);
  CHECK(rep.tone_label == TonePattern::Line);
  CHECK(rep.harmonic);
  CHECK(rep.per_color.size() == 3);
  REQUIRE(rep.line.has_value());
  CHECK(rep.per_color[2].inlier == true);
  CHECK(rep.score >= 5.0);

  // two near-identical tones
  const std::vector<Color> twins{{50, 30, 100}, {51, 31, 100}};
  const HarmonyReport tw = evaluate_palette(twins, p);
  CHECK_FALSE(tw.harmonic);
  CHECK(tw.tone_label == TonePattern::NoHarmony);
  CHECK(tw.score < 5.0);

  // two collinear tones and a vivid one far off their line
  const std::vector<Color> off{{30, 10, 100}, {60, 10, 100}, {45, 80, 100}};
  const HarmonyReport of = evaluate_palette(off, p);
  CHECK(of.tone_label == TonePattern::NoHarmony);
  CHECK(of.per_color[2].inlier == false);

  CHECK_THROWS_AS(evaluate_palette(std::vector<Color>{}, p), HarmonyError);

  SUBCASE("weights reorder the evaluation") {
    const std::vector<double> area{0.1, 0.5, 0.4};
    const HarmonyReport w = evaluate_palette(good, p, area);
    CHECK(w.per_color[0].index == 1);
    CHECK(w.per_color[1].index == 2);
    CHECK(w.per_color[2].index == 0);
  }
}

TEST_CASE("session") {
  Session s;
  const HarmonyReport one = s.add(Color(50, 0, 0));
  CHECK(one.hue_label == HuePattern::Analog);
  CHECK(one.tone_label == TonePattern::Point);
  CHECK(one.harmonic);

  const HarmonyReport dup = s.add(Color(50, 0, 0));
  CHECK(dup.tone_label == TonePattern::NoHarmony);
  CHECK(s.colors().size() == 2);

  CHECK(s.undo());
  CHECK(s.report().tone_label == TonePattern::Point);
  CHECK(s.undo());
  CHECK_FALSE(s.undo());
  CHECK_THROWS_AS(s.report(), HarmonyError);

  SUBCASE("incremental equals batch") {
    const HarmonyParams p;
    std::mt19937_64 rng(13);
    std::uniform_real_distribution<double> u(0, 1);
    for (int trial = 0; trial < 200; ++trial) {
      std::vector<Color> cs;
      const double base = 360 * u(rng);
      for (int j = 0; j < 5; ++j)
        cs.emplace_back(10 + 80 * u(rng), 5 + 20 * j + 5 * u(rng), base + 15 * u(rng));
      Session inc(p);
      HarmonyReport last;
      for (const Color& c : cs)
        last = inc.add(c);
      CHECK(last.hue_label == evaluate_hue_harmony(cs, p));
      CHECK(last.tone_label == evaluate_tone_harmony(cs, p));
      const HarmonyReport batch = evaluate_palette(cs, p);
      CHECK(batch.line.has_value() == last.line.has_value());
      if (batch.line) {
        CHECK(std::fabs(batch.line->r - last.line->r) <= 1e-9);
        CHECK(std::fabs(batch.line->phi - last.line->phi) <= 1e-9);
      }
    }
  }
}

TEST_CASE("suggestions") {
  CHECK(inclination_prior(90) == 0);
  CHECK(inclination_prior(95) == doctest::Approx(0.5));
  CHECK(inclination_prior(270) == 0);
  CHECK(inclination_prior(45) == 1);

  Session empty;
  CHECK_THROWS_AS(suggest_next(empty, 3), HarmonyError);

  Session two;
  two.add(Color(30, 20, 40));
  two.add(Color(60, 40, 45));
  const auto sug = suggest_next(two, 5);
  CHECK(sug.size() <= 5);
  CHECK_FALSE(sug.empty());
  for (const Suggestion& s : sug) {
    const ToneLine& line = *two.report().line;
    CHECK(point_is_inlier(tone_of(s.color), tone_covariance(s.color.c(), s.color.L(), two.params()),
                          line, two.params()));
    Session copy = two;
    CHECK(copy.add(s.color).harmonic);
  }
  CHECK(suggest_next(two, 0).empty());

  SUBCASE("neutral admits many hues") {
    Session gray;
    gray.add(Color(50, 0, 0));
    const auto many = suggest_next(gray, 12);
    REQUIRE(many.size() == 12);
    std::vector<double> hs;
    for (const auto& s : many)
      hs.push_back(s.color.h());
    std::sort(hs.begin(), hs.end());
    double widest_gap = 360 - hs.back() + hs.front();
    for (std::size_t i = 1; i < hs.size(); ++i)
      widest_gap = std::max(widest_gap, hs[i] - hs[i - 1]);
    // hues cover more than half the circle
    CHECK(360 - widest_gap > 180);
  }

  SUBCASE("inharmonic sessions get nothing") {
    Session bad;
    bad.add(Color(50, 30, 0));
    bad.add(Color(50, 30, 0));
    CHECK(suggest_next(bad, 5).empty());
  }
}
