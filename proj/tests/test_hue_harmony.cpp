#include "chromaharmony/hue_harmony.hpp"

#include <doctest.h>

#include <cmath>
#include <random>
#include <vector>

using namespace chromaharmony;

TEST_CASE("central angle") {
  CHECK(central_angle(350, 10) == doctest::Approx(20));
  CHECK(central_angle(10, 350) == doctest::Approx(20));
  CHECK(central_angle(42, 42) == 0);
  CHECK(central_angle(0, 180) == 180);
  CHECK(central_angle(-10, 725) == doctest::Approx(15));
}

TEST_CASE("standardized difference") {
  CHECK(standardized_diff(2, 10, 190) == doctest::Approx(0).epsilon(1e-12));
  CHECK(standardized_diff(3, 0, 120) == doctest::Approx(0).epsilon(1e-12));
  CHECK(standardized_diff(1, 20, 50) == doctest::Approx(30));
  CHECK(standardized_diff(2, 0, 90) == doctest::Approx(90));
  CHECK(standardized_diff(3, 0, 60) == doctest::Approx(60));
  CHECK_THROWS_AS(standardized_diff(4, 0, 1), HarmonyError);

  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(0, 360);
  for (int n = 0; n < 20000; ++n) {
    const int i = 1 + n % 3;
    const double a = u(rng), b = u(rng);
    const double d = standardized_diff(i, a, b);
    CHECK(d >= 0);
    CHECK(d <= 180.0 / i + 1e-12);
    CHECK(d == doctest::Approx(standardized_diff(i, b, a)).epsilon(1e-12));
    CHECK(standardized_diff(i, a, a + 360.0 / i) < 1e-9);
  }
}

TEST_CASE("univariate Bhattacharyya") {
  CHECK(bhattacharyya_1d(25, 25, 0) == 0);
  const double s = 7.0;
  CHECK(bhattacharyya_1d(s * s, s * s, 2 * s) == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(bhattacharyya_1d(9, 10000, 0) == doctest::Approx(1.4071551560014364).epsilon(1e-12));
  CHECK(bhattacharyya_1d(9, 10000, 0) == bhattacharyya_1d(10000, 9, 0));
  CHECK(bhattacharyya_1d(4, 9, 0) > 0);
  CHECK(bhattacharyya_1d(4, 4, 1) > 0);
}

TEST_CASE("pairwise hue harmony") {
  const HarmonyParams p;
  const HueDistribution a{40, 36};
  for (int i = 1; i <= 3; ++i)
    CHECK(hue_pair_harmonic(i, a, a, p));

  // D_B = 900 / 200 = 4.5
  CHECK_FALSE(hue_pair_harmonic(1, {0, 25}, {30, 25}, p));

  // neutral against vivid across the circle, D_B ~ 1.790
  const HueDistribution neutral{0, 123.0 * 123.0};
  const HueDistribution vivid{180, 25};
  CHECK(hue_pair_harmonic(1, neutral, vivid, p));
  CHECK(bhattacharyya_1d(neutral.var_h, vivid.var_h, 180) ==
        doctest::Approx(1.7901375170386717).epsilon(1e-12));

  std::mt19937_64 rng(8);
  std::uniform_real_distribution<double> h(0, 360), v(1, 500);
  for (int n = 0; n < 1000; ++n) {
    const HueDistribution x{h(rng), v(rng)}, y{h(rng), v(rng)};
    const int i = 1 + n % 3;
    CHECK(hue_pair_harmonic(i, x, y, p) == hue_pair_harmonic(i, y, x, p));
  }
}

TEST_CASE("hue fusion") {
  const HarmonyParams p;
  const FusedHue mid = fuse_hues({10, 20}, 20, {30, 20}, 40, p);
  CHECK(mid.h_hat == doctest::Approx(20));
  CHECK(mid.c_hat == doctest::Approx(30));
  CHECK(mid.dist.mean_h == mid.h_hat);
  CHECK(mid.dist.var_h == doctest::Approx(std::pow(hue_stddev(20, 30, p), 2)));

  const FusedHue dominated = fuse_hues({10, 1e12}, 20, {30, 1}, 40, p);
  CHECK(dominated.h_hat == doctest::Approx(30).epsilon(1e-9));
  CHECK(dominated.c_hat == doctest::Approx(40).epsilon(1e-9));

  const FusedHue seam = fuse_hues({350, 20}, 30, {10, 20}, 30, p);
  CHECK(std::min(seam.h_hat, 360 - seam.h_hat) < 1e-9);

  SUBCASE("fusion in folded space stays next to the first hue") {
    // opposite: 170 and 355 (~175 folded) fuse to 172.5 on the first hue's side
    const FusedHue opp = fuse_hues({170, 20}, 30, {355, 20}, 30, p, 2);
    CHECK(opp.h_hat == doctest::Approx(172.5));
    // triad: 2 and 238 (~358 folded) fuse across the seam to 0
    const FusedHue tri = fuse_hues({2, 20}, 30, {238, 20}, 30, p, 3);
    CHECK(central_angle(tri.h_hat, 0) < 1e-9);
  }
}

TEST_CASE("hue harmony evaluation") {
  const HarmonyParams p;
  const std::vector<Color> analog{{50, 40, 100}, {60, 45, 105}, {40, 35, 95}};
  CHECK(evaluate_hue_harmony(analog, p) == HuePattern::Analog);

  const std::vector<Color> same(3, Color(50, 60, 10));
  CHECK(evaluate_hue_harmony(same, p) == HuePattern::Analog);

  const std::vector<Color> triad{{50, 60, 0}, {50, 60, 120}, {50, 60, 240}};
  CHECK(evaluate_hue_harmony(triad, p) == HuePattern::Triad);
  CHECK(evaluate_hue_harmony(triad, p, 2) == HuePattern::NoHarmony);

  const std::vector<Color> opposite{{50, 60, 30}, {50, 60, 210}, {60, 50, 32}};
  CHECK(evaluate_hue_harmony(opposite, p) == HuePattern::Opposite);
  CHECK(evaluate_hue_harmony(opposite, p, 1) == HuePattern::NoHarmony);

  const std::vector<Color> clash{{50, 60, 0}, {50, 60, 60}};
  CHECK(evaluate_hue_harmony(clash, p) == HuePattern::NoHarmony);

  CHECK(evaluate_hue_harmony(std::vector<Color>{{50, 60, 0}}, p) == HuePattern::Analog);
  CHECK_THROWS_WITH_AS(evaluate_hue_harmony(std::vector<Color>{}, p), "empty palette",
                       HarmonyError);

  // a neutral joins anything
  const std::vector<Color> with_gray{{50, 60, 30}, {50, 0, 200}};
  CHECK(evaluate_hue_harmony(with_gray, p) == HuePattern::Analog);
}

TEST_CASE("hue labels under a common rotation") {
  HarmonyParams p;
  p.use_rotation_term = false;
  std::mt19937_64 rng(21);
  std::uniform_real_distribution<double> u(0, 1);
  for (int n = 0; n < 300; ++n) {
    std::vector<Color> colors;
    const double base = 360 * u(rng);
    for (int j = 0; j < 4; ++j)
      colors.emplace_back(100 * u(rng), 100 * u(rng), base + 120 * std::floor(3 * u(rng)) + 20 * u(rng));
    const HuePattern ref = evaluate_hue_harmony(colors, p);
    const double delta = 360 * u(rng);
    std::vector<Color> rotated;
    for (const Color& c : colors)
      rotated.emplace_back(c.L(), c.c(), c.h() + delta);
    CHECK(evaluate_hue_harmony(rotated, p) == ref);
    if (ref == HuePattern::Opposite)
      CHECK(evaluate_hue_harmony(colors, p, 1) == HuePattern::NoHarmony);
    if (ref == HuePattern::Triad)
      CHECK(evaluate_hue_harmony(colors, p, 2) == HuePattern::NoHarmony);
  }
}
