// Chroma-lightness plane analysis: tone ambiguity, weighted total least
// squares line fitting with first-order covariance propagation, and the
// incremental line-pattern evaluator.
#pragma once

#include "chromaharmony/color_model.hpp"

#include <optional>
#include <span>
#include <vector>

namespace chromaharmony {

enum class TonePattern : int { NoHarmony = 0, Point = 1, Line = 2 };

const char* to_string(TonePattern pattern);

/// Line in normal form: points (c, L) on it satisfy r = c cos(phi) + L sin(phi).
/// phi is in radians, normalized to [0, 2*pi); r >= 0. cov is over (r, phi).
struct ToneLine {
  double r = 0.0;
  double phi = 0.0;
  Eigen::Matrix2d cov = Eigen::Matrix2d::Zero();

  double phi_degrees() const;
};

double bhattacharyya_mv(const ToneDistribution& a, const ToneDistribution& b);

bool tones_unambiguous(const ToneDistribution& a, const ToneDistribution& b,
                       const HarmonyParams& p);

/// (k_c S_c k_L S_L)^-2
double point_weight(double c, double L, const HarmonyParams& p);

/// Weighted perpendicular least-squares line. The returned cov is zero.
/// Throws HarmonyError("degenerate fit") for fewer than two distinct points.
ToneLine fit_line(std::span<const Tone> points, std::span<const double> weights);

/// Sum of w_i * (r - c_i cos(phi) - L_i sin(phi))^2.
double line_objective(std::span<const Tone> points, std::span<const double> weights,
                      double r, double phi);

/// Jacobian of (r, phi) with respect to (c_k, L_k), weights held fixed. One
/// 2x2 block per point, rows (r, phi), columns (c, L).
std::vector<Eigen::Matrix2d> line_jacobians(std::span<const Tone> points,
                                            std::span<const double> weights,
                                            const ToneLine& line);

/// sum_i b_i C_i b_i^T
Eigen::Matrix2d line_covariance(std::span<const Tone> points, std::span<const double> weights,
                                std::span<const Eigen::Matrix2d> covs, const ToneLine& line);

double perp_distance(const Tone& t, const ToneLine& line);

/// First-order variance of perp_distance given the point covariance and
/// line.cov, treated as independent.
double perp_distance_variance(const Tone& t, const Eigen::Matrix2d& cov_t, const ToneLine& line);

bool point_is_inlier(const Tone& t, const Eigen::Matrix2d& cov_t, const ToneLine& line,
                     const HarmonyParams& p);

/// Outcome of offering one color to the tone evaluator.
struct ToneStep {
  double min_db = 0.0;                 // smallest D_B to an accepted tone
  std::optional<double> d_perp;        // set when tested against a line
  std::optional<double> sigma_d_perp;
  std::optional<bool> inlier;
  bool accepted = false;
};

/// Incremental tone-line evaluator. Once a color is rejected the tracker is
/// stopped and ignores further colors.
class ToneTracker {
public:
  explicit ToneTracker(const HarmonyParams& params);

  /// Returns nullopt for the first color and for colors offered after a
  /// rejection.
  std::optional<ToneStep> add(const Color& color);

  /// Throws on an empty tracker.
  TonePattern label() const;

  std::size_t size() const { return count_; }
  bool failed() const { return failed_; }
  const std::vector<Tone>& accepted() const { return tones_; }
  const std::optional<ToneLine>& line() const { return line_; }

private:
  void refit();

  HarmonyParams params_;
  std::size_t count_ = 0;
  bool failed_ = false;
  std::vector<Tone> tones_;
  std::vector<double> weights_;
  std::vector<Eigen::Matrix2d> covs_;
  std::optional<ToneLine> line_;
};

TonePattern evaluate_tone_harmony(std::span<const Color> colors, const HarmonyParams& p);

}  // namespace chromaharmony
