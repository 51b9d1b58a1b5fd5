#include "chromaharmony/tone_harmony.hpp"

#include <Eigen/LU>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

namespace chromaharmony {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

struct Moments {
  double W = 0.0;
  double c_bar = 0.0;
  double L_bar = 0.0;
  double Scc = 0.0;
  double SLL = 0.0;
  double ScL = 0.0;
};

Moments weighted_moments(std::span<const Tone> points, std::span<const double> weights) {
  if (points.size() != weights.size())
    throw HarmonyError("points and weights differ in length");
  Moments m;
  for (std::size_t i = 0; i < points.size(); ++i) {
    if (!(weights[i] > 0.0))
      throw HarmonyError("weights must be positive");
    m.W += weights[i];
    m.c_bar += weights[i] * points[i].c;
    m.L_bar += weights[i] * points[i].L;
  }
  m.c_bar /= m.W;
  m.L_bar /= m.W;
  for (std::size_t i = 0; i < points.size(); ++i) {
    const double dc = points[i].c - m.c_bar;
    const double dL = points[i].L - m.L_bar;
    m.Scc += weights[i] * dc * dc;
    m.SLL += weights[i] * dL * dL;
    m.ScL += weights[i] * dc * dL;
  }
  return m;
}

// Scatter with no preferred direction: every line through the centroid fits
// equally well.
bool isotropic(const Moments& m) {
  const double n = -2.0 * m.ScL;
  const double d = m.SLL - m.Scc;
  const double scale = m.Scc + m.SLL;
  return n * n + d * d <= 1e-24 * scale * scale;
}

}  // namespace

const char* to_string(TonePattern pattern) {
  switch (pattern) {
    case TonePattern::Point:
      return "point";
    case TonePattern::Line:
      return "line";
    case TonePattern::NoHarmony:
      break;
  }
  return "none";
}

double ToneLine::phi_degrees() const { return phi * 180.0 / std::numbers::pi; }

double bhattacharyya_mv(const ToneDistribution& a, const ToneDistribution& b) {
  const Eigen::Matrix2d avg = 0.5 * (a.cov + b.cov);
  const double det_avg = avg.determinant();
  if (!(det_avg > 0.0))
    throw HarmonyError("singular tone covariance");
  const Eigen::Vector2d diff = a.mean - b.mean;
  const double maha = diff.dot(avg.inverse() * diff);
  return maha / 8.0 + 0.5 * std::log(det_avg / std::sqrt(a.cov.determinant() * b.cov.determinant()));
}

bool tones_unambiguous(const ToneDistribution& a, const ToneDistribution& b,
                       const HarmonyParams& p) {
  return bhattacharyya_mv(a, b) >= p.ambiguity_db_threshold;
}

double point_weight(double c, double L, const HarmonyParams& p) {
  const ToneScale s = tone_scale_factors(c, L);
  const double sd = p.k_c * s.S_c * p.k_L * s.S_L;
  return 1.0 / (sd * sd);
}

ToneLine fit_line(std::span<const Tone> points, std::span<const double> weights) {
  if (points.size() < 2)
    throw HarmonyError("degenerate fit");
  const Moments m = weighted_moments(points, weights);
  const double spread = std::max(1.0, std::hypot(m.c_bar, m.L_bar));
  if (m.Scc + m.SLL <= 1e-24 * m.W * spread * spread)
    throw HarmonyError("degenerate fit");

  double phi = 0.5 * std::atan2(-2.0 * m.ScL, m.SLL - m.Scc);
  double r = m.c_bar * std::cos(phi) + m.L_bar * std::sin(phi);
  if (r < 0.0) {
    r = -r;
    phi += std::numbers::pi;
  }
  phi = std::fmod(phi, kTwoPi);
  if (phi < 0.0)
    phi += kTwoPi;
  return {r, phi, Eigen::Matrix2d::Zero()};
}

double line_objective(std::span<const Tone> points, std::span<const double> weights, double r,
                      double phi) {
  const double cp = std::cos(phi);
  const double sp = std::sin(phi);
  double sum = 0.0;
  for (std::size_t i = 0; i < points.size(); ++i) {
    const double e = r - points[i].c * cp - points[i].L * sp;
    sum += weights[i] * e * e;
  }
  return sum;
}

std::vector<Eigen::Matrix2d> line_jacobians(std::span<const Tone> points,
                                            std::span<const double> weights,
                                            const ToneLine& line) {
  const Moments m = weighted_moments(points, weights);
  const double n = -2.0 * m.ScL;
  const double d = m.SLL - m.Scc;
  const double q = n * n + d * d;
  const bool flat = isotropic(m);
  const double cp = std::cos(line.phi);
  const double sp = std::sin(line.phi);
  // dr/dphi at fixed means
  const double r_phi = -m.c_bar * sp + m.L_bar * cp;

  std::vector<Eigen::Matrix2d> jac(points.size());
  for (std::size_t k = 0; k < points.size(); ++k) {
    const double w = weights[k];
    const double dc = points[k].c - m.c_bar;
    const double dL = points[k].L - m.L_bar;
    double phi_c = 0.0;
    double phi_L = 0.0;
    if (!flat) {
      // phi = atan2(n, d) / 2
      phi_c = 0.5 * (d * (-2.0 * w * dL) - n * (-2.0 * w * dc)) / q;
      phi_L = 0.5 * (d * (-2.0 * w * dc) - n * (2.0 * w * dL)) / q;
    }
    Eigen::Matrix2d& b = jac[k];
    b(0, 0) = w / m.W * cp + r_phi * phi_c;
    b(0, 1) = w / m.W * sp + r_phi * phi_L;
    b(1, 0) = phi_c;
    b(1, 1) = phi_L;
  }
  return jac;
}

Eigen::Matrix2d line_covariance(std::span<const Tone> points, std::span<const double> weights,
                                std::span<const Eigen::Matrix2d> covs, const ToneLine& line) {
  if (covs.size() != points.size())
    throw HarmonyError("points and covariances differ in length");
  const auto jac = line_jacobians(points, weights, line);
  Eigen::Matrix2d cov = Eigen::Matrix2d::Zero();
  for (std::size_t i = 0; i < jac.size(); ++i)
    cov += jac[i] * covs[i] * jac[i].transpose();
  if (isotropic(weighted_moments(points, weights))) {
    // direction undetermined: variance of a uniform angle over pi
    cov(1, 1) += std::numbers::pi * std::numbers::pi / 12.0;
  }
  return 0.5 * (cov + cov.transpose());
}

double perp_distance(const Tone& t, const ToneLine& line) {
  return std::fabs(line.r - t.c * std::cos(line.phi) - t.L * std::sin(line.phi));
}

double perp_distance_variance(const Tone& t, const Eigen::Matrix2d& cov_t, const ToneLine& line) {
  const double cp = std::cos(line.phi);
  const double sp = std::sin(line.phi);
  // gradient of the signed distance; the sign drops out of the quadratic form
  const Eigen::Vector2d g_line(1.0, t.c * sp - t.L * cp);
  const Eigen::Vector2d g_point(-cp, -sp);
  const double var = g_point.dot(cov_t * g_point) + g_line.dot(line.cov * g_line);
  return std::max(var, 0.0);
}

bool point_is_inlier(const Tone& t, const Eigen::Matrix2d& cov_t, const ToneLine& line,
                     const HarmonyParams& p) {
  return perp_distance(t, line) - 2.0 * std::sqrt(perp_distance_variance(t, cov_t, line)) <=
         p.t_line;
}

ToneTracker::ToneTracker(const HarmonyParams& params) : params_(params) {}

std::optional<ToneStep> ToneTracker::add(const Color& color) {
  const Tone tone = tone_of(color);
  const Eigen::Matrix2d cov = tone_covariance(tone.c, tone.L, params_);
  ++count_;
  if (failed_)
    return std::nullopt;
  if (tones_.empty()) {
    tones_.push_back(tone);
    weights_.push_back(point_weight(tone.c, tone.L, params_));
    covs_.push_back(cov);
    return std::nullopt;
  }

  ToneStep step;
  const ToneDistribution candidate{Eigen::Vector2d(tone.c, tone.L), cov};
  step.min_db = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < tones_.size(); ++i) {
    const ToneDistribution prior{Eigen::Vector2d(tones_[i].c, tones_[i].L), covs_[i]};
    step.min_db = std::min(step.min_db, bhattacharyya_mv(prior, candidate));
  }
  const bool separated = step.min_db >= params_.ambiguity_db_threshold;

  if (line_) {
    step.d_perp = perp_distance(tone, *line_);
    step.sigma_d_perp = std::sqrt(perp_distance_variance(tone, cov, *line_));
    step.inlier = *step.d_perp - 2.0 * *step.sigma_d_perp <= params_.t_line;
  }

  step.accepted = separated && (tones_.size() == 1 || step.inlier.value_or(false));
  if (!step.accepted) {
    failed_ = true;
    return step;
  }
  tones_.push_back(tone);
  weights_.push_back(point_weight(tone.c, tone.L, params_));
  covs_.push_back(cov);
  refit();
  return step;
}

void ToneTracker::refit() {
  ToneLine line = fit_line(tones_, weights_);
  line.cov = line_covariance(tones_, weights_, covs_, line);
  line_ = line;
}

TonePattern ToneTracker::label() const {
  if (count_ == 0)
    throw HarmonyError("empty palette");
  if (failed_)
    return TonePattern::NoHarmony;
  return count_ == 1 ? TonePattern::Point : TonePattern::Line;
}

TonePattern evaluate_tone_harmony(std::span<const Color> colors, const HarmonyParams& p) {
  if (colors.empty())
    throw HarmonyError("empty palette");
  ToneTracker tracker(p);
  for (const Color& c : colors)
    tracker.add(c);
  return tracker.label();
}

}  // namespace chromaharmony
