#include "chromaharmony/json_io.hpp"

#include <array>
#include <cctype>
#include <charconv>
#include <cmath>
#include <numbers>
#include <utility>

namespace chromaharmony {

namespace {

constexpr double kRadToDeg = 180.0 / std::numbers::pi;

struct ParamField {
  const char* name;
  double HarmonyParams::*field;
};

constexpr std::array<ParamField, 10> kParamFields{{
    {"k_h", &HarmonyParams::k_h},
    {"k_N", &HarmonyParams::k_N},
    {"gamma", &HarmonyParams::gamma},
    {"k_c", &HarmonyParams::k_c},
    {"k_L", &HarmonyParams::k_L},
    {"hue_db_threshold", &HarmonyParams::hue_db_threshold},
    {"ambiguity_db_threshold", &HarmonyParams::ambiguity_db_threshold},
    {"t_line", &HarmonyParams::t_line},
    {"maha_threshold", &HarmonyParams::maha_threshold},
    {"min_sep", &HarmonyParams::min_sep},
}};

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front())))
    s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back())))
    s.remove_suffix(1);
  return s;
}

int hex_digit(char ch) {
  if (ch >= '0' && ch <= '9')
    return ch - '0';
  if (ch >= 'a' && ch <= 'f')
    return ch - 'a' + 10;
  if (ch >= 'A' && ch <= 'F')
    return ch - 'A' + 10;
  return -1;
}

bool parse_number(std::string_view s, double& out) {
  s = trim(s);
  if (!s.empty() && s.front() == '+')
    s.remove_prefix(1);
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
  return ec == std::errc() && ptr == s.data() + s.size() && std::isfinite(out);
}

Color make_color(double L, double c, double h, const std::string& token, const std::string& path) {
  try {
    return Color(L, c, h);
  } catch (const HarmonyError& e) {
    throw ParseError(e.what(), token, path);
  }
}

json optional_number(const std::optional<double>& v) { return v ? json(*v) : json(nullptr); }

json matrix_to_json(const Eigen::Matrix2d& m) {
  return json::array({json::array({m(0, 0), m(0, 1)}), json::array({m(1, 0), m(1, 1)})});
}

}  // namespace

ParseError::ParseError(std::string message, std::string token, std::string path)
    : HarmonyError(std::move(message)), token_(std::move(token)), path_(std::move(path)) {}

Color parse_color(std::string_view token) {
  const std::string tok(token);
  const std::string_view s = trim(token);
  if (s.size() == 7 && s.front() == '#') {
    std::array<std::uint8_t, 3> ch{};
    for (int i = 0; i < 3; ++i) {
      const int hi = hex_digit(s[1 + 2 * i]), lo = hex_digit(s[2 + 2 * i]);
      if (hi < 0 || lo < 0)
        throw ParseError("invalid hex color '" + tok + "'", tok);
      ch[i] = static_cast<std::uint8_t>(16 * hi + lo);
    }
    return srgb_to_color({ch[0], ch[1], ch[2]}).color;
  }
  if (s.size() > 5 && s.substr(0, 4) == "lch(" && s.back() == ')') {
    std::string_view body = s.substr(4, s.size() - 5);
    std::array<double, 3> v{};
    for (int i = 0; i < 3; ++i) {
      const auto comma = body.find(',');
      if ((i < 2) == (comma == std::string_view::npos) || !parse_number(body.substr(0, comma), v[i]))
        throw ParseError("invalid lch color '" + tok + "'", tok);
      body = comma == std::string_view::npos ? std::string_view{} : body.substr(comma + 1);
    }
    return make_color(v[0], v[1], v[2], tok, {});
  }
  throw ParseError("unrecognized color '" + tok + "' (expected #RRGGBB or lch(L,c,h))", tok);
}

Color color_from_json(const json& j, const std::string& path) {
  if (j.is_string()) {
    try {
      return parse_color(j.get<std::string>());
    } catch (const ParseError& e) {
      throw ParseError(e.what(), e.token(), path);
    }
  }
  std::array<json, 3> v;
  if (j.is_array() && j.size() == 3) {
    v = {j[0], j[1], j[2]};
  } else if (j.is_object() && j.size() == 3 && j.contains("L") && j.contains("c") && j.contains("h")) {
    v = {j["L"], j["c"], j["h"]};
  } else {
    throw ParseError("expected a color string, [L, c, h] or {L, c, h}", j.dump(), path);
  }
  for (const json& x : v)
    if (!x.is_number())
      throw ParseError("color components must be numbers", j.dump(), path);
  return make_color(v[0].get<double>(), v[1].get<double>(), v[2].get<double>(), j.dump(), path);
}

bool set_param(HarmonyParams& p, std::string_view name, double value) {
  for (const ParamField& f : kParamFields) {
    if (name == f.name) {
      p.*f.field = value;
      return true;
    }
  }
  return false;
}

HarmonyParams params_from_json(const json& j, HarmonyParams base, const std::string& path) {
  if (j.is_null())
    return base;
  if (!j.is_object())
    throw ParseError("params must be an object", j.dump(), path);
  for (const auto& [key, value] : j.items()) {
    if (!value.is_number())
      throw ParseError("parameter must be a number", value.dump(), path + "." + key);
    if (!set_param(base, key, value.get<double>()))
      throw ParseError("unknown parameter '" + key + "'", key, path + "." + key);
  }
  try {
    base.validate();
  } catch (const HarmonyError& e) {
    throw ParseError(e.what(), j.dump(), path);
  }
  return base;
}

json params_to_json(const HarmonyParams& p) {
  json out = json::object();
  for (const ParamField& f : kParamFields)
    out[f.name] = p.*f.field;
  return out;
}

json color_to_json(const Color& color) {
  return {{"L", color.L()},
          {"c", color.c()},
          {"h", color.h()},
          {"hex", to_hex(color_to_srgb(color).rgb)}};
}

json report_to_json(const HarmonyReport& rep) {
  json out = {{"schema_version", kSchemaVersion},
              {"hue_label", static_cast<int>(rep.hue_label)},
              {"hue_pattern", to_string(rep.hue_label)},
              {"tone_label", static_cast<int>(rep.tone_label)},
              {"tone_pattern", to_string(rep.tone_label)},
              {"harmonic", rep.harmonic},
              {"score", rep.score}};
  if (rep.fused_hue)
    out["fused_hue"] = {{"h", rep.fused_hue->h_hat},
                        {"c", rep.fused_hue->c_hat},
                        {"sigma", std::sqrt(rep.fused_hue->dist.var_h)}};
  else
    out["fused_hue"] = nullptr;
  if (rep.line) {
    // cov in (r, phi_deg) units to match the reported angle
    Eigen::Matrix2d cov = rep.line->cov;
    cov.row(1) *= kRadToDeg;
    cov.col(1) *= kRadToDeg;
    out["line"] = {{"r", rep.line->r}, {"phi_deg", rep.line->phi_degrees()}, {"cov", matrix_to_json(cov)}};
  } else {
    out["line"] = nullptr;
  }
  json per = json::array();
  for (const ColorDiagnostics& d : rep.per_color) {
    json c = color_to_json(d.color);
    c["index"] = d.index;
    c["hue_sigma"] = d.hue_sigma;
    c["hue_std_diff"] = optional_number(d.hue_std_diff);
    c["hue_db"] = optional_number(d.hue_db);
    c["tone_min_db"] = optional_number(d.tone_min_db);
    c["d_perp"] = optional_number(d.d_perp);
    c["sigma_d_perp"] = optional_number(d.sigma_d_perp);
    c["inlier"] = d.inlier ? json(*d.inlier) : json(nullptr);
    c["evaluated"] = d.evaluated;
    per.push_back(std::move(c));
  }
  out["per_color"] = std::move(per);
  return out;
}

json generation_to_json(const GenSpec& spec, const GenResult& res) {
  json colors = json::array();
  for (const Color& c : res.colors)
    colors.push_back(color_to_json(c));
  json targets = json::array();
  for (std::size_t i = 0; i < res.targets.size(); ++i) {
    json t = {{"c", res.targets[i].x}, {"L", res.targets[i].y}};
    t["h"] = i < res.target_hues.size() ? json(res.target_hues[i]) : json(nullptr);
    targets.push_back(std::move(t));
  }
  return {{"schema_version", kSchemaVersion},
          {"r", spec.r},
          {"phi_deg", spec.phi_deg},
          {"k", spec.k},
          {"seed", spec.seed},
          {"pattern", res.targets.empty() ? json(nullptr) : json(to_string(res.pattern_used))},
          {"colors", std::move(colors)},
          {"reason", res.reason.empty() ? json(nullptr) : json(res.reason)},
          {"targets", std::move(targets)},
          {"maha", res.maha},
          {"snap", res.snap}};
}

json suggestions_to_json(const std::vector<Suggestion>& suggestions) {
  json list = json::array();
  for (const Suggestion& s : suggestions) {
    json c = color_to_json(s.color);
    c["score"] = s.score;
    list.push_back(std::move(c));
  }
  return {{"schema_version", kSchemaVersion}, {"suggestions", std::move(list)}};
}

}  // namespace chromaharmony
