// Wire format shared by the CLI's --json output and the HTTP service.
#pragma once

#include "chromaharmony/engine.hpp"
#include "chromaharmony/palette_gen.hpp"

#include <json.hpp>

#include <string>
#include <string_view>

namespace chromaharmony {

using json = nlohmann::ordered_json;

inline constexpr int kSchemaVersion = 1;

/// Input error that names the offending token and, for JSON bodies, where it
/// sits (e.g. "colors[2]").
class ParseError : public HarmonyError {
public:
  ParseError(std::string message, std::string token, std::string path = {});
  const std::string& token() const { return token_; }
  const std::string& path() const { return path_; }

private:
  std::string token_;
  std::string path_;
};

/// "#RRGGBB" (case-insensitive) or "lch(L, c, h)". sRGB colors whose chroma
/// exceeds 100 are clamped to 100.
Color parse_color(std::string_view token);

/// A color token string, an [L, c, h] array or an {"L", "c", "h"} object.
Color color_from_json(const json& j, const std::string& path);

/// Overrides on top of base; unknown keys and non-numeric values throw.
HarmonyParams params_from_json(const json& j, HarmonyParams base = {},
                               const std::string& path = "params");

/// Sets one parameter by its canonical name (k_h, k_N, gamma, k_c, k_L,
/// hue_db_threshold, ambiguity_db_threshold, t_line, maha_threshold, min_sep).
/// Returns false for an unknown name.
bool set_param(HarmonyParams& p, std::string_view name, double value);

json params_to_json(const HarmonyParams& p);
json color_to_json(const Color& color);
json report_to_json(const HarmonyReport& report);
json generation_to_json(const GenSpec& spec, const GenResult& result);
json suggestions_to_json(const std::vector<Suggestion>& suggestions);

}  // namespace chromaharmony
