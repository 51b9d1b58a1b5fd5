#include "chromaharmony/cli.hpp"

#include "chromaharmony/engine.hpp"
#include "chromaharmony/json_io.hpp"
#include "chromaharmony/palette_gen.hpp"
#include "chromaharmony/render.hpp"

#include <CLI11.hpp>

#include <array>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <random>
#include <sstream>

namespace chromaharmony {

namespace {

struct Range {
  double from = 0, to = 0, step = 1;

  std::vector<double> values() const {
    std::vector<double> v;
    for (int i = 0;; ++i) {
      const double x = from + i * step;
      if (x > to + 1e-9 * std::max(1.0, std::fabs(to)))
        break;
      v.push_back(x);
    }
    return v;
  }
};

double parse_number(const std::string& item, const std::string& flag) {
  std::size_t used = 0;
  double v = 0;
  try {
    v = std::stod(item, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used != item.size() || item.empty() || !std::isfinite(v))
    throw ParseError(flag + ": invalid number '" + item + "'", item);
  return v;
}

// "a", "a:b" (step 1) or "a:b:step", inclusive.
Range parse_range(const std::string& text, const std::string& flag) {
  std::vector<double> parts;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ':'))
    parts.push_back(parse_number(item, flag));
  if (parts.empty() || parts.size() > 3)
    throw ParseError(flag + ": expected a, a:b or a:b:step", text);
  Range r{parts[0], parts.size() > 1 ? parts[1] : parts[0], parts.size() > 2 ? parts[2] : 1.0};
  if (r.step <= 0 || r.to < r.from)
    throw ParseError(flag + ": empty range '" + text + "'", text);
  return r;
}

std::string read_file(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f)
    throw HarmonyError("cannot read " + path);
  std::ostringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

// A palette file is either whitespace-separated color tokens or a JSON
// array of colors / object {"colors": [...], "weights": [...]}.
void load_palette_file(const std::string& path, std::vector<Color>& colors,
                       std::vector<double>& weights) {
  const std::string text = read_file(path);
  const auto first = text.find_first_not_of(" \t\r\n");
  if (first != std::string::npos && (text[first] == '[' || text[first] == '{')) {
    json doc;
    try {
      doc = json::parse(text);
    } catch (const json::parse_error& e) {
      throw ParseError(path + ": " + e.what(), path);
    }
    const json list = doc.is_object() ? doc.value("colors", json()) : doc;
    if (!list.is_array())
      throw ParseError(path + ": expected a list of colors", path, "colors");
    for (std::size_t i = 0; i < list.size(); ++i)
      colors.push_back(color_from_json(list[i], "colors[" + std::to_string(i) + "]"));
    if (doc.is_object() && doc.contains("weights")) {
      for (const json& w : doc["weights"]) {
        if (!w.is_number())
          throw ParseError(path + ": weights must be numbers", w.dump(), "weights");
        weights.push_back(w.get<double>());
      }
    }
    return;
  }
  std::istringstream in(text);
  std::string token;
  while (in >> token)
    colors.push_back(parse_color(token));
}

std::string fmt(double v, int precision = 2) {
  std::ostringstream o;
  o << std::fixed << std::setprecision(precision) << v;
  return o.str();
}

std::string fmt(const std::optional<double>& v, int precision = 2) {
  return v ? fmt(*v, precision) : "-";
}

void print_report(std::ostream& out, const HarmonyReport& rep) {
  out << "hue:      " << to_string(rep.hue_label) << " (" << static_cast<int>(rep.hue_label) << ")\n"
      << "tone:     " << to_string(rep.tone_label) << " (" << static_cast<int>(rep.tone_label) << ")\n"
      << "harmonic: " << (rep.harmonic ? "yes" : "no") << "\n"
      << "score:    " << fmt(rep.score) << " / 10\n";
  if (rep.fused_hue)
    out << "fused hue: " << fmt(rep.fused_hue->h_hat, 1) << " deg at chroma " << fmt(rep.fused_hue->c_hat, 1)
        << "\n";
  if (rep.line)
    out << "line:     r = " << fmt(rep.line->r) << ", phi = " << fmt(rep.line->phi_degrees()) << " deg\n";
  out << "\n  #  hex         L      c      h   sigma_h  hue D_B  tone D_B  d_perp  inlier\n";
  for (const ColorDiagnostics& d : rep.per_color) {
    out << std::setw(3) << d.index << "  " << to_hex(color_to_srgb(d.color).rgb) << std::setw(7)
        << fmt(d.color.L(), 1) << std::setw(7) << fmt(d.color.c(), 1) << std::setw(7) << fmt(d.color.h(), 1)
        << std::setw(10) << fmt(d.hue_sigma) << std::setw(9) << fmt(d.hue_db) << std::setw(10)
        << fmt(d.tone_min_db) << std::setw(8) << fmt(d.d_perp) << std::setw(8)
        << (d.inlier ? (*d.inlier ? "yes" : "no") : "-") << "\n";
  }
}

void print_generation(std::ostream& out, const GenSpec& spec, const GenResult& res) {
  out << "line:    r = " << fmt(spec.r) << ", phi = " << fmt(spec.phi_deg) << " deg, k = " << spec.k
      << ", seed = " << spec.seed << "\n";
  if (res.colors.empty()) {
    out << "no palette: " << res.reason << "\n";
    return;
  }
  out << "pattern: " << to_string(res.pattern_used) << "\n";
  for (const Color& c : res.colors)
    out << "  " << to_hex(color_to_srgb(c).rgb) << "  lch(" << fmt(c.L()) << ", " << fmt(c.c()) << ", "
        << fmt(c.h()) << ")\n";
}

// Per-trial stream: independent of how the sweep is ordered.
std::uint64_t trial_seed(std::uint64_t base, std::size_t cell, int trial) {
  std::seed_seq seq{static_cast<std::uint32_t>(base), static_cast<std::uint32_t>(base >> 32),
                    static_cast<std::uint32_t>(cell), static_cast<std::uint32_t>(trial)};
  std::array<std::uint32_t, 2> words{};
  seq.generate(words.begin(), words.end());
  return (static_cast<std::uint64_t>(words[0]) << 32) | words[1];
}

struct Options {
  HarmonyParams params;

  // evaluate
  std::vector<std::string> colors;
  std::string file;
  std::string weights_text;
  bool json_flag = false;

  // generate
  double r = 0, phi = 0;
  int k = 3;
  std::uint64_t seed = 0;
  std::string pattern;
  std::string layout = "strip";

  // sweep
  std::string phi_range, r_range;
  int trials = 100;

  std::string format = "text";
  std::string output;
};

void add_param_flags(CLI::App& app, HarmonyParams& p) {
  const std::string group = "Model parameters";
  app.add_option("--k_h", p.k_h, "Base hue spread (deg)")->group(group)->capture_default_str();
  app.add_option("--k_N", p.k_N, "Neutral-color hue spread (deg)")->group(group)->capture_default_str();
  app.add_option("--gamma", p.gamma, "Neutral chroma scale")->group(group)->capture_default_str();
  app.add_option("--k_c", p.k_c, "Chroma uncertainty scale")->group(group)->capture_default_str();
  app.add_option("--k_L", p.k_L, "Lightness uncertainty scale")->group(group)->capture_default_str();
  app.add_option("--hue_db_threshold", p.hue_db_threshold, "Max hue D_B for harmony")
      ->group(group)
      ->capture_default_str();
  app.add_option("--ambiguity_db_threshold", p.ambiguity_db_threshold, "Min tone D_B to be distinct")
      ->group(group)
      ->capture_default_str();
  app.add_option("--t_line", p.t_line, "Inlier tolerance")->group(group)->capture_default_str();
  app.add_option("--maha_threshold", p.maha_threshold, "Generator snap gate")->group(group)->capture_default_str();
  app.add_option("--min_sep", p.min_sep, "Generator point separation")->group(group)->capture_default_str();
}

int write_image(const std::string& path, const Image& img, std::ostream& err) {
  if (path.empty()) {
    err << "error: --format png needs --output\n";
    return kExitUsage;
  }
  write_png(path, img);
  return kExitOk;
}

// Text goes to --output when given, otherwise to out.
void emit(const std::string& text, const std::string& path, std::ostream& out) {
  if (path.empty()) {
    out << text;
    return;
  }
  std::ofstream f(path);
  f << text;
  if (!f)
    throw HarmonyError("cannot write " + path);
}

int cmd_evaluate(const Options& o, std::ostream& out, std::ostream& err) {
  std::vector<Color> colors;
  std::vector<double> weights;
  if (!o.weights_text.empty()) {
    std::stringstream ss(o.weights_text);
    std::string item;
    while (std::getline(ss, item, ','))
      weights.push_back(parse_number(item, "--weights"));
  }
  if (!o.file.empty())
    load_palette_file(o.file, colors, weights);
  for (const std::string& token : o.colors)
    colors.push_back(parse_color(token));
  if (colors.empty()) {
    err << "error: no colors given\n";
    return kExitUsage;
  }
  if (!weights.empty() && weights.size() != colors.size()) {
    err << "error: " << weights.size() << " weights for " << colors.size() << " colors\n";
    return kExitUsage;
  }
  const HarmonyReport rep = evaluate_palette(colors, o.params, weights);
  const std::string format = o.json_flag ? "json" : o.format;
  if (format == "json") {
    emit(report_to_json(rep).dump(2) + "\n", o.output, out);
  } else if (format == "png") {
    std::vector<Color> ordered;
    for (const ColorDiagnostics& d : rep.per_color)
      ordered.push_back(d.color);
    if (const int rc = write_image(o.output, render_strip(ordered), err); rc != kExitOk)
      return rc;
  } else {
    std::ostringstream text;
    if (format == "ansi") {
      std::vector<Color> ordered;
      for (const ColorDiagnostics& d : rep.per_color)
        ordered.push_back(d.color);
      text << ansi_swatches(ordered) << "\n";
    }
    print_report(text, rep);
    emit(text.str(), o.output, out);
  }
  return rep.harmonic ? kExitOk : kExitInharmonic;
}

int cmd_generate(const Options& o, std::ostream& out, std::ostream& err) {
  if (!std::isfinite(o.r) || !std::isfinite(o.phi)) {
    err << "error: --r and --phi must be finite\n";
    return kExitUsage;
  }
  GenSpec spec{o.r, o.phi, o.k, o.seed, {}};
  if (!o.pattern.empty()) {
    spec.pattern_override = gen_pattern_from_string(o.pattern);
    if (!spec.pattern_override) {
      err << "error: unknown pattern '" << o.pattern << "'\n";
      return kExitUsage;
    }
  }
  if (o.layout == "circle" && o.k != 3) {
    err << "error: --layout circle needs --k 3\n";
    return kExitUsage;
  }
  const GenResult res = generate_line_palette(spec, o.params);
  if (o.format == "json") {
    emit(generation_to_json(spec, res).dump(2) + "\n", o.output, out);
  } else if (o.format == "png") {
    if (res.colors.empty()) {
      err << "no palette: " << res.reason << "\n";
      return kExitGenerationFailed;
    }
    const Image img = o.layout == "circle" ? render_circle(res.colors) : render_strip(res.colors);
    if (const int rc = write_image(o.output, img, err); rc != kExitOk)
      return rc;
  } else {
    std::ostringstream text;
    print_generation(text, spec, res);
    if (o.format == "ansi" && !res.colors.empty())
      text << "\n" << ansi_swatches(res.colors);
    emit(text.str(), o.output, out);
  }
  return res.colors.empty() ? kExitGenerationFailed : kExitOk;
}

int cmd_sweep(const Options& o, std::ostream& out, std::ostream& err) {
  const std::vector<double> phis = parse_range(o.phi_range, "--phi").values();
  const std::vector<double> rs = parse_range(o.r_range, "--r").values();
  if (o.trials < 1) {
    err << "error: --trials must be positive\n";
    return kExitUsage;
  }
  std::ostringstream csv;
  csv << "r,phi_deg,success_rate,round_trip_pass_rate\n";
  std::size_t cell = 0;
  for (double r : rs) {
    for (double phi : phis) {
      int ok = 0, pass = 0;
      for (int t = 0; t < o.trials; ++t) {
        const GenResult g = generate_line_palette({r, phi, o.k, trial_seed(o.seed, cell, t), {}}, o.params);
        if (g.colors.empty())
          continue;
        ++ok;
        pass += evaluate_tone_harmony(g.colors, o.params) == TonePattern::Line &&
                evaluate_hue_harmony(g.colors, o.params) != HuePattern::NoHarmony;
      }
      // the pass rate is undefined without a single successful generation
      csv << r << ',' << phi << ',' << static_cast<double>(ok) / o.trials << ',';
      if (ok > 0)
        csv << static_cast<double>(pass) / ok;
      csv << '\n';
      ++cell;
    }
  }
  emit(csv.str(), o.output, out);
  return kExitOk;
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  Options o;
  CLI::App app{"Uncertainty-based color harmony: evaluate and generate palettes", "chromaharmony"};
  app.require_subcommand(1);
  app.fallthrough();
  app.set_config("--config", "", "key = value file with parameter overrides")
      ->envname("CHROMAHARMONY_PARAMS");
  add_param_flags(app, o.params);

  const std::vector<std::string> formats{"text", "json", "png", "ansi"};

  CLI::App* evaluate = app.add_subcommand("evaluate", "Evaluate a palette in the given order");
  evaluate->add_option("colors", o.colors, "Colors as #RRGGBB or lch(L,c,h)");
  evaluate->add_option("--file", o.file, "Palette file (tokens or JSON)")->check(CLI::ExistingFile);
  evaluate->add_option("--weights", o.weights_text, "Comma-separated per-color weights (e.g. areas)");
  evaluate->add_flag("--json", o.json_flag, "Same as --format json");
  evaluate->add_option("--format", o.format)->check(CLI::IsMember(formats))->capture_default_str();
  evaluate->add_option("--output,-o", o.output, "Write to this file instead of stdout");

  CLI::App* generate = app.add_subcommand("generate", "Generate a palette whose tones follow a line");
  generate->add_option("--r", o.r, "Line distance from the origin")->required();
  generate->add_option("--phi", o.phi, "Line normal inclination (deg)")->required();
  generate->add_option("--k", o.k, "Number of colors")->capture_default_str();
  generate->add_option("--seed", o.seed)->capture_default_str();
  generate->add_option("--pattern", o.pattern, "Force analog, opposite, triad or incomplete_triad");
  generate->add_option("--format", o.format)->check(CLI::IsMember(formats))->capture_default_str();
  generate->add_option("--layout", o.layout, "PNG layout")
      ->check(CLI::IsMember({"strip", "circle"}))
      ->capture_default_str();
  generate->add_option("--output,-o", o.output, "Write to this file instead of stdout");

  CLI::App* sweep = app.add_subcommand("sweep", "Generation success over a grid of lines (CSV)");
  sweep->add_option("--phi", o.phi_range, "a, a:b or a:b:step (deg)")->required();
  sweep->add_option("--r", o.r_range, "a, a:b or a:b:step")->required();
  sweep->add_option("--k", o.k)->capture_default_str();
  sweep->add_option("--trials", o.trials, "Generations per grid cell")->capture_default_str();
  sweep->add_option("--seed", o.seed)->capture_default_str();
  sweep->add_option("--output,-o", o.output, "Write the CSV to this file");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e, out, err);
    return rc == 0 ? kExitOk : kExitUsage;
  }

  try {
    o.params.validate();
    if (evaluate->parsed())
      return cmd_evaluate(o, out, err);
    if (generate->parsed())
      return cmd_generate(o, out, err);
    return cmd_sweep(o, out, err);
  } catch (const HarmonyError& e) {
    err << "error: " << e.what() << "\n";
  }
  return kExitUsage;
}

}  // namespace chromaharmony
