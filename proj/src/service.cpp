#include "chromaharmony/service.hpp"

#include "chromaharmony/palette_gen.hpp"

#include <httplib.h>

#include <charconv>
#include <cstdlib>
#include <iostream>
#include <random>

namespace chromaharmony {

namespace {

constexpr int kMaxGenerateK = 16;
constexpr int kMaxSuggestions = 50;
constexpr int kDefaultSuggestions = 5;

ApiResponse error(int status, const std::string& message, const std::string& field = {}) {
  json body = {{"error", message}};
  if (!field.empty())
    body["field"] = field;
  return {status, std::move(body)};
}

ApiResponse parse_error(const ParseError& e) {
  ApiResponse r = error(400, e.what(), e.path());
  r.body["token"] = e.token();
  return r;
}

// Empty bodies read as {} so that optional-only endpoints accept them.
std::optional<json> parse_body(std::string_view body) {
  if (body.find_first_not_of(" \t\r\n") == std::string_view::npos)
    return json::object();
  json j = json::parse(body, nullptr, false);
  if (j.is_discarded())
    return std::nullopt;
  return j;
}

std::string new_session_id() {
  static thread_local std::mt19937_64 rng{std::random_device{}()};
  static constexpr char kAlphabet[] = "0123456789abcdefghijklmnopqrstuvwxyz";
  std::string id(22, '0');
  std::uniform_int_distribution<int> pick(0, 35);
  for (char& ch : id)
    ch = kAlphabet[pick(rng)];
  return id;
}

std::optional<int> env_int(const char* name) {
  const char* v = std::getenv(name);
  if (!v || !*v)
    return std::nullopt;
  int out = 0;
  const std::string_view s(v);
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
  if (ec != std::errc() || ptr != s.data() + s.size())
    throw HarmonyError(std::string(name) + ": not an integer: " + v);
  return out;
}

}  // namespace

ServiceConfig ServiceConfig::from_env() {
  ServiceConfig c;
  if (const char* host = std::getenv("CHROMAHARMONY_HOST"); host && *host)
    c.host = host;
  if (const auto port = env_int("CHROMAHARMONY_PORT"))
    c.port = *port;
  if (const auto ttl = env_int("CHROMAHARMONY_TTL"))
    c.ttl = std::chrono::seconds(*ttl);
  if (const char* origin = std::getenv("CHROMAHARMONY_CORS_ORIGIN"); origin && *origin)
    c.cors_origin = origin;
  if (c.port < 0 || c.port > 65535 || c.ttl.count() <= 0)
    throw HarmonyError("invalid service configuration");
  return c;
}

Api::Api(ServiceConfig config, Clock clock) : config_(std::move(config)), clock_(std::move(clock)) {}

ApiResponse Api::evaluate(std::string_view body) const {
  const auto req = parse_body(body);
  if (!req || !req->is_object())
    return error(400, "body must be a JSON object");
  if (!req->contains("colors") || !(*req)["colors"].is_array())
    return error(400, "colors must be a list", "colors");
  try {
    const json& list = (*req)["colors"];
    if (list.empty())
      return error(422, "colors must not be empty", "colors");
    std::vector<Color> colors;
    for (std::size_t i = 0; i < list.size(); ++i)
      colors.push_back(color_from_json(list[i], "colors[" + std::to_string(i) + "]"));
    const HarmonyParams p = params_from_json(req->value("params", json()));
    std::vector<double> weights;
    if (req->contains("weights")) {
      const json& w = (*req)["weights"];
      if (!w.is_array() || w.size() != colors.size())
        return error(400, "weights must be a list with one number per color", "weights");
      for (std::size_t i = 0; i < w.size(); ++i) {
        if (!w[i].is_number())
          return error(400, "weights must be numbers", "weights[" + std::to_string(i) + "]");
        weights.push_back(w[i].get<double>());
      }
    }
    return {200, report_to_json(evaluate_palette(colors, p, weights))};
  } catch (const ParseError& e) {
    return parse_error(e);
  }
}

ApiResponse Api::generate(std::string_view body) const {
  const auto req = parse_body(body);
  if (!req || !req->is_object())
    return error(400, "body must be a JSON object");
  GenSpec spec;
  for (const char* key : {"r", "phi"}) {
    if (!req->contains(key) || !(*req)[key].is_number())
      return error(400, std::string(key) + " must be a number", key);
  }
  spec.r = (*req)["r"].get<double>();
  spec.phi_deg = (*req)["phi"].get<double>();
  if (req->contains("k")) {
    const json& k = (*req)["k"];
    if (!k.is_number_integer())
      return error(400, "k must be an integer", "k");
    spec.k = k.get<int>();
  }
  if (spec.k < 2 || spec.k > kMaxGenerateK)
    return error(400, "k must be in [2, " + std::to_string(kMaxGenerateK) + "]", "k");
  if (req->contains("seed")) {
    const json& seed = (*req)["seed"];
    if (!seed.is_number_unsigned())
      return error(400, "seed must be a non-negative integer", "seed");
    spec.seed = seed.get<std::uint64_t>();
  }
  if (req->contains("pattern") && !(*req)["pattern"].is_null()) {
    const json& pat = (*req)["pattern"];
    spec.pattern_override = pat.is_string() ? gen_pattern_from_string(pat.get<std::string>()) : std::nullopt;
    if (!spec.pattern_override)
      return error(400, "pattern must be analog, opposite, triad or incomplete_triad", "pattern");
  }
  try {
    const HarmonyParams p = params_from_json(req->value("params", json()));
    return {200, generation_to_json(spec, generate_line_palette(spec, p))};
  } catch (const ParseError& e) {
    return parse_error(e);
  }
}

ApiResponse Api::create_session(std::string_view body) {
  purge_expired();
  const auto req = parse_body(body);
  if (!req || !req->is_object())
    return error(400, "body must be a JSON object");
  try {
    const HarmonyParams p = params_from_json(req->value("params", json()));
    std::string id = new_session_id();
    auto entry = std::make_shared<Entry>(Session(p, id));
    if (req->contains("colors")) {
      const json& list = (*req)["colors"];
      if (!list.is_array())
        return error(400, "colors must be a list", "colors");
      for (std::size_t i = 0; i < list.size(); ++i)
        entry->session.add(color_from_json(list[i], "colors[" + std::to_string(i) + "]"));
    }
    ApiResponse out = session_view(*entry);
    out.status = 201;
    std::lock_guard lock(store_mutex_);
    entry->last_touched = clock_();
    sessions_.emplace(std::move(id), std::move(entry));
    return out;
  } catch (const ParseError& e) {
    return parse_error(e);
  }
}

std::shared_ptr<Api::Entry> Api::find(const std::string& id) {
  std::lock_guard lock(store_mutex_);
  const auto it = sessions_.find(id);
  if (it == sessions_.end())
    return nullptr;
  const auto now = clock_();
  if (now - it->second->last_touched > config_.ttl) {
    sessions_.erase(it);
    return nullptr;
  }
  it->second->last_touched = now;
  return it->second;
}

ApiResponse Api::session_view(const Entry& entry) const {
  const Session& s = entry.session;
  json colors = json::array();
  for (const Color& c : s.colors())
    colors.push_back(color_to_json(c));
  return {200,
          {{"schema_version", kSchemaVersion},
           {"session_id", s.id()},
           {"ttl_s", config_.ttl.count()},
           {"params", params_to_json(s.params())},
           {"colors", std::move(colors)},
           {"report", s.empty() ? json(nullptr) : report_to_json(s.report())}}};
}

ApiResponse Api::add_color(const std::string& id, std::string_view body) {
  const auto entry = find(id);
  if (!entry)
    return error(404, "unknown or expired session");
  const auto req = parse_body(body);
  if (!req || !req->is_object() || !req->contains("color"))
    return error(400, "body must be {\"color\": ...}", "color");
  std::unique_lock lock(entry->mutex, std::try_to_lock);
  if (!lock.owns_lock())
    return error(409, "session is being modified by another request");
  try {
    entry->session.add(color_from_json((*req)["color"], "color"));
    return session_view(*entry);
  } catch (const ParseError& e) {
    return parse_error(e);
  }
}

ApiResponse Api::undo(const std::string& id) {
  const auto entry = find(id);
  if (!entry)
    return error(404, "unknown or expired session");
  std::unique_lock lock(entry->mutex, std::try_to_lock);
  if (!lock.owns_lock())
    return error(409, "session is being modified by another request");
  if (!entry->session.undo())
    return error(422, "session has no colors");
  return session_view(*entry);
}

ApiResponse Api::report(const std::string& id) {
  const auto entry = find(id);
  if (!entry)
    return error(404, "unknown or expired session");
  std::lock_guard lock(entry->mutex);
  return session_view(*entry);
}

ApiResponse Api::suggestions(const std::string& id, std::optional<std::string_view> n_text) {
  const auto entry = find(id);
  if (!entry)
    return error(404, "unknown or expired session");
  int n = kDefaultSuggestions;
  if (n_text) {
    const auto [ptr, ec] = std::from_chars(n_text->data(), n_text->data() + n_text->size(), n);
    if (ec != std::errc() || ptr != n_text->data() + n_text->size() || n < 0 || n > kMaxSuggestions)
      return error(400, "n must be an integer in [0, " + std::to_string(kMaxSuggestions) + "]", "n");
  }
  std::optional<Session> snapshot;
  {
    std::lock_guard lock(entry->mutex);
    snapshot = entry->session;
  }
  if (snapshot->empty())
    return error(422, "session has no colors");
  return {200, suggestions_to_json(suggest_next(*snapshot, static_cast<std::size_t>(n)))};
}

std::size_t Api::purge_expired() {
  std::lock_guard lock(store_mutex_);
  const auto now = clock_();
  return std::erase_if(sessions_, [&](const auto& kv) { return now - kv.second->last_touched > config_.ttl; });
}

std::size_t Api::session_count() const {
  std::lock_guard lock(store_mutex_);
  return sessions_.size();
}

void bind_routes(httplib::Server& server, Api& api) {
  const std::string origin = api.config().cors_origin;
  server.set_default_headers({{"Access-Control-Allow-Origin", origin}, {"Vary", "Origin"}});

  auto send = [](httplib::Response& res, const ApiResponse& r) {
    res.status = r.status;
    res.set_content(r.body.dump(), "application/json");
  };

  server.Options(R"(/api/.*)", [](const httplib::Request&, httplib::Response& res) {
    res.status = 204;
    res.set_header("Access-Control-Allow-Methods", "GET, POST, DELETE, OPTIONS");
    res.set_header("Access-Control-Allow-Headers", "Content-Type");
    res.set_header("Access-Control-Max-Age", "600");
  });
  server.Get("/healthz", [](const httplib::Request&, httplib::Response& res) {
    res.set_content("ok", "text/plain");
  });
  server.Post("/api/evaluate", [&api, send](const httplib::Request& req, httplib::Response& res) {
    send(res, api.evaluate(req.body));
  });
  server.Post("/api/generate", [&api, send](const httplib::Request& req, httplib::Response& res) {
    send(res, api.generate(req.body));
  });
  server.Post("/api/sessions", [&api, send](const httplib::Request& req, httplib::Response& res) {
    send(res, api.create_session(req.body));
  });
  server.Post(R"(/api/sessions/([A-Za-z0-9_-]+)/colors)",
              [&api, send](const httplib::Request& req, httplib::Response& res) {
                send(res, api.add_color(req.matches[1], req.body));
              });
  server.Delete(R"(/api/sessions/([A-Za-z0-9_-]+)/colors/last)",
                [&api, send](const httplib::Request& req, httplib::Response& res) {
                  send(res, api.undo(req.matches[1]));
                });
  server.Get(R"(/api/sessions/([A-Za-z0-9_-]+)/report)",
             [&api, send](const httplib::Request& req, httplib::Response& res) {
               send(res, api.report(req.matches[1]));
             });
  server.Get(R"(/api/sessions/([A-Za-z0-9_-]+)/suggestions)",
             [&api, send](const httplib::Request& req, httplib::Response& res) {
               std::optional<std::string_view> n;
               const std::string n_text = req.get_param_value("n");
               if (req.has_param("n"))
                 n = n_text;
               send(res, api.suggestions(req.matches[1], n));
             });
  server.set_exception_handler([send](const httplib::Request&, httplib::Response& res, std::exception_ptr ep) {
    std::string what = "internal error";
    try {
      std::rethrow_exception(ep);
    } catch (const std::exception& e) {
      what = e.what();
    } catch (...) {
    }
    send(res, error(500, what));
  });
}

int run_server(const ServiceConfig& config) {
  Api api(config);
  httplib::Server server;
  bind_routes(server, api);
  std::cerr << "chromaharmony: listening on " << config.host << ":" << config.port << "\n";
  if (!server.listen(config.host, config.port)) {
    std::cerr << "chromaharmony: cannot listen on " << config.host << ":" << config.port << "\n";
    return 1;
  }
  return 0;
}

}  // namespace chromaharmony
