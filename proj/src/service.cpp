#include "causalbounds/service.hpp"

#include <httplib.h>

#include <chrono>
#include <cmath>
#include <iostream>

namespace causalbounds {

ServiceResponse error_response(const Error& e) {
  int status = 400;
  if (e.kind() == ErrorKind::Timeout || e.kind() == ErrorKind::Cancelled) status = 408;
  if (e.kind() == ErrorKind::Internal) status = 500;
  return {status, Json{{"status", "error"}, {"error", error_to_json(e)}}};
}

namespace {

std::string text_field(const Json& req, const char* key, bool required = false) {
  if (!req.contains(key) || req.at(key).is_null()) {
    if (required) throw Error(ErrorKind::Validation, "MISSING_FIELD", std::string("request field '") + key + "' is required");
    return {};
  }
  if (!req.at(key).is_string())
    throw Error(ErrorKind::Validation, "INVALID_FIELD", std::string("request field '") + key + "' must be a string");
  return req.at(key).get<std::string>();
}

CancelToken request_token(const Json& req, const ServiceOptions& options) {
  double timeout = options.default_timeout_seconds;
  if (req.contains("options") && req.at("options").contains("timeout")) {
    const auto& t = req.at("options").at("timeout");
    if (!t.is_number() || !(t.get<double>() > 0))
      throw Error(ErrorKind::Validation, "INVALID_TIMEOUT", "timeout must be a positive number of seconds");
    timeout = t.get<double>();
  }
  return CancelToken::with_timeout(std::chrono::duration<double>(timeout));
}

struct Analysis {
  LinearCausalProblem problem;
  SymbolicBoundPair bounds;
  bool default_effect = false;
};

Analysis analyze(const Json& req, const CancelToken& cancel, const std::string& constraints_key = "constraints") {
  Analysis a;
  auto graph = parse_graph_spec(text_field(req, "graph", true));
  std::string effect = text_field(req, "effect");
  a.default_effect = effect.find_first_not_of(" \t\r\n") == std::string::npos;
  a.problem = analyze_graph(graph, text_field(req, constraints_key.c_str()), effect, cancel);
  a.bounds = optimize_effect(a.problem, cancel);
  return a;
}

template <class F>
ServiceResponse guarded(F&& f) {
  try {
    return f();
  } catch (const Error& e) {
    return error_response(e);
  } catch (const nlohmann::json::exception& e) {
    return error_response(Error(ErrorKind::Syntax, "SYNTAX_ERROR", std::string("malformed request: ") + e.what()));
  } catch (const std::exception& e) {
    return error_response(Error(ErrorKind::Internal, "INTERNAL", e.what()));
  }
}

}  // namespace

ServiceResponse handle_analyze(const Json& req, const ServiceOptions& options) {
  return guarded([&] {
    auto cancel = request_token(req, options);
    std::vector<std::string> emit{"json"};
    if (req.contains("options") && req.at("options").contains("emit")) {
      emit = req.at("options").at("emit").get<std::vector<std::string>>();
      if (emit.empty()) throw Error(ErrorKind::Validation, "INVALID_EMIT", "at least one emit target is required");
      for (const auto& e : emit)
        if (e != "json" && e != "text" && e != "latex")
          throw Error(ErrorKind::Validation, "INVALID_EMIT", "unknown emit target '" + e + "'");
    }
    auto a = analyze(req, cancel);
    Json body;
    body["status"] = "ok";
    body["effect"] = a.problem.effect_text;
    body["default_effect"] = a.default_effect;
    body["bounds"] = bounds_to_json(a.bounds);
    Json params = Json::array();
    for (const auto& p : a.problem.parameters) params.push_back({{"name", p.name}, {"interpretation", p.interpretation}});
    body["parameters"] = std::move(params);
    body["constraint_strings"] = a.problem.constraint_strings;
    body["graph"] = format_graph_spec(a.problem.graph);
    for (const auto& e : emit) {
      if (e == "text") body["text"] = format_bounds_text(a.bounds);
      if (e == "latex") body["latex"] = latex_bounds(a.bounds);
    }
    body["logs"] = a.bounds.logs;
    body["timing"] = {{"vertex_enumeration_ms", a.bounds.elapsed_ms}};
    body["warnings"] = Json::array();
    return ServiceResponse{200, std::move(body)};
  });
}

ServiceResponse handle_evaluate(const Json& req, const ServiceOptions& options) {
  return guarded([&] {
    if (!req.contains("params") || !req.at("params").is_object())
      throw Error(ErrorKind::Validation, "MISSING_FIELD", "request field 'params' must be an object");
    SymbolicBoundPair b;
    if (req.contains("bounds"))
      b = bounds_from_json(req.at("bounds"));
    else
      b = analyze(req, request_token(req, options)).bounds;

    std::map<std::string, double> values;
    std::map<std::string, Rational> exact;
    bool all_exact = true;
    for (const auto& [name, v] : req.at("params").items()) {
      if (v.is_string()) {
        auto parsed = parse_parameter_values(name + " = " + v.get<std::string>());
        exact[name] = parsed.at(name);
        values[name] = to_double(exact[name]);
      } else if (v.is_number()) {
        values[name] = v.get<double>();
        all_exact = false;
      } else {
        throw Error(ErrorKind::Validation, "INVALID_FIELD", "value of " + name + " must be a number or string");
      }
    }
    auto r = evaluate_bounds(b, values);
    Json body{{"status", "ok"}, {"lower", r.lower}, {"upper", r.upper}, {"warnings", r.warnings}};
    if (all_exact && !exact.empty()) {
      auto x = evaluate_bounds_exact(b, exact);
      body["lower_exact"] = to_string(x.lower);
      body["upper_exact"] = to_string(x.upper);
    }
    return ServiceResponse{200, std::move(body)};
  });
}

ServiceResponse handle_simulate(const Json& req, const ServiceOptions& options) {
  return guarded([&] {
    auto cancel = request_token(req, options);
    SimulationOptions so;
    so.draws = req.value("draws", std::size_t{1000});
    so.seed = req.value("seed", std::uint64_t{1});
    if (req.contains("draws") && (!req.at("draws").is_number_integer() || req.at("draws").get<long long>() < 1))
      throw Error(ErrorKind::Validation, "INVALID_DRAWS", "draws must be a positive integer");
    auto a = analyze(req, cancel);
    std::optional<Analysis> base;
    if (req.contains("baseline_constraints")) {
      base = analyze(req, cancel, "baseline_constraints");
      so.baseline = &base->bounds;
    }
    auto report = simulate_bounds(a.problem, a.bounds, so, cancel);
    Json body{{"status", "ok"}, {"effect", a.problem.effect_text}};
    body["report"] = simulation_to_json(report, req.value("include_draws", false));
    return ServiceResponse{200, std::move(body)};
  });
}

ServiceResponse handle_health() {
  return {200, Json{{"status", "ok"}, {"service", "causalbounds"}, {"version", "0.1.0"}}};
}

ServiceResponse dispatch(const std::string& method, const std::string& path, const std::string& body,
                         const ServiceOptions& options) {
  if (method == "GET" && path == "/api/health") return handle_health();
  using Handler = ServiceResponse (*)(const Json&, const ServiceOptions&);
  Handler h = nullptr;
  if (path == "/api/analyze") h = handle_analyze;
  if (path == "/api/evaluate") h = handle_evaluate;
  if (path == "/api/simulate") h = handle_simulate;
  if (!h) return {404, Json{{"status", "error"}, {"error", {{"kind", "syntax"}, {"code", "NOT_FOUND"}, {"message", "no such endpoint"}}}}};
  if (method != "POST")
    return {405, Json{{"status", "error"}, {"error", {{"kind", "syntax"}, {"code", "METHOD_NOT_ALLOWED"}, {"message", "use POST"}}}}};
  Json req;
  try {
    req = Json::parse(body);
  } catch (const nlohmann::json::parse_error& e) {
    return error_response(Error(ErrorKind::Syntax, "SYNTAX_ERROR", std::string("request body is not JSON: ") + e.what()));
  }
  if (!req.is_object())
    return error_response(Error(ErrorKind::Syntax, "SYNTAX_ERROR", "request body must be a JSON object"));
  return h(req, options);
}

void run_server(const std::string& host, int port, const ServiceOptions& options) {
  httplib::Server server;
  auto cors = [&](httplib::Response& res) {
    res.set_header("Access-Control-Allow-Origin", options.allowed_origin);
    res.set_header("Access-Control-Allow-Methods", "GET, POST, OPTIONS");
    res.set_header("Access-Control-Allow-Headers", "Content-Type");
  };
  auto route = [&](const httplib::Request& req, httplib::Response& res) {
    auto r = dispatch(req.method, req.path, req.body, options);
    cors(res);
    res.status = r.status;
    res.set_content(r.body.dump(2), "application/json");
  };
  server.Get("/api/health", route);
  server.Post(R"(/api/.*)", route);
  server.Options(R"(/api/.*)", [&](const httplib::Request&, httplib::Response& res) {
    cors(res);
    res.status = 204;
  });
  if (!options.static_dir.empty()) server.set_mount_point("/", options.static_dir);
  std::cerr << "listening on http://" << host << ":" << port << "\n";
  if (!server.listen(host, port)) throw Error(ErrorKind::Internal, "LISTEN_FAILED", "could not bind " + host + ":" + std::to_string(port));
}

}  // namespace causalbounds
