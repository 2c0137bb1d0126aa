#pragma once

#include <string>

#include "causalbounds/serialize.hpp"

namespace causalbounds {

struct ServiceOptions {
  double default_timeout_seconds = 120;
  std::string allowed_origin = "*";
  std::string static_dir;  // served at / when nonempty
};

struct ServiceResponse {
  int status = 200;
  Json body;
};

/// Request: {"graph": spec text, "effect"?: query, "constraints"?: text,
///           "options"?: {"emit": ["json", "text", "latex"], "timeout": seconds}}
ServiceResponse handle_analyze(const Json& request, const ServiceOptions& options = {});
/// Either {"bounds": <bounds JSON>, "params": {...}} or an analyze request
/// plus "params". Values may be numbers or exact strings ("1426/1888").
ServiceResponse handle_evaluate(const Json& request, const ServiceOptions& options = {});
/// Analyze request plus {"draws", "seed", "baseline_constraints"?, "include_draws"?}.
ServiceResponse handle_simulate(const Json& request, const ServiceOptions& options = {});
ServiceResponse handle_health();

/// Routes a raw request without any networking; used by the server and tests.
ServiceResponse dispatch(const std::string& method, const std::string& path, const std::string& body,
                         const ServiceOptions& options = {});

/// Maps an Error onto 400 / 408 / 500 with a structured body.
ServiceResponse error_response(const Error& e);

/// Blocks serving HTTP on host:port.
void run_server(const std::string& host, int port, const ServiceOptions& options = {});

}  // namespace causalbounds
