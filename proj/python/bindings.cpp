// Python module: the service handlers, exchanged as JSON text.
#include <pybind11/pybind11.h>

#include "causalbounds/service.hpp"

namespace py = pybind11;
using namespace causalbounds;

namespace {

// Returns (status, body); the GIL is released while the engine runs.
py::tuple call(ServiceResponse (*handler)(const Json&, const ServiceOptions&), const std::string& request) {
  ServiceResponse r;
  {
    py::gil_scoped_release release;
    Json j = Json::parse(request, nullptr, false);
    if (j.is_discarded() || !j.is_object())
      r = error_response(Error(ErrorKind::Validation, "BAD_JSON", "request body must be a JSON object"));
    else
      r = handler(j, ServiceOptions{});
  }
  return py::make_tuple(r.status, r.body.dump());
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Exact symbolic bounds on causal effects";
  m.def("analyze", [](const std::string& req) { return call(handle_analyze, req); }, py::arg("request"));
  m.def("evaluate", [](const std::string& req) { return call(handle_evaluate, req); }, py::arg("request"));
  m.def("simulate", [](const std::string& req) { return call(handle_simulate, req); }, py::arg("request"));
  m.def("health", [] { return handle_health().body.dump(); });
}
