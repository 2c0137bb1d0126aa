#include <doctest.h>
#include <httplib.h>

#include <csignal>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <sys/wait.h>
#include <thread>
#include <unistd.h>

#include "causalbounds/service.hpp"

using namespace causalbounds;

namespace {

const char* kIv = "node Z side=left\nnode X exposure\nnode Y outcome\nedge Z -> X\nedge X -> Y\n";

std::string run_capture(const std::string& cmd) {
  std::string out;
  FILE* f = popen(cmd.c_str(), "r");
  REQUIRE(f != nullptr);
  char buf[4096];
  std::size_t n;
  while ((n = fread(buf, 1, sizeof buf, f)) > 0) out.append(buf, n);
  pclose(f);
  return out;
}

}  // namespace

TEST_SUITE("service") {
  TEST_CASE("analyze the instrumental variable graph") {
    Json req{{"graph", kIv}, {"effect", "p{Y(X = 1) = 1} - p{Y(X = 0) = 1}"}, {"options", {{"emit", {"json", "latex", "text"}}}}};
    auto r = handle_analyze(req);
    REQUIRE(r.status == 200);
    CHECK(r.body["bounds"]["lower"].size() == 8);
    CHECK(r.body["bounds"]["upper"].size() == 8);
    CHECK(r.body["parameters"][0]["name"] == "p00_0");
    CHECK(r.body["parameters"][0]["interpretation"] == "P(X = 0, Y = 0 | Z = 0)");
    CHECK(r.body["latex"].get<std::string>().find("\\begin{align*}") == 0);
    CHECK(r.body["text"].get<std::string>().find("MAX {") != std::string::npos);
    CHECK(r.body["default_effect"] == false);
    // Identical inputs, identical payloads.
    CHECK(handle_analyze(req).body["bounds"].dump() == r.body["bounds"].dump());
  }

  TEST_CASE("default query is echoed") {
    auto r = handle_analyze(Json{{"graph", kIv}});
    REQUIRE(r.status == 200);
    CHECK(r.body["default_effect"] == true);
    CHECK(r.body["effect"] == "p{Y(X = 1) = 1} - p{Y(X = 0) = 1}");
  }

  TEST_CASE("structured errors") {
    auto r = handle_analyze(Json{{"graph", "node Z side=left\nnode X\nnode Y\nedge X -> Z\nedge X -> Y"},
                                 {"effect", "p{Y(X = 1) = 1}"}});
    CHECK(r.status == 400);
    bool found = false;
    for (const auto& v : r.body["error"]["violations"]) found = found || v["code"] == "RIGHT_TO_LEFT";
    CHECK(found);

    auto syntax = handle_analyze(Json{{"graph", kIv}, {"effect", "p{Y(X = 1) = 1"}});
    CHECK(syntax.status == 400);
    CHECK(syntax.body["error"]["kind"] == "syntax");
    CHECK(syntax.body["error"].contains("column"));

    CHECK(dispatch("POST", "/api/analyze", "{not json").status == 400);
    CHECK(dispatch("POST", "/api/analyze", "[1, 2]").status == 400);
    CHECK(dispatch("POST", "/api/analyze", "{}").status == 400);
    CHECK(dispatch("GET", "/api/nothing", "").status == 404);
    CHECK(dispatch("GET", "/api/health", "").body["status"] == "ok");
  }

  TEST_CASE("timeouts map to 408") {
    Json req{{"graph", kIv}, {"options", {{"timeout", 1e-9}}}};
    auto r = handle_analyze(req);
    CHECK(r.status == 408);
    CHECK(r.body["error"]["code"] == "TIMEOUT");
    CHECK(handle_analyze(Json{{"graph", kIv}, {"options", {{"timeout", -1}}}}).status == 400);
  }

  TEST_CASE("evaluate with exact values and with a bounds object") {
    std::string mediation = "node X side=left\nnode Y\nnode M\nedge X -> M\nedge X -> Y\nedge M -> Y\n";
    Json params{{"p00_0", "1426/1888"}, {"p10_0", "97/1888"},  {"p01_0", "332/1888"}, {"p11_0", "33/1888"},
                {"p00_1", "1081/1918"}, {"p10_1", "86/1918"}, {"p01_1", "669/1918"}, {"p11_1", "82/1918"}};
    Json req{{"graph", mediation},
             {"effect", "p{Y(M = 1, X = 1) = 1} - p{Y(M = 1, X = 0) = 1}"},
             {"params", params}};
    auto r = handle_evaluate(req);
    REQUIRE(r.status == 200);
    CHECK(std::abs(r.body["lower"].get<double>() + 0.78) < 0.005);
    CHECK(std::abs(r.body["upper"].get<double>() - 0.63) < 0.005);
    CHECK(r.body.contains("lower_exact"));

    auto analyzed = handle_analyze(Json{{"graph", kIv}});
    Json values = Json::object();
    for (const auto& p : analyzed.body["parameters"]) values[p["name"].get<std::string>()] = 0.25;
    auto e = handle_evaluate(Json{{"bounds", analyzed.body["bounds"]}, {"params", values}});
    REQUIRE(e.status == 200);
    CHECK(e.body["lower"].get<double>() == doctest::Approx(-0.5));
    CHECK(e.body["upper"].get<double>() == doctest::Approx(0.5));
    values.erase("p00_0");
    CHECK(handle_evaluate(Json{{"bounds", analyzed.body["bounds"]}, {"params", values}}).status == 400);
  }

  TEST_CASE("simulate") {
    auto r = handle_simulate(Json{{"graph", kIv}, {"draws", 200}, {"seed", 9},
                                  {"constraints", "X(Z = 1) >= X(Z = 0)"}, {"baseline_constraints", ""}});
    REQUIRE(r.status == 200);
    CHECK(r.body["report"]["violations"] == 0);
    CHECK(r.body["report"]["wider_than_baseline"] == 0);
    CHECK(handle_simulate(Json{{"graph", kIv}, {"draws", 0}}).status == 400);
  }

  TEST_CASE("CLI and service emit byte-identical bounds JSON") {
    auto cli = run_capture(std::string(CLI_PATH) + " bounds --emit json --graph " FIXTURES_DIR "/iv.graph");
    std::ifstream in(FIXTURES_DIR "/iv.graph");
    std::stringstream spec;
    spec << in.rdbuf();
    auto r = handle_analyze(Json{{"graph", spec.str()}});
    REQUIRE(r.status == 200);
    CHECK(cli == r.body["bounds"].dump(2) + "\n");
  }

  TEST_CASE("HTTP server with CORS") {
    int port = 18000 + static_cast<int>(getpid() % 1000);
    pid_t pid = fork();
    REQUIRE(pid >= 0);
    if (pid == 0) {
      execl(CLI_PATH, CLI_PATH, "serve", "--port", std::to_string(port).c_str(), static_cast<char*>(nullptr));
      _exit(127);
    }
    httplib::Client client("127.0.0.1", port);
    httplib::Result health;
    for (int i = 0; i < 100 && !health; ++i) {
      std::this_thread::sleep_for(std::chrono::milliseconds(50));
      health = client.Get("/api/health");
    }
    REQUIRE(health);
    CHECK(health->status == 200);
    CHECK(health->get_header_value("Access-Control-Allow-Origin") == "*");
    auto res = client.Post("/api/analyze", Json{{"graph", kIv}}.dump(), "application/json");
    REQUIRE(res);
    CHECK(res->status == 200);
    CHECK(Json::parse(res->body)["bounds"]["lower"].size() == 8);
    auto bad = client.Post("/api/analyze", "{}", "application/json");
    REQUIRE(bad);
    CHECK(bad->status == 400);
    auto pre = client.Options("/api/analyze");
    REQUIRE(pre);
    CHECK(pre->get_header_value("Access-Control-Allow-Methods").find("POST") != std::string::npos);
    kill(pid, SIGTERM);
    waitpid(pid, nullptr, 0);
  }
}
