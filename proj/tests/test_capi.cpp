#include <cstring>
#include <string>
#include <thread>
#include <vector>

#include "doctest.h"
#include "json.hpp"
#include "kontact/kontact.h"

using nlohmann::json;

namespace {

struct Space {
  kontact_space* s = nullptr;
  Space(std::vector<const char*> vars, std::vector<const char*> consts = {}) {
    REQUIRE(kontact_space_new(vars.data(), vars.size(), consts.data(), consts.size(), &s) == KONTACT_OK);
  }
  ~Space() { kontact_space_free(s); }
};

struct E {
  kontact_expr* e = nullptr;
  ~E() { kontact_expr_free(e); }
};

std::string str(const kontact_expr* e) {
  char* out = nullptr;
  REQUIRE(kontact_expr_str(e, &out) == KONTACT_OK);
  std::string r(out);
  kontact_string_free(out);
  return r;
}

struct Run {
  int exit = -1;
  std::string out, err;
  kontact_status status;
};

Run run(const char* cmd, const json& req) {
  Run r;
  char* out = nullptr;
  char* err = nullptr;
  r.status = kontact_run(cmd, req.dump().c_str(), &out, &err, &r.exit);
  if (r.status == KONTACT_OK) {
    r.out = out;
    r.err = err;
    kontact_string_free(out);
    kontact_string_free(err);
  }
  return r;
}

}  // namespace

TEST_CASE("expression round trip") {
  Space sp({"x", "y"}, {"b"});
  E a, b, sum, prod, q, d;
  REQUIRE(kontact_expr_parse(sp.s, "x^2 - b*y", &a.e) == KONTACT_OK);
  REQUIRE(kontact_expr_parse(sp.s, "y + x", &b.e) == KONTACT_OK);
  REQUIRE(kontact_expr_add(a.e, b.e, &sum.e) == KONTACT_OK);
  REQUIRE(kontact_expr_mul(a.e, b.e, &prod.e) == KONTACT_OK);
  REQUIRE(kontact_expr_div(prod.e, b.e, &q.e) == KONTACT_OK);
  int eq = 0;
  REQUIRE(kontact_expr_equal(q.e, a.e, &eq) == KONTACT_OK);
  CHECK(eq == 1);
  REQUIRE(kontact_expr_equal(sum.e, a.e, &eq) == KONTACT_OK);
  CHECK(eq == 0);
  REQUIRE(kontact_expr_diff(a.e, "x", &d.e) == KONTACT_OK);
  CHECK(str(d.e) == "2*x");

  const char* names[] = {"x", "y", "b"};
  double vals[] = {2, 3, 0.5};
  double v = 0;
  REQUIRE(kontact_expr_eval(sum.e, names, vals, 3, &v) == KONTACT_OK);
  CHECK(v == doctest::Approx(4 - 1.5 + 5));
}

TEST_CASE("errors map to status codes") {
  Space sp({"x"});
  E e, z, r;
  CHECK(kontact_expr_parse(sp.s, "x +", &e.e) == KONTACT_SYNTAX_ERROR);
  CHECK(std::string(kontact_last_error()).find("SyntaxError") != std::string::npos);
  CHECK(kontact_expr_parse(sp.s, "w", &e.e) == KONTACT_UNKNOWN_SYMBOL);
  REQUIRE(kontact_expr_parse(sp.s, "x", &e.e) == KONTACT_OK);
  CHECK(std::string(kontact_last_error()).empty());
  REQUIRE(kontact_expr_parse(sp.s, "0", &z.e) == KONTACT_OK);
  CHECK(kontact_expr_div(e.e, z.e, &r.e) == KONTACT_ZERO_DENOMINATOR);
  CHECK(kontact_expr_diff(e.e, "q", &r.e) == KONTACT_UNKNOWN_SYMBOL);
  double v;
  CHECK(kontact_expr_eval(e.e, nullptr, nullptr, 0, &v) == KONTACT_UNBOUND_SYMBOL);
  CHECK(kontact_expr_parse(nullptr, "x", &r.e) == KONTACT_NULL_ARGUMENT);
  CHECK(std::string(kontact_status_name(KONTACT_NOT_KCONTACT)) == "NotKContact");
  CHECK(std::string(kontact_status_name(KONTACT_INTERNAL)) == "Internal");
  CHECK(std::string(kontact_status_name(KONTACT_NULL_ARGUMENT)) == "NullArgument");
  const char* dup[] = {"x", "x"};
  kontact_space* s = nullptr;
  CHECK(kontact_space_new(dup, 2, nullptr, 0, &s) != KONTACT_OK);
  CHECK(s == nullptr);
}

TEST_CASE("last error is per thread") {
  Space sp({"x"});
  E e;
  CHECK(kontact_expr_parse(sp.s, "(", &e.e) == KONTACT_SYNTAX_ERROR);
  std::string other;
  std::thread t([&] { other = kontact_last_error(); });
  t.join();
  CHECK(other.empty());
  CHECK_FALSE(std::string(kontact_last_error()).empty());
}

TEST_CASE("commands through kontact_run") {
  char* names = nullptr;
  REQUIRE(kontact_corpus_names(&names) == KONTACT_OK);
  json n = json::parse(names);
  kontact_string_free(names);
  CHECK(n.size() == 10);

  Run r = run("corpus", {{"action", "run"}, {"names", {"control"}}, {"json", true}});
  REQUIRE(r.status == KONTACT_OK);
  CHECK(r.exit == 0);
  json j = json::parse(r.out);
  CHECK(j["pass"] == true);
  CHECK(j["reports"][0]["example"] == "control2");

  json doc{{"schema_version", 1},
           {"chart", {"x", "y", "z"}},
           {"forms", {{"a", {{"dz", "1"}}}}},
           {"eta", {{"components", {"a", "a"}}}}};
  r = run("check-kcontact", {{"document", doc}, {"json", true}});
  CHECK(r.exit == 1);
  CHECK(json::parse(r.out)["failure_reason"] == "CorankMismatch");

  r = run("closure", {{"file", "/nonexistent.json"}});
  CHECK(r.status == KONTACT_OK);
  CHECK(r.exit == 2);
  CHECK(r.out.empty());
  CHECK(r.err.find("InvalidInput") != std::string::npos);

  r = run("warp", json::object());
  CHECK(r.exit == 2);

  char* out = nullptr;
  char* err = nullptr;
  int code = 0;
  CHECK(kontact_run("corpus", "{not json", &out, &err, &code) == KONTACT_INVALID_INPUT);
  CHECK(kontact_run("corpus", "{}", nullptr, &err, &code) == KONTACT_NULL_ARGUMENT);
}

TEST_CASE("runs are reproducible across threads") {
  json req{{"action", "run"}, {"names", {"jet", "riccati"}}, {"json", true}, {"seed", 99}};
  std::string a = run("corpus", req).out;
  std::vector<std::string> outs(4);
  std::vector<std::thread> ts;
  for (int i = 0; i < 4; ++i) ts.emplace_back([&, i] { outs[static_cast<std::size_t>(i)] = run("corpus", req).out; });
  for (auto& t : ts) t.join();
  for (const auto& o : outs) CHECK(o == a);
  CHECK(std::strlen(kontact_version()) > 0);
}
