#include <cstring>
#include <string>

#include "doctest.h"
#include "json.hpp"
#include "ltphigamma.h"

using nlohmann::json;

namespace {

struct Ctx {
  ltpg_ctx* c = nullptr;
  explicit Ctx(int p = 2, int f = 2) {
    ltpg_config cfg;
    ltpg_config_default(&cfg);
    cfg.p = p;
    cfg.f = f;
    REQUIRE(ltpg_ctx_new(&cfg, &c) == LTPG_OK);
  }
  ~Ctx() { ltpg_ctx_free(c); }
};

std::string take(char* s) {
  std::string out = s ? s : "";
  ltpg_string_free(s);
  return out;
}

std::string str(const ltpg_series* s) {
  char* out = nullptr;
  REQUIRE(ltpg_series_str(s, &out) == LTPG_OK);
  return take(out);
}

}  // namespace

TEST_CASE("config and status names") {
  ltpg_config cfg;
  ltpg_config_default(&cfg);
  CHECK(cfg.p == 2);
  CHECK(cfg.f == 2);
  CHECK(cfg.N == 16);
  CHECK(cfg.M == 64);
  CHECK(ltpg_abi_version() == LTPG_ABI_VERSION);
  CHECK(std::string(ltpg_status_name(LTPG_E_PARSE)) == "ParseError");
  CHECK(std::string(ltpg_status_name(LTPG_E_NULL_ARGUMENT)) == "NullArgument");
  CHECK(ltpg_ctx_new(nullptr, nullptr) == LTPG_E_NULL_ARGUMENT);
  cfg.M = 1;
  ltpg_ctx* c = nullptr;
  CHECK(ltpg_ctx_new(&cfg, &c) == LTPG_E_INVALID_ARGUMENT);
  CHECK(c == nullptr);
  CHECK(std::strlen(ltpg_last_error()) > 0);
}

TEST_CASE("apply psi and phi through handles") {
  Ctx ctx;
  ltpg_series *x = nullptr, *y = nullptr, *z = nullptr, *d = nullptr;
  REQUIRE(ltpg_series_parse(ctx.c, "T", &x) == LTPG_OK);
  REQUIRE(ltpg_apply(ctx.c, "psi_q", x, nullptr, &y) == LTPG_OK);
  CHECK(str(y) == "0");
  REQUIRE(ltpg_apply(ctx.c, "phi", x, nullptr, &z) == LTPG_OK);
  CHECK(str(z) == "2*T + T^4");
  ltpg_series* back = nullptr;
  REQUIRE(ltpg_apply(ctx.c, "psi", z, nullptr, &back) == LTPG_OK);
  REQUIRE(ltpg_series_sub(back, x, &d) == LTPG_OK);
  CHECK(str(d) == "0");
  for (auto* s : {x, y, z, d, back}) ltpg_series_free(s);
}

TEST_CASE("errors map to status codes") {
  Ctx ctx;
  ltpg_series* x = nullptr;
  CHECK(ltpg_series_parse(ctx.c, "T +* 2", &x) == LTPG_E_PARSE);
  CHECK(x == nullptr);
  REQUIRE(ltpg_series_parse(ctx.c, "T", &x) == LTPG_OK);
  ltpg_series* y = nullptr;
  CHECK(ltpg_apply(ctx.c, "gamma", x, "2", &y) == LTPG_E_NON_UNIT_SCALAR);
  CHECK(ltpg_apply(ctx.c, "nope", x, nullptr, &y) == LTPG_E_INVALID_ARGUMENT);
  ltpg_series_free(x);
  char* j = nullptr;
  int passed = 0;
  CHECK(ltpg_verify(ctx.c, "nope", &j, &passed) == LTPG_E_INVALID_ARGUMENT);
}

TEST_CASE("verify report follows the schema") {
  Ctx ctx;
  char* out = nullptr;
  int passed = 0;
  REQUIRE(ltpg_verify(ctx.c, "residue", &out, &passed) == LTPG_OK);
  json j = json::parse(take(out));
  CHECK(passed == 1);
  CHECK(j["schema"] == LTPG_REPORT_SCHEMA);
  CHECK(j["config"]["p"] == 2);
}

TEST_CASE("tower elements and the q = 2 value") {
  ltpg_config cfg;
  ltpg_config_default(&cfg);
  cfg.f = 1;
  ltpg_ctx* c = nullptr;
  REQUIRE(ltpg_ctx_new(&cfg, &c) == LTPG_OK);
  ltpg_series *x = nullptr, *y = nullptr;
  REQUIRE(ltpg_series_parse(c, "T", &x) == LTPG_OK);
  REQUIRE(ltpg_apply(c, "psi_q", x, nullptr, &y) == LTPG_OK);
  CHECK(str(y) == "-1");
  ltpg_series_free(x);
  ltpg_series_free(y);
  ltpg_ctx_free(c);

  Ctx ctx;
  ltpg_elem *e = nullptr, *tr = nullptr;
  REQUIRE(ltpg_elem_parse(ctx.c, "u @level 1", &e) == LTPG_OK);
  REQUIRE(ltpg_tower_trace(ctx.c, e, 0, &tr) == LTPG_OK);
  char* s = nullptr;
  REQUIRE(ltpg_elem_str(tr, &s) == LTPG_OK);
  CHECK(take(s) == "0 @level 0");
  ltpg_elem_free(e);
  ltpg_elem_free(tr);
}

TEST_CASE("bigexp and kummer reports pass at the default configuration") {
  Ctx ctx;
  char* out = nullptr;
  int passed = 0;
  REQUIRE(ltpg_bigexp(ctx.c, R"({"dim":2,"phi":[["3","0"],["0","5/pi"]],"h":1})", -1, &out, &passed) == LTPG_OK);
  json j = json::parse(take(out));
  CHECK(passed == 1);
  CHECK(j["command"] == "bigexp");
  REQUIRE(ltpg_kummer(ctx.c, "check", R"({"z":"u + u^2 @level 2"})", &out, &passed) == LTPG_OK);
  j = json::parse(take(out));
  CHECK(passed == 1);
}
