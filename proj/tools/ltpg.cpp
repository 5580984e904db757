// ltpg: command-line driver over the ltphigamma C interface.
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "ltphigamma.h"

using nlohmann::json;

namespace {

enum Exit { kOk = 0, kFailed = 1, kUsage = 2 };

struct Opts {
  int p = 2, f = 2, N = 16, M = 64, nmax = 2, jet_order = 2;
  uint64_t seed = 7;
  std::vector<int64_t> unit;
  std::string format = "text";
};

class Ctx {
 public:
  explicit Ctx(const Opts& o) {
    ltpg_config c;
    ltpg_config_default(&c);
    c.p = o.p, c.f = o.f, c.N = o.N, c.M = o.M, c.nmax = o.nmax, c.jet_order = o.jet_order, c.seed = o.seed;
    c.unit_u = o.unit.empty() ? nullptr : o.unit.data();
    c.unit_u_len = o.unit.size();
    status_ = ltpg_ctx_new(&c, &ctx_);
  }
  ~Ctx() { ltpg_ctx_free(ctx_); }
  Ctx(const Ctx&) = delete;
  Ctx& operator=(const Ctx&) = delete;
  ltpg_ctx* get() const { return ctx_; }
  ltpg_status status() const { return status_; }

 private:
  ltpg_ctx* ctx_ = nullptr;
  ltpg_status status_ = LTPG_OK;
};

// Takes ownership of a library string.
std::string take(char* s) {
  std::string out = s ? s : "";
  ltpg_string_free(s);
  return out;
}

int report_error(ltpg_status s) {
  std::fprintf(stderr, "ltpg: %s\n", ltpg_last_error());
  const bool usage = s == LTPG_E_PARSE || s == LTPG_E_INVALID_ARGUMENT || s == LTPG_E_NULL_ARGUMENT;
  return usage ? kUsage : kFailed;
}

std::string show(const json& v) { return v.is_string() ? v.get<std::string>() : v.dump(); }

void print_ledger(const json& l) {
  if (l.is_null()) return;
  std::cout << "# ledger: digits=" << show(l["digits"]) << " window=" << show(l["window"]) << " slack=" << l["slack"];
  if (l.contains("note")) std::cout << " (" << l["note"].get<std::string>() << ")";
  std::cout << "\n";
}

void print_suite(const json& s) {
  std::printf("%-20s %s  (p=%d f=%d, %.2f s)\n", s["suite"].get<std::string>().c_str(), s["pass"].get<bool>() ? "PASS" : "FAIL",
              s["config"]["p"].get<int>(), s["config"]["f"].get<int>(), s["seconds"].get<double>());
  for (auto& c : s["checks"]) {
    std::string v = c["kind"] == "flag" ? "flag" : show(c["residual"]) + " >= " + show(c["required"]);
    std::printf("  %s %-12s %s\n", c["pass"].get<bool>() ? "ok  " : "FAIL", v.c_str(), c["name"].get<std::string>().c_str());
  }
  if (s.contains("notes"))
    for (auto& [k, v] : s["notes"].items()) std::printf("  note %s = %s\n", k.c_str(), show(v).c_str());
}

// JSON given inline or as a file path.
std::string json_arg(const std::string& s) {
  if (!s.empty() && (s[0] == '{' || s[0] == '[')) return s;
  std::ifstream in(s);
  if (!in) throw CLI::ValidationError("--fixture", "not JSON and not a readable file: " + s);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

int emit(const Opts& o, const json& j, bool ok) {
  if (o.format == "json") std::cout << j.dump(2) << "\n";
  return ok ? kOk : kFailed;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Lubin-Tate (phi, Gamma) operator calculus"};
  app.require_subcommand(1);
  // --h is the filtration bound, so help is long-form only
  app.set_help_flag("--help", "print this help and exit");
  // global flags may follow the subcommand
  app.fallthrough();
  Opts o;
  app.set_config("--config", "", "key = value configuration file, layered under flags")->envname("LTPG_CONFIG");
  app.add_option("--p", o.p, "residue characteristic")->capture_default_str();
  app.add_option("--f", o.f, "residue degree")->capture_default_str();
  app.add_option("--unit", o.unit, "coordinates of the unit u in [pi](T) = T^q + pi u T")->delimiter(',');
  app.add_option("--prec,--N", o.N, "pi-adic precision N")->capture_default_str();
  app.add_option("--tdeg,--M", o.M, "T-adic truncation M")->capture_default_str();
  app.add_option("--nmax", o.nmax, "top tower level for Kummer sequences")->capture_default_str();
  app.add_option("--jet-order", o.jet_order, "t-jet order in bigexp reports")->capture_default_str();
  app.add_option("--seed", o.seed, "seed for randomized suites and fixtures")->capture_default_str();
  app.add_option("--format", o.format, "text or json")->check(CLI::IsMember({"text", "json"}))->capture_default_str();

  std::string op, series, arg;
  auto* apply = app.add_subcommand("apply", "apply an operator to a series");
  apply->add_option("op", op, "phi, psi_q, gamma, partial, nabla, res, antiderivative, theta_b, t, x0")->required();
  apply->add_option("--series", series, "series literal")->required();
  apply->add_option("--arg", arg, "operator argument (gamma: a unit of O_F)");

  std::string kind, a, fixture;
  std::vector<std::string> fseries;
  int h = -1;
  auto* solve = app.add_subcommand("solve", "solve (psi - a) g = f, (a phi - 1) g = f or (1 - phi) y = f");
  solve->add_option("kind", kind)->required()->check(CLI::IsMember({"psi-a", "one-minus-aphi", "one-minus-phi"}));
  solve->add_option("--series", fseries, "right-hand side (one literal per coordinate for one-minus-phi)");
  solve->add_option("--a", a, "the scalar a");
  solve->add_option("--fixture", fixture, "phi-module fixture (one-minus-phi): JSON or file");
  solve->add_option("--h", h, "filtration bound (one-minus-phi)");

  std::string suite = "all";
  auto* verify = app.add_subcommand("verify", "run a verification suite");
  verify->add_option("--suite", suite, "suite name or all")->capture_default_str();
  verify->add_flag("--list", "list suites and exit");

  auto* bigexp = app.add_subcommand("bigexp", "big exponential of a filtered phi-module");
  bigexp->add_option("--fixture", fixture, "JSON {dim, phi, h, f} or a file holding it")->required();
  bigexp->add_option("--h", h, "filtration bound (overrides the fixture)");

  std::string action, z, input;
  std::vector<std::string> xs;
  int window = -1;
  auto* kummer = app.add_subcommand("kummer", "norm-compatible sequences and the interpolation of log_LT");
  kummer->add_option("action", action)->required()->check(CLI::IsMember({"build", "interp", "check"}));
  kummer->add_option("--z", z, "point in the maximal ideal, \"... @level k\"");
  kummer->add_option("--x", xs, "sequence element at level n (repeat for n = 1, 2, ...)");
  kummer->add_option("--window", window, "interpolation window");
  kummer->add_option("--input", input, "full JSON input instead of --z/--x");

  std::string elem;
  int level = 1;
  auto* tower = app.add_subcommand("tower", "torsion tower F_n = F(u_n)");
  tower->add_option("action", action)->required()->check(CLI::IsMember({"eval", "trace", "galois"}));
  tower->add_option("--series", series, "eval: series literal");
  tower->add_option("--elem", elem, "trace, galois: \"poly in u @level n\"");
  tower->add_option("--level,--to", level, "eval: level n; trace: target level");
  tower->add_option("--a", a, "galois: unit of O_F");

  std::string what;
  int order = 16;
  auto* lt = app.add_subcommand("lt", "Lubin-Tate formal group data");
  lt->add_option("what", what)->required()->check(CLI::IsMember({"log", "exp", "pi", "torsion", "scalar", "law"}));
  lt->add_option("--order", order, "T-adic order (law: total degree)")->capture_default_str();
  lt->add_option("--arg", arg, "torsion: level; scalar: element of O_F");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kOk : kUsage;
  }

  if (verify->parsed() && verify->count("--list")) {
    std::cout << json::parse(take([] {
                   char* s = nullptr;
                   ltpg_suite_names(&s);
                   return s;
                 }()))
                     .dump()
              << "\n";
    return kOk;
  }

  Ctx ctx(o);
  if (ctx.status() != LTPG_OK) return report_error(ctx.status());
  char* out = nullptr;
  int passed = 0;
  ltpg_status st = LTPG_OK;

  try {
    if (apply->parsed()) {
      st = ltpg_apply_report(ctx.get(), op.c_str(), series.c_str(), arg.empty() ? nullptr : arg.c_str(), &out);
      if (st != LTPG_OK) return report_error(st);
      json j = json::parse(take(out));
      if (o.format == "text") {
        std::cout << j["output"].get<std::string>() << "\n";
        print_ledger(j["ledger"]);
      }
      return emit(o, j, true);
    }

    if (solve->parsed()) {
      if (kind == "one-minus-phi") {
        if (fixture.empty()) throw CLI::ValidationError("--fixture", "one-minus-phi needs a fixture");
        json fx = json::parse(json_arg(fixture));
        if (!fseries.empty()) fx["f"] = fseries;
        st = ltpg_bigexp(ctx.get(), fx.dump().c_str(), h, &out, &passed);
        if (st != LTPG_OK) return report_error(st);
        json j = json::parse(take(out));
        json r = {{"schema", j["schema"]}, {"command", "solve"},      {"kind", kind},
                  {"config", j["config"]}, {"f", j["f"]},             {"delta", j["delta"]},
                  {"solvable", j["solvable"]}};
        if (j["solvable"].get<bool>()) {
          r["y"] = j["solution"]["y"];
          r["kernel"] = j["solution"]["kernel"];
          r["residual"] = j["checks"]["one_minus_phi"];
          r["ledger"] = j["ledger"];
        }
        const bool ok = j["solvable"].get<bool>() && (!r["residual"].is_number() || r["residual"].get<int>() >= o.N - 4);
        if (o.format == "text") {
          if (!j["solvable"].get<bool>()) {
            std::cout << "obstructed: Delta(f) != 0\n" << j["delta"].dump() << "\n";
          } else {
            for (auto& y : r["y"]) std::cout << y.get<std::string>() << "\n";
            std::cout << "# residual " << show(r["residual"]) << "\n";
            print_ledger(r["ledger"]);
          }
        }
        return emit(o, r, ok);
      }
      if (fseries.size() != 1 || a.empty()) throw CLI::ValidationError("solve", "needs one --series and --a");
      ltpg_series* f = nullptr;
      if ((st = ltpg_series_parse(ctx.get(), fseries[0].c_str(), &f)) != LTPG_OK) return report_error(st);
      ltpg_series* g = nullptr;
      st = ltpg_solve(ctx.get(), kind.c_str(), f, a.c_str(), &g, &out);
      ltpg_series_free(f);
      ltpg_series_free(g);
      if (st != LTPG_OK) return report_error(st);
      json j = json::parse(take(out));
      const bool ok = !j["residual"].is_number() || j["residual"].get<int>() >= o.N - 4;
      if (o.format == "text") {
        std::cout << j["output"].get<std::string>() << "\n";
        if (j.contains("obstruction") && j["obstruction"]["m"].get<int>() > 0)
          std::cout << "# obstruction along d^(m-1) x0: m = " << j["obstruction"]["m"]
                    << ", coefficient " << j["obstruction"]["coefficient"].get<std::string>() << "\n";
        if (j.contains("kernel") && !j["kernel"].is_null())
          std::cout << "# kernel: " << j["kernel"]["basis"].get<std::string>() << "\n";
        std::cout << "# residual " << show(j["residual"]) << "\n";
        print_ledger(j["ledger"]);
      }
      return emit(o, j, ok);
    }

    if (verify->parsed()) {
      st = ltpg_verify(ctx.get(), suite.c_str(), &out, &passed);
      if (st != LTPG_OK) return report_error(st);
      json j = json::parse(take(out));
      if (o.format == "text") {
        for (auto& s : j["suites"]) print_suite(s);
        std::cout << (passed ? "all checks passed" : "some checks FAILED") << "\n";
      }
      return emit(o, j, passed);
    }

    if (bigexp->parsed()) {
      st = ltpg_bigexp(ctx.get(), json_arg(fixture).c_str(), h, &out, &passed);
      if (st != LTPG_OK) return report_error(st);
      json j = json::parse(take(out));
      if (o.format == "text") {
        std::cout << "slopes " << j["slopes"].dump() << ", h = " << j["h"] << "\n";
        if (!j["solvable"].get<bool>()) {
          std::cout << "obstructed: " << j["delta"].dump() << "\n";
        } else {
          for (auto& w : j["omega"]) std::cout << "Omega: " << w.get<std::string>() << "\n";
          for (auto& jt : j["jets"])
            for (auto& c : jt["components"]) std::cout << "phi^-" << jt["n"] << " jet: " << c.get<std::string>() << "\n";
          for (auto& [k, v] : j["checks"].items()) std::cout << "# " << k << " " << show(v) << "\n";
          print_ledger(j["ledger"]);
        }
      }
      return emit(o, j, passed);
    }

    if (kummer->parsed()) {
      json in;
      if (!input.empty()) {
        in = json::parse(json_arg(input));
      } else {
        if (!z.empty()) in["z"] = z;
        if (!xs.empty()) in["x"] = xs;
        if (in.empty()) throw CLI::ValidationError("kummer", "needs --z, --x or --input");
        in["nmax"] = o.nmax;
      }
      if (window > 0) in["window"] = window;
      st = ltpg_kummer(ctx.get(), action.c_str(), in.dump().c_str(), &out, &passed);
      if (st != LTPG_OK) return report_error(st);
      json j = json::parse(take(out));
      if (o.format == "text") {
        if (j.contains("s"))
          for (auto& x : j["s"]) std::cout << "x: " << x.get<std::string>() << "\n";
        if (j.contains("interp")) std::cout << "f: " << j["interp"]["f"].get<std::string>() << "\n";
        if (j.contains("residuals")) std::cout << "# residuals " << j["residuals"].dump() << "\n";
        if (j.contains("interp")) std::cout << "# interp residuals " << j["interp"]["residuals"].dump() << "\n";
        if (j.contains("shell")) std::cout << "# shell " << j["shell"].dump() << "\n";
        std::cout << (passed ? "pass" : "FAIL") << " (required " << j["required"] << ")\n";
      }
      return emit(o, j, passed);
    }

    if (tower->parsed()) {
      ltpg_elem* r = nullptr;
      std::string input_str;
      if (action == "eval") {
        if (series.empty()) throw CLI::ValidationError("tower eval", "needs --series");
        ltpg_series* f = nullptr;
        if ((st = ltpg_series_parse(ctx.get(), series.c_str(), &f)) != LTPG_OK) return report_error(st);
        st = ltpg_tower_eval(ctx.get(), f, level, &r);
        ltpg_series_free(f);
        input_str = series;
      } else {
        if (elem.empty()) throw CLI::ValidationError("tower", "needs --elem");
        ltpg_elem* x = nullptr;
        if ((st = ltpg_elem_parse(ctx.get(), elem.c_str(), &x)) != LTPG_OK) return report_error(st);
        if (action == "trace") {
          st = ltpg_tower_trace(ctx.get(), x, level, &r);
        } else {
          if (a.empty()) throw CLI::ValidationError("tower galois", "needs --a");
          st = ltpg_tower_galois(ctx.get(), a.c_str(), x, &r);
        }
        ltpg_elem_free(x);
        input_str = elem;
      }
      if (st != LTPG_OK) return report_error(st);
      ltpg_elem_str(r, &out);
      ltpg_elem_free(r);
      const std::string res = take(out);
      json j = {{"schema", LTPG_REPORT_SCHEMA}, {"command", "tower " + action}, {"input", input_str}, {"output", res}};
      if (action != "galois") j["level"] = level;
      if (!a.empty()) j["a"] = a;
      if (o.format == "text") std::cout << res << "\n";
      return emit(o, j, true);
    }

    if (lt->parsed()) {
      st = ltpg_lt(ctx.get(), what.c_str(), order, arg.empty() ? nullptr : arg.c_str(), &out);
      if (st != LTPG_OK) return report_error(st);
      json j = json::parse(take(out));
      if (o.format == "text") {
        if (j.contains("series"))
          std::cout << j["series"].get<std::string>() << "\n";
        else
          for (auto& t : j["terms"])
            std::cout << t["c"].get<std::string>() << " X^" << t["i"] << " Y^" << t["j"] << "\n";
      }
      return emit(o, j, true);
    }
  } catch (const CLI::Error& e) {
    std::fprintf(stderr, "ltpg: %s\n", e.what());
    return kUsage;
  } catch (const json::exception& e) {
    std::fprintf(stderr, "ltpg: bad JSON: %s\n", e.what());
    return kUsage;
  }
  return kUsage;
}
