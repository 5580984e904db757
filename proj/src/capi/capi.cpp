#include "ltphigamma.h"

#include <cstdlib>
#include <cstring>
#include <memory>
#include <random>
#include <string>

#include "json.hpp"
#include "kummer.hpp"
#include "suites.hpp"

using nlohmann::json;
using namespace ltpg;

struct ltpg_ctx {
  RunConfig cfg;
  FieldPtr F;
  std::unique_ptr<LTGroup> G;
  std::unique_ptr<Tower> T;
  std::unique_ptr<Ops> O;
};

struct ltpg_series {
  ltpg_ctx* ctx;
  Series s;
};

struct ltpg_elem {
  ltpg_ctx* ctx;
  TowerElem x;
};

namespace {

thread_local std::string g_error;

ltpg_status set_error(ltpg_status s, const std::string& msg) {
  g_error = msg;
  return s;
}

// Runs fn and converts exceptions into status codes.
template <class Fn>
ltpg_status guard(Fn&& fn) {
  try {
    fn();
    return LTPG_OK;
  } catch (const Error& e) {
    return set_error((ltpg_status)e.code(), std::string(err_name(e.code())) + ": " + e.what());
  } catch (const json::exception& e) {
    return set_error(LTPG_E_PARSE, std::string("json: ") + e.what());
  } catch (const std::exception& e) {
    return set_error(LTPG_E_INTERNAL, e.what());
  }
}

char* dup(const std::string& s) {
  char* out = (char*)std::malloc(s.size() + 1);
  if (!out) throw std::bad_alloc();
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

#define LTPG_REQUIRE(cond) \
  if (!(cond)) return set_error(LTPG_E_NULL_ARGUMENT, "null argument: " #cond)

int tval(const TowerElem& x) {
  int v = kInf;
  for (auto& c : x.coords()) v = std::min(v, c.val());
  return v;
}

json residual(int v) { return v >= kInf ? json("exact") : json(v); }

json ledger(const RunConfig& cfg, int digits, int window, const std::string& note = "") {
  const int d = std::min(digits, cfg.N);
  json j = {{"digits", digits >= kInf ? json("exact") : json(d)},
            {"window", window >= kInf ? json("exact") : json(window)},
            {"slack", cfg.N - d}};
  if (!note.empty()) j["note"] = note;
  return j;
}

json series_ledger(const RunConfig& cfg, const Series& s, const std::string& note = "") {
  return ledger(cfg, s.min_prec(), s.high_exact() ? kInf : s.hi(), note);
}

// "c_0 + c_1 u + ... @level n" without the level suffix
std::string elem_body(const TowerElem& x) {
  std::string s = x.str();
  const auto at = s.rfind(" @level");
  return at == std::string::npos ? s : s.substr(0, at);
}

std::string jet_str(const Jet& j, int i) {
  std::string out;
  for (int k = j.lo; k <= j.order; ++k) {
    if (!out.empty()) out += " + ";
    out += "(" + elem_body(j.at(k)[i]) + ")";
    if (k == 1)
      out += "*t";
    else if (k != 0)
      out += "*t^" + std::to_string(k);
  }
  return out + " @level " + std::to_string(j.n);
}

json strs(const std::vector<TowerElem>& v) {
  json a = json::array();
  for (auto& x : v) a.push_back(x.str());
  return a;
}

json strs(const ModElem& v) {
  json a = json::array();
  for (auto& x : v) a.push_back(x.str());
  return a;
}

json base_report(const ltpg_ctx* ctx, const std::string& command) {
  return {{"schema", LTPG_REPORT_SCHEMA}, {"command", command}, {"config", to_json(ctx->cfg)}};
}

Series apply_op(const ltpg_ctx* ctx, const std::string& op, const Series& in, const char* arg) {
  const Ops& O = *ctx->O;
  const Field* F = ctx->F.get();
  if (op == "phi" || op == "phi_q") return O.phi(in);
  if (op == "psi" || op == "psi_q") return O.psi(in);
  if (op == "partial" || op == "d") return O.partial(in);
  if (op == "nabla") return O.nabla(in);
  if (op == "res") return Series::constant(O.res(in));
  if (op == "antiderivative") return O.antiderivative(in);
  if (op == "t") return O.t();
  if (op == "x0") return O.x0();
  if (op == "gamma") {
    if (!arg) fail(Err::InvalidArgument, "gamma needs a unit argument");
    FieldElem a = F->parse(arg, kInf);
    if (!a.is_unit()) fail(Err::NonUnitScalar, "gamma_a needs a unit a");
    return O.gamma(a, in);
  }
  if (op == "theta_b") return O.theta_b(gamma_basis(F, F->n0()), in);
  fail(Err::InvalidArgument, "unknown operator " + op);
}

Mat parse_matrix(const Field* F, const json& rows, int dim) {
  if (!rows.is_array() || (int)rows.size() != dim) fail(Err::InvalidArgument, "phi must be a dim x dim array");
  Mat A(F, dim, dim);
  for (int i = 0; i < dim; ++i) {
    if (!rows[i].is_array() || (int)rows[i].size() != dim) fail(Err::InvalidArgument, "phi must be a dim x dim array");
    for (int j = 0; j < dim; ++j) {
      const json& e = rows[i][j];
      A.at(i, j) = e.is_number_integer() ? F->integer(e.get<int64_t>()) : F->parse(e.get<std::string>(), kInf);
    }
  }
  return A;
}

ModElem psi_zero(const FPhiMod& D, std::mt19937_64& rng) {
  ModElem g;
  for (int i = 0; i < D.dim(); ++i) {
    std::vector<FieldElem> c;
    for (int k = 0; k < 20; ++k) c.push_back(D.field()->random(rng, 0, 30));
    g.push_back(Series::from_coeffs(D.field(), 0, c));
  }
  return g - D.module().phi(D.module().psi(g));
}

std::vector<TowerElem> lt_logs(const Tower& T, const SSeq& s) {
  std::vector<TowerElem> out;
  for (int n = 1; n <= s.nmax(); ++n) out.push_back(lt_log(T, s.at(n)));
  return out;
}

json interp_json(const Interp& in) {
  json ev = json::array();
  for (int v : in.eval_residual) ev.push_back(residual(v));
  return {{"f", in.f.str()},       {"window", in.window},         {"psi_rows", in.psi_rows},
          {"rank", in.rank},       {"pivot_loss", in.pivot_loss}, {"g0", in.g0.compact()},
          {"residuals", {{"psi_f_minus_f_over_pi", residual(in.psi_residual)}, {"f_at_u_n_minus_y_n", ev}}}};
}

}  // namespace

extern "C" {

int ltpg_abi_version(void) { return LTPG_ABI_VERSION; }

void ltpg_config_default(ltpg_config* cfg) {
  if (!cfg) return;
  RunConfig d;
  cfg->p = d.p;
  cfg->f = d.f;
  cfg->N = d.N;
  cfg->M = d.M;
  cfg->nmax = d.nmax;
  cfg->jet_order = d.jet_order;
  cfg->seed = d.seed;
  cfg->unit_u = nullptr;
  cfg->unit_u_len = 0;
}

const char* ltpg_status_name(ltpg_status s) {
  if (s == LTPG_E_NULL_ARGUMENT) return "NullArgument";
  if (s == LTPG_E_INTERNAL) return "Internal";
  if (s < 0 || s > LTPG_E_INVALID_ARGUMENT) return "Unknown";
  return err_name((Err)s);
}

const char* ltpg_last_error(void) { return g_error.c_str(); }

void ltpg_string_free(char* s) { std::free(s); }

ltpg_status ltpg_ctx_new(const ltpg_config* cfg, ltpg_ctx** out) {
  LTPG_REQUIRE(cfg && out);
  *out = nullptr;
  return guard([&] {
    auto c = std::make_unique<ltpg_ctx>();
    c->cfg.p = cfg->p;
    c->cfg.f = cfg->f;
    c->cfg.N = cfg->N;
    c->cfg.M = cfg->M;
    c->cfg.nmax = cfg->nmax;
    c->cfg.jet_order = cfg->jet_order;
    c->cfg.seed = cfg->seed;
    if (cfg->unit_u) c->cfg.unit_u.assign(cfg->unit_u, cfg->unit_u + cfg->unit_u_len);
    if (cfg->M < 4 || cfg->M > kDegreeBudget) fail(Err::InvalidArgument, "M out of range");
    if (cfg->nmax < 1 || cfg->nmax > 4) fail(Err::InvalidArgument, "nmax must lie in 1..4");
    if (cfg->jet_order < 0 || cfg->jet_order > kJetBound) fail(Err::InvalidArgument, "jet order out of range");
    c->F = Field::make({cfg->p, cfg->f, {}, c->cfg.unit_u, cfg->N});
    c->G = std::make_unique<LTGroup>(c->F);
    c->T = std::make_unique<Tower>(*c->G);
    c->O = std::make_unique<Ops>(*c->G, cfg->M);
    *out = c.release();
  });
}

void ltpg_ctx_free(ltpg_ctx* ctx) { delete ctx; }

ltpg_status ltpg_ctx_describe(const ltpg_ctx* ctx, char** out) {
  LTPG_REQUIRE(ctx && out);
  return guard([&] {
    const Field* F = ctx->F.get();
    json j = base_report(ctx, "describe");
    j["q"] = F->q();
    j["pi"] = F->pi().compact();
    j["kcap"] = F->kcap();
    j["minpoly"] = F->minpoly();
    *out = dup(j.dump());
  });
}

ltpg_status ltpg_series_parse(ltpg_ctx* ctx, const char* literal, ltpg_series** out) {
  LTPG_REQUIRE(ctx && literal && out);
  return guard([&] { *out = new ltpg_series{ctx, Series::parse(ctx->F.get(), literal, kInf)}; });
}

ltpg_status ltpg_series_str(const ltpg_series* s, char** out) {
  LTPG_REQUIRE(s && out);
  return guard([&] { *out = dup(s->s.str()); });
}

ltpg_status ltpg_series_valuation(const ltpg_series* s, int lo, int hi, int* out) {
  LTPG_REQUIRE(s && out);
  return guard([&] { *out = s->s.val_range(lo, hi); });
}

ltpg_status ltpg_series_sub(const ltpg_series* a, const ltpg_series* b, ltpg_series** out) {
  LTPG_REQUIRE(a && b && out);
  if (a->ctx != b->ctx) return set_error(LTPG_E_INVALID_ARGUMENT, "series from different contexts");
  return guard([&] { *out = new ltpg_series{a->ctx, a->s - b->s}; });
}

void ltpg_series_free(ltpg_series* s) { delete s; }

ltpg_status ltpg_apply(ltpg_ctx* ctx, const char* op, const ltpg_series* in, const char* arg, ltpg_series** out) {
  LTPG_REQUIRE(ctx && op && in && out);
  return guard([&] { *out = new ltpg_series{ctx, apply_op(ctx, op, in->s, arg)}; });
}

ltpg_status ltpg_apply_report(ltpg_ctx* ctx, const char* op, const char* series, const char* arg, char** out) {
  LTPG_REQUIRE(ctx && op && series && out);
  return guard([&] {
    Series in = Series::parse(ctx->F.get(), series, kInf);
    Series r = apply_op(ctx, op, in, arg);
    json j = base_report(ctx, "apply");
    j["op"] = op;
    j["input"] = in.str();
    if (arg) j["arg"] = arg;
    j["output"] = r.str();
    std::string note;
    if (in.high_exact() && r.high_exact()) note = "polynomial input, no T-adic truncation";
    if (std::string(op) == "psi_q" || std::string(op) == "psi")
      note += std::string(note.empty() ? "" : "; ") + "psi_q(T) = " +
              ctx->O->psi(Series::var(ctx->F.get())).str() + " for q = " + std::to_string(ctx->F->q());
    j["ledger"] = series_ledger(ctx->cfg, r, note);
    *out = dup(j.dump());
  });
}

ltpg_status ltpg_solve(ltpg_ctx* ctx, const char* kind, const ltpg_series* f, const char* a, ltpg_series** out,
                       char** report) {
  LTPG_REQUIRE(ctx && kind && f && a && out);
  return guard([&] {
    const Ops& O = *ctx->O;
    const FieldElem av = ctx->F->parse(a, kInf);
    const std::string k = kind;
    json j = base_report(ctx, "solve");
    j["kind"] = k;
    j["input"] = f->s.str();
    j["a"] = av.compact();
    const int M = O.M();
    Series g;
    if (k == "psi-a") {
      auto s = O.solve_psi_minus_a(f->s, av);
      g = s.g;
      Series rhs = f->s;
      if (s.m > 0) rhs = rhs - O.cokernel_generator(s.m).scale(s.obstruction);
      j["method"] = s.neumann ? "neumann" : "dense";
      j["obstruction"] = {{"m", s.m}, {"coefficient", s.obstruction.compact()}};
      j["residual"] = residual((O.psi(g) - g.scale(av) - rhs).val_range(std::min(0, rhs.lo()), M / 2));
      j["ledger"] = ledger(ctx->cfg, g.min_prec(), M / 2);
    } else if (k == "one-minus-aphi") {
      auto s = O.solve_a_phi_minus_one(f->s, av);
      g = s.g;
      j["kernel"] = s.kernel ? json{{"m", s.m}, {"basis", s.kernel_basis.str()}} : json(nullptr);
      j["residual"] = residual((O.phi(g).scale(av) - g - f->s).val_range(0, M));
      j["ledger"] = ledger(ctx->cfg, g.min_prec(), M);
    } else {
      fail(Err::InvalidArgument, "unknown solver " + k + " (psi-a, one-minus-aphi; one-minus-phi goes through bigexp)");
    }
    j["output"] = g.str();
    *out = new ltpg_series{ctx, g};
    if (report) *report = dup(j.dump());
  });
}

ltpg_status ltpg_elem_parse(ltpg_ctx* ctx, const char* literal, ltpg_elem** out) {
  LTPG_REQUIRE(ctx && literal && out);
  return guard([&] { *out = new ltpg_elem{ctx, ctx->T->parse(literal, kInf)}; });
}

ltpg_status ltpg_elem_str(const ltpg_elem* x, char** out) {
  LTPG_REQUIRE(x && out);
  return guard([&] { *out = dup(x->x.str()); });
}

void ltpg_elem_free(ltpg_elem* x) { delete x; }

ltpg_status ltpg_tower_eval(ltpg_ctx* ctx, const ltpg_series* f, int level, ltpg_elem** out) {
  LTPG_REQUIRE(ctx && f && out);
  return guard([&] { *out = new ltpg_elem{ctx, ctx->T->eval(f->s, level)}; });
}

ltpg_status ltpg_tower_trace(ltpg_ctx* ctx, const ltpg_elem* x, int level, ltpg_elem** out) {
  LTPG_REQUIRE(ctx && x && out);
  return guard([&] { *out = new ltpg_elem{ctx, ctx->T->trace(x->x, level)}; });
}

ltpg_status ltpg_tower_galois(ltpg_ctx* ctx, const char* a, const ltpg_elem* x, ltpg_elem** out) {
  LTPG_REQUIRE(ctx && a && x && out);
  return guard([&] {
    FieldElem av = ctx->F->parse(a, kInf);
    if (!av.is_unit()) fail(Err::NonUnitScalar, "Galois elements correspond to units of O_F");
    *out = new ltpg_elem{ctx, ctx->T->galois(av, x->x)};
  });
}

ltpg_status ltpg_lt(ltpg_ctx* ctx, const char* what, int order, const char* arg, char** out) {
  LTPG_REQUIRE(ctx && what && out);
  return guard([&] {
    const LTGroup& G = *ctx->G;
    const std::string w = what;
    if (order < 1 || order > kDegreeBudget) fail(Err::InvalidArgument, "order out of range");
    json j = base_report(ctx, "lt");
    j["what"] = w;
    j["order"] = order;
    if (w == "log") {
      j["series"] = G.log(order).str();
    } else if (w == "exp") {
      j["series"] = G.exp(order).str();
    } else if (w == "pi") {
      j["series"] = G.pi_series().str();
    } else if (w == "torsion") {
      const int n = arg ? std::atoi(arg) : 1;
      if (n < 1 || n > 4) fail(Err::InvalidArgument, "torsion level must lie in 1..4");
      j["level"] = n;
      j["series"] = G.torsion_poly(n).str();
    } else if (w == "scalar") {
      if (!arg) fail(Err::InvalidArgument, "scalar needs an element of O_F");
      j["a"] = arg;
      j["series"] = G.scalar(ctx->F->parse(arg, kInf), order).str();
    } else if (w == "law") {
      if (order > 24) fail(Err::InvalidArgument, "law tables are printed to total degree <= 24");
      BiPoly law = G.law(order);
      json terms = json::array();
      for (int i = 0; i <= order; ++i)
        for (int k = 0; i + k <= order; ++k)
          if (!law.at(i, k).is_zero()) terms.push_back({{"i", i}, {"j", k}, {"c", law.at(i, k).compact()}});
      j["terms"] = terms;
    } else {
      fail(Err::InvalidArgument, "unknown lt query " + w + " (log, exp, pi, torsion, scalar, law)");
    }
    *out = dup(j.dump());
  });
}

ltpg_status ltpg_suite_names(char** out) {
  LTPG_REQUIRE(out);
  return guard([&] { *out = dup(json(suite_names()).dump()); });
}

ltpg_status ltpg_verify(ltpg_ctx* ctx, const char* suite, char** out, int* passed) {
  LTPG_REQUIRE(ctx && suite && out);
  return guard([&] {
    const std::string s = suite;
    std::vector<std::string> run;
    if (s == "all")
      run = suite_names();
    else if (is_suite(s))
      run = {s};
    else
      fail(Err::InvalidArgument, "unknown suite " + s);
    json j = base_report(ctx, "verify");
    json arr = json::array();
    bool ok = true;
    for (auto& n : run) {
      SuiteResult r = run_suite(n, ctx->cfg);
      ok = ok && r.pass;
      arr.push_back(to_json(r));
    }
    j["suites"] = arr;
    j["pass"] = ok;
    if (passed) *passed = ok;
    *out = dup(j.dump());
  });
}

ltpg_status ltpg_bigexp(ltpg_ctx* ctx, const char* fixture_json, int h, char** out, int* passed) {
  LTPG_REQUIRE(ctx && fixture_json && out);
  return guard([&] {
    const Field* F = ctx->F.get();
    const Ops& O = *ctx->O;
    const int M = O.M(), need = F->N() - 4;
    json fx = json::parse(fixture_json);
    FPhiModData d;
    d.dim = fx.at("dim").get<int>();
    if (d.dim < 1 || d.dim > 8) fail(Err::InvalidArgument, "dim must lie in 1..8");
    d.phi = parse_matrix(F, fx.at("phi"), d.dim);
    d.h = h >= 0 ? h : fx.value("h", 1);
    FPhiMod D(O, d);
    std::mt19937_64 rng(ctx->cfg.seed);
    ModElem f;
    if (fx.contains("f")) {
      for (auto& s : fx["f"]) f.push_back(Series::parse(F, s.get<std::string>(), kInf));
      if ((int)f.size() != d.dim) fail(Err::InvalidArgument, "f needs dim components");
    } else {
      f = psi_zero(D, rng);
    }
    json j = base_report(ctx, "bigexp");
    j["fixture"] = fx;
    j["h"] = d.h;
    j["f"] = strs(f);
    json sl = json::array();
    for (auto [n, den] : D.slopes()) sl.push_back(std::to_string(n) + "/" + std::to_string(den));
    j["slopes"] = sl;
    j["psi_f"] = residual(resval(D.module().psi(f), 0, 4));
    json delta = json::array();
    bool obstructed = false;
    for (auto& c : delta_map(D, f, d.h)) {
      json cls = json::array();
      for (auto& x : c.cls) cls.push_back(x.compact());
      delta.push_back({{"k", c.k}, {"zero", c.zero}, {"class", cls}});
      obstructed = obstructed || !c.zero;
    }
    j["delta"] = delta;
    if (obstructed) {
      j["solvable"] = false;
      j["pass"] = false;
      if (passed) *passed = 0;
      *out = dup(j.dump());
      return;
    }
    ColcolSolution s = solve_one_minus_phi(D, f, d.h);
    json ker = json::array();
    for (auto& [k, v] : s.kernel) {
      json vv = json::array();
      for (auto& x : v) vv.push_back(x.compact());
      ker.push_back({{"k", k}, {"v", vv}});
    }
    j["solvable"] = true;
    j["solution"] = {{"y", strs(s.y)},
                     {"kernel", ker},
                     {"ambiguous", s.ambiguous},
                     {"omega_ambiguous", s.omega_ambiguous},
                     {"iterations", s.iterations}};
    ModElem om = omega(D, s);
    j["omega"] = strs(om);
    json checks = json::object();
    checks["one_minus_phi"] = residual(s.residual);
    // nabla_h Omega_h = Omega_(h+1)
    bool ok = s.residual >= need;
    try {
      ColcolSolution s1 = solve_one_minus_phi(D, f, d.h + 1);
      int v = resval(D.module().nabla_i(om, d.h), omega(D, s1), 0, M / 2);
      checks["nabla_h_omega_h"] = residual(v);
      ok = ok && v >= need;
    } catch (const Error& e) {
      checks["nabla_h_omega_h"] = std::string("skipped: ") + err_name(e.code());
    }
    json ladder = json::array();
    std::vector<std::vector<TowerElem>> r;
    for (int n = 0; n <= 2; ++n) {
      r.push_back(dualexp_rhs(D, *ctx->T, s, n));
      ladder.push_back({{"n", n}, {"value", strs(r.back())}});
    }
    j["dualexp"] = ladder;
    for (int n = 1; n <= 2; ++n) {
      int v = kInf;
      for (int i = 0; i < d.dim; ++i) v = std::min(v, tval(ctx->T->trace(r[n][i], n - 1) - r[n - 1][i]));
      checks["ladder_" + std::to_string(n) + "_to_" + std::to_string(n - 1)] = residual(v);
      ok = ok && v >= need;
    }
    json jets = json::array();
    for (int n = 1; n <= 2; ++n) {
      Jet jt = phi_inv_jet(D, *ctx->T, s, n, ctx->cfg.jet_order);
      json comps = json::array();
      for (int i = 0; i < d.dim; ++i) comps.push_back(jet_str(jt, i));
      jets.push_back({{"n", n}, {"order", jt.order}, {"components", comps}});
    }
    j["jets"] = jets;
    j["checks"] = checks;
    int digits = kInf;
    for (auto& y : s.y) digits = std::min(digits, y.min_prec());
    j["ledger"] = ledger(ctx->cfg, digits, M, s.omega_ambiguous ? "Omega determined up to the degree-h kernel" : "");
    j["pass"] = ok;
    if (passed) *passed = ok;
    *out = dup(j.dump());
  });
}

ltpg_status ltpg_kummer(ltpg_ctx* ctx, const char* action, const char* input_json, char** out, int* passed) {
  LTPG_REQUIRE(ctx && action && input_json && out);
  return guard([&] {
    const Field* F = ctx->F.get();
    const Tower& T = *ctx->T;
    const int need = F->N() - 5;
    const std::string act = action;
    json in = json::parse(input_json);
    json j = base_report(ctx, "kummer " + act);
    j["input"] = in;
    bool ok = true;
    SSeq x;
    auto build = [&] {
      TowerElem z = T.parse(in.at("z").get<std::string>(), kInf);
      const int nmax = in.value("nmax", std::max(ctx->cfg.nmax, z.level()));
      SBuild b = build_s_from_point(T, z, nmax);
      json rel = json::array();
      for (int v : b.relation) {
        rel.push_back(residual(v));
        ok = ok && v >= need;
      }
      ok = ok && b.point_residual >= need;
      j["s"] = strs(b.s.x);
      j["ell"] = {{"ell", b.ell}, {"ell1", b.ell1}, {"ell2", b.ell2}};
      j["y"] = strs(b.y);
      j["residuals"]["trace_relation"] = rel;
      j["residuals"]["x_k_minus_pi_ell_z"] = residual(b.point_residual);
      x = b.s;
    };
    auto read_x = [&] {
      for (auto& e : in.at("x")) x.x.push_back(T.parse(e.get<std::string>(), kInf));
      for (int n = 1; n <= x.nmax(); ++n)
        if (x.at(n).level() != n) fail(Err::LevelMismatch, "x[n - 1] must live at level n");
      json rel = json::array();
      for (int n = 1; n < x.nmax(); ++n) {
        int v = s_relation_residual(T, x.at(n + 1), x.at(n));
        rel.push_back(residual(v));
        ok = ok && v >= need;
      }
      j["residuals"]["trace_relation"] = rel;
    };
    auto interp = [&] {
      const int W = in.value("window", interp_window(T, x.nmax(), ctx->cfg.M));
      Interp it = interp_log(*ctx->G, T, lt_logs(T, x), W);
      ok = ok && it.psi_residual >= need;
      for (int v : it.eval_residual) ok = ok && v >= need;
      j["interp"] = interp_json(it);
      return it;
    };
    if (act == "build") {
      build();
    } else if (act == "interp") {
      read_x();
      interp();
    } else if (act == "check") {
      if (in.contains("z"))
        build();
      else
        read_x();
      Interp it = interp();
      KummerReport r = kummer_shell(*ctx->G, T, x, it);
      json lg = json::array(), ld = json::array(), jt = json::array();
      for (size_t n = 0; n < r.log_residual.size(); ++n) {
        lg.push_back(residual(r.log_residual[n]));
        ld.push_back(residual(r.ladder_residual[n]));
        jt.push_back(residual(r.jet_residual[n]));
        ok = ok && r.log_residual[n] >= need && r.ladder_residual[n] >= need && r.jet_residual[n] >= need;
      }
      ok = ok && r.psi_residual >= need;
      j["shell"] = {{"zero", r.zero},
                    {"psi_df_minus_df", residual(r.psi_residual)},
                    {"f_at_u_n_minus_log_x_n", lg},
                    {"dualexp_ladder", ld},
                    {"jet", jt}};
    } else {
      fail(Err::InvalidArgument, "unknown kummer action " + act + " (build, interp, check)");
    }
    j["required"] = need;
    j["pass"] = ok;
    if (passed) *passed = ok;
    *out = dup(j.dump());
  });
}

}  // extern "C"
