#include "eqps/cli.hpp"

#include <algorithm>
#include <chrono>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>
#include <variant>

#include <CLI11.hpp>

#include "eqps/acceptance.hpp"
#include "eqps/burnside.hpp"
#include "eqps/error.hpp"
#include "eqps/group.hpp"
#include "eqps/invariants.hpp"
#include "eqps/resolution.hpp"
#include "eqps/series.hpp"

#ifndef EQPS_FIXTURE_DIR
#define EQPS_FIXTURE_DIR "fixtures"
#endif

namespace eqps {

namespace {

using json = nlohmann::json;
namespace fs = std::filesystem;

using AnySeries = std::variant<TBSeries, AQSeries, R1Series, ZSeries>;

json read_json_file(const std::string& path, const std::string& what) {
  std::ifstream in(path);
  if (!in) {
    throw ParseError(what + ": cannot open '" + path + "'");
  }
  try {
    return json::parse(in);
  } catch (const json::exception& e) {
    throw ParseError(what + ": '" + path + "' is not valid JSON (" + e.what() + ")");
  }
}

std::string require(const std::string& value, const std::string& flag) {
  if (value.empty()) {
    throw UsageError("missing required option " + flag);
  }
  return value;
}

MultiDegree series_bound(const CommandRequest& req) {
  const MultiDegree b = parse_bound(require(req.bound, "--bound"));
  for (int e : b.exponents) {
    if (e <= 0) {
      throw ValidationError("bound components must be positive, got " + req.bound);
    }
  }
  return b;
}

std::shared_ptr<const TildeBurnsideRing> load_ring(const CommandRequest& req) {
  return TildeBurnsideRing::create(load_group_file(require(req.group, "--group")));
}

ResolutionData load_res(const CommandRequest& req) {
  return load_resolution_file(require(req.resolution, "--resolution"));
}

std::string join(const std::vector<int>& v, const char* sep = ",") {
  std::string out;
  for (std::size_t i = 0; i < v.size(); ++i) {
    out += (i ? sep : "") + std::to_string(v[i]);
  }
  return out;
}

std::string element_set(const FiniteGroup& g, const SubgroupRef& h) {
  std::string out = "{";
  for (std::size_t i = 0; i < h.elements.size(); ++i) {
    out += (i ? ", " : "") + g.label(h.elements[i]);
  }
  return out + "}";
}

void add_subgroup_legend(RunReport& rep, const GroupCatalog& cat) {
  for (int c = 0; c < cat.class_count(); ++c) {
    const auto& h = cat.representative(c);
    rep.legend.push_back(cat.class_name(c) + " = " + element_set(cat.group(), h) + " (order " +
                         std::to_string(h.order()) + ")");
  }
}

void add_legend(RunReport& rep, const TildeBurnsideRing& ring, const std::vector<TBClass>& used) {
  add_subgroup_legend(rep, ring.catalog());
  std::vector<TBClass> nontrivial;
  for (TBClass c : used) {
    if (ring.info(c).character != 0) {
      nontrivial.push_back(c);
    }
  }
  for (auto& line : ring.legend(nontrivial)) {
    rep.legend.push_back(std::move(line));
  }
}

void collect(const TBElement& a, std::vector<TBClass>& used) {
  for (const auto& [k, c] : a.terms()) {
    used.push_back(TBClass{k});
  }
}

void collect(const TBSeries& s, std::vector<TBClass>& used) {
  for (const auto& [d, c] : s.terms()) {
    collect(c, used);
  }
}

void collect(const FactoredSeries& f, std::vector<TBClass>& used) {
  for (const auto& b : f.factors()) {
    used.push_back(b.cls);
  }
}

template <class Ring>
void emit_series(RunReport& rep, const MultiSeries<Ring>& s) {
  rep.lines.push_back("series " + ring_tag_of(s.ring()) + " arity " + std::to_string(s.arity()) + " bound " +
                      join(s.bound().exponents));
  std::istringstream body(series_to_text(s));
  for (std::string line; std::getline(body, line);) {
    rep.lines.push_back("  " + line);
  }
  rep.result["series"] = series_to_json(s);
}

AnySeries load_series(const json& j, const std::shared_ptr<const TildeBurnsideRing>& ring) {
  const std::string tag = j.value("ring", "");
  const RingKind kind = parse_ring_tag(tag);
  if (kind == RingKind::Integer) {
    return series_from_json(j, std::make_shared<const IntegerRing>());
  }
  if (!ring) {
    throw UsageError("a series over " + tag + " needs --group");
  }
  switch (kind) {
    case RingKind::TildeBurnside:
      return series_from_json(j, ring);
    case RingKind::BurnsideQ:
      return series_from_json(j, std::make_shared<const BurnsideQRing>(ring->burnside_ptr()));
    default:
      return series_from_json(j, ring->r1_ptr());
  }
}

std::shared_ptr<const TildeBurnsideRing> optional_ring(const CommandRequest& req) {
  return req.group.empty() ? nullptr : load_ring(req);
}

const std::string& series_path(const CommandRequest& req, std::size_t i) {
  if (req.series.size() <= i) {
    throw UsageError(i == 0 ? "missing required option --series" : "this command needs " + std::to_string(i + 1) +
                                                                       " --series files");
  }
  return req.series[i];
}

TBSeries load_tb_series(const CommandRequest& req, const std::shared_ptr<const TildeBurnsideRing>& ring,
                        std::size_t i = 0) {
  return series_from_json(read_json_file(series_path(req, i), "series"), ring);
}

void emit_used_legend(RunReport& rep, const std::shared_ptr<const TildeBurnsideRing>& ring, const AnySeries& s) {
  if (!ring) {
    return;
  }
  std::vector<TBClass> used;
  if (const auto* tb = std::get_if<TBSeries>(&s)) {
    collect(*tb, used);
  }
  add_legend(rep, *ring, used);
}

// ---------------------------------------------------------------- group / ring

RunReport cmd_group_inspect(const CommandRequest& req) {
  const auto ring = load_ring(req);
  const auto& cat = ring->catalog();
  const auto& g = ring->group();
  RunReport rep;
  rep.lines.push_back("order " + std::to_string(g.order()));
  rep.lines.push_back("subgroup classes " + std::to_string(cat.class_count()));
  json classes = json::array();
  for (int c = 0; c < cat.class_count(); ++c) {
    const auto& cls = cat.classes()[static_cast<std::size_t>(c)];
    const auto chars = cat.characters(c).size();
    rep.lines.push_back("  " + cat.class_name(c) + ": " + element_set(g, cls.representative) + ", order " +
                        std::to_string(cls.representative.order()) + ", conjugates " +
                        std::to_string(cls.members.size()) + ", characters " + std::to_string(chars));
    classes.push_back({{"name", cat.class_name(c)},
                       {"elements", cls.representative.elements},
                       {"order", cls.representative.order()},
                       {"conjugates", cls.members.size()},
                       {"characters", chars}});
  }
  rep.lines.push_back("equipped classes " + std::to_string(ring->class_count()));
  json names = json::array();
  std::vector<TBClass> all;
  for (int id = 0; id < ring->class_count(); ++id) {
    rep.lines.push_back("  " + ring->class_name(TBClass{id}));
    names.push_back(ring->class_name(TBClass{id}));
    all.push_back(TBClass{id});
  }
  rep.result = {{"order", g.order()}, {"labels", g.labels()}, {"subgroup_classes", classes}, {"equipped_classes", names}};
  add_legend(rep, *ring, all);
  return rep;
}

void emit_element(RunReport& rep, const TildeBurnsideRing& ring, const TBElement& x) {
  rep.lines.push_back(ring.render(x));
  rep.result = {{"element", ring.render(x)}, {"terms", ring.to_json(x)}};
  std::vector<TBClass> used;
  collect(x, used);
  add_legend(rep, ring, used);
}

RunReport cmd_ring_mul(const CommandRequest& req) {
  const auto ring = load_ring(req);
  const auto a = ring->parse(require(req.a, "--a"));
  const auto b = ring->parse(require(req.b, "--b"));
  RunReport rep;
  emit_element(rep, *ring, ring->mul(a, b));
  return rep;
}

RunReport cmd_ring_sympow(const CommandRequest& req) {
  const auto ring = load_ring(req);
  if (req.k < 0) {
    throw ValidationError("symmetric power degree must be nonnegative, got " + std::to_string(req.k));
  }
  TBElement out;
  if (!req.cls.empty()) {
    out = ring->symmetric_power(ring->parse_class(req.cls), req.k);
  } else {
    out = ring->symmetric_power(ring->realize(ring->parse(require(req.a, "--class or --a"))), req.k);
  }
  RunReport rep;
  emit_element(rep, *ring, out);
  return rep;
}

RunReport cmd_ring_reduce(const CommandRequest& req) {
  const auto ring = load_ring(req);
  const auto a = ring->parse(require(req.a, "--a"));
  const std::string to = require(req.to, "--to");
  RunReport rep;
  std::string text;
  if (to == "rho") {
    text = ring->burnside().render(ring->rho(a));
  } else if (to == "rhohat") {
    text = std::to_string(ring->rhohat(a));
  } else if (to == "eps") {
    text = ring->r1().render(ring->eps(a));
  } else {
    throw UsageError("--to must be rho, rhohat or eps, got '" + to + "'");
  }
  rep.lines.push_back(text);
  rep.result = {{"reduction", to}, {"element", text}};
  if (to == "eps") {
    for (int i = 1; i < ring->r1().character_count(); ++i) {
      rep.legend.push_back(ring->r1().basis_name(i) + " = " + describe_character(ring->group(), ring->r1().character(i)));
    }
  } else {
    add_subgroup_legend(rep, ring->catalog());
  }
  return rep;
}

// ---------------------------------------------------------------- series

RunReport cmd_series_expand(const CommandRequest& req) {
  const auto ring = load_ring(req);
  const MultiDegree bound = series_bound(req);
  FactoredSeries f;
  if (!req.factors.empty()) {
    f = factored_from_text(*ring, req.factors, bound.arity());
  } else {
    f = factored_from_json(*ring, read_json_file(series_path(req, 0), "factored series"));
  }
  const TBSeries s = expand(ring, f, bound);
  RunReport rep;
  emit_series(rep, s);
  std::vector<TBClass> used;
  collect(s, used);
  collect(f, used);
  add_legend(rep, *ring, used);
  return rep;
}

RunReport cmd_series_mul(const CommandRequest& req) {
  const auto ring = optional_ring(req);
  const AnySeries a = load_series(read_json_file(series_path(req, 0), "series"), ring);
  const AnySeries b = load_series(read_json_file(series_path(req, 1), "series"), ring);
  if (a.index() != b.index()) {
    throw MathError("cannot multiply series over different rings");
  }
  RunReport rep;
  std::visit(
      [&](const auto& x) {
        using S = std::decay_t<decltype(x)>;
        const S out = series_mul(x, std::get<S>(b));
        emit_series(rep, out);
        emit_used_legend(rep, ring, AnySeries(out));
      },
      a);
  return rep;
}

RunReport cmd_series_invert(const CommandRequest& req) {
  const auto ring = optional_ring(req);
  const AnySeries a = load_series(read_json_file(series_path(req, 0), "series"), ring);
  RunReport rep;
  std::visit(
      [&](const auto& x) {
        const auto out = series_inverse(x);
        emit_series(rep, out);
        emit_used_legend(rep, ring, AnySeries(out));
      },
      a);
  return rep;
}

std::vector<MultiDegree> parse_images(const std::string& text) {
  std::vector<MultiDegree> out;
  std::stringstream in(text);
  for (std::string item; std::getline(in, item, ';');) {
    out.push_back(parse_bound(item));
  }
  if (out.empty()) {
    throw ParseError("--images: no images given");
  }
  return out;
}

RunReport cmd_series_subst(const CommandRequest& req) {
  const auto ring = optional_ring(req);
  const AnySeries a = load_series(read_json_file(series_path(req, 0), "series"), ring);
  const auto images = parse_images(require(req.images, "--images"));
  const MultiDegree bound = series_bound(req);
  RunReport rep;
  std::visit(
      [&](const auto& x) {
        const auto out = substitute_monomial(x, images, bound);
        emit_series(rep, out);
        emit_used_legend(rep, ring, AnySeries(out));
      },
      a);
  return rep;
}

RunReport cmd_series_factor(const CommandRequest& req) {
  const auto ring = load_ring(req);
  const TBSeries s = load_tb_series(req, ring);
  const FactoredSeries f = factorize(s);
  RunReport rep;
  rep.lines.push_back(factored_to_text(*ring, f));
  rep.result = {{"factored", factored_to_json(*ring, f)}, {"text", factored_to_text(*ring, f)}};
  std::vector<TBClass> used;
  collect(f, used);
  add_legend(rep, *ring, used);
  return rep;
}

RunReport cmd_series_reduce(const CommandRequest& req) {
  const auto ring = load_ring(req);
  const TBSeries s = load_tb_series(req, ring);
  const std::string to = require(req.to, "--to");
  RunReport rep;
  if (to == "rho") {
    emit_series(rep, reduce_rho(s, std::make_shared<const BurnsideQRing>(ring->burnside_ptr())));
    add_subgroup_legend(rep, ring->catalog());
  } else if (to == "rhohat") {
    emit_series(rep, reduce_rhohat(s));
  } else if (to == "eps") {
    emit_series(rep, reduce_eps(s));
    for (int i = 1; i < ring->r1().character_count(); ++i) {
      rep.legend.push_back(ring->r1().basis_name(i) + " = " + describe_character(ring->group(), ring->r1().character(i)));
    }
  } else {
    throw UsageError("--to must be rho, rhohat or eps, got '" + to + "'");
  }
  return rep;
}

// ---------------------------------------------------------------- resolution

RunReport cmd_resolution_validate(const CommandRequest& req) {
  const ResolutionData res = load_res(req);
  const ValidationReport v = validate(res);
  RunReport rep;
  rep.lines.push_back(v.ok() ? "valid" : "invalid: " + std::to_string(v.failures.size()) + " failure(s)");
  for (const auto& f : v.failures) {
    rep.lines.push_back("  " + f);
  }
  rep.notes = v.notes;
  rep.result = {{"valid", v.ok()}, {"failures", v.failures}};
  rep.exit_code = v.ok() ? 0 : 1;
  add_subgroup_legend(rep, res.ring->catalog());
  return rep;
}

RunReport cmd_resolution_mmatrix(const CommandRequest& req) {
  const ResolutionData res = load_res(req);
  const MultMatrix m = multiplicity_matrix(res.graph);
  RunReport rep;
  rep.lines.push_back("vertices " + join(res.graph.vertex_ids, " "));
  json rows = json::array();
  for (std::size_t i = 0; i < m.size(); ++i) {
    std::string line = "  " + std::to_string(res.graph.vertex_ids[i]) + ":";
    for (auto x : m[i]) {
      line += " " + std::to_string(x);
    }
    rep.lines.push_back(line);
    rows.push_back(m[i]);
  }
  rep.result = {{"vertices", res.graph.vertex_ids}, {"m", rows}};
  return rep;
}

RunReport cmd_resolution_omega(const CommandRequest& req) {
  const ResolutionData res = load_res(req);
  require_valid(res);
  const MultMatrix m = multiplicity_matrix(res.graph);
  RunReport rep;
  json strata = json::array();
  std::vector<TBClass> used;
  for (const auto& s : res.strata) {
    const MultiDegree w = omega_vector(res, m, s);
    const std::int64_t n = n_value(res, m, s);
    const TBClass c = res.ring->class_of(s.isotropy, *s.character);
    used.push_back(c);
    rep.lines.push_back(s.id + ": omega (" + join(w.exponents) + ") n " + std::to_string(n) + " chi " +
                        std::to_string(s.chi) + " class " + res.ring->class_name(c));
    strata.push_back({{"id", s.id},
                      {"omega", w.exponents},
                      {"n", n},
                      {"chi", s.chi},
                      {"class", res.ring->class_name(c)}});
  }
  rep.result = {{"strata", strata}};
  add_legend(rep, *res.ring, used);
  return rep;
}

// ---------------------------------------------------------------- invariants

RunReport cmd_poincare(const CommandRequest& req) {
  const ResolutionData res = load_res(req);
  const MultiDegree bound = series_bound(req);
  const PoincareResult p = poincare_from_resolution(res, bound);
  RunReport rep;
  const std::string text = factored_to_text(*res.ring, p.factored);
  rep.lines.push_back(text);
  rep.lines.push_back("expansion:");
  RunReport expansion;
  emit_series(expansion, p.expansion);
  for (auto& line : expansion.lines) {
    rep.lines.push_back(std::move(line));
  }
  rep.result = {{"factored", factored_to_json(*res.ring, p.factored)},
                {"text", text},
                {"expansion", expansion.result["series"]}};
  std::vector<TBClass> used;
  collect(p.factored, used);
  collect(p.expansion, used);
  add_legend(rep, *res.ring, used);
  return rep;
}

void emit_zetas(RunReport& rep, const BurnsideRing& burnside, const ZetaPair& z) {
  rep.lines.push_back("zeta: " + zeta_to_text(burnside, z.zeta));
  rep.lines.push_back("zeta-tilde: " + zeta_to_text(burnside, z.zeta_tilde));
  rep.result["zeta"] = zeta_to_json(burnside, z.zeta);
  rep.result["zeta_tilde"] = zeta_to_json(burnside, z.zeta_tilde);
}

RunReport cmd_zeta_from_resolution(const CommandRequest& req) {
  const ResolutionData res = load_res(req);
  RunReport rep;
  emit_zetas(rep, res.ring->burnside(), zeta_from_resolution(res));
  add_subgroup_legend(rep, res.ring->catalog());
  return rep;
}

RunReport cmd_zeta_recover(const CommandRequest& req) {
  const RecoveryMode mode = parse_recovery_mode(req.mode);
  std::shared_ptr<const TildeBurnsideRing> ring;
  FactoredSeries p;
  if (!req.resolution.empty()) {
    const ResolutionData res = load_res(req);
    ring = res.ring;
    p = factorize(poincare_from_resolution(res, series_bound(req)).expansion);
  } else {
    ring = load_ring(req);
    p = factored_from_json(*ring, read_json_file(series_path(req, 0), "factored series"));
  }
  const RecoveryResult r = recover_zeta(*ring, p, mode);
  RunReport rep;
  emit_zetas(rep, ring->burnside(), r.zetas);
  rep.result["mode"] = req.mode;
  rep.result["input"] = factored_to_text(*ring, p);
  rep.warnings = r.warnings;
  rep.notes = r.selections;
  std::vector<TBClass> used;
  collect(p, used);
  add_legend(rep, *ring, used);
  return rep;
}

RunReport cmd_check_statement1(const CommandRequest& req) {
  const ResolutionData res = load_res(req);
  if (!res.nonequivariant) {
    throw ValidationError("resolution has no non-equivariant series to compare against");
  }
  const MultiDegree bound = series_bound(req);
  const PoincareResult p = poincare_from_resolution(res, bound);
  const bool ok = statement1_rhohat_check(res.ring, p.factored, *res.nonequivariant,
                                          res.group().order() * res.r, bound);
  RunReport rep;
  rep.lines.push_back(std::string("statement1 rhohat check: ") + (ok ? "pass" : "fail"));
  rep.result = {{"check", "statement1"}, {"passed", ok}, {"bound", bound.exponents}};
  rep.exit_code = ok ? 0 : 1;
  return rep;
}

// ---------------------------------------------------------------- fixtures

void emit_checks(RunReport& rep, const std::string& kind, const std::vector<FixtureCheck>& checks, json& out) {
  for (const auto& c : checks) {
    rep.lines.push_back((c.passed ? "PASS " : "FAIL ") + kind + " " + c.name);
    for (const auto& d : c.detail) {
      rep.lines.push_back("  " + d);
    }
    out.push_back({{"kind", kind}, {"name", c.name}, {"passed", c.passed}, {"detail", c.detail}});
    if (!c.passed) {
      rep.exit_code = 1;
    }
  }
}

RunReport cmd_fixtures_run(const CommandRequest& req) {
  const std::string dir = req.fixtures.empty() ? default_fixture_dir() : req.fixtures;
  RunReport rep;
  json items = json::array();
  emit_checks(rep, "file", check_fixture_files(dir), items);
  emit_checks(rep, "golden", run_golden_cases(dir), items);
  std::vector<FixtureCheck> criteria;
  for (const auto& c : run_acceptance(dir, req.seed)) {
    FixtureCheck f{c.id + " " + c.title, c.passed, {}};
    if (!c.passed) {
      f.detail.push_back(c.detail);
    }
    criteria.push_back(std::move(f));
  }
  emit_checks(rep, "criterion", criteria, items);
  const auto failed = std::count_if(items.begin(), items.end(), [](const json& j) { return !j["passed"].get<bool>(); });
  rep.lines.push_back(std::to_string(items.size() - static_cast<std::size_t>(failed)) + " passed, " +
                      std::to_string(failed) + " failed");
  rep.result = {{"checks", items}, {"seed", req.seed}};
  return rep;
}

struct Handler {
  const char* module;
  std::function<RunReport(const CommandRequest&)> fn;
};

const std::map<std::string, Handler>& handlers() {
  static const std::map<std::string, Handler> table = {
      {"group inspect", {"group", cmd_group_inspect}},
      {"ring mul", {"burnside", cmd_ring_mul}},
      {"ring sympow", {"burnside", cmd_ring_sympow}},
      {"ring reduce", {"burnside", cmd_ring_reduce}},
      {"series expand", {"series", cmd_series_expand}},
      {"series mul", {"series", cmd_series_mul}},
      {"series invert", {"series", cmd_series_invert}},
      {"series subst", {"series", cmd_series_subst}},
      {"series factor", {"series", cmd_series_factor}},
      {"series reduce", {"series", cmd_series_reduce}},
      {"resolution validate", {"resolution", cmd_resolution_validate}},
      {"resolution mmatrix", {"resolution", cmd_resolution_mmatrix}},
      {"resolution omega", {"resolution", cmd_resolution_omega}},
      {"poincare", {"invariants", cmd_poincare}},
      {"zeta from-resolution", {"invariants", cmd_zeta_from_resolution}},
      {"zeta recover", {"invariants", cmd_zeta_recover}},
      {"check statement1", {"invariants", cmd_check_statement1}},
      {"fixtures run", {"fixtures", cmd_fixtures_run}},
  };
  return table;
}

std::string command_key(const std::vector<std::string>& command) {
  std::string key;
  for (const auto& c : command) {
    key += (key.empty() ? "" : " ") + c;
  }
  return key;
}

std::vector<std::string> read_lines(const std::string& text) {
  std::vector<std::string> out;
  std::istringstream in(text);
  for (std::string line; std::getline(in, line);) {
    out.push_back(line);
  }
  return out;
}

std::vector<std::string> line_diff(const std::vector<std::string>& expected, const std::vector<std::string>& actual) {
  std::vector<std::string> out;
  const std::size_t n = std::max(expected.size(), actual.size());
  for (std::size_t i = 0; i < n; ++i) {
    const std::string* e = i < expected.size() ? &expected[i] : nullptr;
    const std::string* a = i < actual.size() ? &actual[i] : nullptr;
    if (e && a && *e == *a) {
      continue;
    }
    const std::string at = "line " + std::to_string(i + 1) + ": ";
    out.push_back("- " + at + (e ? *e : "<missing>"));
    out.push_back("+ " + at + (a ? *a : "<missing>"));
  }
  return out;
}

}  // namespace

std::string default_fixture_dir() { return EQPS_FIXTURE_DIR; }

int exit_code_for(const std::exception& e) {
  if (dynamic_cast<const ParseError*>(&e) || dynamic_cast<const UsageError*>(&e)) {
    return 2;
  }
  return 1;
}

std::optional<CommandRequest> parse_command_line(const std::vector<std::string>& args, std::string* help) {
  CommandRequest req;
  CLI::App app{"Equivariant Poincare series and monodromy zeta functions", "eqps"};
  app.require_subcommand(1);
  app.add_option("--group", req.group, "group JSON file");
  app.add_option("--resolution", req.resolution, "resolution JSON file");
  app.add_option("--series", req.series, "series JSON file (repeatable)");
  app.add_option("--bound", req.bound, "truncation bound, e.g. 4,4");
  app.add_option("--mode", req.mode, "recovery mode")->check(CLI::IsMember({"free", "general"}));
  app.add_option("--format", req.format, "output format")->check(CLI::IsMember({"text", "json"}));
  app.add_option("--seed", req.seed, "seed for randomized checks");
  app.add_option("--out", req.out, "write output to this file");
  app.add_option("--class", req.cls, "class name, e.g. [G/H1]_{a1}");
  app.add_option("--k", req.k, "symmetric power degree");
  app.add_option("--a", req.a, "first ring element");
  app.add_option("--b", req.b, "second ring element");
  app.add_option("--to", req.to, "reduction target: rho, rhohat or eps");
  app.add_option("--images", req.images, "substitution images, e.g. 1,1;0,2");
  app.add_option("--factors", req.factors, "factored series in text form");
  app.add_option("--fixtures", req.fixtures, "fixture directory");
  app.add_flag("--timing", req.timing, "report wall-clock time");

  const std::vector<std::pair<std::string, std::vector<std::string>>> tree = {
      {"group", {"inspect"}},
      {"ring", {"mul", "sympow", "reduce"}},
      {"series", {"expand", "mul", "invert", "subst", "factor", "reduce"}},
      {"resolution", {"validate", "mmatrix", "omega"}},
      {"poincare", {}},
      {"zeta", {"from-resolution", "recover"}},
      {"check", {"statement1"}},
      {"fixtures", {"run"}},
  };
  std::vector<std::pair<CLI::App*, std::vector<CLI::App*>>> subs;
  for (const auto& [name, leaves] : tree) {
    CLI::App* sub = app.add_subcommand(name);
    sub->fallthrough();
    std::vector<CLI::App*> children;
    if (!leaves.empty()) {
      sub->require_subcommand(1);
      for (const auto& leaf : leaves) {
        CLI::App* child = sub->add_subcommand(leaf);
        child->fallthrough();
        children.push_back(child);
      }
    }
    subs.emplace_back(sub, std::move(children));
  }

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(std::move(reversed));
  } catch (const CLI::CallForHelp&) {
    if (help) {
      *help = app.help();
    }
    return std::nullopt;
  } catch (const CLI::ParseError& e) {
    throw UsageError(e.what());
  }
  for (const auto& [sub, children] : subs) {
    if (!sub->parsed()) {
      continue;
    }
    req.command.push_back(sub->get_name());
    for (CLI::App* child : children) {
      if (child->parsed()) {
        req.command.push_back(child->get_name());
      }
    }
  }
  return req;
}

RunReport run(const CommandRequest& request) {
  const std::string key = command_key(request.command);
  const auto it = handlers().find(key);
  if (it == handlers().end()) {
    throw UsageError("unknown subcommand '" + key + "'");
  }
  const std::string context = std::string(it->second.module) + ": ";
  const auto start = std::chrono::steady_clock::now();
  RunReport rep;
  try {
    rep = it->second.fn(request);
  } catch (const UsageError&) {
    throw;
  } catch (const ParseError& e) {
    throw ParseError(context + e.what());
  } catch (const ValidationError& e) {
    throw ValidationError(context + e.what());
  } catch (const MathError& e) {
    throw MathError(context + e.what());
  }
  rep.command = key;
  if (request.timing) {
    rep.timing_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
  }
  return rep;
}

std::string render_report(const RunReport& report, const std::string& format) {
  if (format == "json") {
    json j = {{"command", report.command},
              {"exit_code", report.exit_code},
              {"result", report.result},
              {"text", report.lines},
              {"warnings", report.warnings},
              {"notes", report.notes},
              {"legend", report.legend}};
    if (report.timing_ms) {
      j["timing_ms"] = *report.timing_ms;
    }
    return j.dump(2) + "\n";
  }
  std::ostringstream out;
  for (const auto& line : report.lines) {
    out << line << '\n';
  }
  const auto block = [&](const char* title, const std::vector<std::string>& items) {
    if (items.empty()) {
      return;
    }
    out << title << ":\n";
    for (const auto& item : items) {
      out << "  " << item << '\n';
    }
  };
  block("warnings", report.warnings);
  block("notes", report.notes);
  block("legend", report.legend);
  if (report.timing_ms) {
    out << "timing: " << *report.timing_ms << " ms\n";
  }
  return out.str();
}

std::vector<FixtureCheck> check_fixture_files(const std::string& dir) {
  std::vector<std::string> paths;
  for (const auto& entry : fs::recursive_directory_iterator(dir)) {
    if (entry.is_regular_file() && entry.path().extension() == ".json") {
      paths.push_back(fs::relative(entry.path(), dir).generic_string());
    }
  }
  std::sort(paths.begin(), paths.end());
  std::vector<FixtureCheck> out;
  for (const auto& rel : paths) {
    FixtureCheck c{rel, true, {}};
    try {
      read_json_file((fs::path(dir) / rel).string(), "fixture");
    } catch (const ParseError& e) {
      c.passed = false;
      c.detail.push_back(std::string("parse failure: ") + e.what());
    }
    out.push_back(std::move(c));
  }
  return out;
}

std::vector<FixtureCheck> run_golden_cases(const std::string& dir) {
  std::vector<FixtureCheck> out;
  json manifest;
  try {
    manifest = read_json_file((fs::path(dir) / "manifest.json").string(), "manifest");
  } catch (const ParseError& e) {
    out.push_back(FixtureCheck{"manifest.json", false, {std::string("parse failure: ") + e.what()}});
    return out;
  }
  static const std::vector<std::string> path_flags = {"--group", "--resolution", "--series", "--fixtures"};
  for (const auto& item : manifest.value("cases", json::array())) {
    FixtureCheck c{item.value("name", "?"), false, {}};
    try {
      std::vector<std::string> args = item.at("args").get<std::vector<std::string>>();
      for (std::size_t i = 0; i + 1 < args.size(); ++i) {
        if (std::find(path_flags.begin(), path_flags.end(), args[i]) != path_flags.end() &&
            fs::path(args[i + 1]).is_relative()) {
          args[i + 1] = (fs::path(dir) / args[i + 1]).string();
        }
      }
      const auto req = parse_command_line(args);
      if (!req) {
        throw UsageError("case requests help");
      }
      const std::string expected_path = (fs::path(dir) / item.at("expected").get<std::string>()).string();
      std::ifstream in(expected_path);
      if (!in) {
        throw ParseError("cannot open expected output '" + item.at("expected").get<std::string>() + "'");
      }
      const std::string expected((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
      int code = 0;
      std::string actual;
      try {
        const RunReport rep = run(*req);
        code = rep.exit_code;
        actual = render_report(rep, req->format);
      } catch (const std::exception& e) {
        code = exit_code_for(e);
        actual = std::string("error: ") + e.what() + "\n";
      }
      const int want_code = item.value("exit", 0);
      c.passed = code == want_code && actual == expected;
      if (code != want_code) {
        c.detail.push_back("mismatch: exit code " + std::to_string(code) + ", expected " + std::to_string(want_code));
      }
      if (actual != expected) {
        c.detail.push_back("mismatch against " + item.at("expected").get<std::string>() + ":");
        for (auto& d : line_diff(read_lines(expected), read_lines(actual))) {
          c.detail.push_back("  " + d);
        }
      }
    } catch (const json::exception& e) {
      c.detail.push_back(std::string("parse failure: manifest entry: ") + e.what());
    } catch (const std::exception& e) {
      c.detail.push_back(std::string("parse failure: ") + e.what());
    }
    out.push_back(std::move(c));
  }
  return out;
}

}  // namespace eqps
