#include "eqps/resolution.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <set>

#include <nlohmann/json.hpp>

#include "eqps/error.hpp"

namespace eqps {

namespace {

int parse_key(const std::string& key, const std::string& what) {
  try {
    std::size_t used = 0;
    const int v = std::stoi(key, &used);
    if (used != key.size()) {
      throw ParseError("");
    }
    return v;
  } catch (const std::exception&) {
    throw ParseError(what + ": key '" + key + "' is not an integer");
  }
}

Rational json_rational(const nlohmann::json& v, const std::string& what) {
  if (v.is_string()) {
    return parse_rational(v.get<std::string>());
  }
  if (v.is_number_integer()) {
    return Rational(v.get<std::int64_t>());
  }
  throw ParseError(what + ": expected a rational as a string like \"1/2\" or an integer");
}

std::vector<int> compose(const std::vector<int>& p, const std::vector<int>& q) {
  std::vector<int> r(q.size());
  for (std::size_t v = 0; v < q.size(); ++v) {
    r[v] = p[static_cast<std::size_t>(q[v])];
  }
  return r;
}

std::string vertex_name(const DualGraph& g, int pos) { return std::to_string(g.vertex_ids[static_cast<std::size_t>(pos)]); }

}  // namespace

int DualGraph::position(int vertex_id) const {
  const auto it = std::find(vertex_ids.begin(), vertex_ids.end(), vertex_id);
  if (it == vertex_ids.end()) {
    throw ValidationError("unknown vertex " + std::to_string(vertex_id));
  }
  return static_cast<int>(it - vertex_ids.begin());
}

std::vector<std::vector<Rational>> DualGraph::intersection_matrix() const {
  const auto n = static_cast<std::size_t>(vertex_count());
  std::vector<std::vector<Rational>> e(n, std::vector<Rational>(n, Rational(0)));
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      e[i][j] = i == j ? Rational(self_int[i]) : Rational(adjacency[i][j]);
    }
  }
  return e;
}

ResolutionData load_resolution(const nlohmann::json& j, const std::string& base_dir) {
  ResolutionData res;
  try {
    const auto& gdesc = j.at("group");
    FiniteGroup group = gdesc.is_string()
                            ? load_group_file((std::filesystem::path(base_dir) / gdesc.get<std::string>()).string())
                            : load_group(gdesc);
    res.ring = TildeBurnsideRing::create(std::move(group));
    const auto& g = res.group();
    res.r = j.at("r").get<int>();
    if (res.r < 1) {
      throw ParseError("resolution: r must be positive");
    }

    auto& graph = res.graph;
    graph.vertex_ids = j.at("vertices").get<std::vector<int>>();
    const int nv = graph.vertex_count();
    if (nv == 0) {
      throw ParseError("resolution: no vertices");
    }
    if (std::set<int>(graph.vertex_ids.begin(), graph.vertex_ids.end()).size() != graph.vertex_ids.size()) {
      throw ParseError("resolution: duplicate vertex ids");
    }
    auto pos = [&graph](int id, const std::string& where) {
      try {
        return graph.position(id);
      } catch (const ValidationError&) {
        throw ParseError(where + ": unknown vertex " + std::to_string(id));
      }
    };

    graph.self_int.assign(static_cast<std::size_t>(nv), 0);
    std::vector<bool> have_self(static_cast<std::size_t>(nv), false);
    for (const auto& [key, v] : j.at("self_int").items()) {
      const int p = pos(parse_key(key, "self_int"), "self_int");
      graph.self_int[static_cast<std::size_t>(p)] = v.get<std::int64_t>();
      have_self[static_cast<std::size_t>(p)] = true;
    }
    for (int p = 0; p < nv; ++p) {
      if (!have_self[static_cast<std::size_t>(p)]) {
        throw ParseError("self_int: missing vertex " + vertex_name(graph, p));
      }
    }

    graph.adjacency.assign(static_cast<std::size_t>(nv), std::vector<int>(static_cast<std::size_t>(nv), 0));
    if (j.contains("adjacency")) {
      const auto adj = j.at("adjacency").get<std::vector<std::vector<int>>>();
      if (static_cast<int>(adj.size()) != nv ||
          std::any_of(adj.begin(), adj.end(), [nv](const auto& row) { return static_cast<int>(row.size()) != nv; })) {
        throw ParseError("adjacency: matrix must be V x V");
      }
      graph.adjacency = adj;
    }
    if (j.contains("edges")) {
      for (const auto& e : j.at("edges")) {
        const auto pair = e.get<std::vector<int>>();
        if (pair.size() != 2) {
          throw ParseError("edges: every edge is a pair of vertex ids");
        }
        const int a = pos(pair[0], "edges");
        const int b = pos(pair[1], "edges");
        if (a == b) {
          res.load_issues.push_back("edge (" + std::to_string(pair[0]) + "," + std::to_string(pair[1]) +
                                    ") is a self-loop");
          continue;
        }
        if (graph.adjacency[static_cast<std::size_t>(a)][static_cast<std::size_t>(b)] != 0) {
          res.load_issues.push_back("edge (" + std::to_string(pair[0]) + "," + std::to_string(pair[1]) +
                                    ") is listed twice");
        }
        graph.adjacency[static_cast<std::size_t>(a)][static_cast<std::size_t>(b)] = 1;
        graph.adjacency[static_cast<std::size_t>(b)][static_cast<std::size_t>(a)] = 1;
      }
    }

    // Group action on vertices, possibly given on generators only.
    const int n = g.order();
    std::vector<int> identity(static_cast<std::size_t>(nv));
    for (int v = 0; v < nv; ++v) {
      identity[static_cast<std::size_t>(v)] = v;
    }
    std::vector<std::optional<std::vector<int>>> perms(static_cast<std::size_t>(n));
    std::vector<Element> given;
    if (j.contains("action")) {
      for (const auto& [key, v] : j.at("action").items()) {
        const int a = parse_key(key, "action");
        if (a < 0 || a >= n) {
          throw ParseError("action: element " + key + " is not in the group");
        }
        const auto images = v.get<std::vector<int>>();
        if (static_cast<int>(images.size()) != nv) {
          throw ParseError("action: permutation for element " + key + " has the wrong length");
        }
        std::vector<int> perm;
        for (int id : images) {
          perm.push_back(pos(id, "action"));
        }
        std::vector<int> sorted = perm;
        std::sort(sorted.begin(), sorted.end());
        if (sorted != identity) {
          res.load_issues.push_back("action of element " + key + " is not a permutation of the vertices");
          continue;
        }
        perms[static_cast<std::size_t>(a)] = perm;
        given.push_back(a);
      }
    }
    if (perms[0] && *perms[0] != identity) {
      res.load_issues.push_back("identity element acts nontrivially on the vertices");
    }
    perms[0] = identity;
    std::vector<Element> queue{0};
    std::vector<bool> reached(static_cast<std::size_t>(n), false);
    reached[0] = true;
    for (std::size_t head = 0; head < queue.size(); ++head) {
      const Element x = queue[head];
      for (Element s : given) {
        const Element y = g.mul(s, x);
        auto p = compose(*perms[static_cast<std::size_t>(s)], *perms[static_cast<std::size_t>(x)]);
        auto& slot = perms[static_cast<std::size_t>(y)];
        if (!slot) {
          slot = std::move(p);
        } else if (*slot != p) {
          res.load_issues.push_back("vertex action is not a homomorphism: element " + std::to_string(y) +
                                    " acts inconsistently");
          given.clear();
          break;
        }
        if (!reached[static_cast<std::size_t>(y)]) {
          reached[static_cast<std::size_t>(y)] = true;
          queue.push_back(y);
        }
      }
    }
    graph.action.resize(static_cast<std::size_t>(n));
    for (Element a = 0; a < n; ++a) {
      if (!perms[static_cast<std::size_t>(a)]) {
        res.load_issues.push_back("vertex action of element " + std::to_string(a) +
                                  " is not determined by the given elements");
        perms[static_cast<std::size_t>(a)] = identity;
      }
      graph.action[static_cast<std::size_t>(a)] = *perms[static_cast<std::size_t>(a)];
    }

    for (const auto& v : j.at("valuations")) {
      ValuationDescriptor d;
      d.index = v.at("i").get<int>();
      const auto kind = v.at("kind").get<std::string>();
      if (kind == "curve") {
        d.kind = ValuationDescriptor::Kind::Curve;
      } else if (kind == "divisorial") {
        d.kind = ValuationDescriptor::Kind::Divisorial;
      } else {
        throw ParseError("valuations: unknown kind '" + kind + "'");
      }
      d.component = pos(v.at("component").get<int>(), "valuations");
      res.valuations.push_back(d);
    }
    std::sort(res.valuations.begin(), res.valuations.end(),
              [](const auto& a, const auto& b) { return a.index < b.index; });
    if (static_cast<int>(res.valuations.size()) != res.r) {
      throw ParseError("valuations: expected " + std::to_string(res.r) + " entries, got " +
                       std::to_string(res.valuations.size()));
    }
    for (int i = 0; i < res.r; ++i) {
      if (res.valuations[static_cast<std::size_t>(i)].index != i + 1) {
        throw ParseError("valuations: indices must be exactly 1.." + std::to_string(res.r));
      }
    }

    for (const auto& s : j.at("strata")) {
      Stratum st;
      st.id = s.contains("id") ? (s.at("id").is_string() ? s.at("id").get<std::string>() : s.at("id").dump())
                               : std::to_string(res.strata.size());
      st.component = pos(s.at("component").get<int>(), "stratum " + st.id);
      st.chi = s.at("chi").get<std::int64_t>();
      auto h = s.at("H").get<std::vector<int>>();
      std::sort(h.begin(), h.end());
      st.isotropy = SubgroupRef{h};
      auto hh = s.at("Hhat").get<std::vector<int>>();
      std::sort(hh.begin(), hh.end());
      st.slice_isotropy = SubgroupRef{hh};
      if (s.contains("alpha")) {
        for (const auto& [key, v] : s.at("alpha").items()) {
          st.alpha_values[parse_key(key, "stratum " + st.id + " alpha")] = json_rational(v, "stratum " + st.id);
        }
      }
      if (!is_subgroup(g, st.isotropy.elements)) {
        res.load_issues.push_back("stratum " + st.id + ": H is not a subgroup");
      } else if (st.alpha_values.empty()) {
        st.character = one_dim_characters(g, st.isotropy).front();
      } else {
        try {
          st.character = extend_character(g, st.isotropy, st.alpha_values);
        } catch (const ValidationError& e) {
          res.load_issues.push_back("stratum " + st.id + ": alpha: " + e.what());
        }
      }
      res.strata.push_back(std::move(st));
    }

    if (j.contains("smooth_chi")) {
      for (const auto& [key, v] : j.at("smooth_chi").items()) {
        res.smooth_chi[pos(parse_key(key, "smooth_chi"), "smooth_chi")] = v.get<std::int64_t>();
      }
    }

    if (j.contains("nonequivariant")) {
      const auto& ne = j.at("nonequivariant");
      const int arity = ne.at("arity").get<int>();
      if (arity != n * res.r) {
        throw ParseError("nonequivariant: arity must be |G|*r = " + std::to_string(n * res.r));
      }
      std::vector<IntegerFactor> factors;
      for (const auto& f : ne.at("factors")) {
        IntegerFactor factor{MultiDegree(f.at("w").get<std::vector<int>>()), f.at("e").get<std::int64_t>()};
        if (factor.w.arity() != arity || factor.w.is_zero()) {
          throw ParseError("nonequivariant: factor degree must be nonzero with arity " + std::to_string(arity));
        }
        factors.push_back(std::move(factor));
      }
      res.nonequivariant = std::move(factors);
    }
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("resolution: ") + e.what());
  }
  return res;
}

ResolutionData load_resolution_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    throw ParseError("cannot open resolution file " + path);
  }
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw ParseError("resolution file " + path + ": " + e.what());
  }
  return load_resolution(j, std::filesystem::path(path).parent_path().string());
}

MultMatrix multiplicity_matrix(const DualGraph& graph) {
  const auto n = static_cast<std::size_t>(graph.vertex_count());
  auto a = graph.intersection_matrix();
  std::vector<std::vector<Rational>> inv(n, std::vector<Rational>(n, Rational(0)));
  for (std::size_t i = 0; i < n; ++i) {
    inv[i][i] = 1;
  }
  // Gauss-Jordan over exact rationals.
  for (std::size_t col = 0; col < n; ++col) {
    std::size_t pivot = col;
    while (pivot < n && a[pivot][col] == 0) {
      ++pivot;
    }
    if (pivot == n) {
      throw ValidationError("intersection matrix is singular");
    }
    std::swap(a[pivot], a[col]);
    std::swap(inv[pivot], inv[col]);
    const Rational p = a[col][col];
    for (std::size_t k = 0; k < n; ++k) {
      a[col][k] /= p;
      inv[col][k] /= p;
    }
    for (std::size_t row = 0; row < n; ++row) {
      if (row == col || a[row][col] == 0) {
        continue;
      }
      const Rational f = a[row][col];
      for (std::size_t k = 0; k < n; ++k) {
        a[row][k] -= f * a[col][k];
        inv[row][k] -= f * inv[col][k];
      }
    }
  }
  MultMatrix m(n, std::vector<std::int64_t>(n, 0));
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      const Rational v = -inv[i][j];
      if (!is_integral(v)) {
        throw ValidationError("multiplicity matrix entry (" + vertex_name(graph, static_cast<int>(i)) + "," +
                              vertex_name(graph, static_cast<int>(j)) + ") = " + to_string(v) + " is not integral");
      }
      if (v <= 0) {
        throw ValidationError("multiplicity matrix entry (" + vertex_name(graph, static_cast<int>(i)) + "," +
                              vertex_name(graph, static_cast<int>(j)) + ") = " + to_string(v) + " is not positive");
      }
      m[i][j] = v.numerator();
    }
  }
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < i; ++j) {
      if (m[i][j] != m[j][i]) {
        throw ValidationError("multiplicity matrix is not symmetric");
      }
    }
  }
  return m;
}

MultiDegree omega_vector(const ResolutionData& res, const MultMatrix& m, const Stratum& s) {
  MultiDegree out = MultiDegree::zero(res.r);
  for (int i = 0; i < res.r; ++i) {
    const auto sigma = static_cast<std::size_t>(res.valuations[static_cast<std::size_t>(i)].component);
    std::int64_t sum = 0;
    for (Element a = 0; a < res.group().order(); ++a) {
      const auto target = static_cast<std::size_t>(
          res.graph.action[static_cast<std::size_t>(a)][static_cast<std::size_t>(s.component)]);
      sum = checked_add(sum, m[sigma][target]);
    }
    if (sum > 1'000'000'000) {
      throw MathError("omega component too large");
    }
    out.exponents[static_cast<std::size_t>(i)] = static_cast<int>(sum);
  }
  return out;
}

std::int64_t n_value(const ResolutionData& res, const MultMatrix& m, const Stratum& s) {
  std::int64_t sum = 0;
  for (const auto& v : res.valuations) {
    sum = checked_add(sum, m[static_cast<std::size_t>(v.component)][static_cast<std::size_t>(s.component)]);
  }
  return sum;
}

ValidationReport validate(const ResolutionData& res) {
  ValidationReport report;
  report.failures = res.load_issues;
  const auto& g = res.group();
  const auto& graph = res.graph;
  const int n = g.order();
  const int nv = graph.vertex_count();
  auto act = [&graph](Element a, int v) {
    return graph.action[static_cast<std::size_t>(a)][static_cast<std::size_t>(v)];
  };

  bool action_ok = res.load_issues.empty();
  for (Element a = 0; a < n && action_ok; ++a) {
    for (Element b = 0; b < n && action_ok; ++b) {
      for (int v = 0; v < nv; ++v) {
        if (act(g.mul(a, b), v) != act(a, act(b, v))) {
          report.failures.push_back("vertex action is not a group action at (" + std::to_string(a) + "," +
                                    std::to_string(b) + ")");
          action_ok = false;
          break;
        }
      }
    }
  }

  for (int u = 0; u < nv; ++u) {
    if (graph.self_int[static_cast<std::size_t>(u)] >= 0) {
      report.failures.push_back("self-intersection of vertex " + vertex_name(graph, u) + " is not negative");
    }
    for (int v = 0; v < nv; ++v) {
      const int x = graph.adjacency[static_cast<std::size_t>(u)][static_cast<std::size_t>(v)];
      if (u == v && x != 0) {
        report.failures.push_back("adjacency has a nonzero diagonal entry at vertex " + vertex_name(graph, u));
      }
      if (x != 0 && x != 1) {
        report.failures.push_back("adjacency entry (" + vertex_name(graph, u) + "," + vertex_name(graph, v) +
                                  ") is not 0 or 1");
      }
      if (v > u && x != graph.adjacency[static_cast<std::size_t>(v)][static_cast<std::size_t>(u)]) {
        report.failures.push_back("edge data is not symmetric at (" + vertex_name(graph, u) + "," +
                                  vertex_name(graph, v) + ")");
      }
    }
  }

  for (Element a = 0; a < n; ++a) {
    bool bad_self = false;
    bool bad_edge = false;
    for (int u = 0; u < nv; ++u) {
      if (graph.self_int[static_cast<std::size_t>(act(a, u))] != graph.self_int[static_cast<std::size_t>(u)]) {
        bad_self = true;
      }
      for (int v = 0; v < nv; ++v) {
        if (graph.adjacency[static_cast<std::size_t>(act(a, u))][static_cast<std::size_t>(act(a, v))] !=
            graph.adjacency[static_cast<std::size_t>(u)][static_cast<std::size_t>(v)]) {
          bad_edge = true;
        }
      }
    }
    if (bad_self) {
      report.failures.push_back("self-intersections are not invariant under element " + std::to_string(a));
    }
    if (bad_edge) {
      report.failures.push_back("edges are not invariant under element " + std::to_string(a));
    }
  }

  try {
    const auto m = multiplicity_matrix(graph);
    for (Element a = 0; a < n; ++a) {
      for (int u = 0; u < nv; ++u) {
        for (int v = 0; v < nv; ++v) {
          if (m[static_cast<std::size_t>(act(a, u))][static_cast<std::size_t>(act(a, v))] !=
              m[static_cast<std::size_t>(u)][static_cast<std::size_t>(v)]) {
            report.failures.push_back("multiplicity matrix is not invariant under element " + std::to_string(a));
            u = nv;
            break;
          }
        }
      }
    }
  } catch (const ValidationError& e) {
    report.failures.push_back(e.what());
  }

  for (const auto& s : res.strata) {
    const std::string name = "stratum " + s.id;
    if (!is_subgroup(g, s.isotropy.elements)) {
      continue;  // already reported at load
    }
    for (Element h : s.isotropy.elements) {
      if (act(h, s.component) != s.component) {
        report.failures.push_back(name + ": H does not stabilize component " + vertex_name(graph, s.component) +
                                  " (element " + std::to_string(h) + ")");
        break;
      }
    }
    if (!is_subgroup(g, s.slice_isotropy.elements)) {
      report.failures.push_back(name + ": Hhat is not a subgroup");
    } else if (!std::includes(s.isotropy.elements.begin(), s.isotropy.elements.end(),
                              s.slice_isotropy.elements.begin(), s.slice_isotropy.elements.end())) {
      report.failures.push_back(name + ": Hhat is not contained in H");
    }
    if (s.character && !is_character(g, *s.character)) {
      report.failures.push_back(name + ": alpha is not a character of H");
    }
  }

  // Covering identity per vertex orbit: the strata over the orbit's smooth
  // part cover it with degree |G|/|H| each.
  for (const auto& [p, declared] : res.smooth_chi) {
    std::set<int> orbit;
    for (Element a = 0; a < n; ++a) {
      orbit.insert(act(a, p));
    }
    std::int64_t total = 0;
    for (const auto& s : res.strata) {
      if (orbit.contains(s.component) && s.isotropy.order() > 0 && n % s.isotropy.order() == 0) {
        total += s.chi * (n / s.isotropy.order());
      }
    }
    if (total != declared) {
      report.failures.push_back("Euler characteristic of the smooth part over vertex orbit of " +
                                vertex_name(graph, p) + ": strata give " + std::to_string(total) + ", declared " +
                                std::to_string(declared));
    }
  }

  for (const auto& s : res.strata) {
    report.notes.push_back("stratum " + s.id + ": chi = " + std::to_string(s.chi) + " declared, unverified");
  }
  return report;
}

void require_valid(const ResolutionData& res) {
  const auto report = validate(res);
  if (report.ok()) {
    return;
  }
  std::string msg = "resolution data failed validation:";
  for (const auto& f : report.failures) {
    msg += "\n  - " + f;
  }
  throw ValidationError(msg);
}

}  // namespace eqps
