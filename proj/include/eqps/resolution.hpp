#pragma once

// Combinatorial data of a G-resolution: dual graph with G-action,
// self-intersections, the components the valuations are attached to, and
// the strata of the exceptional divisor with their isotropy data.

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "eqps/burnside.hpp"
#include "eqps/group.hpp"
#include "eqps/series.hpp"

namespace eqps {

/// Vertices are indexed by position 0..V-1; vertex_ids keeps the file's names.
struct DualGraph {
  std::vector<int> vertex_ids;
  std::vector<std::vector<int>> action;     // action[a][v]
  std::vector<std::int64_t> self_int;       // E_v . E_v
  std::vector<std::vector<int>> adjacency;  // 0/1, zero diagonal

  int vertex_count() const { return static_cast<int>(vertex_ids.size()); }
  int position(int vertex_id) const;  // throws ValidationError
  std::vector<std::vector<Rational>> intersection_matrix() const;
};

struct ValuationDescriptor {
  enum class Kind { Curve, Divisorial };
  int index = 1;  // 1..r
  Kind kind = Kind::Curve;
  int component = 0;  // vertex position
};

struct Stratum {
  std::string id;
  int component = 0;  // vertex position of delta(Xi)
  std::int64_t chi = 0;
  SubgroupRef isotropy;
  std::map<Element, Rational> alpha_values;  // as given in the file
  std::optional<CharacterQZ> character;      // alpha on isotropy, when consistent
  SubgroupRef slice_isotropy;
};

using MultMatrix = std::vector<std::vector<std::int64_t>>;

struct ResolutionData {
  std::shared_ptr<const TildeBurnsideRing> ring;
  int r = 0;
  DualGraph graph;
  std::vector<ValuationDescriptor> valuations;  // sorted by index
  std::vector<Stratum> strata;
  std::map<int, std::int64_t> smooth_chi;  // vertex position -> declared chi of the orbit's smooth part
  /// Independently encoded non-equivariant series in |G|*r variables.
  std::optional<std::vector<IntegerFactor>> nonequivariant;
  /// Problems found while building the data (action closure, characters); reported by validate.
  std::vector<std::string> load_issues;

  const FiniteGroup& group() const { return ring->group(); }
};

struct ValidationReport {
  std::vector<std::string> failures;
  std::vector<std::string> notes;
  bool ok() const { return failures.empty(); }
};

/// Parses the JSON resolution description. A "group" given as a string is a
/// path resolved relative to `base_dir`. Throws ParseError for malformed
/// input; mathematical problems are deferred to validate().
ResolutionData load_resolution(const nlohmann::json& j, const std::string& base_dir = ".");
ResolutionData load_resolution_file(const std::string& path);

/// m = -(E.E)^{-1}, exact. Throws ValidationError if the matrix is singular
/// or m is not integral, positive and symmetric.
MultMatrix multiplicity_matrix(const DualGraph& g);

/// omega_i = sum over a in G of m(sigma_i, a.delta)
MultiDegree omega_vector(const ResolutionData& res, const MultMatrix& m, const Stratum& s);
/// n = sum_i m(sigma_i, delta)
std::int64_t n_value(const ResolutionData& res, const MultMatrix& m, const Stratum& s);

ValidationReport validate(const ResolutionData& res);
/// Throws ValidationError listing every failure.
void require_valid(const ResolutionData& res);

}  // namespace eqps
