#pragma once

// Invariants computed from resolution data: the equivariant Poincaré series
// as a product over strata, the equivariant monodromy zeta functions zeta and
// zeta-tilde, their recovery from a factored Poincaré series, and the
// reduction checks against non-equivariant data.

#include <cstdint>
#include <memory>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "eqps/burnside.hpp"
#include "eqps/rational.hpp"
#include "eqps/resolution.hpp"
#include "eqps/series.hpp"

namespace eqps {

/// (1 - t^n)^{-q[G/K]}
struct ZetaFactor {
  Rational n;
  Rational q;
  int base = 0;  // subgroup class of K

  bool operator==(const ZetaFactor&) const = default;
};

class FactoredZeta {
 public:
  enum class Variant { Zeta, ZetaTilde };

  explicit FactoredZeta(Variant v = Variant::Zeta) : variant_(v) {}
  /// Sorts by (n, base), merges equal pairs, drops q = 0. For ZetaTilde every
  /// n must be a positive integer (MathError otherwise).
  FactoredZeta(Variant v, std::vector<ZetaFactor> factors);

  Variant variant() const { return variant_; }
  const std::vector<ZetaFactor>& factors() const { return factors_; }
  bool empty() const { return factors_.empty(); }

  bool operator==(const FactoredZeta&) const = default;

 private:
  Variant variant_;
  std::vector<ZetaFactor> factors_;
};

std::string variant_name(FactoredZeta::Variant v);

/// "(1 - t^2)^{-(1/2)[G/e]} * (1 - t)^{[G/H1]}"; "1" when empty.
std::string zeta_to_text(const BurnsideRing& burnside, const FactoredZeta& z);
FactoredZeta zeta_from_text(const BurnsideRing& burnside, FactoredZeta::Variant v, std::string_view text);
nlohmann::json zeta_to_json(const BurnsideRing& burnside, const FactoredZeta& z);
FactoredZeta zeta_from_json(const BurnsideRing& burnside, const nlohmann::json& j);

struct StratumData {
  std::string id;
  MultiDegree omega;
  std::int64_t n = 0;
  TBClass cls;
};

struct PoincareResult {
  FactoredSeries factored;
  TBSeries expansion;
  std::vector<StratumData> strata;
};

/// Product over strata of (1 - t^{omega})^{-chi [G/H]_alpha}, plus its expansion.
PoincareResult poincare_from_resolution(const ResolutionData& res, const MultiDegree& bound);

struct ZetaPair {
  FactoredZeta zeta{FactoredZeta::Variant::Zeta};
  FactoredZeta zeta_tilde{FactoredZeta::Variant::ZetaTilde};
  bool operator==(const ZetaPair&) const = default;
};

ZetaPair zeta_from_resolution(const ResolutionData& res);

enum class RecoveryMode { Free, General };
RecoveryMode parse_recovery_mode(std::string_view text);

struct RecoveryResult {
  ZetaPair zetas;
  std::vector<std::string> warnings;
  std::vector<std::string> selections;
};

RecoveryResult recover_zeta(const TildeBurnsideRing& ring, const FactoredSeries& p, RecoveryMode mode);

/// Non-equivariant series in |G|*r variables, grouped into r blocks of |G|
/// consecutive variables identified with t_i, against rhohat of p.
bool statement1_rhohat_check(const std::shared_ptr<const TildeBurnsideRing>& ring, const FactoredSeries& p,
                             const std::vector<IntegerFactor>& nonequivariant, int nonequivariant_arity,
                             const MultiDegree& bound);

R1Series eps_reduction(const std::shared_ptr<const TildeBurnsideRing>& ring, const FactoredSeries& p,
                       const MultiDegree& bound);

}  // namespace eqps
