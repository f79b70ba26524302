#pragma once

#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

namespace tla {

// Finite group with elements 0..order-1; element 0 is the identity.
struct FiniteGroup {
  std::string name;
  int order = 1;
  std::vector<int> table;  // table[a * order + b] = a b

  int mul(int a, int b) const { return table[a * order + b]; }
  int inv(int a) const;
  // Empty when the group axioms hold, otherwise a counterexample.
  std::optional<std::string> axiom_counterexample() const;

  static FiniteGroup cyclic(int n);
  // Permutations of {0,1,2}; elements 0..2 are even, 3..5 are transpositions.
  static FiniteGroup symmetric3();
  // Quaternion units in the order 1, -1, i, -i, j, -j, k, -k.
  static FiniteGroup quaternion8();
  static FiniteGroup product(const FiniteGroup& a, const FiniteGroup& b);
};

// Finite groupoid with objects 0..n-1. compose(a, b) = a o b is defined when source(a) = target(b).
class FiniteGroupoid {
 public:
  FiniteGroupoid() = default;
  // table[a * arrows + b] = a o b, or -1 when not composable. Throws Groupoid error if an axiom fails.
  FiniteGroupoid(int objects, std::vector<int> source, std::vector<int> target, std::vector<int> table,
                 std::vector<std::string> labels = {});

  int objects() const { return objects_; }
  int arrows() const { return static_cast<int>(source_.size()); }
  int source(int a) const { return source_[a]; }
  int target(int a) const { return target_[a]; }
  int compose(int a, int b) const { return table_[static_cast<std::size_t>(a) * arrows() + b]; }
  int unit(int x) const { return units_[x]; }
  int inverse(int a) const { return inverses_[a]; }
  const std::string& label(int a) const { return labels_[a]; }
  std::vector<int> isotropy(int x) const;

  nlohmann::json to_json() const;
  static FiniteGroupoid from_json(const nlohmann::json& j);

 private:
  int objects_ = 0;
  std::vector<int> source_, target_, table_, units_, inverses_;
  std::vector<std::string> labels_;
};

// Empty when all groupoid axioms hold; otherwise the first counterexample.
std::optional<std::string> groupoid_counterexample(int objects, const std::vector<int>& source,
                                                   const std::vector<int>& target, const std::vector<int>& table);

FiniteGroupoid pair_groupoid(int n);
FiniteGroupoid group_groupoid(const FiniteGroup& g);
// Direct product of a groupoid with a group (arrows (a, g), same objects).
FiniteGroupoid product_groupoid(const FiniteGroupoid& gamma, const FiniteGroup& g);

// Action of Gamma on the constant group bundle M x U: act[gamma][u] = gamma . u.
struct GroupoidAction {
  FiniteGroupoid gamma;
  FiniteGroup u;
  std::vector<std::vector<int>> act;

  static GroupoidAction trivial(FiniteGroupoid gamma, FiniteGroup u);
  std::optional<std::string> counterexample() const;
};

// Gamma x| U with arrows (gamma, u) and (g', u') o (g, u) = (g' g, (g^{-1} . u') u).
struct SemidirectProduct {
  FiniteGroupoid groupoid;
  std::vector<std::pair<int, int>> pairs;
  int index(int gamma, int u) const { return gamma * u_order + u; }
  int u_order = 1;
};

SemidirectProduct semidirect(const GroupoidAction& action);

// Normal group subbundle L of the isotropy of Gamma with a morphism f: L -> U.
struct SubbundleMap {
  std::vector<int> arrows;  // arrows of L, all isotropy arrows of Gamma
  std::vector<int> f;       // f[i] is the image of arrows[i] in U
};

struct CheckReport {
  bool ok = true;
  std::string condition;
  std::string counterexample;
};

// Checks that L is a normal group subbundle, f is a morphism, and conditions
// (a) lambda . u = f(lambda) u f(lambda)^{-1} and (b) f(g lambda g^{-1}) = g . f(lambda).
CheckReport check_subbundle(const GroupoidAction& action, const SubbundleMap& l);

// lambda -> (lambda, f(lambda^{-1})) as arrows of the semidirect product.
std::vector<int> embed_L(const GroupoidAction& action, const SemidirectProduct& sd, const SubbundleMap& l);
// The embedding is a morphism and its image is a normal subgroupoid.
CheckReport check_embedding(const GroupoidAction& action, const SemidirectProduct& sd, const SubbundleMap& l);

struct Quotient {
  FiniteGroupoid groupoid;
  std::vector<int> class_of;  // arrow of the semidirect product -> arrow of the quotient
};

// Quotient by right cosets of the embedded L; throws Groupoid error if the product is not well defined.
Quotient quotient(const SemidirectProduct& sd, const std::vector<int>& embedded);

// Checks that phi (arrows of a -> arrows of b) is a groupoid morphism.
CheckReport check_morphism(const FiniteGroupoid& a, const FiniteGroupoid& b, const std::vector<int>& phi);

// Isomorphism search for groupoids with at most `cap` arrows.
std::optional<std::vector<int>> find_isomorphism(const FiniteGroupoid& a, const FiniteGroupoid& b, int cap = 50);

struct FixtureResult {
  std::string name;
  bool expect_valid = true;
  int semidirect_arrows = 0;
  int quotient_arrows = 0;
  CheckReport report;
  bool pass = false;
  std::string detail;
};

// Runs the exhaustive checks on the built-in fixtures.
std::vector<FixtureResult> fixture_suite();

}  // namespace tla
