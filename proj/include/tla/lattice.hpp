#pragma once

#include <vector>

#include "tla/group.hpp"

namespace tla {

struct DiscretenessOptions {
  double epsilon = 1e-9;
  int max_iterations = 64;
};

struct Discreteness {
  bool discrete = true;
  // Distance to the identity of the shortest reduced generator; +inf for the trivial group.
  double min_generator_norm = 0.0;
  std::vector<GroupElement> reduced;
  int iterations = 0;
};

// Subgroup of the center generated by finitely many central elements.
class CentralLattice {
 public:
  // Throws Lattice error if a generator is not central within `tolerance`.
  CentralLattice(Backend backend, std::vector<GroupElement> generators, double tolerance = 1e-12);

  const Backend& backend() const { return backend_; }
  const std::vector<GroupElement>& generators() const { return generators_; }
  double tolerance() const { return tolerance_; }
  CenterKind kind() const { return backend_.center_kind(); }

 private:
  Backend backend_;
  std::vector<GroupElement> generators_;
  double tolerance_;
};

Discreteness lattice_discreteness(const CentralLattice& lattice, const DiscretenessOptions& opts = {});
// For a non-discrete real lattice this tests membership in its closure.
bool lattice_membership(const CentralLattice& lattice, const GroupElement& g);
// Representative of g * lattice closest to the identity.
GroupElement lattice_reduce(const CentralLattice& lattice, const GroupElement& g);
// Distance between a and b in the quotient group H / lattice.
double quotient_distance(const CentralLattice& lattice, const GroupElement& a, const GroupElement& b);

}  // namespace tla
