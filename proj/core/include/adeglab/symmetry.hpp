#pragma once

#include <cstdint>
#include <vector>

#include "adeglab/boolfn.hpp"

namespace adeglab {

/// Orbits of the cube {0,1}^n (equivalently, of variable subsets) under a
/// group of variable permutations.
struct OrbitPartition {
  int arity = 0;
  /// orbit_of[mask] is the orbit id; ids are numbered by smallest member.
  std::vector<std::uint32_t> orbit_of;
  /// Smallest member of each orbit.
  std::vector<std::uint64_t> representative;
  std::vector<std::uint64_t> size;

  int count() const { return static_cast<int>(representative.size()); }
};

/// Orbit partition generated by `generators` (each a permutation of 0..n-1).
/// With no generators every point is its own orbit.
OrbitPartition orbit_partition(int arity, const std::vector<Permutation>& generators);

/// Symmetries of f usable for reduction: the carried hints that re-verify
/// against the table, plus every transposition that leaves f invariant.
std::vector<Permutation> verified_symmetries(const BooleanFunction& f);

}  // namespace adeglab
