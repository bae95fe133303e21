#include "adeglab/symmetry.hpp"

#include <numeric>

#include "adeglab/errors.hpp"

namespace adeglab {

namespace {

struct UnionFind {
  std::vector<std::uint32_t> parent;

  explicit UnionFind(std::size_t n) : parent(n) { std::iota(parent.begin(), parent.end(), 0u); }

  std::uint32_t find(std::uint32_t a) {
    while (parent[a] != a) {
      parent[a] = parent[parent[a]];
      a = parent[a];
    }
    return a;
  }

  void unite(std::uint32_t a, std::uint32_t b) {
    a = find(a);
    b = find(b);
    if (a == b) return;
    if (a < b) parent[b] = a;
    else parent[a] = b;
  }
};

}  // namespace

OrbitPartition orbit_partition(int arity, const std::vector<Permutation>& generators) {
  if (arity < 0 || arity > BooleanFunction::kMaxArity) {
    throw PreconditionError("orbit_partition: arity out of range");
  }
  const std::uint64_t size = std::uint64_t{1} << arity;
  UnionFind uf(size);
  for (const auto& perm : generators) {
    if (static_cast<int>(perm.size()) != arity) throw PreconditionError("orbit_partition: generator size");
    for (std::uint64_t k = 0; k < size; ++k) {
      uf.unite(static_cast<std::uint32_t>(k), static_cast<std::uint32_t>(permute_index(k, perm)));
    }
  }
  OrbitPartition out;
  out.arity = arity;
  out.orbit_of.resize(size);
  std::vector<std::uint32_t> id_of_root(size, UINT32_MAX);
  for (std::uint64_t k = 0; k < size; ++k) {
    const std::uint32_t root = uf.find(static_cast<std::uint32_t>(k));
    if (id_of_root[root] == UINT32_MAX) {
      id_of_root[root] = static_cast<std::uint32_t>(out.representative.size());
      out.representative.push_back(k);
      out.size.push_back(0);
    }
    const std::uint32_t id = id_of_root[root];
    out.orbit_of[k] = id;
    ++out.size[id];
  }
  return out;
}

std::vector<Permutation> verified_symmetries(const BooleanFunction& f) {
  std::vector<Permutation> gens;
  for (const auto& perm : f.symmetry_hints()) {
    if (is_symmetry(f, perm)) gens.push_back(perm);
  }
  for (auto& t : detect_transpositions(f)) gens.push_back(std::move(t));
  return gens;
}

}  // namespace adeglab
