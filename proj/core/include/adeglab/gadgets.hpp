#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "adeglab/boolfn.hpp"
#include "adeglab/json_io.hpp"

namespace adeglab {

/// One argument of a gate: a constant, a circuit input x_j (1-based), or the
/// output of another gate.
struct GateInput {
  enum class Kind { Const, Var, Gate };
  Kind kind = Kind::Const;
  int value = 0;

  static GateInput constant(bool bit) { return {Kind::Const, bit ? 1 : 0}; }
  static GateInput variable(int j) { return {Kind::Var, j}; }
  static GateInput gate(int index) { return {Kind::Gate, index}; }
};

/// A tree of copies of one base function h. Every gate has arity(h) inputs.
struct SimulationCircuit {
  BooleanFunction base;
  std::vector<std::vector<GateInput>> gates;
  int root = 0;
  int target_arity = 0;
  /// Set by verify_circuit after an exhaustive comparison.
  bool verified = false;

  /// Largest number of gates on a root-to-leaf path.
  int depth() const;
  /// Truth table of the circuit on target_arity inputs.
  BooleanFunction evaluate() const;
};

/// Exhaustive comparison against target; sets c.verified accordingly.
bool verify_circuit(SimulationCircuit& c, const BooleanFunction& target);

/// Nested gate objects: {"base": ..., "depth": d, "root": {"gate": [...]}}.
Json circuit_to_json(const SimulationCircuit& c);

/// A restriction of h computing NOT of its one free variable.
struct NegationGadget {
  Assignment fixed;
  int free_index = 0;  // 1-based
};

/// Smallest a (by table index, then i) with h(a) = 1, a_i = 0 and
/// h(a with x_i flipped) = 0. Empty iff h is monotone.
std::optional<NegationGadget> find_negation_gadget(const BooleanFunction& h);

/// x with h(x) = h(x^i) = h(x^j) != h(x^{i,j}). orientation = h(x): 0 means
/// the block computes a shifted AND, 1 a shifted OR.
struct SensitiveBlock {
  std::vector<int> point;
  int i = 0;  // 1-based, i < j
  int j = 0;
  bool orientation = false;
};

/// Smallest (x by table index, then (i, j)) minimal sensitive block of size
/// two. Throws PreconditionError for arity < 2, functions that ignore a
/// variable, and the two parities.
SensitiveBlock find_min_sensitive_block2(const BooleanFunction& h);
/// Re-evaluates the four-point condition directly.
bool is_min_sensitive_block2(const BooleanFunction& h, const SensitiveBlock& block);

/// Smallest minimal 1-input of weight >= 2 of a monotone h; empty when every
/// minimal 1-input has weight 1 (h is an OR) or h is constant.
/// Throws PreconditionError for non-monotone h.
std::optional<std::vector<int>> find_minimal_one_input(const BooleanFunction& h);
/// Order dual: smallest maximal 0-input with >= 2 zeros.
std::optional<std::vector<int>> find_maximal_zero_input(const BooleanFunction& h);

/// Verified circuits of h-depth <= 3 computing AND_2 / OR_2. h must depend
/// on all its variables and differ from AND, OR and both parities.
SimulationCircuit simulate_and2(const BooleanFunction& h);
SimulationCircuit simulate_or2(const BooleanFunction& h);

enum class MajorityBase { Maj3, AndOr };

std::string_view to_string(MajorityBase b);
MajorityBase parse_majority_base(std::string_view text);
/// MAJ_3 or AND_2 o OR_2.
BooleanFunction majority_base_function(MajorityBase b);

struct MajorityProjectionOptions {
  int d_max = 6;
  std::uint64_t seed = 1;
  std::uint64_t attempts_per_depth = 100000;
  /// Probability that an AND-OR leaf is the constant 0.
  double constant_probability = 0.236;
};

struct MajorityProjectionResult {
  bool found = false;
  int depth = 0;
  /// Leaf substitutions of base^depth (leaves in depth-first order).
  Projection projection;
  std::vector<std::uint64_t> attempts_by_depth;
};

/// Searches d = 1..d_max for a projection of base^d equal to MAJ_n, trying a
/// round-robin leaf labelling and then random ones, each verified on all
/// 2^n inputs. n must be odd with 3 <= n <= 9. base^d is evaluated as a tree
/// and never tabulated.
MajorityProjectionResult majority_projection(int n, MajorityBase base, const MajorityProjectionOptions& options);

/// Independent scalar evaluation of the projected tree on all 2^n inputs.
BooleanFunction evaluate_projected_tree(MajorityBase base, int d, const Projection& projection, int n);

}  // namespace adeglab
