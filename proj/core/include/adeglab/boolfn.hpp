#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace adeglab {

/// Permutation of variable positions (0-based): perm[i] is the position that
/// variable i moves to.
using Permutation = std::vector<int>;

enum class Builtin { And, Or, Maj, Parity, Not, Identity, Const0, Const1 };

/// Truth table of f : {0,1}^n -> {0,1}.
///
/// Bit k of the table is f(x) where x_i is bit (i-1) of k, i.e. x1 is the
/// least-significant bit of the index. Values are immutable and cheap to copy
/// (the table is shared).
///
/// A function may carry symmetry hints: variable permutations under which it
/// is known to be invariant. Composition propagates them so that degree LPs
/// can be reduced to orbits; consumers re-verify every hint against the table.
class BooleanFunction {
 public:
  /// Hard cap on arity: tables hold at most 2^24 entries.
  static constexpr int kMaxArity = 24;

  /// The constant 0 on zero variables.
  BooleanFunction();

  static BooleanFunction from_words(int arity, std::vector<std::uint64_t> words,
                                    std::vector<Permutation> symmetry_hints = {});

  /// Builds the table by calling fn(index) for every index in [0, 2^arity).
  template <class Fn>
  static BooleanFunction tabulate(int arity, Fn&& fn,
                                  std::vector<Permutation> symmetry_hints = {}) {
    std::vector<std::uint64_t> words(word_count(arity), 0);
    const std::uint64_t n = std::uint64_t{1} << arity;
    for (std::uint64_t k = 0; k < n; ++k) {
      if (fn(k)) words[k >> 6] |= std::uint64_t{1} << (k & 63);
    }
    return from_words(arity, std::move(words), std::move(symmetry_hints));
  }

  int arity() const { return arity_; }
  std::uint64_t size() const { return std::uint64_t{1} << arity_; }
  bool at(std::uint64_t index) const { return ((*words_)[index >> 6] >> (index & 63)) & 1; }
  std::span<const std::uint64_t> words() const { return *words_; }

  std::uint64_t count_ones() const;
  bool is_constant() const;
  /// FNV-1a over arity and table words.
  std::uint64_t hash() const;

  const std::vector<Permutation>& symmetry_hints() const { return *hints_; }
  BooleanFunction with_symmetry_hints(std::vector<Permutation> hints) const;

  friend bool operator==(const BooleanFunction& a, const BooleanFunction& b);

  static std::size_t word_count(int arity) {
    return arity <= 6 ? 1 : (std::size_t{1} << (arity - 6));
  }

 private:
  int arity_ = 0;
  std::shared_ptr<const std::vector<std::uint64_t>> words_;
  std::shared_ptr<const std::vector<Permutation>> hints_;
};

/// Partial assignment of variables (1-based index -> bit).
struct Assignment {
  std::map<int, bool> values;
};

/// One substituted argument of a projection: a constant or a target variable.
struct ProjectionTarget {
  enum class Kind { Const, Var };
  Kind kind = Kind::Const;
  int value = 0;  // the constant bit, or the 1-based target variable index

  static ProjectionTarget constant(bool bit) { return {Kind::Const, bit ? 1 : 0}; }
  static ProjectionTarget variable(int j) { return {Kind::Var, j}; }
  bool is_var() const { return kind == Kind::Var; }
  friend bool operator==(const ProjectionTarget&, const ProjectionTarget&) = default;
};

/// f(x1..xt) = g(a1..am) with each a_i a constant or some x_j.
struct Projection {
  std::vector<ProjectionTarget> targets;
  int source_arity() const { return static_cast<int>(targets.size()); }
};

enum class FunctionClass { Parity, NegParity, And, Or, MonotoneOther, NonMonotoneOther, Degenerate };

std::string_view to_string(FunctionClass c);
std::string_view to_string(Builtin b);

// --- builders -------------------------------------------------------------

BooleanFunction make_builtin(Builtin tag, int arity);
/// Accepts AND, OR, MAJ, PARITY (alias XOR), NOT, ID, CONST0, CONST1
/// (case-insensitive).
BooleanFunction make_builtin(std::string_view tag, int arity);
Builtin parse_builtin_tag(std::string_view tag);

// --- evaluation and indexing ----------------------------------------------

/// Table index of a bit list (x1 first).
std::uint64_t index_of(std::span<const int> bits);
std::vector<int> bits_of(std::uint64_t index, int arity);
/// "x1 x2 ... xn" as a string of 0/1 characters, x1 first.
std::string bitstring(std::uint64_t index, int arity);

bool evaluate(const BooleanFunction& f, std::span<const int> x);

// --- structural operations ------------------------------------------------

/// f o (g1..gn), blocks laid out left to right.
BooleanFunction compose(const BooleanFunction& f, std::span<const BooleanFunction> gs);
/// f o g with arity(f) copies of g.
BooleanFunction compose(const BooleanFunction& f, const BooleanFunction& g);
/// h composed with itself d times; leaves numbered depth-first left to right.
BooleanFunction power(const BooleanFunction& h, int d);
BooleanFunction restrict(const BooleanFunction& f, const Assignment& a);
BooleanFunction apply_projection(const BooleanFunction& g, const Projection& p, int target_arity);

BooleanFunction negate(const BooleanFunction& f);
/// f with input i (1-based) negated.
BooleanFunction negate_input(const BooleanFunction& f, int i);
/// g(x) = f(y) where y_{perm[i]} = x_i.
BooleanFunction permute_inputs(const BooleanFunction& f, const Permutation& perm);

// --- predicates -----------------------------------------------------------

bool depends_on(const BooleanFunction& f, int i);
bool depends_on_all(const BooleanFunction& f);
bool is_monotone(const BooleanFunction& f);
FunctionClass classify(const BooleanFunction& f);

// --- symmetry -------------------------------------------------------------

std::uint64_t permute_index(std::uint64_t index, const Permutation& perm);
bool is_symmetry(const BooleanFunction& f, const Permutation& perm);
/// All transpositions (i j) leaving f invariant.
std::vector<Permutation> detect_transpositions(const BooleanFunction& f);

// --- literal format -------------------------------------------------------

/// "tt:<arity>:0x<hex>" with bit k of the hex value equal to table entry k.
std::string to_literal(const BooleanFunction& f);
std::string table_hex(const BooleanFunction& f);
BooleanFunction parse_literal(std::string_view text);
BooleanFunction from_hex(int arity, std::string_view hex);

}  // namespace adeglab
