#include "adeglab/boolfn.hpp"

#include <algorithm>
#include <bit>
#include <cctype>
#include <numeric>

#include "adeglab/errors.hpp"

namespace adeglab {

namespace {

std::uint64_t tail_mask(int arity) {
  return arity >= 6 ? ~std::uint64_t{0} : (std::uint64_t{1} << (std::uint64_t{1} << arity)) - 1;
}

const std::shared_ptr<const std::vector<Permutation>>& empty_hints() {
  static const auto hints = std::make_shared<const std::vector<Permutation>>();
  return hints;
}

void check_arity(int arity) {
  if (arity < 0) throw PreconditionError("negative arity");
  if (arity > BooleanFunction::kMaxArity) {
    throw LimitError("arity " + std::to_string(arity) + " exceeds the table cap of 2^" +
                     std::to_string(BooleanFunction::kMaxArity) + " entries");
  }
}

// Generators of the full symmetric group on n points.
std::vector<Permutation> symmetric_group(int n) {
  std::vector<Permutation> gens;
  if (n < 2) return gens;
  Permutation swap(n);
  std::iota(swap.begin(), swap.end(), 0);
  std::swap(swap[0], swap[1]);
  gens.push_back(swap);
  if (n > 2) {
    Permutation cycle(n);
    for (int i = 0; i < n; ++i) cycle[i] = (i + 1) % n;
    gens.push_back(cycle);
  }
  return gens;
}

}  // namespace

// --- BooleanFunction ------------------------------------------------------

BooleanFunction::BooleanFunction()
    : arity_(0),
      words_(std::make_shared<const std::vector<std::uint64_t>>(1, 0)),
      hints_(empty_hints()) {}

BooleanFunction BooleanFunction::from_words(int arity, std::vector<std::uint64_t> words,
                                            std::vector<Permutation> symmetry_hints) {
  check_arity(arity);
  if (words.size() != word_count(arity)) {
    throw PreconditionError("table of arity " + std::to_string(arity) + " needs " +
                            std::to_string(word_count(arity)) + " words, got " +
                            std::to_string(words.size()));
  }
  words.back() &= tail_mask(arity);
  for (const auto& perm : symmetry_hints) {
    if (static_cast<int>(perm.size()) != arity) throw PreconditionError("symmetry hint has wrong size");
  }
  BooleanFunction f;
  f.arity_ = arity;
  f.words_ = std::make_shared<const std::vector<std::uint64_t>>(std::move(words));
  f.hints_ = symmetry_hints.empty()
                 ? empty_hints()
                 : std::make_shared<const std::vector<Permutation>>(std::move(symmetry_hints));
  return f;
}

std::uint64_t BooleanFunction::count_ones() const {
  std::uint64_t total = 0;
  for (auto w : *words_) total += static_cast<std::uint64_t>(std::popcount(w));
  return total;
}

bool BooleanFunction::is_constant() const {
  const auto ones = count_ones();
  return ones == 0 || ones == size();
}

std::uint64_t BooleanFunction::hash() const {
  std::uint64_t h = 1469598103934665603ull;
  auto mix = [&h](std::uint64_t v) {
    for (int b = 0; b < 8; ++b) {
      h ^= (v >> (8 * b)) & 0xff;
      h *= 1099511628211ull;
    }
  };
  mix(static_cast<std::uint64_t>(arity_));
  for (auto w : *words_) mix(w);
  return h;
}

BooleanFunction BooleanFunction::with_symmetry_hints(std::vector<Permutation> hints) const {
  return from_words(arity_, *words_, std::move(hints));
}

bool operator==(const BooleanFunction& a, const BooleanFunction& b) {
  return a.arity_ == b.arity_ && (a.words_ == b.words_ || *a.words_ == *b.words_);
}

// --- names ----------------------------------------------------------------

std::string_view to_string(FunctionClass c) {
  switch (c) {
    case FunctionClass::Parity: return "Parity";
    case FunctionClass::NegParity: return "NegParity";
    case FunctionClass::And: return "And";
    case FunctionClass::Or: return "Or";
    case FunctionClass::MonotoneOther: return "Monotone-other";
    case FunctionClass::NonMonotoneOther: return "NonMonotone-other";
    case FunctionClass::Degenerate: return "Degenerate";
  }
  return "?";
}

std::string_view to_string(Builtin b) {
  switch (b) {
    case Builtin::And: return "AND";
    case Builtin::Or: return "OR";
    case Builtin::Maj: return "MAJ";
    case Builtin::Parity: return "PARITY";
    case Builtin::Not: return "NOT";
    case Builtin::Identity: return "ID";
    case Builtin::Const0: return "CONST0";
    case Builtin::Const1: return "CONST1";
  }
  return "?";
}

Builtin parse_builtin_tag(std::string_view tag) {
  std::string upper(tag);
  for (auto& c : upper) c = static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
  if (upper == "AND") return Builtin::And;
  if (upper == "OR") return Builtin::Or;
  if (upper == "MAJ") return Builtin::Maj;
  if (upper == "PARITY" || upper == "XOR") return Builtin::Parity;
  if (upper == "NOT") return Builtin::Not;
  if (upper == "ID") return Builtin::Identity;
  if (upper == "CONST0") return Builtin::Const0;
  if (upper == "CONST1") return Builtin::Const1;
  throw PreconditionError("unknown builtin '" + std::string(tag) + "'");
}

// --- builders -------------------------------------------------------------

BooleanFunction make_builtin(Builtin tag, int arity) {
  check_arity(arity);
  const bool constant = tag == Builtin::Const0 || tag == Builtin::Const1;
  if (!constant && arity < 1) throw PreconditionError("builtin needs arity >= 1");
  if ((tag == Builtin::Not || tag == Builtin::Identity) && arity != 1) {
    throw PreconditionError(std::string(to_string(tag)) + " has arity 1");
  }
  if (tag == Builtin::Maj && arity % 2 == 0) throw PreconditionError("MAJ needs odd arity");
  auto gens = symmetric_group(arity);
  switch (tag) {
    case Builtin::And: {
      const std::uint64_t all = (std::uint64_t{1} << arity) - 1;
      return BooleanFunction::tabulate(arity, [all](std::uint64_t k) { return k == all; }, gens);
    }
    case Builtin::Or:
      return BooleanFunction::tabulate(arity, [](std::uint64_t k) { return k != 0; }, gens);
    case Builtin::Maj:
      return BooleanFunction::tabulate(
          arity, [arity](std::uint64_t k) { return 2 * std::popcount(k) > arity; }, gens);
    case Builtin::Parity:
      return BooleanFunction::tabulate(arity, [](std::uint64_t k) { return std::popcount(k) & 1; },
                                       gens);
    case Builtin::Not:
      return BooleanFunction::tabulate(1, [](std::uint64_t k) { return k == 0; });
    case Builtin::Identity:
      return BooleanFunction::tabulate(1, [](std::uint64_t k) { return k == 1; });
    case Builtin::Const0:
      return BooleanFunction::tabulate(arity, [](std::uint64_t) { return false; }, gens);
    case Builtin::Const1:
      return BooleanFunction::tabulate(arity, [](std::uint64_t) { return true; }, gens);
  }
  throw PreconditionError("unknown builtin");
}

BooleanFunction make_builtin(std::string_view tag, int arity) {
  return make_builtin(parse_builtin_tag(tag), arity);
}

// --- evaluation -----------------------------------------------------------

std::uint64_t index_of(std::span<const int> bits) {
  std::uint64_t k = 0;
  for (std::size_t i = 0; i < bits.size(); ++i) {
    if (bits[i] != 0 && bits[i] != 1) throw PreconditionError("bit list entries must be 0 or 1");
    if (bits[i]) k |= std::uint64_t{1} << i;
  }
  return k;
}

std::vector<int> bits_of(std::uint64_t index, int arity) {
  std::vector<int> bits(arity);
  for (int i = 0; i < arity; ++i) bits[i] = static_cast<int>((index >> i) & 1);
  return bits;
}

std::string bitstring(std::uint64_t index, int arity) {
  std::string s(arity, '0');
  for (int i = 0; i < arity; ++i) {
    if ((index >> i) & 1) s[i] = '1';
  }
  return s;
}

bool evaluate(const BooleanFunction& f, std::span<const int> x) {
  if (static_cast<int>(x.size()) != f.arity()) {
    throw PreconditionError("input has " + std::to_string(x.size()) + " bits, function has arity " +
                            std::to_string(f.arity()));
  }
  return f.at(index_of(x));
}

// --- structural operations ------------------------------------------------

BooleanFunction compose(const BooleanFunction& f, std::span<const BooleanFunction> gs) {
  if (static_cast<int>(gs.size()) != f.arity()) {
    throw PreconditionError("compose: outer arity " + std::to_string(f.arity()) + " but " +
                            std::to_string(gs.size()) + " inner functions");
  }
  int total = 0;
  std::vector<int> offsets;
  for (const auto& g : gs) {
    offsets.push_back(total);
    total += g.arity();
    if (total > BooleanFunction::kMaxArity) {
      throw LimitError("compose: total arity exceeds " + std::to_string(BooleanFunction::kMaxArity));
    }
  }

  // Hints: inner symmetries shifted into their block, plus outer symmetries
  // lifted to block permutations wherever they only swap identical blocks.
  std::vector<Permutation> hints;
  for (std::size_t i = 0; i < gs.size(); ++i) {
    for (const auto& perm : gs[i].symmetry_hints()) {
      Permutation lifted(total);
      std::iota(lifted.begin(), lifted.end(), 0);
      for (int k = 0; k < gs[i].arity(); ++k) lifted[offsets[i] + k] = offsets[i] + perm[k];
      hints.push_back(std::move(lifted));
    }
  }
  for (const auto& perm : f.symmetry_hints()) {
    bool compatible = true;
    for (std::size_t i = 0; i < gs.size() && compatible; ++i) {
      compatible = gs[i] == gs[perm[i]];
    }
    if (!compatible) continue;
    Permutation lifted(total);
    for (std::size_t i = 0; i < gs.size(); ++i) {
      for (int k = 0; k < gs[i].arity(); ++k) lifted[offsets[i] + k] = offsets[perm[i]] + k;
    }
    hints.push_back(std::move(lifted));
  }

  std::vector<std::uint64_t> masks;
  for (const auto& g : gs) masks.push_back((std::uint64_t{1} << g.arity()) - 1);
  const std::size_t n = gs.size();
  return BooleanFunction::tabulate(
      total,
      [&](std::uint64_t k) {
        std::uint64_t inner = 0;
        for (std::size_t i = 0; i < n; ++i) {
          if (gs[i].at((k >> offsets[i]) & masks[i])) inner |= std::uint64_t{1} << i;
        }
        return f.at(inner);
      },
      std::move(hints));
}

BooleanFunction compose(const BooleanFunction& f, const BooleanFunction& g) {
  std::vector<BooleanFunction> gs(f.arity(), g);
  return compose(f, gs);
}

BooleanFunction power(const BooleanFunction& h, int d) {
  if (d < 1) throw PreconditionError("power: depth must be >= 1");
  long long leaves = 1;
  for (int k = 0; k < d; ++k) {
    leaves *= std::max(h.arity(), 1);
    if (leaves > BooleanFunction::kMaxArity) {
      throw LimitError("power: arity(h)^d exceeds the table cap of 2^" +
                       std::to_string(BooleanFunction::kMaxArity) + " entries");
    }
  }
  BooleanFunction result = h;
  for (int k = 1; k < d; ++k) result = compose(h, result);
  return result;
}

BooleanFunction restrict(const BooleanFunction& f, const Assignment& a) {
  std::uint64_t fixed_bits = 0;
  std::vector<bool> assigned(f.arity(), false);
  for (const auto& [var, bit] : a.values) {
    if (var < 1 || var > f.arity()) {
      throw PreconditionError("restrict: variable " + std::to_string(var) + " out of range 1.." +
                              std::to_string(f.arity()));
    }
    assigned[var - 1] = true;
    if (bit) fixed_bits |= std::uint64_t{1} << (var - 1);
  }
  std::vector<int> free_vars;
  std::vector<int> new_index(f.arity(), -1);
  for (int i = 0; i < f.arity(); ++i) {
    if (!assigned[i]) {
      new_index[i] = static_cast<int>(free_vars.size());
      free_vars.push_back(i);
    }
  }

  // Keep hints that preserve the assignment.
  std::vector<Permutation> hints;
  for (const auto& perm : f.symmetry_hints()) {
    bool keep = true;
    for (int i = 0; i < f.arity() && keep; ++i) {
      if (assigned[i] != assigned[perm[i]]) keep = false;
      else if (assigned[i] && ((fixed_bits >> i) & 1) != ((fixed_bits >> perm[i]) & 1)) keep = false;
    }
    if (!keep) continue;
    Permutation reduced(free_vars.size());
    for (std::size_t j = 0; j < free_vars.size(); ++j) reduced[j] = new_index[perm[free_vars[j]]];
    hints.push_back(std::move(reduced));
  }

  const int t = static_cast<int>(free_vars.size());
  return BooleanFunction::tabulate(
      t,
      [&](std::uint64_t k) {
        std::uint64_t full = fixed_bits;
        for (int j = 0; j < t; ++j) {
          if ((k >> j) & 1) full |= std::uint64_t{1} << free_vars[j];
        }
        return f.at(full);
      },
      std::move(hints));
}

BooleanFunction apply_projection(const BooleanFunction& g, const Projection& p, int target_arity) {
  if (p.source_arity() != g.arity()) {
    throw PreconditionError("projection has " + std::to_string(p.source_arity()) +
                            " entries, function has arity " + std::to_string(g.arity()));
  }
  if (target_arity < 0) throw PreconditionError("negative target arity");
  for (const auto& target : p.targets) {
    if (target.is_var() && (target.value < 1 || target.value > target_arity)) {
      throw PreconditionError("projection variable x" + std::to_string(target.value) +
                              " outside 1.." + std::to_string(target_arity));
    }
    if (!target.is_var() && target.value != 0 && target.value != 1) {
      throw PreconditionError("projection constant must be 0 or 1");
    }
  }
  return BooleanFunction::tabulate(target_arity, [&](std::uint64_t k) {
    std::uint64_t src = 0;
    for (int i = 0; i < g.arity(); ++i) {
      const auto& target = p.targets[i];
      const bool bit = target.is_var() ? ((k >> (target.value - 1)) & 1) : target.value == 1;
      if (bit) src |= std::uint64_t{1} << i;
    }
    return g.at(src);
  });
}

BooleanFunction negate(const BooleanFunction& f) {
  std::vector<std::uint64_t> words(f.words().begin(), f.words().end());
  for (auto& w : words) w = ~w;
  return BooleanFunction::from_words(f.arity(), std::move(words), f.symmetry_hints());
}

BooleanFunction negate_input(const BooleanFunction& f, int i) {
  if (i < 1 || i > f.arity()) throw PreconditionError("negate_input: index out of range");
  const std::uint64_t bit = std::uint64_t{1} << (i - 1);
  return BooleanFunction::tabulate(f.arity(), [&](std::uint64_t k) { return f.at(k ^ bit); });
}

BooleanFunction permute_inputs(const BooleanFunction& f, const Permutation& perm) {
  if (static_cast<int>(perm.size()) != f.arity()) throw PreconditionError("permutation size mismatch");
  std::vector<bool> seen(perm.size(), false);
  for (int p : perm) {
    if (p < 0 || p >= f.arity() || seen[p]) throw PreconditionError("not a permutation");
    seen[p] = true;
  }
  return BooleanFunction::tabulate(f.arity(),
                                   [&](std::uint64_t k) { return f.at(permute_index(k, perm)); });
}

// --- predicates -----------------------------------------------------------

bool depends_on(const BooleanFunction& f, int i) {
  if (i < 1 || i > f.arity()) {
    throw PreconditionError("depends_on: variable " + std::to_string(i) + " out of range");
  }
  const std::uint64_t bit = std::uint64_t{1} << (i - 1);
  for (std::uint64_t k = 0; k < f.size(); ++k) {
    if (!(k & bit) && f.at(k) != f.at(k | bit)) return true;
  }
  return false;
}

bool depends_on_all(const BooleanFunction& f) {
  for (int i = 1; i <= f.arity(); ++i) {
    if (!depends_on(f, i)) return false;
  }
  return true;
}

bool is_monotone(const BooleanFunction& f) {
  for (std::uint64_t k = 0; k < f.size(); ++k) {
    if (!f.at(k)) continue;
    // Every upward neighbour of a 1-input must be 1.
    for (int i = 0; i < f.arity(); ++i) {
      const std::uint64_t bit = std::uint64_t{1} << i;
      if (!(k & bit) && !f.at(k | bit)) return false;
    }
  }
  return true;
}

FunctionClass classify(const BooleanFunction& f) {
  const int n = f.arity();
  if (n < 2 || !depends_on_all(f)) return FunctionClass::Degenerate;
  const auto parity = make_builtin(Builtin::Parity, n);
  if (f == parity) return FunctionClass::Parity;
  if (f == negate(parity)) return FunctionClass::NegParity;
  if (f == make_builtin(Builtin::And, n)) return FunctionClass::And;
  if (f == make_builtin(Builtin::Or, n)) return FunctionClass::Or;
  return is_monotone(f) ? FunctionClass::MonotoneOther : FunctionClass::NonMonotoneOther;
}

// --- symmetry -------------------------------------------------------------

std::uint64_t permute_index(std::uint64_t index, const Permutation& perm) {
  std::uint64_t out = 0;
  for (std::size_t i = 0; i < perm.size(); ++i) {
    if ((index >> i) & 1) out |= std::uint64_t{1} << perm[i];
  }
  return out;
}

bool is_symmetry(const BooleanFunction& f, const Permutation& perm) {
  if (static_cast<int>(perm.size()) != f.arity()) return false;
  for (std::uint64_t k = 0; k < f.size(); ++k) {
    if (f.at(k) != f.at(permute_index(k, perm))) return false;
  }
  return true;
}

std::vector<Permutation> detect_transpositions(const BooleanFunction& f) {
  std::vector<Permutation> found;
  const int n = f.arity();
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      const std::uint64_t bi = std::uint64_t{1} << i;
      const std::uint64_t bj = std::uint64_t{1} << j;
      bool symmetric = true;
      // Only inputs with x_i != x_j change under the swap.
      for (std::uint64_t k = 0; k < f.size() && symmetric; ++k) {
        if ((k & bi) && !(k & bj)) symmetric = f.at(k) == f.at((k ^ bi) | bj);
      }
      if (symmetric) {
        Permutation perm(n);
        std::iota(perm.begin(), perm.end(), 0);
        std::swap(perm[i], perm[j]);
        found.push_back(std::move(perm));
      }
    }
  }
  return found;
}

// --- literal format -------------------------------------------------------

std::string table_hex(const BooleanFunction& f) {
  static constexpr char kDigits[] = "0123456789abcdef";
  const std::uint64_t digits = std::max<std::uint64_t>(1, f.size() / 4);
  std::string hex(digits, '0');
  for (std::uint64_t d = 0; d < digits; ++d) {
    unsigned nibble = 0;
    for (unsigned b = 0; b < 4; ++b) {
      const std::uint64_t k = 4 * d + b;
      if (k < f.size() && f.at(k)) nibble |= 1u << b;
    }
    hex[digits - 1 - d] = kDigits[nibble];
  }
  return hex;
}

std::string to_literal(const BooleanFunction& f) {
  return "tt:" + std::to_string(f.arity()) + ":0x" + table_hex(f);
}

BooleanFunction from_hex(int arity, std::string_view hex) {
  check_arity(arity);
  if (hex.starts_with("0x") || hex.starts_with("0X")) hex.remove_prefix(2);
  if (hex.empty()) throw PreconditionError("empty hex table");
  std::vector<std::uint64_t> words(BooleanFunction::word_count(arity), 0);
  const std::uint64_t size = std::uint64_t{1} << arity;
  for (std::size_t d = 0; d < hex.size(); ++d) {
    const char c = static_cast<char>(std::tolower(static_cast<unsigned char>(hex[hex.size() - 1 - d])));
    unsigned nibble;
    if (c >= '0' && c <= '9') nibble = static_cast<unsigned>(c - '0');
    else if (c >= 'a' && c <= 'f') nibble = static_cast<unsigned>(c - 'a' + 10);
    else throw PreconditionError(std::string("invalid hex digit '") + hex[hex.size() - 1 - d] + "'");
    for (unsigned b = 0; b < 4; ++b) {
      if (!((nibble >> b) & 1)) continue;
      const std::uint64_t k = 4 * d + b;
      if (k >= size) {
        throw PreconditionError("hex table has bits beyond 2^" + std::to_string(arity) + " entries");
      }
      words[k >> 6] |= std::uint64_t{1} << (k & 63);
    }
  }
  return BooleanFunction::from_words(arity, std::move(words));
}

BooleanFunction parse_literal(std::string_view text) {
  if (!text.starts_with("tt:")) throw PreconditionError("truth-table literal must start with 'tt:'");
  text.remove_prefix(3);
  const auto colon = text.find(':');
  if (colon == std::string_view::npos || colon == 0) {
    throw PreconditionError("truth-table literal must be tt:<arity>:<hex>");
  }
  int arity = 0;
  for (char c : text.substr(0, colon)) {
    if (!std::isdigit(static_cast<unsigned char>(c))) throw PreconditionError("bad arity in literal");
    arity = arity * 10 + (c - '0');
    if (arity > 64) throw LimitError("literal arity too large");
  }
  return from_hex(arity, text.substr(colon + 1));
}

}  // namespace adeglab
