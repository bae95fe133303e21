#include "adeglab/gadgets.hpp"

#include <bit>
#include <functional>
#include <random>

#include "adeglab/errors.hpp"

namespace adeglab {

// --- circuits --------------------------------------------------------------

int SimulationCircuit::depth() const {
  std::function<int(int)> walk = [&](int g) {
    int below = 0;
    for (const auto& in : gates.at(g)) {
      if (in.kind == GateInput::Kind::Gate) below = std::max(below, walk(in.value));
    }
    return 1 + below;
  };
  return gates.empty() ? 0 : walk(root);
}

BooleanFunction SimulationCircuit::evaluate() const {
  if (gates.empty()) throw PreconditionError("circuit has no gates");
  const int t = base.arity();
  std::function<bool(int, std::uint64_t)> eval = [&](int g, std::uint64_t y) {
    const auto& inputs = gates.at(g);
    if (static_cast<int>(inputs.size()) != t) throw PreconditionError("gate arity differs from the base function");
    std::uint64_t index = 0;
    for (int k = 0; k < t; ++k) {
      const auto& in = inputs[k];
      bool bit = false;
      switch (in.kind) {
        case GateInput::Kind::Const: bit = in.value != 0; break;
        case GateInput::Kind::Var:
          if (in.value < 1 || in.value > target_arity) throw PreconditionError("circuit variable out of range");
          bit = (y >> (in.value - 1)) & 1;
          break;
        case GateInput::Kind::Gate: bit = eval(in.value, y); break;
      }
      if (bit) index |= std::uint64_t{1} << k;
    }
    return base.at(index);
  };
  return BooleanFunction::tabulate(target_arity, [&](std::uint64_t y) { return eval(root, y); });
}

bool verify_circuit(SimulationCircuit& c, const BooleanFunction& target) {
  if (target.arity() != c.target_arity) throw PreconditionError("verify_circuit: target arity mismatch");
  c.verified = c.evaluate() == target;
  return c.verified;
}

Json circuit_to_json(const SimulationCircuit& c) {
  std::function<Json(int)> gate = [&](int g) {
    Json inputs = Json::array();
    for (const auto& in : c.gates.at(g)) {
      switch (in.kind) {
        case GateInput::Kind::Const: inputs.push_back({{"const", in.value}}); break;
        case GateInput::Kind::Var: inputs.push_back({{"var", in.value}}); break;
        case GateInput::Kind::Gate: inputs.push_back(gate(in.value)); break;
      }
    }
    return Json{{"gate", std::move(inputs)}};
  };
  return {{"base", to_literal(c.base)},
          {"target_arity", c.target_arity},
          {"depth", c.depth()},
          {"verified", c.verified},
          {"root", c.gates.empty() ? Json(nullptr) : gate(c.root)}};
}

// --- gadgets ---------------------------------------------------------------

std::optional<NegationGadget> find_negation_gadget(const BooleanFunction& h) {
  const int t = h.arity();
  for (std::uint64_t a = 0; a < h.size(); ++a) {
    if (!h.at(a)) continue;
    for (int i = 0; i < t; ++i) {
      const std::uint64_t bit = std::uint64_t{1} << i;
      if ((a & bit) || h.at(a | bit)) continue;
      NegationGadget g;
      g.free_index = i + 1;
      for (int k = 0; k < t; ++k) {
        if (k != i) g.fixed.values[k + 1] = (a >> k) & 1;
      }
      return g;
    }
  }
  return std::nullopt;
}

bool is_min_sensitive_block2(const BooleanFunction& h, const SensitiveBlock& block) {
  const int t = h.arity();
  if (static_cast<int>(block.point.size()) != t || block.i < 1 || block.j <= block.i || block.j > t) return false;
  std::vector<int> x = block.point;
  const bool v = evaluate(h, x);
  x[block.i - 1] ^= 1;
  const bool vi = evaluate(h, x);
  x[block.j - 1] ^= 1;
  const bool vij = evaluate(h, x);
  x[block.i - 1] ^= 1;
  const bool vj = evaluate(h, x);
  return v == block.orientation && vi == v && vj == v && vij != v;
}

SensitiveBlock find_min_sensitive_block2(const BooleanFunction& h) {
  const int t = h.arity();
  if (t < 2) throw PreconditionError("a size-2 sensitive block needs arity >= 2");
  if (!depends_on_all(h)) throw PreconditionError("function ignores a variable; no block is guaranteed");
  const auto cls = classify(h);
  if (cls == FunctionClass::Parity || cls == FunctionClass::NegParity) {
    throw PreconditionError("parity functions have no minimal sensitive block of size 2");
  }
  for (std::uint64_t x = 0; x < h.size(); ++x) {
    const bool v = h.at(x);
    for (int i = 0; i < t; ++i) {
      const std::uint64_t bi = std::uint64_t{1} << i;
      if (h.at(x ^ bi) != v) continue;
      for (int j = i + 1; j < t; ++j) {
        const std::uint64_t bj = std::uint64_t{1} << j;
        if (h.at(x ^ bj) == v && h.at(x ^ bi ^ bj) != v) {
          return {bits_of(x, t), i + 1, j + 1, v};
        }
      }
    }
  }
  throw InvariantError("no minimal sensitive block of size 2 found for " + to_literal(h));
}

namespace {

void require_monotone(const BooleanFunction& h) {
  if (!is_monotone(h)) throw PreconditionError("function is not monotone");
}

/// Smallest x with h(x) = value, at least two coordinates equal to `side`,
/// and every such coordinate flipping h.
std::optional<std::vector<int>> extremal_input(const BooleanFunction& h, bool value, bool side) {
  const int t = h.arity();
  for (std::uint64_t x = 0; x < h.size(); ++x) {
    if (h.at(x) != value) continue;
    const std::uint64_t chosen = side ? x : (~x & (h.size() - 1));
    if (std::popcount(chosen) < 2) continue;
    bool extremal = true;
    for (int i = 0; i < t && extremal; ++i) {
      const std::uint64_t bit = std::uint64_t{1} << i;
      if ((chosen & bit) && h.at(x ^ bit) == value) extremal = false;
    }
    if (extremal) return bits_of(x, t);
  }
  return std::nullopt;
}

void require_admissible(const BooleanFunction& h) {
  const auto cls = classify(h);
  if (cls != FunctionClass::MonotoneOther && cls != FunctionClass::NonMonotoneOther) {
    throw PreconditionError("gadget construction needs a function depending on all variables that is not "
                            "AND, OR or a parity (got " + std::string(to_string(cls)) + ")");
  }
}

int add_gate(SimulationCircuit& c, std::vector<GateInput> inputs) {
  c.gates.push_back(std::move(inputs));
  return static_cast<int>(c.gates.size()) - 1;
}

/// Depth 1: the two coordinates of x equal to `side` become y1, y2.
SimulationCircuit monotone_circuit(const BooleanFunction& h, const std::vector<int>& x, bool side) {
  SimulationCircuit c{h, {}, 0, 2, false};
  std::vector<GateInput> inputs;
  int next = 1;
  for (int k = 0; k < h.arity(); ++k) {
    if (x[k] == side && next <= 2) inputs.push_back(GateInput::variable(next++));
    else inputs.push_back(GateInput::constant(x[k]));
  }
  c.root = add_gate(c, std::move(inputs));
  return c;
}

/// With b the block point, coordinate k receives y when b_k equals
/// `plain_bit` and h1(y) otherwise; this makes the block compute
/// AND(y1, y2) for plain_bit = 0 (orientation 0) and the De Morgan variants
/// otherwise. An output h1 fixes a mismatched orientation.
SimulationCircuit block_circuit(const BooleanFunction& h, bool target_and) {
  const auto neg = find_negation_gadget(h);
  if (!neg) throw InvariantError("non-monotone function without a negation gadget");
  const auto block = find_min_sensitive_block2(h);
  SimulationCircuit c{h, {}, 0, 2, false};
  auto negated = [&](GateInput child) {
    std::vector<GateInput> inputs;
    for (int k = 1; k <= h.arity(); ++k) {
      inputs.push_back(k == neg->free_index ? child : GateInput::constant(neg->fixed.values.at(k)));
    }
    return GateInput::gate(add_gate(c, std::move(inputs)));
  };
  const int plain_bit = target_and ? 0 : 1;
  auto literal = [&](int var, int k) {
    const auto y = GateInput::variable(var);
    return block.point[k - 1] == plain_bit ? y : negated(y);
  };
  std::vector<GateInput> inputs;
  for (int k = 1; k <= h.arity(); ++k) {
    if (k == block.i) inputs.push_back(literal(1, k));
    else if (k == block.j) inputs.push_back(literal(2, k));
    else inputs.push_back(GateInput::constant(block.point[k - 1]));
  }
  const auto core = GateInput::gate(add_gate(c, std::move(inputs)));
  const bool wanted_orientation = !target_and;
  c.root = (block.orientation == wanted_orientation ? core : negated(core)).value;
  return c;
}

SimulationCircuit simulate(const BooleanFunction& h, bool target_and) {
  require_admissible(h);
  SimulationCircuit c;
  if (is_monotone(h)) {
    const auto x = target_and ? find_minimal_one_input(h) : find_maximal_zero_input(h);
    if (!x) throw InvariantError("monotone function without the expected extremal input");
    c = monotone_circuit(h, *x, target_and);
  } else {
    c = block_circuit(h, target_and);
  }
  const auto target = make_builtin(target_and ? Builtin::And : Builtin::Or, 2);
  if (!verify_circuit(c, target)) {
    throw InvariantError(std::string("constructed ") + (target_and ? "AND" : "OR") + " circuit is wrong for " +
                         to_literal(h));
  }
  if (c.depth() > 3) throw InvariantError("constructed circuit exceeds depth 3 for " + to_literal(h));
  return c;
}

}  // namespace

std::optional<std::vector<int>> find_minimal_one_input(const BooleanFunction& h) {
  require_monotone(h);
  return extremal_input(h, true, true);
}

std::optional<std::vector<int>> find_maximal_zero_input(const BooleanFunction& h) {
  require_monotone(h);
  return extremal_input(h, false, false);
}

SimulationCircuit simulate_and2(const BooleanFunction& h) { return simulate(h, true); }
SimulationCircuit simulate_or2(const BooleanFunction& h) { return simulate(h, false); }

// --- majority projections --------------------------------------------------

std::string_view to_string(MajorityBase b) { return b == MajorityBase::Maj3 ? "MAJ3" : "AND2oOR2"; }

MajorityBase parse_majority_base(std::string_view text) {
  if (text == "MAJ3" || text == "maj3") return MajorityBase::Maj3;
  if (text == "AND2oOR2" || text == "and-or" || text == "ANDOR") return MajorityBase::AndOr;
  throw PreconditionError("unknown majority base '" + std::string(text) + "' (use MAJ3 or AND2oOR2)");
}

BooleanFunction majority_base_function(MajorityBase b) {
  return b == MajorityBase::Maj3 ? make_builtin(Builtin::Maj, 3)
                                 : compose(make_builtin(Builtin::And, 2), make_builtin(Builtin::Or, 2));
}

namespace {

int base_arity(MajorityBase b) { return b == MajorityBase::Maj3 ? 3 : 4; }

std::uint64_t leaf_count(MajorityBase b, int d) {
  std::uint64_t leaves = 1;
  for (int i = 0; i < d; ++i) leaves *= base_arity(b);
  return leaves;
}

/// Evaluates the tree bottom-up with each node holding its values on all
/// 2^n inputs as `words` 64-bit words; `buffer` holds the leaf words.
void reduce_tree(MajorityBase base, int d, std::vector<std::uint64_t>& buffer, std::size_t words) {
  const int a = base_arity(base);
  std::uint64_t nodes = leaf_count(base, d);
  for (int level = 0; level < d; ++level) {
    nodes /= a;
    for (std::uint64_t g = 0; g < nodes; ++g) {
      const std::uint64_t* in = &buffer[g * a * words];
      std::uint64_t* out = &buffer[g * words];
      for (std::size_t w = 0; w < words; ++w) {
        if (base == MajorityBase::Maj3) {
          const std::uint64_t x = in[w], y = in[words + w], z = in[2 * words + w];
          out[w] = (x & y) | (x & z) | (y & z);
        } else {
          out[w] = (in[w] | in[words + w]) & (in[2 * words + w] | in[3 * words + w]);
        }
      }
    }
  }
}

}  // namespace

MajorityProjectionResult majority_projection(int n, MajorityBase base, const MajorityProjectionOptions& options) {
  if (n < 3 || n > 9 || n % 2 == 0) throw PreconditionError("majority_projection needs odd n with 3 <= n <= 9");
  if (options.d_max < 1) throw PreconditionError("d_max must be >= 1");
  if (leaf_count(base, options.d_max) > (std::uint64_t{1} << 20)) {
    throw LimitError("base^d_max has more than 2^20 leaves");
  }
  if (options.constant_probability < 0 || options.constant_probability >= 1) {
    throw PreconditionError("constant probability must lie in [0, 1)");
  }
  const std::uint64_t inputs = std::uint64_t{1} << n;
  const std::size_t words = std::max<std::uint64_t>(1, inputs / 64);
  const std::uint64_t valid = inputs >= 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << inputs) - 1;

  // column[j] holds x_{j+1} over all inputs; target holds MAJ_n.
  std::vector<std::vector<std::uint64_t>> column(n, std::vector<std::uint64_t>(words, 0));
  std::vector<std::uint64_t> target(words, 0);
  for (std::uint64_t x = 0; x < inputs; ++x) {
    for (int j = 0; j < n; ++j) {
      if ((x >> j) & 1) column[j][x / 64] |= std::uint64_t{1} << (x % 64);
    }
    if (std::popcount(x) > n / 2) target[x / 64] |= std::uint64_t{1} << (x % 64);
  }

  MajorityProjectionResult result;
  std::vector<std::uint64_t> buffer;
  std::vector<int> labels;  // 0 = constant 0, j >= 1 = x_j
  for (int d = 1; d <= options.d_max; ++d) {
    const std::uint64_t leaves = leaf_count(base, d);
    std::mt19937_64 rng(options.seed * 0x9E3779B97F4A7C15ull + static_cast<std::uint64_t>(d));
    std::uniform_int_distribution<int> pick(1, n);
    std::bernoulli_distribution constant(base == MajorityBase::AndOr ? options.constant_probability : 0.0);
    labels.assign(leaves, 0);
    buffer.assign(leaves * words, 0);
    std::uint64_t attempt = 0;
    for (; attempt < options.attempts_per_depth; ++attempt) {
      for (std::uint64_t leaf = 0; leaf < leaves; ++leaf) {
        if (attempt == 0) labels[leaf] = static_cast<int>(leaf % n) + 1;
        else labels[leaf] = constant(rng) ? 0 : pick(rng);
        for (std::size_t w = 0; w < words; ++w) {
          buffer[leaf * words + w] = labels[leaf] == 0 ? 0 : column[labels[leaf] - 1][w];
        }
      }
      reduce_tree(base, d, buffer, words);
      bool match = true;
      for (std::size_t w = 0; w < words && match; ++w) match = (buffer[w] & valid) == target[w];
      if (match) break;
    }
    const bool found = attempt < options.attempts_per_depth;
    result.attempts_by_depth.push_back(found ? attempt + 1 : attempt);
    if (!found) continue;
    result.found = true;
    result.depth = d;
    for (int label : labels) {
      result.projection.targets.push_back(label == 0 ? ProjectionTarget::constant(false)
                                                     : ProjectionTarget::variable(label));
    }
    const auto check = evaluate_projected_tree(base, d, result.projection, n);
    if (!(check == make_builtin(Builtin::Maj, n))) {
      throw InvariantError("majority projection failed independent re-evaluation");
    }
    return result;
  }
  return result;
}

BooleanFunction evaluate_projected_tree(MajorityBase base, int d, const Projection& projection, int n) {
  const std::uint64_t leaves = leaf_count(base, d);
  if (projection.targets.size() != leaves) throw PreconditionError("projection size differs from the leaf count");
  for (const auto& t : projection.targets) {
    if (t.is_var() && (t.value < 1 || t.value > n)) throw PreconditionError("projection variable out of range");
  }
  const int a = base_arity(base);
  std::function<bool(int, std::uint64_t, std::uint64_t)> eval = [&](int level, std::uint64_t start,
                                                                    std::uint64_t x) -> bool {
    if (level == 0) {
      const auto& t = projection.targets[start];
      return t.is_var() ? ((x >> (t.value - 1)) & 1) : t.value != 0;
    }
    const std::uint64_t span = leaf_count(base, level - 1);
    bool v[4];
    for (int k = 0; k < a; ++k) v[k] = eval(level - 1, start + k * span, x);
    if (base == MajorityBase::Maj3) return (v[0] + v[1] + v[2]) >= 2;
    return (v[0] || v[1]) && (v[2] || v[3]);
  };
  return BooleanFunction::tabulate(n, [&](std::uint64_t x) { return eval(d, 0, x); });
}

}  // namespace adeglab
