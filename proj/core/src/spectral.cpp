#include "adeglab/spectral.hpp"

#include <bit>
#include <cmath>
#include <ostream>
#include <sstream>
#include <thread>
#include <vector>

#include "adeglab/errors.hpp"

namespace adeglab {

namespace {

constexpr int kMaxSpectralArity = 22;
constexpr int kMaxEdgeListArity = 16;

std::vector<std::uint32_t> sensitive_masks(const BooleanFunction& f) {
  std::vector<std::uint32_t> masks(f.size(), 0);
  for (std::uint64_t x = 0; x < f.size(); ++x) {
    const bool v = f.at(x);
    for (int i = 0; i < f.arity(); ++i) {
      if (f.at(x ^ (std::uint64_t{1} << i)) != v) masks[x] |= std::uint32_t{1} << i;
    }
  }
  return masks;
}

void matvec_range(const std::vector<std::uint32_t>& masks, const std::vector<double>& in,
                  std::vector<double>& out, std::uint64_t begin, std::uint64_t end) {
  for (std::uint64_t x = begin; x < end; ++x) {
    double sum = 0.0;
    for (std::uint32_t m = masks[x]; m != 0; m &= m - 1) sum += in[x ^ (std::uint64_t{1} << std::countr_zero(m))];
    out[x] = sum;
  }
}

void matvec(const std::vector<std::uint32_t>& masks, const std::vector<double>& in, std::vector<double>& out,
            int threads) {
  const std::uint64_t n = masks.size();
  if (threads <= 1 || n < 4096) {
    matvec_range(masks, in, out, 0, n);
    return;
  }
  std::vector<std::jthread> pool;
  const std::uint64_t chunk = (n + threads - 1) / threads;
  for (int t = 0; t < threads; ++t) {
    const std::uint64_t begin = t * chunk;
    const std::uint64_t end = std::min(n, begin + chunk);
    if (begin < end) pool.emplace_back([&, begin, end] { matvec_range(masks, in, out, begin, end); });
  }
}

double dot(const std::vector<double>& a, const std::vector<double>& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

}  // namespace

SpectralResult spectral_sensitivity(const BooleanFunction& f, const SpectralOptions& options) {
  if (f.arity() > kMaxSpectralArity) {
    throw LimitError("spectral sensitivity supports arity <= " + std::to_string(kMaxSpectralArity));
  }
  SpectralResult result;
  result.arity = f.arity();
  const auto masks = sensitive_masks(f);
  const std::uint64_t size = f.size();

  std::vector<double> v(size), w(size), av(size);
  for (std::uint64_t x = 0; x < size; ++x) v[x] = 1.0 + 1e-3 * static_cast<double>(x) / static_cast<double>(size);
  double norm = std::sqrt(dot(v, v));
  for (auto& e : v) e /= norm;

  double previous = -1.0;
  for (std::size_t it = 1; it <= options.max_iterations; ++it) {
    matvec(masks, v, av, options.threads);
    matvec(masks, av, w, options.threads);
    // v has unit norm, so <v, A^2 v> = |Av|^2 is the Rayleigh quotient.
    const double quotient = dot(av, av);
    norm = std::sqrt(dot(w, w));
    result.iterations = it;
    if (norm == 0.0) {
      result.lambda = 0.0;
      result.residual = 0.0;
      return result;
    }
    result.residual = std::fabs(quotient - previous);
    result.lambda = std::sqrt(quotient);
    if (previous >= 0.0 && result.residual < options.tolerance * std::max(1.0, quotient)) return result;
    previous = quotient;
    for (std::uint64_t x = 0; x < size; ++x) v[x] = w[x] / norm;
  }
  std::ostringstream msg;
  msg.precision(17);
  msg << "power iteration did not converge in " << options.max_iterations << " iterations (best estimate "
      << result.lambda << ", last change " << result.residual << ")";
  throw NumericalError(msg.str());
}

int max_sensitivity(const BooleanFunction& f) {
  int best = 0;
  for (auto m : sensitive_masks(f)) best = std::max(best, std::popcount(m));
  return best;
}

void write_sensitivity_edges(const BooleanFunction& f, std::ostream& out) {
  if (f.arity() > kMaxEdgeListArity) {
    throw LimitError("edge export supports arity <= " + std::to_string(kMaxEdgeListArity));
  }
  out << "x,y\n";
  for (std::uint64_t x = 0; x < f.size(); ++x) {
    for (int i = 0; i < f.arity(); ++i) {
      const std::uint64_t y = x ^ (std::uint64_t{1} << i);
      if (x < y && f.at(x) != f.at(y)) out << x << "," << y << "\n";
    }
  }
}

}  // namespace adeglab
