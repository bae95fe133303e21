#pragma once

#include <cstddef>
#include <iosfwd>

#include "adeglab/boolfn.hpp"

namespace adeglab {

struct SpectralResult {
  int arity = 0;
  double lambda = 0.0;
  std::size_t iterations = 0;
  /// Change of the squared-norm estimate in the final iteration.
  double residual = 0.0;
};

struct SpectralOptions {
  /// Stop once successive Rayleigh quotients of A^2 differ by less than this
  /// (relative to max(1, quotient)).
  double tolerance = 1e-12;
  std::size_t max_iterations = 100000;
  /// Worker threads for the matrix-vector product.
  int threads = 1;
};

/// Largest eigenvalue in absolute value of the sensitivity graph's
/// adjacency matrix, by power iteration on A^2 with an implicit matvec.
/// Throws NumericalError (with the best estimate in the message) when the
/// iteration cap is reached, LimitError above arity 22.
SpectralResult spectral_sensitivity(const BooleanFunction& f, const SpectralOptions& options = {});

/// Largest number of sensitive coordinates at any input (the maximum degree
/// of the sensitivity graph).
int max_sensitivity(const BooleanFunction& f);

/// Sensitivity graph as CSV "x,y" rows (table indices, each edge once with
/// x < y). Refuses arity above 16.
void write_sensitivity_edges(const BooleanFunction& f, std::ostream& out);

}  // namespace adeglab
