#pragma once

#include "varjet/variational.hpp"

namespace varjet {

/// Vertical component of the canonical lift of a base vector field D, with
/// the sign convention Delta(D) = -(Lie derivative of the tautological
/// section along D). Component expressions are linear in the formal atoms
/// D^i and their first derivatives.
EvolutionaryField delta_lift(const BundleSpec& bundle);

/// Generalized divergence: (Div T)_i = Euler operator in D^i applied to
/// T(Delta(D)). Verifies internally that the stripped remainder is
/// horizontally exact in the extended variable set.
DivergenceCovector generalized_divergence(const SourceEquation& T,
                                          const BundleSpec& bundle);

/// Noether II verdict for a locally variational source equation: natural iff
/// Div T = 0. Cross-checked against the direct criterion
/// E_fiber(T(Delta(D))) = 0; disagreement raises InvariantError.
bool is_natural(const SourceEquation& T, const BundleSpec& bundle);

} // namespace varjet
