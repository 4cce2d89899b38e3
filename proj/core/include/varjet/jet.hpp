#pragma once

#include "varjet/bundle.hpp"
#include "varjet/expression.hpp"

namespace varjet {

/// Total derivative D_i: shifts every jet and formal atom by one derivative
/// in direction i and differentiates square roots through their determinant.
Expression total_derivative(const Expression& e, int i, const BundleSpec& bundle);

/// D_I for a sorted multi-index (composition of commuting D_i).
Expression total_derivative_multi(const Expression& e, const MultiIdx& I,
                                  const BundleSpec& bundle);

/// Lie derivative of the function e along the prolongation of V:
/// sum over atoms of e of D_I(V^a) * de/dy^a_I.
Expression prolong_apply(const EvolutionaryField& V, const Expression& e,
                         const BundleSpec& bundle);

/// d_h on the (n-1,0) slice: the total divergence of the components.
Density horizontal_differential(const HorizontalForm& omega, const BundleSpec& bundle);

} // namespace varjet
