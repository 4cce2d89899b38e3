#pragma once

#include <optional>
#include <utility>

#include "varjet/bundle.hpp"
#include "varjet/jet.hpp"

namespace varjet {

/// First-variation splitting: prolong_apply(V, L) equals
/// source_times_V.coeff + d_h(current) exactly.
struct FirstVariationResult {
    Density source_times_V;
    HorizontalForm current;
};

/// T_a = sum over sorted multi-indices I of (-1)^|I| D_I(dL/dy^a_I).
SourceEquation euler_lagrange(const Density& L, const BundleSpec& bundle);

/// Euler operator taken with respect to the formal base vector-field
/// components D^i and their derivatives; one expression per base direction.
std::vector<Expression> euler_operator_aux(const Density& P, const BundleSpec& bundle);

/// Takens splitting of the variation along a concrete evolutionary field.
/// The boundary current follows the deterministic highest-multi-index-first
/// integration-by-parts schedule.
FirstVariationResult first_variation(const Density& L, const EvolutionaryField& V,
                                     const BundleSpec& bundle);

/// Vainberg-Tonti reconstruction L = int_0^1 y^a T_a(x, t*y) dt. Rejects
/// square roots, formal atoms and negative jet powers.
Density tonti_lagrangian(const SourceEquation& T, const BundleSpec& bundle);

/// True iff the Tonti roundtrip reproduces T componentwise.
bool is_locally_variational(const SourceEquation& T, const BundleSpec& bundle);

/// True iff the Euler-Lagrange equation of L vanishes identically.
bool is_null_lagrangian(const Density& L, const BundleSpec& bundle);

/// Contraction T(V) = sum_a T_a V^a as a density.
Density source_apply(const SourceEquation& T, const EvolutionaryField& V,
                     const BundleSpec& bundle);

/// Lie derivative of a locally variational source equation along the
/// prolongation of V, computed as E(T(V)).
SourceEquation lie_derivative_source(const EvolutionaryField& V, const SourceEquation& T,
                                     const BundleSpec& bundle);

bool is_symmetry(const EvolutionaryField& V, const SourceEquation& T,
                 const BundleSpec& bundle);

/// Noether current: omega with d_h(omega) = T(V), verified before returning.
/// Throws ExtractionError carrying the residual when the deterministic
/// schedule cannot exhibit exactness.
HorizontalForm conserved_current(const EvolutionaryField& V, const SourceEquation& T,
                                 const BundleSpec& bundle);

namespace detail {

/// Generic Euler operator: sum_J (-1)^|J| D_J(de/d(base with J)) where base is
/// an undifferentiated atom pattern (jet component or aux slot).
Expression euler_component(const Expression& e, const Atom& base,
                           const BundleSpec& bundle);

/// Rewrites e as sum_i D_i(omega^i) + residual by the greedy top-atom
/// integration-by-parts schedule. Complete for n = 1 over this expression
/// class; for n >= 2 a nonzero residual is an honest failure, never a wrong
/// answer.
std::pair<HorizontalForm, Expression> extract_divergence(const Expression& e,
                                                         const BundleSpec& bundle);

/// Peels derivatives off the designated formal family until only
/// undifferentiated formal atoms remain: e = sum_slots coeff_slot * W_slot +
/// sum_i D_i(omega^i). Input must be linear in the family.
struct PeelResult {
    std::vector<Expression> slot_coeffs;  // indexed by slot id
    HorizontalForm boundary;
};
PeelResult peel_formal(const Expression& e, AuxFamily family, int slot_count,
                       const BundleSpec& bundle);

/// Replaces fiber-formal atoms W_(a,J) by D_J(V^a).
Expression substitute_fiber_formal(const Expression& e, const EvolutionaryField& V,
                                   const BundleSpec& bundle);

} // namespace detail
} // namespace varjet
