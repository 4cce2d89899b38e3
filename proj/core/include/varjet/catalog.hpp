#pragma once

#include <optional>
#include <string>
#include <vector>

#include "varjet/natural.hpp"

namespace varjet {

/// A named bundle with its Lagrangian and/or source and known symmetries.
struct Model {
    std::string name;
    BundleSpec bundle;
    std::optional<Density> lagrangian;
    std::optional<SourceEquation> source;
    std::vector<std::pair<std::string, EvolutionaryField>> known_symmetries;
    std::string notes;
};

const std::vector<std::string>& builtin_model_names();

/// Constructs a builtin model. When both a Lagrangian and an independent
/// source are stored, source = E(L) is checked at load. Throws ModelError on
/// unknown names.
Model builtin_model(const std::string& name);

/// The model's source equation: stored when present, otherwise E(L).
SourceEquation effective_source(const Model& m);

const EvolutionaryField* find_symmetry(const Model& m, const std::string& name);

/// Christoffel symbol of the second kind for the given symmetric2 field,
/// expanded into jet atoms through the adjugate and sqrtdet^-2.
Expression christoffel(const BundleSpec& bundle, int gfield, int c, int a, int b);

/// Scalar curvature, fully expanded.
Expression scalar_curvature(const BundleSpec& bundle, int gfield);

/// Covariant-calculus oracle for Div T on a metric (or metric x covector)
/// bundle: builds Christoffels from first principles and assembles
///   2 sqrtdet g_{ib} nabla_c Tbar^{cb} + i_J dA + sqrtdet (div Jbar) A_i,
/// where Tbar and Jbar carry the density normalization T_full/sqrtdet. The
/// code path shares nothing with the aux Euler operator.
std::vector<Expression> covariant_divergence_oracle(const BundleSpec& bundle,
                                                    const SourceEquation& T);

} // namespace varjet
