#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "varjet/atom.hpp"
#include "varjet/engine.hpp"
#include "varjet/expression.hpp"

namespace varjet {

enum class FieldKind { scalar, covector, symmetric2 };

std::string_view field_kind_name(FieldKind k);
std::optional<FieldKind> field_kind_from_name(std::string_view s);

struct FieldDecl {
    std::string name;
    FieldKind kind;
};

/// One independent fiber component: (field id, component tuple).
struct ComponentRef {
    int field = 0;
    CompIdx comps;

    friend bool operator==(const ComponentRef& a, const ComponentRef& b) {
        return a.field == b.field && a.comps == b.comps;
    }
};

/// Base dimension plus field declarations; fixes the coordinate universe and
/// the admitted jet order.
class BundleSpec {
public:
    BundleSpec(int n, std::vector<FieldDecl> fields, int order_bound = 8);

    int dim() const { return n_; }
    int order_bound() const { return order_bound_; }
    BundleSpec with_order_bound(int k) const;

    const std::vector<FieldDecl>& fields() const { return fields_; }
    std::optional<int> field_index(std::string_view name) const;
    const FieldDecl& field(int i) const { return fields_[static_cast<std::size_t>(i)]; }

    int component_count(int field) const;
    int total_components() const;

    /// All independent components in declaration order; scalar u -> "u",
    /// covector A -> A[1..n], symmetric2 g -> g[a,b] with a <= b.
    const std::vector<ComponentRef>& components() const { return components_; }
    std::optional<int> component_ordinal(const ComponentRef& ref) const;
    std::string component_name(const ComponentRef& ref) const;
    std::optional<int> component_ordinal_by_name(std::string_view name) const;

    Atom jet_atom(const ComponentRef& ref, MultiIdx derivs = {}) const;
    Atom root_atom(int field) const;

    /// Enforced before any derivative lands in the expression.
    void check_order(int order) const {
        if (order > order_bound_)
            throw OrderBoundError("jet order " + std::to_string(order) +
                                  " exceeds the admitted bound " +
                                  std::to_string(order_bound_));
    }

private:
    int n_;
    std::vector<FieldDecl> fields_;
    int order_bound_;
    std::vector<ComponentRef> components_;
};

/// Lagrangian density coefficient: the L in L dx^1 ^ ... ^ dx^n.
struct Density {
    Expression coeff;
};

/// (n-1,0)-form encoded by its divergence components against i_{d/dx^i}(dX).
struct HorizontalForm {
    std::vector<Expression> comps;
};

/// Vertical variation; one expression per independent fiber component, in
/// bundle component order.
struct EvolutionaryField {
    std::vector<Expression> comps;
};

/// Source equation T = sum T_a dy^a (x) dX; same component layout.
struct SourceEquation {
    std::vector<Expression> comps;
};

/// The densities (Div T)_i with Div T(D) = sum_i (Div T)_i D^i.
struct DivergenceCovector {
    std::vector<Expression> comps;
};

HorizontalForm zero_horizontal_form(const BundleSpec& b);
EvolutionaryField zero_evolutionary_field(const BundleSpec& b);

void check_component_layout(const BundleSpec& b, const std::vector<Expression>& comps,
                            std::string_view what);

} // namespace varjet
