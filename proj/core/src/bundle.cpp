#include "varjet/bundle.hpp"

#include <algorithm>
#include <cctype>

namespace varjet {

std::string_view field_kind_name(FieldKind k) {
    switch (k) {
        case FieldKind::scalar: return "scalar";
        case FieldKind::covector: return "covector";
        case FieldKind::symmetric2: return "symmetric2";
    }
    return "?";
}

std::optional<FieldKind> field_kind_from_name(std::string_view s) {
    if (s == "scalar") return FieldKind::scalar;
    if (s == "covector") return FieldKind::covector;
    if (s == "symmetric2") return FieldKind::symmetric2;
    return std::nullopt;
}

namespace {

bool valid_field_name(const std::string& s) {
    if (s.empty() || !std::isalpha(static_cast<unsigned char>(s[0]))) return false;
    for (char c : s)
        if (!std::isalnum(static_cast<unsigned char>(c)) && c != '_') return false;
    static const char* reserved[] = {"x", "det", "sqrtdet", "inv"};
    for (const char* r : reserved)
        if (s == r) return false;
    return true;
}

} // namespace

BundleSpec::BundleSpec(int n, std::vector<FieldDecl> fields, int order_bound)
    : n_(n), fields_(std::move(fields)), order_bound_(order_bound) {
    if (n_ < 1 || n_ > kMaxDimension)
        throw ModelError("base dimension must be between 1 and " +
                         std::to_string(kMaxDimension));
    if (order_bound_ < 1 || order_bound_ > kMaxJetOrder)
        throw ModelError("order bound must be between 1 and " +
                         std::to_string(kMaxJetOrder));
    for (std::size_t i = 0; i < fields_.size(); ++i) {
        if (!valid_field_name(fields_[i].name))
            throw ModelError("invalid field name '" + fields_[i].name + "'");
        for (std::size_t j = i + 1; j < fields_.size(); ++j)
            if (fields_[i].name == fields_[j].name)
                throw ModelError("duplicate field name '" + fields_[i].name + "'");
    }

    for (std::size_t f = 0; f < fields_.size(); ++f) {
        switch (fields_[f].kind) {
            case FieldKind::scalar:
                components_.push_back({static_cast<int>(f), {}});
                break;
            case FieldKind::covector:
                for (int a = 1; a <= n_; ++a)
                    components_.push_back({static_cast<int>(f), CompIdx{a}});
                break;
            case FieldKind::symmetric2:
                for (int a = 1; a <= n_; ++a)
                    for (int b = a; b <= n_; ++b)
                        components_.push_back({static_cast<int>(f), CompIdx{a, b}});
                break;
        }
    }
}

BundleSpec BundleSpec::with_order_bound(int k) const {
    BundleSpec b = *this;
    if (k < 1 || k > kMaxJetOrder)
        throw ModelError("order bound must be between 1 and " +
                         std::to_string(kMaxJetOrder));
    b.order_bound_ = k;
    return b;
}

std::optional<int> BundleSpec::field_index(std::string_view name) const {
    for (std::size_t i = 0; i < fields_.size(); ++i)
        if (fields_[i].name == name) return static_cast<int>(i);
    return std::nullopt;
}

int BundleSpec::component_count(int field) const {
    switch (fields_[static_cast<std::size_t>(field)].kind) {
        case FieldKind::scalar: return 1;
        case FieldKind::covector: return n_;
        case FieldKind::symmetric2: return n_ * (n_ + 1) / 2;
    }
    return 0;
}

int BundleSpec::total_components() const { return static_cast<int>(components_.size()); }

std::optional<int> BundleSpec::component_ordinal(const ComponentRef& ref) const {
    for (std::size_t i = 0; i < components_.size(); ++i)
        if (components_[i] == ref) return static_cast<int>(i);
    return std::nullopt;
}

std::string BundleSpec::component_name(const ComponentRef& ref) const {
    const FieldDecl& fd = fields_[static_cast<std::size_t>(ref.field)];
    if (fd.kind == FieldKind::scalar) return fd.name;
    std::string s = fd.name + "[";
    for (std::size_t k = 0; k < ref.comps.size(); ++k)
        s += (k ? "," : "") + std::to_string(ref.comps[k]);
    return s + "]";
}

std::optional<int> BundleSpec::component_ordinal_by_name(std::string_view name) const {
    for (std::size_t i = 0; i < components_.size(); ++i)
        if (component_name(components_[i]) == name) return static_cast<int>(i);
    return std::nullopt;
}

Atom BundleSpec::jet_atom(const ComponentRef& ref, MultiIdx derivs) const {
    return Atom::jet(ref.field, ref.comps, derivs);
}

Atom BundleSpec::root_atom(int field) const {
    if (fields_[static_cast<std::size_t>(field)].kind != FieldKind::symmetric2)
        throw ModelError("sqrtdet requires a symmetric2 field");
    return Atom::root(field, n_);
}

HorizontalForm zero_horizontal_form(const BundleSpec& b) {
    return HorizontalForm{std::vector<Expression>(static_cast<std::size_t>(b.dim()))};
}

EvolutionaryField zero_evolutionary_field(const BundleSpec& b) {
    return EvolutionaryField{
        std::vector<Expression>(static_cast<std::size_t>(b.total_components()))};
}

void check_component_layout(const BundleSpec& b, const std::vector<Expression>& comps,
                            std::string_view what) {
    if (comps.size() != static_cast<std::size_t>(b.total_components()))
        throw ModelError(std::string(what) + ": expected " +
                         std::to_string(b.total_components()) + " components, got " +
                         std::to_string(comps.size()));
}

} // namespace varjet
