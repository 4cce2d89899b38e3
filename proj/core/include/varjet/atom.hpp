#pragma once

#include <array>
#include <cstdint>
#include <stdexcept>
#include <string>

namespace varjet {

/// Hard cap on derivative multi-index length (and thus on order_bound).
inline constexpr int kMaxJetOrder = 16;
/// Hard cap on base dimension.
inline constexpr int kMaxDimension = 32;

/// Fixed-capacity sorted-or-plain index list; indices are 1-based base or
/// component indices and always fit in a byte.
template <std::size_t Cap>
class IdxList {
public:
    IdxList() = default;

    IdxList(std::initializer_list<int> xs) {
        for (int x : xs) push_back(x);
    }

    std::size_t size() const { return size_; }
    bool empty() const { return size_ == 0; }
    int operator[](std::size_t k) const { return v_[k]; }

    void push_back(int x) {
        if (size_ >= Cap) throw std::length_error("index list capacity exceeded");
        if (x < 1 || x > 255) throw std::out_of_range("index out of representable range");
        v_[size_++] = static_cast<std::uint8_t>(x);
    }

    /// Keeps the list sorted ascending (multiset insert).
    void insert_sorted(int x) {
        push_back(x);
        for (std::size_t k = size_ - 1; k > 0 && v_[k] < v_[k - 1]; --k)
            std::swap(v_[k], v_[k - 1]);
    }

    void sort() {
        for (std::size_t i = 1; i < size_; ++i)
            for (std::size_t k = i; k > 0 && v_[k] < v_[k - 1]; --k)
                std::swap(v_[k], v_[k - 1]);
    }

    /// Removes one occurrence of x; throws if absent.
    void erase_one(int x) {
        for (std::size_t k = 0; k < size_; ++k) {
            if (v_[k] == x) {
                for (std::size_t j = k + 1; j < size_; ++j) v_[j - 1] = v_[j];
                --size_;
                return;
            }
        }
        throw std::logic_error("index not present in multi-index");
    }

    bool contains(int x) const {
        for (std::size_t k = 0; k < size_; ++k)
            if (v_[k] == x) return true;
        return false;
    }

    int back() const { return v_[size_ - 1]; }

    friend bool operator==(const IdxList& a, const IdxList& b) {
        if (a.size_ != b.size_) return false;
        for (std::size_t k = 0; k < a.size_; ++k)
            if (a.v_[k] != b.v_[k]) return false;
        return true;
    }
    friend bool operator!=(const IdxList& a, const IdxList& b) { return !(a == b); }

    /// Lexicographic with length as the outer key; a deterministic total order.
    friend bool operator<(const IdxList& a, const IdxList& b) {
        if (a.size_ != b.size_) return a.size_ < b.size_;
        for (std::size_t k = 0; k < a.size_; ++k)
            if (a.v_[k] != b.v_[k]) return a.v_[k] < b.v_[k];
        return false;
    }

private:
    std::uint8_t size_ = 0;
    std::array<std::uint8_t, Cap> v_{};
};

using CompIdx = IdxList<2>;
using MultiIdx = IdxList<kMaxJetOrder>;

enum class AtomKind : std::uint8_t { coord = 0, jet = 1, aux = 2, root = 3, param = 4 };

/// Formal auxiliary families: base-indexed vector-field components D^i and the
/// fiber-indexed multipliers used internally by the first-variation splitting.
enum class AuxFamily : std::uint8_t { base = 0, fiber = 1 };

/// One symbol of the jet chart: a base coordinate x^i, a jet variable y^a_I,
/// a formal vector-field component with derivatives, the square root of a
/// symmetric field's component-matrix determinant, or a scalar parameter.
struct Atom {
    AtomKind kind = AtomKind::coord;
    std::int16_t field = 0;  // jet/root: field id; aux: slot; coord: base index; param: id
    std::uint8_t aux_family = 0;
    std::uint8_t root_dim = 0;  // root only: size of the component matrix
    CompIdx comps;
    MultiIdx derivs;  // sorted multiset of base indices

    static Atom coord(int i) {
        Atom a;
        a.kind = AtomKind::coord;
        a.field = static_cast<std::int16_t>(i);
        return a;
    }
    static Atom jet(int field, CompIdx comps = {}, MultiIdx derivs = {}) {
        Atom a;
        a.kind = AtomKind::jet;
        a.field = static_cast<std::int16_t>(field);
        a.comps = comps;
        derivs.sort();
        a.derivs = derivs;
        return a;
    }
    static Atom aux(AuxFamily fam, int slot, MultiIdx derivs = {}) {
        Atom a;
        a.kind = AtomKind::aux;
        a.aux_family = static_cast<std::uint8_t>(fam);
        a.field = static_cast<std::int16_t>(slot);
        derivs.sort();
        a.derivs = derivs;
        return a;
    }
    static Atom root(int field, int dim) {
        Atom a;
        a.kind = AtomKind::root;
        a.field = static_cast<std::int16_t>(field);
        a.root_dim = static_cast<std::uint8_t>(dim);
        return a;
    }
    static Atom param(int id) {
        Atom a;
        a.kind = AtomKind::param;
        a.field = static_cast<std::int16_t>(id);
        return a;
    }

    int jet_order() const { return static_cast<int>(derivs.size()); }

    Atom with_deriv(int i) const {
        Atom a = *this;
        a.derivs.insert_sorted(i);
        return a;
    }
    Atom without_deriv(int i) const {
        Atom a = *this;
        a.derivs.erase_one(i);
        return a;
    }

    friend bool operator==(const Atom& a, const Atom& b) {
        return a.kind == b.kind && a.field == b.field && a.aux_family == b.aux_family &&
               a.root_dim == b.root_dim && a.comps == b.comps && a.derivs == b.derivs;
    }
    friend bool operator!=(const Atom& a, const Atom& b) { return !(a == b); }

    /// Canonical total order: (kind, field, family, components, multi-index).
    friend bool operator<(const Atom& a, const Atom& b) {
        if (a.kind != b.kind) return a.kind < b.kind;
        if (a.field != b.field) return a.field < b.field;
        if (a.aux_family != b.aux_family) return a.aux_family < b.aux_family;
        if (!(a.comps == b.comps)) return a.comps < b.comps;
        if (!(a.derivs == b.derivs)) return a.derivs < b.derivs;
        return a.root_dim < b.root_dim;
    }

    /// Diagnostic form independent of any bundle (error messages only).
    std::string debug_str() const;
};

} // namespace varjet
