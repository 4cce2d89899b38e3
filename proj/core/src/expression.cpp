#include "varjet/expression.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace varjet {

// ---------------------------------------------------------------------------
// Atom diagnostics

std::string Atom::debug_str() const {
    std::ostringstream os;
    switch (kind) {
        case AtomKind::coord: os << "x[" << field << "]"; return os.str();
        case AtomKind::jet: os << "y" << field << "["; break;
        case AtomKind::aux:
            os << (aux_family == static_cast<std::uint8_t>(AuxFamily::base) ? "@D" : "@V");
            os << field << "[";
            break;
        case AtomKind::root: os << "sqrtdet(f" << field << ")"; return os.str();
        case AtomKind::param: return "@t" + std::to_string(field);
    }
    for (std::size_t k = 0; k < comps.size(); ++k) os << (k ? "," : "") << comps[k];
    if (!derivs.empty()) {
        os << ";";
        for (std::size_t k = 0; k < derivs.size(); ++k) os << (k ? "," : "") << derivs[k];
    }
    os << "]";
    return os.str();
}

// ---------------------------------------------------------------------------
// Monomial

Monomial Monomial::atom(const Atom& a, int exp) {
    Monomial m;
    if (exp != 0) m.factors_.emplace_back(a, exp);
    return m;
}

int Monomial::exponent_of(const Atom& a) const {
    auto it = std::lower_bound(factors_.begin(), factors_.end(), a,
                               [](const auto& f, const Atom& x) { return f.first < x; });
    if (it != factors_.end() && it->first == a) return it->second;
    return 0;
}

Monomial Monomial::times(const Monomial& o) const {
    Monomial r;
    r.factors_.reserve(factors_.size() + o.factors_.size());
    std::size_t i = 0, j = 0;
    while (i < factors_.size() || j < o.factors_.size()) {
        if (j == o.factors_.size() ||
            (i < factors_.size() && factors_[i].first < o.factors_[j].first)) {
            r.factors_.push_back(factors_[i++]);
        } else if (i == factors_.size() || o.factors_[j].first < factors_[i].first) {
            r.factors_.push_back(o.factors_[j++]);
        } else {
            const int e = factors_[i].second + o.factors_[j].second;
            if (e != 0) r.factors_.emplace_back(factors_[i].first, e);
            ++i, ++j;
        }
    }
    return r;
}

Monomial Monomial::with_exponent(const Atom& a, int exp) const {
    Monomial r;
    r.factors_.reserve(factors_.size() + 1);
    bool placed = false;
    for (const auto& f : factors_) {
        if (f.first == a) {
            if (exp != 0) r.factors_.emplace_back(a, exp);
            placed = true;
        } else {
            if (!placed && exp != 0 && a < f.first) {
                r.factors_.emplace_back(a, exp);
                placed = true;
            }
            r.factors_.push_back(f);
        }
    }
    if (!placed && exp != 0) r.factors_.emplace_back(a, exp);
    return r;
}

Monomial Monomial::inverse() const {
    Monomial r = *this;
    for (auto& f : r.factors_) f.second = -f.second;
    return r;
}

std::optional<Monomial> Monomial::divide_nonneg(const Monomial& d) const {
    Monomial r;
    std::size_t i = 0, j = 0;
    while (i < factors_.size() || j < d.factors_.size()) {
        if (j == d.factors_.size() ||
            (i < factors_.size() && factors_[i].first < d.factors_[j].first)) {
            if (factors_[i].second < 0) return std::nullopt;
            r.factors_.push_back(factors_[i++]);
        } else if (i == factors_.size() || d.factors_[j].first < factors_[i].first) {
            return std::nullopt;  // divisor atom absent from numerator
        } else {
            const int e = factors_[i].second - d.factors_[j].second;
            if (e < 0) return std::nullopt;
            if (e != 0) r.factors_.emplace_back(factors_[i].first, e);
            ++i, ++j;
        }
    }
    return r;
}

int Monomial::jet_order() const {
    int m = 0;
    for (const auto& [a, e] : factors_)
        if (a.kind == AtomKind::jet || a.kind == AtomKind::aux)
            m = std::max(m, a.jet_order());
    return m;
}

int Monomial::total_jet_degree() const {
    int d = 0;
    for (const auto& [a, e] : factors_)
        if (a.kind == AtomKind::jet) d += e;
    return d;
}

int Monomial::compare(const Monomial& a, const Monomial& b) {
    std::size_t i = 0, j = 0;
    while (i < a.factors_.size() || j < b.factors_.size()) {
        if (j == b.factors_.size() ||
            (i < a.factors_.size() && a.factors_[i].first < b.factors_[j].first)) {
            return a.factors_[i].second > 0 ? 1 : -1;
        }
        if (i == a.factors_.size() || b.factors_[j].first < a.factors_[i].first) {
            return b.factors_[j].second > 0 ? -1 : 1;
        }
        if (a.factors_[i].second != b.factors_[j].second)
            return a.factors_[i].second > b.factors_[j].second ? 1 : -1;
        ++i, ++j;
    }
    return 0;
}

// ---------------------------------------------------------------------------
// Raw term-map arithmetic (no normalization; used inside the normalizer too)

namespace {

using TermMap = Expression::TermMap;

void add_into(TermMap& dst, const Monomial& m, const Rational& c) {
    if (c.is_zero()) return;
    auto [it, fresh] = dst.emplace(m, c);
    if (!fresh) {
        it->second += c;
        if (it->second.is_zero()) dst.erase(it);
    }
}

void add_map(TermMap& dst, const TermMap& src, const Rational& scale) {
    for (const auto& [m, c] : src) add_into(dst, m, c * scale);
}

TermMap mul_maps(const TermMap& a, const TermMap& b) {
    TermMap out;
    for (const auto& [ma, ca] : a)
        for (const auto& [mb, cb] : b) add_into(out, ma.times(mb), ca * cb);
    return out;
}

TermMap mul_map_term(const TermMap& a, const Monomial& m, const Rational& c) {
    TermMap out;
    for (const auto& [ma, ca] : a) add_into(out, ma.times(m), ca * c);
    return out;
}

// Exact division of raw Laurent term maps by a root-free polynomial map.
// Returns the quotient or nullopt. Standard leading-term division after
// shifting both numerator and candidate quotient into the polynomial range.
std::optional<TermMap> exact_divide_raw(const TermMap& q, const TermMap& d) {
    if (q.empty()) return TermMap{};
    if (d.empty()) return std::nullopt;

    std::map<Atom, int> min_q, min_d;
    auto record_min = [](std::map<Atom, int>& dst, const TermMap& src) {
        for (const auto& [m, c] : src)
            for (const auto& [a, e] : m.factors()) {
                auto [it, fresh] = dst.emplace(a, e);
                if (!fresh) it->second = std::min(it->second, e);
            }
    };
    record_min(min_q, q);
    record_min(min_d, d);

    Monomial shift;
    {
        std::map<Atom, int> s;
        for (const auto& [a, e] : min_d) {
            auto it = min_q.find(a);
            const int mq = it == min_q.end() ? 0 : std::min(0, it->second);
            if (e - mq > 0) s[a] = e - mq;
        }
        for (const auto& [a, e] : min_q)
            if (e < 0 && !s.count(a)) s[a] = -e;
        for (const auto& [a, e] : s) shift = shift.times(Monomial::atom(a, e));
    }

    TermMap rem = mul_map_term(q, shift, Rational(1));
    const Monomial& lead_d = d.rbegin()->first;
    const Rational& lead_c = d.rbegin()->second;

    TermMap quot;
    while (!rem.empty()) {
        engine::checkpoint();
        const auto& [lm, lc] = *rem.rbegin();
        auto t = lm.divide_nonneg(lead_d);
        if (!t) return std::nullopt;
        const Rational tc = lc / lead_c;
        add_into(quot, *t, tc);
        for (const auto& [md, cd] : d) add_into(rem, t->times(md), -(tc * cd));
    }

    TermMap out;
    const Monomial unshift = shift.inverse();
    for (const auto& [m, c] : quot) add_into(out, m.times(unshift), c);
    return out;
}

} // namespace

// ---------------------------------------------------------------------------
// Determinant and adjugate polynomials

namespace {

Atom sym_comp_atom(int field, int a, int b) {
    CompIdx c;
    c.push_back(std::min(a, b));
    c.push_back(std::max(a, b));
    return Atom::jet(field, c, {});
}

// Leibniz determinant of the symmetric component matrix restricted to the
// given row/column index subsets (equal-length sorted lists).
TermMap det_minor(int field, const std::vector<int>& rows, const std::vector<int>& cols) {
    TermMap out;
    const std::size_t n = rows.size();
    std::vector<int> perm(n);
    for (std::size_t i = 0; i < n; ++i) perm[i] = static_cast<int>(i);
    do {
        int sign = 1;
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = i + 1; j < n; ++j)
                if (perm[i] > perm[j]) sign = -sign;
        Monomial m;
        for (std::size_t i = 0; i < n; ++i)
            m = m.times(Monomial::atom(sym_comp_atom(field, rows[i], cols[perm[i]])));
        add_into(out, m, Rational(sign));
    } while (std::next_permutation(perm.begin(), perm.end()));
    return out;
}

} // namespace

Expression det_polynomial(int field, int dim) {
    std::vector<int> idx(dim);
    for (int i = 0; i < dim; ++i) idx[i] = i + 1;
    TermMap t = det_minor(field, idx, idx);
    Expression e;
    for (const auto& [m, c] : t) e += Expression::from_monomial(m, c);
    return e;
}

Expression adjugate_entry(int field, int dim, int a, int b) {
    if (dim == 1) return Expression::constant(Rational(1));
    std::vector<int> rows, cols;
    for (int i = 1; i <= dim; ++i) {
        if (i != b) rows.push_back(i);
        if (i != a) cols.push_back(i);
    }
    TermMap minor = det_minor(field, rows, cols);
    const int sign = ((a + b) % 2 == 0) ? 1 : -1;
    Expression e;
    for (const auto& [m, c] : minor) e += Expression::from_monomial(m, c * Rational(sign));
    return e;
}

// ---------------------------------------------------------------------------
// Normal form

class NormalForm {
public:
    static Expression make(TermMap raw) {
        expand_positive_roots(raw);
        reduce_negative_roots(raw);
        return Expression(std::move(raw));
    }

private:
    // root^e with e >= 2 becomes det^(e/2) * root^(e mod 2).
    static void expand_positive_roots(TermMap& t) {
        std::vector<std::pair<Monomial, Rational>> work;
        for (auto it = t.begin(); it != t.end();) {
            if (has_high_root(it->first)) {
                work.emplace_back(it->first, it->second);
                it = t.erase(it);
            } else {
                ++it;
            }
        }
        while (!work.empty()) {
            engine::checkpoint();
            auto [m, c] = work.back();
            work.pop_back();
            const Atom* root = nullptr;
            int exp = 0;
            for (const auto& [a, e] : m.factors())
                if (a.kind == AtomKind::root && e >= 2) {
                    root = &a;
                    exp = e;
                    break;
                }
            if (!root) {
                add_into(t, m, c);
                continue;
            }
            const TermMap det = det_polynomial(root->field, root->root_dim).terms();
            TermMap piece{{m.with_exponent(*root, exp % 2), c}};
            for (int k = 0; k < exp / 2; ++k) piece = mul_maps(piece, det);
            for (const auto& [pm, pc] : piece) {
                if (has_high_root(pm))
                    work.emplace_back(pm, pc);
                else
                    add_into(t, pm, pc);
            }
        }
    }

    static bool has_high_root(const Monomial& m) {
        for (const auto& [a, e] : m.factors())
            if (a.kind == AtomKind::root && e >= 2) return true;
        return false;
    }

    // Per root field and exponent parity: pull the class onto the minimal
    // root power (common-denominator form) and cancel whole det-polynomial
    // factors by exact division. Yields the unique reduced representative.
    static void reduce_negative_roots(TermMap& t) {
        std::vector<Atom> roots;
        for (const auto& [m, c] : t)
            for (const auto& [a, e] : m.factors())
                if (a.kind == AtomKind::root && e < 0 &&
                    std::find(roots.begin(), roots.end(), a) == roots.end())
                    roots.push_back(a);
        std::sort(roots.begin(), roots.end());

        for (const Atom& root : roots) {
            const TermMap det = det_polynomial(root.field, root.root_dim).terms();
            for (int parity = 0; parity < 2; ++parity) {
                int min_exp = 0;
                bool found = false;
                for (const auto& [m, c] : t) {
                    const int e = m.exponent_of(root);
                    if (((e % 2) + 2) % 2 != parity) continue;
                    if (!found || e < min_exp) min_exp = e;
                    found = true;
                }
                if (!found || min_exp >= 0) continue;

                TermMap cls;
                for (auto it = t.begin(); it != t.end();) {
                    const int e = it->first.exponent_of(root);
                    if (((e % 2) + 2) % 2 == parity) {
                        cls.emplace(it->first, it->second);
                        it = t.erase(it);
                    } else {
                        ++it;
                    }
                }

                // Q = sum of class terms lifted by det^((e - min)/2), root removed.
                TermMap q;
                std::map<int, TermMap> det_pow;
                det_pow[0] = TermMap{{Monomial::unit(), Rational(1)}};
                for (const auto& [m, c] : cls) {
                    const int e = m.exponent_of(root);
                    const int pw = (e - min_exp) / 2;
                    if (!det_pow.count(pw)) {
                        int best = 0;
                        for (const auto& [k, v] : det_pow)
                            if (k <= pw) best = std::max(best, k);
                        TermMap acc = det_pow[best];
                        for (int k = best; k < pw; ++k) {
                            acc = mul_maps(acc, det);
                            det_pow[k + 1] = acc;
                        }
                    }
                    const Monomial stripped = m.with_exponent(root, 0);
                    for (const auto& [dm, dc] : det_pow[pw])
                        add_into(q, stripped.times(dm), c * dc);
                }

                int level = min_exp;
                while (level < 0 && !q.empty()) {
                    engine::checkpoint();
                    auto quotient = exact_divide_raw(q, det);
                    if (!quotient) break;
                    q = std::move(*quotient);
                    level += 2;
                }

                for (const auto& [m, c] : q)
                    add_into(t, level == 0 ? m : m.times(Monomial::atom(root, level)), c);
            }
        }
    }
};

// ---------------------------------------------------------------------------
// Expression

Expression Expression::constant(const Rational& c) {
    TermMap t;
    add_into(t, Monomial::unit(), c);
    return NormalForm::make(std::move(t));
}

Expression Expression::from_atom(const Atom& a, int exp) {
    TermMap t;
    add_into(t, Monomial::atom(a, exp), Rational(1));
    return NormalForm::make(std::move(t));
}

Expression Expression::from_monomial(const Monomial& m, const Rational& c) {
    TermMap t;
    add_into(t, m, c);
    return NormalForm::make(std::move(t));
}

Expression operator+(const Expression& a, const Expression& b) {
    TermMap t = a.terms_;
    add_map(t, b.terms_, Rational(1));
    return NormalForm::make(std::move(t));
}

Expression operator-(const Expression& a, const Expression& b) {
    TermMap t = a.terms_;
    add_map(t, b.terms_, Rational(-1));
    return NormalForm::make(std::move(t));
}

Expression operator*(const Expression& a, const Expression& b) {
    return NormalForm::make(mul_maps(a.terms_, b.terms_));
}

Expression operator-(const Expression& a) { return a.scaled(Rational(-1)); }

Expression Expression::scaled(const Rational& c) const {
    if (c.is_zero()) return {};
    TermMap t;
    for (const auto& [m, k] : terms_) t.emplace(m, k * c);
    return Expression(std::move(t));  // scaling preserves the normal form
}

Expression Expression::pow(int e) const {
    if (e == 0) return constant(Rational(1));
    if (e < 0) {
        if (terms_.size() != 1)
            throw Error("negative power of a non-monomial expression");
        const auto& [m, c] = *terms_.begin();
        TermMap t;
        add_into(t, m.inverse(), c.reciprocal());
        return NormalForm::make(std::move(t)).pow(-e);
    }
    Expression r = constant(Rational(1));
    Expression base = *this;
    int k = e;
    while (k > 0) {
        if (k & 1) r *= base;
        k >>= 1;
        if (k) base *= base;
    }
    return r;
}

Expression Expression::partial(const Atom& x) const {
    if (x.kind == AtomKind::root)
        throw Error("cannot differentiate with respect to a square-root atom");
    if (x.kind == AtomKind::param)
        throw Error("cannot differentiate with respect to a parameter");

    const bool root_coupled = x.kind == AtomKind::jet && x.derivs.empty();

    TermMap out;
    for (const auto& [m, c] : terms_) {
        for (const auto& [a, e] : m.factors()) {
            if (a == x) {
                add_into(out, m.with_exponent(a, e - 1), c * Rational(e));
            } else if (root_coupled && a.kind == AtomKind::root && a.field == x.field) {
                // d root / d g_ab = (1/2) root^-1 * d det / d g_ab
                const Expression ddet = det_polynomial(a.field, a.root_dim).partial(x);
                const Monomial base = m.with_exponent(a, e - 2);
                for (const auto& [dm, dc] : ddet.terms())
                    add_into(out, base.times(dm), c * dc * Rational(e, 2));
            }
        }
    }
    return NormalForm::make(std::move(out));
}

double Expression::evaluate(const std::map<Atom, double>& assignment) const {
    // Consistency of assigned square roots with their component matrices.
    std::vector<Atom> roots;
    for_each_atom([&](const Atom& a, int) {
        if (a.kind == AtomKind::root &&
            std::find(roots.begin(), roots.end(), a) == roots.end())
            roots.push_back(a);
    });
    for (const Atom& r : roots) {
        auto rit = assignment.find(r);
        if (rit == assignment.end())
            throw EvalError("missing assignment for " + r.debug_str());
        const int n = r.root_dim;
        std::vector<std::vector<double>> g(n, std::vector<double>(n, 0.0));
        for (int a = 1; a <= n; ++a)
            for (int b = a; b <= n; ++b) {
                auto it = assignment.find(sym_comp_atom(r.field, a, b));
                if (it == assignment.end())
                    throw EvalError("square-root check needs all component values assigned");
                g[a - 1][b - 1] = g[b - 1][a - 1] = it->second;
            }
        // Gaussian elimination determinant
        double det = 1.0;
        for (int col = 0; col < n; ++col) {
            int piv = col;
            for (int row = col + 1; row < n; ++row)
                if (std::fabs(g[row][col]) > std::fabs(g[piv][col])) piv = row;
            if (std::fabs(g[piv][col]) == 0.0) {
                det = 0.0;
                break;
            }
            if (piv != col) {
                std::swap(g[piv], g[col]);
                det = -det;
            }
            det *= g[col][col];
            for (int row = col + 1; row < n; ++row) {
                const double f = g[row][col] / g[col][col];
                for (int k = col; k < n; ++k) g[row][k] -= f * g[col][k];
            }
        }
        if (det < 0.0 || std::fabs(rit->second - std::sqrt(det)) > 1e-9 * (1.0 + std::sqrt(std::fabs(det))))
            throw EvalError("assigned value for " + r.debug_str() +
                            " is not the positive square root of the component determinant");
    }

    double total = 0.0;
    for (const auto& [m, c] : terms_) {
        double v = c.to_double();
        for (const auto& [a, e] : m.factors()) {
            auto it = assignment.find(a);
            if (it == assignment.end())
                throw EvalError("missing assignment for " + a.debug_str());
            if (e < 0 && it->second == 0.0)
                throw EvalError("negative power of a zero value at " + a.debug_str());
            v *= std::pow(it->second, e);
        }
        total += v;
    }
    return total;
}

Expression Expression::scale_jets_with_param(int param_id) const {
    const Atom t = Atom::param(param_id);
    TermMap out;
    for (const auto& [m, c] : terms_) {
        int deg = 0;
        for (const auto& [a, e] : m.factors()) {
            if (a.kind == AtomKind::root)
                throw Error("fiber scaling rejects square-root atoms");
            if (a.kind == AtomKind::aux)
                throw Error("fiber scaling rejects formal vector-field atoms");
            if (a.kind == AtomKind::jet) {
                if (e < 0) throw Error("fiber scaling rejects negative jet powers");
                deg += e;
            }
        }
        add_into(out, deg == 0 ? m : m.times(Monomial::atom(t, deg)), c);
    }
    return NormalForm::make(std::move(out));
}

Expression Expression::integrate_param_unit(int param_id) const {
    const Atom t = Atom::param(param_id);
    TermMap out;
    for (const auto& [m, c] : terms_) {
        const int k = m.exponent_of(t);
        if (k < 0) throw Error("non-polynomial dependence on the parameter");
        add_into(out, m.with_exponent(t, 0), c / Rational(k + 1));
    }
    return NormalForm::make(std::move(out));
}

int Expression::jet_order() const {
    int m = 0;
    for (const auto& [mon, c] : terms_) m = std::max(m, mon.jet_order());
    return m;
}

bool Expression::has_kind(AtomKind k) const {
    for (const auto& [m, c] : terms_)
        for (const auto& [a, e] : m.factors())
            if (a.kind == k) return true;
    return false;
}

bool Expression::has_aux(AuxFamily fam) const {
    for (const auto& [m, c] : terms_)
        for (const auto& [a, e] : m.factors())
            if (a.kind == AtomKind::aux && a.aux_family == static_cast<std::uint8_t>(fam))
                return true;
    return false;
}

bool Expression::has_negative_jet_exponent() const {
    for (const auto& [m, c] : terms_)
        for (const auto& [a, e] : m.factors())
            if (a.kind == AtomKind::jet && e < 0) return true;
    return false;
}

void Expression::for_each_atom(const std::function<void(const Atom&, int)>& fn) const {
    for (const auto& [m, c] : terms_)
        for (const auto& [a, e] : m.factors()) fn(a, e);
}

void ExpressionBuilder::add_term(const Monomial& m, const Rational& c) {
    add_into(terms_, m, c);
}

void ExpressionBuilder::add(const Expression& e, const Rational& scale) {
    add_map(terms_, e.terms_, scale);
}

void ExpressionBuilder::add_product(const Expression& e, const Monomial& m,
                                    const Rational& c) {
    for (const auto& [me, ce] : e.terms_) add_into(terms_, me.times(m), ce * c);
}

void ExpressionBuilder::add_product(const Expression& a, const Expression& b,
                                    const Rational& c) {
    for (const auto& [ma, ca] : a.terms_)
        for (const auto& [mb, cb] : b.terms_)
            add_into(terms_, ma.times(mb), ca * cb * c);
}

Expression ExpressionBuilder::build() { return NormalForm::make(std::move(terms_)); }

std::optional<Expression> exact_divide(const Expression& a, const Expression& b) {
    if (b.is_zero()) return std::nullopt;
    for (const auto& [m, c] : b.terms())
        for (const auto& [atom, e] : m.factors())
            if (atom.kind == AtomKind::root) return std::nullopt;
    auto q = exact_divide_raw(a.terms(), b.terms());
    if (!q) return std::nullopt;
    return NormalForm::make(std::move(*q));
}

} // namespace varjet
