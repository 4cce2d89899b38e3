#pragma once

#include <cmath>
#include <map>
#include <random>
#include <vector>

#include "varjet/bundle.hpp"
#include "varjet/expression.hpp"

namespace testsupport {

using namespace varjet;

/// Multivariate polynomial with double coefficients; the smooth sections the
/// finite-difference oracle samples along.
class Poly {
public:
    Poly() = default;

    void add(std::vector<int> exps, double c) { terms_[std::move(exps)] += c; }

    double eval(const std::vector<double>& x) const {
        double s = 0.0;
        for (const auto& [e, c] : terms_) {
            double v = c;
            for (std::size_t k = 0; k < e.size(); ++k)
                for (int j = 0; j < e[k]; ++j) v *= x[k];
            s += v;
        }
        return s;
    }

    Poly derivative(std::size_t dir) const {
        Poly d;
        for (const auto& [e, c] : terms_) {
            if (e[dir] == 0) continue;
            std::vector<int> f = e;
            f[dir] -= 1;
            d.add(f, c * e[dir]);
        }
        return d;
    }

    static Poly random(std::mt19937& rng, int nvars, int degree, double base,
                       double amplitude) {
        Poly p;
        p.add(std::vector<int>(nvars, 0), base);
        std::uniform_real_distribution<double> coeff(-amplitude, amplitude);
        std::vector<int> e(nvars, 0);
        const std::function<void(int, int)> walk = [&](std::size_t dir, int left) {
            if (dir == static_cast<std::size_t>(nvars)) {
                bool constant = true;
                for (int v : e)
                    if (v) constant = false;
                if (!constant) p.add(e, coeff(rng));
                return;
            }
            for (int k = 0; k <= left; ++k) {
                e[dir] = k;
                walk(dir + 1, left - k);
            }
            e[dir] = 0;
        };
        walk(0, degree);
        return p;
    }

private:
    std::map<std::vector<int>, double> terms_;
};

/// One polynomial per independent fiber component.
using SectionPolys = std::vector<Poly>;

inline SectionPolys random_section(std::mt19937& rng, const BundleSpec& b, int degree,
                                   double amplitude) {
    SectionPolys sec;
    for (const ComponentRef& ref : b.components()) {
        const FieldDecl& fd = b.field(ref.field);
        // Metric components stay near the identity so det(g) stays positive.
        double base = 0.0;
        if (fd.kind == FieldKind::symmetric2)
            base = (ref.comps[0] == ref.comps[1]) ? 2.0 : 0.0;
        sec.push_back(Poly::random(rng, b.dim(), degree, base, amplitude));
    }
    return sec;
}

/// Exact jet assignment of the section at a point, up to second order, plus
/// coordinates and square roots.
inline std::map<Atom, double> section_jet(const BundleSpec& b, const SectionPolys& sec,
                                          const std::vector<double>& x0) {
    std::map<Atom, double> out;
    for (int i = 1; i <= b.dim(); ++i)
        out[Atom::coord(i)] = x0[static_cast<std::size_t>(i - 1)];
    const auto& comps = b.components();
    for (std::size_t k = 0; k < comps.size(); ++k) {
        out[b.jet_atom(comps[k])] = sec[k].eval(x0);
        for (int i = 1; i <= b.dim(); ++i) {
            const Poly di = sec[k].derivative(static_cast<std::size_t>(i - 1));
            out[b.jet_atom(comps[k], MultiIdx{i})] = di.eval(x0);
            for (int j = i; j <= b.dim(); ++j)
                out[b.jet_atom(comps[k], MultiIdx{i, j})] =
                    di.derivative(static_cast<std::size_t>(j - 1)).eval(x0);
        }
    }
    for (std::size_t f = 0; f < b.fields().size(); ++f) {
        if (b.field(static_cast<int>(f)).kind != FieldKind::symmetric2) continue;
        const int n = b.dim();
        std::vector<std::vector<double>> g(n, std::vector<double>(n));
        for (int a = 1; a <= n; ++a)
            for (int bb = a; bb <= n; ++bb) {
                CompIdx c;
                c.push_back(a);
                c.push_back(bb);
                const double v = out[Atom::jet(static_cast<int>(f), c, {})];
                g[a - 1][bb - 1] = g[bb - 1][a - 1] = v;
            }
        double det = 1.0;
        // direct expansion suffices for n <= 3
        if (n == 1)
            det = g[0][0];
        else if (n == 2)
            det = g[0][0] * g[1][1] - g[0][1] * g[0][1];
        else if (n == 3)
            det = g[0][0] * (g[1][1] * g[2][2] - g[1][2] * g[1][2]) -
                  g[0][1] * (g[0][1] * g[2][2] - g[1][2] * g[0][2]) +
                  g[0][2] * (g[0][1] * g[1][2] - g[1][1] * g[0][2]);
        out[Atom::root(static_cast<int>(f), n)] = std::sqrt(det);
    }
    return out;
}

/// Finite-difference variation of the discretized action: the numeric oracle
/// for Euler-Lagrange values. Nodes sample the section on a local grid; cell
/// jets come from 4th-order central stencils; the returned value is
/// (S(u_p + eps) - S(u_p - eps)) / (2 eps h^n) at the node p = x0.
class ActionVariationOracle {
public:
    ActionVariationOracle(const Density& L, const BundleSpec& b, double h = 0.02,
                          double eps = 1e-4)
        : L_(L), b_(b), h_(h), eps_(eps) {}

    double source_component(const SectionPolys& sec, const std::vector<double>& x0,
                            int comp_ordinal) const {
        const double plus = local_action(sec, x0, comp_ordinal, +eps_);
        const double minus = local_action(sec, x0, comp_ordinal, -eps_);
        double cell = 1.0;
        for (int i = 0; i < b_.dim(); ++i) cell *= h_;
        return (plus - minus) / (2.0 * eps_ * cell);
    }

private:
    using Offset = std::vector<int>;

    static void enumerate(int n, int radius, std::vector<Offset>& out) {
        Offset cur(static_cast<std::size_t>(n), 0);
        const std::function<void(std::size_t)> walk = [&](std::size_t dir) {
            if (dir == cur.size()) {
                out.push_back(cur);
                return;
            }
            for (int k = -radius; k <= radius; ++k) {
                cur[dir] = k;
                walk(dir + 1);
            }
        };
        walk(0);
    }

    double node_value(const SectionPolys& sec, const std::vector<double>& x0,
                      const Offset& off, std::size_t comp, int pert_comp,
                      double pert) const {
        std::vector<double> x = x0;
        bool at_center = true;
        for (std::size_t k = 0; k < off.size(); ++k) {
            x[k] += h_ * off[k];
            if (off[k] != 0) at_center = false;
        }
        double v = sec[comp].eval(x);
        if (at_center && static_cast<int>(comp) == pert_comp) v += pert;
        return v;
    }

    // 4th-order central stencils
    static double d1(const std::array<double, 5>& f, double h) {
        return (-f[4] + 8 * f[3] - 8 * f[1] + f[0]) / (12 * h);
    }
    static double d2(const std::array<double, 5>& f, double h) {
        return (-f[4] + 16 * f[3] - 30 * f[2] + 16 * f[1] - f[0]) / (12 * h * h);
    }

    double local_action(const SectionPolys& sec, const std::vector<double>& x0,
                        int pert_comp, double pert) const {
        const int n = b_.dim();
        std::vector<Offset> cells;
        enumerate(n, 2, cells);  // cells whose stencil sees the center node

        double action = 0.0;
        double cellvol = 1.0;
        for (int i = 0; i < n; ++i) cellvol *= h_;

        const auto& comps = b_.components();
        for (const Offset& cell : cells) {
            std::map<Atom, double> jet;
            for (int i = 1; i <= n; ++i)
                jet[Atom::coord(i)] =
                    x0[static_cast<std::size_t>(i - 1)] + h_ * cell[static_cast<std::size_t>(i - 1)];

            const auto value_at = [&](std::size_t comp, const Offset& rel) {
                Offset abs = cell;
                for (std::size_t k = 0; k < abs.size(); ++k) abs[k] += rel[k];
                return node_value(sec, x0, abs, comp, pert_comp, pert);
            };

            for (std::size_t k = 0; k < comps.size(); ++k) {
                Offset zero(static_cast<std::size_t>(n), 0);
                jet[b_.jet_atom(comps[k])] = value_at(k, zero);

                for (int i = 1; i <= n; ++i) {
                    std::array<double, 5> line{};
                    for (int s = -2; s <= 2; ++s) {
                        Offset rel(static_cast<std::size_t>(n), 0);
                        rel[static_cast<std::size_t>(i - 1)] = s;
                        line[static_cast<std::size_t>(s + 2)] = value_at(k, rel);
                    }
                    jet[b_.jet_atom(comps[k], MultiIdx{i})] = d1(line, h_);
                    jet[b_.jet_atom(comps[k], MultiIdx{i, i})] = d2(line, h_);
                    for (int j = i + 1; j <= n; ++j) {
                        // mixed derivative: d1 along j of d1 along i
                        std::array<double, 5> outer{};
                        for (int sj = -2; sj <= 2; ++sj) {
                            std::array<double, 5> inner{};
                            for (int si = -2; si <= 2; ++si) {
                                Offset rel(static_cast<std::size_t>(n), 0);
                                rel[static_cast<std::size_t>(i - 1)] = si;
                                rel[static_cast<std::size_t>(j - 1)] = sj;
                                inner[static_cast<std::size_t>(si + 2)] = value_at(k, rel);
                            }
                            outer[static_cast<std::size_t>(sj + 2)] = d1(inner, h_);
                        }
                        jet[b_.jet_atom(comps[k], MultiIdx{i, j})] = d1(outer, h_);
                    }
                }
            }

            for (std::size_t f = 0; f < b_.fields().size(); ++f) {
                if (b_.field(static_cast<int>(f)).kind != FieldKind::symmetric2) continue;
                double det = 1.0;
                if (n == 1) {
                    det = jet[Atom::jet(static_cast<int>(f), CompIdx{1, 1}, {})];
                } else if (n == 2) {
                    const double g11 = jet[Atom::jet(static_cast<int>(f), CompIdx{1, 1}, {})];
                    const double g12 = jet[Atom::jet(static_cast<int>(f), CompIdx{1, 2}, {})];
                    const double g22 = jet[Atom::jet(static_cast<int>(f), CompIdx{2, 2}, {})];
                    det = g11 * g22 - g12 * g12;
                }
                jet[Atom::root(static_cast<int>(f), n)] = std::sqrt(det);
            }

            action += cellvol * L_.coeff.evaluate(jet);
        }
        return action;
    }

    Density L_;
    BundleSpec b_;
    double h_;
    double eps_;
};

} // namespace testsupport
