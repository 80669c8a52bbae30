#pragma once

#include <cmath>
#include <utility>
#include <vector>

#include "specmt/intervals.hpp"

namespace specmt {

// Finite positive Borel measure on the line: finitely many atoms plus a
// piecewise-constant density, all data exact rationals. Canonical form:
// atom locations strictly increasing with positive masses; density pieces
// disjoint, sorted, merged whenever adjacent with equal height; nothing
// of mass or height zero is ever stored. Values are immutable once built.
class BorelMeasure {
  public:
    BorelMeasure() = default;

    static BorelMeasure zero() { return {}; }

    static BorelMeasure from(std::vector<std::pair<Rational, Rational>> atoms,
                             std::vector<std::pair<Interval, Rational>> pieces) {
        BorelMeasure m;
        m.atoms_ = std::move(atoms);
        m.pieces_ = std::move(pieces);
        m.canonicalize();
        return m;
    }

    static BorelMeasure atom(Rational location, Rational mass) {
        return from({{std::move(location), std::move(mass)}}, {});
    }

    static BorelMeasure uniform(Rational lo, Rational hi, Rational height = Rational(1)) {
        return from({}, {{Interval{std::move(lo), std::move(hi)}, std::move(height)}});
    }

    const std::vector<std::pair<Rational, Rational>>& atoms() const { return atoms_; }
    const std::vector<std::pair<Interval, Rational>>& pieces() const { return pieces_; }

    bool is_zero() const { return atoms_.empty() && pieces_.empty(); }

    Rational atom_mass_at(const Rational& x) const {
        for (const auto& [loc, mass] : atoms_)
            if (loc == x) return mass;
        return Rational(0);
    }

    Rational density_at(const Rational& x) const {
        for (const auto& [iv, h] : pieces_)
            if (iv.contains(x)) return h;
        return Rational(0);
    }

    Partition partition() const {
        Partition p;
        for (const auto& [iv, h] : pieces_) p.add_interval(iv);
        for (const auto& [loc, m] : atoms_) p.add_point(loc);
        p.finish();
        return p;
    }

    IntervalSet density_support() const {
        IntervalSet s;
        for (const auto& [iv, h] : pieces_) s.add_interval(iv);
        return s;
    }

    friend bool operator==(const BorelMeasure& a, const BorelMeasure& b) = default;

    friend BorelMeasure operator+(const BorelMeasure& a, const BorelMeasure& b) {
        std::vector<std::pair<Rational, Rational>> atoms = a.atoms_;
        atoms.insert(atoms.end(), b.atoms_.begin(), b.atoms_.end());
        Partition p = a.partition().merged_with(b.partition());
        std::vector<std::pair<Interval, Rational>> pieces;
        for (const auto& cell : p.cells()) {
            Rational h = a.density_at(cell.lo) + b.density_at(cell.lo);
            if (h != 0) pieces.push_back({cell, h});
        }
        return from(std::move(atoms), std::move(pieces));
    }

    BorelMeasure scaled(const Rational& c) const {
        if (c < 0) throw Error("measures cannot be scaled by a negative factor");
        if (c == 0) return zero();
        std::vector<std::pair<Rational, Rational>> atoms;
        for (const auto& [loc, m] : atoms_) atoms.push_back({loc, c * m});
        std::vector<std::pair<Interval, Rational>> pieces;
        for (const auto& [iv, h] : pieces_) pieces.push_back({iv, c * h});
        return from(std::move(atoms), std::move(pieces));
    }

    // Restriction to a representable set, exact.
    BorelMeasure restricted(const IntervalSet& s) const {
        std::vector<std::pair<Rational, Rational>> atoms;
        for (const auto& [loc, m] : atoms_)
            if (s.contains(loc)) atoms.push_back({loc, m});
        std::vector<std::pair<Interval, Rational>> pieces;
        for (const auto& [iv, h] : pieces_)
            for (const auto& xiv : s.intervals()) {
                Rational lo = xiv.lo.cls == -1 ? iv.lo : max_rational(iv.lo, xiv.lo.value);
                Rational hi = xiv.hi.cls == +1 ? iv.hi : min_rational(iv.hi, xiv.hi.value);
                if (lo < hi) pieces.push_back({{lo, hi}, h});
            }
        return from(std::move(atoms), std::move(pieces));
    }

  private:
    void canonicalize() {
        std::sort(atoms_.begin(), atoms_.end(),
                  [](const auto& x, const auto& y) { return x.first < y.first; });
        std::vector<std::pair<Rational, Rational>> merged_atoms;
        for (auto& a : atoms_) {
            if (a.second < 0) throw Error("negative atom mass");
            if (a.second == 0) continue;
            if (!merged_atoms.empty() && merged_atoms.back().first == a.first)
                merged_atoms.back().second += a.second;
            else
                merged_atoms.push_back(std::move(a));
        }
        atoms_ = std::move(merged_atoms);

        std::sort(pieces_.begin(), pieces_.end(),
                  [](const auto& x, const auto& y) { return x.first.lo < y.first.lo; });
        std::vector<std::pair<Interval, Rational>> merged;
        for (auto& p : pieces_) {
            if (p.second < 0) throw Error("negative density height");
            if (p.second == 0 || !(p.first.lo < p.first.hi)) continue;
            if (!merged.empty()) {
                if (p.first.lo < merged.back().first.hi)
                    throw Error("overlapping density pieces");
                if (merged.back().first.hi == p.first.lo && merged.back().second == p.second) {
                    merged.back().first.hi = p.first.hi;
                    continue;
                }
            }
            merged.push_back(std::move(p));
        }
        pieces_ = std::move(merged);
    }

    std::vector<std::pair<Rational, Rational>> atoms_;
    std::vector<std::pair<Interval, Rational>> pieces_;
};

inline Rational total_mass(const BorelMeasure& mu) {
    Rational t(0);
    for (const auto& [loc, m] : mu.atoms()) t += m;
    for (const auto& [iv, h] : mu.pieces()) t += h * iv.length();
    return t;
}

inline Rational measure_of(const BorelMeasure& mu, const IntervalSet& s) {
    return total_mass(mu.restricted(s));
}

// Shared grid on which all the given measures have constant density and
// all atoms are isolated cut points. Binary operations route through it.
inline Partition common_refinement(const std::vector<const BorelMeasure*>& items) {
    Partition p;
    for (const auto* m : items) p = p.merged_with(m->partition());
    return p;
}

// Total variation norm of mu - nu; the signed difference is never stored.
inline Rational tv_distance(const BorelMeasure& mu, const BorelMeasure& nu) {
    Rational t(0);
    Partition p = common_refinement({&mu, &nu});
    for (const auto& x : p.points) t += abs_rational(mu.atom_mass_at(x) - nu.atom_mass_at(x));
    for (const auto& cell : p.cells())
        t += abs_rational(mu.density_at(cell.lo) - nu.density_at(cell.lo)) * cell.length();
    return t;
}

// Unnormalized Hellinger distance; the one irrational-valued measure
// functional here, so it returns floating point.
inline double hellinger_distance(const BorelMeasure& mu, const BorelMeasure& nu) {
    if (mu == nu) return 0.0;
    double acc = 0.0;
    Partition p = common_refinement({&mu, &nu});
    for (const auto& x : p.points) {
        double d = std::sqrt(to_double(mu.atom_mass_at(x))) - std::sqrt(to_double(nu.atom_mass_at(x)));
        acc += d * d;
    }
    for (const auto& cell : p.cells()) {
        double d = std::sqrt(to_double(mu.density_at(cell.lo))) - std::sqrt(to_double(nu.density_at(cell.lo)));
        acc += d * d * to_double(cell.length());
    }
    return std::sqrt(acc);
}

struct LebesgueDecomposition {
    BorelMeasure part_ac;    // << nu
    BorelMeasure part_sing;  // perp nu
};

// mu = part_ac + part_sing exactly. Atoms of mu sitting on nu-atoms are
// absolutely continuous; atoms elsewhere are singular (a continuous part
// of nu puts no mass on points). Density of mu over positive nu-density
// is absolutely continuous, over zero nu-density singular.
inline LebesgueDecomposition lebesgue_decompose(const BorelMeasure& mu, const BorelMeasure& nu) {
    std::vector<std::pair<Rational, Rational>> ac_atoms, sing_atoms;
    for (const auto& [loc, m] : mu.atoms()) {
        if (nu.atom_mass_at(loc) != 0)
            ac_atoms.push_back({loc, m});
        else
            sing_atoms.push_back({loc, m});
    }
    std::vector<std::pair<Interval, Rational>> ac_pieces, sing_pieces;
    Partition p = common_refinement({&mu, &nu});
    for (const auto& cell : p.cells()) {
        Rational h = mu.density_at(cell.lo);
        if (h == 0) continue;
        if (nu.density_at(cell.lo) != 0)
            ac_pieces.push_back({cell, h});
        else
            sing_pieces.push_back({cell, h});
    }
    return {BorelMeasure::from(std::move(ac_atoms), std::move(ac_pieces)),
            BorelMeasure::from(std::move(sing_atoms), std::move(sing_pieces))};
}

inline bool is_abs_continuous(const BorelMeasure& mu, const BorelMeasure& nu) {
    return lebesgue_decompose(mu, nu).part_sing.is_zero();
}

inline bool is_mutually_singular(const BorelMeasure& mu, const BorelMeasure& nu) {
    return lebesgue_decompose(mu, nu).part_ac.is_zero();
}

// Real-valued step function with point corrections: the Radon-Nikodym
// derivative shape. Complex-valued step functions used by the functional
// calculus live in piecewise.hpp; this stays real because densities are.
struct RealStepFunction {
    std::vector<std::pair<Interval, Rational>> pieces;
    std::vector<std::pair<Rational, Rational>> point_values;

    Rational eval(const Rational& x) const {
        for (const auto& [loc, v] : point_values)
            if (loc == x) return v;
        for (const auto& [iv, v] : pieces)
            if (iv.contains(x)) return v;
        return Rational(0);
    }
};

// dmu = f dnu. Requires mu << nu; the error carries a witness set with
// nu(S) = 0 < mu(S).
inline RealStepFunction radon_nikodym(const BorelMeasure& mu, const BorelMeasure& nu) {
    auto dec = lebesgue_decompose(mu, nu);
    if (!dec.part_sing.is_zero()) {
        const auto& bad = dec.part_sing;
        std::string witness = !bad.atoms().empty() ? "{" + format_rational(bad.atoms()[0].first) + "}"
                                                   : format_interval(bad.pieces()[0].first);
        throw NotAbsolutelyContinuous(witness);
    }
    RealStepFunction f;
    for (const auto& [loc, m] : nu.atoms()) {
        Rational num = mu.atom_mass_at(loc);
        f.point_values.push_back({loc, num / m});
    }
    Partition p = common_refinement({&mu, &nu});
    for (const auto& cell : p.cells()) {
        Rational hn = nu.density_at(cell.lo);
        if (hn == 0) continue;
        Rational hm = mu.density_at(cell.lo);
        if (!f.pieces.empty() && f.pieces.back().first.hi == cell.lo &&
            f.pieces.back().second == hm / hn) {
            f.pieces.back().first.hi = cell.hi;
        } else {
            f.pieces.push_back({cell, hm / hn});
        }
    }
    return f;
}

// Integrates f dnu back into a measure; the exact inverse of radon_nikodym.
inline BorelMeasure integrate_against(const RealStepFunction& f, const BorelMeasure& nu) {
    std::vector<std::pair<Rational, Rational>> atoms;
    for (const auto& [loc, m] : nu.atoms()) atoms.push_back({loc, f.eval(loc) * m});
    std::vector<std::pair<Interval, Rational>> pieces;
    Partition p = nu.partition();
    for (const auto& [iv, fv] : f.pieces) {
        p.add_interval(iv);
    }
    p.finish();
    for (const auto& cell : p.cells()) {
        Rational h = nu.density_at(cell.lo);
        if (h == 0) continue;
        Rational fv(0);
        for (const auto& [iv, v] : f.pieces)
            if (iv.contains(cell.lo)) { fv = v; break; }
        if (fv < 0) throw Error("negative density in reconstruction");
        pieces.push_back({cell, fv * h});
    }
    return BorelMeasure::from(std::move(atoms), std::move(pieces));
}

}  // namespace specmt
