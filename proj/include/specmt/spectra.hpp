#pragma once

#include <string>
#include <vector>

#include "specmt/model.hpp"

namespace specmt {

// sigma_p with multiplicities, sigma_e and sigma as representable closed
// sets, and sigma_d = sigma \ sigma_e (isolated eigenvalues of finite
// multiplicity; finite presentations cannot accumulate eigenvalues, so
// no extra accumulation clause is needed).
struct SpectrumReport {
    std::vector<std::pair<Rational, Multiplicity>> point_spectrum;
    IntervalSet essential_spectrum;
    std::vector<std::pair<Rational, std::int64_t>> discrete_spectrum;
    IntervalSet full_spectrum;
};

namespace detail {

// closure of a finite union of half-open pieces: [a,b) u {b}
inline void add_closure(IntervalSet& s, const BorelMeasure& mu) {
    for (const auto& [iv, h] : mu.pieces()) {
        s.add_interval(iv);
        s.add_point(iv.hi);
    }
}

}  // namespace detail

inline SpectrumReport compute_spectrum(const OperatorModel& m) {
    SpectrumReport rep;

    // eigenvalues: slots contribute their multiplicity, each summand atom
    // contributes one dimension (indicator of the atom)
    std::vector<std::pair<Rational, Multiplicity>> eigen;
    auto bump = [&eigen](const Rational& lam, const Multiplicity& mult) {
        for (auto& [l, m0] : eigen)
            if (l == lam) {
                if (m0.omega || mult.omega)
                    m0 = Multiplicity::inf();
                else
                    m0 = Multiplicity::finite(m0.count + mult.count);
                return;
            }
        eigen.push_back({lam, mult});
    };
    for (const auto& slot : m.slots()) bump(slot.eigenvalue, slot.mult);
    for (const auto& mu : m.summands())
        for (const auto& [loc, mass] : mu.atoms()) bump(loc, Multiplicity::finite(1));
    std::sort(eigen.begin(), eigen.end(),
              [](const auto& a, const auto& b) { return a.first < b.first; });
    rep.point_spectrum = eigen;

    IntervalSet ess;
    for (const auto& mu : m.summands()) detail::add_closure(ess, mu);
    for (const auto& slot : m.slots())
        if (slot.mult.omega) ess.add_point(slot.eigenvalue);
    rep.essential_spectrum = ess;

    IntervalSet full = ess;
    for (const auto& [lam, mult] : eigen) full.add_point(lam);
    rep.full_spectrum = full;

    for (const auto& [lam, mult] : eigen)
        if (!mult.omega && !ess.contains(lam)) rep.discrete_spectrum.push_back({lam, mult.count});
    return rep;
}

// dim E_(lambda-eps, lambda+eps) H, the Weyl-criterion window count.
inline Multiplicity weyl_dimension(const OperatorModel& m, const Rational& lambda, const Rational& eps) {
    if (!(eps > 0)) throw Error("weyl_dimension requires eps > 0");
    Rational lo = lambda - eps, hi = lambda + eps;  // open window (lo, hi)
    auto in_window = [&](const Rational& x) { return lo < x && x < hi; };
    std::int64_t count = 0;
    for (const auto& slot : m.slots()) {
        if (!in_window(slot.eigenvalue)) continue;
        if (slot.mult.omega) return Multiplicity::inf();
        count += slot.mult.count;
    }
    for (const auto& mu : m.summands()) {
        for (const auto& [iv, h] : mu.pieces())
            if (max_rational(iv.lo, lo) < min_rational(iv.hi, hi)) return Multiplicity::inf();
        for (const auto& [loc, mass] : mu.atoms())
            if (in_window(loc)) count += 1;
    }
    return {false, count};
}

struct EquivalenceReport {
    bool equivalent = true;
    std::vector<std::string> violations;
};

// Q1 ~sigma Q2: equal spectra, equal essential spectra, and equal
// eigenspace dimensions off the essential spectrum. Multiplicity inside
// sigma_e is deliberately unconstrained.
inline EquivalenceReport spectrally_equivalent(const OperatorModel& m1, const OperatorModel& m2) {
    EquivalenceReport rep;
    auto r1 = compute_spectrum(m1);
    auto r2 = compute_spectrum(m2);
    if (!(r1.full_spectrum == r2.full_spectrum)) {
        rep.equivalent = false;
        rep.violations.push_back("sigma differs: " + r1.full_spectrum.str() + " vs " + r2.full_spectrum.str());
    }
    if (!(r1.essential_spectrum == r2.essential_spectrum)) {
        rep.equivalent = false;
        rep.violations.push_back("sigma_e differs: " + r1.essential_spectrum.str() + " vs " +
                                 r2.essential_spectrum.str());
    }
    auto dim_at = [](const SpectrumReport& r, const Rational& lam) -> std::int64_t {
        for (const auto& [l, d] : r.discrete_spectrum)
            if (l == lam) return d;
        return 0;
    };
    std::vector<Rational> off_essential;
    for (const auto& [lam, d] : r1.discrete_spectrum) off_essential.push_back(lam);
    for (const auto& [lam, d] : r2.discrete_spectrum) off_essential.push_back(lam);
    std::sort(off_essential.begin(), off_essential.end());
    off_essential.erase(std::unique(off_essential.begin(), off_essential.end()), off_essential.end());
    for (const auto& lam : off_essential) {
        std::int64_t d1 = dim_at(r1, lam), d2 = dim_at(r2, lam);
        if (d1 != d2) {
            rep.equivalent = false;
            rep.violations.push_back("eigenspace dimension at " + format_rational(lam) + ": " +
                                     std::to_string(d1) + " vs " + std::to_string(d2));
        }
    }
    return rep;
}

}  // namespace specmt
