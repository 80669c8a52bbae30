#pragma once

#include <cmath>
#include <utility>

#include "specmt/spectra.hpp"
#include "specmt/subspace.hpp"

namespace specmt {

// Complete invariant of the Galois type of v over G: the projection
// P_G v and the spectral measure of the residual v - P_G v.
struct TypeInvariant {
    StepVector base;
    BorelMeasure residual;
    ParameterSet context;
};

inline TypeInvariant type_of(const StepVector& v, const ParameterSet& g) {
    if (!same_model(v.model, g.model)) throw ModelMismatch();
    auto h = cyclic_subspace(g);
    StepVector base = h.project(v);
    BorelMeasure residual = spectral_measure(v - base);
    return {std::move(base), std::move(residual), g};
}

namespace detail {

inline void require_same_context(const TypeInvariant& a, const TypeInvariant& b) {
    // generator data must agree; the models may differ by fresh-summand
    // extensions, which embeddings keep data-identical
    if (!a.context.same_generators(b.context)) throw ContextMismatch();
}

}  // namespace detail

inline bool types_equal(const TypeInvariant& a, const TypeInvariant& b) {
    detail::require_same_context(a, b);
    return a.base.data_equals(b.base) && a.residual == b.residual;
}

// The paper's three-case distance between types over the empty set,
// applied to the residual measures: total variation when comparable,
// root-sum-of-squared-masses when mutually singular, and the Lebesgue
// mixed formula in general.
inline double residual_distance_paper(const BorelMeasure& mv, const BorelMeasure& mw) {
    if (mv == mw) return 0.0;
    if (is_abs_continuous(mv, mw)) return to_double(tv_distance(mw, mv));
    if (is_mutually_singular(mv, mw)) {
        double a = to_double(total_mass(mv));
        double b = to_double(total_mass(mw));
        return std::sqrt(a * a + b * b);
    }
    auto dec = lebesgue_decompose(mw, mv);
    double tv = to_double(tv_distance(mv, dec.part_ac));
    double sing = to_double(total_mass(dec.part_sing));
    return std::sqrt(tv * tv + sing * sing);
}

// d(p,q) = sqrt(|P_G v - P_G w|^2 + d^2(residual types over empty));
// the verbatim combination of the paper's formulas.
inline double type_distance_paper(const TypeInvariant& a, const TypeInvariant& b) {
    detail::require_same_context(a, b);
    double base_sq = to_double(norm_sq(a.base - b.base));
    double d0 = residual_distance_paper(a.residual, b.residual);
    return std::sqrt(base_sq + d0 * d0);
}

// Realization-infimum semantics: the infimum of |v - w| over joint
// realizations with the given invariants, which the alignment argument
// turns into the Hellinger distance of the residual measures. This is
// the metric downstream modules use; the paper formula is reported
// alongside it.
inline double type_distance_realization(const TypeInvariant& a, const TypeInvariant& b) {
    detail::require_same_context(a, b);
    double base_sq = to_double(norm_sq(a.base - b.base));
    double h = hellinger_distance(a.residual, b.residual);
    return std::sqrt(base_sq + h * h);
}

struct Realization {
    ModelPtr model;          // context model, possibly one summand bigger
    StepVector vector;       // realizes the type over the embedded context
    ParameterSet context;    // the context viewed in the extended model
};

namespace detail {

// Residual supports may add eigenvalues inside sigma_e freely, but must
// not extend sigma or sigma_e. Returns a witness description on failure.
inline void check_class_constraints(const BorelMeasure& residual, const OperatorModel& m) {
    auto rep = compute_spectrum(m);
    for (const auto& [iv, h] : residual.pieces()) {
        IntervalSet closure = IntervalSet::of(iv);
        closure.add_point(iv.hi);
        if (!(rep.essential_spectrum.unite(closure) == rep.essential_spectrum))
            throw ClassViolation(format_interval(iv));
    }
    for (const auto& [loc, mass] : residual.atoms()) {
        if (!rep.full_spectrum.contains(loc)) throw ClassViolation("{" + format_rational(loc) + "}");
    }
}

}  // namespace detail

// Realizes the invariant by direct-summing one fresh L^2(residual)
// summand and taking base + (constant one) there. The fresh summand is
// always allocated even when an existing one would have room; the
// invariant does not care which realization is produced.
inline Realization realize_type(const TypeInvariant& t) {
    if (t.residual.is_zero()) return {t.context.model, t.base, t.context};
    detail::check_class_constraints(t.residual, *t.context.model);
    auto fresh = OperatorModel::make({}, {t.residual});
    DirectSum ds({t.context.model, fresh});
    StepVector v = ds.embed(0, t.base);
    int fresh_index = static_cast<int>(ds.model()->summands().size()) - 1;
    std::vector<SummandPart> one_parts(ds.model()->summands().size());
    for (const auto& [iv, h] : t.residual.pieces())
        one_parts[fresh_index].pieces.push_back({iv, Complex(rat(1))});
    for (const auto& [loc, mass] : t.residual.atoms())
        one_parts[fresh_index].atom_values.push_back({loc, Complex(rat(1))});
    StepVector unit = make_vector(ds.model(), {}, std::move(one_parts), true);
    std::vector<StepVector> gens;
    gens.reserve(t.context.generators.size());
    for (const auto& g : t.context.generators) gens.push_back(ds.embed(0, g));
    return {ds.model(), v + unit, ParameterSet::make(ds.model(), std::move(gens))};
}

}  // namespace specmt
