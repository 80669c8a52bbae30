#include <catch2/catch_amalgamated.hpp>

#include "specmt/galois_type.hpp"
#include "generators.hpp"

using namespace specmt;

namespace {

StepVector indicator_vector(const ModelPtr& m, int summand, const Interval& iv) {
    std::vector<SummandPart> parts(m->summands().size());
    parts[summand].pieces.push_back({iv, Complex(rat(1))});
    return make_vector(m, {}, std::move(parts), false);
}

TypeInvariant atom_type(const ModelPtr& m, const ParameterSet& g, const Rational& loc, const Rational& mass) {
    return {zero_vector(m), BorelMeasure::atom(loc, mass), g};
}

}  // namespace

TEST_CASE("type invariants in the three trivial regimes") {
    TestRng rng(101);
    for (int i = 0; i < 15; ++i) {
        auto m = rng.model();
        auto v = rng.vector(m);
        // v in G: base is v, residual zero
        auto g = ParameterSet::make(m, {v});
        auto t = type_of(v, g);
        CHECK(t.base == v);
        CHECK(t.residual.is_zero());
        // empty set: base 0, residual mu_v
        auto t0 = type_of(v, ParameterSet::empty(m));
        CHECK(t0.base.is_zero());
        CHECK(t0.residual == spectral_measure(v));
    }
    // v orthogonal to H_G
    auto u = BorelMeasure::uniform(rat(0), rat(1));
    auto m = OperatorModel::make({}, {u, BorelMeasure::uniform(rat(2), rat(3))});
    auto g = ParameterSet::make(m, {indicator_vector(m, 0, {rat(0), rat(1)})});
    auto w = indicator_vector(m, 1, {rat(2), rat(3)});
    auto tw = type_of(w, g);
    CHECK(tw.base.is_zero());
    CHECK(tw.residual == spectral_measure(w));
}

TEST_CASE("types_equal distinguishes residual masses and enforces context") {
    auto m = OperatorModel::make({}, {BorelMeasure::uniform(rat(0), rat(1))});
    auto g = ParameterSet::empty(m);
    auto t1 = atom_type(m, g, rat(0), rat(1));
    auto t2 = atom_type(m, g, rat(0), rat(4));
    CHECK(types_equal(t1, t1));
    CHECK_FALSE(types_equal(t1, t2));
    auto other = ParameterSet::make(m, {indicator_vector(m, 0, {rat(0), rat(1)})});
    TypeInvariant t3{zero_vector(m), BorelMeasure::atom(rat(0), rat(1)), other};
    CHECK_THROWS_AS(types_equal(t1, t3), ContextMismatch);
}

TEST_CASE("paper distance evaluates its three cases") {
    auto m = OperatorModel::make(
        {}, {BorelMeasure::from({{rat(0), rat(1)}, {rat(1), rat(1)}}, {{{rat(0), rat(1)}, rat(1)}})});
    auto g = ParameterSet::empty(m);
    auto ta = atom_type(m, g, rat(0), rat(1));
    CHECK(type_distance_paper(ta, ta) == 0.0);
    auto tb = atom_type(m, g, rat(1), rat(1));
    CHECK_THAT(type_distance_paper(ta, tb), Catch::Matchers::WithinAbs(std::sqrt(2.0), 1e-12));
    auto t4 = atom_type(m, g, rat(0), rat(4));
    CHECK_THAT(type_distance_paper(ta, t4), Catch::Matchers::WithinAbs(3.0, 1e-12));
}

TEST_CASE("realization distance matches alignment values") {
    auto m = OperatorModel::make(
        {}, {BorelMeasure::from({{rat(0), rat(1)}, {rat(1), rat(1)}}, {{{rat(0), rat(1)}, rat(1)}})});
    auto g = ParameterSet::empty(m);
    auto ta = atom_type(m, g, rat(0), rat(1));
    auto tb = atom_type(m, g, rat(1), rat(1));
    auto t4 = atom_type(m, g, rat(0), rat(4));
    CHECK(type_distance_realization(ta, ta) == 0.0);
    CHECK_THAT(type_distance_realization(ta, tb), Catch::Matchers::WithinAbs(std::sqrt(2.0), 1e-12));
    CHECK_THAT(type_distance_realization(ta, t4), Catch::Matchers::WithinAbs(1.0, 1e-12));
}

TEST_CASE("documented discrepancy: scaled atoms, paper 3 vs realization 1") {
    auto m = OperatorModel::make({}, {BorelMeasure::from({{rat(0), rat(4)}}, {})});
    auto g = ParameterSet::empty(m);
    auto t1 = atom_type(m, g, rat(0), rat(1));
    auto t4 = atom_type(m, g, rat(0), rat(4));
    CHECK_THAT(type_distance_paper(t1, t4), Catch::Matchers::WithinAbs(3.0, 1e-12));
    CHECK_THAT(type_distance_realization(t1, t4), Catch::Matchers::WithinAbs(1.0, 1e-12));
}

TEST_CASE("realize_type round trip is exact") {
    TestRng rng(202);
    for (int i = 0; i < 25; ++i) {
        auto m = rng.model();
        auto v = rng.vector(m);
        auto g = ParameterSet::make(m, {rng.vector(m)});
        auto t = type_of(v, g);
        auto r = realize_type(t);
        auto t2 = type_of(r.vector, r.context);
        CHECK(types_equal(t, t2));
    }
}

TEST_CASE("realize_type rejects supports outside the class") {
    auto m = OperatorModel::make({}, {BorelMeasure::uniform(rat(0), rat(1))});
    auto g = ParameterSet::empty(m);
    auto bad_atom = atom_type(m, g, rat(99), rat(1));
    CHECK_THROWS_AS(realize_type(bad_atom), ClassViolation);
    TypeInvariant bad_piece{zero_vector(m), BorelMeasure::uniform(rat(5), rat(6)), g};
    CHECK_THROWS_AS(realize_type(bad_piece), ClassViolation);
    // density prolonging past sigma_e is rejected even when overlapping
    TypeInvariant bad_overlap{zero_vector(m), BorelMeasure::uniform(rat(1, 2), rat(3, 2)), g};
    CHECK_THROWS_AS(realize_type(bad_overlap), ClassViolation);
    // but an atom inside sigma_e is welcome
    TypeInvariant ok{zero_vector(m), BorelMeasure::atom(rat(1, 2), rat(2)), g};
    auto r = realize_type(ok);
    CHECK(r.model->summands().size() == 2);
    CHECK(types_equal(ok, type_of(r.vector, r.context)));
}

TEST_CASE("type invariance under automorphisms fixing G") {
    auto u = BorelMeasure::uniform(rat(0), rat(1));
    auto u2 = BorelMeasure::uniform(rat(2), rat(3));
    auto m = OperatorModel::make({{rat(5), Multiplicity::finite(2)}}, {u, u2, u2});
    TestAutomorphism aut;
    aut.model = m;
    aut.summand_swaps = {{1, 2}};
    aut.rotations = {{0, 0, 1, rat(3, 5), rat(4, 5)}};
    aut.validate();
    TestRng rng(303);
    for (int i = 0; i < 20; ++i) {
        // G touches only summand 0, so aut fixes it pointwise
        std::vector<SummandPart> gparts(3);
        gparts[0].pieces.push_back({{rat(0), rng.chance(0.5) ? rat(1, 2) : rat(1)}, rng.complex_rational()});
        auto gen = make_vector(m, {}, std::move(gparts), false);
        if (gen.is_zero()) continue;
        auto g = ParameterSet::make(m, {gen});
        CHECK(aut.apply(gen) == gen);
        auto v = rng.vector(m);
        CHECK(types_equal(type_of(v, g), type_of(aut.apply(v), g)));
    }
}

TEST_CASE("realization distance is a pseudometric; paper distance in its regimes") {
    TestRng rng(404);
    for (int i = 0; i < 30; ++i) {
        auto m = rng.model();
        auto g = ParameterSet::make(m, {rng.vector(m)});
        auto t1 = type_of(rng.vector(m), g);
        auto t2 = type_of(rng.vector(m), g);
        auto t3 = type_of(rng.vector(m), g);
        double d12 = type_distance_realization(t1, t2);
        double d21 = type_distance_realization(t2, t1);
        CHECK(d12 == d21);
        CHECK((d12 == 0.0) == types_equal(t1, t2));
        CHECK(type_distance_realization(t1, t3) <= d12 + type_distance_realization(t2, t3) + 1e-8);
        // paper distance: symmetric whenever its case theorems apply
        if (is_abs_continuous(t1.residual, t2.residual) || is_abs_continuous(t2.residual, t1.residual) ||
            is_mutually_singular(t1.residual, t2.residual)) {
            CHECK_THAT(type_distance_paper(t1, t2),
                       Catch::Matchers::WithinAbs(type_distance_paper(t2, t1), 1e-10));
        }
    }
}

TEST_CASE("paper general-case formula is asymmetric on mixed supports") {
    // common atom with gap 1, plus disjoint masses 2 and 3: the verbatim
    // formula gives sqrt((1+2)^2+9) one way and sqrt((1+3)^2+4) the other
    auto mu_all = BorelMeasure::from({{rat(0), rat(9)}, {rat(1), rat(9)}, {rat(2), rat(9)}}, {});
    auto m = OperatorModel::make({}, {mu_all});
    auto g = ParameterSet::empty(m);
    TypeInvariant ta{zero_vector(m), BorelMeasure::from({{rat(0), rat(1)}, {rat(1), rat(2)}}, {}), g};
    TypeInvariant tb{zero_vector(m), BorelMeasure::from({{rat(0), rat(2)}, {rat(2), rat(3)}}, {}), g};
    double dab = type_distance_paper(ta, tb);
    double dba = type_distance_paper(tb, ta);
    CHECK_THAT(dab, Catch::Matchers::WithinAbs(std::sqrt(18.0), 1e-12));
    CHECK_THAT(dba, Catch::Matchers::WithinAbs(std::sqrt(20.0), 1e-12));
    // the realization metric is symmetric on the same pair
    CHECK(type_distance_realization(ta, tb) == type_distance_realization(tb, ta));
}

TEST_CASE("perturbation property: equal-type convergent sequences keep the type") {
    TestRng rng(505);
    for (int i = 0; i < 15; ++i) {
        auto m = rng.model();
        auto g = ParameterSet::make(m, {rng.vector(m)});
        auto v = rng.vector(m);
        auto t = type_of(v, g);
        if (t.residual.is_zero()) continue;
        // v_i = base + c_i w + s_i u_i with c_i^2 + s_i^2 = 1 and u_i fresh
        // equal-measure residuals; v_i -> base + w with all types equal
        auto r0 = realize_type(t);  // base + w on a fresh summand
        const int kStages = 4;
        std::vector<ModelPtr> inputs{r0.model};
        for (int k = 0; k < kStages; ++k)
            inputs.push_back(OperatorModel::make({}, {t.residual}));
        DirectSum ds(inputs);
        auto base_w = ds.embed(0, r0.vector);  // base + w
        auto gens = std::vector<StepVector>{};
        for (const auto& ge : r0.context.generators) gens.push_back(ds.embed(0, ge));
        auto gext = ParameterSet::make(ds.model(), gens);
        auto t_limit = type_of(base_w, gext);
        // base and w inside the big model: slot indices and summand prefix
        // are preserved by the fresh-summand extensions
        auto base_ds = make_vector(ds.model(), t.base.slot_coords, t.base.parts, true);
        Rational prev_dist_sq(-1);
        for (int k = 1; k <= kStages; ++k) {
            Rational ti(k), c = (ti * ti - 1) / (ti * ti + 1), s = 2 * ti / (ti * ti + 1);
            auto w_part = base_w - base_ds;
            int fresh_summand = static_cast<int>(r0.model->summands().size()) + (k - 1);
            std::vector<SummandPart> uparts(ds.model()->summands().size());
            for (const auto& [iv, h] : t.residual.pieces())
                uparts[fresh_summand].pieces.push_back({iv, Complex(rat(1))});
            for (const auto& [loc, mass] : t.residual.atoms())
                uparts[fresh_summand].atom_values.push_back({loc, Complex(rat(1))});
            auto u_k = make_vector(ds.model(), {}, std::move(uparts), true);
            auto v_k = base_ds + Complex(c) * w_part + Complex(s) * u_k;
            CHECK(types_equal(type_of(v_k, gext), t_limit));
            Rational dist_sq = norm_sq(v_k - base_w);
            if (prev_dist_sq >= 0) CHECK(dist_sq <= prev_dist_sq);
            prev_dist_sq = dist_sq;
        }
    }
}
