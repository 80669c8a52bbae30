#pragma once

#include <utility>
#include <vector>

#include "specmt/model.hpp"

namespace specmt {

// A finite list of generators in one model; stands in for the paper's
// small parameter sets G, F.
struct ParameterSet {
    ModelPtr model;
    std::vector<StepVector> generators;

    static ParameterSet make(ModelPtr model, std::vector<StepVector> gens) {
        ParameterSet g;
        g.model = std::move(model);
        for (auto& v : gens) {
            if (!same_model(v.model, g.model)) throw ModelMismatch("generator from a different model");
            if (!v.is_zero()) g.generators.push_back(std::move(v));  // zero generators span nothing
        }
        return g;
    }

    static ParameterSet empty(ModelPtr model) { return make(std::move(model), {}); }

    ParameterSet with(const std::vector<StepVector>& extra) const {
        auto gens = generators;
        gens.insert(gens.end(), extra.begin(), extra.end());
        return make(model, std::move(gens));
    }

    // data-level equality, tolerant of fresh-summand model extensions
    bool same_generators(const ParameterSet& other) const {
        if (generators.size() != other.generators.size()) return false;
        for (size_t i = 0; i < generators.size(); ++i)
            if (!generators[i].data_equals(other.generators[i])) return false;
        return true;
    }

    // true when each of our generators appears (as data) in other
    bool subset_of(const ParameterSet& other) const {
        for (const auto& g : generators) {
            bool found = false;
            for (const auto& h : other.generators)
                if (g.data_equals(h)) { found = true; break; }
            if (!found) return false;
        }
        return true;
    }
};

namespace detail {

inline Complex wdot(const std::vector<Complex>& a, const std::vector<Complex>& b,
                    const std::vector<Rational>& w) {
    Complex acc;
    for (size_t i = 0; i < a.size(); ++i) acc = acc + w[i] * dot_term(a[i], b[i]);
    return acc;
}

struct WeightedFamily {
    std::vector<std::vector<Complex>> vectors;  // orthogonal, deliberately unnormalized
    std::vector<Rational> norm_sq;              // positive

    // weighted orthogonal projection coefficients applied to a tuple
    std::vector<Complex> project(const std::vector<Complex>& v, const std::vector<Rational>& w) const {
        std::vector<Complex> out(v.size());
        for (size_t i = 0; i < vectors.size(); ++i) {
            Complex c = wdot(v, vectors[i], w);
            if (c.is_zero()) continue;
            c = c / Complex(norm_sq[i]);
            for (size_t j = 0; j < out.size(); ++j) out[j] = out[j] + c * vectors[i][j];
        }
        return out;
    }
};

// Gram–Schmidt without normalization: square roots never appear, all
// Gram data stays rational.
inline WeightedFamily gram_schmidt(std::vector<std::vector<Complex>> gens,
                                   const std::vector<Rational>& weights) {
    WeightedFamily fam;
    for (auto& g : gens) {
        std::vector<Complex> u = std::move(g);
        for (size_t i = 0; i < fam.vectors.size(); ++i) {
            Complex c = wdot(u, fam.vectors[i], weights);
            if (c.is_zero()) continue;
            c = c / Complex(fam.norm_sq[i]);
            for (size_t j = 0; j < u.size(); ++j) u[j] = u[j] - c * fam.vectors[i][j];
        }
        Rational n = wdot(u, u, weights).re;
        if (n != 0) {
            fam.vectors.push_back(std::move(u));
            fam.norm_sq.push_back(std::move(n));
        }
    }
    return fam;
}

}  // namespace detail

// Exact representation of a functional-calculus-invariant closed
// subspace: per refinement cell, an orthogonal family of direction
// tuples over the cell's channels. dcl(G) = H_G stores the generator
// directions; acl(G) additionally acts as the identity on every
// finite-multiplicity eigen-slot (the discrete part).
class SubspaceHandle {
  public:
    enum class Kind { Dcl, Acl };

    struct Channel {
        enum class Type { SlotCopy, Atom } type;
        int slot = -1;   // SlotCopy
        int copy = -1;   // SlotCopy
        int summand = -1;  // Atom
    };

    struct PointCell {
        Rational location;
        std::vector<Channel> channels;
        std::vector<Rational> weights;  // 1 per slot copy, atom mass per atom channel
        detail::WeightedFamily family;
    };

    struct IntervalCell {
        Interval cell;
        std::vector<int> summands;       // channels: summands with positive density
        std::vector<Rational> heights;   // densities; lengths cancel in the coefficients
        detail::WeightedFamily family;
    };

    static SubspaceHandle build(const ParameterSet& g, Kind kind) {
        SubspaceHandle h;
        h.model_ = g.model;
        h.kind_ = kind;
        const auto& model = *g.model;

        // spectral point locations: slot eigenvalues and summand atoms
        std::vector<Rational> locations;
        for (const auto& slot : model.slots()) locations.push_back(slot.eigenvalue);
        for (const auto& mu : model.summands())
            for (const auto& [loc, mass] : mu.atoms()) locations.push_back(loc);
        std::sort(locations.begin(), locations.end());
        locations.erase(std::unique(locations.begin(), locations.end()), locations.end());

        for (const auto& x : locations) {
            PointCell cell;
            cell.location = x;
            int slot_idx = model.slot_index(x);
            bool slot_is_finite = slot_idx >= 0 && !model.slots()[slot_idx].mult.omega;
            // slot-copy channels: copies touched by some generator; for acl
            // the finite-slot copies are identity-projected instead, so the
            // family must not see them
            if (slot_idx >= 0 && !(kind == Kind::Acl && slot_is_finite)) {
                std::vector<int> copies;
                for (const auto& gen : g.generators)
                    for (const auto& [key, c] : gen.slot_coords)
                        if (key.first == slot_idx) copies.push_back(key.second);
                std::sort(copies.begin(), copies.end());
                copies.erase(std::unique(copies.begin(), copies.end()), copies.end());
                for (int c : copies) {
                    cell.channels.push_back({Channel::Type::SlotCopy, slot_idx, c, -1});
                    cell.weights.push_back(Rational(1));
                }
            }
            for (size_t s = 0; s < model.summands().size(); ++s) {
                Rational mass = model.summands()[s].atom_mass_at(x);
                if (mass != 0) {
                    cell.channels.push_back({Channel::Type::Atom, -1, -1, static_cast<int>(s)});
                    cell.weights.push_back(mass);
                }
            }
            if (cell.channels.empty()) continue;
            std::vector<std::vector<Complex>> tuples;
            for (const auto& gen : g.generators) {
                std::vector<Complex> t;
                bool nonzero = false;
                for (const auto& ch : cell.channels) {
                    Complex c = ch.type == Channel::Type::SlotCopy
                                    ? gen.slot_coord(ch.slot, ch.copy)
                                    : gen.parts[ch.summand].atom_value_at(x);
                    nonzero = nonzero || !c.is_zero();
                    t.push_back(std::move(c));
                }
                if (nonzero) tuples.push_back(std::move(t));
            }
            cell.family = detail::gram_schmidt(std::move(tuples), cell.weights);
            if (!cell.family.vectors.empty()) h.point_cells_.push_back(std::move(cell));
        }

        // interval cells: common refinement of summand supports and
        // generator breakpoints
        Partition grid;
        for (const auto& mu : model.summands()) grid = grid.merged_with(mu.partition());
        for (const auto& gen : g.generators)
            for (const auto& part : gen.parts)
                for (const auto& [iv, val] : part.pieces) grid.add_interval(iv);
        grid.finish();
        for (const auto& cell : grid.cells()) {
            IntervalCell ic;
            ic.cell = cell;
            for (size_t s = 0; s < model.summands().size(); ++s) {
                Rational hgt = model.summands()[s].density_at(cell.lo);
                if (hgt != 0) {
                    ic.summands.push_back(static_cast<int>(s));
                    ic.heights.push_back(hgt);
                }
            }
            if (ic.summands.empty()) continue;
            std::vector<std::vector<Complex>> tuples;
            for (const auto& gen : g.generators) {
                std::vector<Complex> t;
                bool nonzero = false;
                for (int s : ic.summands) {
                    Complex c = gen.parts[s].piece_value_at(cell.lo);
                    nonzero = nonzero || !c.is_zero();
                    t.push_back(std::move(c));
                }
                if (nonzero) tuples.push_back(std::move(t));
            }
            ic.family = detail::gram_schmidt(std::move(tuples), ic.heights);
            if (!ic.family.vectors.empty()) h.interval_cells_.push_back(std::move(ic));
        }
        return h;
    }

    const ModelPtr& model() const { return model_; }
    Kind kind() const { return kind_; }
    bool includes_discrete_part() const { return kind_ == Kind::Acl; }
    const std::vector<PointCell>& point_cells() const { return point_cells_; }
    const std::vector<IntervalCell>& interval_cells() const { return interval_cells_; }

    // Cell-wise weighted orthogonal projection. Exact; idempotent and
    // self-adjoint by construction of the orthogonal families.
    StepVector project(const StepVector& v) const {
        if (!same_model(v.model, model_)) throw ModelMismatch();
        const auto& model = *model_;
        std::map<std::pair<int, int>, Complex> coords;
        std::vector<SummandPart> parts(model.summands().size());

        if (kind_ == Kind::Acl) {
            // identity on the discrete part
            for (const auto& [key, c] : v.slot_coords)
                if (!model.slots()[key.first].mult.omega) coords[key] = c;
        }

        for (const auto& cell : point_cells_) {
            std::vector<Complex> tuple;
            tuple.reserve(cell.channels.size());
            for (const auto& ch : cell.channels)
                tuple.push_back(ch.type == Channel::Type::SlotCopy
                                    ? v.slot_coord(ch.slot, ch.copy)
                                    : v.parts[ch.summand].atom_value_at(cell.location));
            std::vector<Complex> p = cell.family.project(tuple, cell.weights);
            for (size_t i = 0; i < cell.channels.size(); ++i) {
                if (p[i].is_zero()) continue;
                const auto& ch = cell.channels[i];
                if (ch.type == Channel::Type::SlotCopy)
                    coords[{ch.slot, ch.copy}] = coords[{ch.slot, ch.copy}] + p[i];
                else
                    parts[ch.summand].atom_values.push_back({cell.location, p[i]});
            }
        }

        for (const auto& cell : interval_cells_) {
            // refine against v's breakpoints inside this cell; the family is
            // constant on the cell, so coefficients are exact per subcell
            Partition sub;
            sub.add_interval(cell.cell);
            for (int s : cell.summands)
                for (const auto& [iv, val] : v.parts[s].pieces)
                    if (auto clipped = intersect(iv, cell.cell)) sub.add_interval(*clipped);
            sub.finish();
            for (const auto& subcell : sub.cells()) {
                std::vector<Complex> tuple;
                tuple.reserve(cell.summands.size());
                bool any = false;
                for (int s : cell.summands) {
                    Complex c = v.parts[s].piece_value_at(subcell.lo);
                    any = any || !c.is_zero();
                    tuple.push_back(std::move(c));
                }
                if (!any) continue;
                std::vector<Complex> p = cell.family.project(tuple, cell.heights);
                for (size_t i = 0; i < cell.summands.size(); ++i)
                    if (!p[i].is_zero()) parts[cell.summands[i]].pieces.push_back({subcell, p[i]});
            }
        }

        std::map<std::pair<int, int>, Complex> nonzero;
        for (auto& [k, c] : coords)
            if (!c.is_zero()) nonzero.emplace(k, std::move(c));
        return make_vector(model_, std::move(nonzero), std::move(parts), true);
    }

  private:
    ModelPtr model_;
    Kind kind_ = Kind::Dcl;
    std::vector<PointCell> point_cells_;
    std::vector<IntervalCell> interval_cells_;
};

// dcl(G) = H_G, the closure of { f(Q) g : g in G, f bounded Borel }.
// On the common refinement a Borel f is an arbitrary constant per cell,
// so the orbit closure is, cell by cell, the span of the generator
// tuples; that finite-dimensional span is what the handle stores.
inline SubspaceHandle cyclic_subspace(const ParameterSet& g) {
    return SubspaceHandle::build(g, SubspaceHandle::Kind::Dcl);
}

// acl(G) = closed span of H_G and the discrete part H_d.
inline SubspaceHandle acl(const ParameterSet& g) {
    return SubspaceHandle::build(g, SubspaceHandle::Kind::Acl);
}

inline StepVector project(const SubspaceHandle& h, const StepVector& v) { return h.project(v); }

inline bool in_subspace(const SubspaceHandle& h, const StepVector& v) {
    return norm_sq(v - h.project(v)) == 0;
}

// v = v_d + v_e: finite-multiplicity slot coordinates versus everything
// else. Omega-slot coordinates count as essential (their eigenvalues lie
// in sigma_e), as do all summand parts.
inline std::pair<StepVector, StepVector> split_discrete_essential(const StepVector& v) {
    std::map<std::pair<int, int>, Complex> d_coords, e_coords;
    for (const auto& [key, c] : v.slot_coords) {
        if (v.model->slots()[key.first].mult.omega)
            e_coords[key] = c;
        else
            d_coords[key] = c;
    }
    StepVector vd = make_vector(v.model, std::move(d_coords), {}, true);
    StepVector ve = make_vector(v.model, std::move(e_coords), v.parts, true);
    return {std::move(vd), std::move(ve)};
}

}  // namespace specmt
