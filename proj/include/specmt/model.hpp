#pragma once

#include <cmath>
#include <cstdint>
#include <map>
#include <memory>
#include <utility>
#include <vector>

#include "specmt/measure.hpp"
#include "specmt/piecewise.hpp"

namespace specmt {

// Eigenspace dimension: a positive integer or omega (countably infinite).
struct Multiplicity {
    bool omega = false;
    std::int64_t count = 1;

    static Multiplicity finite(std::int64_t n) { return {false, n}; }
    static Multiplicity inf() { return {true, 0}; }

    friend bool operator==(const Multiplicity& a, const Multiplicity& b) {
        return a.omega == b.omega && (a.omega || a.count == b.count);
    }
    std::string str() const { return omega ? "omega" : std::to_string(count); }
};

struct EigenSlot {
    Rational eigenvalue;
    Multiplicity mult;
    friend bool operator==(const EigenSlot& a, const EigenSlot& b) = default;
};

// Finitely presented model of (H, Gamma_Q):
//   H = (+)_slots C^(n_lambda)  (+)  (+)_s L^2(R, mu_s)
//   Q = (+) lambda.I            (+)  (+) multiplication by x.
// Immutable after construction; vectors hold it by shared_ptr.
class OperatorModel {
  public:
    static std::shared_ptr<const OperatorModel> make(std::vector<EigenSlot> slots,
                                                     std::vector<BorelMeasure> summands) {
        auto m = std::make_shared<OperatorModel>();
        std::sort(slots.begin(), slots.end(),
                  [](const EigenSlot& a, const EigenSlot& b) { return a.eigenvalue < b.eigenvalue; });
        for (size_t i = 0; i + 1 < slots.size(); ++i)
            if (slots[i].eigenvalue == slots[i + 1].eigenvalue)
                throw ValidationError("model", "duplicate eigen-slot at " + format_rational(slots[i].eigenvalue));
        for (const auto& s : slots)
            if (!s.mult.omega && s.mult.count < 1)
                throw ValidationError("model", "non-positive slot multiplicity");
        for (const auto& mu : summands)
            if (mu.is_zero()) throw ValidationError("model", "zero measure summand");
        m->slots_ = std::move(slots);
        m->summands_ = std::move(summands);
        return m;
    }

    const std::vector<EigenSlot>& slots() const { return slots_; }
    const std::vector<BorelMeasure>& summands() const { return summands_; }

    int slot_index(const Rational& eigenvalue) const {
        for (size_t i = 0; i < slots_.size(); ++i)
            if (slots_[i].eigenvalue == eigenvalue) return static_cast<int>(i);
        return -1;
    }

    friend bool operator==(const OperatorModel& a, const OperatorModel& b) {
        return a.slots_ == b.slots_ && a.summands_ == b.summands_;
    }

    std::vector<EigenSlot> slots_;
    std::vector<BorelMeasure> summands_;
};

using ModelPtr = std::shared_ptr<const OperatorModel>;

inline bool same_model(const ModelPtr& a, const ModelPtr& b) {
    return a == b || (a && b && *a == *b);
}

// Values of a vector on one L^2(mu_s) summand. Pieces live inside the
// density support of mu_s; atom values are stored for every atom of mu_s
// where the vector is nonzero. Values elsewhere are measure-zero noise
// and are never stored.
struct SummandPart {
    std::vector<std::pair<Interval, Complex>> pieces;
    std::vector<std::pair<Rational, Complex>> atom_values;

    bool empty() const { return pieces.empty() && atom_values.empty(); }

    Complex piece_value_at(const Rational& x) const {
        for (const auto& [iv, v] : pieces)
            if (iv.contains(x)) return v;
        return Complex();
    }
    Complex atom_value_at(const Rational& x) const {
        for (const auto& [loc, v] : atom_values)
            if (loc == x) return v;
        return Complex();
    }

    friend bool operator==(const SummandPart& a, const SummandPart& b) = default;
};

// An element of an OperatorModel: finitely supported complex-rational
// slot coordinates plus a step function on each summand. Always kept in
// canonical form, so equality of elements is structural equality.
struct StepVector {
    ModelPtr model;
    std::map<std::pair<int, int>, Complex> slot_coords;  // (slot, copy) -> nonzero coordinate
    std::vector<SummandPart> parts;                      // one per summand

    bool is_zero() const {
        if (!slot_coords.empty()) return false;
        for (const auto& p : parts)
            if (!p.empty()) return false;
        return true;
    }

    Complex slot_coord(int slot, int copy) const {
        auto it = slot_coords.find({slot, copy});
        return it == slot_coords.end() ? Complex() : it->second;
    }

    // Ignores the model pointer and trailing empty summand parts, so a
    // vector and its image under a fresh-summand extension compare equal.
    bool data_equals(const StepVector& other) const {
        if (slot_coords != other.slot_coords) return false;
        size_t n = std::max(parts.size(), other.parts.size());
        static const SummandPart kEmpty{};
        for (size_t s = 0; s < n; ++s) {
            const SummandPart& a = s < parts.size() ? parts[s] : kEmpty;
            const SummandPart& b = s < other.parts.size() ? other.parts[s] : kEmpty;
            if (!(a == b)) return false;
        }
        return true;
    }

    friend bool operator==(const StepVector& a, const StepVector& b) {
        return same_model(a.model, b.model) && a.data_equals(b);
    }
};

namespace detail {

inline SummandPart canonical_part(const BorelMeasure& mu,
                                  std::vector<std::pair<Interval, Complex>> raw_pieces,
                                  std::vector<std::pair<Rational, Complex>> raw_atoms,
                                  bool atoms_are_explicit) {
    SummandPart out;
    // clip pieces to the density support grid
    Partition grid = mu.partition();
    for (const auto& [iv, v] : raw_pieces) grid.add_interval(iv);
    grid.finish();
    auto piece_eval = [&raw_pieces](const Rational& x) {
        for (const auto& [iv, v] : raw_pieces)
            if (iv.contains(x)) return v;
        return Complex();
    };
    for (const auto& cell : grid.cells()) {
        if (mu.density_at(cell.lo) == 0) continue;
        Complex v = piece_eval(cell.lo);
        if (v.is_zero()) continue;
        if (!out.pieces.empty() && out.pieces.back().first.hi == cell.lo && out.pieces.back().second == v)
            out.pieces.back().first.hi = cell.hi;
        else
            out.pieces.push_back({cell, v});
    }
    auto explicit_atom = [&raw_atoms](const Rational& x) -> const Complex* {
        for (const auto& [loc, v] : raw_atoms)
            if (loc == x) return &v;
        return nullptr;
    };
    for (const auto& [loc, mass] : mu.atoms()) {
        const Complex* exp_v = explicit_atom(loc);
        Complex v = exp_v ? *exp_v : (atoms_are_explicit ? Complex() : piece_eval(loc));
        if (!v.is_zero()) out.atom_values.push_back({loc, v});
    }
    return out;
}

}  // namespace detail

// Builds a canonical vector. Piece data outside the summand's density
// support is dropped (it is measure-zero). If atoms_are_explicit is
// false, atoms of mu_s inherit the surrounding piece value unless an
// explicit value is supplied — the step-function reading of the input.
inline StepVector make_vector(ModelPtr model,
                              std::map<std::pair<int, int>, Complex> slot_coords,
                              std::vector<SummandPart> raw_parts,
                              bool atoms_are_explicit = false) {
    StepVector v;
    v.model = std::move(model);
    for (auto& [key, c] : slot_coords) {
        auto [slot, copy] = key;
        if (slot < 0 || slot >= static_cast<int>(v.model->slots().size()))
            throw ValidationError("vector", "slot index out of range");
        const auto& sl = v.model->slots()[slot];
        if (copy < 0 || (!sl.mult.omega && copy >= sl.mult.count))
            throw ValidationError("vector", "copy index exceeds slot multiplicity");
        if (!c.is_zero()) v.slot_coords.emplace(key, std::move(c));
    }
    if (raw_parts.size() > v.model->summands().size())
        throw ValidationError("vector", "more summand parts than model summands");
    raw_parts.resize(v.model->summands().size());
    v.parts.reserve(raw_parts.size());
    for (size_t s = 0; s < raw_parts.size(); ++s)
        v.parts.push_back(detail::canonical_part(v.model->summands()[s], std::move(raw_parts[s].pieces),
                                                 std::move(raw_parts[s].atom_values), atoms_are_explicit));
    return v;
}

inline StepVector zero_vector(ModelPtr model) { return make_vector(std::move(model), {}, {}); }

namespace detail {

template <typename Op>
StepVector combine_vectors(const StepVector& a, const StepVector& b, Op op) {
    if (!same_model(a.model, b.model)) throw ModelMismatch();
    StepVector out;
    out.model = a.model;
    std::map<std::pair<int, int>, Complex> coords;
    for (const auto& [k, c] : a.slot_coords) coords[k] = coords[k] + op(c, true);
    for (const auto& [k, c] : b.slot_coords) coords[k] = coords[k] + op(c, false);
    for (auto& [k, c] : coords)
        if (!c.is_zero()) out.slot_coords.emplace(k, c);
    const auto& summands = a.model->summands();
    out.parts.resize(summands.size());
    for (size_t s = 0; s < summands.size(); ++s) {
        const SummandPart& pa = a.parts[s];
        const SummandPart& pb = b.parts[s];
        Partition grid = summands[s].partition();
        for (const auto& [iv, v] : pa.pieces) grid.add_interval(iv);
        for (const auto& [iv, v] : pb.pieces) grid.add_interval(iv);
        grid.finish();
        SummandPart& po = out.parts[s];
        for (const auto& cell : grid.cells()) {
            if (summands[s].density_at(cell.lo) == 0) continue;
            Complex v = op(pa.piece_value_at(cell.lo), true) + op(pb.piece_value_at(cell.lo), false);
            if (v.is_zero()) continue;
            if (!po.pieces.empty() && po.pieces.back().first.hi == cell.lo && po.pieces.back().second == v)
                po.pieces.back().first.hi = cell.hi;
            else
                po.pieces.push_back({cell, v});
        }
        for (const auto& [loc, mass] : summands[s].atoms()) {
            Complex v = op(pa.atom_value_at(loc), true) + op(pb.atom_value_at(loc), false);
            if (!v.is_zero()) po.atom_values.push_back({loc, v});
        }
    }
    return out;
}

}  // namespace detail

inline StepVector operator+(const StepVector& a, const StepVector& b) {
    return detail::combine_vectors(a, b, [](const Complex& c, bool) { return c; });
}

inline StepVector operator-(const StepVector& a, const StepVector& b) {
    return detail::combine_vectors(a, b, [](const Complex& c, bool first) { return first ? c : -c; });
}

inline StepVector operator*(const Complex& scale, const StepVector& v) {
    StepVector zero = zero_vector(v.model);
    return detail::combine_vectors(v, zero, [&scale](const Complex& c, bool) { return scale * c; });
}

// Sesquilinear form <v, w>, linear in the first argument. Exact.
inline Complex inner_product(const StepVector& v, const StepVector& w) {
    if (!same_model(v.model, w.model)) throw ModelMismatch();
    Complex acc;
    for (const auto& [k, c] : v.slot_coords) {
        auto it = w.slot_coords.find(k);
        if (it != w.slot_coords.end()) acc = acc + dot_term(c, it->second);
    }
    const auto& summands = v.model->summands();
    for (size_t s = 0; s < summands.size(); ++s) {
        const auto& mu = summands[s];
        for (const auto& [loc, mass] : mu.atoms()) {
            Complex t = dot_term(v.parts[s].atom_value_at(loc), w.parts[s].atom_value_at(loc));
            acc = acc + mass * t;
        }
        Partition grid = mu.partition();
        for (const auto& [iv, val] : v.parts[s].pieces) grid.add_interval(iv);
        for (const auto& [iv, val] : w.parts[s].pieces) grid.add_interval(iv);
        grid.finish();
        for (const auto& cell : grid.cells()) {
            Rational h = mu.density_at(cell.lo);
            if (h == 0) continue;
            Complex t = dot_term(v.parts[s].piece_value_at(cell.lo), w.parts[s].piece_value_at(cell.lo));
            acc = acc + (h * cell.length()) * t;
        }
    }
    return acc;
}

inline Rational norm_sq(const StepVector& v) { return inner_product(v, v).re; }

// pi(f) v for a bounded Borel step function f: pointwise multiplication
// on summands, scaling by f(lambda) on eigen-slots. Exact.
inline StepVector apply_borel(const PiecewiseFunction& f, const StepVector& v) {
    StepVector out;
    out.model = v.model;
    for (const auto& [k, c] : v.slot_coords) {
        Complex fc = f.eval(v.model->slots()[k.first].eigenvalue) * c;
        if (!fc.is_zero()) out.slot_coords.emplace(k, fc);
    }
    const auto& summands = v.model->summands();
    out.parts.resize(summands.size());
    for (size_t s = 0; s < summands.size(); ++s) {
        Partition grid = f.partition().merged_with(summands[s].partition());
        for (const auto& [iv, val] : v.parts[s].pieces) grid.add_interval(iv);
        grid.finish();
        SummandPart& po = out.parts[s];
        for (const auto& cell : grid.cells()) {
            if (summands[s].density_at(cell.lo) == 0) continue;
            Complex val = f.eval_interval(cell.lo) * v.parts[s].piece_value_at(cell.lo);
            if (val.is_zero()) continue;
            if (!po.pieces.empty() && po.pieces.back().first.hi == cell.lo && po.pieces.back().second == val)
                po.pieces.back().first.hi = cell.hi;
            else
                po.pieces.push_back({cell, val});
        }
        for (const auto& [loc, mass] : summands[s].atoms()) {
            Complex val = f.eval(loc) * v.parts[s].atom_value_at(loc);
            if (!val.is_zero()) po.atom_values.push_back({loc, val});
        }
    }
    return out;
}

// E_Omega v = pi(chi_Omega) v, computed directly from set membership so
// unbounded Omega (the full line, complements) works as well.
inline StepVector spectral_projection(const IntervalSet& omega, const StepVector& v) {
    auto interval_covers = [&omega](const Rational& x) {
        for (const auto& iv : omega.intervals())
            if (iv.contains(x)) return true;
        return false;
    };
    StepVector out;
    out.model = v.model;
    for (const auto& [k, c] : v.slot_coords)
        if (omega.contains(v.model->slots()[k.first].eigenvalue)) out.slot_coords.emplace(k, c);
    const auto& summands = v.model->summands();
    out.parts.resize(summands.size());
    for (size_t s = 0; s < summands.size(); ++s) {
        Partition grid = summands[s].partition();
        for (const auto& [iv, val] : v.parts[s].pieces) grid.add_interval(iv);
        add_interval_set_to(grid, omega);
        grid.finish();
        SummandPart& po = out.parts[s];
        for (const auto& cell : grid.cells()) {
            if (summands[s].density_at(cell.lo) == 0) continue;
            if (!interval_covers(cell.lo)) continue;
            Complex val = v.parts[s].piece_value_at(cell.lo);
            if (val.is_zero()) continue;
            if (!po.pieces.empty() && po.pieces.back().first.hi == cell.lo && po.pieces.back().second == val)
                po.pieces.back().first.hi = cell.hi;
            else
                po.pieces.push_back({cell, val});
        }
        for (const auto& [loc, mass] : summands[s].atoms()) {
            if (!omega.contains(loc)) continue;
            Complex val = v.parts[s].atom_value_at(loc);
            if (!val.is_zero()) po.atom_values.push_back({loc, val});
        }
    }
    return out;
}

// mu_v(Omega) = <chi_Omega(Q) v | v>: atoms at slot eigenvalues with the
// squared coordinate mass, |v|^2-weighted atoms and densities on summands.
inline BorelMeasure spectral_measure(const StepVector& v) {
    std::vector<std::pair<Rational, Rational>> atoms;
    for (const auto& [k, c] : v.slot_coords)
        atoms.push_back({v.model->slots()[k.first].eigenvalue, c.norm_sq()});
    const auto& summands = v.model->summands();
    Partition grid;
    for (size_t s = 0; s < summands.size(); ++s) {
        for (const auto& [loc, mass] : summands[s].atoms()) {
            Complex val = v.parts[s].atom_value_at(loc);
            if (!val.is_zero()) atoms.push_back({loc, val.norm_sq() * mass});
        }
        grid = grid.merged_with(summands[s].partition());
        for (const auto& [iv, val] : v.parts[s].pieces) grid.add_interval(iv);
    }
    grid.finish();
    std::vector<std::pair<Interval, Rational>> pieces;
    for (const auto& cell : grid.cells()) {
        Rational h(0);
        for (size_t s = 0; s < summands.size(); ++s) {
            Rational hs = summands[s].density_at(cell.lo);
            if (hs == 0) continue;
            Complex val = v.parts[s].piece_value_at(cell.lo);
            if (!val.is_zero()) h += val.norm_sq() * hs;
        }
        if (h != 0) pieces.push_back({cell, h});
    }
    return BorelMeasure::from(std::move(atoms), std::move(pieces));
}

struct GraphDistance {
    double value = 0.0;
    double error_bound = 0.0;
    bool exact_zero = false;
};

// Distance of the pair (v, w) to the graph of Q, from pointwise
// minimisation: per spectral point x the squared gap is
// |x v(x) - w(x)|^2 / (1 + x^2). Slot and atom terms are exact rationals;
// density terms need antiderivatives of x^k/(1+x^2) (atan, log), so the
// total is floating point with an accumulated error bound. When (v, w)
// lies in the graph the result is exactly zero.
inline GraphDistance graph_distance(const StepVector& v, const StepVector& w) {
    if (!same_model(v.model, w.model)) throw ModelMismatch();
    // exact graph-membership test: w = x.v per slot and atom, both zero on densities
    bool in_graph = true;
    for (size_t s = 0; s < v.parts.size() && in_graph; ++s)
        if (!v.parts[s].pieces.empty() || !w.parts[s].pieces.empty()) in_graph = false;
    if (in_graph) {
        std::map<std::pair<int, int>, bool> keys;
        for (const auto& [k, c] : v.slot_coords) keys[k] = true;
        for (const auto& [k, c] : w.slot_coords) keys[k] = true;
        for (const auto& [k, _] : keys) {
            const Rational& lam = v.model->slots()[k.first].eigenvalue;
            if (!(w.slot_coord(k.first, k.second) == Complex(lam) * v.slot_coord(k.first, k.second))) {
                in_graph = false;
                break;
            }
        }
    }
    if (in_graph) {
        const auto& summands = v.model->summands();
        for (size_t s = 0; s < summands.size() && in_graph; ++s)
            for (const auto& [loc, mass] : summands[s].atoms())
                if (!(w.parts[s].atom_value_at(loc) == Complex(loc) * v.parts[s].atom_value_at(loc))) {
                    in_graph = false;
                    break;
                }
    }
    if (in_graph) return {0.0, 0.0, true};

    Rational exact_sq(0);
    double float_sq = 0.0;
    double abs_terms = 0.0;
    std::map<std::pair<int, int>, bool> keys;
    for (const auto& [k, c] : v.slot_coords) keys[k] = true;
    for (const auto& [k, c] : w.slot_coords) keys[k] = true;
    for (const auto& [k, _] : keys) {
        const Rational& lam = v.model->slots()[k.first].eigenvalue;
        Complex gap = Complex(lam) * v.slot_coord(k.first, k.second) - w.slot_coord(k.first, k.second);
        exact_sq += gap.norm_sq() / (1 + lam * lam);
    }
    const auto& summands = v.model->summands();
    for (size_t s = 0; s < summands.size(); ++s) {
        const auto& mu = summands[s];
        for (const auto& [loc, mass] : mu.atoms()) {
            Complex gap = Complex(loc) * v.parts[s].atom_value_at(loc) - w.parts[s].atom_value_at(loc);
            exact_sq += gap.norm_sq() * mass / (1 + loc * loc);
        }
        Partition grid = mu.partition();
        for (const auto& [iv, val] : v.parts[s].pieces) grid.add_interval(iv);
        for (const auto& [iv, val] : w.parts[s].pieces) grid.add_interval(iv);
        grid.finish();
        for (const auto& cell : grid.cells()) {
            Rational h = mu.density_at(cell.lo);
            if (h == 0) continue;
            Complex a = v.parts[s].piece_value_at(cell.lo);
            Complex b = w.parts[s].piece_value_at(cell.lo);
            if (a.is_zero() && b.is_zero()) continue;
            // int |a x - b|^2/(1+x^2) dx =
            //   |a|^2 (x - atan x) - Re(a conj(b)) ln(1+x^2) + |b|^2 atan x
            double lo = to_double(cell.lo), hi = to_double(cell.hi);
            double a2 = to_double(a.norm_sq());
            double b2 = to_double(b.norm_sq());
            double ab = to_double(dot_term(a, b).re);
            auto F = [&](double x) {
                return a2 * (x - std::atan(x)) - ab * std::log1p(x * x) + b2 * std::atan(x);
            };
            double term = to_double(h) * (F(hi) - F(lo));
            float_sq += term;
            abs_terms += to_double(h) * (a2 * (std::abs(hi) + std::abs(lo)) +
                                         std::abs(ab) * (std::log1p(hi * hi) + std::log1p(lo * lo)) +
                                         b2 * 3.2);
        }
    }
    double total_sq = to_double(exact_sq) + float_sq;
    if (total_sq < 0) total_sq = 0;
    double value = std::sqrt(total_sq);
    double err_sq = abs_terms * 1e-14 + (to_double(exact_sq) + std::abs(float_sq)) * 1e-15 + 1e-30;
    double err = value > 0 ? err_sq / (2 * value) + value * 1e-16 : std::sqrt(err_sq);
    return {value, err, false};
}

// Exact k-th operator moment int x^k d mu_v, k <= 4.
inline Rational operator_moment(const StepVector& v, int k) {
    if (k < 0 || k > 4) throw Error("operator_moment requires 0 <= k <= 4");
    auto powk = [&](const Rational& x) {
        Rational p(1);
        for (int i = 0; i < k; ++i) p *= x;
        return p;
    };
    BorelMeasure mu = spectral_measure(v);
    Rational acc(0);
    for (const auto& [loc, mass] : mu.atoms()) acc += powk(loc) * mass;
    for (const auto& [iv, h] : mu.pieces()) {
        Rational hi_pow(1), lo_pow(1);
        for (int i = 0; i < k + 1; ++i) {
            hi_pow *= iv.hi;
            lo_pow *= iv.lo;
        }
        acc += h * (hi_pow - lo_pow) / Rational(k + 1);
    }
    return acc;
}

// Direct sum of models: summands concatenate, slots with equal eigenvalue
// merge by adding multiplicities (omega absorbs). Embeddings return fresh
// vectors and preserve inner products and spectral measures.
class DirectSum {
  public:
    explicit DirectSum(std::vector<ModelPtr> inputs) : inputs_(std::move(inputs)) {
        std::vector<EigenSlot> slots;
        std::vector<BorelMeasure> summands;
        // group eigenvalues across inputs
        std::vector<Rational> eigenvalues;
        for (const auto& m : inputs_)
            for (const auto& s : m->slots()) eigenvalues.push_back(s.eigenvalue);
        std::sort(eigenvalues.begin(), eigenvalues.end());
        eigenvalues.erase(std::unique(eigenvalues.begin(), eigenvalues.end()), eigenvalues.end());
        for (const auto& lam : eigenvalues) {
            bool any_omega = false;
            std::int64_t total = 0;
            std::vector<int> contributors;
            for (size_t i = 0; i < inputs_.size(); ++i) {
                int idx = inputs_[i]->slot_index(lam);
                if (idx < 0) continue;
                contributors.push_back(static_cast<int>(i));
                const auto& mult = inputs_[i]->slots()[idx].mult;
                if (mult.omega)
                    any_omega = true;
                else
                    total += mult.count;
            }
            slots.push_back({lam, any_omega ? Multiplicity::inf() : Multiplicity::finite(total)});
            // copy mapping: finite slots use offset blocks; omega slots interleave
            // contributors so every input keeps infinitely many copies
            CopyMap cm;
            cm.eigenvalue = lam;
            cm.omega = any_omega;
            std::int64_t offset = 0;
            for (size_t pos = 0; pos < contributors.size(); ++pos) {
                int i = contributors[pos];
                int idx = inputs_[i]->slot_index(lam);
                const auto& mult = inputs_[i]->slots()[idx].mult;
                if (any_omega) {
                    cm.entries[i] = {static_cast<std::int64_t>(pos),
                                     static_cast<std::int64_t>(contributors.size())};
                } else {
                    cm.entries[i] = {offset, 1};
                    offset += mult.count;
                }
            }
            copy_maps_.push_back(std::move(cm));
        }
        summand_offset_.resize(inputs_.size());
        for (size_t i = 0; i < inputs_.size(); ++i) {
            summand_offset_[i] = static_cast<int>(summands.size());
            for (const auto& mu : inputs_[i]->summands()) summands.push_back(mu);
        }
        model_ = OperatorModel::make(std::move(slots), std::move(summands));
    }

    const ModelPtr& model() const { return model_; }

    StepVector embed(size_t input_index, const StepVector& v) const {
        if (input_index >= inputs_.size() || !same_model(v.model, inputs_[input_index]))
            throw ModelMismatch("vector does not belong to the direct-sum input");
        std::map<std::pair<int, int>, Complex> coords;
        for (const auto& [k, c] : v.slot_coords) {
            const Rational& lam = v.model->slots()[k.first].eigenvalue;
            int merged_slot = model_->slot_index(lam);
            const CopyMap& cm = copy_maps_[merged_slot];
            auto it = cm.entries.find(static_cast<int>(input_index));
            std::int64_t copy = cm.omega ? k.second * it->second.second + it->second.first
                                         : k.second + it->second.first;
            coords[{merged_slot, static_cast<int>(copy)}] = c;
        }
        std::vector<SummandPart> parts(model_->summands().size());
        for (size_t s = 0; s < v.parts.size(); ++s)
            parts[summand_offset_[input_index] + s] = v.parts[s];
        return make_vector(model_, std::move(coords), std::move(parts), true);
    }

  private:
    struct CopyMap {
        Rational eigenvalue;
        bool omega = false;
        std::map<int, std::pair<std::int64_t, std::int64_t>> entries;  // input -> (offset/phase, stride)
    };
    std::vector<ModelPtr> inputs_;
    ModelPtr model_;
    std::vector<CopyMap> copy_maps_;
    std::vector<int> summand_offset_;
};

inline DirectSum direct_sum(std::vector<ModelPtr> models) { return DirectSum(std::move(models)); }

}  // namespace specmt
