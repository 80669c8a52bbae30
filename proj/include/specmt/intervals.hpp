#pragma once

#include <algorithm>
#include <compare>
#include <optional>
#include <string>
#include <vector>

#include "specmt/errors.hpp"
#include "specmt/rational.hpp"

namespace specmt {

// Bounded half-open interval [lo, hi), lo < hi. The single interval
// convention of the whole library: partitions are unambiguous and
// refinements stay disjoint.
struct Interval {
    Rational lo;
    Rational hi;

    Rational length() const { return hi - lo; }
    bool contains(const Rational& x) const { return lo <= x && x < hi; }
    friend bool operator==(const Interval& a, const Interval& b) = default;
};

inline std::optional<Interval> intersect(const Interval& a, const Interval& b) {
    Rational lo = max_rational(a.lo, b.lo);
    Rational hi = min_rational(a.hi, b.hi);
    if (lo < hi) return Interval{lo, hi};
    return std::nullopt;
}

inline std::string format_interval(const Interval& iv) {
    return "[" + format_rational(iv.lo) + ", " + format_rational(iv.hi) + ")";
}

// Extended endpoint: -inf, a rational, or +inf. Only IntervalSet uses
// the unbounded classes (so that the full line and complements exist);
// measure and function pieces stay bounded.
struct Bound {
    int cls = 0;  // -1: -inf, 0: finite, +1: +inf
    Rational value{0};

    static Bound neg_inf() { return {-1, Rational(0)}; }
    static Bound pos_inf() { return {+1, Rational(0)}; }
    static Bound at(Rational x) { return {0, std::move(x)}; }

    friend bool operator==(const Bound& a, const Bound& b) {
        return a.cls == b.cls && (a.cls != 0 || a.value == b.value);
    }
    friend bool operator<(const Bound& a, const Bound& b) {
        if (a.cls != b.cls) return a.cls < b.cls;
        return a.cls == 0 && a.value < b.value;
    }
    friend bool operator<=(const Bound& a, const Bound& b) { return a == b || a < b; }
};

inline bool bound_le_x(const Bound& b, const Rational& x) {  // b <= x
    return b.cls == -1 || (b.cls == 0 && b.value <= x);
}
inline bool x_lt_bound(const Rational& x, const Bound& b) {  // x < b
    return b.cls == +1 || (b.cls == 0 && x < b.value);
}

struct XInterval {
    Bound lo;
    Bound hi;  // [lo, hi), lo < hi
    bool contains(const Rational& x) const { return bound_le_x(lo, x) && x_lt_bound(x, hi); }
};

// A finite union of half-open intervals plus finitely many singletons,
// kept canonical: intervals sorted, pairwise disjoint, maximally merged;
// points sorted and not inside any interval. Canonical forms of equal
// point sets are structurally equal.
class IntervalSet {
  public:
    IntervalSet() = default;

    static IntervalSet empty_set() { return IntervalSet(); }
    static IntervalSet full_line() {
        IntervalSet s;
        s.intervals_.push_back({Bound::neg_inf(), Bound::pos_inf()});
        return s;
    }
    static IntervalSet of(const Interval& iv) {
        IntervalSet s;
        s.add_interval(Bound::at(iv.lo), Bound::at(iv.hi));
        return s;
    }
    static IntervalSet point(Rational x) {
        IntervalSet s;
        s.add_point(std::move(x));
        return s;
    }

    void add_interval(Bound lo, Bound hi) {
        if (!(lo < hi)) return;
        intervals_.push_back({std::move(lo), std::move(hi)});
        dirty_ = true;
    }
    void add_interval(const Interval& iv) { add_interval(Bound::at(iv.lo), Bound::at(iv.hi)); }
    void add_point(Rational x) {
        points_.push_back(std::move(x));
        dirty_ = true;
    }

    const std::vector<XInterval>& intervals() const { canonicalize(); return intervals_; }
    const std::vector<Rational>& points() const { canonicalize(); return points_; }

    bool is_empty() const { canonicalize(); return intervals_.empty() && points_.empty(); }

    bool contains(const Rational& x) const {
        canonicalize();
        for (const auto& iv : intervals_)
            if (iv.contains(x)) return true;
        return std::binary_search(points_.begin(), points_.end(), x);
    }

    friend bool operator==(const IntervalSet& a, const IntervalSet& b) {
        a.canonicalize();
        b.canonicalize();
        if (a.points_ != b.points_) return false;
        if (a.intervals_.size() != b.intervals_.size()) return false;
        for (size_t i = 0; i < a.intervals_.size(); ++i)
            if (!(a.intervals_[i].lo == b.intervals_[i].lo && a.intervals_[i].hi == b.intervals_[i].hi))
                return false;
        return true;
    }

    IntervalSet unite(const IntervalSet& other) const {
        canonicalize();
        other.canonicalize();
        IntervalSet out;
        out.intervals_ = intervals_;
        out.intervals_.insert(out.intervals_.end(), other.intervals_.begin(), other.intervals_.end());
        out.points_ = points_;
        out.points_.insert(out.points_.end(), other.points_.begin(), other.points_.end());
        out.dirty_ = true;
        return out;
    }

    IntervalSet intersect_with(const IntervalSet& other) const {
        canonicalize();
        other.canonicalize();
        IntervalSet out;
        for (const auto& a : intervals_)
            for (const auto& b : other.intervals_) {
                Bound lo = a.lo < b.lo ? b.lo : a.lo;
                Bound hi = a.hi < b.hi ? a.hi : b.hi;
                if (lo < hi) out.add_interval(lo, hi);
            }
        for (const auto& p : points_)
            if (other.contains(p)) out.add_point(p);
        for (const auto& p : other.points_)
            if (contains(p)) out.add_point(p);
        return out;
    }

    // Complement within the line. A punctured interval is not a half-open
    // union, so sets with isolated points cannot be complemented exactly.
    IntervalSet complement() const {
        canonicalize();
        if (!points_.empty())
            throw Error("complement of a set with isolated points is not representable by half-open intervals");
        IntervalSet out;
        Bound cursor = Bound::neg_inf();
        for (const auto& iv : intervals_) {
            if (cursor < iv.lo) out.add_interval(cursor, iv.lo);
            cursor = iv.hi;
        }
        if (cursor < Bound::pos_inf()) out.add_interval(cursor, Bound::pos_inf());
        return out;
    }

    std::string str() const {
        canonicalize();
        if (intervals_.empty() && points_.empty()) return "{}";
        std::string s = "{";
        bool first = true;
        for (const auto& iv : intervals_) {
            if (!first) s += " u ";
            first = false;
            s += iv.lo.cls == -1 ? std::string("(-inf") : "[" + format_rational(iv.lo.value);
            s += ", ";
            s += iv.hi.cls == +1 ? std::string("inf)") : format_rational(iv.hi.value) + ")";
        }
        for (const auto& p : points_) {
            if (!first) s += " u ";
            first = false;
            s += "{" + format_rational(p) + "}";
        }
        s += "}";
        return s;
    }

  private:
    void canonicalize() const {
        if (!dirty_) return;
        dirty_ = false;
        auto& ivs = intervals_;
        std::sort(ivs.begin(), ivs.end(), [](const XInterval& a, const XInterval& b) {
            if (a.lo < b.lo) return true;
            if (b.lo < a.lo) return false;
            return a.hi < b.hi;
        });
        std::vector<XInterval> merged;
        for (const auto& iv : ivs) {
            if (!merged.empty() && (iv.lo < merged.back().hi || iv.lo == merged.back().hi)) {
                if (merged.back().hi < iv.hi) merged.back().hi = iv.hi;
            } else {
                merged.push_back(iv);
            }
        }
        ivs = std::move(merged);
        std::sort(points_.begin(), points_.end());
        points_.erase(std::unique(points_.begin(), points_.end()), points_.end());
        std::vector<Rational> keep;
        for (const auto& p : points_) {
            bool inside = false;
            for (const auto& iv : ivs)
                if (iv.contains(p)) { inside = true; break; }
            if (!inside) keep.push_back(p);
        }
        points_ = std::move(keep);
    }

    mutable std::vector<XInterval> intervals_;
    mutable std::vector<Rational> points_;
    mutable bool dirty_ = false;
};

// The coarsest grid on which a family of piecewise-constant objects is
// cellwise constant: sorted cut points delimiting half-open cells, plus
// the isolated points (atoms, point values) that must be distinguishable.
// Every isolated point is also a cut, so cells never straddle one.
struct Partition {
    std::vector<Rational> cuts;    // sorted, distinct
    std::vector<Rational> points;  // sorted, distinct, subset of cuts

    void add_cut(const Rational& x) { cuts.push_back(x); }
    void add_point(const Rational& x) {
        points.push_back(x);
        cuts.push_back(x);
    }
    void add_interval(const Interval& iv) {
        cuts.push_back(iv.lo);
        cuts.push_back(iv.hi);
    }

    void finish() {
        std::sort(cuts.begin(), cuts.end());
        cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());
        std::sort(points.begin(), points.end());
        points.erase(std::unique(points.begin(), points.end()), points.end());
    }

    // Half-open cells between consecutive cuts. Cells outside every
    // input's support are harmless: all inputs are zero there.
    std::vector<Interval> cells() const {
        std::vector<Interval> out;
        for (size_t i = 0; i + 1 < cuts.size(); ++i)
            out.push_back({cuts[i], cuts[i + 1]});
        return out;
    }

    Partition merged_with(const Partition& other) const {
        Partition p = *this;
        p.cuts.insert(p.cuts.end(), other.cuts.begin(), other.cuts.end());
        p.points.insert(p.points.end(), other.points.begin(), other.points.end());
        p.finish();
        return p;
    }
};

inline void add_interval_set_to(Partition& p, const IntervalSet& s) {
    for (const auto& iv : s.intervals()) {
        if (iv.lo.cls == 0) p.add_cut(iv.lo.value);
        if (iv.hi.cls == 0) p.add_cut(iv.hi.value);
    }
    for (const auto& q : s.points()) p.add_point(q);
}

}  // namespace specmt
