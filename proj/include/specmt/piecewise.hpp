#pragma once

#include <utility>
#include <vector>

#include "specmt/intervals.hpp"
#include "specmt/measure.hpp"

namespace specmt {

// Bounded complex-valued Borel step function: constant on finitely many
// half-open intervals, individual values at finitely many points, and a
// constant default elsewhere. Evaluation precedence: point, piece, default.
class PiecewiseFunction {
  public:
    PiecewiseFunction() = default;

    static PiecewiseFunction constant(Complex c) {
        PiecewiseFunction f;
        f.default_ = std::move(c);
        return f;
    }

    static PiecewiseFunction from(std::vector<std::pair<Interval, Complex>> pieces,
                                  std::vector<std::pair<Rational, Complex>> point_values,
                                  Complex default_value = Complex()) {
        PiecewiseFunction f;
        f.pieces_ = std::move(pieces);
        f.points_ = std::move(point_values);
        f.default_ = std::move(default_value);
        f.canonicalize();
        return f;
    }

    // Indicator of a bounded representable set.
    static PiecewiseFunction indicator(const IntervalSet& s) {
        std::vector<std::pair<Interval, Complex>> pieces;
        for (const auto& iv : s.intervals()) {
            if (iv.lo.cls != 0 || iv.hi.cls != 0)
                throw Error("indicator of an unbounded set is not a piecewise function");
            pieces.push_back({{iv.lo.value, iv.hi.value}, Complex(Rational(1))});
        }
        std::vector<std::pair<Rational, Complex>> pts;
        for (const auto& q : s.points()) pts.push_back({q, Complex(Rational(1))});
        return from(std::move(pieces), std::move(pts));
    }

    const std::vector<std::pair<Interval, Complex>>& pieces() const { return pieces_; }
    const std::vector<std::pair<Rational, Complex>>& point_values() const { return points_; }
    const Complex& default_value() const { return default_; }

    Complex eval(const Rational& x) const {
        for (const auto& [loc, v] : points_)
            if (loc == x) return v;
        return eval_interval(x);
    }

    // Value of the surrounding piece, ignoring point corrections: the
    // right evaluation for a grid cell [x, y) since single points carry
    // no density mass.
    Complex eval_interval(const Rational& x) const {
        for (const auto& [iv, v] : pieces_)
            if (iv.contains(x)) return v;
        return default_;
    }

    Partition partition() const {
        Partition p;
        for (const auto& [iv, v] : pieces_) p.add_interval(iv);
        for (const auto& [loc, v] : points_) p.add_point(loc);
        p.finish();
        return p;
    }

    // Largest |f|^2 attained; exact, used by the norm-bound checks since
    // sup|f| itself is irrational in general.
    Rational sup_norm_sq() const {
        Rational best = default_.norm_sq();
        for (const auto& [iv, v] : pieces_) best = max_rational(best, v.norm_sq());
        for (const auto& [loc, v] : points_) best = max_rational(best, v.norm_sq());
        return best;
    }

    bool is_real_nonnegative() const {
        if (!default_.is_real() || default_.re < 0) return false;
        for (const auto& [iv, v] : pieces_)
            if (!v.is_real() || v.re < 0) return false;
        for (const auto& [loc, v] : points_)
            if (!v.is_real() || v.re < 0) return false;
        return true;
    }

    friend bool operator==(const PiecewiseFunction& a, const PiecewiseFunction& b) = default;

  private:
    template <typename Op>
    static PiecewiseFunction combine(const PiecewiseFunction& a, const PiecewiseFunction& b, Op op) {
        Partition p = a.partition().merged_with(b.partition());
        std::vector<std::pair<Interval, Complex>> pieces;
        for (const auto& cell : p.cells())
            pieces.push_back({cell, op(a.eval_interval(cell.lo), b.eval_interval(cell.lo))});
        std::vector<std::pair<Rational, Complex>> pts;
        for (const auto& q : p.points) pts.push_back({q, op(a.eval(q), b.eval(q))});
        return from(std::move(pieces), std::move(pts), op(a.default_, b.default_));
    }

  public:
    friend PiecewiseFunction operator+(const PiecewiseFunction& a, const PiecewiseFunction& b) {
        return combine(a, b, [](const Complex& x, const Complex& y) { return x + y; });
    }
    friend PiecewiseFunction operator*(const PiecewiseFunction& a, const PiecewiseFunction& b) {
        return combine(a, b, [](const Complex& x, const Complex& y) { return x * y; });
    }

  private:
    void canonicalize() {
        std::sort(pieces_.begin(), pieces_.end(),
                  [](const auto& x, const auto& y) { return x.first.lo < y.first.lo; });
        std::vector<std::pair<Interval, Complex>> merged;
        for (auto& p : pieces_) {
            if (!(p.first.lo < p.first.hi)) continue;
            if (p.second == default_) continue;  // redundant piece
            if (!merged.empty()) {
                if (p.first.lo < merged.back().first.hi) throw Error("overlapping function pieces");
                if (merged.back().first.hi == p.first.lo && merged.back().second == p.second) {
                    merged.back().first.hi = p.first.hi;
                    continue;
                }
            }
            merged.push_back(std::move(p));
        }
        pieces_ = std::move(merged);
        std::sort(points_.begin(), points_.end(),
                  [](const auto& x, const auto& y) { return x.first < y.first; });
        std::vector<std::pair<Rational, Complex>> pts;
        for (auto& q : points_) {
            if (!pts.empty() && pts.back().first == q.first) {
                if (!(pts.back().second == q.second)) throw Error("conflicting point values");
                continue;
            }
            // drop point values that just restate the ambient value
            Complex ambient = default_;
            for (const auto& [iv, v] : pieces_)
                if (iv.contains(q.first)) { ambient = v; break; }
            if (q.second == ambient) continue;
            pts.push_back(std::move(q));
        }
        points_ = std::move(pts);
    }

    std::vector<std::pair<Interval, Complex>> pieces_;
    std::vector<std::pair<Rational, Complex>> points_;
    Complex default_{};
};

}  // namespace specmt
