#pragma once

#include <cstddef>
#include <limits>
#include <span>
#include <utility>
#include <vector>

namespace thickpave {

/**
 * Closed real interval with outward-rounded arithmetic.
 *
 * Endpoints may be infinite; the canonical empty interval is [+inf, -inf].
 * Every operation returns an enclosure of the true real-arithmetic image:
 * endpoints are computed with error-free transformations (TwoSum / fma)
 * and nudged one ulp outward only when the float result is inexact, so
 * exactly representable results stay exact.
 */
class Interval {
public:
    // Default-constructed interval is empty.
    Interval()
        : lo_(std::numeric_limits<double>::infinity()),
          hi_(-std::numeric_limits<double>::infinity()) {}

    explicit Interval(double point) : lo_(point), hi_(point) {
        if (!(lo_ <= hi_)) *this = Interval();  // NaN point -> empty
    }

    Interval(double lo, double hi) : lo_(lo), hi_(hi) {
        if (!(lo_ <= hi_)) *this = Interval();
    }

    static Interval empty() { return Interval(); }
    static Interval entire() {
        return Interval(-std::numeric_limits<double>::infinity(),
                        std::numeric_limits<double>::infinity());
    }

    double lo() const { return lo_; }
    double hi() const { return hi_; }

    bool is_empty() const { return lo_ > hi_; }
    bool is_point() const { return lo_ == hi_; }

    // hi - lo; 0 for the empty interval, +inf for unbounded ones.
    double width() const { return is_empty() ? 0.0 : hi_ - lo_; }

    double mid() const;

    bool contains(double x) const { return lo_ <= x && x <= hi_; }
    bool contains(const Interval& other) const {
        return other.is_empty() || (lo_ <= other.lo_ && other.hi_ <= hi_);
    }
    bool intersects(const Interval& other) const {
        return !is_empty() && !other.is_empty() &&
               lo_ <= other.hi_ && other.lo_ <= hi_;
    }

    Interval intersect(const Interval& other) const {
        if (!intersects(other)) return empty();
        return Interval(lo_ > other.lo_ ? lo_ : other.lo_,
                        hi_ < other.hi_ ? hi_ : other.hi_);
    }

    Interval hull(const Interval& other) const {
        if (is_empty()) return other;
        if (other.is_empty()) return *this;
        return Interval(lo_ < other.lo_ ? lo_ : other.lo_,
                        hi_ > other.hi_ ? hi_ : other.hi_);
    }

    bool operator==(const Interval& other) const {
        if (is_empty() && other.is_empty()) return true;
        return lo_ == other.lo_ && hi_ == other.hi_;
    }
    bool operator!=(const Interval& other) const { return !(*this == other); }

private:
    double lo_;
    double hi_;
};

enum class BinaryOp { Add, Sub, Mul, Div };
enum class UnaryOp { Neg, Sqr, Sqrt, Sin, Cos, PowInt };

Interval add(const Interval& a, const Interval& b);
Interval sub(const Interval& a, const Interval& b);
Interval mul(const Interval& a, const Interval& b);

// Extended division: a zero-containing divisor yields the interval hull of
// the two-branch result (one connected enclosure, possibly entire).
Interval div(const Interval& a, const Interval& b);

Interval neg(const Interval& a);
Interval sqr(const Interval& a);
// sqrt of a fully negative interval is empty; partial violations clip to 0.
Interval sqrt(const Interval& a);
Interval sin(const Interval& a);
Interval cos(const Interval& a);
// Parity-aware integer power via repeated squaring (negative k through 1/x^-k).
Interval pow_int(const Interval& a, int k);

Interval binary_op(BinaryOp op, const Interval& a, const Interval& b);
Interval unary_op(UnaryOp op, const Interval& a, int exponent = 0);

/**
 * Axis-aligned box: one interval per state dimension. A box is empty as
 * soon as any component is empty; the zero-dimensional box is the single
 * empty tuple and counts as nonempty.
 */
class Box {
public:
    Box() = default;
    explicit Box(std::vector<Interval> components)
        : comps_(std::move(components)) {}

    static Box empty(std::size_t dims) {
        return Box(std::vector<Interval>(dims, Interval::empty()));
    }

    std::size_t size() const { return comps_.size(); }
    const Interval& operator[](std::size_t i) const { return comps_[i]; }
    const std::vector<Interval>& components() const { return comps_; }

    bool is_empty() const {
        for (const auto& c : comps_)
            if (c.is_empty()) return true;
        return false;
    }

    // Max component width; 0 for an empty box.
    double width() const;
    std::size_t widest_dim() const;

    bool contains(std::span<const double> point) const;
    bool contains(const Box& other) const;
    std::vector<double> midpoint() const;
    double volume() const;

    // Splits along the widest component at its midpoint, ties resolved
    // toward the lowest index. Throws std::domain_error when every
    // component is degenerate (nothing to split).
    std::pair<Box, Box> bisect() const;

    bool operator==(const Box& other) const { return comps_ == other.comps_; }
    bool operator!=(const Box& other) const { return !(*this == other); }

private:
    std::vector<Interval> comps_;
};

} // namespace thickpave
