#include "thickpave/interval.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace thickpave {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kMaxD = std::numeric_limits<double>::max();

double next_up(double x) {
    return std::nextafter(x, kInf);
}

double next_down(double x) {
    return std::nextafter(x, -kInf);
}

double step_out(double x, int ulps, bool up) {
    for (int i = 0; i < ulps; ++i) x = up ? next_up(x) : next_down(x);
    return x;
}

// Directed sum. TwoSum recovers the exact rounding error, so exactly
// representable sums keep their endpoints.
double add_dir(double a, double b, bool up) {
    double s = a + b;
    if (std::isnan(s)) return up ? kInf : -kInf;
    if (std::isinf(s)) {
        if (std::isinf(a) || std::isinf(b)) return s;
        // Finite operands rounded to infinity: the true sum is beyond max.
        return s > 0 ? (up ? kInf : kMaxD) : (up ? -kMaxD : -kInf);
    }
    double bb = s - a;
    double err = (a - (s - bb)) + (b - bb);
    if (!std::isfinite(err)) return up ? next_up(s) : next_down(s);
    if (up) return err > 0 ? next_up(s) : s;
    return err < 0 ? next_down(s) : s;
}

// Directed product; 0 * inf is taken as 0 (the finite-operand image).
double mul_dir(double a, double b, bool up) {
    double p = a * b;
    if (std::isnan(p)) {
        if (a == 0.0 || b == 0.0) return 0.0;
        return up ? kInf : -kInf;
    }
    if (std::isinf(p)) {
        if (std::isinf(a) || std::isinf(b)) return p;
        return p > 0 ? (up ? kInf : kMaxD) : (up ? -kMaxD : -kInf);
    }
    double err = std::fma(a, b, -p);
    if (up) return err > 0 ? next_up(p) : p;
    return err < 0 ? next_down(p) : p;
}

// Directed quotient for y != 0. fma(q, y, -x) = (q - x/y) * y exactly.
double div_dir(double x, double y, bool up) {
    if (std::isinf(y)) return 0.0;
    double q = x / y;
    if (std::isnan(q)) return up ? kInf : -kInf;
    if (std::isinf(q)) {
        if (std::isinf(x)) return q;
        return q > 0 ? (up ? kInf : kMaxD) : (up ? -kMaxD : -kInf);
    }
    double err = std::fma(q, y, -x);
    double excess = (y > 0) ? err : -err;  // > 0 means q > x/y
    if (up) return excess < 0 ? next_up(q) : q;
    return excess > 0 ? next_down(q) : q;
}

double sqrt_dir(double x, bool up) {
    double r = std::sqrt(x);
    if (!std::isfinite(r)) return r;
    double err = std::fma(r, r, -x);  // sign of r^2 - x
    if (up) return err < 0 ? next_up(r) : r;
    return err > 0 ? next_down(r) : r;
}

// x^k for x >= 0, k >= 1 by binary powering with every step rounded in
// one direction; monotone for nonnegative factors.
double powi_nonneg_dir(double x, int k, bool up) {
    double acc = 1.0;
    double base = x;
    while (k > 0) {
        if (k & 1) acc = mul_dir(acc, base, up);
        k >>= 1;
        if (k > 0) base = mul_dir(base, base, up);
    }
    return acc;
}

double powi_dir(double x, int k, bool up) {
    if (x >= 0.0) return powi_nonneg_dir(x, k, up);
    double mag = powi_nonneg_dir(-x, k, !up);
    return (k & 1) ? -mag : powi_nonneg_dir(-x, k, up);
}

// 2*pi slightly below the true value, used only as a width guard.
constexpr double kTwoPiLow = 6.283185307179586;
const double kPi = std::acos(-1.0);

// True whether any point phase + 2*pi*k falls inside [lo, hi], widened by
// a margin covering the accumulated representation error of the probe.
// False positives only widen the sine bound toward +-1, which is sound.
bool hits_critical(double lo, double hi, double phase) {
    double k_from = std::floor((lo - phase) / kTwoPiLow) - 1.0;
    double k_to = std::floor((hi - phase) / kTwoPiLow) + 1.0;
    for (double k = k_from; k <= k_to; k += 1.0) {
        double m = phase + 2.0 * kPi * k;
        double margin = 1e-15 * (2.0 + std::fabs(m));
        if (m >= lo - margin && m <= hi + margin) return true;
    }
    return false;
}

// Enclosure of a libm value that is not correctly rounded; a couple of
// ulps covers glibc's stated error for sin/cos.
std::pair<double, double> libm_enclose(double v) {
    return {step_out(v, 2, false), step_out(v, 2, true)};
}

} // namespace

double Interval::mid() const {
    if (is_empty()) return std::numeric_limits<double>::quiet_NaN();
    if (lo_ == -kInf && hi_ == kInf) return 0.0;
    if (lo_ == -kInf) return -kMaxD;
    if (hi_ == kInf) return kMaxD;
    double m = lo_ + 0.5 * (hi_ - lo_);
    if (!std::isfinite(m)) m = 0.5 * lo_ + 0.5 * hi_;
    return m;
}

Interval add(const Interval& a, const Interval& b) {
    if (a.is_empty() || b.is_empty()) return Interval::empty();
    return Interval(add_dir(a.lo(), b.lo(), false), add_dir(a.hi(), b.hi(), true));
}

Interval sub(const Interval& a, const Interval& b) {
    if (a.is_empty() || b.is_empty()) return Interval::empty();
    return Interval(add_dir(a.lo(), -b.hi(), false), add_dir(a.hi(), -b.lo(), true));
}

Interval mul(const Interval& a, const Interval& b) {
    if (a.is_empty() || b.is_empty()) return Interval::empty();
    const double xs[2] = {a.lo(), a.hi()};
    const double ys[2] = {b.lo(), b.hi()};
    double lo = kInf, hi = -kInf;
    for (double x : xs)
        for (double y : ys) {
            lo = std::min(lo, mul_dir(x, y, false));
            hi = std::max(hi, mul_dir(x, y, true));
        }
    return Interval(lo, hi);
}

Interval div(const Interval& a, const Interval& b) {
    if (a.is_empty() || b.is_empty()) return Interval::empty();
    if (b.contains(0.0)) {
        if (b.lo() == 0.0 && b.hi() == 0.0) return Interval::empty();
        if (a.lo() == 0.0 && a.hi() == 0.0) return Interval(0.0);
        if (b.lo() < 0.0 && b.hi() > 0.0) return Interval::entire();
        if (b.lo() == 0.0) {  // b = [0, b.hi], b.hi > 0
            if (a.lo() > 0.0) return Interval(div_dir(a.lo(), b.hi(), false), kInf);
            if (a.hi() < 0.0) return Interval(-kInf, div_dir(a.hi(), b.hi(), true));
            return Interval::entire();
        }
        // b = [b.lo, 0], b.lo < 0
        if (a.lo() > 0.0) return Interval(-kInf, div_dir(a.lo(), b.lo(), true));
        if (a.hi() < 0.0) return Interval(div_dir(a.hi(), b.lo(), false), kInf);
        return Interval::entire();
    }
    const double xs[2] = {a.lo(), a.hi()};
    const double ys[2] = {b.lo(), b.hi()};
    double lo = kInf, hi = -kInf;
    for (double x : xs)
        for (double y : ys) {
            lo = std::min(lo, div_dir(x, y, false));
            hi = std::max(hi, div_dir(x, y, true));
        }
    return Interval(lo, hi);
}

Interval neg(const Interval& a) {
    if (a.is_empty()) return Interval::empty();
    return Interval(-a.hi(), -a.lo());
}

Interval sqr(const Interval& a) {
    if (a.is_empty()) return Interval::empty();
    double alo = std::fabs(a.lo());
    double ahi = std::fabs(a.hi());
    double big = std::max(alo, ahi);
    double small = std::min(alo, ahi);
    double hi = mul_dir(big, big, true);
    if (a.contains(0.0)) return Interval(0.0, hi);
    return Interval(mul_dir(small, small, false), hi);
}

Interval sqrt(const Interval& a) {
    if (a.is_empty() || a.hi() < 0.0) return Interval::empty();
    double lo = a.lo() <= 0.0 ? 0.0 : sqrt_dir(a.lo(), false);
    if (lo < 0.0) lo = 0.0;
    return Interval(lo, sqrt_dir(a.hi(), true));
}

Interval sin(const Interval& a) {
    if (a.is_empty()) return Interval::empty();
    if (!std::isfinite(a.lo()) || !std::isfinite(a.hi()) ||
        a.width() >= kTwoPiLow ||
        std::max(std::fabs(a.lo()), std::fabs(a.hi())) > 1e15)
        return Interval(-1.0, 1.0);
    auto [l1, h1] = a.lo() == 0.0 ? std::pair<double, double>{0.0, 0.0}
                                  : libm_enclose(std::sin(a.lo()));
    auto [l2, h2] = a.hi() == 0.0 ? std::pair<double, double>{0.0, 0.0}
                                  : libm_enclose(std::sin(a.hi()));
    double lo = std::min(l1, l2);
    double hi = std::max(h1, h2);
    if (hits_critical(a.lo(), a.hi(), kPi / 2.0)) hi = 1.0;
    if (hits_critical(a.lo(), a.hi(), -kPi / 2.0)) lo = -1.0;
    return Interval(std::max(lo, -1.0), std::min(hi, 1.0));
}

Interval cos(const Interval& a) {
    if (a.is_empty()) return Interval::empty();
    if (!std::isfinite(a.lo()) || !std::isfinite(a.hi()) ||
        a.width() >= kTwoPiLow ||
        std::max(std::fabs(a.lo()), std::fabs(a.hi())) > 1e15)
        return Interval(-1.0, 1.0);
    auto [l1, h1] = a.lo() == 0.0 ? std::pair<double, double>{1.0, 1.0}
                                  : libm_enclose(std::cos(a.lo()));
    auto [l2, h2] = a.hi() == 0.0 ? std::pair<double, double>{1.0, 1.0}
                                  : libm_enclose(std::cos(a.hi()));
    double lo = std::min(l1, l2);
    double hi = std::max(h1, h2);
    if (hits_critical(a.lo(), a.hi(), 0.0)) hi = 1.0;
    if (hits_critical(a.lo(), a.hi(), kPi)) lo = -1.0;
    return Interval(std::max(lo, -1.0), std::min(hi, 1.0));
}

Interval pow_int(const Interval& a, int k) {
    if (a.is_empty()) return Interval::empty();
    if (k == 0) return Interval(1.0);
    if (k < 0) return div(Interval(1.0), pow_int(a, -k));
    if (k == 1) return a;
    if (k % 2 == 0) {
        double alo = std::fabs(a.lo());
        double ahi = std::fabs(a.hi());
        double big = std::max(alo, ahi);
        double hi = powi_nonneg_dir(big, k, true);
        if (a.contains(0.0)) return Interval(0.0, hi);
        double small = std::min(alo, ahi);
        return Interval(powi_nonneg_dir(small, k, false), hi);
    }
    // Odd powers are monotone over the whole line.
    return Interval(powi_dir(a.lo(), k, false), powi_dir(a.hi(), k, true));
}

Interval binary_op(BinaryOp op, const Interval& a, const Interval& b) {
    switch (op) {
    case BinaryOp::Add: return add(a, b);
    case BinaryOp::Sub: return sub(a, b);
    case BinaryOp::Mul: return mul(a, b);
    case BinaryOp::Div: return div(a, b);
    }
    throw std::logic_error("unreachable binary op");
}

Interval unary_op(UnaryOp op, const Interval& a, int exponent) {
    switch (op) {
    case UnaryOp::Neg: return neg(a);
    case UnaryOp::Sqr: return sqr(a);
    case UnaryOp::Sqrt: return sqrt(a);
    case UnaryOp::Sin: return sin(a);
    case UnaryOp::Cos: return cos(a);
    case UnaryOp::PowInt: return pow_int(a, exponent);
    }
    throw std::logic_error("unreachable unary op");
}

double Box::width() const {
    if (is_empty()) return 0.0;
    double w = 0.0;
    for (const auto& c : comps_) w = std::max(w, c.width());
    return w;
}

std::size_t Box::widest_dim() const {
    std::size_t best = 0;
    double w = -1.0;
    for (std::size_t i = 0; i < comps_.size(); ++i) {
        if (comps_[i].width() > w) {
            w = comps_[i].width();
            best = i;
        }
    }
    return best;
}

bool Box::contains(std::span<const double> point) const {
    if (point.size() != comps_.size()) return false;
    for (std::size_t i = 0; i < comps_.size(); ++i)
        if (!comps_[i].contains(point[i])) return false;
    return true;
}

bool Box::contains(const Box& other) const {
    if (other.is_empty()) return true;
    if (other.size() != comps_.size()) return false;
    for (std::size_t i = 0; i < comps_.size(); ++i)
        if (!comps_[i].contains(other[i])) return false;
    return true;
}

std::vector<double> Box::midpoint() const {
    std::vector<double> m;
    m.reserve(comps_.size());
    for (const auto& c : comps_) m.push_back(c.mid());
    return m;
}

double Box::volume() const {
    if (is_empty()) return 0.0;
    double v = 1.0;
    for (const auto& c : comps_) v *= c.width();
    return v;
}

std::pair<Box, Box> Box::bisect() const {
    if (is_empty() || comps_.empty() || width() <= 0.0)
        throw std::domain_error("bisect: box is unsplittable");
    std::size_t d = widest_dim();
    const Interval& c = comps_[d];
    if (!std::isfinite(c.lo()) || !std::isfinite(c.hi()))
        throw std::domain_error("bisect: unbounded component");
    double m = c.mid();
    auto left = comps_;
    auto right = comps_;
    left[d] = Interval(c.lo(), m);
    right[d] = Interval(m, c.hi());
    return {Box(std::move(left)), Box(std::move(right))};
}

} // namespace thickpave
