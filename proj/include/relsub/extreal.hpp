#pragma once

#include <cassert>
#include <cmath>
#include <limits>
#include <string>

namespace relsub {

/// Extended real value in R u {+inf, -inf}.
///
/// Addition follows the convention (+inf) + (-inf) = +inf, which the rest of
/// the toolkit inherits wherever extended-real sums appear (notably when two
/// piecewise functions are added pointwise). NaN is never a valid payload.
class ExtReal {
public:
    ExtReal() : v_(0.0) {}
    ExtReal(double v) : v_(v) { assert(!std::isnan(v)); }

    static ExtReal pos_inf() { return ExtReal(std::numeric_limits<double>::infinity()); }
    static ExtReal neg_inf() { return ExtReal(-std::numeric_limits<double>::infinity()); }

    bool is_finite() const { return std::isfinite(v_); }
    bool is_pos_inf() const { return std::isinf(v_) && v_ > 0; }
    bool is_neg_inf() const { return std::isinf(v_) && v_ < 0; }

    /// Raw double payload (may be +-inf).
    double raw() const { return v_; }

    friend bool operator==(ExtReal a, ExtReal b) { return a.v_ == b.v_; }
    friend bool operator!=(ExtReal a, ExtReal b) { return a.v_ != b.v_; }
    friend bool operator<(ExtReal a, ExtReal b) { return a.v_ < b.v_; }
    friend bool operator<=(ExtReal a, ExtReal b) { return a.v_ <= b.v_; }
    friend bool operator>(ExtReal a, ExtReal b) { return a.v_ > b.v_; }
    friend bool operator>=(ExtReal a, ExtReal b) { return a.v_ >= b.v_; }

private:
    double v_;
};

/// Sum with the (+inf) + (-inf) = +inf convention.
inline ExtReal ext_add(ExtReal a, ExtReal b) {
    if (a.is_pos_inf() || b.is_pos_inf()) return ExtReal::pos_inf();
    if (a.is_neg_inf() || b.is_neg_inf()) return ExtReal::neg_inf();
    return ExtReal(a.raw() + b.raw());
}

inline ExtReal ext_neg(ExtReal a) { return ExtReal(-a.raw()); }

/// a - b, i.e. a + (-b) under the same convention (so (+inf) - (+inf) = +inf).
inline ExtReal ext_sub(ExtReal a, ExtReal b) { return ext_add(a, ext_neg(b)); }

/// Product; 0 * (+-inf) is taken to be 0.
inline ExtReal ext_mul(ExtReal a, ExtReal b) {
    if (a.is_finite() && b.is_finite()) return ExtReal(a.raw() * b.raw());
    if (a.raw() == 0.0 || b.raw() == 0.0) return ExtReal(0.0);
    double s = (a.raw() > 0 ? 1.0 : -1.0) * (b.raw() > 0 ? 1.0 : -1.0);
    return s > 0 ? ExtReal::pos_inf() : ExtReal::neg_inf();
}

std::string to_string(ExtReal a);

} // namespace relsub
