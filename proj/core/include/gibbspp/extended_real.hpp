#pragma once

#include <cmath>
#include <limits>
#include <ostream>

namespace gibbspp {

/// Real value or +/-infinity, with absorbing addition. Potentials only ever
/// produce +inf; -inf exists as a marker for energy deltas out of forbidden
/// states.
class ExtendedReal {
  public:
    ExtendedReal() = default;
    ExtendedReal(double v) : value_(v) {}  // NOLINT: implicit by design

    static ExtendedReal infinity() {
        ExtendedReal e;
        e.infinite_ = true;
        e.value_ = 1.0;
        return e;
    }
    static ExtendedReal neg_infinity() {
        ExtendedReal e;
        e.infinite_ = true;
        e.value_ = -1.0;
        return e;
    }

    bool is_infinite() const { return infinite_; }
    bool is_finite() const { return !infinite_; }
    bool is_pos_infinite() const { return infinite_ && value_ > 0.0; }

    /// Finite value; meaningless when infinite.
    double value() const { return value_; }

    double as_double() const {
        if (infinite_)
            return value_ > 0.0 ? std::numeric_limits<double>::infinity()
                                : -std::numeric_limits<double>::infinity();
        return value_;
    }

    /// exp(-x) with exp(-inf) = 0.
    double exp_neg() const {
        if (infinite_) return value_ > 0.0 ? 0.0 : std::numeric_limits<double>::infinity();
        return std::exp(-value_);
    }

    ExtendedReal& operator+=(const ExtendedReal& o) {
        if (o.infinite_) {
            infinite_ = true;
            value_ = o.value_;
        } else if (!infinite_) {
            value_ += o.value_;
        }
        return *this;
    }
    friend ExtendedReal operator+(ExtendedReal a, const ExtendedReal& b) { return a += b; }

    friend bool operator==(const ExtendedReal& a, const ExtendedReal& b) {
        if (a.infinite_ != b.infinite_) return false;
        if (a.infinite_) return (a.value_ > 0.0) == (b.value_ > 0.0);
        return a.value_ == b.value_;
    }
    friend bool operator!=(const ExtendedReal& a, const ExtendedReal& b) { return !(a == b); }

    friend std::ostream& operator<<(std::ostream& os, const ExtendedReal& e) {
        if (e.infinite_) return os << (e.value_ > 0.0 ? "inf" : "-inf");
        return os << e.value_;
    }

  private:
    double value_ = 0.0;
    bool infinite_ = false;
};

}  // namespace gibbspp
