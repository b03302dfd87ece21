#pragma once

#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace infoconc {

/// Extended real in [−inf-free] form: either a finite double or +∞.
/// The rate function and its conjugate genuinely take the value +∞, so the
/// state is carried explicitly instead of leaking IEEE infinities through
/// downstream arithmetic unannounced.
class ExtReal {
 public:
  ExtReal() : value_(0.0), infinite_(false) {}
  ExtReal(double v) : value_(v), infinite_(false) {
    if (!std::isfinite(v)) {
      if (v > 0) {
        infinite_ = true;
        value_ = 0.0;
      } else {
        throw std::invalid_argument("ExtReal: value must be finite or +inf");
      }
    }
  }

  static ExtReal infinity() {
    ExtReal r;
    r.infinite_ = true;
    return r;
  }

  bool is_infinite() const { return infinite_; }
  bool is_finite() const { return !infinite_; }

  /// Finite value; throws when called on +∞.
  double value() const {
    if (infinite_) throw std::logic_error("ExtReal: value() on +inf");
    return value_;
  }

  /// IEEE view: +∞ maps to std::numeric_limits<double>::infinity().
  double as_double() const {
    return infinite_ ? std::numeric_limits<double>::infinity() : value_;
  }

  std::string str() const {
    return infinite_ ? std::string("inf") : std::to_string(value_);
  }

  friend bool operator==(const ExtReal& a, const ExtReal& b) {
    if (a.infinite_ || b.infinite_) return a.infinite_ && b.infinite_;
    return a.value_ == b.value_;
  }
  friend bool operator<(const ExtReal& a, const ExtReal& b) {
    if (a.infinite_) return false;
    if (b.infinite_) return true;
    return a.value_ < b.value_;
  }
  friend bool operator<=(const ExtReal& a, const ExtReal& b) {
    return a < b || a == b;
  }

 private:
  double value_;
  bool infinite_;
};

/// exp on extended reals: exp(+∞) = +∞.
inline ExtReal exp_ext(const ExtReal& x) {
  if (x.is_infinite()) return ExtReal::infinity();
  return ExtReal(std::exp(x.value()));
}

}  // namespace infoconc
