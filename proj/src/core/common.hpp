#ifndef SPECGLUE_CORE_COMMON_HPP
#define SPECGLUE_CORE_COMMON_HPP

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>

namespace sg {

inline constexpr double kPi = 3.14159265358979323846264338327950288;
inline constexpr double kEulerGamma = 0.57721566490153286060651209008240243;

enum class ErrorCode {
  InvalidArgument = 1,
  Parse = 2,
  Invariant = 3,
  Unsupported = 4,
  Io = 5,
  Tolerance = 6,
  Internal = 7,
};

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(what), code_(code) {}
  ErrorCode code() const { return code_; }

 private:
  ErrorCode code_;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string& what) {
  throw Error(code, what);
}

// A value with an accumulated absolute error bound. Bounds add linearly;
// they are bookkeeping for truncation/quadrature error, not interval
// arithmetic on roundoff.
struct Bounded {
  double value = 0.0;
  double bound = 0.0;

  Bounded() = default;
  Bounded(double v, double b = 0.0) : value(v), bound(b) {}

  Bounded operator+(const Bounded& o) const { return {value + o.value, bound + o.bound}; }
  Bounded operator-(const Bounded& o) const { return {value - o.value, bound + o.bound}; }
  Bounded operator-() const { return {-value, bound}; }
  Bounded& operator+=(const Bounded& o) {
    value += o.value;
    bound += o.bound;
    return *this;
  }
  Bounded& operator-=(const Bounded& o) {
    value -= o.value;
    bound += o.bound;
    return *this;
  }
  friend Bounded operator*(double c, const Bounded& x) {
    return {c * x.value, std::abs(c) * x.bound};
  }
};

// Boundary condition imposed at the near end of a cylinder; the far end is
// Dirichlet unless stated otherwise.
enum class Bc { PMinusL0, PPlusL1, Rel, Abs };

enum class Sector { Plus, Minus };

// The two one-dimensional eigenvalue ladders appearing on a cylinder of
// length r: (k pi / r)^2 and ((k - 1/2) pi / r)^2, k >= 1.
enum class Series { Integer, Half };

const char* bc_name(Bc bc);
Bc bc_from_name(const std::string& name);

// Shortest round-trip decimal formatting.
std::string format_double(double x);

}  // namespace sg

#endif
