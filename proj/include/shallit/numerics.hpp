#pragma once

// Arbitrary-precision reals under an explicit decimal precision context.
//
// Every Real owns its MPFR value and its precision. Arithmetic results take
// the larger precision of the operands; there is no process-wide default
// precision.

#include <mpfr.h>

#include <compare>
#include <cstddef>
#include <filesystem>
#include <map>
#include <stdexcept>
#include <string>
#include <string_view>

namespace shallit {

class ParseError : public std::runtime_error {
 public:
  ParseError(std::string_view input, std::size_t position);
  /// 1-based index of the offending character (length + 1 for premature end).
  std::size_t position() const { return position_; }

 private:
  std::size_t position_;
};

class PrecisionError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class PrecCtx {
 public:
  static constexpr int kDefaultGuard = 10;
  static constexpr int kMinDigits = 16;

  explicit PrecCtx(int digits, int guard = kDefaultGuard);

  int digits() const { return digits_; }
  int guard() const { return guard_; }
  int working_digits() const { return digits_ + guard_; }
  mpfr_prec_t bits() const;

  /// Same guard, `extra` more target digits.
  PrecCtx widened(int extra) const { return PrecCtx(digits_ + extra, guard_); }

  friend bool operator==(const PrecCtx&, const PrecCtx&) = default;

 private:
  int digits_;
  int guard_;
};

mpfr_prec_t digits_to_bits(int decimal_digits);

class Real {
 public:
  Real();
  Real(long value, const PrecCtx& ctx);
  Real(long value, mpfr_prec_t bits);
  Real(const Real& other);
  Real(Real&& other) noexcept;
  Real& operator=(const Real& other);
  Real& operator=(Real&& other) noexcept;
  ~Real();

  /// Precision of this value, in bits and in (floored) decimal digits.
  mpfr_prec_t bits() const { return mpfr_get_prec(value_); }
  int digits() const;

  mpfr_srcptr get() const { return value_; }
  mpfr_ptr get() { return value_; }

  double to_double() const { return mpfr_get_d(value_, MPFR_RNDN); }
  int sign() const { return mpfr_sgn(value_); }
  bool is_zero() const { return mpfr_zero_p(value_) != 0; }
  bool is_finite() const { return mpfr_number_p(value_) != 0; }

  /// Copy rounded to a different precision.
  Real with_bits(mpfr_prec_t bits) const;

  Real operator-() const;
  Real& operator+=(const Real& rhs);
  Real& operator-=(const Real& rhs);
  Real& operator*=(const Real& rhs);
  Real& operator/=(const Real& rhs);

  friend Real operator+(const Real& a, const Real& b);
  friend Real operator-(const Real& a, const Real& b);
  friend Real operator*(const Real& a, const Real& b);
  friend Real operator/(const Real& a, const Real& b);
  friend Real operator+(const Real& a, long b);
  friend Real operator-(const Real& a, long b);
  friend Real operator*(const Real& a, long b);
  friend Real operator/(const Real& a, long b);
  friend Real operator+(long a, const Real& b);
  friend Real operator-(long a, const Real& b);
  friend Real operator*(long a, const Real& b);
  friend Real operator/(long a, const Real& b);

  friend bool operator==(const Real& a, const Real& b);
  friend std::partial_ordering operator<=>(const Real& a, const Real& b);
  friend bool operator==(const Real& a, long b);
  friend std::partial_ordering operator<=>(const Real& a, long b);

 private:
  struct Uninitialized {};
  Real(mpfr_prec_t bits, Uninitialized);
  static Real uninit(mpfr_prec_t bits) { return Real(bits, Uninitialized{}); }

  friend Real sqrt(const Real&);
  friend Real abs(const Real&);
  friend Real pow(const Real&, long);
  friend Real pow10(long, mpfr_prec_t);
  friend Real log10_abs(const Real&);
  friend Real real_from_decimal(std::string_view, const PrecCtx&);

  mpfr_t value_;
};

Real sqrt(const Real& x);
Real abs(const Real& x);
Real pow(const Real& x, long exponent);
/// 10^exponent at the given precision.
Real pow10(long exponent, mpfr_prec_t bits);
Real log10_abs(const Real& x);

Real real_from_decimal(std::string_view s, const PrecCtx& ctx);

/// Round-toward-zero expansion with exactly `places` fractional digits.
std::string real_to_decimal(const Real& x, int places);

/// Short scientific rendering ("1.23e-45") for diagnostics; not bit-exact.
std::string real_to_sci(const Real& x, int significant = 3);

/// 2 + sqrt(3), the expanding eigenvalue at the hyperbolic fixed point.
Real rho(const PrecCtx& ctx);
/// (1 + sqrt(5)) / 2.
Real golden_ratio(const PrecCtx& ctx);

/// log10(rho) in double precision, for planning.
double log10_rho();

/// Reference-constant files: one `name = decimal` per line, `#` comments.
std::map<std::string, std::string> read_reference_strings(const std::filesystem::path& path);
std::map<std::string, Real> load_reference_constants(const std::filesystem::path& path,
                                                     const PrecCtx& ctx);

}  // namespace shallit
