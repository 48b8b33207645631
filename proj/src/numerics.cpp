#include "shallit/numerics.hpp"

#include <gmp.h>

#include <cmath>
#include <fstream>
#include <sstream>
#include <vector>

namespace shallit {
namespace {

constexpr double kLog2Of10 = 3.321928094887362347870;

// Orbits far from the fixed point grow doubly exponentially; widen MPFR's
// exponent range (which is per-thread in thread-safe builds).
void widen_exponent_range() {
  thread_local bool done = false;
  if (!done) {
    mpfr_set_emax(mpfr_get_emax_max());
    mpfr_set_emin(mpfr_get_emin_min());
    done = true;
  }
}

std::string describe_parse_error(std::string_view input, std::size_t position) {
  std::ostringstream os;
  os << "malformed decimal \"" << input << "\" at position " << position;
  return os.str();
}

mpfr_prec_t max_bits(const Real& a, const Real& b) { return std::max(a.bits(), b.bits()); }

}  // namespace

ParseError::ParseError(std::string_view input, std::size_t position)
    : std::runtime_error(describe_parse_error(input, position)), position_(position) {}

mpfr_prec_t digits_to_bits(int decimal_digits) {
  widen_exponent_range();
  const auto bits = static_cast<mpfr_prec_t>(std::ceil(decimal_digits * kLog2Of10));
  return std::max<mpfr_prec_t>(bits, MPFR_PREC_MIN);
}

PrecCtx::PrecCtx(int digits, int guard) : digits_(digits), guard_(guard) {
  if (digits < kMinDigits) {
    throw std::invalid_argument("precision context needs at least 16 digits, got " +
                                std::to_string(digits));
  }
  if (guard < 0) throw std::invalid_argument("guard digits must be non-negative");
}

mpfr_prec_t PrecCtx::bits() const { return digits_to_bits(working_digits()); }

// --- Real ------------------------------------------------------------------

Real::Real() {
  widen_exponent_range();
  mpfr_init2(value_, MPFR_PREC_MIN);
  mpfr_set_zero(value_, 1);
}

Real::Real(mpfr_prec_t bits, Uninitialized) {
  widen_exponent_range();
  mpfr_init2(value_, bits);
}

Real::Real(long value, mpfr_prec_t bits) : Real(bits, Uninitialized{}) { mpfr_set_si(value_, value, MPFR_RNDN); }

Real::Real(long value, const PrecCtx& ctx) : Real(value, ctx.bits()) {}

Real::Real(const Real& other) : Real(other.bits(), Uninitialized{}) { mpfr_set(value_, other.value_, MPFR_RNDN); }

Real::Real(Real&& other) noexcept : Real() { mpfr_swap(value_, other.value_); }

Real& Real::operator=(const Real& other) {
  if (this != &other) {
    mpfr_set_prec(value_, other.bits());
    mpfr_set(value_, other.value_, MPFR_RNDN);
  }
  return *this;
}

Real& Real::operator=(Real&& other) noexcept {
  mpfr_swap(value_, other.value_);
  return *this;
}

Real::~Real() { mpfr_clear(value_); }

int Real::digits() const {
  return static_cast<int>(std::floor(static_cast<double>(bits()) / kLog2Of10 + 1e-9));
}

Real Real::with_bits(mpfr_prec_t bits) const {
  Real r = uninit(bits);
  mpfr_set(r.value_, value_, MPFR_RNDN);
  return r;
}

Real Real::operator-() const {
  Real r = uninit(bits());
  mpfr_neg(r.value_, value_, MPFR_RNDN);
  return r;
}

Real& Real::operator+=(const Real& rhs) { return *this = *this + rhs; }
Real& Real::operator-=(const Real& rhs) { return *this = *this - rhs; }
Real& Real::operator*=(const Real& rhs) { return *this = *this * rhs; }
Real& Real::operator/=(const Real& rhs) { return *this = *this / rhs; }

#define SHALLIT_BINARY_OP(op, fn, fn_si, fn_si_rev)                    \
  Real operator op(const Real& a, const Real& b) {                    \
    Real r = Real::uninit(max_bits(a, b));                            \
    fn(r.value_, a.value_, b.value_, MPFR_RNDN);                      \
    return r;                                                         \
  }                                                                   \
  Real operator op(const Real& a, long b) {                           \
    Real r = Real::uninit(a.bits());                                  \
    fn_si(r.value_, a.value_, b, MPFR_RNDN);                          \
    return r;                                                         \
  }                                                                   \
  Real operator op(long a, const Real& b) {                           \
    Real r = Real::uninit(b.bits());                                  \
    fn_si_rev(r.value_, a, b.value_, MPFR_RNDN);                      \
    return r;                                                         \
  }

namespace {
int add_si_rev(mpfr_ptr r, long a, mpfr_srcptr b, mpfr_rnd_t rnd) { return mpfr_add_si(r, b, a, rnd); }
int mul_si_rev(mpfr_ptr r, long a, mpfr_srcptr b, mpfr_rnd_t rnd) { return mpfr_mul_si(r, b, a, rnd); }
}  // namespace

SHALLIT_BINARY_OP(+, mpfr_add, mpfr_add_si, add_si_rev)
SHALLIT_BINARY_OP(-, mpfr_sub, mpfr_sub_si, mpfr_si_sub)
SHALLIT_BINARY_OP(*, mpfr_mul, mpfr_mul_si, mul_si_rev)
SHALLIT_BINARY_OP(/, mpfr_div, mpfr_div_si, mpfr_si_div)

#undef SHALLIT_BINARY_OP

bool operator==(const Real& a, const Real& b) { return mpfr_equal_p(a.value_, b.value_) != 0; }

std::partial_ordering operator<=>(const Real& a, const Real& b) {
  if (mpfr_unordered_p(a.value_, b.value_)) return std::partial_ordering::unordered;
  const int c = mpfr_cmp(a.value_, b.value_);
  return c < 0 ? std::partial_ordering::less
               : (c > 0 ? std::partial_ordering::greater : std::partial_ordering::equivalent);
}

bool operator==(const Real& a, long b) { return mpfr_cmp_si(a.value_, b) == 0 && !mpfr_nan_p(a.value_); }

std::partial_ordering operator<=>(const Real& a, long b) {
  if (mpfr_nan_p(a.value_)) return std::partial_ordering::unordered;
  const int c = mpfr_cmp_si(a.value_, b);
  return c < 0 ? std::partial_ordering::less
               : (c > 0 ? std::partial_ordering::greater : std::partial_ordering::equivalent);
}

Real sqrt(const Real& x) {
  Real r = Real::uninit(x.bits());
  mpfr_sqrt(r.value_, x.value_, MPFR_RNDN);
  return r;
}

Real abs(const Real& x) {
  Real r = Real::uninit(x.bits());
  mpfr_abs(r.value_, x.value_, MPFR_RNDN);
  return r;
}

Real pow(const Real& x, long exponent) {
  Real r = Real::uninit(x.bits());
  mpfr_pow_si(r.value_, x.value_, exponent, MPFR_RNDN);
  return r;
}

Real pow10(long exponent, mpfr_prec_t bits) {
  Real r = Real::uninit(bits);
  mpfr_set_si(r.value_, 10, MPFR_RNDN);
  mpfr_pow_si(r.value_, r.value_, exponent, MPFR_RNDN);
  return r;
}

Real log10_abs(const Real& x) {
  Real r = Real::uninit(x.bits());
  mpfr_abs(r.value_, x.value_, MPFR_RNDN);
  mpfr_log10(r.value_, r.value_, MPFR_RNDN);
  return r;
}

// --- decimal I/O -------------------------------------------------------------

Real real_from_decimal(std::string_view s, const PrecCtx& ctx) {
  std::size_t i = 0;
  if (i < s.size() && (s[i] == '+' || s[i] == '-')) ++i;
  std::size_t int_digits = 0;
  while (i < s.size() && s[i] >= '0' && s[i] <= '9') {
    ++i;
    ++int_digits;
  }
  std::size_t frac_digits = 0;
  if (i < s.size() && s[i] == '.') {
    ++i;
    while (i < s.size() && s[i] >= '0' && s[i] <= '9') {
      ++i;
      ++frac_digits;
    }
  }
  if (i < s.size()) throw ParseError(s, i + 1);
  if (int_digits + frac_digits == 0) throw ParseError(s, s.size() + 1);

  const std::string text(s);
  Real r = Real::uninit(ctx.bits());
  mpfr_set_str(r.value_, text.c_str(), 10, MPFR_RNDN);
  return r;
}

std::string real_to_decimal(const Real& x, int places) {
  if (places < 0) throw std::invalid_argument("negative number of decimal places");
  if (!x.is_finite()) throw std::domain_error("cannot serialize a non-finite value");
  if (places > x.digits() - 5) {
    throw PrecisionError("requested " + std::to_string(places) +
                         " decimals but the value only carries " + std::to_string(x.digits()) +
                         " digits");
  }

  // |x| * 10^places is formed exactly, then truncated to an integer.
  mpz_t scale;
  mpz_init(scale);
  mpz_ui_pow_ui(scale, 10, static_cast<unsigned long>(places));
  const auto scale_bits = static_cast<mpfr_prec_t>(mpz_sizeinbase(scale, 2));

  mpfr_t scaled;
  mpfr_init2(scaled, x.bits() + scale_bits + 2);
  mpfr_abs(scaled, x.get(), MPFR_RNDN);
  mpfr_mul_z(scaled, scaled, scale, MPFR_RNDZ);

  mpz_t integer;
  mpz_init(integer);
  mpfr_get_z(integer, scaled, MPFR_RNDZ);

  std::vector<char> buffer(mpz_sizeinbase(integer, 10) + 2);
  mpz_get_str(buffer.data(), 10, integer);
  std::string digits(buffer.data());

  const bool negative = x.sign() < 0 && mpz_sgn(integer) != 0;
  mpz_clear(integer);
  mpfr_clear(scaled);
  mpz_clear(scale);

  if (digits.size() <= static_cast<std::size_t>(places)) {
    digits.insert(0, static_cast<std::size_t>(places) + 1 - digits.size(), '0');
  }
  std::string out = negative ? "-" : "";
  out += digits.substr(0, digits.size() - places);
  if (places > 0) {
    out += '.';
    out += digits.substr(digits.size() - places);
  }
  return out;
}

std::string real_to_sci(const Real& x, int significant) {
  if (x.is_zero()) return "0";
  char* raw = nullptr;
  const std::string fmt = "%." + std::to_string(std::max(significant - 1, 0)) + "Re";
  mpfr_asprintf(&raw, fmt.c_str(), x.get());
  std::string out(raw);
  mpfr_free_str(raw);
  return out;
}

Real rho(const PrecCtx& ctx) { return sqrt(Real(3, ctx)) + 2; }

Real golden_ratio(const PrecCtx& ctx) { return (sqrt(Real(5, ctx)) + 1) / 2; }

double log10_rho() { return std::log10(2.0 + std::sqrt(3.0)); }

std::map<std::string, std::string> read_reference_strings(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open reference file " + path.string());
  std::map<std::string, std::string> out;
  std::string line;
  int line_no = 0;
  auto trim = [](std::string s) {
    const auto b = s.find_first_not_of(" \t\r");
    const auto e = s.find_last_not_of(" \t\r");
    return b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
  };
  while (std::getline(in, line)) {
    ++line_no;
    line = trim(line);
    if (line.empty() || line.front() == '#') continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw std::runtime_error(path.string() + ":" + std::to_string(line_no) + ": expected name = value");
    }
    out[trim(line.substr(0, eq))] = trim(line.substr(eq + 1));
  }
  return out;
}

std::map<std::string, Real> load_reference_constants(const std::filesystem::path& path,
                                                     const PrecCtx& ctx) {
  std::map<std::string, Real> out;
  for (const auto& [name, text] : read_reference_strings(path)) {
    out.emplace(name, real_from_decimal(text, ctx));
  }
  return out;
}

}  // namespace shallit
