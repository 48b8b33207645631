#include "doctest.h"
#include "shallit/numerics.hpp"

using namespace shallit;

namespace {

std::size_t parse_error_position(const char* text) {
  try {
    real_from_decimal(text, PrecCtx(50));
  } catch (const ParseError& e) {
    return e.position();
  }
  return 0;
}

}  // namespace

TEST_CASE("precision context") {
  CHECK_THROWS_AS(PrecCtx(15), std::invalid_argument);
  const PrecCtx ctx(50);
  CHECK(ctx.working_digits() == 60);
  CHECK(ctx.bits() == digits_to_bits(60));
  CHECK(Real(1, ctx).digits() >= 60);
  CHECK(ctx.widened(5).digits() == 55);
  CHECK(ctx.widened(5).guard() == 10);
}

TEST_CASE("decimal parsing") {
  const PrecCtx ctx(50);
  CHECK(real_from_decimal("1.0", ctx) == 1L);
  CHECK(real_from_decimal("-2.5", ctx) == Real(-5, ctx) / 2);
  CHECK(real_from_decimal("+.5", ctx) == Real(1, ctx) / 2);
  CHECK(real_from_decimal("7.", ctx) == 7L);

  CHECK(parse_error_position("2.5e") == 4);
  CHECK(parse_error_position("1e5") == 2);
  CHECK(parse_error_position("1.2.3") == 4);
  CHECK(parse_error_position("") == 1);
  CHECK(parse_error_position("-") == 2);
  CHECK(parse_error_position(" 1") == 1);
}

TEST_CASE("published constants parse to full length") {
  const auto refs = read_reference_strings(SHALLIT_REFERENCE_FILE);
  const PrecCtx ctx(410);
  const Real c = real_from_decimal(refs.at("C"), ctx);
  const std::string& text = refs.at("C");
  const int decimals = static_cast<int>(text.size() - text.find('.') - 1);
  CHECK(decimals == 401);
  CHECK(real_to_decimal(c, decimals) == text);
  const Real p0 = real_from_decimal(refs.at("p0_star"), ctx);
  CHECK(real_to_decimal(p0, 400) == refs.at("p0_star"));
}

TEST_CASE("truncating serializer") {
  const PrecCtx ctx(50);
  CHECK(real_to_decimal(rho(ctx), 10) == "3.7320508075");
  CHECK(real_to_decimal(Real(1, ctx), 3) == "1.000");
  CHECK(real_to_decimal(golden_ratio(ctx), 10) == "1.6180339887");
  CHECK(real_to_decimal(Real(2, ctx) / 3, 5) == "0.66666");
  CHECK(real_to_decimal(Real(-2, ctx) / 3, 5) == "-0.66666");
  CHECK(real_to_decimal(Real(-1, ctx) / 1000000, 3) == "0.000");
  CHECK(real_to_decimal(Real(12, ctx), 0) == "12");
  CHECK_THROWS_AS(real_to_decimal(Real(1, ctx), 56), PrecisionError);
}

TEST_CASE("decimal round trip") {
  const PrecCtx ctx(60);
  const int d = Real(1, ctx).digits();
  for (long k : {3L, 7L, 11L, 12345L}) {
    const Real x = sqrt(Real(k, ctx)) / 7;
    const Real back = real_from_decimal(real_to_decimal(x, d - 6), ctx);
    CHECK(abs(back - x) < pow10(7 - d, ctx.bits()) * abs(x));
  }
}

TEST_CASE("rho and golden ratio") {
  const PrecCtx ctx(30);
  const Real r = rho(ctx);
  CHECK(real_to_decimal(r, 20) == "3.73205080756887729352");
  const Real eps = pow10(-ctx.working_digits() + 1, ctx.bits());
  CHECK(abs(r * (2 - sqrt(Real(3, ctx))) - 1) < eps);
  CHECK(abs(r * (4 - r) - 1) < eps);
  const Real phi = golden_ratio(ctx);
  CHECK(abs(phi * phi - phi - 1) < eps);
}

TEST_CASE("mixed precision takes the wider operand") {
  const Real a(1, PrecCtx(20));
  const Real b(1, PrecCtx(200));
  CHECK((a + b).bits() == b.bits());
  CHECK((a * 3).bits() == a.bits());
}

TEST_CASE("orbit-scale exponents do not overflow") {
  const PrecCtx ctx(20);
  Real x = Real(3, ctx) / 2;
  for (int i = 0; i < 40; ++i) x = x * x;
  CHECK(x.is_finite());
  CHECK(log10_abs(x).to_double() > 1e11);
}
