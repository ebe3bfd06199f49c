#include <catch2/catch.hpp>

#include "spacetime/bigint.hpp"
#include "spacetime/rng.hpp"

using spacetime::CountInt;
using spacetime::Rational;

TEST_CASE("small arithmetic round trips through u64") {
  CHECK(CountInt(0).to_decimal() == "0");
  CHECK(CountInt(1234567890123456789ull).to_decimal() == "1234567890123456789");
  CHECK((CountInt(7) * CountInt(6)).to_u64() == 42);
  CHECK((CountInt(100) - CountInt(58)).to_u64() == 42);
  CHECK((CountInt(1) + CountInt(0xffffffffull)).to_u64() == 0x100000000ull);
}

TEST_CASE("decimal parse is inverse of print") {
  const char* s = "987654321098765432109876543210987654321";
  CHECK(CountInt::from_decimal(s).to_decimal() == s);
}

TEST_CASE("divmod agrees with u64 arithmetic on random operands") {
  spacetime::Rng rng(42);
  for (int iter = 0; iter < 2000; ++iter) {
    const std::uint64_t a = rng.next() >> (rng.below(40));
    const std::uint64_t b = (rng.next() >> (rng.below(50))) | 1;
    auto [q, r] = CountInt::divmod(CountInt(a), CountInt(b));
    CHECK(q.to_u64() == a / b);
    CHECK(r.to_u64() == a % b);
  }
}

TEST_CASE("divmod reconstructs large random operands") {
  spacetime::Rng rng(7);
  for (int iter = 0; iter < 200; ++iter) {
    CountInt a(1), b(1);
    const int wa = 1 + static_cast<int>(rng.below(8));
    const int wb = 1 + static_cast<int>(rng.below(static_cast<std::uint64_t>(wa)));
    for (int i = 0; i < wa; ++i) a = a * CountInt(std::uint64_t{1} << 32) + CountInt(static_cast<std::uint32_t>(rng.next()));
    for (int i = 0; i < wb; ++i) b = b * CountInt(std::uint64_t{1} << 32) + CountInt(static_cast<std::uint32_t>(rng.next()));
    auto [q, r] = CountInt::divmod(a, b);
    CHECK(q * b + r == a);
    CHECK(r < b);
  }
}

TEST_CASE("pow and gcd") {
  CHECK(CountInt(7).pow(4).to_u64() == 2401);
  CHECK(CountInt::gcd(CountInt(49), CountInt(82)).to_u64() == 1);
  CHECK(CountInt::gcd(CountInt(48), CountInt(18)).to_u64() == 6);
}

TEST_CASE("log2 and bit_length track known values") {
  CHECK(CountInt(1).bit_length() == 1);
  CHECK(CountInt(255).bit_length() == 8);
  CHECK(CountInt(256).bit_length() == 9);
  CountInt big = CountInt(1);
  for (int i = 0; i < 10; ++i) big = big * CountInt(std::uint64_t{1} << 50);
  CHECK(big.log2() == Approx(500.0).margin(1e-9));
}

TEST_CASE("rationals reduce and compare") {
  Rational r(CountInt(49), CountInt(82));
  CHECK(r.num().to_u64() == 49);
  Rational half(CountInt(41), CountInt(82));
  CHECK(half.num().to_u64() == 1);
  CHECK(half.den().to_u64() == 2);
  CHECK(half < r);
  CHECK(r.to_double() == Approx(49.0 / 82.0));
}
