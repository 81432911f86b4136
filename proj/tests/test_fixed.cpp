#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>
#include <vector>

#include "fxexp/fixed.hpp"

using namespace fxexp;

namespace {

using u128 = unsigned __int128;

FixedUQ frac(std::uint64_t raw, int w) { return FixedUQ::make(raw, 0, w); }

}  // namespace

TEST_CASE("FixedUQ format checks")
{
    CHECK_THROWS_AS(FixedUQ::make(4, 1, 1), OverflowError);
    CHECK_THROWS_AS(FixedUQ::make(0, -1, 4), FormatError);
    CHECK_THROWS_AS(FixedUQ::make(0, 0, 0), FormatError);
    CHECK_THROWS_AS(FixedUQ::make(0, 40, 25), FormatError);
    CHECK_NOTHROW(FixedUQ::make(~std::uint64_t{0}, 32, 32));
    CHECK(FixedUQ::one(16).raw == 65536);
    CHECK(FixedUQ::one(16).value() == 1.0L);
    CHECK(FixedUQ::make(0x5e2d, 1, 16).to_string() == "u1.16:0x5e2d");
}

TEST_CASE("quantize examples")
{
    CHECK(quantize(1.0L, 1, 16, RoundingMode::round_nearest_even).raw == 65536);
    CHECK(quantize(0.375L, 1, 2, RoundingMode::truncate).raw == 1);
    CHECK(quantize(0.375L, 1, 2, RoundingMode::truncate).value() == 0.25L);
    // e^-1 * 2^17 = 48218.65..., far from a tie
    CHECK(quantize(std::exp(-1.0L), 1, 17, RoundingMode::round_nearest_even).raw == 48219);
    CHECK(quantize(std::exp(-1.0L), 1, 17, RoundingMode::truncate).raw == 48218);
}

TEST_CASE("quantize ties go to even")
{
    CHECK(quantize(0.125L, 1, 2, RoundingMode::round_nearest_even).raw == 0);
    CHECK(quantize(0.375L, 1, 2, RoundingMode::round_nearest_even).raw == 2);
    CHECK(quantize(0.625L, 1, 2, RoundingMode::round_nearest_even).raw == 2);
}

TEST_CASE("quantize errors")
{
    CHECK_THROWS_AS(quantize(2.0L, 1, 8, RoundingMode::truncate), OverflowError);
    CHECK_THROWS_AS(quantize(1.9999L, 1, 2, RoundingMode::round_nearest_even), OverflowError);
    CHECK_THROWS_AS(quantize(-0.5L, 1, 8, RoundingMode::truncate), FormatError);
    CHECK_THROWS_AS(quantize(NAN, 1, 8, RoundingMode::truncate), FormatError);
}

TEST_CASE("quantize is monotone and within one lsb")
{
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> dist(0.0, 3.99);
    for (const RoundingMode mode : {RoundingMode::truncate, RoundingMode::round_nearest_even}) {
        for (const int f : {0, 1, 5, 13, 30}) {
            std::vector<long double> xs(2000);
            for (auto& x : xs)
                x = dist(rng);
            std::sort(xs.begin(), xs.end());
            std::uint64_t prev = 0;
            for (const long double x : xs) {
                const FixedUQ q = quantize(x, 3, f, mode);
                CHECK(q.raw >= prev);
                CHECK(std::fabs(q.value() - x) < std::ldexp(1.0L, -f));
                if (mode == RoundingMode::truncate)
                    CHECK(q.value() <= x);
                prev = q.raw;
            }
        }
    }
}

TEST_CASE("mul_trunc examples")
{
    const FixedUQ r = mul_trunc(FixedUQ::make(3, 0, 2), FixedUQ::make(1, 0, 1), 2);
    CHECK(r.value() == 0.25L);
    CHECK(r.frac_bits == 2);
    CHECK(r.int_bits == 0);

    const FixedUQ x = FixedUQ::make(0x1234, 1, 14);
    const FixedUQ id = mul_trunc(x, FixedUQ::one(9), 14);
    CHECK(id.raw == x.raw);
    CHECK(id.int_bits == 2);

    const FixedUQ exact = mul_trunc(frac(0b101, 3), frac(0b011, 3), 6);
    CHECK(exact.raw == 0b001111);
}

TEST_CASE("mul_trunc never exceeds the exact product and loses less than one lsb")
{
    std::mt19937_64 rng(11);
    for (int i = 0; i < 20000; ++i) {
        const int fa = static_cast<int>(rng() % 31);
        const int fb = static_cast<int>(rng() % 31);
        const int out = static_cast<int>(rng() % 40);
        const FixedUQ a = FixedUQ::make(rng() & ((std::uint64_t{1} << (fa + 1)) - 1), 1, fa);
        const FixedUQ b = FixedUQ::make(rng() & ((std::uint64_t{1} << (fb + 1)) - 1), 1, fb);
        const FixedUQ r = mul_trunc(a, b, out);
        // compare at 2^-(fa+fb+out) so both sides are integers
        const u128 exact = (u128{a.raw} * b.raw) << out;
        const u128 got = u128{r.raw} << (fa + fb);
        CHECK(got <= exact);
        CHECK(exact - got < (u128{1} << (fa + fb)));
        CHECK(r.int_bits == 2);
    }
}

TEST_CASE("shr examples and floor property")
{
    CHECK(shr(frac(0b1100, 4), 2).raw == 0b0011);
    CHECK(shr(frac(0b0011, 4), 2).raw == 0);
    const FixedUQ x = FixedUQ::make(0xabcd, 1, 16);
    CHECK(shr(x, 0) == x);
    CHECK(shr(x, 3).frac_bits == 16);
    std::mt19937_64 rng(3);
    for (int i = 0; i < 1000; ++i) {
        const std::uint64_t raw = rng() >> 1;
        const int k = static_cast<int>(rng() % 64);
        CHECK(shr(FixedUQ::make(raw, 31, 32), k).raw == raw / (std::uint64_t{1} << k));
    }
}

TEST_CASE("ones_complement examples")
{
    CHECK(ones_complement(frac(0b0101, 4)).raw == 0b1010);
    CHECK(ones_complement(frac(0, 8)).raw == 255);
    CHECK(ones_complement(frac(0, 8)).value() == 1.0L - std::ldexp(1.0L, -8));
    CHECK_THROWS_AS(ones_complement(FixedUQ::make(1, 1, 4)), FormatError);
}

TEST_CASE("one_minus examples")
{
    CHECK(one_minus(frac(0, 12)).value() == 1.0L);
    const FixedUQ r = one_minus(frac(0b0101, 4));
    CHECK(r.raw == 0b1011);
    CHECK(r.value() == 11.0L / 16.0L);
    CHECK(r.int_bits == 1);
    CHECK(one_minus(FixedUQ::one(10)).raw == 0);
    CHECK_THROWS(one_minus(FixedUQ::make(1025, 1, 10)));
}

TEST_CASE("ones_complement equals one_minus minus one lsb, exhaustive for W <= 12")
{
    for (int w = 1; w <= 12; ++w) {
        for (std::uint64_t raw = 0; raw < (std::uint64_t{1} << w); ++raw) {
            const FixedUQ a = frac(raw, w);
            const FixedUQ inv = ones_complement(a);
            const FixedUQ exact = one_minus(a);
            REQUIRE(inv.frac_bits == w);
            REQUIRE(inv.raw + 1 == exact.raw);
            REQUIRE(ones_complement(inv) == a);
        }
    }
}

TEST_CASE("add and sub_exact are exact")
{
    const FixedUQ a = FixedUQ::make(0b0111, 0, 4);  // 7/16
    const FixedUQ b = FixedUQ::make(0b11, 0, 2);    // 3/4
    const FixedUQ s = add(a, b);
    CHECK(s.value() == 19.0L / 16.0L);
    CHECK(s.frac_bits == 4);
    CHECK(s.int_bits == 1);
    CHECK(sub_exact(b, a).value() == 5.0L / 16.0L);
    CHECK_THROWS_AS(sub_exact(a, b), FormatError);
}

TEST_CASE("requantize and narrow")
{
    const FixedUQ x = FixedUQ::make(0b1011, 1, 4);  // 0.6875
    CHECK(requantize(x, 6).raw == 0b101100);
    CHECK(requantize(x, 2).raw == 0b10);
    CHECK(requantize(x, 2, RoundingMode::round_nearest_even).raw == 0b11);
    CHECK(requantize(FixedUQ::make(0b1010, 1, 4), 2, RoundingMode::round_nearest_even).raw == 0b10);
    CHECK(requantize(FixedUQ::make(0b1110, 1, 4), 2, RoundingMode::round_nearest_even).raw == 0b100);
    CHECK(narrow(FixedUQ::make(5, 3, 2), 2).int_bits == 2);
    CHECK_THROWS_AS(narrow(FixedUQ::make(17, 3, 2), 2), OverflowError);
}
