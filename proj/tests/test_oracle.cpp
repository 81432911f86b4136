#include <doctest.h>

#include <cmath>
#include <random>

#include "fxexp/oracle.hpp"

using namespace fxexp;
using oracle::Real;

namespace {

// e^-x by its alternating series, built only from +, -, *, / on Real.
Real series_exp_neg(const Real& x)
{
    Real sum(1.0L);
    Real term(1.0L);
    for (int k = 1; k < 80; ++k) {
        term = -(term * x) / Real(static_cast<long double>(k));
        sum = sum + term;
    }
    return sum;
}

bool close(const Real& a, const Real& b, int bits)
{
    const Real tol = Real::dyadic(1, bits);
    return abs(a - b) < tol;
}

}  // namespace

TEST_CASE("exp_neg identities")
{
    CHECK(oracle::exp_neg(Real(0.0L)).to_long_double() == 1.0L);
    CHECK(close(oracle::exp_neg(Real::ln2()), Real(0.5L), 150));
    CHECK(close(oracle::exp_neg(Real::ln2() * Real(3.0L)), Real(0.125L), 150));
    CHECK_THROWS(oracle::exp_neg(Real(-1.0L)));
}

TEST_CASE("exp_neg(1) against independent routes")
{
    const Real e1 = oracle::exp_neg(Real(1.0L));
    CHECK(close(e1, series_exp_neg(Real(1.0L)), 150));
    CHECK(std::fabs(e1.to_long_double() - std::exp(-1.0L)) < 1e-18L);
    CHECK(std::fabs(e1.to_long_double() - 0.36787944117144233L) < 1e-17L);
}

TEST_CASE("exp_neg agrees with the series on random dyadic arguments")
{
    std::mt19937_64 rng(5);
    for (int i = 0; i < 200; ++i) {
        const std::uint64_t raw = rng() % (std::uint64_t{4} << 16);
        const Real x = Real::dyadic(raw, 16);
        CHECK(close(oracle::exp_neg(x), series_exp_neg(x), 140));
        CHECK(std::fabs(oracle::exp_neg(raw, 16) - std::exp(-std::ldexp(static_cast<long double>(raw), -16))) <
              1e-18L);
    }
}

TEST_CASE("Real arithmetic and dyadic construction")
{
    CHECK(Real::dyadic(3, 2).to_long_double() == 0.75L);
    CHECK((Real(1.5L) + Real(2.25L)).to_long_double() == 3.75L);
    CHECK((Real(1.5L) * Real(2.0L)).to_long_double() == 3.0L);
    CHECK((Real(1.0L) - Real(2.0L)).is_negative());
    CHECK(Real(1.0L) < Real(2.0L));
    const Real a(7.0L);
    Real b = a;
    Real c = std::move(b);
    CHECK(c.to_long_double() == 7.0L);
}

TEST_CASE("oracle quantize rounds once")
{
    CHECK(oracle::quantize(Real(1.5L), 2, 0, RoundingMode::round_nearest_even).raw == 2);
    CHECK(oracle::quantize(Real(2.5L), 2, 0, RoundingMode::round_nearest_even).raw == 2);
    CHECK(oracle::quantize(Real(2.5L), 2, 0, RoundingMode::truncate).raw == 2);
    CHECK(oracle::quantize(Real(2.75L), 2, 0, RoundingMode::truncate).raw == 2);
    // just above a tie: a single correct rounding goes up
    const Real above = Real(0.5L) + Real::dyadic(1, 120);
    CHECK(oracle::quantize(above, 1, 0, RoundingMode::round_nearest_even).raw == 1);
    CHECK_THROWS_AS(oracle::quantize(Real(4.0L), 2, 3, RoundingMode::truncate), OverflowError);
    CHECK_THROWS(oracle::quantize(Real(-1.0L), 2, 3, RoundingMode::truncate));
}

TEST_CASE("ExpTable matches exp_neg")
{
    const oracle::ExpTable table(10, 2);
    CHECK(table.size() == 16u * 1024u);
    CHECK(table.precision() == 10);
    CHECK(table[0] == 1.0L);
    for (std::uint64_t k = 0; k < table.size(); k += 37)
        CHECK(std::fabs(table[k] - oracle::exp_neg(k, 10)) <= 1e-19L * table[k]);
    CHECK_THROWS(oracle::ExpTable(3));
    CHECK_THROWS(oracle::ExpTable(21));
}

TEST_CASE("ExpTable does not depend on the thread count")
{
    const oracle::ExpTable a(8, 1);
    const oracle::ExpTable b(8, 3);
    for (std::uint64_t k = 0; k < a.size(); ++k)
        REQUIRE(a[k] == b[k]);
}
