#include <doctest.h>

#include <cmath>
#include <random>

#include "fxexp/analysis.hpp"

using namespace fxexp;

TEST_CASE("AccuracyBits brackets the error")
{
    CHECK(AccuracyBits::from_error(0.0L).bits == AccuracyBits::kExact);
    CHECK(AccuracyBits::from_error(std::ldexp(1.0L, -15)).bits == 14);
    CHECK(AccuracyBits::from_error(std::ldexp(1.5L, -16)).bits == 15);
    CHECK(AccuracyBits::from_error(1.04e-5L).bits == 16);
    CHECK(AccuracyBits::from_error(0.75L).bits == 0);

    std::mt19937_64 rng(9);
    std::uniform_real_distribution<double> mant(0.5, 1.0);
    for (int i = 0; i < 5000; ++i) {
        const long double e = std::ldexp(static_cast<long double>(mant(rng)), -static_cast<int>(rng() % 60));
        const int b = AccuracyBits::from_error(e).bits;
        REQUIRE(e < std::ldexp(1.0L, -b));
        REQUIRE(std::ldexp(1.0L, -b) <= 2 * e);
    }
}

TEST_CASE("sweep report invariants")
{
    const ExpConfig cfg = ExpConfig::uniform(8, 9, 9, Arithmetic::ones_complement);
    const ErrorReport r = sweep_error(cfg);
    CHECK(r.precision == 8);
    CHECK(r.samples == 16u * 256u + saturation_spot_inputs(8).size());
    CHECK(r.max_ulps == std::ldexp(r.max_abs_error, 8));
    CHECK(r.max_ulps > 0);
    CHECK(r.max_ulps <= 2.0L);
    CHECK(r.max_quantized_ulps >= 1);
    CHECK(r.argmax_raw >= 0);
    for (const std::uint64_t raw : saturation_spot_inputs(8))
        CHECK(raw >= 16u * 256u);
}

TEST_CASE("wide datapaths leave little more than the output truncation")
{
    // Truncating to P bits costs < 1 ulp; what the 30-bit datapath adds on top
    // is a few of its own lsbs, not zero, so the bound is 1 + 4 * 2^(P - M).
    for (const int p : {8, 12, 16}) {
        const ErrorReport r = sweep_error(ExpConfig::uniform(p, 30, 30, Arithmetic::twos_complement));
        CHECK(r.max_ulps <= 1.0L + std::ldexp(4.0L, p - 30));
        CHECK(r.max_quantized_ulps <= 1);
    }
}

TEST_CASE("sweeper rejects a mismatched precision")
{
    const Sweeper s(8);
    CHECK_THROWS_AS((void)s.sweep(ExpConfig::uniform(10, 11, 11, Arithmetic::ones_complement)), FormatError);
    CHECK_THROWS(Sweeper(21));
}

TEST_CASE("sweeps are deterministic")
{
    const ExpConfig cfg = ExpConfig::uniform(12, 13, 14, Arithmetic::twos_complement);
    const ErrorReport a = sweep_error(cfg);
    const ErrorReport b = sweep_error(cfg);
    CHECK(a.max_abs_error == b.max_abs_error);
    CHECK(a.argmax_raw == b.argmax_raw);
}

TEST_CASE("coefficient scan")
{
    const CoeffScan s = coeff_error_scan(16);
    CHECK(s.shift_add.samples == 8192);
    CHECK(std::fabs(s.shift_add.max_abs_error - 1.04e-5L) <= 0.05L * 1.04e-5L);
    CHECK(s.true_cubic.max_abs_error < s.shift_add.max_abs_error);
    // the remainder grows with x, so the worst point is the last grid point
    CHECK(s.shift_add.argmax_raw == 8191);
    CHECK(s.true_cubic.argmax_raw == 8191);

    // first grid point is x = 0, where both polynomials are exact
    const CoeffScan tiny = coeff_error_scan(4);
    CHECK(tiny.shift_add.samples == 2);
    CHECK(tiny.shift_add.argmax_raw == 1);
    CHECK_THROWS(coeff_error_scan(3));
}

TEST_CASE("series length against range")
{
    const int terms[] = {2, 3, 4};
    const int ranges[] = {-8};
    const auto rows = series_range_study(terms, ranges);
    REQUIRE(rows.size() == 3);
    CHECK(rows[0].accuracy.bits == 17);
    CHECK(rows[1].accuracy.bits == 26);
    CHECK(rows[2].accuracy.bits == 36);
    for (const RangeError& r : rows) {
        CHECK(r.range_pow == -8);
        CHECK(r.argmax == (1 << 16) - 1);
    }
    CHECK(series_range_error(4, -8).accuracy == rows[2].accuracy);
    // shorter ranges and more terms are never worse
    const int all_terms[] = {2, 3, 4};
    const int all_ranges[] = {-12, -8, -4};
    const auto grid = series_range_study(all_terms, all_ranges, 10);
    for (std::size_t i = 0; i < grid.size(); ++i) {
        if (i % 3 != 2)
            CHECK(grid[i + 1].max_abs_error < grid[i].max_abs_error);
        if (i + 3 < grid.size())
            CHECK(grid[i].max_abs_error < grid[i + 3].max_abs_error);
    }
    CHECK_THROWS(series_range_error(2, 1));
    CHECK_THROWS(series_range_error(13, -4));
}

TEST_CASE("term precision table layout")
{
    ExpConfig base = ExpConfig::uniform(8, 9, 9, Arithmetic::ones_complement);
    const Sweeper sweeper(8);
    const int wcs[] = {3, 9};
    const int wss[] = {4, 6, 9};
    const auto cells = term_precision_table(base, wcs, wss, sweeper);
    REQUIRE(cells.size() == 6);
    CHECK(cells[0].cubic_width == 3);
    CHECK(cells[0].square_width == 4);
    CHECK(cells[2].square_width == 9);
    CHECK(cells[3].cubic_width == 9);
    for (const TermPrecisionCell& c : cells)
        CHECK(c.accuracy == AccuracyBits::from_error(c.report.max_abs_error));
    base.cubic_width = 9;
    base.square_width = 9;
    CHECK(cells[5].report.max_abs_error == sweeper.sweep(base).max_abs_error);
}

TEST_CASE("multiplier and LUT grid layout")
{
    Fig5Grid grid;
    grid.precisions = {8};
    grid.mult_offsets = {0, 1};
    grid.lut_offsets = {-1, 0};
    const auto rows = mult_lut_sweep(grid);
    REQUIRE(rows.size() == 8);
    CHECK(rows[0].cfg.mult_precision == 8);
    CHECK(rows[0].cfg.lut_precision == 7);
    CHECK(rows[0].cfg.allow_low_precision);
    CHECK(rows[0].cfg.arithmetic == Arithmetic::ones_complement);
    CHECK(rows[1].cfg.arithmetic == Arithmetic::twos_complement);
    CHECK(rows[7].cfg.mult_precision == 9);
    CHECK(rows[7].cfg.lut_precision == 8);
    CHECK_FALSE(rows[7].cfg.allow_low_precision);
    // the low-L rows pay for the coarse LUT
    CHECK(rows[0].report.max_abs_error > rows[2].report.max_abs_error);
}

TEST_CASE("derived table layout and references")
{
    const ExpConfig cfgs[] = {ExpConfig::uniform(10, 11, 11, Arithmetic::ones_complement),
                              ExpConfig::uniform(10, 13, 13, Arithmetic::ones_complement)};
    const auto rows = derived_error_table(cfgs);
    REQUIRE(rows.size() == 6);
    CHECK(rows[0].function == DerivedFunction::gaussian);
    CHECK(rows[1].function == DerivedFunction::sigmoid);
    CHECK(rows[2].function == DerivedFunction::tanh);
    CHECK(rows[0].precision == 11);
    CHECK(rows[3].precision == 13);
    for (const DerivedRow& r : rows)
        CHECK(r.report.max_ulps < 4.0L);

    // the references only differ for the Gaussian, where the argument is rounded
    const auto input_ref = derived_error_table(cfgs, {}, DerivedReference::exact_input);
    CHECK(input_ref[0].report.max_abs_error >= rows[0].report.max_abs_error);
    CHECK(input_ref[1].report.max_abs_error == rows[1].report.max_abs_error);
    CHECK(input_ref[2].report.max_abs_error == rows[2].report.max_abs_error);
    CHECK(to_string(DerivedReference::prepared_argument) == "prepared");

    // sweeping both signs: tanh covers (-8, 8) at P = 10
    CHECK(rows[2].report.samples == 2u * 8u * 1024u - 1u);
    CHECK(rows[1].report.samples == 2u * 16u * 1024u - 1u);
}
