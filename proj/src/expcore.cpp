#include "fxexp/expcore.hpp"

#include <algorithm>

#include <fmt/format.h>

#include "fxexp/oracle.hpp"

namespace fxexp {

namespace {

// C3 = 0.1666259765625 = 0.0010101010101b
const FixedUQ kPartzschC3{1365, 0, 13};

FixedUQ as_u1(const FixedUQ& v) { return FixedUQ::make(v.raw, 1, v.frac_bits); }

// 1 - t for a pure fraction t, in the configured arithmetic.
FixedUQ from_one(const FixedUQ& t, Arithmetic arithmetic, OpCount* ops)
{
    if (arithmetic == Arithmetic::ones_complement) {
        if (ops)
            ++ops->inversions;
        return as_u1(ones_complement(t));
    }
    if (ops)
        ++ops->subtractions;
    return one_minus(t);
}

FixedUQ proposed_series(const FixedUQ& x, const ExpConfig& cfg, OpCount* ops)
{
    const int m = cfg.mult_precision;
    const int wc = cfg.cubic_storage_bits();
    const int ws = cfg.square_storage_bits();

    // T_c = 1 - (x>>2 + x>>4)
    const FixedUQ u = narrow(add(shr(x, 2), shr(x, 4)), 0);
    if (ops)
        ++ops->additions;
    const FixedUQ tc = requantize(from_one(u, cfg.arithmetic, ops), wc);

    // T_s = 1 - (x>>1) * T_c, product kept at full width until T_s is stored
    const FixedUQ v = narrow(mul_trunc(shr(x, 1), tc, m + wc), 0);
    if (ops)
        ++ops->multiplications;
    const FixedUQ ts = requantize(from_one(v, cfg.arithmetic, ops), ws);

    // T_l = 1 - x * T_s
    const FixedUQ w = narrow(mul_trunc(x, ts, m), 0);
    if (ops)
        ++ops->multiplications;
    return from_one(w, cfg.arithmetic, ops);
}

FixedUQ partzsch_series(const FixedUQ& q, const ExpConfig& cfg, OpCount* ops)
{
    const int m = cfg.mult_precision;

    const FixedUQ q2 = requantize(narrow(mul_trunc(q, q, m), 0), cfg.square_storage_bits());
    const FixedUQ q3 = narrow(mul_trunc(q2, q, m), 0);
    const FixedUQ c3q3 = requantize(narrow(mul_trunc(kPartzschC3, q3, m), 0), cfg.cubic_storage_bits());
    if (ops)
        ops->multiplications += 3;

    // q^2/2 is wiring: one more fraction bit, same raw
    const FixedUQ half_q2{q2.raw, 0, q2.frac_bits + 1};

    // d = q - q^2/2 + C3 q^3, all terms non-negative at every step since q < 1/8
    const FixedUQ d = narrow(add(sub_exact(q, half_q2), c3q3), 0);
    if (ops) {
        ++ops->subtractions;
        ++ops->additions;
    }
    return requantize(from_one(d, cfg.arithmetic, ops), m);
}

}  // namespace

ExpConfig ExpConfig::uniform(int p, int m, int l, Arithmetic arithmetic)
{
    ExpConfig cfg;
    cfg.out_precision = p;
    cfg.mult_precision = m;
    cfg.lut_precision = l;
    cfg.arithmetic = arithmetic;
    cfg.cubic_width = m;
    cfg.square_width = m;
    return cfg;
}

void ExpConfig::validate() const
{
    const auto fail = [](const std::string& what) { throw FormatError("invalid ExpConfig: " + what); };
    if (out_precision < 4)
        fail(fmt::format("P = {} but the splitter needs P >= 4", out_precision));
    if (out_precision > kMaxPrecision || mult_precision > kMaxPrecision || lut_precision > kMaxPrecision)
        fail(fmt::format("precisions are limited to {} bits", kMaxPrecision));
    if (mult_precision < 4 || lut_precision < 1)
        fail("M must be >= 4 and L >= 1");
    if (!allow_low_precision && (mult_precision < out_precision || lut_precision < out_precision))
        fail(fmt::format("M = {} and L = {} must be >= P = {}", mult_precision, lut_precision, out_precision));
    if (cubic_width < 1 || cubic_width > mult_precision)
        fail(fmt::format("cubic width {} outside [1, M = {}]", cubic_width, mult_precision));
    if (square_width < 1 || square_width > mult_precision)
        fail(fmt::format("square width {} outside [1, M = {}]", square_width, mult_precision));
    if (cubic_guard_bits < 0 || square_guard_bits < 0)
        fail("guard bits must be non-negative");
}

int ExpConfig::cubic_storage_bits() const { return std::min(cubic_width + cubic_guard_bits, mult_precision); }

int ExpConfig::square_storage_bits() const { return std::min(square_width + square_guard_bits, mult_precision); }

std::string ExpConfig::describe() const
{
    return fmt::format("P={} M={} L={} {} {} Wc={} Ws={}", out_precision, mult_precision, lut_precision,
                       to_string(arithmetic), to_string(variant), cubic_width, square_width);
}

std::string to_string(Arithmetic arithmetic)
{
    return arithmetic == Arithmetic::ones_complement ? "ones" : "twos";
}

std::string to_string(SeriesVariant variant)
{
    return variant == SeriesVariant::proposed_cubic ? "proposed" : "partzsch";
}

SplitParts split_operand(const FixedUQ& a, int precision)
{
    if (precision < 4)
        throw FormatError(fmt::format("precision {} too small for the operand splitter", precision));
    if (a.frac_bits != precision || a.int_bits < 4)
        throw FormatError(fmt::format("operand {} does not match u4+.{}", a.to_string(), precision));
    SplitParts parts;
    parts.precision = precision;
    parts.residual = a.raw & detail::low_mask(precision - 3);
    parts.frac3 = static_cast<unsigned>((a.raw >> (precision - 3)) & 7);
    parts.int4 = static_cast<unsigned>((a.raw >> precision) & 15);
    parts.sat = precision + 4 >= 64 ? 0 : a.raw >> (precision + 4);
    return parts;
}

Luts build_luts(const ExpConfig& cfg)
{
    cfg.validate();
    Luts luts;
    luts.precision = cfg.lut_precision;
    for (unsigned i = 0; i < 16; ++i)
        luts.integer_lut[i] = oracle::quantize(oracle::exp_neg(oracle::Real::dyadic(i, 0)), 1, cfg.lut_precision,
                                               RoundingMode::round_nearest_even);
    for (unsigned j = 0; j < 8; ++j)
        luts.fraction_lut[j] = oracle::quantize(oracle::exp_neg(oracle::Real::dyadic(j, 3)), 1, cfg.lut_precision,
                                                RoundingMode::round_nearest_even);
    return luts;
}

FixedUQ series_exp(const FixedUQ& x, const ExpConfig& cfg, OpCount* ops)
{
    if (x.frac_bits != cfg.mult_precision || x.int_bits != 0)
        throw FormatError(fmt::format("series input {} must be u0.{}", x.to_string(), cfg.mult_precision));
    if (x.raw >= (std::uint64_t{1} << (x.frac_bits - 3)))
        throw DomainError("series input must be below 1/8");
    return cfg.variant == SeriesVariant::proposed_cubic ? proposed_series(x, cfg, ops) : partzsch_series(x, cfg, ops);
}

ExpTrace exp_neg_trace(const FixedUQ& a, const ExpConfig& cfg, const Luts& luts, OpCount* ops)
{
    const int p = cfg.out_precision;
    const int m = cfg.mult_precision;
    if (luts.precision != cfg.lut_precision)
        throw FormatError("LUTs were built for a different LUT precision");

    ExpTrace t;
    t.parts = split_operand(a, p);
    if (t.parts.sat != 0) {
        t.saturated = true;
        t.parts.sat = 0;
        t.parts.int4 = 15;
        t.parts.frac3 = 7;
        t.parts.residual = detail::low_mask(p - 3);
    }

    t.lut_product = narrow(mul_trunc(luts.integer_lut[t.parts.int4], luts.fraction_lut[t.parts.frac3], m), 1);
    if (ops)
        ++ops->multiplications;

    // residual is left-aligned into the M-bit series datapath
    const FixedUQ x = requantize(FixedUQ{t.parts.residual, 0, p}, m);
    t.series = series_exp(x, cfg, ops);

    t.wide = narrow(mul_trunc(t.lut_product, t.series, m), 1);
    if (ops)
        ++ops->multiplications;
    t.out = requantize(t.wide, p);
    return t;
}

}  // namespace fxexp
