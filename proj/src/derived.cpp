#include "fxexp/derived.hpp"

#include <cmath>
#include <limits>

#include <fmt/format.h>

#include "fxexp/oracle.hpp"

namespace fxexp {

namespace {

using u128 = unsigned __int128;

// round-half-even of num / den
u128 round_div(u128 num, u128 den)
{
    u128 q = num / den;
    const u128 r = num % den;
    if (2 * r > den || (2 * r == den && (q & 1)))
        ++q;
    return q;
}

// round-half-even of v * 2^shift
u128 round_shift(u128 v, int shift)
{
    if (shift >= 0) {
        if (shift >= 64 || (v >> (127 - shift)) != 0)
            throw OverflowError("derived result out of range");
        return v << shift;
    }
    if (-shift >= 127)
        return 0;
    return round_div(v, u128{1} << -shift);
}

FixedUQ fit(u128 raw, int frac_bits)
{
    int int_bits = 1;
    while (int_bits + frac_bits < kMaxWidth && (raw >> (int_bits + frac_bits)) != 0)
        ++int_bits;
    if ((raw >> (int_bits + frac_bits)) != 0)
        throw OverflowError("derived result out of range");
    return FixedUQ{static_cast<std::uint64_t>(raw), int_bits, frac_bits};
}

}  // namespace

void DerivedSpec::validate() const
{
    if (!std::isfinite(alpha))
        throw FormatError("ELU alpha must be finite");
    if (!std::isfinite(mu) || !(sigma > 0.0) || !std::isfinite(sigma))
        throw FormatError("Gaussian needs finite mu and sigma > 0");
}

std::string to_string(DerivedFunction function)
{
    switch (function) {
    case DerivedFunction::sigmoid: return "sigmoid";
    case DerivedFunction::tanh: return "tanh";
    case DerivedFunction::gaussian: return "gaussian";
    case DerivedFunction::elu: return "elu";
    }
    return "?";
}

FixedUQ prepare_argument(const DerivedSpec& spec, const SignedFixed& x, int precision)
{
    spec.validate();
    if (x.magnitude.frac_bits != precision)
        throw FormatError(fmt::format("input {} must carry {} fraction bits", x.magnitude.to_string(), precision));
    const int int_bits = kMaxWidth - precision;
    switch (spec.function) {
    case DerivedFunction::sigmoid:
    case DerivedFunction::elu:
        return FixedUQ::make(x.magnitude.raw, int_bits, precision);
    case DerivedFunction::tanh:
        if (x.magnitude.raw >> 63)
            throw OverflowError("tanh argument out of range");
        return FixedUQ::make(x.magnitude.raw << 1, int_bits, precision);
    case DerivedFunction::gaussian: {
        using oracle::Real;
        Real xv = Real::dyadic(x.magnitude.raw, precision);
        if (x.negative)
            xv = -xv;
        const Real d = xv - Real(static_cast<long double>(spec.mu));
        const Real s = Real(static_cast<long double>(spec.sigma));
        const Real arg = d * d / (Real(2.0L) * s * s);
        return oracle::quantize(arg, int_bits, precision, RoundingMode::round_nearest_even);
    }
    }
    throw FormatError("unknown derived function");
}

SignedFixed eval_derived(const DerivedSpec& spec, const SignedFixed& x, const ExpConfig& cfg, const Luts& luts)
{
    const int p = cfg.out_precision;
    const FixedUQ arg = prepare_argument(spec, x, p);

    if (spec.function == DerivedFunction::elu && !x.negative)
        return SignedFixed{false, x.magnitude};

    const ExpTrace trace = exp_neg_trace(arg, cfg, luts);
    const FixedUQ e = spec.tap == ExpTap::multiplier_output ? trace.wide : trace.out;
    const int k = e.frac_bits;
    const u128 one = u128{1} << k;
    const u128 ev = e.raw;

    switch (spec.function) {
    case DerivedFunction::sigmoid: {
        const u128 num = x.negative ? ev : one;
        return SignedFixed{false, fit(round_div(num << p, one + ev), p)};
    }
    case DerivedFunction::tanh: {
        const u128 raw = round_div((one - ev) << p, one + ev);
        return SignedFixed{x.negative && raw != 0, fit(raw, p)};
    }
    case DerivedFunction::gaussian:
        return SignedFixed{false, fit(round_shift(ev, p - k), p)};
    case DerivedFunction::elu: {
        int exponent = 0;
        const double frac = std::frexp(std::fabs(spec.alpha), &exponent);
        const auto mantissa = static_cast<std::uint64_t>(std::ldexp(frac, 53));
        const u128 raw = round_shift(u128{mantissa} * (one - ev), p + exponent - 53 - k);
        return SignedFixed{spec.alpha > 0.0 && raw != 0, fit(raw, p)};
    }
    }
    throw FormatError("unknown derived function");
}

long double reference_derived(const DerivedSpec& spec, long double x)
{
    using oracle::Real;
    const Real xv(x);
    const Real one(1.0L);
    const Real ax = abs(xv);
    switch (spec.function) {
    case DerivedFunction::sigmoid:
        return (one / (one + exp(-xv))).to_long_double();
    case DerivedFunction::tanh: {
        const Real e = exp(-(ax + ax));
        const long double mag = ((one - e) / (one + e)).to_long_double();
        return x < 0 ? -mag : mag;
    }
    case DerivedFunction::gaussian: {
        const Real d = xv - Real(static_cast<long double>(spec.mu));
        const Real s(static_cast<long double>(spec.sigma));
        return exp(-(d * d / (Real(2.0L) * s * s))).to_long_double();
    }
    case DerivedFunction::elu:
        if (x >= 0)
            return x;
        return (Real(static_cast<long double>(spec.alpha)) * (exp(xv) - one)).to_long_double();
    }
    return std::numeric_limits<long double>::quiet_NaN();
}

}  // namespace fxexp
