#include "fxexp/fixed.hpp"

#include <cmath>

#include <fmt/format.h>

namespace fxexp {

long double FixedUQ::value() const
{
    return std::ldexp(static_cast<long double>(raw), -frac_bits);
}

std::string FixedUQ::to_string() const
{
    return fmt::format("u{}.{}:0x{:x}", int_bits, frac_bits, raw);
}

FixedUQ quantize(long double x, int int_bits, int frac_bits, RoundingMode mode)
{
    detail::check_format(int_bits, frac_bits);
    if (!(x >= 0.0L) || !std::isfinite(x))
        throw FormatError("quantize expects a finite non-negative value");
    const long double scaled = std::ldexp(x, frac_bits);
    long double r = mode == RoundingMode::truncate ? std::trunc(scaled) : std::nearbyint(scaled);
    // nearbyint follows the current rounding mode, which is round-to-nearest-even by default.
    if (r >= std::ldexp(1.0L, int_bits + frac_bits))
        throw OverflowError(fmt::format("{} does not fit u{}.{}", static_cast<double>(x), int_bits, frac_bits));
    return FixedUQ{static_cast<std::uint64_t>(r), int_bits, frac_bits};
}

}  // namespace fxexp
