// Unsigned fixed-point values with explicit per-value widths, and the
// bit-level primitives the exponential datapath is assembled from.
//
// Every value carries its own integer/fraction split, so datapaths with
// different word lengths per stage can be expressed directly. Nothing here
// is signed: the datapath only ever works on magnitudes.

#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace fxexp {

enum class RoundingMode { truncate, round_nearest_even };

/// Raised when a value does not fit the requested format.
class OverflowError : public std::overflow_error {
public:
    using std::overflow_error::overflow_error;
};

/// Raised for malformed formats or operands outside an operation's domain.
class FormatError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

inline constexpr int kMaxWidth = 64;

/// raw * 2^-frac_bits, with raw < 2^(int_bits + frac_bits).
struct FixedUQ {
    std::uint64_t raw = 0;
    int int_bits = 1;
    int frac_bits = 0;

    /// Validating constructor; throws FormatError / OverflowError.
    static FixedUQ make(std::uint64_t raw, int int_bits, int frac_bits);

    /// Exactly 1.0 in u1.frac_bits.
    static FixedUQ one(int frac_bits) { return make(std::uint64_t{1} << frac_bits, 1, frac_bits); }

    [[nodiscard]] int width() const { return int_bits + frac_bits; }

    /// Exact for any raw (long double carries a 64-bit significand).
    [[nodiscard]] long double value() const;

    [[nodiscard]] std::string to_string() const;

    friend bool operator==(const FixedUQ&, const FixedUQ&) = default;
};

/// Round a non-negative real into u<int_bits>.<frac_bits>.
FixedUQ quantize(long double x, int int_bits, int frac_bits, RoundingMode mode);

/// Exact product with fractional bits below 2^-out_frac dropped.
/// int_bits of the result is the sum of the operands' int_bits.
FixedUQ mul_trunc(const FixedUQ& a, const FixedUQ& b, int out_frac);

/// floor(raw / 2^k); the format is unchanged.
FixedUQ shr(const FixedUQ& a, int k);

/// Bitwise not of a pure fraction: (1 - a) - 2^-W.
FixedUQ ones_complement(const FixedUQ& a);

/// Exact 1 - a for a <= 1, in u1.<a.frac_bits>.
FixedUQ one_minus(const FixedUQ& a);

/// Exact sum; fraction bits align to the wider operand and one carry bit is added.
FixedUQ add(const FixedUQ& a, const FixedUQ& b);

/// Exact a - b for a >= b; fraction bits align to the wider operand.
FixedUQ sub_exact(const FixedUQ& a, const FixedUQ& b);

/// Move to frac_bits fraction bits. Widening is exact; narrowing rounds per mode.
FixedUQ requantize(const FixedUQ& a, int frac_bits, RoundingMode mode = RoundingMode::truncate);

/// Drop integer bits that are known to be zero. Throws OverflowError otherwise.
FixedUQ narrow(const FixedUQ& a, int int_bits);

namespace detail {

inline std::uint64_t low_mask(int bits)
{
    return bits >= 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << bits) - 1;
}

inline void check_format(int int_bits, int frac_bits)
{
    if (int_bits < 0 || frac_bits < 0 || int_bits + frac_bits < 1 || int_bits + frac_bits > kMaxWidth)
        throw FormatError("invalid fixed-point format u" + std::to_string(int_bits) + "." +
                          std::to_string(frac_bits));
}

}  // namespace detail

inline FixedUQ FixedUQ::make(std::uint64_t raw, int int_bits, int frac_bits)
{
    detail::check_format(int_bits, frac_bits);
    if (raw > detail::low_mask(int_bits + frac_bits))
        throw OverflowError("raw value does not fit u" + std::to_string(int_bits) + "." +
                            std::to_string(frac_bits));
    return FixedUQ{raw, int_bits, frac_bits};
}

inline FixedUQ shr(const FixedUQ& a, int k)
{
    if (k < 0)
        throw FormatError("negative shift");
    return FixedUQ{k >= 64 ? 0 : a.raw >> k, a.int_bits, a.frac_bits};
}

inline FixedUQ ones_complement(const FixedUQ& a)
{
    if (a.int_bits != 0)
        throw FormatError("ones_complement expects a pure fraction");
    return FixedUQ{detail::low_mask(a.frac_bits) - a.raw, 0, a.frac_bits};
}

inline FixedUQ one_minus(const FixedUQ& a)
{
    const std::uint64_t one = std::uint64_t{1} << a.frac_bits;
    if (a.frac_bits >= kMaxWidth || a.raw > one)
        throw FormatError("one_minus expects a value in [0, 1]");
    return FixedUQ{one - a.raw, 1, a.frac_bits};
}

inline FixedUQ mul_trunc(const FixedUQ& a, const FixedUQ& b, int out_frac)
{
    const int ib = a.int_bits + b.int_bits;
    detail::check_format(ib, out_frac);
    const unsigned __int128 product = static_cast<unsigned __int128>(a.raw) * b.raw;
    const int shift = a.frac_bits + b.frac_bits - out_frac;
    unsigned __int128 r = shift >= 0 ? (shift >= 128 ? 0 : product >> shift) : product << -shift;
    if (r > detail::low_mask(ib + out_frac))
        throw OverflowError("product does not fit its format");
    return FixedUQ{static_cast<std::uint64_t>(r), ib, out_frac};
}

inline FixedUQ requantize(const FixedUQ& a, int frac_bits, RoundingMode mode)
{
    detail::check_format(a.int_bits, frac_bits);
    if (frac_bits >= a.frac_bits) {
        const int up = frac_bits - a.frac_bits;
        return FixedUQ{a.raw << up, a.int_bits, frac_bits};
    }
    const int down = a.frac_bits - frac_bits;
    std::uint64_t q = down >= 64 ? 0 : a.raw >> down;
    if (mode == RoundingMode::round_nearest_even && down < 64) {
        const std::uint64_t rem = a.raw & detail::low_mask(down);
        const std::uint64_t half = std::uint64_t{1} << (down - 1);
        if (rem > half || (rem == half && (q & 1)))
            ++q;
    }
    return FixedUQ::make(q, a.int_bits, frac_bits);
}

inline FixedUQ add(const FixedUQ& a, const FixedUQ& b)
{
    const int fb = a.frac_bits > b.frac_bits ? a.frac_bits : b.frac_bits;
    const int ib = (a.int_bits > b.int_bits ? a.int_bits : b.int_bits) + 1;
    detail::check_format(ib, fb);
    const std::uint64_t ra = a.raw << (fb - a.frac_bits);
    const std::uint64_t rb = b.raw << (fb - b.frac_bits);
    return FixedUQ{ra + rb, ib, fb};
}

inline FixedUQ sub_exact(const FixedUQ& a, const FixedUQ& b)
{
    const int fb = a.frac_bits > b.frac_bits ? a.frac_bits : b.frac_bits;
    const int ib = a.int_bits > b.int_bits ? a.int_bits : b.int_bits;
    detail::check_format(ib, fb);
    const std::uint64_t ra = a.raw << (fb - a.frac_bits);
    const std::uint64_t rb = b.raw << (fb - b.frac_bits);
    if (rb > ra)
        throw FormatError("sub_exact would go negative");
    return FixedUQ{ra - rb, ib, fb};
}

inline FixedUQ narrow(const FixedUQ& a, int int_bits)
{
    return FixedUQ::make(a.raw, int_bits, a.frac_bits);
}

}  // namespace fxexp
