// Bit-accurate model of the e^-a datapath: operand splitter, two exponential
// LUTs, the shift-add cubic series, and the final multiplier stage.
//
//   a = 16*sat + int4 + frac3/8 + residual*2^-P
//   e^-a ~= ILUT[int4] * FLUT[frac3] * series(residual)
//
// Inputs with sat != 0 are clamped to 16 - 2^-P before the lookup.

#pragma once

#include <array>
#include <cstdint>
#include <stdexcept>
#include <string>

#include "fxexp/fixed.hpp"

namespace fxexp {

class DomainError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

/// How "1 - t" is formed: an exact subtractor, or a bitwise inverter that
/// comes out one lsb low.
enum class Arithmetic { ones_complement, twos_complement };

/// proposed_cubic: 1 - x(1 - x/2 (1 - 5x/16)), Horner form, two multipliers.
/// partzsch_coeffs: 1 - q + q^2/2 - C3 q^3 with C3 = 1365/8192, power form.
enum class SeriesVariant { proposed_cubic, partzsch_coeffs };

struct ExpConfig {
    int out_precision = 16;   ///< P: fraction bits of input and output
    int mult_precision = 17;  ///< M: fraction bits kept by datapath multipliers
    int lut_precision = 17;   ///< L: fraction bits of LUT entries
    Arithmetic arithmetic = Arithmetic::ones_complement;
    int cubic_width = 17;     ///< nominal precision of T_c
    int square_width = 17;    ///< nominal precision of T_s
    SeriesVariant variant = SeriesVariant::proposed_cubic;

    /// Stored T_c / T_s keep this many fraction bits beyond their nominal
    /// width (capped at M). With the defaults, the term-precision study
    /// stays within one bit of the reference matrix; set both to 0 to store
    /// exactly cubic_width / square_width bits.
    int cubic_guard_bits = 1;
    int square_guard_bits = 2;

    /// Allows M < P or L < P. Only meaningful for accuracy studies.
    bool allow_low_precision = false;

    static constexpr int kMaxPrecision = 30;

    /// Every series term at the multiplier width.
    static ExpConfig uniform(int p, int m, int l, Arithmetic arithmetic);

    /// Throws FormatError describing the first violated constraint.
    void validate() const;

    [[nodiscard]] int cubic_storage_bits() const;
    [[nodiscard]] int square_storage_bits() const;

    [[nodiscard]] std::string describe() const;

    friend bool operator==(const ExpConfig&, const ExpConfig&) = default;
};

struct SplitParts {
    std::uint64_t sat = 0;       ///< bits b_N .. b_{P+4}
    unsigned int4 = 0;           ///< bits b_{P+3} .. b_P
    unsigned frac3 = 0;          ///< bits b_{P-1} .. b_{P-3}
    std::uint64_t residual = 0;  ///< bits b_{P-4} .. b_0
    int precision = 0;

    friend bool operator==(const SplitParts&, const SplitParts&) = default;
};

struct Luts {
    std::array<FixedUQ, 16> integer_lut;  ///< e^-i, u1.L
    std::array<FixedUQ, 8> fraction_lut;  ///< e^-(j/8), u1.L
    int precision = 0;
};

/// Arithmetic units exercised by one evaluation.
struct OpCount {
    int multiplications = 0;
    int additions = 0;
    int subtractions = 0;  ///< exact "a - b" (carry chain)
    int inversions = 0;    ///< 1's-complement "1 - t" (inverters only)

    friend bool operator==(const OpCount&, const OpCount&) = default;
};

/// Everything the datapath computes for one input.
struct ExpTrace {
    SplitParts parts;          ///< after saturation clamping
    bool saturated = false;
    FixedUQ lut_product;       ///< ILUT * FLUT, u1.M
    FixedUQ series;            ///< series approximation, u1.M
    FixedUQ wide;              ///< lut_product * series, u1.M
    FixedUQ out;               ///< wide truncated to u1.P
};

/// Throws FormatError when P < 4, a.frac_bits != P or a.int_bits < 4.
SplitParts split_operand(const FixedUQ& a, int precision);

/// LUT entries rounded to nearest-even from a high-precision reference.
Luts build_luts(const ExpConfig& cfg);

/// x: residual at M fraction bits, value < 1/8. Result in u1.M.
FixedUQ series_exp(const FixedUQ& x, const ExpConfig& cfg, OpCount* ops = nullptr);

ExpTrace exp_neg_trace(const FixedUQ& a, const ExpConfig& cfg, const Luts& luts, OpCount* ops = nullptr);

/// e^-a in u1.P.
inline FixedUQ exp_neg(const FixedUQ& a, const ExpConfig& cfg, const Luts& luts, OpCount* ops = nullptr)
{
    return exp_neg_trace(a, cfg, luts, ops).out;
}

std::string to_string(Arithmetic arithmetic);
std::string to_string(SeriesVariant variant);

}  // namespace fxexp
