// Exhaustive error sweeps and the generators behind every accuracy dataset:
// coefficient scan, terms-vs-range study, term-precision matrix,
// multiplier/LUT grid, and the derived-function table.

#pragma once

#include <cstdint>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "fxexp/derived.hpp"
#include "fxexp/expcore.hpp"
#include "fxexp/oracle.hpp"

namespace fxexp {

struct ErrorReport {
    long double max_abs_error = 0.0L;  ///< against the exact reference
    long double max_ulps = 0.0L;       ///< max_abs_error * 2^P
    std::int64_t argmax_raw = 0;       ///< worst input, raw at P fraction bits (signed for derived sweeps)
    std::uint64_t samples = 0;
    std::uint64_t max_quantized_ulps = 0;  ///< against the reference rounded to P bits
    std::int64_t argmax_quantized_raw = 0;
    int precision = 0;
};

/// Largest b with max_abs_error < 2^-b, so 2^-b <= 2 * max_abs_error.
/// This is floor(-log2 e) except when e is an exact power of two.
struct AccuracyBits {
    static constexpr int kExact = 64;  ///< reported for a zero error
    int bits = 0;

    static AccuracyBits from_error(long double max_abs_error);

    friend bool operator==(const AccuracyBits&, const AccuracyBits&) = default;
};

/// What a derived-function result is compared against.
enum class DerivedReference {
    prepared_argument,  ///< exact function of the rounded exp argument the datapath received
    exact_input,        ///< exact function of x itself, argument rounding included in the error
};

std::string to_string(DerivedReference reference);

struct SweepOptions {
    int threads = 0;      ///< <= 0: OpenMP default
    bool serial = false;  ///< use the serial reference kernels
};

/// Oracle table for one precision, reused across many configurations.
class Sweeper {
public:
    explicit Sweeper(int precision, SweepOptions options = {});

    /// exp_neg over every raw input in [0, 16) plus saturation spot checks above 16.
    [[nodiscard]] ErrorReport sweep(const ExpConfig& cfg) const;

    /// eval_derived over every P-bit input whose exp argument lies in [0, 16).
    /// Both signs are swept for sigmoid, tanh and elu. The two references only
    /// differ for the Gaussian, whose argument (x-mu)^2/(2 sigma^2) is rounded.
    [[nodiscard]] ErrorReport derived(const DerivedSpec& spec, const ExpConfig& cfg,
                                      DerivedReference reference = DerivedReference::prepared_argument) const;

    [[nodiscard]] int precision() const { return precision_; }
    [[nodiscard]] const oracle::ExpTable& table() const { return *table_; }
    [[nodiscard]] const SweepOptions& options() const { return options_; }

private:
    int precision_;
    SweepOptions options_;
    std::shared_ptr<const oracle::ExpTable> table_;
};

ErrorReport sweep_error(const ExpConfig& cfg, SweepOptions options = {});

/// Raw inputs >= 16 checked by every sweep.
std::vector<std::uint64_t> saturation_spot_inputs(int precision);

struct CoeffScan {
    ErrorReport shift_add;   ///< 1 - x(1 - x/2 (1 - 2.5x/8))
    ErrorReport true_cubic;  ///< 1 - x(1 - x/2 (1 - x/3))
};

/// Both cubic polynomials against e^-x over the 2^(P-3) residual grid points in [0, 1/8).
CoeffScan coeff_error_scan(int precision, SweepOptions options = {});

struct RangeError {
    int terms = 0;      ///< 2 = linear, 3 = quadratic, 4 = cubic
    int range_pow = 0;  ///< grid covers [0, 2^range_pow)
    long double max_abs_error = 0.0L;
    std::int64_t argmax = 0;  ///< grid index
    AccuracyBits accuracy;
};

/// Truncated Taylor series of e^-x with exact coefficients, on 2^grid_bits
/// evenly spaced points. One row per (range_pow, terms), range_pow-major.
std::vector<RangeError> series_range_study(std::span<const int> terms, std::span<const int> range_pows,
                                           int grid_bits = 16, SweepOptions options = {});

RangeError series_range_error(int terms, int range_pow, int grid_bits = 16);

struct TermPrecisionCell {
    int cubic_width = 0;
    int square_width = 0;
    ErrorReport report;
    AccuracyBits accuracy;
};

/// Row-major over cubic_widths, then square_widths.
std::vector<TermPrecisionCell> term_precision_table(const ExpConfig& base, std::span<const int> cubic_widths,
                                                    std::span<const int> square_widths, const Sweeper& sweeper);

struct Fig5Grid {
    std::vector<int> precisions{8, 12, 16};
    std::vector<int> mult_offsets{0, 1, 2, 3, 4};  ///< M = P + offset
    std::vector<int> lut_offsets{0, 1, 2, 3};      ///< L = P + offset
    std::vector<Arithmetic> modes{Arithmetic::ones_complement, Arithmetic::twos_complement};
};

struct SweepRow {
    ExpConfig cfg;
    ErrorReport report;
};

/// Uniform-width configurations, ordered by P, M, L, mode.
std::vector<SweepRow> mult_lut_sweep(const Fig5Grid& grid, SweepOptions options = {});

struct DerivedRow {
    DerivedFunction function = DerivedFunction::gaussian;
    int precision = 0;  ///< multiplier and LUT precision of the run
    ErrorReport report;
};

/// Gaussian, sigmoid and tanh under each configuration (both must share P).
std::vector<DerivedRow> derived_error_table(std::span<const ExpConfig> configs, SweepOptions options = {},
                                            DerivedReference reference = DerivedReference::prepared_argument,
                                            ExpTap tap = ExpTap::multiplier_output);

}  // namespace fxexp
