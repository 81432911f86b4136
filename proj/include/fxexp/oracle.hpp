// High-precision reference values. Everything that measures error compares
// against this module; nothing in the datapath model depends on it except
// LUT construction, where table contents are compile-time constants.

#pragma once

#include <cstdint>
#include <vector>

#include <mpfr.h>

#include "fxexp/fixed.hpp"

namespace fxexp::oracle {

/// Working precision of the oracle, in significand bits.
inline constexpr mpfr_prec_t kPrecision = 160;

/// Value-semantic wrapper over an mpfr_t at kPrecision.
class Real {
public:
    Real();
    explicit Real(long double x);
    Real(const Real& other);
    Real(Real&& other) noexcept;
    Real& operator=(const Real& other);
    Real& operator=(Real&& other) noexcept;
    ~Real();

    /// raw * 2^-frac_bits, exactly.
    static Real dyadic(std::uint64_t raw, int frac_bits);
    static Real ln2();

    [[nodiscard]] long double to_long_double() const;
    [[nodiscard]] bool is_negative() const;

    friend Real operator+(const Real& a, const Real& b);
    friend Real operator-(const Real& a, const Real& b);
    friend Real operator*(const Real& a, const Real& b);
    friend Real operator/(const Real& a, const Real& b);
    friend Real operator-(const Real& a);
    friend bool operator<(const Real& a, const Real& b);
    friend Real abs(const Real& a);
    friend Real exp(const Real& a);

    mpfr_srcptr get() const { return value_; }
    mpfr_ptr get() { return value_; }

private:
    mpfr_t value_;
};

/// e^-a for a >= 0.
Real exp_neg(const Real& a);

/// e^-(raw * 2^-frac_bits), rounded once to long double (relative error <= 2^-64).
long double exp_neg(std::uint64_t raw, int frac_bits);

/// Single correctly-rounded quantization of a real into u<int_bits>.<frac_bits>.
FixedUQ quantize(const Real& x, int int_bits, int frac_bits, RoundingMode mode);

/// e^-(k * 2^-P) for every k in [0, 16 * 2^P): the reference for exhaustive sweeps.
class ExpTable {
public:
    static constexpr int kMaxPrecision = 20;

    /// threads <= 0 uses the OpenMP default.
    explicit ExpTable(int precision, int threads = 0);

    [[nodiscard]] int precision() const { return precision_; }
    [[nodiscard]] std::uint64_t size() const { return values_.size(); }
    [[nodiscard]] long double operator[](std::uint64_t k) const { return values_[k]; }

private:
    int precision_;
    std::vector<long double> values_;
};

}  // namespace fxexp::oracle
