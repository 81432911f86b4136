// Activation and Gaussian functions expressed through e^-|x|.
//
// Each function prepares a non-negative exp argument from x, runs the
// datapath once, and combines that single exponential exactly before one
// final round-to-nearest at P fraction bits:
//
//   sigmoid  1/(1+e) for x >= 0,  e/(1+e) for x < 0     e = e^-|x|
//   tanh     sign(x) (1-e)/(1+e)                          e = e^-2|x|
//   gaussian e                                            e = e^-(x-mu)^2/(2 sigma^2)
//   elu      x for x >= 0,  alpha (e-1) for x < 0         e = e^-|x|

#pragma once

#include <string>

#include "fxexp/expcore.hpp"

namespace fxexp {

enum class DerivedFunction { sigmoid, tanh, gaussian, elu };

/// Which datapath signal feeds the combination stage.
enum class ExpTap {
    multiplier_output,  ///< the M-bit final product (ExpTrace::wide)
    quantized_output,   ///< the u1.P exp_neg result (ExpTrace::out)
};

struct DerivedSpec {
    DerivedFunction function = DerivedFunction::sigmoid;
    double alpha = 1.0;  ///< ELU scale
    double mu = 0.0;     ///< Gaussian centre
    double sigma = 1.0;  ///< Gaussian width, > 0
    ExpTap tap = ExpTap::multiplier_output;

    void validate() const;
};

/// Sign-magnitude fixed-point value.
struct SignedFixed {
    bool negative = false;
    FixedUQ magnitude;

    [[nodiscard]] long double value() const { return negative ? -magnitude.value() : magnitude.value(); }

    friend bool operator==(const SignedFixed&, const SignedFixed&) = default;
};

/// The exp argument for input x, rounded to nearest at P fraction bits.
/// Throws OverflowError if it exceeds 64 - P integer bits.
FixedUQ prepare_argument(const DerivedSpec& spec, const SignedFixed& x, int precision);

/// x must carry P = cfg.out_precision fraction bits.
SignedFixed eval_derived(const DerivedSpec& spec, const SignedFixed& x, const ExpConfig& cfg, const Luts& luts);

/// Exact value of the function at x, through the high-precision oracle.
long double reference_derived(const DerivedSpec& spec, long double x);

std::string to_string(DerivedFunction function);

}  // namespace fxexp
