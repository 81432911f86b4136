#include "fxexp/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>

#include <fmt/format.h>

#include "fxexp/kernels.hpp"

namespace fxexp {

namespace {

template <class Sample>
kernels::MaxError reduce(std::int64_t begin, std::int64_t end, const SweepOptions& options, Sample&& sample)
{
    if (options.serial)
        return kernels::reduce_serial(begin, end, sample);
    return kernels::reduce_parallel(begin, end, options.threads, sample);
}

std::uint64_t distance(std::int64_t a, std::int64_t b)
{
    return a > b ? static_cast<std::uint64_t>(a - b) : static_cast<std::uint64_t>(b - a);
}

kernels::SampleError compare(long double result, std::int64_t result_raw, long double reference, int precision)
{
    const auto nearest = static_cast<std::int64_t>(std::llround(std::ldexp(reference, precision)));
    return {std::fabs(result - reference), distance(result_raw, nearest)};
}

ErrorReport to_report(const kernels::MaxError& m, int precision)
{
    ErrorReport r;
    r.max_abs_error = m.abs_error < 0 ? 0.0L : m.abs_error;
    r.max_ulps = std::ldexp(r.max_abs_error, precision);
    r.argmax_raw = m.argmax;
    r.samples = m.samples;
    r.max_quantized_ulps = m.quantized_ulps;
    r.argmax_quantized_raw = m.quantized_argmax;
    r.precision = precision;
    return r;
}

}  // namespace

AccuracyBits AccuracyBits::from_error(long double max_abs_error)
{
    if (!(max_abs_error > 0.0L))
        return AccuracyBits{kExact};
    int exponent = 0;
    (void)std::frexp(max_abs_error, &exponent);  // e = m 2^exponent, m in [1/2, 1)
    return AccuracyBits{-exponent};
}

Sweeper::Sweeper(int precision, SweepOptions options)
    : precision_(precision),
      options_(options),
      table_(std::make_shared<const oracle::ExpTable>(precision, options.serial ? 1 : options.threads))
{
}

std::vector<std::uint64_t> saturation_spot_inputs(int precision)
{
    const std::uint64_t one = std::uint64_t{1} << precision;
    return {16 * one, 16 * one + 1, 16 * one + one / 2, 17 * one, 20 * one, 32 * one - 1, 100 * one + 12345 % one,
            256 * one - 1};
}

ErrorReport Sweeper::sweep(const ExpConfig& cfg) const
{
    cfg.validate();
    if (cfg.out_precision != precision_)
        throw FormatError(fmt::format("sweeper built for P = {}, config has P = {}", precision_, cfg.out_precision));
    const Luts luts = build_luts(cfg);
    const int p = precision_;
    const oracle::ExpTable& table = *table_;

    kernels::MaxError m = reduce(0, static_cast<std::int64_t>(table.size()), options_, [&](std::int64_t i) {
        const FixedUQ out = exp_neg(FixedUQ{static_cast<std::uint64_t>(i), 4, p}, cfg, luts);
        return compare(out.value(), static_cast<std::int64_t>(out.raw), table[static_cast<std::uint64_t>(i)], p);
    });

    // Above 16 the splitter saturates; a handful of points is enough to keep it honest.
    for (const std::uint64_t raw : saturation_spot_inputs(p)) {
        const FixedUQ out = exp_neg(FixedUQ{raw, 9, p}, cfg, luts);
        m.add(static_cast<std::int64_t>(raw),
              compare(out.value(), static_cast<std::int64_t>(out.raw), oracle::exp_neg(raw, p), p));
    }
    return to_report(m, p);
}

std::string to_string(DerivedReference reference)
{
    return reference == DerivedReference::prepared_argument ? "prepared" : "input";
}

ErrorReport Sweeper::derived(const DerivedSpec& spec, const ExpConfig& cfg, DerivedReference reference) const
{
    spec.validate();
    cfg.validate();
    if (cfg.out_precision != precision_)
        throw FormatError("sweeper precision does not match the configuration");
    const Luts luts = build_luts(cfg);
    const int p = precision_;
    const std::int64_t one = std::int64_t{1} << p;
    const oracle::ExpTable& table = *table_;

    std::int64_t begin = -16 * one + 1;
    std::int64_t end = 16 * one;
    switch (spec.function) {
    case DerivedFunction::tanh:
        begin = -8 * one + 1;
        end = 8 * one;
        break;
    case DerivedFunction::gaussian: {
        const long double reach = static_cast<long double>(spec.sigma) * std::sqrt(32.0L);
        begin = static_cast<std::int64_t>(std::ceil(std::ldexp(spec.mu - reach, p)));
        end = static_cast<std::int64_t>(std::floor(std::ldexp(spec.mu + reach, p))) + 1;
        break;
    }
    default:
        break;
    }

    const kernels::MaxError m = reduce(begin, end, options_, [&](std::int64_t k) {
        const std::uint64_t mag = static_cast<std::uint64_t>(k < 0 ? -k : k);
        const SignedFixed x{k < 0, FixedUQ{mag, kMaxWidth - p, p}};
        const SignedFixed y = eval_derived(spec, x, cfg, luts);
        const auto y_raw = static_cast<std::int64_t>(y.magnitude.raw);
        long double ref = 0.0L;
        switch (spec.function) {
        case DerivedFunction::sigmoid: {
            const long double e = table[mag];
            ref = (k < 0 ? e : 1.0L) / (1.0L + e);
            break;
        }
        case DerivedFunction::tanh: {
            const long double e = table[2 * mag];
            ref = (1.0L - e) / (1.0L + e);
            if (k < 0)
                ref = -ref;
            break;
        }
        case DerivedFunction::elu:
            ref = k < 0 ? static_cast<long double>(spec.alpha) * (table[mag] - 1.0L) : x.magnitude.value();
            break;
        case DerivedFunction::gaussian:
            if (reference == DerivedReference::exact_input) {
                ref = reference_derived(spec, x.value());
            } else {
                const std::uint64_t arg = prepare_argument(spec, x, p).raw;
                ref = arg < table.size() ? table[arg] : oracle::exp_neg(arg, p);
            }
            break;
        }
        return compare(y.value(), y.negative ? -y_raw : y_raw, ref, p);
    });
    return to_report(m, p);
}

ErrorReport sweep_error(const ExpConfig& cfg, SweepOptions options)
{
    cfg.validate();
    return Sweeper(cfg.out_precision, options).sweep(cfg);
}

CoeffScan coeff_error_scan(int precision, SweepOptions options)
{
    if (precision < 4 || precision > ExpConfig::kMaxPrecision)
        throw FormatError(fmt::format("coefficient scan precision {} outside [4, {}]", precision,
                                      ExpConfig::kMaxPrecision));
    using oracle::Real;
    const auto count = std::int64_t{1} << (precision - 3);

    const auto scan = [&](bool shift_add) {
        return to_report(reduce(0, count, options, [&](std::int64_t k) {
                             const Real one(1.0L);
                             const Real x = Real::dyadic(static_cast<std::uint64_t>(k), precision);
                             const Real cubic = shift_add ? Real(0.3125L) * x : x / Real(3.0L);
                             const Real poly = one - x * (one - x / Real(2.0L) * (one - cubic));
                             const Real err = abs(poly - exp(-x));
                             return kernels::SampleError{err.to_long_double(), 0};
                         }),
                         precision);
    };
    return CoeffScan{scan(true), scan(false)};
}

std::vector<RangeError> series_range_study(std::span<const int> terms, std::span<const int> range_pows,
                                           int grid_bits, SweepOptions options)
{
    if (grid_bits < 1 || grid_bits > 24)
        throw FormatError("grid_bits must lie in [1, 24]");
    int max_terms = 0;
    for (const int n : terms) {
        if (n < 1 || n > 12)
            throw FormatError(fmt::format("unsupported term count {}", n));
        max_terms = std::max(max_terms, n);
    }
    for (const int range_pow : range_pows)
        if (range_pow > 0)
            throw FormatError("range must not exceed 1");
    const auto count = std::int64_t{1} << grid_bits;
    const std::size_t nterms = terms.size();

    std::vector<RangeError> rows;
    // errors[t * count + k]: |partial sum with terms[t] terms - e^-x_k|
    std::vector<long double> errors(nterms * static_cast<std::size_t>(count));
    for (const int range_pow : range_pows) {
        const int shift = grid_bits - range_pow;  // x_k = k 2^-shift
#ifdef _OPENMP
        const int nthreads = options.serial ? 1 : (options.threads > 0 ? options.threads : omp_get_max_threads());
#pragma omp parallel num_threads(nthreads)
#endif
        {
            mpfr_t x, ref, term, sum, diff;
            mpfr_inits2(oracle::kPrecision, x, ref, term, sum, diff, static_cast<mpfr_ptr>(nullptr));
#ifdef _OPENMP
#pragma omp for schedule(static)
#endif
            for (std::int64_t k = 0; k < count; ++k) {
                mpfr_set_ui_2exp(x, static_cast<unsigned long>(k), -shift, MPFR_RNDN);
                mpfr_neg(ref, x, MPFR_RNDN);
                mpfr_exp(ref, ref, MPFR_RNDN);
                mpfr_set_ui(term, 1, MPFR_RNDN);
                mpfr_set_ui(sum, 1, MPFR_RNDN);
                for (int n = 1; n <= max_terms; ++n) {
                    if (n > 1) {  // add (-x)^(n-1) / (n-1)!
                        mpfr_mul(term, term, x, MPFR_RNDN);
                        mpfr_div_ui(term, term, static_cast<unsigned long>(n - 1), MPFR_RNDN);
                        mpfr_neg(term, term, MPFR_RNDN);
                        mpfr_add(sum, sum, term, MPFR_RNDN);
                    }
                    for (std::size_t t = 0; t < nterms; ++t) {
                        if (terms[t] != n)
                            continue;
                        mpfr_sub(diff, sum, ref, MPFR_RNDN);
                        errors[t * static_cast<std::size_t>(count) + static_cast<std::size_t>(k)] =
                            std::fabs(mpfr_get_ld(diff, MPFR_RNDN));
                    }
                }
            }
            mpfr_clears(x, ref, term, sum, diff, static_cast<mpfr_ptr>(nullptr));
        }

        for (std::size_t t = 0; t < nterms; ++t) {
            const long double* e = errors.data() + t * static_cast<std::size_t>(count);
            const kernels::MaxError m = reduce(0, count, options, [&](std::int64_t k) {
                return kernels::SampleError{e[k], 0};
            });
            RangeError row;
            row.terms = terms[t];
            row.range_pow = range_pow;
            row.max_abs_error = m.abs_error;
            row.argmax = m.argmax;
            row.accuracy = AccuracyBits::from_error(m.abs_error);
            rows.push_back(row);
        }
    }
    return rows;
}

RangeError series_range_error(int terms, int range_pow, int grid_bits)
{
    const int t[] = {terms};
    const int r[] = {range_pow};
    return series_range_study(t, r, grid_bits).front();
}

std::vector<TermPrecisionCell> term_precision_table(const ExpConfig& base, std::span<const int> cubic_widths,
                                                    std::span<const int> square_widths, const Sweeper& sweeper)
{
    std::vector<TermPrecisionCell> cells;
    for (const int wc : cubic_widths) {
        for (const int ws : square_widths) {
            ExpConfig cfg = base;
            cfg.cubic_width = wc;
            cfg.square_width = ws;
            TermPrecisionCell cell;
            cell.cubic_width = wc;
            cell.square_width = ws;
            cell.report = sweeper.sweep(cfg);
            cell.accuracy = AccuracyBits::from_error(cell.report.max_abs_error);
            cells.push_back(cell);
        }
    }
    return cells;
}

std::vector<SweepRow> mult_lut_sweep(const Fig5Grid& grid, SweepOptions options)
{
    std::vector<SweepRow> rows;
    for (const int p : grid.precisions) {
        const Sweeper sweeper(p, options);
        for (const int mo : grid.mult_offsets) {
            for (const int lo : grid.lut_offsets) {
                for (const Arithmetic mode : grid.modes) {
                    ExpConfig cfg = ExpConfig::uniform(p, p + mo, p + lo, mode);
                    cfg.allow_low_precision = mo < 0 || lo < 0;
                    rows.push_back(SweepRow{cfg, sweeper.sweep(cfg)});
                }
            }
        }
    }
    return rows;
}

std::vector<DerivedRow> derived_error_table(std::span<const ExpConfig> configs, SweepOptions options,
                                            DerivedReference reference, ExpTap tap)
{
    std::vector<DerivedRow> rows;
    if (configs.empty())
        return rows;
    const Sweeper sweeper(configs.front().out_precision, options);
    for (const ExpConfig& cfg : configs) {
        for (const DerivedFunction f : {DerivedFunction::gaussian, DerivedFunction::sigmoid, DerivedFunction::tanh}) {
            DerivedSpec spec;
            spec.function = f;
            spec.tap = tap;
            rows.push_back(DerivedRow{f, cfg.mult_precision, sweeper.derived(spec, cfg, reference)});
        }
    }
    return rows;
}

}  // namespace fxexp
