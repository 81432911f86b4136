#include "fxexp/oracle.hpp"

#include <fmt/format.h>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace fxexp::oracle {

Real::Real() { mpfr_init2(value_, kPrecision); mpfr_set_zero(value_, 1); }

Real::Real(long double x)
{
    mpfr_init2(value_, kPrecision);
    mpfr_set_ld(value_, x, MPFR_RNDN);
}

Real::Real(const Real& other)
{
    mpfr_init2(value_, kPrecision);
    mpfr_set(value_, other.value_, MPFR_RNDN);
}

Real::Real(Real&& other) noexcept
{
    mpfr_init2(value_, kPrecision);
    mpfr_swap(value_, other.value_);
}

Real& Real::operator=(const Real& other)
{
    if (this != &other)
        mpfr_set(value_, other.value_, MPFR_RNDN);
    return *this;
}

Real& Real::operator=(Real&& other) noexcept
{
    mpfr_swap(value_, other.value_);
    return *this;
}

Real::~Real() { mpfr_clear(value_); }

Real Real::dyadic(std::uint64_t raw, int frac_bits)
{
    Real r;
    mpfr_set_uj(r.value_, raw, MPFR_RNDN);  // exact: 64 <= kPrecision
    mpfr_div_2si(r.value_, r.value_, frac_bits, MPFR_RNDN);
    return r;
}

Real Real::ln2()
{
    Real r;
    mpfr_const_log2(r.value_, MPFR_RNDN);
    return r;
}

long double Real::to_long_double() const { return mpfr_get_ld(value_, MPFR_RNDN); }

bool Real::is_negative() const { return mpfr_sgn(value_) < 0; }

Real operator+(const Real& a, const Real& b)
{
    Real r;
    mpfr_add(r.value_, a.value_, b.value_, MPFR_RNDN);
    return r;
}

Real operator-(const Real& a, const Real& b)
{
    Real r;
    mpfr_sub(r.value_, a.value_, b.value_, MPFR_RNDN);
    return r;
}

Real operator*(const Real& a, const Real& b)
{
    Real r;
    mpfr_mul(r.value_, a.value_, b.value_, MPFR_RNDN);
    return r;
}

Real operator/(const Real& a, const Real& b)
{
    Real r;
    mpfr_div(r.value_, a.value_, b.value_, MPFR_RNDN);
    return r;
}

Real operator-(const Real& a)
{
    Real r;
    mpfr_neg(r.value_, a.value_, MPFR_RNDN);
    return r;
}

bool operator<(const Real& a, const Real& b) { return mpfr_less_p(a.value_, b.value_) != 0; }

Real abs(const Real& a)
{
    Real r;
    mpfr_abs(r.value_, a.value_, MPFR_RNDN);
    return r;
}

Real exp(const Real& a)
{
    Real r;
    mpfr_exp(r.value_, a.value_, MPFR_RNDN);
    return r;
}

Real exp_neg(const Real& a)
{
    if (a.is_negative())
        throw FormatError("exp_neg expects a non-negative argument");
    return exp(-a);
}

long double exp_neg(std::uint64_t raw, int frac_bits)
{
    return exp_neg(Real::dyadic(raw, frac_bits)).to_long_double();
}

FixedUQ quantize(const Real& x, int int_bits, int frac_bits, RoundingMode mode)
{
    detail::check_format(int_bits, frac_bits);
    if (x.is_negative())
        throw FormatError("quantize expects a non-negative value");
    Real scaled = x;
    mpfr_mul_2si(scaled.get(), scaled.get(), frac_bits, MPFR_RNDN);
    mpfr_rint(scaled.get(), scaled.get(), mode == RoundingMode::truncate ? MPFR_RNDZ : MPFR_RNDN);
    if (mpfr_cmp_ui_2exp(scaled.get(), 1, int_bits + frac_bits) >= 0)
        throw OverflowError(fmt::format("value does not fit u{}.{}", int_bits, frac_bits));
    return FixedUQ{static_cast<std::uint64_t>(mpfr_get_uj(scaled.get(), MPFR_RNDN)), int_bits, frac_bits};
}

ExpTable::ExpTable(int precision, int threads) : precision_(precision)
{
    if (precision < 4 || precision > kMaxPrecision)
        throw FormatError(fmt::format("oracle table precision {} outside [4, {}]", precision, kMaxPrecision));

    // e^-(i + j/8 + r 2^-P) = e^-i * e^-(j/8) * e^-(r 2^-P), each factor and
    // product carried at kPrecision bits, then rounded once.
    const int residual_bits = precision - 3;
    const std::uint64_t residual_count = std::uint64_t{1} << residual_bits;
    std::vector<Real> integer_part, fraction_part, residual_part(residual_count);
    for (int i = 0; i < 16; ++i)
        integer_part.push_back(exp_neg(Real::dyadic(static_cast<std::uint64_t>(i), 0)));
    for (int j = 0; j < 8; ++j)
        fraction_part.push_back(exp_neg(Real::dyadic(static_cast<std::uint64_t>(j), 3)));

    const auto n_residual = static_cast<std::int64_t>(residual_count);
    const std::uint64_t total = std::uint64_t{16} << precision;
    values_.resize(total);
    const auto n_total = static_cast<std::int64_t>(total);

#ifdef _OPENMP
    const int nthreads = threads > 0 ? threads : omp_get_max_threads();
#pragma omp parallel num_threads(nthreads)
#endif
    {
#ifdef _OPENMP
#pragma omp for schedule(static)
#endif
        for (std::int64_t r = 0; r < n_residual; ++r)
            residual_part[static_cast<std::size_t>(r)] = exp_neg(Real::dyadic(static_cast<std::uint64_t>(r), precision));

        Real scratch;
#ifdef _OPENMP
#pragma omp for schedule(static)
#endif
        for (std::int64_t k = 0; k < n_total; ++k) {
            const auto uk = static_cast<std::uint64_t>(k);
            const auto i = uk >> precision;
            const auto j = (uk >> residual_bits) & 7;
            const auto r = uk & (residual_count - 1);
            mpfr_mul(scratch.get(), integer_part[i].get(), fraction_part[j].get(), MPFR_RNDN);
            mpfr_mul(scratch.get(), scratch.get(), residual_part[r].get(), MPFR_RNDN);
            values_[uk] = scratch.to_long_double();
        }
    }
    (void)threads;
}

}  // namespace fxexp::oracle
