// Max-error reductions over an index range.
//
// reduce_serial is the reference; reduce_parallel splits the range across
// OpenMP threads. The merge keeps the larger error and, on ties, the smaller
// index, so both return bit-identical results for any thread count.

#pragma once

#include <cstdint>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace fxexp::kernels {

/// Error of one sample: against the exact reference and, in whole ulps,
/// against the reference rounded to the output grid.
struct SampleError {
    long double abs_error = 0.0L;
    std::uint64_t quantized_ulps = 0;
};

struct MaxError {
    long double abs_error = -1.0L;
    std::int64_t argmax = 0;
    std::uint64_t quantized_ulps = 0;
    std::int64_t quantized_argmax = 0;
    std::uint64_t samples = 0;

    void add(std::int64_t index, const SampleError& e)
    {
        ++samples;
        if (e.abs_error > abs_error || (e.abs_error == abs_error && index < argmax)) {
            abs_error = e.abs_error;
            argmax = index;
        }
        if (samples == 1 || e.quantized_ulps > quantized_ulps ||
            (e.quantized_ulps == quantized_ulps && index < quantized_argmax)) {
            quantized_ulps = e.quantized_ulps;
            quantized_argmax = index;
        }
    }

    void merge(const MaxError& o)
    {
        if (o.samples == 0)
            return;
        if (samples == 0) {
            *this = o;
            return;
        }
        if (o.abs_error > abs_error || (o.abs_error == abs_error && o.argmax < argmax)) {
            abs_error = o.abs_error;
            argmax = o.argmax;
        }
        if (o.quantized_ulps > quantized_ulps ||
            (o.quantized_ulps == quantized_ulps && o.quantized_argmax < quantized_argmax)) {
            quantized_ulps = o.quantized_ulps;
            quantized_argmax = o.quantized_argmax;
        }
        samples += o.samples;
    }
};

/// sample(i) -> SampleError for every i in [begin, end).
template <class Sample>
MaxError reduce_serial(std::int64_t begin, std::int64_t end, Sample&& sample)
{
    MaxError acc;
    for (std::int64_t i = begin; i < end; ++i)
        acc.add(i, sample(i));
    return acc;
}

/// threads <= 0 uses the OpenMP default. Without OpenMP this is reduce_serial.
template <class Sample>
MaxError reduce_parallel(std::int64_t begin, std::int64_t end, int threads, Sample&& sample)
{
#ifdef _OPENMP
    MaxError result;
    const int nthreads = threads > 0 ? threads : omp_get_max_threads();
#pragma omp parallel num_threads(nthreads)
    {
        MaxError local;
#pragma omp for schedule(static) nowait
        for (std::int64_t i = begin; i < end; ++i)
            local.add(i, sample(i));
#pragma omp critical(fxexp_reduce_merge)
        result.merge(local);
    }
    return result;
#else
    (void)threads;
    return reduce_serial(begin, end, sample);
#endif
}

}  // namespace fxexp::kernels
