#pragma once

#include <omp.h>

#include <cmath>
#include <complex>
#include <cstdint>
#include <vector>

namespace spz {

// Neumaier compensated accumulator
template <class T>
struct CompensatedSum {
    T sum{};
    T comp{};
    void add(T x) {
        const T t = sum + x;
        comp += accumulate_error(sum, x, t);
        sum = t;
    }
    T value() const { return sum + comp; }

private:
    static double accumulate_error(double a, double b, double t) {
        return std::abs(a) >= std::abs(b) ? (a - t) + b : (b - t) + a;
    }
    static std::complex<double> accumulate_error(std::complex<double> a, std::complex<double> b,
                                                 std::complex<double> t) {
        return {accumulate_error(a.real(), b.real(), t.real()),
                accumulate_error(a.imag(), b.imag(), t.imag())};
    }
};

constexpr std::int64_t kReduceBlock = 2048;

// reference: one compensated pass in index order
template <class T, class F>
T serial_sum(std::int64_t begin, std::int64_t end, F&& f) {
    CompensatedSum<T> acc;
    for (std::int64_t i = begin; i < end; ++i) acc.add(f(i));
    return acc.value();
}

// fixed blocks, each summed serially, combined by a pairwise tree;
// the result does not depend on the thread count
template <class T, class F>
T parallel_sum(std::int64_t begin, std::int64_t end, F&& f, std::int64_t block = kReduceBlock) {
    if (end <= begin) return T{};
    const std::int64_t nblocks = (end - begin + block - 1) / block;
    std::vector<T> partial(nblocks);
#pragma omp parallel for schedule(static)
    for (std::int64_t b = 0; b < nblocks; ++b) {
        const std::int64_t lo = begin + b * block;
        const std::int64_t hi = std::min(end, lo + block);
        CompensatedSum<T> acc;
        for (std::int64_t i = lo; i < hi; ++i) acc.add(f(i));
        partial[b] = acc.value();
    }
    for (std::int64_t width = 1; width < nblocks; width *= 2) {
        for (std::int64_t i = 0; i + width < nblocks; i += 2 * width) partial[i] += partial[i + width];
    }
    return partial[0];
}

}  // namespace spz
