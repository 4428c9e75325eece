#pragma once

// Iterative radix-2 complex FFT for power-of-two lengths, with cached
// bit-reversal and twiddle tables, plus an n-dimensional transform over the
// y1-fastest sample layout.  Twiddles are tabulated via polar() per index;
// no recurrence, no drift.

#include <complex>
#include <map>
#include <memory>
#include <mutex>
#include <stdexcept>
#include <vector>

#include "schrod/parallel.hpp"

namespace schrod {

using Complex = std::complex<double>;

inline bool is_power_of_two(int x) { return x > 0 && (x & (x - 1)) == 0; }

struct FftPlan {
    int n = 0;
    std::vector<int> bitrev;
    std::vector<Complex> twiddle;  // exp(-2 pi i j / n), j < n/2

    explicit FftPlan(int n_) : n(n_) {
        if (!is_power_of_two(n)) throw std::invalid_argument("FftPlan: length must be a power of two");
        bitrev.resize(static_cast<std::size_t>(n));
        int bits = 0;
        while ((1 << bits) < n) ++bits;
        for (int i = 0; i < n; ++i) {
            int rev = 0;
            for (int b = 0; b < bits; ++b)
                if (i & (1 << b)) rev |= 1 << (bits - 1 - b);
            bitrev[static_cast<std::size_t>(i)] = rev;
        }
        twiddle.resize(static_cast<std::size_t>(n / 2));
        const double step = -6.283185307179586476925286766559 / n;
        for (int j = 0; j < n / 2; ++j)
            twiddle[static_cast<std::size_t>(j)] = std::polar(1.0, step * j);
    }
};

inline const FftPlan& fft_plan(int n) {
    static std::mutex mu;
    static std::map<int, std::unique_ptr<FftPlan>> cache;
    std::lock_guard<std::mutex> lock(mu);
    auto& slot = cache[n];
    if (!slot) slot = std::make_unique<FftPlan>(n);
    return *slot;
}

/// In-place transform of one contiguous line.  inverse applies the 1/n scale.
inline void fft_line(Complex* a, const FftPlan& plan, bool inverse) {
    const int n = plan.n;
    for (int i = 0; i < n; ++i) {
        const int j = plan.bitrev[static_cast<std::size_t>(i)];
        if (i < j) std::swap(a[i], a[j]);
    }
    for (int len = 2; len <= n; len <<= 1) {
        const int half = len >> 1;
        const int step = n / len;
        for (int start = 0; start < n; start += len) {
            for (int j = 0; j < half; ++j) {
                Complex w = plan.twiddle[static_cast<std::size_t>(j * step)];
                if (inverse) w = std::conj(w);
                const Complex u = a[start + j];
                const Complex v = a[start + j + half] * w;
                a[start + j] = u + v;
                a[start + j + half] = u - v;
            }
        }
    }
    if (inverse) {
        const double scale = 1.0 / n;
        for (int i = 0; i < n; ++i) a[i] *= scale;
    }
}

/// n-dimensional in-place transform.  Samples are stored with the first axis
/// fastest: index = i1 + N1*(i2 + N2*i3).
inline void fft_nd(std::vector<Complex>& data, const std::vector<int>& sizes, bool inverse) {
    std::size_t total = 1;
    for (int s : sizes) total *= static_cast<std::size_t>(s);
    if (data.size() != total) throw std::invalid_argument("fft_nd: size mismatch");

    std::size_t stride = 1;
    for (std::size_t axis = 0; axis < sizes.size(); ++axis) {
        const int n = sizes[axis];
        const FftPlan& plan = fft_plan(n);
        const std::size_t block = stride * static_cast<std::size_t>(n);
        const std::size_t lines = total / static_cast<std::size_t>(n);

        parallel_for(0, lines, [&](std::size_t lo, std::size_t hi) {
            std::vector<Complex> line(static_cast<std::size_t>(n));
            for (std::size_t li = lo; li < hi; ++li) {
                const std::size_t base = (li / stride) * block + (li % stride);
                if (stride == 1) {
                    fft_line(data.data() + base, plan, inverse);
                    continue;
                }
                for (int k = 0; k < n; ++k)
                    line[static_cast<std::size_t>(k)] = data[base + static_cast<std::size_t>(k) * stride];
                fft_line(line.data(), plan, inverse);
                for (int k = 0; k < n; ++k)
                    data[base + static_cast<std::size_t>(k) * stride] = line[static_cast<std::size_t>(k)];
            }
        }, 1u << 12);

        stride = block;
    }
}

/// Frequency index in FFT bin order: 0, 1, .., n/2-1, -n/2, .., -1.
inline int fft_freq(int j, int n) { return j < n / 2 ? j : j - n; }

} // namespace schrod
