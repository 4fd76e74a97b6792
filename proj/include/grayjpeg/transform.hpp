#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <numbers>
#include <span>
#include <stdexcept>
#include <vector>

#include "grayjpeg/block.hpp"

namespace grayjpeg {

/// Normalization weight of the orthonormal DCT-II: sqrt(1/N) for k = 0, sqrt(2/N) otherwise.
inline double dct_alpha(std::size_t k, std::size_t order) {
    return k == 0 ? std::sqrt(1.0 / static_cast<double>(order)) : std::sqrt(2.0 / static_cast<double>(order));
}

/// cos((2n+1) pi k / 2N), the sampled cosine basis.
inline double dct_basis(std::size_t k, std::size_t n, std::size_t order) {
    return std::cos(static_cast<double>((2 * n + 1) * k) * std::numbers::pi / (2.0 * static_cast<double>(order)));
}

/// Orthonormal N x N DCT-II matrix; row k holds basis function k.
class DctMatrix {
public:
    explicit DctMatrix(std::size_t order) : order_(order), entries_(order * order) {
        if (order == 0) {
            throw std::invalid_argument("DCT order must be at least 1");
        }
        for (std::size_t k = 0; k < order; ++k) {
            for (std::size_t n = 0; n < order; ++n) {
                entries_[k * order + n] = dct_alpha(k, order) * dct_basis(k, n, order);
            }
        }
    }

    std::size_t order() const noexcept { return order_; }
    double operator()(std::size_t k, std::size_t n) const { return entries_[k * order_ + n]; }
    std::span<const double> row(std::size_t k) const { return {entries_.data() + k * order_, order_}; }

    std::vector<double> apply(std::span<const double> signal) const {
        if (signal.size() != order_) {
            throw std::invalid_argument("signal length does not match DCT order");
        }
        std::vector<double> out(order_, 0.0);
        for (std::size_t k = 0; k < order_; ++k) {
            double acc = 0.0;
            for (std::size_t n = 0; n < order_; ++n) {
                acc += entries_[k * order_ + n] * signal[n];
            }
            out[k] = acc;
        }
        return out;
    }

private:
    std::size_t order_;
    std::vector<double> entries_;
};

inline DctMatrix dct_matrix(std::size_t order) { return DctMatrix(order); }

/// X[k] = alpha(k) * sum_n x[n] cos((2n+1) pi k / 2N).
inline std::vector<double> fdct_1d(std::span<const double> signal) {
    const std::size_t n = signal.size();
    if (n == 0) {
        throw std::invalid_argument("fdct_1d requires a nonempty signal");
    }
    std::vector<double> out(n);
    for (std::size_t k = 0; k < n; ++k) {
        double acc = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            acc += signal[i] * dct_basis(k, i, n);
        }
        out[k] = dct_alpha(k, n) * acc;
    }
    return out;
}

/// x[n] = sum_k alpha(k) X[k] cos((2n+1) pi k / 2N).
inline std::vector<double> idct_1d(std::span<const double> coeffs) {
    const std::size_t n = coeffs.size();
    if (n == 0) {
        throw std::invalid_argument("idct_1d requires a nonempty input");
    }
    std::vector<double> out(n);
    for (std::size_t i = 0; i < n; ++i) {
        double acc = 0.0;
        for (std::size_t k = 0; k < n; ++k) {
            acc += dct_alpha(k, n) * coeffs[k] * dct_basis(k, i, n);
        }
        out[i] = acc;
    }
    return out;
}

namespace detail {

inline const DctMatrix& dct8() {
    static const DctMatrix matrix(kBlockSide);
    return matrix;
}

// out = C * in * C^T (forward) or C^T * in * C (inverse), row-column order.
template <typename Out, typename In>
Out separable_2d(const In& in, bool inverse) {
    const DctMatrix& c = dct8();
    auto coef = [&](std::size_t freq, std::size_t pos) { return inverse ? c(pos, freq) : c(freq, pos); };
    std::array<double, kBlockSize> rows{};
    for (std::size_t m = 0; m < kBlockSide; ++m) {
        for (std::size_t l = 0; l < kBlockSide; ++l) {
            double acc = 0.0;
            for (std::size_t n = 0; n < kBlockSide; ++n) {
                acc += coef(l, n) * static_cast<double>(in(m, n));
            }
            rows[m * kBlockSide + l] = acc;
        }
    }
    Out out;
    for (std::size_t k = 0; k < kBlockSide; ++k) {
        for (std::size_t l = 0; l < kBlockSide; ++l) {
            double acc = 0.0;
            for (std::size_t m = 0; m < kBlockSide; ++m) {
                acc += coef(k, m) * rows[m * kBlockSide + l];
            }
            out(k, l) = acc;
        }
    }
    return out;
}

}  // namespace detail

/// Separable 2D DCT-II of an 8x8 block.
inline CoefficientBlock fdct_2d(const RealBlock& block) {
    return detail::separable_2d<CoefficientBlock>(block, false);
}

inline CoefficientBlock fdct_2d(const SampleBlock& block) {
    validate_samples(block);
    return detail::separable_2d<CoefficientBlock>(block, false);
}

/// Separable 2D inverse DCT. Values are returned unrounded.
inline RealBlock idct_2d(const CoefficientBlock& coeffs) {
    return detail::separable_2d<RealBlock>(coeffs, true);
}

struct FastDctResult {
    std::array<double, 8> coefficients{};
    int multiplications = 0;
};

namespace detail {

// Recursive even/odd split for the unnormalized DCT-II
// X[k] = sum_n x[n] cos((2n+1) pi k / 2N): the even half is the DCT of
// x[n] + x[N-1-n], the odd half comes from the DCT of
// (x[n] - x[N-1-n]) / (2 cos((2n+1) pi / 2N)) with X[2k+1] = H[k] + H[k+1].
template <std::size_t N>
struct LeeKernel {
    static const std::array<double, N / 2>& reciprocals() {
        static const std::array<double, N / 2> table = [] {
            std::array<double, N / 2> t{};
            for (std::size_t i = 0; i < N / 2; ++i) {
                t[i] = 1.0 / (2.0 * std::cos(static_cast<double>(2 * i + 1) * std::numbers::pi / (2.0 * N)));
            }
            return t;
        }();
        return table;
    }

    static std::array<double, N> run(const std::array<double, N>& x, int& mults) {
        constexpr std::size_t half = N / 2;
        const auto& r = reciprocals();
        std::array<double, half> even{};
        std::array<double, half> odd{};
        for (std::size_t i = 0; i < half; ++i) {
            even[i] = x[i] + x[N - 1 - i];
            odd[i] = (x[i] - x[N - 1 - i]) * r[i];
            ++mults;
        }
        const auto g = LeeKernel<half>::run(even, mults);
        const auto h = LeeKernel<half>::run(odd, mults);
        std::array<double, N> out{};
        for (std::size_t k = 0; k < half; ++k) {
            out[2 * k] = g[k];
            out[2 * k + 1] = h[k] + (k + 1 < half ? h[k + 1] : 0.0);
        }
        return out;
    }
};

template <>
struct LeeKernel<1> {
    static std::array<double, 1> run(const std::array<double, 1>& x, int&) { return x; }
};

}  // namespace detail

/// Fast 8-point orthonormal DCT-II (Lee butterfly), reporting how many
/// real multiplications it performed: 12 in the butterflies plus 8 for
/// the output normalization.
inline FastDctResult fast_fdct_8(std::span<const double> signal) {
    if (signal.size() != 8) {
        throw std::invalid_argument("fast_fdct_8 requires exactly 8 samples");
    }
    std::array<double, 8> x{};
    std::copy(signal.begin(), signal.end(), x.begin());
    FastDctResult result;
    const auto raw = detail::LeeKernel<8>::run(x, result.multiplications);
    static const double dc_scale = std::sqrt(1.0 / 8.0);
    static const double ac_scale = std::sqrt(2.0 / 8.0);
    for (std::size_t k = 0; k < 8; ++k) {
        result.coefficients[k] = raw[k] * (k == 0 ? dc_scale : ac_scale);
        ++result.multiplications;
    }
    return result;
}

}  // namespace grayjpeg
