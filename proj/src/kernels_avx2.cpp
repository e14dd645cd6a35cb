#include "relsim/kernels.hpp"

#if defined(__x86_64__) || defined(_M_X64)
#include <immintrin.h>
#define RELSIM_X86 1
#endif

namespace relsim::kernels {

bool cpu_has_avx2() {
#ifdef RELSIM_X86
    return __builtin_cpu_supports("avx2");
#else
    return false;
#endif
}

#ifdef RELSIM_X86

namespace {

// Vector bodies run over the contiguous interior; wrap-around edges take the
// scalar path with arithmetic in the same order, so scalar and AVX2 results
// are bit-identical.

__attribute__((target("avx2"))) void laplacian_1d_avx2(const double* u,
                                                       double* out,
                                                       std::size_t n,
                                                       double inv_dx2) {
    if (n == 0) return;
    out[0] = (u[n - 1] + u[1 % n] - 2.0 * u[0]) * inv_dx2;
    const __m256d two = _mm256_set1_pd(2.0);
    const __m256d scale = _mm256_set1_pd(inv_dx2);
    std::size_t i = 1;
    for (; i + 5 <= n; i += 4) {
        const __m256d l = _mm256_loadu_pd(u + i - 1);
        const __m256d c = _mm256_loadu_pd(u + i);
        const __m256d r = _mm256_loadu_pd(u + i + 1);
        const __m256d lap = _mm256_sub_pd(_mm256_add_pd(l, r), _mm256_mul_pd(two, c));
        _mm256_storeu_pd(out + i, _mm256_mul_pd(lap, scale));
    }
    for (; i + 1 < n; ++i) {
        out[i] = (u[i - 1] + u[i + 1] - 2.0 * u[i]) * inv_dx2;
    }
    if (n > 1) out[n - 1] = (u[n - 2] + u[0] - 2.0 * u[n - 1]) * inv_dx2;
}

__attribute__((target("avx2"))) void laplacian_2d_avx2(const double* u,
                                                       double* out,
                                                       std::size_t nx,
                                                       std::size_t ny,
                                                       double inv_dx2) {
    const __m256d four = _mm256_set1_pd(4.0);
    const __m256d scale = _mm256_set1_pd(inv_dx2);
    for (std::size_t j = 0; j < ny; ++j) {
        const double* row = u + j * nx;
        const double* rm = u + ((j + ny - 1) % ny) * nx;
        const double* rp = u + ((j + 1) % ny) * nx;
        double* o = out + j * nx;
        auto edge = [&](std::size_t i) {
            const double l = row[(i + nx - 1) % nx];
            const double r = row[(i + 1) % nx];
            o[i] = (l + r + rm[i] + rp[i] - 4.0 * row[i]) * inv_dx2;
        };
        edge(0);
        std::size_t i = 1;
        for (; i + 5 <= nx; i += 4) {
            const __m256d l = _mm256_loadu_pd(row + i - 1);
            const __m256d c = _mm256_loadu_pd(row + i);
            const __m256d r = _mm256_loadu_pd(row + i + 1);
            const __m256d d = _mm256_loadu_pd(rm + i);
            const __m256d up = _mm256_loadu_pd(rp + i);
            __m256d s = _mm256_add_pd(_mm256_add_pd(_mm256_add_pd(l, r), d), up);
            s = _mm256_sub_pd(s, _mm256_mul_pd(four, c));
            _mm256_storeu_pd(o + i, _mm256_mul_pd(s, scale));
        }
        for (; i < nx; ++i) edge(i);
    }
}

__attribute__((target("avx2"))) void axpy_avx2(double a, const double* x,
                                               double* y, std::size_t n) {
    const __m256d va = _mm256_set1_pd(a);
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        const __m256d vy = _mm256_loadu_pd(y + i);
        const __m256d vx = _mm256_loadu_pd(x + i);
        _mm256_storeu_pd(y + i, _mm256_add_pd(vy, _mm256_mul_pd(va, vx)));
    }
    for (; i < n; ++i) y[i] += a * x[i];
}

__attribute__((target("avx2"))) void margin_1d_avx2(const double* u,
                                                    const double* tprev,
                                                    const double* tnext,
                                                    double* out, std::size_t n,
                                                    double inv_2dt,
                                                    double inv_2dx) {
    const __m256d st = _mm256_set1_pd(inv_2dt);
    const __m256d sx = _mm256_set1_pd(inv_2dx);
    auto edge = [&](std::size_t i) {
        const double mt = (tnext[i] - tprev[i]) * inv_2dt;
        const double mx = (u[(i + 1) % n] - u[(i + n - 1) % n]) * inv_2dx;
        out[i] = mt * mt - mx * mx;
    };
    if (n == 0) return;
    edge(0);
    std::size_t i = 1;
    for (; i + 5 <= n; i += 4) {
        const __m256d mt = _mm256_mul_pd(
            _mm256_sub_pd(_mm256_loadu_pd(tnext + i), _mm256_loadu_pd(tprev + i)),
            st);
        const __m256d mx = _mm256_mul_pd(
            _mm256_sub_pd(_mm256_loadu_pd(u + i + 1), _mm256_loadu_pd(u + i - 1)),
            sx);
        _mm256_storeu_pd(out + i, _mm256_sub_pd(_mm256_mul_pd(mt, mt),
                                                _mm256_mul_pd(mx, mx)));
    }
    for (; i < n; ++i) edge(i);
}

__attribute__((target("avx2"))) void margin_2d_avx2(const double* u,
                                                    const double* tprev,
                                                    const double* tnext,
                                                    double* out, std::size_t nx,
                                                    std::size_t ny,
                                                    double inv_2dt,
                                                    double inv_2dx) {
    const __m256d st = _mm256_set1_pd(inv_2dt);
    const __m256d sx = _mm256_set1_pd(inv_2dx);
    for (std::size_t j = 0; j < ny; ++j) {
        const double* row = u + j * nx;
        const double* rm = u + ((j + ny - 1) % ny) * nx;
        const double* rp = u + ((j + 1) % ny) * nx;
        const double* tp = tprev + j * nx;
        const double* tn = tnext + j * nx;
        double* o = out + j * nx;
        auto edge = [&](std::size_t i) {
            const double mt = (tn[i] - tp[i]) * inv_2dt;
            const double mx =
                (row[(i + 1) % nx] - row[(i + nx - 1) % nx]) * inv_2dx;
            const double my = (rp[i] - rm[i]) * inv_2dx;
            o[i] = mt * mt - mx * mx - my * my;
        };
        edge(0);
        std::size_t i = 1;
        for (; i + 5 <= nx; i += 4) {
            const __m256d mt = _mm256_mul_pd(
                _mm256_sub_pd(_mm256_loadu_pd(tn + i), _mm256_loadu_pd(tp + i)),
                st);
            const __m256d mx = _mm256_mul_pd(
                _mm256_sub_pd(_mm256_loadu_pd(row + i + 1),
                              _mm256_loadu_pd(row + i - 1)),
                sx);
            const __m256d my = _mm256_mul_pd(
                _mm256_sub_pd(_mm256_loadu_pd(rp + i), _mm256_loadu_pd(rm + i)),
                sx);
            __m256d m = _mm256_sub_pd(_mm256_mul_pd(mt, mt), _mm256_mul_pd(mx, mx));
            m = _mm256_sub_pd(m, _mm256_mul_pd(my, my));
            _mm256_storeu_pd(o + i, m);
        }
        for (; i < nx; ++i) edge(i);
    }
}

}  // namespace

const Kernels& avx2_kernels() {
    static const Kernels k{laplacian_1d_avx2, laplacian_2d_avx2, axpy_avx2,
                           margin_1d_avx2, margin_2d_avx2};
    return k;
}

#else

const Kernels& avx2_kernels() { return scalar_kernels(); }

#endif  // RELSIM_X86

}  // namespace relsim::kernels
