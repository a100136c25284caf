#if defined(__x86_64__) || defined(__i386__)

#include <immintrin.h>

#include "pastegen/kernels/ace_kernel.hpp"

namespace pastegen::kernels {

// Vectorizes across 4 pixels of one row; the per-pixel sample loop stays in
// list order, and only plain mul/add/div/sqrt/min/max are used (no FMA), so
// each lane performs exactly the scalar kernel's IEEE operation sequence and
// the result is bit-identical to ace_response_scalar.
void ace_response_avx2(const double* plane, int width, int height,
                       const AceSamples& samples, double slope, double* response) {
    const size_t sample_count = samples.xs.size();
    const __m256d v_slope = _mm256_set1_pd(slope);
    const __m256d v_inv255 = _mm256_set1_pd(255.0);
    const __m256d v_neg1 = _mm256_set1_pd(-1.0);
    const __m256d v_pos1 = _mm256_set1_pd(1.0);
    const __m256d v_zero = _mm256_setzero_pd();

    for (int y = 0; y < height; ++y) {
        const double py = static_cast<double>(y);
        const __m256d v_py = _mm256_set1_pd(py);
        const double* in_row = plane + static_cast<size_t>(y) * width;
        double* out_row = response + static_cast<size_t>(y) * width;

        int x = 0;
        for (; x + 4 <= width; x += 4) {
            const __m256d v_px = _mm256_set_pd(static_cast<double>(x + 3), static_cast<double>(x + 2),
                                               static_cast<double>(x + 1), static_cast<double>(x));
            const __m256d v_val = _mm256_loadu_pd(in_row + x);
            __m256d acc = v_zero;
            for (size_t j = 0; j < sample_count; ++j) {
                const __m256d dx = _mm256_sub_pd(v_px, _mm256_set1_pd(samples.xs[j]));
                const __m256d dy = _mm256_sub_pd(v_py, _mm256_set1_pd(samples.ys[j]));
                const __m256d d2 =
                    _mm256_add_pd(_mm256_mul_pd(dx, dx), _mm256_mul_pd(dy, dy));
                const __m256d same = _mm256_cmp_pd(d2, v_zero, _CMP_EQ_OQ);
                const __m256d dist = _mm256_sqrt_pd(d2);
                __m256d t = _mm256_mul_pd(v_slope,
                                          _mm256_sub_pd(v_val, _mm256_set1_pd(samples.values[j])));
                t = _mm256_div_pd(t, v_inv255);
                t = _mm256_max_pd(t, v_neg1);
                t = _mm256_min_pd(t, v_pos1);
                // Same-pixel lanes contribute +0.0 (0/1), matching the scalar skip.
                const __m256d num = _mm256_andnot_pd(same, t);
                const __m256d den = _mm256_blendv_pd(dist, v_pos1, same);
                acc = _mm256_add_pd(acc, _mm256_div_pd(num, den));
            }
            _mm256_storeu_pd(out_row + x, acc);
        }

        // Row tail: scalar reference sequence.
        for (; x < width; ++x) {
            const double px = static_cast<double>(x);
            const double value = in_row[x];
            double acc = 0.0;
            for (size_t j = 0; j < sample_count; ++j) {
                const double dx = px - samples.xs[j];
                const double dy = py - samples.ys[j];
                const double d2 = dx * dx + dy * dy;
                if (d2 == 0.0) continue;
                const double dist = __builtin_sqrt(d2);
                double t = slope * (value - samples.values[j]);
                t = t / 255.0;
                if (t < -1.0) t = -1.0;
                if (t > 1.0) t = 1.0;
                acc += t / dist;
            }
            out_row[x] = acc;
        }
    }
}

} // namespace pastegen::kernels

#endif
