#include "pastegen/kernels/ace_kernel.hpp"

#include <cmath>

#include "pastegen/kernels/dispatch.hpp"

namespace pastegen::kernels {

// Reference kernel. The vector variants replicate this operation sequence
// lane-for-lane (mul, div, clamp, two muls + add, sqrt, div, add), so keep it
// free of algebraic shortcuts; the build disables FP contraction.
void ace_response_scalar(const double* plane, int width, int height,
                         const AceSamples& samples, double slope, double* response) {
    const size_t sample_count = samples.xs.size();
    for (int y = 0; y < height; ++y) {
        const double py = static_cast<double>(y);
        for (int x = 0; x < width; ++x) {
            const double px = static_cast<double>(x);
            const double value = plane[static_cast<size_t>(y) * width + x];
            double acc = 0.0;
            for (size_t j = 0; j < sample_count; ++j) {
                const double dx = px - samples.xs[j];
                const double dy = py - samples.ys[j];
                const double d2 = dx * dx + dy * dy;
                if (d2 == 0.0) continue; // the sample is this pixel
                const double dist = std::sqrt(d2);
                double t = slope * (value - samples.values[j]);
                t = t / 255.0;
                if (t < -1.0) t = -1.0;
                if (t > 1.0) t = 1.0;
                acc += t / dist;
            }
            response[static_cast<size_t>(y) * width + x] = acc;
        }
    }
}

void ace_response(const double* plane, int width, int height, const AceSamples& samples,
                  double slope, double* response) {
#if defined(__x86_64__) || defined(__i386__)
    if (active_isa() == Isa::avx2) {
        ace_response_avx2(plane, width, height, samples, slope, response);
        return;
    }
#endif
    ace_response_scalar(plane, width, height, samples, slope, response);
}

} // namespace pastegen::kernels
