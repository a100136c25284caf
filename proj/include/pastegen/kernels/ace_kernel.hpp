#pragma once

#include <vector>

namespace pastegen::kernels {

// One channel's sample set for the ACE stage-1 response. positions/values are
// parallel arrays; the same list is shared by every target pixel. Order is
// part of the contract: per-pixel sums accumulate in list order, which is
// what makes scalar and vector kernels bit-identical and the whole stage
// schedule-independent.
struct AceSamples {
    std::vector<double> xs;
    std::vector<double> ys;
    std::vector<double> values; // channel codes, 0..255
};

// response[p] = sum over samples j (skipping samples located at p) of
//   clamp(slope * (plane[p] - value[j]) / 255, -1, +1) / dist(p, j)
// plane is a width*height row-major array of channel codes.
void ace_response_scalar(const double* plane, int width, int height,
                         const AceSamples& samples, double slope, double* response);

#if defined(__x86_64__) || defined(__i386__)
// Vectorizes across pixels (4 doubles per lane group); per-pixel operation
// sequence matches the scalar kernel exactly.
void ace_response_avx2(const double* plane, int width, int height,
                       const AceSamples& samples, double slope, double* response);
#endif

// Dispatches on active_isa().
void ace_response(const double* plane, int width, int height, const AceSamples& samples,
                  double slope, double* response);

} // namespace pastegen::kernels
