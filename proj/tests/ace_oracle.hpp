#pragma once

// Independent O(N^2) transcription of full-sampling ACE, kept deliberately
// naive (direct double loop over every pixel pair, no sampling machinery, no
// kernels). Tests compare production output against this byte for byte.

#include <cmath>
#include <vector>

#include "pastegen/image.hpp"

namespace testutil {

inline pastegen::ImageU8 ace_full_oracle(const pastegen::ImageU8& rgb, double slope) {
    const int w = rgb.width, h = rgb.height;
    pastegen::ImageU8 out = pastegen::ImageU8::make(w, h, 3);

    for (int c = 0; c < 3; ++c) {
        std::vector<double> response(static_cast<size_t>(w) * h, 0.0);
        for (int py = 0; py < h; ++py) {
            for (int px = 0; px < w; ++px) {
                const double ip = rgb.at(px, py, c);
                double sum = 0.0;
                for (int jy = 0; jy < h; ++jy) {
                    for (int jx = 0; jx < w; ++jx) {
                        if (jx == px && jy == py) continue;
                        const double dx = static_cast<double>(px) - static_cast<double>(jx);
                        const double dy = static_cast<double>(py) - static_cast<double>(jy);
                        const double dist = std::sqrt(dx * dx + dy * dy);
                        double r = slope * (ip - rgb.at(jx, jy, c));
                        r = r / 255.0;
                        if (r < -1.0) r = -1.0;
                        if (r > 1.0) r = 1.0;
                        sum += r / dist;
                    }
                }
                response[static_cast<size_t>(py) * w + px] = sum;
            }
        }

        double r_max = 0.0;
        for (double v : response) r_max = std::max(r_max, std::fabs(v));
        for (int py = 0; py < h; ++py) {
            for (int px = 0; px < w; ++px) {
                int code;
                if (r_max == 0.0) {
                    code = 128;
                } else {
                    code = static_cast<int>(std::lround(
                        127.5 + 127.5 * (response[static_cast<size_t>(py) * w + px] / r_max)));
                    if (code < 0) code = 0;
                    if (code > 255) code = 255;
                }
                out.at(px, py, c) = static_cast<uint8_t>(code);
            }
        }
    }
    return out;
}

} // namespace testutil
