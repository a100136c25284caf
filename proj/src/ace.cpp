#include "pastegen/ace.hpp"

#include <cmath>

#include "pastegen/error.hpp"
#include "pastegen/kernels/ace_kernel.hpp"
#include "pastegen/rng.hpp"

namespace pastegen {

void AceParams::validate() const {
    if (!(slope >= 1.0) || !std::isfinite(slope)) fail("bad-ace-params", "slope must be >= 1");
    if (sample_count != kFullSampling && sample_count < 16)
        fail("bad-ace-params", "sample_count must be >= 16 or FULL");
}

ImageU8 ace(const ImageU8& rgb, const AceParams& params) {
    params.validate();
    if (rgb.empty() || rgb.channels != 3) fail("empty-image", "ace wants a non-empty RGB raster");

    const int w = rgb.width, h = rgb.height;
    const size_t n = static_cast<size_t>(w) * h;

    // One sample position list shared by every pixel and every channel. FULL
    // mode enumerates all pixels in row-major order; sampled mode draws
    // positions (with replacement) from the seeded stream.
    std::vector<int> sample_x, sample_y;
    if (params.sample_count == AceParams::kFullSampling) {
        sample_x.reserve(n);
        sample_y.reserve(n);
        for (int y = 0; y < h; ++y)
            for (int x = 0; x < w; ++x) {
                sample_x.push_back(x);
                sample_y.push_back(y);
            }
    } else {
        Rng rng(params.seed);
        sample_x.reserve(params.sample_count);
        sample_y.reserve(params.sample_count);
        for (int i = 0; i < params.sample_count; ++i) {
            sample_x.push_back(static_cast<int>(rng.next_below(static_cast<uint64_t>(w))));
            sample_y.push_back(static_cast<int>(rng.next_below(static_cast<uint64_t>(h))));
        }
    }

    ImageU8 out = ImageU8::make(w, h, 3);
    std::vector<double> plane(n), response(n);
    kernels::AceSamples samples;
    const size_t m = sample_x.size();
    samples.xs.resize(m);
    samples.ys.resize(m);
    samples.values.resize(m);
    for (size_t j = 0; j < m; ++j) {
        samples.xs[j] = static_cast<double>(sample_x[j]);
        samples.ys[j] = static_cast<double>(sample_y[j]);
    }

    for (int c = 0; c < 3; ++c) {
        for (size_t i = 0; i < n; ++i) plane[i] = static_cast<double>(rgb.pixels[i * 3 + c]);
        for (size_t j = 0; j < m; ++j)
            samples.values[j] =
                plane[static_cast<size_t>(sample_y[j]) * w + sample_x[j]];

        kernels::ace_response(plane.data(), w, h, samples, params.slope, response.data());

        double r_max = 0.0;
        for (size_t i = 0; i < n; ++i) {
            const double a = std::fabs(response[i]);
            if (a > r_max) r_max = a;
        }

        if (r_max == 0.0) {
            for (size_t i = 0; i < n; ++i)
                out.pixels[i * 3 + c] = static_cast<uint8_t>(kAceMidLevel);
            continue;
        }
        for (size_t i = 0; i < n; ++i) {
            const long code = std::lround(127.5 + 127.5 * (response[i] / r_max));
            out.pixels[i * 3 + c] = static_cast<uint8_t>(code < 0 ? 0 : (code > 255 ? 255 : code));
        }
    }
    return out;
}

std::vector<BackgroundScene> equalize_backgrounds(const std::vector<BackgroundScene>& backgrounds,
                                                  int variants_per_background,
                                                  const AceParams& base) {
    if (variants_per_background < 0)
        fail("bad-ace-params", "variants_per_background must be >= 0");
    std::vector<BackgroundScene> out;
    out.reserve(backgrounds.size() * (1 + variants_per_background));
    for (size_t bi = 0; bi < backgrounds.size(); ++bi) {
        out.push_back(backgrounds[bi]);
        for (int vi = 0; vi < variants_per_background; ++vi) {
            AceParams p = base;
            p.seed = base.seed + static_cast<uint64_t>(bi) * 1000 + static_cast<uint64_t>(vi);
            BackgroundScene variant;
            variant.scene_id = backgrounds[bi].scene_id + "_ace" + std::to_string(vi);
            variant.raster = ace(backgrounds[bi].raster, p);
            variant.anchors = backgrounds[bi].anchors;
            out.push_back(std::move(variant));
        }
    }
    return out;
}

} // namespace pastegen
