#pragma once

#include <cstdint>
#include <vector>

#include "pastegen/image.hpp"
#include "pastegen/scene.hpp"

namespace pastegen {

// Automatic color equalization. Stage 1 computes, per channel, a spatially
// weighted saturation-clipped difference response against a shared sample
// set; stage 2 rescales the response so +/-R_max hit the code range ends and
// zero response lands exactly on mid level 128.
struct AceParams {
    static constexpr int kFullSampling = 0; // exact O(N^2), every pixel is a sample

    double slope = 5.0;      // saturation gain, >= 1
    int sample_count = 1024; // >= 16, or kFullSampling
    uint64_t seed = 0;       // sample-draw seed (unused in FULL mode)

    void validate() const;
};

// Output code for a zero response; uniform inputs map every pixel here.
constexpr int kAceMidLevel = 128;

// Deterministic in (image, params) regardless of ISA or caller threading.
ImageU8 ace(const ImageU8& rgb, const AceParams& params);

// Each input scene followed by variants_per_background ACE recolorings of it,
// derived seed = base.seed + background_index*1000 + variant_index; anchors
// copied unchanged, variant scene ids get an "_aceK" suffix.
std::vector<BackgroundScene> equalize_backgrounds(const std::vector<BackgroundScene>& backgrounds,
                                                  int variants_per_background,
                                                  const AceParams& base);

} // namespace pastegen
