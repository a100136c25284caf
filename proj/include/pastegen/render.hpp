#pragma once

#include <string>
#include <vector>

#include "pastegen/image.hpp"
#include "pastegen/mesh.hpp"

namespace pastegen {

// Orthographic view of a mesh. The mesh is rotated by azimuth about the
// vertical (z) axis, then by elevation about the horizontal (x) axis so that
// positive elevation looks down from above; the projection then drops the
// depth axis and auto-fits the projected extent into the image minus the
// margin.
struct ViewSpec {
    double azimuth = 0.0;   // degrees, [0, 360)
    double elevation = 0.0; // degrees, [-90, 90]
    int width = 256;
    int height = 256;
    double fit_margin = 0.1; // fraction of image size, strictly in (0, 0.5)
    bool supersample = false; // 4x coverage sampling -> fractional alpha

    void validate() const;
};

struct SpriteRender {
    ImageU8 rgba;       // unlit interpolated vertex color; alpha = coverage
    IntRect tight_bbox; // support of alpha > 0, recomputable from the raster
};

SpriteRender render_view(const TriangleMesh& mesh, const ViewSpec& view);

struct GridSprite {
    int variant = 0; // 0 = upright, 1 = flipped
    int elevation_index = 0;
    int azimuth_index = 0;
    double azimuth = 0.0;
    double elevation = 0.0;
    SpriteRender render;
};

// Renders azimuth_count uniformly spaced azimuths for every elevation and
// variant. Ordering is variant-major, then elevation, then azimuth. Azimuth
// slots are produced by iterated application of the single step rotation, so
// pre-rotating the mesh by one step and re-rendering slot k reproduces slot
// k+1 bit-exactly.
std::vector<GridSprite> render_view_grid(const TriangleMesh& upright,
                                         const TriangleMesh* flipped, int azimuth_count,
                                         const std::vector<double>& elevations,
                                         const ViewSpec& view_template);

} // namespace pastegen
