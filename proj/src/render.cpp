#include "pastegen/render.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "pastegen/error.hpp"

namespace pastegen {

namespace {

constexpr double kPi = 3.14159265358979323846;

struct ScreenVertex {
    double x, y;  // raster coordinates
    double depth; // camera-space depth, smaller is closer
    Vec3 color;
};

// Rasterizes into an RGBA target with a z-buffer. Pixel centers only; the
// caller picks the resolution (2x for supersampling). Depth ties keep the
// earlier face (strict less-than test, faces visited in index order).
void rasterize(const TriangleMesh& mesh, const std::vector<ScreenVertex>& pts, ImageU8* target) {
    const int w = target->width;
    const int h = target->height;
    std::vector<double> zbuf(static_cast<size_t>(w) * h,
                             std::numeric_limits<double>::infinity());

    for (const auto& face : mesh.faces) {
        const ScreenVertex& a = pts[face[0]];
        const ScreenVertex& b = pts[face[1]];
        const ScreenVertex& c = pts[face[2]];

        const double area2 = (b.x - a.x) * (c.y - a.y) - (c.x - a.x) * (b.y - a.y);
        if (area2 == 0.0) continue;

        const double min_x = std::min({a.x, b.x, c.x});
        const double max_x = std::max({a.x, b.x, c.x});
        const double min_y = std::min({a.y, b.y, c.y});
        const double max_y = std::max({a.y, b.y, c.y});
        const int x0 = std::max(0, static_cast<int>(std::floor(min_x)) - 1);
        const int x1 = std::min(w - 1, static_cast<int>(std::ceil(max_x)) + 1);
        const int y0 = std::max(0, static_cast<int>(std::floor(min_y)) - 1);
        const int y1 = std::min(h - 1, static_cast<int>(std::ceil(max_y)) + 1);

        for (int py = y0; py <= y1; ++py) {
            const double sy = py + 0.5;
            for (int px = x0; px <= x1; ++px) {
                const double sx = px + 0.5;
                double e0 = (c.x - b.x) * (sy - b.y) - (c.y - b.y) * (sx - b.x);
                double e1 = (a.x - c.x) * (sy - c.y) - (a.y - c.y) * (sx - c.x);
                double e2 = (b.x - a.x) * (sy - a.y) - (b.y - a.y) * (sx - a.x);
                if (area2 < 0.0) {
                    e0 = -e0;
                    e1 = -e1;
                    e2 = -e2;
                }
                if (e0 < 0.0 || e1 < 0.0 || e2 < 0.0) continue;

                const double abs_area = area2 < 0.0 ? -area2 : area2;
                const double w1 = e1 / abs_area;
                const double w2 = e2 / abs_area;
                const double depth = a.depth + w1 * (b.depth - a.depth) + w2 * (c.depth - a.depth);

                double& z = zbuf[static_cast<size_t>(py) * w + px];
                if (!(depth < z)) continue;
                z = depth;

                // Delta-form interpolation: identical vertex colors reproduce
                // the color exactly regardless of barycentric round-off.
                const double cr = a.color.x + w1 * (b.color.x - a.color.x) +
                                  w2 * (c.color.x - a.color.x);
                const double cg = a.color.y + w1 * (b.color.y - a.color.y) +
                                  w2 * (c.color.y - a.color.y);
                const double cb = a.color.z + w1 * (b.color.z - a.color.z) +
                                  w2 * (c.color.z - a.color.z);
                uint8_t* out = &target->at(px, py, 0);
                out[0] = static_cast<uint8_t>(std::lround(255.0 * std::clamp(cr, 0.0, 1.0)));
                out[1] = static_cast<uint8_t>(std::lround(255.0 * std::clamp(cg, 0.0, 1.0)));
                out[2] = static_cast<uint8_t>(std::lround(255.0 * std::clamp(cb, 0.0, 1.0)));
                out[3] = 255;
            }
        }
    }
}

ImageU8 downsample2x(const ImageU8& big) {
    ImageU8 out = ImageU8::make(big.width / 2, big.height / 2, 4);
    for (int y = 0; y < out.height; ++y) {
        for (int x = 0; x < out.width; ++x) {
            int covered = 0;
            long sr = 0, sg = 0, sb = 0;
            for (int sy = 0; sy < 2; ++sy) {
                for (int sx = 0; sx < 2; ++sx) {
                    const int bx = x * 2 + sx;
                    const int by = y * 2 + sy;
                    if (big.at(bx, by, 3) == 0) continue;
                    ++covered;
                    sr += big.at(bx, by, 0);
                    sg += big.at(bx, by, 1);
                    sb += big.at(bx, by, 2);
                }
            }
            if (covered == 0) continue;
            out.at(x, y, 0) = static_cast<uint8_t>((sr + covered / 2) / covered);
            out.at(x, y, 1) = static_cast<uint8_t>((sg + covered / 2) / covered);
            out.at(x, y, 2) = static_cast<uint8_t>((sb + covered / 2) / covered);
            out.at(x, y, 3) = static_cast<uint8_t>(std::lround(255.0 * covered / 4.0));
        }
    }
    return out;
}

} // namespace

void ViewSpec::validate() const {
    if (width < 8 || height < 8) fail("bad-view", "image dimensions must be >= 8 px");
    if (!(fit_margin > 0.0 && fit_margin < 0.5))
        fail("bad-view", "fit_margin must be strictly between 0 and 0.5");
    if (!(azimuth >= 0.0 && azimuth < 360.0)) fail("bad-view", "azimuth must be in [0, 360)");
    if (!(elevation >= -90.0 && elevation <= 90.0))
        fail("bad-view", "elevation must be in [-90, 90]");
}

SpriteRender render_view(const TriangleMesh& mesh, const ViewSpec& view) {
    view.validate();
    if (mesh.empty()) fail("empty-mesh", "mesh has no vertices or faces");
    mesh.validate();

    const double az = view.azimuth * (kPi / 180.0);
    const double el = view.elevation * (kPi / 180.0);
    const double caz = std::cos(az), saz = std::sin(az);
    const double cel = std::cos(el), sel = std::sin(el);

    // Rotate, then read off the orthographic frame: screen-x = x, screen-up =
    // z, depth = y (camera on -y looking at +y).
    std::vector<ScreenVertex> pts(mesh.vertices.size());
    double min_x = std::numeric_limits<double>::infinity(), max_x = -min_x;
    double min_z = std::numeric_limits<double>::infinity(), max_z = -min_z;
    for (size_t i = 0; i < mesh.vertices.size(); ++i) {
        const Vec3& v = mesh.vertices[i];
        const double rx = v.x * caz - v.y * saz;
        const double ry = v.x * saz + v.y * caz;
        const double ty = ry * cel - v.z * sel;
        const double tz = ry * sel + v.z * cel;
        pts[i].x = rx;
        pts[i].y = tz;
        pts[i].depth = ty;
        pts[i].color = mesh.vertex_colors[i];
        min_x = std::min(min_x, rx);
        max_x = std::max(max_x, rx);
        min_z = std::min(min_z, tz);
        max_z = std::max(max_z, tz);
    }

    const double ext_x = max_x - min_x;
    const double ext_z = max_z - min_z;
    if (ext_x <= 0.0 && ext_z <= 0.0)
        fail("degenerate-projection", "projected extent is zero in both axes");

    const double avail_w = view.width * (1.0 - 2.0 * view.fit_margin);
    const double avail_h = view.height * (1.0 - 2.0 * view.fit_margin);
    double scale = std::numeric_limits<double>::infinity();
    if (ext_x > 0.0) scale = std::min(scale, avail_w / ext_x);
    if (ext_z > 0.0) scale = std::min(scale, avail_h / ext_z);

    const double mid_x = (min_x + max_x) * 0.5;
    const double mid_z = (min_z + max_z) * 0.5;

    const int f = view.supersample ? 2 : 1;
    const double fs = scale * f;
    for (ScreenVertex& p : pts) {
        const double wx = p.x;
        const double wz = p.y;
        p.x = view.width * 0.5 * f + fs * (wx - mid_x);
        p.y = view.height * 0.5 * f - fs * (wz - mid_z);
    }

    ImageU8 raster = ImageU8::make(view.width * f, view.height * f, 4);
    rasterize(mesh, pts, &raster);
    if (f == 2) raster = downsample2x(raster);

    SpriteRender out;
    out.rgba = std::move(raster);
    if (!tight_alpha_bbox(out.rgba, &out.tight_bbox))
        fail("degenerate-projection", "projection covers no pixel centers");
    return out;
}

std::vector<GridSprite> render_view_grid(const TriangleMesh& upright,
                                         const TriangleMesh* flipped, int azimuth_count,
                                         const std::vector<double>& elevations,
                                         const ViewSpec& view_template) {
    if (azimuth_count < 1) fail("bad-view-grid", "azimuth_count must be >= 1");
    if (elevations.empty()) fail("bad-view-grid", "elevations must be non-empty");
    for (double e : elevations)
        if (!(e >= 0.0 && e <= 90.0))
            fail("bad-view-grid", "elevations must lie in [0, 90] (upper hemisphere)");

    const double step = 360.0 / azimuth_count;
    std::vector<GridSprite> out;
    out.reserve(static_cast<size_t>(azimuth_count) * elevations.size() * (flipped ? 2 : 1));

    const TriangleMesh* variants[2] = {&upright, flipped};
    for (int variant = 0; variant < (flipped ? 2 : 1); ++variant) {
        for (size_t ei = 0; ei < elevations.size(); ++ei) {
            TriangleMesh work = *variants[variant];
            for (int ai = 0; ai < azimuth_count; ++ai) {
                if (ai > 0) rotate_z(work, step);
                ViewSpec vs = view_template;
                vs.azimuth = 0.0;
                vs.elevation = elevations[ei];
                GridSprite g;
                g.variant = variant;
                g.elevation_index = static_cast<int>(ei);
                g.azimuth_index = ai;
                g.azimuth = step * ai;
                g.elevation = elevations[ei];
                try {
                    g.render = render_view(work, vs);
                } catch (const Error& e) {
                    fail(e.code(), std::string(e.what()) + " (variant=" + std::to_string(variant) +
                                       " elevation=" + std::to_string(elevations[ei]) +
                                       " azimuth=" + std::to_string(g.azimuth) + ")");
                }
                out.push_back(std::move(g));
            }
        }
    }
    return out;
}

} // namespace pastegen
