#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

namespace pastegen {

struct Vec3 {
    double x = 0.0;
    double y = 0.0;
    double z = 0.0;
};

// Colored triangle soup from a turntable scan. Positions in millimeters,
// per-vertex RGB in [0,1] (scan appearance is baked into vertex colors; no
// lighting model anywhere downstream).
struct TriangleMesh {
    std::vector<Vec3> vertices;
    std::vector<std::array<uint32_t, 3>> faces;
    std::vector<Vec3> vertex_colors;

    bool empty() const { return vertices.empty() || faces.empty(); }
    void validate() const; // throws Error on invariant violations
};

// Line-oriented ASCII format:
//   v x y z r g b     vertex position (floats) + color in [0,1]
//   f i j k           1-based vertex indices
//   # ...             comment; blank lines allowed
// Anything else is a parse error reported with its line number.
TriangleMesh load_mesh(const std::string& path);
TriangleMesh parse_mesh(std::istream& in, const std::string& origin);
void save_mesh(const TriangleMesh& mesh, const std::string& path);

// In-place rotation about the vertical (z) axis; also the building block the
// azimuth grid uses, which is what makes grid slots exactly composable.
void rotate_z(TriangleMesh& mesh, double degrees);

} // namespace pastegen
