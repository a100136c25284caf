#include "pastegen/mesh.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "pastegen/error.hpp"

namespace pastegen {

void TriangleMesh::validate() const {
    if (vertex_colors.size() != vertices.size())
        fail("mesh-invalid", "vertex_colors length " + std::to_string(vertex_colors.size()) +
                                 " != vertex count " + std::to_string(vertices.size()));
    for (const Vec3& v : vertices)
        if (!std::isfinite(v.x) || !std::isfinite(v.y) || !std::isfinite(v.z))
            fail("mesh-invalid", "non-finite vertex coordinate");
    for (const auto& f : faces)
        for (uint32_t idx : f)
            if (idx >= vertices.size())
                fail("mesh-invalid", "face index " + std::to_string(idx) + " out of range");
}

namespace {

[[noreturn]] void parse_fail(const std::string& origin, int line_no, const std::string& what) {
    fail("mesh-parse", origin + ":" + std::to_string(line_no) + ": " + what);
}

bool is_blank(const std::string& s) {
    for (char c : s)
        if (c != ' ' && c != '\t' && c != '\r') return false;
    return true;
}

} // namespace

TriangleMesh parse_mesh(std::istream& in, const std::string& origin) {
    TriangleMesh mesh;
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (is_blank(line) || line[0] == '#') continue;

        std::istringstream ss(line);
        std::string tag;
        ss >> tag;
        if (tag == "v") {
            Vec3 p, c;
            if (!(ss >> p.x >> p.y >> p.z >> c.x >> c.y >> c.z))
                parse_fail(origin, line_no, "expected `v x y z r g b`");
            if (c.x < 0 || c.x > 1 || c.y < 0 || c.y > 1 || c.z < 0 || c.z > 1)
                parse_fail(origin, line_no, "vertex color out of [0,1]");
            mesh.vertices.push_back(p);
            mesh.vertex_colors.push_back(c);
        } else if (tag == "f") {
            long i = 0, j = 0, k = 0;
            if (!(ss >> i >> j >> k)) parse_fail(origin, line_no, "expected `f i j k`");
            if (i < 1 || j < 1 || k < 1) parse_fail(origin, line_no, "face indices are 1-based");
            mesh.faces.push_back({static_cast<uint32_t>(i - 1), static_cast<uint32_t>(j - 1),
                                  static_cast<uint32_t>(k - 1)});
        } else {
            parse_fail(origin, line_no, "unrecognized line `" + line + "`");
        }
        std::string extra;
        if (ss >> extra) parse_fail(origin, line_no, "trailing token `" + extra + "`");
    }
    mesh.validate();
    return mesh;
}

TriangleMesh load_mesh(const std::string& path) {
    std::ifstream in(path);
    if (!in) fail("file-open", "cannot open mesh file " + path);
    return parse_mesh(in, path);
}

void save_mesh(const TriangleMesh& mesh, const std::string& path) {
    std::ofstream out(path);
    if (!out) fail("file-open", "cannot write mesh file " + path);
    char buf[256];
    for (size_t i = 0; i < mesh.vertices.size(); ++i) {
        const Vec3& p = mesh.vertices[i];
        const Vec3& c = mesh.vertex_colors[i];
        std::snprintf(buf, sizeof(buf), "v %.9g %.9g %.9g %.9g %.9g %.9g\n", p.x, p.y, p.z, c.x,
                      c.y, c.z);
        out << buf;
    }
    for (const auto& f : mesh.faces) {
        std::snprintf(buf, sizeof(buf), "f %u %u %u\n", f[0] + 1, f[1] + 1, f[2] + 1);
        out << buf;
    }
    if (!out) fail("file-write", "failed writing " + path);
}

void rotate_z(TriangleMesh& mesh, double degrees) {
    const double rad = degrees * (3.14159265358979323846 / 180.0);
    const double c = std::cos(rad);
    const double s = std::sin(rad);
    for (Vec3& v : mesh.vertices) {
        const double x = v.x * c - v.y * s;
        const double y = v.x * s + v.y * c;
        v.x = x;
        v.y = y;
    }
}

} // namespace pastegen
