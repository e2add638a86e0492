#include "aerobench/mesh.hpp"

#include "aerobench/error.hpp"
#include "aerobench/kahan.hpp"

namespace aerobench {

char category_code(Category c) {
    switch (c) {
    case Category::Fastback: return 'F';
    case Category::Estateback: return 'E';
    case Category::Notchback: return 'N';
    case Category::Unknown: return 'U';
    }
    return 'U';
}

Category category_from_code(char code) {
    switch (code) {
    case 'F': return Category::Fastback;
    case 'E': return Category::Estateback;
    case 'N': return Category::Notchback;
    case 'U': return Category::Unknown;
    default:
        raise(ErrorCode::MissingField, std::string("unknown category code '") + code + "'");
    }
}

const char* category_name(Category c) {
    switch (c) {
    case Category::Fastback: return "Fastback";
    case Category::Estateback: return "Estateback";
    case Category::Notchback: return "Notchback";
    case Category::Unknown: return "Unknown";
    }
    return "Unknown";
}

Category category_from_design_id(const std::string& design_id) {
    if (design_id.size() >= 2 && design_id[1] == '_') {
        switch (design_id[0]) {
        case 'F': return Category::Fastback;
        case 'E': return Category::Estateback;
        case 'N': return Category::Notchback;
        default: break;
        }
    }
    return Category::Unknown;
}

const std::vector<double>* SurfaceMesh::find_field(const std::string& name) const {
    for (const auto& [field_name, values] : point_fields)
        if (field_name == name) return &values;
    return nullptr;
}

void SurfaceMesh::validate() const {
    const std::uint64_t n = vertices.size();
    for (const auto& tri : triangles)
        for (std::uint32_t idx : tri)
            if (idx >= n)
                raise(ErrorCode::IndexOutOfRange,
                      "triangle index " + std::to_string(idx) + " >= vertex count " +
                          std::to_string(n) + " in design " + design_id);
    for (const auto& [name, values] : point_fields)
        if (values.size() != n)
            raise(ErrorCode::MissingField,
                  "field '" + name + "' has " + std::to_string(values.size()) +
                      " values for " + std::to_string(n) + " vertices in design " + design_id);
    if (vertex_normals && vertex_normals->size() != n)
        raise(ErrorCode::MissingField,
              "normals array length mismatch in design " + design_id);
}

GeometryStats geometry_stats(const SurfaceMesh& mesh) {
    GeometryStats stats;
    stats.n_points = mesh.vertices.size();
    stats.n_cells = mesh.triangles.size();
    KahanSum area;
    for (const auto& tri : mesh.triangles) {
        const Vec3& a = mesh.vertices[tri[0]];
        const Vec3& b = mesh.vertices[tri[1]];
        const Vec3& c = mesh.vertices[tri[2]];
        area.add(0.5 * norm(cross(b - a, c - a)));
    }
    stats.surface_area = area.value();
    return stats;
}

std::vector<Vec3> compute_vertex_normals(const SurfaceMesh& mesh) {
    std::vector<Vec3> accum(mesh.vertices.size(), Vec3{});
    for (const auto& tri : mesh.triangles) {
        const Vec3& a = mesh.vertices[tri[0]];
        const Vec3& b = mesh.vertices[tri[1]];
        const Vec3& c = mesh.vertices[tri[2]];
        // Cross product magnitude is twice the face area, so summing the raw
        // cross products area-weights the average.
        const Vec3 n = cross(b - a, c - a);
        for (std::uint32_t idx : tri) accum[idx] = accum[idx] + n;
    }
    for (auto& n : accum) {
        const double len = norm(n);
        if (len > 1e-30)
            n = n / len;
        else
            n = Vec3{0.0, 0.0, 1.0};
    }
    return accum;
}

} // namespace aerobench
