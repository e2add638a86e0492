// mesh.hpp — triangulated surface meshes with per-vertex scalar fields.
//
// Positions are meters; the pressure field is kinematic pressure (p/rho) in
// m^2/s^2. Meshes are immutable after construction as far as the pipeline is
// concerned and safe to share across threads.
#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "aerobench/geometry.hpp"

namespace aerobench {

enum class Category : std::uint8_t {
    Fastback = 0,
    Estateback = 1,
    Notchback = 2,
    Unknown = 3,
};

// Single-letter codes used by manifests and the native cache format.
char category_code(Category c);
Category category_from_code(char code);
const char* category_name(Category c);

// Infers the category from a design-id prefix (F_/E_/N_); a manifest entry
// overrides this when the two disagree.
Category category_from_design_id(const std::string& design_id);

struct SurfaceMesh {
    std::string design_id;
    Category category = Category::Unknown;
    std::vector<Vec3> vertices;
    std::vector<std::array<std::uint32_t, 3>> triangles;
    // Name/value pairs in declaration order; every array has one value per
    // vertex.
    std::vector<std::pair<std::string, std::vector<double>>> point_fields;
    std::optional<std::vector<Vec3>> vertex_normals;

    const std::vector<double>* find_field(const std::string& name) const;

    // Throws on broken invariants: triangle index out of range or a field
    // whose length disagrees with the vertex count.
    void validate() const;
};

struct GeometryStats {
    std::uint64_t n_points = 0;
    std::uint64_t n_cells = 0;
    double surface_area = 0.0;
};

GeometryStats geometry_stats(const SurfaceMesh& mesh);

// Area-weighted average of incident face normals, unit-normalized. Vertices
// with no incident area get a fixed +z fallback so the result is always unit
// length.
std::vector<Vec3> compute_vertex_normals(const SurfaceMesh& mesh);

} // namespace aerobench
