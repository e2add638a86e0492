// native_io.hpp — the ABM1 mesh cache format.
//
// A compact little-endian binary container for a SurfaceMesh: magic "ABM1",
// u32 version, then a CRC32-protected payload holding the design id, category
// code, vertices, triangles, and named point fields. Vertex normals are not
// part of the format; they are recomputed on demand.
#pragma once

#include <filesystem>
#include <iosfwd>

#include "aerobench/mesh.hpp"

namespace aerobench {

inline constexpr std::uint32_t kNativeVersion = 1;

void write_native(const SurfaceMesh& mesh, std::ostream& os);
void write_native_file(const SurfaceMesh& mesh, const std::filesystem::path& path);

SurfaceMesh parse_native(std::istream& is);
SurfaceMesh parse_native_file(const std::filesystem::path& path);

// Loads a mesh from either format: files starting with the ABM1 magic are
// parsed natively, anything else is treated as legacy VTK.
SurfaceMesh load_mesh_auto(const std::filesystem::path& path,
                           const std::string& design_id_hint = {});

} // namespace aerobench
