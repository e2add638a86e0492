// vtk_io.hpp — legacy-VTK POLYDATA reader and writer.
//
// Supports ASCII and binary encodings of the legacy (non-XML) format with
// POINTS, POLYGONS, and POINT_DATA sections. Binary payloads are big-endian
// per the legacy format definition. Other dataset types are rejected.
#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <string_view>

#include "aerobench/mesh.hpp"

namespace aerobench {

struct VtkParseOptions {
    // Stored on the mesh; the category is inferred from its prefix.
    std::string design_id;
    // When true, any polygon with more or fewer than three vertices is an
    // error. When false, larger polygons are fan-triangulated from their
    // first vertex.
    bool strict_triangles = false;
};

SurfaceMesh parse_vtk_polydata(std::string_view bytes, const VtkParseOptions& opts = {});

// Reads the whole file; the default design_id is the filename stem.
SurfaceMesh parse_vtk_polydata_file(const std::filesystem::path& path,
                                    VtkParseOptions opts = {});

// Writes a mesh back out, mainly for fixtures and cache-free interchange.
// The first point field is emitted as a SCALARS section, the rest as a FIELD
// block; vertex normals, when present, are emitted as a NORMALS section.
void write_vtk_polydata(const SurfaceMesh& mesh, std::ostream& os, bool binary);
void write_vtk_polydata_file(const SurfaceMesh& mesh, const std::filesystem::path& path,
                             bool binary);

} // namespace aerobench
