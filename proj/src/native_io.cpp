#include "aerobench/native_io.hpp"

#include <fstream>
#include <sstream>

#include "aerobench/binio.hpp"
#include "aerobench/error.hpp"
#include "aerobench/vtk_io.hpp"

namespace aerobench {

namespace {

constexpr char kMagic[4] = {0x41, 0x42, 0x4D, 0x31}; // "ABM1"
constexpr std::endian kOrder = std::endian::little;

} // namespace

void write_native(const SurfaceMesh& mesh, std::ostream& os) {
    os.write(kMagic, 4);
    write_value<std::uint32_t>(os, kNativeVersion, kOrder);

    CrcOstream body(os);
    body.write_string_u64(mesh.design_id, kOrder);
    body.write<std::uint8_t>(static_cast<std::uint8_t>(category_code(mesh.category)), kOrder);

    body.write<std::uint64_t>(mesh.vertices.size(), kOrder);
    for (const Vec3& v : mesh.vertices) {
        body.write<double>(v.x, kOrder);
        body.write<double>(v.y, kOrder);
        body.write<double>(v.z, kOrder);
    }

    body.write<std::uint64_t>(mesh.triangles.size(), kOrder);
    for (const auto& tri : mesh.triangles)
        for (std::uint32_t idx : tri) body.write<std::uint32_t>(idx, kOrder);

    body.write<std::uint32_t>(static_cast<std::uint32_t>(mesh.point_fields.size()), kOrder);
    for (const auto& [name, values] : mesh.point_fields) {
        body.write_string_u64(name, kOrder);
        body.write<std::uint64_t>(values.size(), kOrder);
        for (double v : values) body.write<double>(v, kOrder);
    }

    write_value<std::uint32_t>(os, body.crc(), kOrder);
    if (!os) raise(ErrorCode::IoFailure, "write failed for native mesh stream");
}

void write_native_file(const SurfaceMesh& mesh, const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) raise(ErrorCode::IoFailure, "cannot open " + path.string() + " for writing");
    write_native(mesh, out);
    if (!out) raise(ErrorCode::IoFailure, "failed writing " + path.string());
}

SurfaceMesh parse_native(std::istream& is) {
    char magic[4];
    is.read(magic, 4);
    if (!is || std::memcmp(magic, kMagic, 4) != 0)
        raise(ErrorCode::BadMagic, "not an ABM1 mesh file");
    const auto version = read_value<std::uint32_t>(is, kOrder, "version");
    if (version != kNativeVersion)
        raise(ErrorCode::VersionMismatch,
              "ABM1 version " + std::to_string(version) + " (expected " +
                  std::to_string(kNativeVersion) + ")");

    CrcIstream body(is);
    SurfaceMesh mesh;
    mesh.design_id = body.read_string_u64(kOrder, "design id");
    mesh.category =
        category_from_code(static_cast<char>(body.read<std::uint8_t>(kOrder, "category")));

    const auto n_vertices = body.read<std::uint64_t>(kOrder, "vertex count");
    mesh.vertices.resize(n_vertices);
    for (std::uint64_t i = 0; i < n_vertices; ++i) {
        mesh.vertices[i].x = body.read<double>(kOrder, "vertex data");
        mesh.vertices[i].y = body.read<double>(kOrder, "vertex data");
        mesh.vertices[i].z = body.read<double>(kOrder, "vertex data");
    }

    const auto n_triangles = body.read<std::uint64_t>(kOrder, "triangle count");
    mesh.triangles.resize(n_triangles);
    for (std::uint64_t i = 0; i < n_triangles; ++i)
        for (int k = 0; k < 3; ++k)
            mesh.triangles[i][k] = body.read<std::uint32_t>(kOrder, "triangle data");

    const auto n_fields = body.read<std::uint32_t>(kOrder, "field count");
    mesh.point_fields.reserve(n_fields);
    for (std::uint32_t f = 0; f < n_fields; ++f) {
        std::string name = body.read_string_u64(kOrder, "field name");
        const auto count = body.read<std::uint64_t>(kOrder, "field value count");
        std::vector<double> values(count);
        for (std::uint64_t i = 0; i < count; ++i)
            values[i] = body.read<double>(kOrder, "field data");
        mesh.point_fields.emplace_back(std::move(name), std::move(values));
    }

    const std::uint32_t expected = body.crc();
    const auto stored = read_value<std::uint32_t>(is, kOrder, "checksum");
    if (stored != expected)
        raise(ErrorCode::ChecksumMismatch,
              "ABM1 checksum mismatch for design " + mesh.design_id);

    mesh.validate();
    return mesh;
}

SurfaceMesh parse_native_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) raise(ErrorCode::IoFailure, "cannot open " + path.string());
    return parse_native(in);
}

SurfaceMesh load_mesh_auto(const std::filesystem::path& path, const std::string& design_id_hint) {
    std::ifstream in(path, std::ios::binary);
    if (!in) raise(ErrorCode::IoFailure, "cannot open " + path.string());
    char magic[4] = {};
    in.read(magic, 4);
    const bool have_magic = in.gcount() == 4;
    in.clear();
    in.seekg(0);
    if (have_magic && std::memcmp(magic, kMagic, 4) == 0) {
        SurfaceMesh mesh = parse_native(in);
        if (!design_id_hint.empty() && mesh.design_id != design_id_hint) {
            mesh.design_id = design_id_hint;
            mesh.category = category_from_design_id(design_id_hint);
        }
        return mesh;
    }
    in.close();
    VtkParseOptions opts;
    opts.design_id = design_id_hint.empty() ? path.stem().string() : design_id_hint;
    return parse_vtk_polydata_file(path, opts);
}

} // namespace aerobench
