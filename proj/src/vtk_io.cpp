#include "aerobench/vtk_io.hpp"

#include <bit>
#include <charconv>
#include <cstdint>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <sstream>

#include "aerobench/binio.hpp"
#include "aerobench/error.hpp"

namespace aerobench {

namespace {

struct DtypeInfo {
    std::size_t width;
    bool floating;
};

DtypeInfo dtype_info(std::string_view t) {
    if (t == "float") return {4, true};
    if (t == "double") return {8, true};
    if (t == "int" || t == "vtktypeint32") return {4, false};
    if (t == "unsigned_int" || t == "vtktypeuint32") return {4, false};
    if (t == "long" || t == "vtktypeint64") return {8, false};
    if (t == "unsigned_long" || t == "vtktypeuint64") return {8, false};
    raise(ErrorCode::UnsupportedSection, "unsupported VTK value type '" + std::string(t) + "'");
}

bool is_space_char(char c) {
    return c == ' ' || c == '\t' || c == '\r' || c == '\n';
}

struct Parser {
    std::string_view data;
    std::size_t pos = 0;
    bool binary = false;

    bool at_end() const { return pos >= data.size(); }

    void skip_ws() {
        while (pos < data.size() && is_space_char(data[pos])) ++pos;
    }

    bool tokens_remaining() {
        skip_ws();
        return pos < data.size();
    }

    std::string_view next_token(const char* what) {
        skip_ws();
        if (pos >= data.size())
            raise(ErrorCode::TruncatedStream, std::string("expected ") + what);
        const std::size_t start = pos;
        while (pos < data.size() && !is_space_char(data[pos])) ++pos;
        return data.substr(start, pos - start);
    }

    std::string_view peek_token() {
        const std::size_t saved = pos;
        skip_ws();
        if (pos >= data.size()) {
            pos = saved;
            return {};
        }
        const std::size_t start = pos;
        std::size_t end = start;
        while (end < data.size() && !is_space_char(data[end])) ++end;
        pos = saved;
        return data.substr(start, end - start);
    }

    std::string_view read_line() {
        const std::size_t start = pos;
        while (pos < data.size() && data[pos] != '\n') ++pos;
        std::string_view line = data.substr(start, pos - start);
        if (pos < data.size()) ++pos;
        if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
        return line;
    }

    // Positions the cursor at the first byte after the current header line.
    // Binary payloads begin there; in ASCII mode token reads skip whitespace
    // anyway so this is only called for binary payloads.
    void begin_binary_payload(const char* what) {
        while (pos < data.size() && (data[pos] == ' ' || data[pos] == '\t' || data[pos] == '\r'))
            ++pos;
        if (pos >= data.size())
            raise(ErrorCode::TruncatedStream, std::string("missing data for ") + what);
        if (data[pos] == '\n') ++pos;
    }

    double parse_double(std::string_view tok, const char* what) {
        double v = 0.0;
        const auto res = std::from_chars(tok.data(), tok.data() + tok.size(), v);
        if (res.ec != std::errc{} || res.ptr != tok.data() + tok.size())
            raise(ErrorCode::TruncatedStream,
                  std::string("bad numeric token '") + std::string(tok) + "' for " + what);
        return v;
    }

    long long parse_int(std::string_view tok, const char* what) {
        long long v = 0;
        const auto res = std::from_chars(tok.data(), tok.data() + tok.size(), v);
        if (res.ec != std::errc{} || res.ptr != tok.data() + tok.size())
            raise(ErrorCode::TruncatedStream,
                  std::string("bad integer token '") + std::string(tok) + "' for " + what);
        return v;
    }

    std::uint64_t read_header_count(const char* what) {
        const long long v = parse_int(next_token(what), what);
        if (v < 0) raise(ErrorCode::TruncatedStream, std::string("negative count for ") + what);
        return static_cast<std::uint64_t>(v);
    }

    std::vector<double> read_values(std::uint64_t count, std::string_view dtype, const char* what) {
        const DtypeInfo info = dtype_info(dtype);
        std::vector<double> out;
        out.reserve(count);
        if (!binary) {
            for (std::uint64_t i = 0; i < count; ++i)
                out.push_back(parse_double(next_token(what), what));
            return out;
        }
        begin_binary_payload(what);
        const std::uint64_t bytes = count * info.width;
        if (data.size() - pos < bytes)
            raise(ErrorCode::TruncatedStream, std::string("binary data short for ") + what);
        const char* p = data.data() + pos;
        for (std::uint64_t i = 0; i < count; ++i, p += info.width) {
            if (info.floating && info.width == 4) {
                std::uint32_t raw;
                std::memcpy(&raw, p, 4);
                raw = to_endian(raw, std::endian::big);
                float f;
                std::memcpy(&f, &raw, 4);
                out.push_back(static_cast<double>(f));
            } else if (info.floating) {
                std::uint64_t raw;
                std::memcpy(&raw, p, 8);
                raw = to_endian(raw, std::endian::big);
                double d;
                std::memcpy(&d, &raw, 8);
                out.push_back(d);
            } else if (info.width == 4) {
                std::int32_t v;
                std::memcpy(&v, p, 4);
                out.push_back(static_cast<double>(to_endian(v, std::endian::big)));
            } else {
                std::int64_t v;
                std::memcpy(&v, p, 8);
                out.push_back(static_cast<double>(to_endian(v, std::endian::big)));
            }
        }
        pos += bytes;
        return out;
    }

    std::vector<long long> read_ints(std::uint64_t count, std::string_view dtype, const char* what) {
        const DtypeInfo info = dtype_info(dtype);
        if (info.floating)
            raise(ErrorCode::UnsupportedSection,
                  std::string("floating connectivity type for ") + what);
        std::vector<long long> out;
        out.reserve(count);
        if (!binary) {
            for (std::uint64_t i = 0; i < count; ++i)
                out.push_back(parse_int(next_token(what), what));
            return out;
        }
        begin_binary_payload(what);
        const std::uint64_t bytes = count * info.width;
        if (data.size() - pos < bytes)
            raise(ErrorCode::TruncatedStream, std::string("binary data short for ") + what);
        const char* p = data.data() + pos;
        for (std::uint64_t i = 0; i < count; ++i, p += info.width) {
            if (info.width == 4) {
                std::int32_t v;
                std::memcpy(&v, p, 4);
                out.push_back(to_endian(v, std::endian::big));
            } else {
                std::int64_t v;
                std::memcpy(&v, p, 8);
                out.push_back(to_endian(v, std::endian::big));
            }
        }
        pos += bytes;
        return out;
    }

    // A SCALARS block may carry a "LOOKUP_TABLE <name>" line before its data.
    void skip_lookup_table_line() {
        if (!binary) {
            if (peek_token() == "LOOKUP_TABLE") {
                next_token("LOOKUP_TABLE");
                next_token("lookup table name");
            }
            return;
        }
        begin_binary_payload("SCALARS data");
        constexpr std::string_view kw = "LOOKUP_TABLE";
        if (data.substr(pos).substr(0, kw.size()) == kw) {
            while (pos < data.size() && data[pos] != '\n') ++pos;
            if (pos < data.size()) ++pos;
        }
    }

    void skip_metadata_block() {
        // METADATA blocks are ASCII lines terminated by an empty line.
        read_line();
        while (pos < data.size()) {
            std::string_view line = read_line();
            bool blank = true;
            for (char c : line)
                if (!is_space_char(c)) blank = false;
            if (blank) return;
        }
    }
};

void append_polygon(SurfaceMesh& mesh, const long long* verts, std::uint64_t arity,
                    std::uint64_t n_points, bool strict) {
    if (arity < 3)
        raise(ErrorCode::NonTriangleFace,
              "polygon with " + std::to_string(arity) + " vertices");
    if (arity > 3 && strict)
        raise(ErrorCode::NonTriangleFace,
              "polygon with " + std::to_string(arity) + " vertices in strict mode");
    for (std::uint64_t i = 0; i < arity; ++i)
        if (verts[i] < 0 || static_cast<std::uint64_t>(verts[i]) >= n_points)
            raise(ErrorCode::IndexOutOfRange,
                  "polygon index " + std::to_string(verts[i]) + " outside 0.." +
                      std::to_string(n_points) + ")");
    const auto v0 = static_cast<std::uint32_t>(verts[0]);
    for (std::uint64_t i = 1; i + 1 < arity; ++i)
        mesh.triangles.push_back({v0, static_cast<std::uint32_t>(verts[i]),
                                  static_cast<std::uint32_t>(verts[i + 1])});
}

// Parses the attribute blocks that follow POINT_DATA or CELL_DATA. Arrays are
// appended to the mesh only when `keep` is set; CELL_DATA blocks are parsed
// for structure and discarded.
std::uint64_t parse_attribute_blocks(Parser& p, SurfaceMesh& mesh, std::uint64_t tuple_count,
                                     bool keep) {
    std::uint64_t arrays_seen = 0;
    for (;;) {
        const std::string_view kw = p.peek_token();
        if (kw.empty() || kw == "POINT_DATA" || kw == "CELL_DATA") return arrays_seen;
        if (kw == "METADATA") {
            p.next_token("METADATA");
            p.skip_metadata_block();
            continue;
        }
        if (kw == "SCALARS") {
            p.next_token("SCALARS");
            std::string name(p.next_token("scalar name"));
            std::string dtype(p.next_token("scalar type"));
            std::uint64_t ncomp = 1;
            if (!p.binary) {
                const std::string_view maybe = p.peek_token();
                if (!maybe.empty() && maybe != "LOOKUP_TABLE" && maybe.find_first_not_of("0123456789") == std::string_view::npos)
                    ncomp = p.read_header_count("scalar component count");
            } else {
                // In binary files the component count, when present, is still
                // on the header line before the newline.
                const std::size_t saved = p.pos;
                std::size_t scan = p.pos;
                while (scan < p.data.size() && (p.data[scan] == ' ' || p.data[scan] == '\t' || p.data[scan] == '\r'))
                    ++scan;
                if (scan < p.data.size() && p.data[scan] >= '0' && p.data[scan] <= '9')
                    ncomp = p.read_header_count("scalar component count");
                else
                    p.pos = saved;
            }
            if (ncomp != 1)
                raise(ErrorCode::UnsupportedSection,
                      "SCALARS '" + name + "' has " + std::to_string(ncomp) +
                          " components; only scalar point data is supported");
            p.skip_lookup_table_line();
            std::vector<double> values = p.read_values(tuple_count, dtype, "SCALARS data");
            ++arrays_seen;
            if (keep) mesh.point_fields.emplace_back(std::move(name), std::move(values));
            continue;
        }
        if (kw == "FIELD") {
            p.next_token("FIELD");
            p.next_token("field data name");
            const std::uint64_t n_arrays = p.read_header_count("field array count");
            for (std::uint64_t a = 0; a < n_arrays; ++a) {
                std::string name(p.next_token("field array name"));
                const std::uint64_t ncomp = p.read_header_count("field component count");
                const std::uint64_t ntuples = p.read_header_count("field tuple count");
                std::string dtype(p.next_token("field array type"));
                std::vector<double> values =
                    p.read_values(ncomp * ntuples, dtype, "FIELD data");
                if (!keep) continue;
                if (ncomp != 1)
                    raise(ErrorCode::UnsupportedSection,
                          "field array '" + name + "' has " + std::to_string(ncomp) +
                              " components; only scalar point data is supported");
                if (ntuples != tuple_count)
                    raise(ErrorCode::LengthMismatch,
                          "field array '" + name + "' has " + std::to_string(ntuples) +
                              " tuples for " + std::to_string(tuple_count) + " points");
                ++arrays_seen;
                mesh.point_fields.emplace_back(std::move(name), std::move(values));
            }
            continue;
        }
        if (kw == "NORMALS") {
            p.next_token("NORMALS");
            p.next_token("normals name");
            std::string dtype(p.next_token("normals type"));
            std::vector<double> values = p.read_values(tuple_count * 3, dtype, "NORMALS data");
            ++arrays_seen;
            if (keep) {
                std::vector<Vec3> normals(tuple_count);
                for (std::uint64_t i = 0; i < tuple_count; ++i)
                    normals[i] = Vec3{values[3 * i], values[3 * i + 1], values[3 * i + 2]};
                mesh.vertex_normals = std::move(normals);
            }
            continue;
        }
        raise(ErrorCode::UnsupportedSection,
              "unsupported attribute section '" + std::string(kw) + "'");
    }
}

} // namespace

SurfaceMesh parse_vtk_polydata(std::string_view bytes, const VtkParseOptions& opts) {
    Parser p{bytes};

    std::string_view first = p.read_line();
    if (first.substr(0, 5) != "# vtk")
        raise(ErrorCode::BadMagic, "missing '# vtk DataFile' header line");
    p.read_line(); // free-form title

    const std::string_view encoding = p.next_token("ASCII or BINARY");
    if (encoding == "BINARY")
        p.binary = true;
    else if (encoding != "ASCII")
        raise(ErrorCode::UnsupportedSection,
              "unknown encoding '" + std::string(encoding) + "'");

    if (p.next_token("DATASET keyword") != "DATASET")
        raise(ErrorCode::UnsupportedSection, "expected DATASET line");
    const std::string_view dataset = p.next_token("dataset type");
    if (dataset != "POLYDATA")
        raise(ErrorCode::UnsupportedSection,
              "dataset type '" + std::string(dataset) + "' is not POLYDATA");

    SurfaceMesh mesh;
    mesh.design_id = opts.design_id;
    mesh.category = category_from_design_id(opts.design_id);

    bool have_points = false;
    std::uint64_t cell_data_arrays = 0;
    std::uint64_t point_data_arrays = 0;
    bool have_point_data_section = false;

    while (p.tokens_remaining()) {
        const std::string_view kw = p.next_token("section keyword");
        if (kw == "POINTS") {
            const std::uint64_t n = p.read_header_count("point count");
            std::string dtype(p.next_token("point type"));
            std::vector<double> coords = p.read_values(n * 3, dtype, "POINTS data");
            mesh.vertices.resize(n);
            for (std::uint64_t i = 0; i < n; ++i)
                mesh.vertices[i] = Vec3{coords[3 * i], coords[3 * i + 1], coords[3 * i + 2]};
            have_points = true;
        } else if (kw == "POLYGONS") {
            if (!have_points)
                raise(ErrorCode::UnsupportedSection, "POLYGONS before POINTS");
            const std::uint64_t a = p.read_header_count("polygon count");
            const std::uint64_t b = p.read_header_count("polygon data size");
            if (p.peek_token() == "OFFSETS") {
                // Modern legacy layout: OFFSETS + CONNECTIVITY arrays, with
                // the header counts giving offset count and connectivity size.
                p.next_token("OFFSETS");
                std::string off_type(p.next_token("offsets type"));
                std::vector<long long> offsets = p.read_ints(a, off_type, "OFFSETS data");
                if (p.next_token("CONNECTIVITY keyword") != "CONNECTIVITY")
                    raise(ErrorCode::UnsupportedSection, "expected CONNECTIVITY after OFFSETS");
                std::string conn_type(p.next_token("connectivity type"));
                std::vector<long long> conn = p.read_ints(b, conn_type, "CONNECTIVITY data");
                for (std::uint64_t c = 0; c + 1 < offsets.size(); ++c) {
                    const long long lo = offsets[c], hi = offsets[c + 1];
                    if (lo < 0 || hi < lo || static_cast<std::uint64_t>(hi) > conn.size())
                        raise(ErrorCode::TruncatedStream, "bad polygon offsets");
                    append_polygon(mesh, conn.data() + lo, static_cast<std::uint64_t>(hi - lo),
                                   mesh.vertices.size(), opts.strict_triangles);
                }
            } else {
                std::vector<long long> flat = p.read_ints(b, "int", "POLYGONS data");
                std::uint64_t cursor = 0;
                for (std::uint64_t c = 0; c < a; ++c) {
                    if (cursor >= flat.size())
                        raise(ErrorCode::TruncatedStream, "POLYGONS list ended early");
                    const long long arity = flat[cursor++];
                    if (arity < 0 || cursor + static_cast<std::uint64_t>(arity) > flat.size())
                        raise(ErrorCode::TruncatedStream, "POLYGONS record overruns data");
                    append_polygon(mesh, flat.data() + cursor, static_cast<std::uint64_t>(arity),
                                   mesh.vertices.size(), opts.strict_triangles);
                    cursor += static_cast<std::uint64_t>(arity);
                }
            }
        } else if (kw == "VERTICES" || kw == "LINES" || kw == "TRIANGLE_STRIPS") {
            raise(ErrorCode::UnsupportedSection,
                  std::string(kw) + " cells are not supported; only POLYGONS");
        } else if (kw == "POINT_DATA") {
            if (!have_points)
                raise(ErrorCode::UnsupportedSection, "POINT_DATA before POINTS");
            const std::uint64_t n = p.read_header_count("point data count");
            if (n != mesh.vertices.size())
                raise(ErrorCode::LengthMismatch,
                      "POINT_DATA count " + std::to_string(n) + " != point count " +
                          std::to_string(mesh.vertices.size()));
            have_point_data_section = true;
            point_data_arrays += parse_attribute_blocks(p, mesh, n, true);
        } else if (kw == "CELL_DATA") {
            const std::uint64_t n = p.read_header_count("cell data count");
            cell_data_arrays += parse_attribute_blocks(p, mesh, n, false);
        } else if (kw == "FIELD") {
            // Dataset-level field data (global attributes): parse and discard.
            p.next_token("field data name");
            const std::uint64_t n_arrays = p.read_header_count("field array count");
            for (std::uint64_t i = 0; i < n_arrays; ++i) {
                p.next_token("field array name");
                const std::uint64_t ncomp = p.read_header_count("field component count");
                const std::uint64_t ntuples = p.read_header_count("field tuple count");
                std::string dtype(p.next_token("field array type"));
                p.read_values(ncomp * ntuples, dtype, "FIELD data");
            }
        } else if (kw == "METADATA") {
            p.skip_metadata_block();
        } else {
            raise(ErrorCode::UnsupportedSection,
                  "unsupported section '" + std::string(kw) + "'");
        }
    }

    if (!have_points)
        raise(ErrorCode::TruncatedStream, "file has no POINTS section");
    if (point_data_arrays == 0 && cell_data_arrays > 0)
        raise(ErrorCode::UnsupportedSection,
              "file carries cell-associated data only; vertex-associated scalars required");
    (void)have_point_data_section;

    mesh.validate();
    return mesh;
}

SurfaceMesh parse_vtk_polydata_file(const std::filesystem::path& path, VtkParseOptions opts) {
    std::ifstream in(path, std::ios::binary);
    if (!in) raise(ErrorCode::IoFailure, "cannot open " + path.string());
    std::ostringstream buf;
    buf << in.rdbuf();
    if (opts.design_id.empty()) opts.design_id = path.stem().string();
    const std::string bytes = buf.str();
    return parse_vtk_polydata(bytes, opts);
}

namespace {

void write_ascii_doubles(std::ostream& os, const double* values, std::uint64_t count,
                         std::uint64_t per_line) {
    char buf[64];
    for (std::uint64_t i = 0; i < count; ++i) {
        std::snprintf(buf, sizeof(buf), "%.17g", values[i]);
        os << buf;
        os << (((i + 1) % per_line == 0 || i + 1 == count) ? '\n' : ' ');
    }
}

void write_binary_doubles(std::ostream& os, const double* values, std::uint64_t count) {
    for (std::uint64_t i = 0; i < count; ++i)
        write_value<double>(os, values[i], std::endian::big);
    os << '\n';
}

} // namespace

void write_vtk_polydata(const SurfaceMesh& mesh, std::ostream& os, bool binary) {
    const std::uint64_t n = mesh.vertices.size();
    os << "# vtk DataFile Version 3.0\n";
    os << (mesh.design_id.empty() ? std::string("surface") : mesh.design_id) << "\n";
    os << (binary ? "BINARY" : "ASCII") << "\n";
    os << "DATASET POLYDATA\n";

    os << "POINTS " << n << " double\n";
    std::vector<double> coords(n * 3);
    for (std::uint64_t i = 0; i < n; ++i) {
        coords[3 * i] = mesh.vertices[i].x;
        coords[3 * i + 1] = mesh.vertices[i].y;
        coords[3 * i + 2] = mesh.vertices[i].z;
    }
    if (binary)
        write_binary_doubles(os, coords.data(), coords.size());
    else
        write_ascii_doubles(os, coords.data(), coords.size(), 3);

    const std::uint64_t m = mesh.triangles.size();
    os << "POLYGONS " << m << " " << m * 4 << "\n";
    if (binary) {
        for (const auto& tri : mesh.triangles) {
            write_value<std::int32_t>(os, 3, std::endian::big);
            for (std::uint32_t idx : tri)
                write_value<std::int32_t>(os, static_cast<std::int32_t>(idx), std::endian::big);
        }
        os << '\n';
    } else {
        for (const auto& tri : mesh.triangles)
            os << "3 " << tri[0] << ' ' << tri[1] << ' ' << tri[2] << '\n';
    }

    const bool have_attrs = !mesh.point_fields.empty() || mesh.vertex_normals.has_value();
    if (!have_attrs) return;

    os << "POINT_DATA " << n << "\n";
    if (!mesh.point_fields.empty()) {
        const auto& [first_name, first_values] = mesh.point_fields.front();
        os << "SCALARS " << first_name << " double 1\n";
        os << "LOOKUP_TABLE default\n";
        if (binary)
            write_binary_doubles(os, first_values.data(), first_values.size());
        else
            write_ascii_doubles(os, first_values.data(), first_values.size(), 6);

        if (mesh.point_fields.size() > 1) {
            os << "FIELD FieldData " << mesh.point_fields.size() - 1 << "\n";
            for (std::size_t f = 1; f < mesh.point_fields.size(); ++f) {
                const auto& [name, values] = mesh.point_fields[f];
                os << name << " 1 " << n << " double\n";
                if (binary)
                    write_binary_doubles(os, values.data(), values.size());
                else
                    write_ascii_doubles(os, values.data(), values.size(), 6);
            }
        }
    }
    if (mesh.vertex_normals) {
        os << "NORMALS normals double\n";
        std::vector<double> flat(n * 3);
        for (std::uint64_t i = 0; i < n; ++i) {
            flat[3 * i] = (*mesh.vertex_normals)[i].x;
            flat[3 * i + 1] = (*mesh.vertex_normals)[i].y;
            flat[3 * i + 2] = (*mesh.vertex_normals)[i].z;
        }
        if (binary)
            write_binary_doubles(os, flat.data(), flat.size());
        else
            write_ascii_doubles(os, flat.data(), flat.size(), 3);
    }
}

void write_vtk_polydata_file(const SurfaceMesh& mesh, const std::filesystem::path& path,
                             bool binary) {
    std::ofstream out(path, std::ios::binary);
    if (!out) raise(ErrorCode::IoFailure, "cannot open " + path.string() + " for writing");
    write_vtk_polydata(mesh, out, binary);
    if (!out) raise(ErrorCode::IoFailure, "failed writing " + path.string());
}

} // namespace aerobench
