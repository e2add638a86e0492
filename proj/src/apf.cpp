#include "aerobench/apf.hpp"

#include <cstring>
#include <fstream>
#include <sstream>

#include "aerobench/binio.hpp"
#include "aerobench/error.hpp"

namespace aerobench {

namespace {

constexpr char kMagic[4] = {'A', 'P', 'F', '1'};
constexpr std::endian kOrder = std::endian::little;

// Buffer-walking reader: header truncation and payload shortfalls raise
// different errors, so the cursor tracks how far the payload region extends.
struct Reader {
    const std::string& buf;
    std::size_t pos = 0;
    std::size_t payload_end = 0;

    void need_header(std::size_t bytes, const char* what) {
        if (pos + bytes > payload_end)
            raise(ErrorCode::TruncatedStream, std::string("short read for ") + what);
    }

    template <typename T>
    T read(const char* what) {
        need_header(sizeof(T), what);
        T v;
        std::memcpy(&v, buf.data() + pos, sizeof(T));
        pos += sizeof(T);
        return to_endian(v, kOrder);
    }

    std::string read_string(const char* what) {
        const auto len = read<std::uint64_t>(what);
        need_header(len, what);
        std::string s(buf.data() + pos, len);
        pos += len;
        return s;
    }
};

} // namespace

const char* value_space_name(ValueSpace s) {
    return s == ValueSpace::Physical ? "physical" : "normalized";
}

const ApfArray* ApfFile::find(const std::string& name) const {
    for (const auto& array : arrays)
        if (array.name == name) return &array;
    return nullptr;
}

void write_apf(const ApfFile& file, std::ostream& os) {
    os.write(kMagic, 4);
    write_value<std::uint32_t>(os, kApfVersion, kOrder);

    CrcOstream body(os);
    body.write_string_u64(file.design_id, kOrder);
    body.write<std::uint8_t>(static_cast<std::uint8_t>(file.space), kOrder);
    body.write<std::uint64_t>(file.sample_seed, kOrder);
    body.write<std::uint32_t>(static_cast<std::uint32_t>(file.arrays.size()), kOrder);
    for (const auto& array : file.arrays) {
        body.write_string_u64(array.name, kOrder);
        body.write<std::uint8_t>(static_cast<std::uint8_t>(array.dtype), kOrder);
        body.write<std::uint64_t>(array.values.size(), kOrder);
        if (array.dtype == ApfDtype::F32) {
            for (double v : array.values) body.write<float>(static_cast<float>(v), kOrder);
        } else {
            for (double v : array.values) body.write<double>(v, kOrder);
        }
    }
    write_value<std::uint32_t>(os, body.crc(), kOrder);
    if (!os) raise(ErrorCode::IoFailure, "write failed for prediction stream");
}

void write_apf_file(const ApfFile& file, const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) raise(ErrorCode::IoFailure, "cannot open " + path.string() + " for writing");
    write_apf(file, out);
    if (!out) raise(ErrorCode::IoFailure, "failed writing " + path.string());
}

ApfFile read_apf(std::istream& is) {
    std::ostringstream sink;
    sink << is.rdbuf();
    const std::string buf = sink.str();

    if (buf.size() < 4 || std::memcmp(buf.data(), kMagic, 4) != 0)
        raise(ErrorCode::BadMagic, "not an APF prediction file");
    if (buf.size() < 12)
        raise(ErrorCode::TruncatedStream, "file too short for APF header and trailer");

    std::uint32_t version;
    std::memcpy(&version, buf.data() + 4, 4);
    version = to_endian(version, kOrder);
    if (version != kApfVersion)
        raise(ErrorCode::VersionMismatch,
              "APF version " + std::to_string(version) + " (expected " +
                  std::to_string(kApfVersion) + ")");

    Reader r{buf, 8, buf.size() - 4};
    ApfFile file;
    file.design_id = r.read_string("design id");
    const auto space = r.read<std::uint8_t>("space flag");
    if (space > 1)
        raise(ErrorCode::TruncatedStream, "space flag " + std::to_string(space) + " is invalid");
    file.space = static_cast<ValueSpace>(space);
    file.sample_seed = r.read<std::uint64_t>("sample seed");

    const auto n_arrays = r.read<std::uint32_t>("array count");
    file.arrays.reserve(n_arrays);
    for (std::uint32_t a = 0; a < n_arrays; ++a) {
        ApfArray array;
        array.name = r.read_string("array name");
        const auto dtype = r.read<std::uint8_t>("array dtype");
        if (dtype > 1)
            raise(ErrorCode::UnknownDtype,
                  "dtype code " + std::to_string(dtype) + " for array '" + array.name + "'");
        array.dtype = static_cast<ApfDtype>(dtype);
        const auto count = r.read<std::uint64_t>("array count");
        const std::size_t width = array.dtype == ApfDtype::F32 ? 4 : 8;
        if (r.pos + count * width > r.payload_end)
            raise(ErrorCode::CountMismatch,
                  "array '" + array.name + "' declares " + std::to_string(count) +
                      " values but the payload holds fewer");
        array.values.resize(count);
        for (std::uint64_t i = 0; i < count; ++i) {
            if (array.dtype == ApfDtype::F32) {
                std::uint32_t raw;
                std::memcpy(&raw, buf.data() + r.pos, 4);
                raw = to_endian(raw, kOrder);
                float f;
                std::memcpy(&f, &raw, 4);
                array.values[i] = static_cast<double>(f);
            } else {
                std::uint64_t raw;
                std::memcpy(&raw, buf.data() + r.pos, 8);
                raw = to_endian(raw, kOrder);
                double d;
                std::memcpy(&d, &raw, 8);
                array.values[i] = d;
            }
            r.pos += width;
        }
        file.arrays.push_back(std::move(array));
    }

    if (r.pos != r.payload_end)
        raise(ErrorCode::CountMismatch, "declared arrays do not account for the full payload");

    const std::uint32_t actual = Crc32::of(buf.data() + 8, buf.size() - 12);
    std::uint32_t stored;
    std::memcpy(&stored, buf.data() + buf.size() - 4, 4);
    stored = to_endian(stored, kOrder);
    if (actual != stored)
        raise(ErrorCode::ChecksumMismatch, "APF checksum mismatch for design " + file.design_id);

    return file;
}

ApfFile read_apf_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) raise(ErrorCode::IoFailure, "cannot open " + path.string());
    return read_apf(in);
}

ApfFile sample_to_apf(const SampleSet& sample) {
    ApfFile file;
    file.design_id = sample.design_id;
    file.space = ValueSpace::Physical;
    file.sample_seed = sample.seed;

    ApfArray points;
    points.name = "points";
    points.values.resize(sample.points.size() * 3);
    for (std::size_t i = 0; i < sample.points.size(); ++i) {
        points.values[3 * i] = sample.points[i].x;
        points.values[3 * i + 1] = sample.points[i].y;
        points.values[3 * i + 2] = sample.points[i].z;
    }
    file.arrays.push_back(std::move(points));

    if (sample.normals) {
        ApfArray normals;
        normals.name = "normals";
        normals.values.resize(sample.normals->size() * 3);
        for (std::size_t i = 0; i < sample.normals->size(); ++i) {
            normals.values[3 * i] = (*sample.normals)[i].x;
            normals.values[3 * i + 1] = (*sample.normals)[i].y;
            normals.values[3 * i + 2] = (*sample.normals)[i].z;
        }
        file.arrays.push_back(std::move(normals));
    }

    ApfArray truth;
    truth.name = "truth";
    truth.values = sample.truth;
    file.arrays.push_back(std::move(truth));
    return file;
}

} // namespace aerobench
