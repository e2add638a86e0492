// apf.hpp — the prediction-exchange file format.
//
// A little-endian container shuttling point samples to adapters and
// predictions back: magic "APF1", version, design id, a space flag guarding
// against double denormalization, the sample seed, and named numeric arrays
// with an f32 or f64 payload, closed by a CRC32 trailer. f32 payloads are
// upcast to f64 in memory.
#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "aerobench/sampling.hpp"

namespace aerobench {

enum class ValueSpace : std::uint8_t { Physical = 0, Normalized = 1 };
const char* value_space_name(ValueSpace s);

enum class ApfDtype : std::uint8_t { F32 = 0, F64 = 1 };

struct ApfArray {
    std::string name;
    std::vector<double> values;
    ApfDtype dtype = ApfDtype::F64; // storage type on write
};

struct ApfFile {
    std::string design_id;
    ValueSpace space = ValueSpace::Physical;
    std::uint64_t sample_seed = 0;
    std::vector<ApfArray> arrays;

    const ApfArray* find(const std::string& name) const;
};

inline constexpr std::uint32_t kApfVersion = 1;

void write_apf(const ApfFile& file, std::ostream& os);
void write_apf_file(const ApfFile& file, const std::filesystem::path& path);

ApfFile read_apf(std::istream& is);
ApfFile read_apf_file(const std::filesystem::path& path);

// Standard sample layout: "points" (3n), optional "normals" (3n), and
// "truth" (n), always in physical space.
ApfFile sample_to_apf(const SampleSet& sample);

} // namespace aerobench
