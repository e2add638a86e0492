// registry.hpp — dataset manifests, splits, and training-set pressure stats.
//
// The manifest is the source of truth for which designs exist, their category,
// and where their mesh files live. Splits are id lists verified to be pairwise
// disjoint. Pressure normalization statistics are computed from the training
// split only and cached with a content hash of the train id list so a stale
// cache can never leak a different training pool into an evaluation.
#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <optional>
#include <set>
#include <string>
#include <unordered_map>
#include <vector>

#include "aerobench/mesh.hpp"

namespace aerobench {

struct ManifestEntry {
    std::string id;
    Category category = Category::Unknown;
    std::string path;
    bool path_resolved = false;
};

struct Manifest {
    std::string dataset_name;
    std::vector<ManifestEntry> entries;
    std::unordered_map<std::string, std::size_t> index;

    const ManifestEntry& at(const std::string& id) const;
    bool contains(const std::string& id) const { return index.count(id) != 0; }
    void rebuild_index();
};

Manifest load_manifest(const std::filesystem::path& path);
void save_manifest(const Manifest& manifest, const std::filesystem::path& path);

struct Split {
    std::string name;
    std::vector<std::string> train;
    std::vector<std::string> val;
    std::vector<std::string> test;
    // Duplicate ids found within a single list are removed; the count is kept
    // so callers can surface a warning.
    std::uint64_t duplicates_removed = 0;
};

// Verifies pairwise disjointness; throws OverlappingSplits naming the id.
void verify_split_disjoint(const Split& split);

// Three newline-delimited id files. When a manifest is given, every id must
// exist in it.
Split load_split_lists(const std::filesystem::path& train_path,
                       const std::filesystem::path& val_path,
                       const std::filesystem::path& test_path, const std::string& name,
                       const Manifest* manifest = nullptr);

// One JSON file: {"name": str, "train": [...], "val": [...], "test": [...]}.
Split load_split_json(const std::filesystem::path& path, const Manifest* manifest = nullptr);

struct PressureStats {
    double mean = 0.0;
    double stddev = 0.0; // population (divide by N)
    double min = 0.0;
    double max = 0.0;
    double median = 0.0;
    double q25 = 0.0;
    double q75 = 0.0;
    std::uint64_t n_points_total = 0;
    std::uint64_t n_designs = 0;
};

// Hash of the training pool identity: sorted unique ids, newline-joined,
// FNV-1a. Order-insensitive on purpose, since the statistics are too.
std::uint64_t train_ids_hash(const std::vector<std::string>& train_ids);

using MeshLoader = std::function<SurfaceMesh(const ManifestEntry&)>;

// Pools every per-vertex value of `field_name` across the train designs.
// Mean and variance accumulate per design and merge in manifest order;
// quantiles use linear interpolation between order statistics.
PressureStats compute_pressure_stats(const Manifest& manifest,
                                     const std::vector<std::string>& train_ids,
                                     const std::string& field_name, const MeshLoader& loader,
                                     std::size_t workers = 1);

double normalize_value(double v, const PressureStats& stats);
double denormalize_value(double v, const PressureStats& stats);
std::vector<double> normalize(const std::vector<double>& values, const PressureStats& stats);
std::vector<double> denormalize(const std::vector<double>& values, const PressureStats& stats);

// Stats cache round trip. Loading verifies the embedded hash against
// `expected_train_ids` when provided and returns nothing on mismatch.
void save_pressure_stats(const PressureStats& stats, const std::string& split_name,
                         std::uint64_t train_hash, const std::filesystem::path& path);
std::optional<PressureStats> load_pressure_stats(const std::filesystem::path& path,
                                                 const std::vector<std::string>* expected_train_ids,
                                                 std::string* split_name_out = nullptr);

struct CrossCategorySplit {
    Split split;
    std::uint64_t train_size = 0;
    std::uint64_t test_size = 0;
    double ratio = 0.0; // train / test
};

// Zero-shot split: train on some categories, test on disjoint others. A
// seeded validation fraction is held out per train category (floor of
// fraction * category size).
CrossCategorySplit make_cross_category_split(const Manifest& manifest,
                                             const std::set<Category>& train_categories,
                                             const std::set<Category>& test_categories,
                                             double val_fraction = 0.1,
                                             std::uint64_t seed = 0);

// Linear-interpolation quantile of an already sorted array, q in [0, 1].
double sorted_quantile(const std::vector<double>& sorted_values, double q);

} // namespace aerobench
