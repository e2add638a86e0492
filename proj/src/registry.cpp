#include "aerobench/registry.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <unordered_set>

#include "json.hpp"

#include "aerobench/error.hpp"
#include "aerobench/rng.hpp"
#include "aerobench/threadpool.hpp"

namespace aerobench {

using ordered_json = nlohmann::ordered_json;

const ManifestEntry& Manifest::at(const std::string& id) const {
    const auto it = index.find(id);
    if (it == index.end())
        raise(ErrorCode::UnknownDesignId, "design '" + id + "' not in manifest");
    return entries[it->second];
}

void Manifest::rebuild_index() {
    index.clear();
    for (std::size_t i = 0; i < entries.size(); ++i) {
        if (!index.emplace(entries[i].id, i).second)
            raise(ErrorCode::DuplicateDesignId, "duplicate design id '" + entries[i].id + "'");
    }
}

Manifest load_manifest(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) raise(ErrorCode::IoFailure, "cannot open " + path.string());
    ordered_json doc;
    try {
        doc = ordered_json::parse(in);
    } catch (const std::exception& e) {
        raise(ErrorCode::IoFailure, "manifest parse error in " + path.string() + ": " + e.what());
    }
    if (!doc.contains("entries") || !doc["entries"].is_array())
        raise(ErrorCode::MissingField, "manifest missing 'entries' array");

    Manifest manifest;
    manifest.dataset_name = doc.value("dataset", std::string("unnamed"));
    const auto base = path.parent_path();
    for (const auto& item : doc["entries"]) {
        ManifestEntry entry;
        if (!item.contains("id")) raise(ErrorCode::MissingField, "manifest entry missing 'id'");
        entry.id = item["id"].get<std::string>();
        if (item.contains("category")) {
            const std::string cat = item["category"].get<std::string>();
            if (cat.size() != 1)
                raise(ErrorCode::MissingField,
                      "manifest category for '" + entry.id + "' must be one of F|E|N|U");
            entry.category = category_from_code(cat[0]);
        } else {
            entry.category = category_from_design_id(entry.id);
        }
        if (item.contains("path")) {
            entry.path = item["path"].get<std::string>();
            std::filesystem::path p(entry.path);
            if (p.is_relative()) {
                p = base / p;
                entry.path = p.string();
            }
            entry.path_resolved = std::filesystem::exists(p);
        }
        manifest.entries.push_back(std::move(entry));
    }
    manifest.rebuild_index();
    return manifest;
}

void save_manifest(const Manifest& manifest, const std::filesystem::path& path) {
    ordered_json doc;
    doc["dataset"] = manifest.dataset_name;
    doc["entries"] = ordered_json::array();
    for (const auto& entry : manifest.entries) {
        ordered_json item;
        item["id"] = entry.id;
        item["category"] = std::string(1, category_code(entry.category));
        item["path"] = entry.path;
        doc["entries"].push_back(std::move(item));
    }
    std::ofstream out(path);
    if (!out) raise(ErrorCode::IoFailure, "cannot open " + path.string() + " for writing");
    out << doc.dump(2) << "\n";
}

namespace {

std::vector<std::string> dedupe_preserving_order(std::vector<std::string> ids,
                                                 std::uint64_t& removed) {
    std::unordered_set<std::string> seen;
    std::vector<std::string> out;
    out.reserve(ids.size());
    for (auto& id : ids) {
        if (seen.insert(id).second)
            out.push_back(std::move(id));
        else
            ++removed;
    }
    return out;
}

std::vector<std::string> read_id_lines(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) raise(ErrorCode::IoFailure, "cannot open " + path.string());
    std::vector<std::string> ids;
    std::string line;
    while (std::getline(in, line)) {
        while (!line.empty() && (line.back() == '\r' || line.back() == ' ' || line.back() == '\t'))
            line.pop_back();
        std::size_t start = 0;
        while (start < line.size() && (line[start] == ' ' || line[start] == '\t')) ++start;
        if (start > 0) line.erase(0, start);
        if (!line.empty()) ids.push_back(line);
    }
    return ids;
}

void check_ids_known(const std::vector<std::string>& ids, const Manifest& manifest,
                     const char* list_name) {
    for (const auto& id : ids)
        if (!manifest.contains(id))
            raise(ErrorCode::UnknownDesignId,
                  "id '" + id + "' in " + list_name + " list is not in the manifest");
}

} // namespace

void verify_split_disjoint(const Split& split) {
    std::unordered_map<std::string, const char*> owner;
    auto claim = [&](const std::vector<std::string>& ids, const char* list_name) {
        for (const auto& id : ids) {
            const auto [it, inserted] = owner.emplace(id, list_name);
            if (!inserted)
                raise(ErrorCode::OverlappingSplits,
                      "id '" + id + "' appears in both " + it->second + " and " + list_name);
        }
    };
    claim(split.train, "train");
    claim(split.val, "val");
    claim(split.test, "test");
}

Split load_split_lists(const std::filesystem::path& train_path,
                       const std::filesystem::path& val_path,
                       const std::filesystem::path& test_path, const std::string& name,
                       const Manifest* manifest) {
    Split split;
    split.name = name;
    split.train = dedupe_preserving_order(read_id_lines(train_path), split.duplicates_removed);
    split.val = dedupe_preserving_order(read_id_lines(val_path), split.duplicates_removed);
    split.test = dedupe_preserving_order(read_id_lines(test_path), split.duplicates_removed);
    verify_split_disjoint(split);
    if (manifest) {
        check_ids_known(split.train, *manifest, "train");
        check_ids_known(split.val, *manifest, "val");
        check_ids_known(split.test, *manifest, "test");
    }
    return split;
}

Split load_split_json(const std::filesystem::path& path, const Manifest* manifest) {
    std::ifstream in(path);
    if (!in) raise(ErrorCode::IoFailure, "cannot open " + path.string());
    ordered_json doc;
    try {
        doc = ordered_json::parse(in);
    } catch (const std::exception& e) {
        raise(ErrorCode::IoFailure, "split parse error in " + path.string() + ": " + e.what());
    }
    Split split;
    split.name = doc.value("name", path.stem().string());
    auto read_list = [&](const char* key) -> std::vector<std::string> {
        if (!doc.contains(key)) return {};
        return doc[key].get<std::vector<std::string>>();
    };
    split.train = dedupe_preserving_order(read_list("train"), split.duplicates_removed);
    split.val = dedupe_preserving_order(read_list("val"), split.duplicates_removed);
    split.test = dedupe_preserving_order(read_list("test"), split.duplicates_removed);
    verify_split_disjoint(split);
    if (manifest) {
        check_ids_known(split.train, *manifest, "train");
        check_ids_known(split.val, *manifest, "val");
        check_ids_known(split.test, *manifest, "test");
    }
    return split;
}

std::uint64_t train_ids_hash(const std::vector<std::string>& train_ids) {
    std::vector<std::string> sorted(train_ids);
    std::sort(sorted.begin(), sorted.end());
    sorted.erase(std::unique(sorted.begin(), sorted.end()), sorted.end());
    std::string joined;
    for (const auto& id : sorted) {
        joined += id;
        joined += '\n';
    }
    return fnv1a64(joined);
}

double sorted_quantile(const std::vector<double>& sorted_values, double q) {
    if (sorted_values.empty())
        raise(ErrorCode::EmptyInput, "quantile of empty array");
    if (sorted_values.size() == 1) return sorted_values[0];
    const double h = static_cast<double>(sorted_values.size() - 1) * q;
    const auto lo = static_cast<std::size_t>(h);
    if (lo + 1 >= sorted_values.size()) return sorted_values.back();
    const double frac = h - static_cast<double>(lo);
    return sorted_values[lo] + frac * (sorted_values[lo + 1] - sorted_values[lo]);
}

namespace {

// Per-design accumulator for the pooled mean and variance.
struct MomentChunk {
    std::uint64_t count = 0;
    double mean = 0.0;
    double m2 = 0.0;

    static MomentChunk of(const std::vector<double>& values) {
        MomentChunk c;
        for (double v : values) {
            ++c.count;
            const double delta = v - c.mean;
            c.mean += delta / static_cast<double>(c.count);
            c.m2 += delta * (v - c.mean);
        }
        return c;
    }

    void merge(const MomentChunk& o) {
        if (o.count == 0) return;
        if (count == 0) {
            *this = o;
            return;
        }
        const double delta = o.mean - mean;
        const auto n = static_cast<double>(count), m = static_cast<double>(o.count);
        const double total = n + m;
        mean += delta * (m / total);
        m2 += o.m2 + delta * delta * (n * m / total);
        count += o.count;
    }
};

} // namespace

PressureStats compute_pressure_stats(const Manifest& manifest,
                                     const std::vector<std::string>& train_ids,
                                     const std::string& field_name, const MeshLoader& loader,
                                     std::size_t workers) {
    if (train_ids.empty())
        raise(ErrorCode::EmptyTrainSplit, "pressure statistics need a nonempty train split");

    std::vector<const ManifestEntry*> entries(train_ids.size());
    for (std::size_t i = 0; i < train_ids.size(); ++i) entries[i] = &manifest.at(train_ids[i]);

    std::vector<std::vector<double>> per_design(train_ids.size());
    std::vector<MomentChunk> chunks(train_ids.size());
    parallel_for(train_ids.size(), workers, [&](std::size_t i) {
        SurfaceMesh mesh = loader(*entries[i]);
        const std::vector<double>* field = mesh.find_field(field_name);
        if (!field)
            raise(ErrorCode::MissingField,
                  "field '" + field_name + "' missing on design " + entries[i]->id);
        per_design[i] = *field;
        chunks[i] = MomentChunk::of(per_design[i]);
    });

    // Merge in manifest-argument order so the result does not depend on the
    // worker count.
    MomentChunk total;
    for (const auto& c : chunks) total.merge(c);
    if (total.count == 0)
        raise(ErrorCode::EmptyTrainSplit, "train split contains no field values");

    std::vector<double> pooled;
    pooled.reserve(total.count);
    for (const auto& values : per_design)
        pooled.insert(pooled.end(), values.begin(), values.end());
    std::sort(pooled.begin(), pooled.end());

    PressureStats stats;
    stats.n_points_total = total.count;
    stats.n_designs = train_ids.size();
    stats.mean = total.mean;
    stats.stddev = std::sqrt(total.m2 / static_cast<double>(total.count));
    stats.min = pooled.front();
    stats.max = pooled.back();
    stats.q25 = sorted_quantile(pooled, 0.25);
    stats.median = sorted_quantile(pooled, 0.5);
    stats.q75 = sorted_quantile(pooled, 0.75);
    return stats;
}

double normalize_value(double v, const PressureStats& stats) {
    if (stats.stddev <= 0.0)
        raise(ErrorCode::ZeroVariance, "cannot normalize with zero pressure variance");
    return (v - stats.mean) / stats.stddev;
}

double denormalize_value(double v, const PressureStats& stats) {
    return v * stats.stddev + stats.mean;
}

std::vector<double> normalize(const std::vector<double>& values, const PressureStats& stats) {
    if (stats.stddev <= 0.0)
        raise(ErrorCode::ZeroVariance, "cannot normalize with zero pressure variance");
    std::vector<double> out(values.size());
    for (std::size_t i = 0; i < values.size(); ++i) out[i] = (values[i] - stats.mean) / stats.stddev;
    return out;
}

std::vector<double> denormalize(const std::vector<double>& values, const PressureStats& stats) {
    std::vector<double> out(values.size());
    for (std::size_t i = 0; i < values.size(); ++i) out[i] = values[i] * stats.stddev + stats.mean;
    return out;
}

void save_pressure_stats(const PressureStats& stats, const std::string& split_name,
                         std::uint64_t train_hash, const std::filesystem::path& path) {
    ordered_json doc;
    doc["split_name"] = split_name;
    doc["train_ids_hash"] = train_hash;
    doc["std_convention"] = "population";
    doc["quantile_convention"] = "linear";
    doc["mean"] = stats.mean;
    doc["stddev"] = stats.stddev;
    doc["min"] = stats.min;
    doc["max"] = stats.max;
    doc["median"] = stats.median;
    doc["q25"] = stats.q25;
    doc["q75"] = stats.q75;
    doc["n_points_total"] = stats.n_points_total;
    doc["n_designs"] = stats.n_designs;
    std::ofstream out(path);
    if (!out) raise(ErrorCode::IoFailure, "cannot open " + path.string() + " for writing");
    out << doc.dump(2) << "\n";
}

std::optional<PressureStats> load_pressure_stats(const std::filesystem::path& path,
                                                 const std::vector<std::string>* expected_train_ids,
                                                 std::string* split_name_out) {
    std::ifstream in(path);
    if (!in) return std::nullopt;
    ordered_json doc;
    try {
        doc = ordered_json::parse(in);
    } catch (const std::exception&) {
        return std::nullopt;
    }
    if (expected_train_ids) {
        const std::uint64_t expected = train_ids_hash(*expected_train_ids);
        if (!doc.contains("train_ids_hash") ||
            doc["train_ids_hash"].get<std::uint64_t>() != expected)
            return std::nullopt;
    }
    PressureStats stats;
    stats.mean = doc.at("mean").get<double>();
    stats.stddev = doc.at("stddev").get<double>();
    stats.min = doc.at("min").get<double>();
    stats.max = doc.at("max").get<double>();
    stats.median = doc.at("median").get<double>();
    stats.q25 = doc.at("q25").get<double>();
    stats.q75 = doc.at("q75").get<double>();
    stats.n_points_total = doc.at("n_points_total").get<std::uint64_t>();
    stats.n_designs = doc.at("n_designs").get<std::uint64_t>();
    if (split_name_out && doc.contains("split_name"))
        *split_name_out = doc["split_name"].get<std::string>();
    return stats;
}

CrossCategorySplit make_cross_category_split(const Manifest& manifest,
                                             const std::set<Category>& train_categories,
                                             const std::set<Category>& test_categories,
                                             double val_fraction, std::uint64_t seed) {
    for (Category c : train_categories)
        if (test_categories.count(c))
            raise(ErrorCode::OverlappingSplits,
                  std::string("category ") + category_name(c) +
                      " requested for both train and test");
    if (val_fraction < 0.0 || val_fraction >= 1.0)
        raise(ErrorCode::ConfigError, "val fraction must be in [0, 1)");

    std::unordered_map<std::uint8_t, std::vector<std::string>> by_category;
    for (const auto& entry : manifest.entries)
        by_category[static_cast<std::uint8_t>(entry.category)].push_back(entry.id);

    auto ids_of = [&](Category c) -> std::vector<std::string> {
        const auto it = by_category.find(static_cast<std::uint8_t>(c));
        if (it == by_category.end() || it->second.empty())
            raise(ErrorCode::EmptyCategory,
                  std::string("no designs with category ") + category_name(c));
        std::vector<std::string> ids = it->second;
        std::sort(ids.begin(), ids.end());
        return ids;
    };

    CrossCategorySplit result;
    result.split.name = "crosscat";

    for (Category c : train_categories) {
        std::vector<std::string> ids = ids_of(c);
        const auto n = static_cast<std::uint64_t>(ids.size());
        const auto n_val =
            static_cast<std::uint64_t>(std::floor(val_fraction * static_cast<double>(n) + 1e-9));
        SplitMix64 rng(substream_seed(seed, fnv1a64(std::string(1, category_code(c)))));
        std::vector<std::uint64_t> val_indices = sample_without_replacement(rng, n, n_val);
        std::vector<bool> is_val(n, false);
        for (std::uint64_t idx : val_indices) is_val[idx] = true;
        for (std::uint64_t i = 0; i < n; ++i) {
            if (is_val[i])
                result.split.val.push_back(ids[i]);
            else
                result.split.train.push_back(ids[i]);
        }
    }
    for (Category c : test_categories) {
        std::vector<std::string> ids = ids_of(c);
        result.split.test.insert(result.split.test.end(), ids.begin(), ids.end());
    }

    verify_split_disjoint(result.split);
    result.train_size = result.split.train.size();
    result.test_size = result.split.test.size();
    result.ratio = result.test_size == 0
                       ? 0.0
                       : static_cast<double>(result.train_size) / static_cast<double>(result.test_size);
    return result;
}

} // namespace aerobench
