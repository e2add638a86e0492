// sampling.hpp — seeded vertex subsampling and exact nearest-neighbor search.
//
// Sampling is reproducible from (master seed, design id) alone, so the result
// never depends on iteration order or worker count. The spatial index is an
// exact k-d tree; nearest-neighbor ties resolve to the lowest point index so
// queries are fully deterministic.
#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "aerobench/mesh.hpp"

namespace aerobench {

struct SampleSet {
    std::string design_id;
    std::vector<std::uint64_t> indices; // distinct vertex indices, draw order
    std::vector<Vec3> points;
    std::optional<std::vector<Vec3>> normals;
    std::vector<double> truth;
    std::uint64_t seed = 0; // the master seed the draw derives from
    std::uint64_t n = 0;
};

// Draws n distinct vertices uniformly without replacement. Truth values come
// from `field_name`; normals are taken from the mesh or computed when absent.
SampleSet sample_vertices(const SurfaceMesh& mesh, std::uint64_t n, std::uint64_t master_seed,
                          const std::string& field_name, bool with_normals = true);

struct NearestHit {
    std::uint64_t index = 0;
    double distance = 0.0;
};

class SpatialIndex {
public:
    explicit SpatialIndex(std::vector<Vec3> points, std::size_t leaf_size = 16);

    NearestHit nearest(const Vec3& query) const;
    // k nearest hits sorted by (distance, index); returns fewer when the
    // index holds fewer than k points.
    std::vector<NearestHit> knearest(const Vec3& query, std::size_t k) const;

    std::size_t size() const { return points_.size(); }
    const std::vector<Vec3>& points() const { return points_; }

private:
    struct Node {
        double split = 0.0;
        std::uint32_t axis = 0;
        std::int32_t left = -1;
        std::int32_t right = -1;
        std::uint32_t begin = 0;
        std::uint32_t end = 0; // leaf range when left < 0
    };

    struct KnnHeap;

    std::int32_t build(std::uint32_t begin, std::uint32_t end);
    void search(std::int32_t node, const Vec3& query, KnnHeap& heap) const;

    std::vector<Vec3> points_;
    std::vector<std::uint32_t> order_;
    std::vector<Node> nodes_;
    std::size_t leaf_size_;
    std::int32_t root_ = -1;
};

// 1-NN transfer of per-sample predictions onto every mesh vertex. Sampled
// vertices receive their own prediction exactly.
std::vector<double> interpolate_to_full(const SurfaceMesh& mesh, const SampleSet& sample,
                                        const std::vector<double>& predictions_at_sample);

} // namespace aerobench
