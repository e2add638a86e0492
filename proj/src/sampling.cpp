#include "aerobench/sampling.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "aerobench/error.hpp"
#include "aerobench/rng.hpp"

namespace aerobench {

SampleSet sample_vertices(const SurfaceMesh& mesh, std::uint64_t n, std::uint64_t master_seed,
                          const std::string& field_name, bool with_normals) {
    const std::uint64_t n_vertices = mesh.vertices.size();
    if (n > n_vertices)
        raise(ErrorCode::SampleLargerThanMesh,
              "requested " + std::to_string(n) + " samples from a " +
                  std::to_string(n_vertices) + "-vertex mesh (design " + mesh.design_id + ")");
    const std::vector<double>* field = mesh.find_field(field_name);
    if (!field)
        raise(ErrorCode::MissingField,
              "field '" + field_name + "' missing on design " + mesh.design_id);

    SampleSet sample;
    sample.design_id = mesh.design_id;
    sample.seed = master_seed;
    sample.n = n;

    SplitMix64 rng(design_seed(master_seed, mesh.design_id));
    sample.indices = sample_without_replacement(rng, n_vertices, n);

    sample.points.resize(n);
    sample.truth.resize(n);
    for (std::uint64_t i = 0; i < n; ++i) {
        sample.points[i] = mesh.vertices[sample.indices[i]];
        sample.truth[i] = (*field)[sample.indices[i]];
    }
    if (with_normals) {
        std::vector<Vec3> normals(n);
        if (mesh.vertex_normals) {
            for (std::uint64_t i = 0; i < n; ++i)
                normals[i] = (*mesh.vertex_normals)[sample.indices[i]];
        } else {
            const std::vector<Vec3> computed = compute_vertex_normals(mesh);
            for (std::uint64_t i = 0; i < n; ++i) normals[i] = computed[sample.indices[i]];
        }
        sample.normals = std::move(normals);
    }
    return sample;
}

namespace {

double coord(const Vec3& v, std::uint32_t axis) {
    return axis == 0 ? v.x : (axis == 1 ? v.y : v.z);
}

} // namespace

// Bounded max-heap over (squared distance, index); the top is the current
// worst kept hit. Lexicographic pair order makes equal-distance ties resolve
// to the lowest index.
struct SpatialIndex::KnnHeap {
    std::vector<std::pair<double, std::uint64_t>> items;
    std::size_t capacity;

    explicit KnnHeap(std::size_t k) : capacity(k) { items.reserve(k); }

    double worst() const {
        return items.size() < capacity ? std::numeric_limits<double>::infinity()
                                       : items.front().first;
    }

    void offer(double d2, std::uint64_t idx) {
        const std::pair<double, std::uint64_t> cand{d2, idx};
        if (items.size() < capacity) {
            items.push_back(cand);
            std::push_heap(items.begin(), items.end());
            return;
        }
        if (cand < items.front()) {
            std::pop_heap(items.begin(), items.end());
            items.back() = cand;
            std::push_heap(items.begin(), items.end());
        }
    }
};

SpatialIndex::SpatialIndex(std::vector<Vec3> points, std::size_t leaf_size)
    : points_(std::move(points)), leaf_size_(leaf_size == 0 ? 1 : leaf_size) {
    if (points_.empty())
        raise(ErrorCode::EmptyPointSet, "spatial index over zero points");
    order_.resize(points_.size());
    for (std::size_t i = 0; i < points_.size(); ++i) order_[i] = static_cast<std::uint32_t>(i);
    nodes_.reserve(2 * points_.size() / leaf_size_ + 1);
    root_ = build(0, static_cast<std::uint32_t>(points_.size()));
}

std::int32_t SpatialIndex::build(std::uint32_t begin, std::uint32_t end) {
    Node node;
    node.begin = begin;
    node.end = end;
    if (end - begin <= leaf_size_) {
        nodes_.push_back(node);
        return static_cast<std::int32_t>(nodes_.size() - 1);
    }

    Vec3 lo = points_[order_[begin]], hi = lo;
    for (std::uint32_t i = begin + 1; i < end; ++i) {
        const Vec3& p = points_[order_[i]];
        lo.x = std::min(lo.x, p.x);
        lo.y = std::min(lo.y, p.y);
        lo.z = std::min(lo.z, p.z);
        hi.x = std::max(hi.x, p.x);
        hi.y = std::max(hi.y, p.y);
        hi.z = std::max(hi.z, p.z);
    }
    const Vec3 extent = hi - lo;
    std::uint32_t axis = 0;
    if (extent.y > coord(extent, axis)) axis = 1;
    if (extent.z > coord(extent, axis)) axis = 2;

    const std::uint32_t mid = begin + (end - begin) / 2;
    std::nth_element(order_.begin() + begin, order_.begin() + mid, order_.begin() + end,
                     [&](std::uint32_t a, std::uint32_t b) {
                         const double ca = coord(points_[a], axis), cb = coord(points_[b], axis);
                         if (ca != cb) return ca < cb;
                         return a < b;
                     });
    node.axis = axis;
    node.split = coord(points_[order_[mid]], axis);

    const auto self = static_cast<std::int32_t>(nodes_.size());
    nodes_.push_back(node);
    const std::int32_t left = build(begin, mid);
    const std::int32_t right = build(mid, end);
    nodes_[self].left = left;
    nodes_[self].right = right;
    return self;
}

void SpatialIndex::search(std::int32_t node_id, const Vec3& query, KnnHeap& heap) const {
    const Node& node = nodes_[node_id];
    if (node.left < 0) {
        for (std::uint32_t i = node.begin; i < node.end; ++i) {
            const std::uint32_t idx = order_[i];
            heap.offer(norm2(points_[idx] - query), idx);
        }
        return;
    }
    const double diff = coord(query, node.axis) - node.split;
    const std::int32_t near = diff < 0.0 ? node.left : node.right;
    const std::int32_t far = diff < 0.0 ? node.right : node.left;
    search(near, query, heap);
    // Visit the far side on exact bound equality too, so equidistant points
    // with lower indices are never missed.
    if (diff * diff <= heap.worst()) search(far, query, heap);
}

NearestHit SpatialIndex::nearest(const Vec3& query) const {
    KnnHeap heap(1);
    search(root_, query, heap);
    const auto& [d2, idx] = heap.items.front();
    return NearestHit{idx, std::sqrt(d2)};
}

std::vector<NearestHit> SpatialIndex::knearest(const Vec3& query, std::size_t k) const {
    if (k == 0) return {};
    KnnHeap heap(std::min(k, points_.size()));
    search(root_, query, heap);
    std::sort(heap.items.begin(), heap.items.end());
    std::vector<NearestHit> hits(heap.items.size());
    for (std::size_t i = 0; i < heap.items.size(); ++i)
        hits[i] = NearestHit{heap.items[i].second, std::sqrt(heap.items[i].first)};
    return hits;
}

std::vector<double> interpolate_to_full(const SurfaceMesh& mesh, const SampleSet& sample,
                                        const std::vector<double>& predictions_at_sample) {
    if (predictions_at_sample.size() != sample.indices.size())
        raise(ErrorCode::LengthMismatch,
              "prediction count " + std::to_string(predictions_at_sample.size()) +
                  " != sample size " + std::to_string(sample.indices.size()) + " for design " +
                  sample.design_id);
    if (sample.indices.empty())
        raise(ErrorCode::EmptyPointSet, "cannot interpolate from an empty sample");

    std::vector<double> full(mesh.vertices.size());
    std::vector<std::int64_t> own_slot(mesh.vertices.size(), -1);
    for (std::size_t s = 0; s < sample.indices.size(); ++s)
        own_slot[sample.indices[s]] = static_cast<std::int64_t>(s);

    const SpatialIndex index(sample.points);
    for (std::size_t v = 0; v < mesh.vertices.size(); ++v) {
        if (own_slot[v] >= 0) {
            full[v] = predictions_at_sample[static_cast<std::size_t>(own_slot[v])];
            continue;
        }
        const NearestHit hit = index.nearest(mesh.vertices[v]);
        full[v] = predictions_at_sample[hit.index];
    }
    return full;
}

} // namespace aerobench
