#include "aerobench/physics.hpp"

#include <cmath>
#include <unordered_map>

#include "aerobench/error.hpp"
#include "aerobench/kahan.hpp"
#include "aerobench/rng.hpp"

namespace aerobench {

void FlowReference::validate() const {
    if (!(u_inf > 0.0)) raise(ErrorCode::ConfigError, "u_inf must be positive");
    if (!(a_ref > 0.0)) raise(ErrorCode::ConfigError, "a_ref must be positive");
    if (std::abs(norm(x_hat) - 1.0) > 1e-9)
        raise(ErrorCode::ConfigError, "x_hat must be a unit vector");
}

namespace {

// Shared edges must be traversed in opposite directions by their two faces.
// Each edge key accumulates traversal count and direction sum; a consistent
// closed manifold leaves every shared edge with count 2 and sum 0.
void check_orientation(const SurfaceMesh& mesh, OrientationCheck mode) {
    if (mode == OrientationCheck::Off) return;

    struct EdgeUse {
        std::uint32_t count = 0;
        std::int32_t direction_sum = 0;
    };
    std::unordered_map<std::uint64_t, EdgeUse> edges;
    edges.reserve(mesh.triangles.size() * 2);

    auto edge_key = [](std::uint32_t a, std::uint32_t b) {
        const std::uint32_t lo = a < b ? a : b;
        const std::uint32_t hi = a < b ? b : a;
        return (static_cast<std::uint64_t>(lo) << 32) | hi;
    };
    auto selected = [&](std::uint64_t key) {
        if (mode == OrientationCheck::Full) return true;
        return mix64(key) % 20 == 0; // deterministic 5% spot check
    };

    for (const auto& tri : mesh.triangles) {
        for (int e = 0; e < 3; ++e) {
            const std::uint32_t a = tri[e];
            const std::uint32_t b = tri[(e + 1) % 3];
            if (a == b) continue;
            const std::uint64_t key = edge_key(a, b);
            if (!selected(key)) continue;
            EdgeUse& use = edges[key];
            ++use.count;
            use.direction_sum += (a < b) ? 1 : -1;
        }
    }
    for (const auto& [key, use] : edges) {
        const bool bad = (use.count == 2 && use.direction_sum != 0) || use.count > 2;
        if (bad)
            raise(ErrorCode::OrientationInconsistent,
                  "edge " + std::to_string(key >> 32) + "-" +
                      std::to_string(key & 0xFFFFFFFFu) + " has inconsistent winding in design " +
                      mesh.design_id);
    }
}

} // namespace

DragResult pressure_drag(const SurfaceMesh& mesh, std::span<const double> field,
                         const FlowReference& ref, OrientationCheck orientation) {
    ref.validate();
    if (field.size() != mesh.vertices.size())
        raise(ErrorCode::LengthMismatch,
              "field has " + std::to_string(field.size()) + " values for " +
                  std::to_string(mesh.vertices.size()) + " vertices");
    check_orientation(mesh, orientation);

    DragResult result;
    KahanSum drag;
    for (const auto& tri : mesh.triangles) {
        const Vec3& a = mesh.vertices[tri[0]];
        const Vec3& b = mesh.vertices[tri[1]];
        const Vec3& c = mesh.vertices[tri[2]];
        // cross/2 is the area-weighted face normal, so one dot product gives
        // (n_f . x_hat) A_f without normalizing.
        const Vec3 area_normal = cross(b - a, c - a) * 0.5;
        const double area = norm(area_normal);
        if (area <= 1e-12) {
            ++result.degenerate_faces;
            continue;
        }
        const double p_face =
            (field[tri[0]] + field[tri[1]] + field[tri[2]]) / 3.0 - ref.p_inf;
        drag.add(-p_face * dot(area_normal, ref.x_hat));
        ++result.faces_integrated;
    }
    result.d_p = drag.value();
    return result;
}

double drag_coefficient(double drag, const FlowReference& ref) {
    ref.validate();
    return drag / (0.5 * ref.u_inf * ref.u_inf * ref.a_ref);
}

DragConsistency drag_consistency_report(const SurfaceMesh& mesh, std::span<const double> truth,
                                        std::span<const double> predicted,
                                        const FlowReference& ref) {
    const DragResult t = pressure_drag(mesh, truth, ref);
    const DragResult p = pressure_drag(mesh, predicted, ref, OrientationCheck::Off);
    DragConsistency out;
    out.d_true = t.d_p;
    out.d_pred = p.d_p;
    out.abs_diff = std::abs(p.d_p - t.d_p);
    const double denom = std::max(std::abs(t.d_p), 1e-300);
    out.rel_diff = out.abs_diff / denom;
    out.cd_true = drag_coefficient(t.d_p, ref);
    out.cd_pred = drag_coefficient(p.d_p, ref);
    out.degenerate_faces = t.degenerate_faces;
    return out;
}

} // namespace aerobench
