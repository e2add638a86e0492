// physics.hpp — pressure-drag surface integrals used as consistency checks.
//
// Fields are kinematic pressure (p/rho), so the integrated drag is a
// kinematic force in m^4/s^2; multiplying by the fluid density gives Newtons.
// Face pressure is the arithmetic mean of the three vertex values.
#pragma once

#include <cstdint>
#include <span>
#include <string>

#include "aerobench/geometry.hpp"
#include "aerobench/mesh.hpp"

namespace aerobench {

struct FlowReference {
    double p_inf = 0.0;  // freestream kinematic pressure, m^2/s^2
    double u_inf = 30.0; // freestream speed, m/s
    double a_ref = 2.17; // reference frontal area, m^2
    Vec3 x_hat{1.0, 0.0, 0.0};

    void validate() const;
};

enum class OrientationCheck {
    Off,
    Spot, // deterministic hash-selected subset of edges, about 5%
    Full,
};

struct DragResult {
    double d_p = 0.0; // kinematic pressure drag, m^4/s^2
    std::uint64_t degenerate_faces = 0;
    std::uint64_t faces_integrated = 0;
};

// D_p = -sum_f (p_f - p_inf) (n_f . x_hat) A_f over outward-oriented faces.
// Faces with area <= 1e-12 m^2 are counted and skipped.
DragResult pressure_drag(const SurfaceMesh& mesh, std::span<const double> field,
                         const FlowReference& ref,
                         OrientationCheck orientation = OrientationCheck::Spot);

double drag_coefficient(double drag, const FlowReference& ref);

struct DragConsistency {
    double d_true = 0.0;
    double d_pred = 0.0;
    double abs_diff = 0.0;
    double rel_diff = 0.0;
    double cd_true = 0.0;
    double cd_pred = 0.0;
    std::uint64_t degenerate_faces = 0;
};

// Diagnostic comparison of truth and predicted fields at full resolution.
// Never a leaderboard input.
DragConsistency drag_consistency_report(const SurfaceMesh& mesh, std::span<const double> truth,
                                        std::span<const double> predicted,
                                        const FlowReference& ref);

} // namespace aerobench
