// metrics.hpp — scalar regression metrics in physical units.
//
// Headline numbers are pooled over the concatenation of all test designs'
// points. Per-design partial sums are retained so the bootstrap can recompute
// pooled metrics over resampled design multisets without touching raw arrays.
#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "json.hpp"

#include "aerobench/kahan.hpp"
#include "aerobench/mesh.hpp"

namespace aerobench {

enum class Resolution { Subsampled, FullMesh };
const char* resolution_name(Resolution r);

inline constexpr double kMedianRelEpsilon = 1e-8; // m^2/s^2 denominator guard

double metric_mae(std::span<const double> y, std::span<const double> yhat);
double metric_mse(std::span<const double> y, std::span<const double> yhat);
double metric_rmse(std::span<const double> y, std::span<const double> yhat);
double metric_r2(std::span<const double> y, std::span<const double> yhat);
double metric_rel_l2(std::span<const double> y, std::span<const double> yhat);
double metric_rel_l1(std::span<const double> y, std::span<const double> yhat);
double metric_max_error(std::span<const double> y, std::span<const double> yhat);

struct PercentileErrors {
    double p50 = 0.0;
    double p90 = 0.0;
    double p95 = 0.0;
    double p99 = 0.0;
};

PercentileErrors percentile_errors(std::span<const double> y, std::span<const double> yhat);
double median_rel_error(std::span<const double> y, std::span<const double> yhat,
                        double epsilon = kMedianRelEpsilon);

// Sums sufficient to pool every non-percentile metric over any multiset of
// designs. Merging is associative; merge order is fixed by callers.
struct MetricPartials {
    std::uint64_t n = 0;
    KahanSum sum_abs_err;
    KahanSum sum_sq_err;
    KahanSum sum_y;
    KahanSum sum_sq_y;
    KahanSum sum_abs_y;
    double max_abs_err = 0.0;

    static MetricPartials of(std::span<const double> y, std::span<const double> yhat);
    void merge(const MetricPartials& other);
};

enum class MetricKind { Mae, Mse, Rmse, R2, RelL2, RelL1, MaxError };
const char* metric_kind_name(MetricKind kind);
MetricKind metric_kind_from_name(const std::string& name);

double pooled_metric(const MetricPartials& partials, MetricKind kind);

struct DesignData {
    std::string design_id;
    Category category = Category::Unknown;
    std::vector<double> truth;
    std::vector<double> prediction;
};

struct DesignScore {
    std::string design_id;
    Category category = Category::Unknown;
    std::uint64_t n = 0;
    double mae = 0.0;
    double mse = 0.0;
    double rmse = 0.0;
    std::optional<double> r2;      // absent when the design's truth is constant
    std::optional<double> rel_l2;  // absent when the design's truth has zero norm
    std::optional<double> rel_l1;
    double max_error = 0.0;
    double median_rel_error = 0.0;
    PercentileErrors percentiles;
};

struct EvaluationRecord {
    std::string model_name;
    std::string split_name;
    Resolution resolution = Resolution::Subsampled;
    std::uint64_t n_designs = 0;
    std::uint64_t n_points_total = 0;
    double mae = 0.0;
    double mse = 0.0;
    double rmse = 0.0;
    double r2 = 0.0;
    double rel_l2 = 0.0;
    double rel_l1 = 0.0;
    double max_error = 0.0;
    double median_rel_error = 0.0;
    PercentileErrors percentiles;
    std::vector<DesignScore> per_design; // sorted by design id

    double metric(MetricKind kind) const;
    void validate() const;
};

struct DesignPartials {
    std::string design_id;
    Category category = Category::Unknown;
    MetricPartials partials;
};

struct EvaluationResult {
    EvaluationRecord record;
    std::vector<DesignPartials> partials; // sorted by design id
};

// Pools metrics over all designs' points. Designs are sorted by id before
// reduction so the result is identical at any worker count.
EvaluationResult evaluate(const std::string& model_name, const std::string& split_name,
                          Resolution resolution, const std::vector<DesignData>& designs,
                          std::size_t workers = 1);

nlohmann::ordered_json record_to_json(const EvaluationRecord& record);

} // namespace aerobench
