#include "aerobench/metrics.hpp"

#include <algorithm>
#include <cmath>

#include "aerobench/error.hpp"
#include "aerobench/registry.hpp"
#include "aerobench/threadpool.hpp"

namespace aerobench {

const char* resolution_name(Resolution r) {
    return r == Resolution::Subsampled ? "subsampled" : "full_mesh";
}

namespace {

void check_lengths(std::span<const double> y, std::span<const double> yhat) {
    if (y.size() != yhat.size())
        raise(ErrorCode::LengthMismatch,
              "truth has " + std::to_string(y.size()) + " values, prediction has " +
                  std::to_string(yhat.size()));
    if (y.empty()) raise(ErrorCode::EmptyInput, "metric over zero points");
}

std::vector<double> abs_errors(std::span<const double> y, std::span<const double> yhat) {
    std::vector<double> e(y.size());
    for (std::size_t i = 0; i < y.size(); ++i) e[i] = std::abs(yhat[i] - y[i]);
    return e;
}

} // namespace

double metric_mae(std::span<const double> y, std::span<const double> yhat) {
    check_lengths(y, yhat);
    KahanSum sum;
    for (std::size_t i = 0; i < y.size(); ++i) sum.add(std::abs(yhat[i] - y[i]));
    return sum.value() / static_cast<double>(y.size());
}

double metric_mse(std::span<const double> y, std::span<const double> yhat) {
    check_lengths(y, yhat);
    KahanSum sum;
    for (std::size_t i = 0; i < y.size(); ++i) {
        const double e = yhat[i] - y[i];
        sum.add(e * e);
    }
    return sum.value() / static_cast<double>(y.size());
}

double metric_rmse(std::span<const double> y, std::span<const double> yhat) {
    return std::sqrt(metric_mse(y, yhat));
}

double metric_r2(std::span<const double> y, std::span<const double> yhat) {
    check_lengths(y, yhat);
    if (y.size() < 2)
        raise(ErrorCode::ZeroVarianceTruth, "r2 needs at least two points");
    KahanSum mean_sum;
    for (double v : y) mean_sum.add(v);
    const double mean = mean_sum.value() / static_cast<double>(y.size());
    KahanSum ss_res, ss_tot;
    for (std::size_t i = 0; i < y.size(); ++i) {
        const double e = yhat[i] - y[i];
        const double d = y[i] - mean;
        ss_res.add(e * e);
        ss_tot.add(d * d);
    }
    if (ss_tot.value() <= 0.0)
        raise(ErrorCode::ZeroVarianceTruth, "r2 undefined for constant truth");
    return 1.0 - ss_res.value() / ss_tot.value();
}

double metric_rel_l2(std::span<const double> y, std::span<const double> yhat) {
    check_lengths(y, yhat);
    KahanSum err_sq, truth_sq;
    for (std::size_t i = 0; i < y.size(); ++i) {
        const double e = yhat[i] - y[i];
        err_sq.add(e * e);
        truth_sq.add(y[i] * y[i]);
    }
    if (truth_sq.value() <= 0.0)
        raise(ErrorCode::ZeroNormTruth, "rel_l2 undefined for zero-norm truth");
    return std::sqrt(err_sq.value() / truth_sq.value());
}

double metric_rel_l1(std::span<const double> y, std::span<const double> yhat) {
    check_lengths(y, yhat);
    KahanSum err_abs, truth_abs;
    for (std::size_t i = 0; i < y.size(); ++i) {
        err_abs.add(std::abs(yhat[i] - y[i]));
        truth_abs.add(std::abs(y[i]));
    }
    if (truth_abs.value() <= 0.0)
        raise(ErrorCode::ZeroNormTruth, "rel_l1 undefined for zero-norm truth");
    return err_abs.value() / truth_abs.value();
}

double metric_max_error(std::span<const double> y, std::span<const double> yhat) {
    check_lengths(y, yhat);
    double m = 0.0;
    for (std::size_t i = 0; i < y.size(); ++i) m = std::max(m, std::abs(yhat[i] - y[i]));
    return m;
}

PercentileErrors percentile_errors(std::span<const double> y, std::span<const double> yhat) {
    check_lengths(y, yhat);
    std::vector<double> e = abs_errors(y, yhat);
    std::sort(e.begin(), e.end());
    PercentileErrors p;
    p.p50 = sorted_quantile(e, 0.50);
    p.p90 = sorted_quantile(e, 0.90);
    p.p95 = sorted_quantile(e, 0.95);
    p.p99 = sorted_quantile(e, 0.99);
    return p;
}

double median_rel_error(std::span<const double> y, std::span<const double> yhat, double epsilon) {
    check_lengths(y, yhat);
    std::vector<double> rel(y.size());
    for (std::size_t i = 0; i < y.size(); ++i)
        rel[i] = std::abs(yhat[i] - y[i]) / (std::abs(y[i]) + epsilon);
    std::sort(rel.begin(), rel.end());
    return sorted_quantile(rel, 0.5);
}

MetricPartials MetricPartials::of(std::span<const double> y, std::span<const double> yhat) {
    check_lengths(y, yhat);
    MetricPartials p;
    p.n = y.size();
    for (std::size_t i = 0; i < y.size(); ++i) {
        const double e = yhat[i] - y[i];
        p.sum_abs_err.add(std::abs(e));
        p.sum_sq_err.add(e * e);
        p.sum_y.add(y[i]);
        p.sum_sq_y.add(y[i] * y[i]);
        p.sum_abs_y.add(std::abs(y[i]));
        p.max_abs_err = std::max(p.max_abs_err, std::abs(e));
    }
    return p;
}

void MetricPartials::merge(const MetricPartials& other) {
    n += other.n;
    sum_abs_err.merge(other.sum_abs_err);
    sum_sq_err.merge(other.sum_sq_err);
    sum_y.merge(other.sum_y);
    sum_sq_y.merge(other.sum_sq_y);
    sum_abs_y.merge(other.sum_abs_y);
    max_abs_err = std::max(max_abs_err, other.max_abs_err);
}

const char* metric_kind_name(MetricKind kind) {
    switch (kind) {
    case MetricKind::Mae: return "mae";
    case MetricKind::Mse: return "mse";
    case MetricKind::Rmse: return "rmse";
    case MetricKind::R2: return "r2";
    case MetricKind::RelL2: return "rel_l2";
    case MetricKind::RelL1: return "rel_l1";
    case MetricKind::MaxError: return "max_error";
    }
    return "unknown";
}

MetricKind metric_kind_from_name(const std::string& name) {
    if (name == "mae") return MetricKind::Mae;
    if (name == "mse") return MetricKind::Mse;
    if (name == "rmse") return MetricKind::Rmse;
    if (name == "r2") return MetricKind::R2;
    if (name == "rel_l2") return MetricKind::RelL2;
    if (name == "rel_l1") return MetricKind::RelL1;
    if (name == "max_error") return MetricKind::MaxError;
    raise(ErrorCode::MetricMismatch, "unknown metric name '" + name + "'");
}

double pooled_metric(const MetricPartials& p, MetricKind kind) {
    if (p.n == 0) raise(ErrorCode::EmptyInput, "pooled metric over zero points");
    const auto n = static_cast<double>(p.n);
    switch (kind) {
    case MetricKind::Mae:
        return p.sum_abs_err.value() / n;
    case MetricKind::Mse:
        return p.sum_sq_err.value() / n;
    case MetricKind::Rmse:
        return std::sqrt(p.sum_sq_err.value() / n);
    case MetricKind::R2: {
        const double ss_tot = p.sum_sq_y.value() - p.sum_y.value() * p.sum_y.value() / n;
        if (p.n < 2 || ss_tot <= 0.0)
            raise(ErrorCode::ZeroVarianceTruth, "r2 undefined for constant truth");
        return 1.0 - p.sum_sq_err.value() / ss_tot;
    }
    case MetricKind::RelL2: {
        const double denom = p.sum_sq_y.value();
        if (denom <= 0.0)
            raise(ErrorCode::ZeroNormTruth, "rel_l2 undefined for zero-norm truth");
        return std::sqrt(p.sum_sq_err.value() / denom);
    }
    case MetricKind::RelL1: {
        const double denom = p.sum_abs_y.value();
        if (denom <= 0.0)
            raise(ErrorCode::ZeroNormTruth, "rel_l1 undefined for zero-norm truth");
        return p.sum_abs_err.value() / denom;
    }
    case MetricKind::MaxError:
        return p.max_abs_err;
    }
    raise(ErrorCode::MetricMismatch, "unhandled metric kind");
}

double EvaluationRecord::metric(MetricKind kind) const {
    switch (kind) {
    case MetricKind::Mae: return mae;
    case MetricKind::Mse: return mse;
    case MetricKind::Rmse: return rmse;
    case MetricKind::R2: return r2;
    case MetricKind::RelL2: return rel_l2;
    case MetricKind::RelL1: return rel_l1;
    case MetricKind::MaxError: return max_error;
    }
    raise(ErrorCode::MetricMismatch, "unhandled metric kind");
}

void EvaluationRecord::validate() const {
    auto fail = [&](const std::string& what) {
        raise(ErrorCode::MetricMismatch, "record invariant violated: " + what);
    };
    const double tol = 1e-12;
    if (std::abs(rmse - std::sqrt(mse)) > tol * std::max(1.0, rmse)) fail("rmse != sqrt(mse)");
    if (mae > rmse * (1.0 + tol) + 1e-300) fail("mae > rmse");
    if (!(percentiles.p50 <= percentiles.p90 && percentiles.p90 <= percentiles.p95 &&
          percentiles.p95 <= percentiles.p99))
        fail("percentiles not monotone");
    if (max_error + tol * std::max(1.0, max_error) < percentiles.p99) fail("max_error < p99");
    if (rel_l2 < 0.0) fail("rel_l2 < 0");
    if (r2 > 1.0 + tol) fail("r2 > 1");
}

EvaluationResult evaluate(const std::string& model_name, const std::string& split_name,
                          Resolution resolution, const std::vector<DesignData>& designs,
                          std::size_t workers) {
    if (designs.empty()) raise(ErrorCode::EmptyInput, "evaluate called with zero designs");

    std::vector<std::size_t> order(designs.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        return designs[a].design_id < designs[b].design_id;
    });

    struct PerDesign {
        DesignScore score;
        MetricPartials partials;
        std::vector<double> abs_err;
        std::vector<double> rel_err;
    };
    std::vector<PerDesign> rows(designs.size());

    parallel_for(designs.size(), workers, [&](std::size_t slot) {
        const DesignData& d = designs[order[slot]];
        if (d.truth.size() != d.prediction.size())
            raise(ErrorCode::LengthMismatch,
                  "design " + d.design_id + ": truth has " + std::to_string(d.truth.size()) +
                      " values, prediction has " + std::to_string(d.prediction.size()));
        if (d.truth.empty())
            raise(ErrorCode::EmptyInput, "design " + d.design_id + " has zero points");

        PerDesign row;
        row.partials = MetricPartials::of(d.truth, d.prediction);

        DesignScore& s = row.score;
        s.design_id = d.design_id;
        s.category = d.category;
        s.n = d.truth.size();
        s.mae = pooled_metric(row.partials, MetricKind::Mae);
        s.mse = pooled_metric(row.partials, MetricKind::Mse);
        s.rmse = pooled_metric(row.partials, MetricKind::Rmse);
        s.max_error = pooled_metric(row.partials, MetricKind::MaxError);
        try {
            s.r2 = pooled_metric(row.partials, MetricKind::R2);
        } catch (const Error&) {
            s.r2.reset();
        }
        try {
            s.rel_l2 = pooled_metric(row.partials, MetricKind::RelL2);
        } catch (const Error&) {
            s.rel_l2.reset();
        }
        try {
            s.rel_l1 = pooled_metric(row.partials, MetricKind::RelL1);
        } catch (const Error&) {
            s.rel_l1.reset();
        }
        s.percentiles = percentile_errors(d.truth, d.prediction);
        s.median_rel_error = median_rel_error(d.truth, d.prediction);

        row.abs_err.resize(d.truth.size());
        row.rel_err.resize(d.truth.size());
        for (std::size_t i = 0; i < d.truth.size(); ++i) {
            row.abs_err[i] = std::abs(d.prediction[i] - d.truth[i]);
            row.rel_err[i] =
                row.abs_err[i] / (std::abs(d.truth[i]) + kMedianRelEpsilon);
        }
        rows[slot] = std::move(row);
    });

    EvaluationResult result;
    EvaluationRecord& rec = result.record;
    rec.model_name = model_name;
    rec.split_name = split_name;
    rec.resolution = resolution;
    rec.n_designs = designs.size();

    MetricPartials pooled;
    std::size_t total_points = 0;
    for (const auto& row : rows) total_points += row.abs_err.size();
    std::vector<double> pooled_abs, pooled_rel;
    pooled_abs.reserve(total_points);
    pooled_rel.reserve(total_points);
    for (auto& row : rows) {
        pooled.merge(row.partials);
        pooled_abs.insert(pooled_abs.end(), row.abs_err.begin(), row.abs_err.end());
        pooled_rel.insert(pooled_rel.end(), row.rel_err.begin(), row.rel_err.end());
        rec.per_design.push_back(row.score);
        result.partials.push_back(
            DesignPartials{row.score.design_id, row.score.category, row.partials});
    }

    rec.n_points_total = pooled.n;
    rec.mae = pooled_metric(pooled, MetricKind::Mae);
    rec.mse = pooled_metric(pooled, MetricKind::Mse);
    rec.rmse = pooled_metric(pooled, MetricKind::Rmse);
    rec.r2 = pooled_metric(pooled, MetricKind::R2);
    rec.rel_l2 = pooled_metric(pooled, MetricKind::RelL2);
    rec.rel_l1 = pooled_metric(pooled, MetricKind::RelL1);
    rec.max_error = pooled_metric(pooled, MetricKind::MaxError);

    std::sort(pooled_abs.begin(), pooled_abs.end());
    std::sort(pooled_rel.begin(), pooled_rel.end());
    rec.percentiles.p50 = sorted_quantile(pooled_abs, 0.50);
    rec.percentiles.p90 = sorted_quantile(pooled_abs, 0.90);
    rec.percentiles.p95 = sorted_quantile(pooled_abs, 0.95);
    rec.percentiles.p99 = sorted_quantile(pooled_abs, 0.99);
    rec.median_rel_error = sorted_quantile(pooled_rel, 0.5);

    rec.validate();
    return result;
}

namespace {

nlohmann::ordered_json quantity(double value, const char* unit) {
    nlohmann::ordered_json q;
    q["value"] = value;
    q["unit"] = unit;
    return q;
}

nlohmann::ordered_json opt_quantity(const std::optional<double>& value, const char* unit) {
    if (!value) return nullptr;
    return quantity(*value, unit);
}

} // namespace

nlohmann::ordered_json record_to_json(const EvaluationRecord& record) {
    nlohmann::ordered_json doc;
    doc["model"] = record.model_name;
    doc["split"] = record.split_name;
    doc["resolution"] = resolution_name(record.resolution);
    doc["n_designs"] = record.n_designs;
    doc["n_points_total"] = record.n_points_total;
    doc["mae"] = quantity(record.mae, "m2_per_s2");
    doc["mse"] = quantity(record.mse, "m4_per_s4");
    doc["rmse"] = quantity(record.rmse, "m2_per_s2");
    doc["r2"] = quantity(record.r2, "dimensionless");
    doc["rel_l2"] = quantity(record.rel_l2, "dimensionless");
    doc["rel_l1"] = quantity(record.rel_l1, "dimensionless");
    doc["max_error"] = quantity(record.max_error, "m2_per_s2");
    doc["median_rel_error"] = quantity(record.median_rel_error, "dimensionless");
    doc["p50"] = quantity(record.percentiles.p50, "m2_per_s2");
    doc["p90"] = quantity(record.percentiles.p90, "m2_per_s2");
    doc["p95"] = quantity(record.percentiles.p95, "m2_per_s2");
    doc["p99"] = quantity(record.percentiles.p99, "m2_per_s2");
    doc["per_design"] = nlohmann::ordered_json::array();
    for (const auto& s : record.per_design) {
        nlohmann::ordered_json row;
        row["design_id"] = s.design_id;
        row["category"] = std::string(1, category_code(s.category));
        row["n"] = s.n;
        row["mae"] = quantity(s.mae, "m2_per_s2");
        row["mse"] = quantity(s.mse, "m4_per_s4");
        row["rmse"] = quantity(s.rmse, "m2_per_s2");
        row["r2"] = opt_quantity(s.r2, "dimensionless");
        row["rel_l2"] = opt_quantity(s.rel_l2, "dimensionless");
        row["rel_l1"] = opt_quantity(s.rel_l1, "dimensionless");
        row["max_error"] = quantity(s.max_error, "m2_per_s2");
        row["median_rel_error"] = quantity(s.median_rel_error, "dimensionless");
        row["p50"] = quantity(s.percentiles.p50, "m2_per_s2");
        row["p90"] = quantity(s.percentiles.p90, "m2_per_s2");
        row["p95"] = quantity(s.percentiles.p95, "m2_per_s2");
        row["p99"] = quantity(s.percentiles.p99, "m2_per_s2");
        doc["per_design"].push_back(std::move(row));
    }
    return doc;
}

} // namespace aerobench
