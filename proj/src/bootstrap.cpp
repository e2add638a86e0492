#include "aerobench/bootstrap.hpp"

#include <algorithm>
#include <cmath>

#include "aerobench/error.hpp"
#include "aerobench/rng.hpp"
#include "aerobench/threadpool.hpp"

namespace aerobench {

namespace {

void finish_summary(BootstrapSummary& summary, std::vector<double>&& replicates,
                    const BootstrapConfig& config) {
    const std::uint64_t b = replicates.size();
    summary.b = b;
    summary.confidence = config.confidence;

    KahanSum mean_sum;
    for (double v : replicates) mean_sum.add(v);
    summary.mean_boot = mean_sum.value() / static_cast<double>(b);

    if (b > 1) {
        KahanSum var_sum;
        for (double v : replicates) {
            const double d = v - summary.mean_boot;
            var_sum.add(d * d);
        }
        summary.std_boot = std::sqrt(var_sum.value() / static_cast<double>(b - 1));
    }

    std::vector<double> sorted(replicates);
    std::sort(sorted.begin(), sorted.end());
    const double alpha = 1.0 - config.confidence;
    auto lo_idx = static_cast<std::uint64_t>(std::floor(alpha / 2.0 * static_cast<double>(b)));
    auto hi_idx =
        static_cast<std::uint64_t>(std::floor((1.0 - alpha / 2.0) * static_cast<double>(b)));
    if (lo_idx >= b) lo_idx = b - 1;
    if (hi_idx >= b) hi_idx = b - 1;
    summary.ci_lower = sorted[lo_idx];
    summary.ci_upper = sorted[hi_idx];

    if (b <= config.replicate_storage_cap) summary.replicates = std::move(replicates);
}

} // namespace

BootstrapSummary bootstrap_metric(const std::vector<DesignPartials>& designs, MetricKind metric,
                                  const BootstrapConfig& config, std::size_t workers,
                                  const std::set<Category>* required_categories) {
    if (designs.size() < 2)
        raise(ErrorCode::TooFewDesigns, "bootstrap needs at least two designs, got " +
                                            std::to_string(designs.size()));
    if (config.b < 1) raise(ErrorCode::ConfigError, "bootstrap replicate count must be >= 1");
    if (!(config.confidence > 0.0 && config.confidence < 1.0))
        raise(ErrorCode::ConfigError, "confidence must be in (0, 1)");

    // Strata are contiguous index lists over the caller's design order,
    // iterated in fixed category order.
    std::vector<std::vector<std::size_t>> strata;
    if (config.stratify_by_category) {
        constexpr Category kOrder[] = {Category::Fastback, Category::Estateback,
                                       Category::Notchback, Category::Unknown};
        for (Category c : kOrder) {
            std::vector<std::size_t> members;
            for (std::size_t i = 0; i < designs.size(); ++i)
                if (designs[i].category == c) members.push_back(i);
            if (members.empty()) {
                if (required_categories && required_categories->count(c))
                    raise(ErrorCode::EmptyCategory,
                          std::string("stratified bootstrap requires category ") +
                              category_name(c) + " but it has zero designs");
                continue;
            }
            strata.push_back(std::move(members));
        }
    } else {
        std::vector<std::size_t> all(designs.size());
        for (std::size_t i = 0; i < all.size(); ++i) all[i] = i;
        strata.push_back(std::move(all));
    }

    BootstrapSummary summary;
    summary.metric_name = metric_kind_name(metric);
    {
        MetricPartials full;
        for (const auto& d : designs) full.merge(d.partials);
        summary.point_estimate = pooled_metric(full, metric);
    }

    std::vector<double> replicates(config.b);
    parallel_for(config.b, workers, [&](std::size_t rep) {
        SplitMix64 rng(substream_seed(config.master_seed, rep));
        MetricPartials pooled;
        for (const auto& stratum : strata) {
            const std::uint64_t count = stratum.size();
            for (std::uint64_t draw = 0; draw < count; ++draw) {
                const std::uint64_t pick = rng.bounded(count);
                pooled.merge(designs[stratum[pick]].partials);
            }
        }
        replicates[rep] = pooled_metric(pooled, metric);
    });

    finish_summary(summary, std::move(replicates), config);
    return summary;
}

BootstrapSummary bootstrap_metric_pairs(std::span<const double> y, std::span<const double> yhat,
                                        MetricKind metric, const BootstrapConfig& config) {
    if (y.size() != yhat.size())
        raise(ErrorCode::LengthMismatch, "pair bootstrap needs matched arrays");
    if (y.size() < 2) raise(ErrorCode::TooFewDesigns, "pair bootstrap needs at least two pairs");

    BootstrapSummary summary;
    summary.metric_name = metric_kind_name(metric);
    summary.point_estimate = pooled_metric(MetricPartials::of(y, yhat), metric);

    const std::uint64_t n = y.size();
    std::vector<double> replicates(config.b);
    for (std::uint64_t rep = 0; rep < config.b; ++rep) {
        SplitMix64 rng(substream_seed(config.master_seed, rep));
        MetricPartials pooled;
        pooled.n = n;
        for (std::uint64_t draw = 0; draw < n; ++draw) {
            const std::uint64_t i = rng.bounded(n);
            const double e = yhat[i] - y[i];
            pooled.sum_abs_err.add(std::abs(e));
            pooled.sum_sq_err.add(e * e);
            pooled.sum_y.add(y[i]);
            pooled.sum_sq_y.add(y[i] * y[i]);
            pooled.sum_abs_y.add(std::abs(y[i]));
            pooled.max_abs_err = std::max(pooled.max_abs_err, std::abs(e));
        }
        replicates[rep] = pooled_metric(pooled, metric);
    }

    finish_summary(summary, std::move(replicates), config);
    return summary;
}

const char* significance_name(Significance s) {
    return s == Significance::Separated ? "Separated" : "Overlapping";
}

Significance significance_by_overlap(const BootstrapSummary& a, const BootstrapSummary& b) {
    if (a.metric_name != b.metric_name)
        raise(ErrorCode::MetricMismatch, "cannot compare intervals for '" + a.metric_name +
                                             "' and '" + b.metric_name + "'");
    const bool disjoint = a.ci_upper < b.ci_lower || b.ci_upper < a.ci_lower;
    return disjoint ? Significance::Separated : Significance::Overlapping;
}

BootstrapSummary summary_from_half_width(const std::string& metric_name, double mean,
                                         double half_width) {
    BootstrapSummary s;
    s.metric_name = metric_name;
    s.point_estimate = mean;
    s.mean_boot = mean;
    s.std_boot = half_width;
    s.ci_lower = mean - half_width;
    s.ci_upper = mean + half_width;
    return s;
}

} // namespace aerobench
