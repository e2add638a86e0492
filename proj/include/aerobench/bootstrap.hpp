// bootstrap.hpp — stratified paired bootstrap confidence intervals.
//
// Whole designs are resampled with replacement, independently within each
// category so every replicate preserves the original category counts. The
// replicate metric pools the points of the drawn designs, duplicates
// included, which keeps replicate values exactly consistent with the
// headline pooled metrics. Replicate b draws from its own RNG substream, so
// results are bit-identical at any worker count.
#pragma once

#include <cstdint>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "aerobench/metrics.hpp"

namespace aerobench {

struct BootstrapConfig {
    std::uint64_t b = 2000;
    double confidence = 0.95;
    std::uint64_t master_seed = 0;
    bool stratify_by_category = true;
    // Keep the raw replicate array in the summary while B stays under this
    // cap; summaries alone persist beyond it.
    std::uint64_t replicate_storage_cap = 1u << 20;
};

struct BootstrapSummary {
    std::string metric_name;
    double point_estimate = 0.0; // metric on the original, unresampled data
    double mean_boot = 0.0;
    double std_boot = 0.0; // B-1 denominator
    double ci_lower = 0.0;
    double ci_upper = 0.0;
    double confidence = 0.95;
    std::uint64_t b = 0;
    std::vector<double> replicates; // empty when over the storage cap
};

// `designs` must be ordered (the pipeline passes them design-id sorted); the
// draw streams depend only on (master_seed, replicate index) and that order.
// `required_categories`, when given, makes a category with zero designs an
// error instead of an absent stratum.
BootstrapSummary bootstrap_metric(const std::vector<DesignPartials>& designs, MetricKind metric,
                                  const BootstrapConfig& config, std::size_t workers = 1,
                                  const std::set<Category>* required_categories = nullptr);

// Sensitivity variant: resamples individual (truth, prediction) pairs from
// the pooled arrays instead of whole designs; never stratified.
BootstrapSummary bootstrap_metric_pairs(std::span<const double> y, std::span<const double> yhat,
                                        MetricKind metric, const BootstrapConfig& config);

enum class Significance { Separated, Overlapping };
const char* significance_name(Significance s);

// Separated iff the two confidence intervals do not intersect.
Significance significance_by_overlap(const BootstrapSummary& a, const BootstrapSummary& b);

// Builds a summary from a reported "mean +/- half-width" pair, for comparing
// externally published intervals.
BootstrapSummary summary_from_half_width(const std::string& metric_name, double mean,
                                         double half_width);

} // namespace aerobench
