// gum.hpp — measurement-uncertainty display rounding.
//
// Uncertainties are rounded to two significant digits and central values to
// the matching decimal place. Column mode standardizes the place across a
// table column using the column's largest uncertainty.
#pragma once

#include <string>
#include <utility>
#include <vector>

namespace aerobench {

struct GumDisplay {
    std::string mean;
    std::string uncertainty; // empty when the uncertainty is zero

    // "mean ± uncertainty", or just the mean when there is no uncertainty.
    std::string combined() const;
};

// Zero uncertainty falls back to printing the mean at `zero_unc_precision`
// decimals.
GumDisplay gum_round(double mean, double uncertainty, int zero_unc_precision = 3);

// Rounds every pair to the decimal place implied by the column's largest
// uncertainty after its own two-significant-digit rounding.
std::vector<GumDisplay> gum_round_column(const std::vector<std::pair<double, double>>& column,
                                         int zero_unc_precision = 3);

} // namespace aerobench
