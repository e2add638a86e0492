#include "aerobench/gum.hpp"

#include <cmath>
#include <cstdio>

namespace aerobench {

namespace {

// Decimal exponent of |v|: largest e with 10^e <= |v|, corrected against
// log10 edge cases near powers of ten.
int decimal_exponent(double v) {
    const double a = std::abs(v);
    int e = static_cast<int>(std::floor(std::log10(a)));
    if (std::pow(10.0, e) > a) --e;
    if (std::pow(10.0, e + 1) <= a) ++e;
    return e;
}

double round_to_two_sig_digits(double u) {
    const int e = decimal_exponent(u);
    const double scale = std::pow(10.0, e - 1);
    return std::round(u / scale) * scale;
}

// Decimal place index: number of digits after the decimal point (negative
// means rounding left of the point, e.g. -1 rounds to tens).
int place_from_uncertainty(double u_rounded) {
    return 1 - decimal_exponent(u_rounded);
}

std::string format_at_place(double v, int place) {
    char buf[64];
    if (place >= 0) {
        std::snprintf(buf, sizeof(buf), "%.*f", place, v);
    } else {
        const double scale = std::pow(10.0, -place);
        const double rounded = std::round(v / scale) * scale;
        std::snprintf(buf, sizeof(buf), "%.0f", rounded);
    }
    std::string s(buf);
    // Never display a signed zero.
    bool all_zero = true;
    for (char c : s)
        if (c != '-' && c != '0' && c != '.') all_zero = false;
    if (all_zero && !s.empty() && s[0] == '-') s.erase(0, 1);
    return s;
}

} // namespace

std::string GumDisplay::combined() const {
    if (uncertainty.empty()) return mean;
    return mean + " \xC2\xB1 " + uncertainty;
}

GumDisplay gum_round(double mean, double uncertainty, int zero_unc_precision) {
    GumDisplay out;
    if (uncertainty <= 0.0) {
        out.mean = format_at_place(mean, zero_unc_precision);
        return out;
    }
    const double u_rounded = round_to_two_sig_digits(uncertainty);
    const int place = place_from_uncertainty(u_rounded);
    out.mean = format_at_place(mean, place);
    out.uncertainty = format_at_place(u_rounded, place);
    return out;
}

std::vector<GumDisplay> gum_round_column(const std::vector<std::pair<double, double>>& column,
                                         int zero_unc_precision) {
    double max_unc = 0.0;
    for (const auto& [mean, unc] : column) max_unc = std::max(max_unc, unc);
    std::vector<GumDisplay> out;
    out.reserve(column.size());
    if (max_unc <= 0.0) {
        for (const auto& [mean, unc] : column)
            out.push_back(gum_round(mean, 0.0, zero_unc_precision));
        return out;
    }
    const int place = place_from_uncertainty(round_to_two_sig_digits(max_unc));
    for (const auto& [mean, unc] : column) {
        GumDisplay d;
        d.mean = format_at_place(mean, place);
        if (unc > 0.0) d.uncertainty = format_at_place(round_to_two_sig_digits(unc), place);
        out.push_back(std::move(d));
    }
    return out;
}

} // namespace aerobench
