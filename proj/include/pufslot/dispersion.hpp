#pragma once

#include <cstdint>
#include <vector>

#include "pufslot/prbs.hpp"

namespace pufslot::dispersion {

// Default moving-window width over consecutive seed values. Small enough to
// model a tight manufacturing-variation neighborhood, large enough for a
// meaningful standard deviation.
inline constexpr int kDefaultWindow = 16;

// Measured consecutive-seed output standard deviation reported for the
// reference PRBS9 hardware. Printed next to the model's value for
// comparison; the two use different (unpublished) output conventions, so
// they are never asserted equal.
inline constexpr double kPrbs9ReferenceConsecutiveStd = 91.38;

// outputs[s] = signature_from_seed(s) for every seed 0 .. 2^order - 1.
struct SeedSweep {
    int order = 0;
    std::vector<std::uint32_t> outputs;
};

// Population standard deviation of each length-window_size run of
// consecutive seeds (divisor = window_size, not window_size - 1).
struct WindowStats {
    int window_size = 0;
    std::vector<double> per_window_std;
    double min_std = 0.0;
};

SeedSweep sweep_outputs(const prbs::FeedbackPolynomial& poly);

WindowStats windowed_std(const SeedSweep& sweep, int window_size);

// Summary dispersion statistic for one architecture: the minimum moving-
// window standard deviation over the full seed range, normalized to the
// 2^order - 1 full scale. Raw window stds grow with the register width, so
// only the normalized value is comparable across orders.
double consecutive_seed_std(const prbs::FeedbackPolynomial& poly, int window_size = kDefaultWindow);

struct OrderComparisonRow {
    int order = 0;
    int window_size = 0;
    double min_std = 0.0; // normalized to full scale, see consecutive_seed_std
    double area_scale = 0.0;
    double power_scale = 0.0;
};

// One row per order: dispersion joined with the relative cost model.
std::vector<OrderComparisonRow> compare_orders(const std::vector<int>& orders, int window_size);

} // namespace pufslot::dispersion
