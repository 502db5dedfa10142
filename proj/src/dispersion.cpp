#include "pufslot/dispersion.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "pufslot/hardware.hpp"

namespace pufslot::dispersion {

SeedSweep sweep_outputs(const prbs::FeedbackPolynomial& poly) {
    if (poly.order > prbs::kMaxRegistryOrder)
        throw std::out_of_range("seed sweep supports order <= 17");
    const std::size_t n = std::size_t{1} << poly.order;
    SeedSweep sweep{poly.order, std::vector<std::uint32_t>(n)};
    for (std::size_t s = 0; s < n; ++s)
        sweep.outputs[s] = prbs::signature_from_seed(static_cast<std::uint32_t>(s), poly);
    return sweep;
}

WindowStats windowed_std(const SeedSweep& sweep, int window_size) {
    const std::size_t n = sweep.outputs.size();
    if (n != (std::size_t{1} << sweep.order))
        throw std::invalid_argument("sweep must cover every seed of its order exactly once");
    if (window_size < 1 || static_cast<std::size_t>(window_size) > n)
        throw std::out_of_range("window_size must be in [1, 2^order], got " +
                                std::to_string(window_size));

    // Outputs are < 2^17, so sliding sums of x and x^2 stay exact in 64 bits
    // and the variance numerator w*sum(x^2) - sum(x)^2 is exact in 128.
    const auto w = static_cast<std::uint64_t>(window_size);
    WindowStats stats;
    stats.window_size = window_size;
    stats.per_window_std.reserve(n - w + 1);

    std::uint64_t sum = 0;
    std::uint64_t sum_sq = 0;
    for (std::size_t i = 0; i < w; ++i) {
        const std::uint64_t x = sweep.outputs[i];
        sum += x;
        sum_sq += x * x;
    }
    for (std::size_t lead = w;; ++lead) {
        const auto numerator = static_cast<unsigned __int128>(sum_sq) * w -
                               static_cast<unsigned __int128>(sum) * sum;
        stats.per_window_std.push_back(
            std::sqrt(static_cast<double>(numerator)) / static_cast<double>(w));
        if (lead >= n) break;
        const std::uint64_t in = sweep.outputs[lead];
        const std::uint64_t out = sweep.outputs[lead - w];
        sum += in - out;
        sum_sq += in * in - out * out;
    }
    stats.min_std = *std::min_element(stats.per_window_std.begin(), stats.per_window_std.end());
    return stats;
}

namespace {

double full_scale(int order) {
    return static_cast<double>((std::uint64_t{1} << order) - 1);
}

} // namespace

double consecutive_seed_std(const prbs::FeedbackPolynomial& poly, int window_size) {
    return windowed_std(sweep_outputs(poly), window_size).min_std / full_scale(poly.order);
}

std::vector<OrderComparisonRow> compare_orders(const std::vector<int>& orders, int window_size) {
    std::vector<OrderComparisonRow> rows;
    rows.reserve(orders.size());
    for (int order : orders) {
        const auto poly = prbs::registry_polynomial(order);
        const double min_std =
            windowed_std(sweep_outputs(poly), window_size).min_std / full_scale(order);
        const auto cost = hardware::estimate_cost(order);
        rows.push_back({order, window_size, min_std, cost.area_scale, cost.power_scale});
    }
    return rows;
}

} // namespace pufslot::dispersion
