#include "pufslot/hardware.hpp"

#include <bit>
#include <cmath>
#include <stdexcept>
#include <string>

#include "pufslot/prbs.hpp"
#include "pufslot/rng.hpp"

namespace pufslot::hardware {

int RoPufConfig::challenge_bits() const {
    if (num_ros < 2) throw std::out_of_range("num_ros must be >= 2");
    return std::bit_width(static_cast<unsigned>(num_ros - 1));
}

void validate(const RoSpec& spec) {
    if (!(spec.nominal_freq_hz > 0.0))
        throw std::invalid_argument("RO nominal_freq must be > 0");
    if (!(spec.sigma_fraction >= 0.0 && spec.sigma_fraction < 0.5))
        throw std::invalid_argument("RO sigma_fraction must be in [0, 0.5)");
}

namespace {

double draw_positive_freq(const RoSpec& spec, std::mt19937_64& eng) {
    double f;
    do {
        f = spec.nominal_freq_hz * (1.0 + spec.sigma_fraction * rng::normal_sample(eng));
    } while (!(f > 0.0));
    return f;
}

} // namespace

DieSample sample_die(const RoSpec& ro1_spec, const RoSpec& ro2_spec, std::uint64_t rng_seed) {
    validate(ro1_spec);
    validate(ro2_spec);
    auto eng = rng::make_engine(rng::derive_stream_seed(rng_seed, 0));
    const double f1 = draw_positive_freq(ro1_spec, eng);
    const double f2 = draw_positive_freq(ro2_spec, eng);
    return {f1, f2};
}

std::vector<double> sample_ro_frequencies(const RoSpec& spec, int count, std::uint64_t rng_seed) {
    validate(spec);
    if (count < 1) throw std::out_of_range("count must be >= 1");
    auto eng = rng::make_engine(rng::derive_stream_seed(rng_seed, 0));
    std::vector<double> freqs(static_cast<std::size_t>(count));
    for (auto& f : freqs) f = draw_positive_freq(spec, eng);
    return freqs;
}

std::uint32_t extract_seed(const DieSample& die, std::uint64_t ref_cycles, int seed_bits) {
    if (!(die.f1_hz > 0.0 && die.f2_hz > 0.0))
        throw std::invalid_argument("die frequencies must be > 0");
    if (ref_cycles < 1) throw std::out_of_range("ref_cycles must be >= 1");
    if (seed_bits < 1 || seed_bits > 32) throw std::out_of_range("seed_bits must be in [1, 32]");
    // long double keeps counts up to ~2^63 exact, so the floor is reliable at
    // chip-scale cycle counts.
    const long double count =
        static_cast<long double>(ref_cycles) * (static_cast<long double>(die.f2_hz) / die.f1_hz);
    const auto whole = static_cast<std::uint64_t>(std::floor(count));
    const std::uint64_t mask = (seed_bits >= 64) ? ~0ull : ((1ull << seed_bits) - 1ull);
    return static_cast<std::uint32_t>(whole & mask);
}

std::string traditional_ropuf_response(const std::vector<double>& frequencies_hz,
                                       const std::vector<std::pair<int, int>>& challenges,
                                       double count_window_s) {
    if (!(count_window_s > 0.0)) throw std::invalid_argument("count_window must be > 0");
    const int n = static_cast<int>(frequencies_hz.size());
    std::string bits;
    bits.reserve(challenges.size());
    for (const auto& [i, j] : challenges) {
        if (i < 0 || i >= n || j < 0 || j >= n)
            throw std::out_of_range("challenge index out of range");
        if (i == j) throw std::invalid_argument("challenge must select two distinct oscillators");
        const double ci = std::floor(frequencies_hz[static_cast<std::size_t>(i)] * count_window_s);
        const double cj = std::floor(frequencies_hz[static_cast<std::size_t>(j)] * count_window_s);
        bits.push_back(ci > cj ? '1' : '0');
    }
    return bits;
}

std::vector<std::pair<int, int>> all_pair_challenges(int num_ros) {
    if (num_ros < 2) throw std::out_of_range("num_ros must be >= 2");
    std::vector<std::pair<int, int>> pairs;
    pairs.reserve(static_cast<std::size_t>(num_ros) * (num_ros - 1) / 2);
    for (int i = 0; i < num_ros; ++i)
        for (int j = i + 1; j < num_ros; ++j) pairs.emplace_back(i, j);
    return pairs;
}

CostEstimate estimate_cost(int order) {
    if (order < prbs::kMinRegistryOrder || order > prbs::kMaxRegistryOrder)
        throw std::out_of_range("cost model covers orders 5..17, got " + std::to_string(order));
    const double scale = static_cast<double>(order) / 5.0;
    return {scale, scale};
}

} // namespace pufslot::hardware
