#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

namespace pufslot::hardware {

// Ring oscillator population: per-die frequency is Gaussian with mean
// nominal_freq_hz and standard deviation sigma_fraction * nominal_freq_hz,
// time-invariant for a given die (supply and temperature assumed regulated).
struct RoSpec {
    double nominal_freq_hz = 10e3;
    double sigma_fraction = 0.02;
};

// One manufactured instance: f1 drives the timer, f2 clocks the randomizer.
struct DieSample {
    double f1_hz = 0.0;
    double f2_hz = 0.0;
};

// Baseline M-oscillator PUF: two muxes select a pair of ROs, two counters
// run for count_window_s, one response bit per comparison.
struct RoPufConfig {
    int num_ros = 9;
    double count_window_s = 1.0;
    int challenge_bits() const; // mux select width, ceil(log2(num_ros))
};

// Area/power of a PRBS architecture relative to order 5 (linear in the
// flip-flop count).
struct CostEstimate {
    double area_scale = 1.0;
    double power_scale = 1.0;
};

void validate(const RoSpec& spec);

// Draws one die. Frequencies are truncated-to-positive Gaussians, fully
// determined by rng_seed.
DieSample sample_die(const RoSpec& ro1_spec, const RoSpec& ro2_spec, std::uint64_t rng_seed);

// `count` independent per-die frequencies from one population (for the
// baseline M-RO PUF).
std::vector<double> sample_ro_frequencies(const RoSpec& spec, int count, std::uint64_t rng_seed);

// Free-running RO2 counter value captured after ref_cycles of RO1:
// floor(ref_cycles * f2/f1) mod 2^seed_bits. Only the frequency ratio
// enters. The chip configuration is ref_cycles = 2^21, seed_bits = 9.
std::uint32_t extract_seed(const DieSample& die, std::uint64_t ref_cycles, int seed_bits);

// One response bit per challenge (i, j): 1 iff counter i read a strictly
// higher value than counter j over the window; ties resolve to 0.
std::string traditional_ropuf_response(const std::vector<double>& frequencies_hz,
                                       const std::vector<std::pair<int, int>>& challenges,
                                       double count_window_s);

// All C(M,2) index pairs (i < j), the "extended output" challenge set.
std::vector<std::pair<int, int>> all_pair_challenges(int num_ros);

// Relative cost of a PRBS architecture, normalized so order 5 = 1.0.
CostEstimate estimate_cost(int order);

} // namespace pufslot::hardware
