#pragma once

#include <cstdint>
#include <vector>

namespace pufslot::prbs {

inline constexpr int kMinRegistryOrder = 5;
inline constexpr int kMaxRegistryOrder = 17;

// Feedback polynomial x^order + sum(x^t for interior taps t) + 1 of a
// Fibonacci (external-XOR) LFSR. `taps` lists exponents in [1, order] and
// always contains `order`; the constant term 1 is implicit.
struct FeedbackPolynomial {
    int order;
    std::vector<int> taps; // sorted descending, first element == order

    FeedbackPolynomial(int order, std::vector<int> taps);

    std::uint32_t state_mask() const {
        return order >= 32 ? 0xFFFFFFFFu : ((1u << order) - 1u);
    }

    // Register convention, fixed project-wide (all sequences, signatures and
    // the seed-sweep data depend on it):
    //   - state bit j holds the stage that leaves the register after j more
    //     shifts: bit 0 is the oldest stage (x^1), bit order-1 the newest
    //     (x^order)
    //   - a step emits bit 0, shifts every stage one place down, and inserts
    //     the feedback bit at bit order-1
    //   - feedback = parity(state & feedback_mask()), where the mask selects
    //     bit 0 (the constant term) plus bit t for every interior tap t;
    //     this realizes the recurrence s[k+order] = s[k] ^ sum_t s[k+t]
    std::uint32_t feedback_mask() const;
};

struct StepResult {
    std::uint32_t state;
    int output_bit;
};

constexpr bool is_degenerate(std::uint32_t state) { return state == 0; }

// Maximal-length polynomial for PRBS orders 5..17. Throws std::out_of_range
// for unsupported orders.
FeedbackPolynomial registry_polynomial(int order);

// One Fibonacci shift. The all-zero state maps to itself with output 0.
StepResult lfsr_step(std::uint32_t state, const FeedbackPolynomial& poly);

// Loads `seed` (0 is remapped to all-ones so no die ever locks up), advances
// `order` shifts and returns the register contents. Bijective on nonzero
// seeds.
std::uint32_t signature_from_seed(std::uint32_t seed, const FeedbackPolynomial& poly);

// Cycle length of the orbit containing state 1. 2^order - 1 exactly when the
// polynomial is maximal-length. Exhaustive, so restricted to order <= 17.
std::uint64_t period(const FeedbackPolynomial& poly);

} // namespace pufslot::prbs
