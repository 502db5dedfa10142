#include "pufslot/prbs.hpp"

#include <algorithm>
#include <bit>
#include <stdexcept>
#include <string>

namespace pufslot::prbs {

FeedbackPolynomial::FeedbackPolynomial(int order_, std::vector<int> taps_)
    : order(order_), taps(std::move(taps_)) {
    if (order < 1 || order > 32)
        throw std::out_of_range("polynomial order must be in [1, 32], got " + std::to_string(order));
    std::sort(taps.begin(), taps.end(), std::greater<int>());
    taps.erase(std::unique(taps.begin(), taps.end()), taps.end());
    if (taps.empty() || taps.front() != order)
        throw std::invalid_argument("tap set must contain the leading exponent x^order");
    if (taps.back() < 1)
        throw std::invalid_argument("tap exponents must be in [1, order]");
}

std::uint32_t FeedbackPolynomial::feedback_mask() const {
    std::uint32_t mask = 1u; // constant term: the bit leaving the register
    for (int t : taps)
        if (t != order) mask |= (1u << t);
    return mask;
}

FeedbackPolynomial registry_polynomial(int order) {
    // Two- and four-tap maximal-length sets from the standard LFSR tap table
    // (Xilinx XAPP052). Orders 9 and 17 are x^9+x^5+1 and x^17+x^14+1.
    // Maximality of every entry is enforced by exhaustive period tests.
    switch (order) {
        case 5:  return {5, {5, 3}};
        case 6:  return {6, {6, 5}};
        case 7:  return {7, {7, 6}};
        case 8:  return {8, {8, 6, 5, 4}};
        case 9:  return {9, {9, 5}};
        case 10: return {10, {10, 7}};
        case 11: return {11, {11, 9}};
        case 12: return {12, {12, 6, 4, 1}};
        case 13: return {13, {13, 4, 3, 1}};
        case 14: return {14, {14, 5, 3, 1}};
        case 15: return {15, {15, 14}};
        case 16: return {16, {16, 15, 13, 4}};
        case 17: return {17, {17, 14}};
        default:
            throw std::out_of_range("unsupported PRBS order " + std::to_string(order) +
                                    " (registry covers 5..17)");
    }
}

StepResult lfsr_step(std::uint32_t state, const FeedbackPolynomial& poly) {
    if (state > poly.state_mask())
        throw std::invalid_argument("LFSR state does not fit in " + std::to_string(poly.order) + " bits");
    const int out = static_cast<int>(state & 1u);
    const std::uint32_t fb = static_cast<std::uint32_t>(std::popcount(state & poly.feedback_mask()) & 1);
    return {(state >> 1) | (fb << (poly.order - 1)), out};
}

std::uint32_t signature_from_seed(std::uint32_t seed, const FeedbackPolynomial& poly) {
    if (seed > poly.state_mask())
        throw std::invalid_argument("seed does not fit in " + std::to_string(poly.order) + " bits");
    std::uint32_t s = (seed == 0) ? poly.state_mask() : seed;
    for (int i = 0; i < poly.order; ++i) s = lfsr_step(s, poly).state;
    return s;
}

std::uint64_t period(const FeedbackPolynomial& poly) {
    if (poly.order > kMaxRegistryOrder)
        throw std::out_of_range("period enumeration supports order <= 17");
    // The constant term is always present, so stepping is invertible and the
    // orbit of state 1 is a closed cycle.
    const std::uint32_t start = 1u;
    std::uint32_t s = start;
    std::uint64_t n = 0;
    do {
        s = lfsr_step(s, poly).state;
        ++n;
    } while (s != start);
    return n;
}

} // namespace pufslot::prbs
