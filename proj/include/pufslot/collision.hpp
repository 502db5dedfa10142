#pragma once

#include <cstdint>

#include <boost/multiprecision/cpp_int.hpp>

namespace pufslot::collision {

// (order, nodes) = (N, n): n devices each drawing one of 2^N signatures.
struct CollisionQuery {
    int order = 9;
    std::int64_t nodes = 0;
};

enum class Method { Exact, RationalOracle, MonteCarlo };

struct CollisionEstimate {
    double probability = 0.0;
    Method method = Method::Exact;
    std::int64_t trials = 0;  // Monte Carlo only
    double std_error = 0.0;   // Monte Carlo only
};

// P(at least two of n uniform N-bit values coincide), evaluated as the
// incremental product 1 - prod_{k=1}^{n-1} (1 - k/2^N). Algebraically equal
// to the factorial form 1 - (2^N)! / (2^{nN} (2^N - n)!) but stable in
// floating point. Returns exactly 1 for n > 2^N (pigeonhole; the factorial
// form is undefined there).
CollisionEstimate collision_probability_exact(const CollisionQuery& q);

// Same quantity as an exact rational, arbitrary-precision arithmetic.
// Restricted to order <= 8 (cost bound); n > 2^N returns exactly 1.
boost::multiprecision::cpp_rational collision_probability_rational(const CollisionQuery& q);

// collision_probability_rational converted to double, for side-by-side
// comparison with the floating-point path.
CollisionEstimate rational_oracle_estimate(const CollisionQuery& q);

// Largest n with collision probability < 0.5. Monotone nondecreasing in
// order.
std::int64_t nodes_supported(int order);

// Empirical collision fraction over `trials` independent draws of n values,
// with binomial standard error. Deterministic for a fixed rng_seed; the
// engine for partition j of a parallel run is derived as
// rng::derive_stream_seed(rng_seed, j) (a single partition is used here).
CollisionEstimate monte_carlo_collision(const CollisionQuery& q, std::int64_t trials,
                                        std::uint64_t rng_seed);

} // namespace pufslot::collision
