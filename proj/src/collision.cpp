#include "pufslot/collision.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

#include "pufslot/rng.hpp"

namespace pufslot::collision {

namespace {

void validate_query(const CollisionQuery& q) {
    if (q.order < 1) throw std::out_of_range("order must be >= 1");
    if (q.nodes < 0) throw std::out_of_range("nodes must be >= 0");
}

} // namespace

CollisionEstimate collision_probability_exact(const CollisionQuery& q) {
    validate_query(q);
    if (q.nodes <= 1) return {0.0, Method::Exact, 0, 0.0};
    if (q.order <= 62 && q.nodes > (std::int64_t{1} << q.order))
        return {1.0, Method::Exact, 0, 0.0};
    const double slots = std::ldexp(1.0, q.order);
    double prod = 1.0;
    for (std::int64_t k = 1; k < q.nodes && prod > 0.0; ++k)
        prod *= 1.0 - static_cast<double>(k) / slots;
    return {1.0 - prod, Method::Exact, 0, 0.0};
}

boost::multiprecision::cpp_rational collision_probability_rational(const CollisionQuery& q) {
    namespace mp = boost::multiprecision;
    validate_query(q);
    if (q.order > 8)
        throw std::out_of_range("rational evaluation is bounded to order <= 8, got " +
                                std::to_string(q.order));
    const std::int64_t slots = std::int64_t{1} << q.order;
    if (q.nodes > slots) return 1;
    if (q.nodes <= 1) return 0;
    mp::cpp_int num = 1;
    mp::cpp_int den = 1;
    for (std::int64_t k = 1; k < q.nodes; ++k) {
        num *= slots - k;
        den *= slots;
    }
    return 1 - mp::cpp_rational(num, den);
}

CollisionEstimate rational_oracle_estimate(const CollisionQuery& q) {
    const auto r = collision_probability_rational(q);
    return {r.convert_to<double>(), Method::RationalOracle, 0, 0.0};
}

std::int64_t nodes_supported(int order) {
    if (order < 1) throw std::out_of_range("order must be >= 1");
    std::int64_t n = 1;
    while (collision_probability_exact({order, n + 1}).probability < 0.5) ++n;
    return n;
}

CollisionEstimate monte_carlo_collision(const CollisionQuery& q, std::int64_t trials,
                                        std::uint64_t rng_seed) {
    validate_query(q);
    if (trials < 1) throw std::out_of_range("trials must be >= 1");
    if (q.order > 63) throw std::out_of_range("Monte Carlo sampling supports order <= 63");
    auto eng = rng::make_engine(rng::derive_stream_seed(rng_seed, 0));
    std::vector<std::uint64_t> draws(static_cast<std::size_t>(q.nodes));
    std::int64_t hits = 0;
    for (std::int64_t t = 0; t < trials; ++t) {
        for (auto& d : draws) d = rng::uniform_bits(eng, q.order);
        std::sort(draws.begin(), draws.end());
        if (std::adjacent_find(draws.begin(), draws.end()) != draws.end()) ++hits;
    }
    const double p = static_cast<double>(hits) / static_cast<double>(trials);
    const double se = std::sqrt(p * (1.0 - p) / static_cast<double>(trials));
    return {p, Method::MonteCarlo, trials, se};
}

} // namespace pufslot::collision
