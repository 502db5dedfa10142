#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "pufslot/hardware.hpp"

namespace pufslot::sim {

// Full network/implant configuration. The slot word is
// [1][signature][zeros]: 1 + seed_bits + pad_zero_bits must equal
// timer_bits. Validation reports every violated invariant by name.
struct SimConfig {
    int num_nodes = 3;
    hardware::RoSpec ro1_spec{10e3, 0.02};
    hardware::RoSpec ro2_spec{20e3, 0.02};
    int prbs_order = 9;
    int timer_bits = 22;
    int seed_bits = 9;
    int pad_zero_bits = 12;
    double comm_duration_s = 0.1;
    double idle_duration_s = 0.1;
    double stim_duration_s = 0.1;
    double cycle_period_s = 100.0;
    double sim_duration_s = 500.0;
    std::uint64_t rng_seed = 1;
    // Re-derives each seed by walking RO2 edges against RO1 cycles instead of
    // the closed-form ratio; O(counted edges), for small-duration validation.
    bool tick_accurate = false;
};

void validate(const SimConfig& cfg);

enum class FsmState { AwaitSync, Counting, Queried, Communicating, Idle, Stimulating, CycleWait };

struct ImplantNode {
    int id = 0;
    hardware::DieSample die;
    std::uint32_t seed = 0;
    std::uint32_t signature = 0;
    std::uint64_t cs_value = 0;
    FsmState fsm_state = FsmState::AwaitSync;
};

enum class EventKind { Sync, Query, CommStart, CommEnd, StimStart, StimEnd, CycleRestart };

const char* to_string(EventKind kind);
EventKind event_kind_from_string(const std::string& name);
const char* to_string(FsmState state);

// One timeline entry, time in seconds since the sync that opened the run.
struct TimelineEvent {
    int node_id = 0;
    EventKind kind = EventKind::Sync;
    double time_s = 0.0;
};

struct CollisionReport {
    // Node-id groups sharing one cs_value (the discrete, Eq-style collision).
    std::vector<std::vector<int>> signature_collisions;
    // Physical overlap of two communication windows, including near-misses
    // caused by differing RO1 frequencies.
    struct Overlap {
        int node_a = 0;
        int node_b = 0;
        double start_s = 0.0;
        double end_s = 0.0;
    };
    std::vector<Overlap> window_overlaps;
    bool any_collision = false;
};

struct Network {
    std::vector<ImplantNode> nodes;
    double sync_time_s = 0.0;
};

struct SimResult {
    std::vector<TimelineEvent> timeline;
    CollisionReport report;
};

// Slot word: leading one at bit timer_bits-1, signature shifted above
// pad_zero_bits trailing zeros.
std::uint64_t communication_slot(std::uint32_t signature, const SimConfig& cfg);

// Instant (seconds after sync) at which the node's RO1-driven counter
// reaches its CS value.
double node_start_time(const ImplantNode& node);

// Instant of the mid-range counter query that latches the seed.
double node_query_time(const ImplantNode& node, const SimConfig& cfg);

// Samples num_nodes dies and derives seed, signature and slot word for each.
// Fully determined by cfg.rng_seed; node i draws from stream i.
Network build_network(const SimConfig& cfg);

// Resets every FSM to Counting and restarts all counters; event times are
// relative to the new sync instant. Dies are time-invariant, so re-derived
// seeds and signatures are unchanged.
Network broadcast_sync(Network network, double time_s);

// FSM state of a synced node at t seconds after its last sync. A sync
// delivered at t would abort whatever phase is active here and return the
// node to Counting.
FsmState node_state_at(const ImplantNode& node, const SimConfig& cfg, double t_since_sync_s);

// Sync at t = 0, then per node: Query at 2^(timer_bits-1)/f1, CommStart when
// the counter hits CS, then Comm -> Idle -> Stim, the whole cycle repeating
// every cycle_period anchored at CommStart. Events are emitted through
// sim_duration; overlap detection covers communication windows only.
SimResult run_simulation(const SimConfig& cfg);

// --- stable export formats (one event per line / one JSON document) ---

std::string timeline_to_jsonl(const std::vector<TimelineEvent>& timeline);
std::string timeline_to_csv(const std::vector<TimelineEvent>& timeline);
std::vector<TimelineEvent> timeline_from_jsonl(const std::string& text);
std::vector<TimelineEvent> timeline_from_csv(const std::string& text);
std::string report_to_json(const CollisionReport& report);
CollisionReport report_from_json(const std::string& text);

// Flat key=value config file (# comments, blank lines ignored). Unknown keys
// and malformed values are errors.
std::map<std::string, std::string> parse_config_file(const std::string& path);
void apply_config_entries(const std::map<std::string, std::string>& entries, SimConfig& cfg);

} // namespace pufslot::sim
