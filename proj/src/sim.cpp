#include "pufslot/sim.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

#include "pufslot/prbs.hpp"
#include "pufslot/rng.hpp"
#include "pufslot/textio.hpp"

namespace pufslot::sim {

using text::fmt_double;

namespace {

void require(std::vector<std::string>& violations, bool ok, const char* invariant) {
    if (!ok) violations.emplace_back(invariant);
}

} // namespace

void validate(const SimConfig& cfg) {
    std::vector<std::string> violations;
    require(violations, cfg.num_nodes >= 1, "num_nodes >= 1");
    require(violations, cfg.ro1_spec.nominal_freq_hz > 0.0, "ro1 nominal_freq > 0");
    require(violations, cfg.ro2_spec.nominal_freq_hz > 0.0, "ro2 nominal_freq > 0");
    require(violations,
            cfg.ro1_spec.sigma_fraction >= 0.0 && cfg.ro1_spec.sigma_fraction < 0.5,
            "ro1 sigma_fraction in [0, 0.5)");
    require(violations,
            cfg.ro2_spec.sigma_fraction >= 0.0 && cfg.ro2_spec.sigma_fraction < 0.5,
            "ro2 sigma_fraction in [0, 0.5)");
    require(violations,
            cfg.prbs_order >= prbs::kMinRegistryOrder && cfg.prbs_order <= prbs::kMaxRegistryOrder,
            "prbs_order in [5, 17]");
    require(violations, cfg.timer_bits >= 2 && cfg.timer_bits <= 63, "timer_bits in [2, 63]");
    require(violations, cfg.seed_bits >= 1 && cfg.seed_bits <= 32, "seed_bits in [1, 32]");
    require(violations, cfg.pad_zero_bits >= 0, "pad_zero_bits >= 0");
    require(violations, 1 + cfg.seed_bits + cfg.pad_zero_bits == cfg.timer_bits,
            "1 + seed_bits + pad_zero_bits = timer_bits");
    require(violations, cfg.seed_bits == cfg.prbs_order, "seed_bits = prbs_order");
    require(violations, cfg.comm_duration_s > 0.0, "comm_duration > 0");
    require(violations, cfg.idle_duration_s > 0.0, "idle_duration > 0");
    require(violations, cfg.stim_duration_s > 0.0, "stim_duration > 0");
    require(violations, cfg.cycle_period_s > 0.0, "cycle_period > 0");
    require(violations, cfg.sim_duration_s > 0.0, "sim_duration > 0");
    require(violations,
            cfg.comm_duration_s + cfg.idle_duration_s + cfg.stim_duration_s <= cfg.cycle_period_s,
            "comm_duration + idle_duration + stim_duration <= cycle_period");
    if (!violations.empty()) {
        std::string msg = "invalid simulation config, violated: ";
        for (std::size_t i = 0; i < violations.size(); ++i) {
            if (i) msg += "; ";
            msg += violations[i];
        }
        throw std::invalid_argument(msg);
    }
}

std::uint64_t communication_slot(std::uint32_t signature, const SimConfig& cfg) {
    if (cfg.seed_bits < 32 && (signature >> cfg.seed_bits) != 0)
        throw std::out_of_range("signature does not fit in seed_bits");
    return (std::uint64_t{1} << (cfg.timer_bits - 1)) |
           (static_cast<std::uint64_t>(signature) << cfg.pad_zero_bits);
}

double node_start_time(const ImplantNode& node) {
    return static_cast<double>(node.cs_value) / node.die.f1_hz;
}

double node_query_time(const ImplantNode& node, const SimConfig& cfg) {
    return static_cast<double>(std::uint64_t{1} << (cfg.timer_bits - 1)) / node.die.f1_hz;
}

namespace {

// Validation-mode seed derivation: walk RO2 rising edges against the query
// instant instead of evaluating the ratio in closed form. Both oscillators
// restart in phase at sync.
std::uint32_t tick_walk_seed(const hardware::DieSample& die, std::uint64_t ref_cycles,
                             int seed_bits) {
    const long double t_query = static_cast<long double>(ref_cycles) / die.f1_hz;
    std::uint64_t edges = 0;
    while (static_cast<long double>(edges + 1) / die.f2_hz <= t_query) ++edges;
    const std::uint64_t mask = (1ull << seed_bits) - 1ull;
    return static_cast<std::uint32_t>(edges & mask);
}

} // namespace

Network build_network(const SimConfig& cfg) {
    validate(cfg);
    const auto poly = prbs::registry_polynomial(cfg.prbs_order);
    const std::uint64_t query_cycles = std::uint64_t{1} << (cfg.timer_bits - 1);
    Network net;
    net.nodes.reserve(static_cast<std::size_t>(cfg.num_nodes));
    for (int i = 0; i < cfg.num_nodes; ++i) {
        ImplantNode node;
        node.id = i;
        node.die = hardware::sample_die(cfg.ro1_spec, cfg.ro2_spec,
                                        rng::derive_stream_seed(cfg.rng_seed, static_cast<std::uint64_t>(i)));
        node.seed = cfg.tick_accurate
                        ? tick_walk_seed(node.die, query_cycles, cfg.seed_bits)
                        : hardware::extract_seed(node.die, query_cycles, cfg.seed_bits);
        node.signature = prbs::signature_from_seed(node.seed, poly);
        node.cs_value = communication_slot(node.signature, cfg);
        node.fsm_state = FsmState::AwaitSync;
        net.nodes.push_back(node);
    }
    return net;
}

Network broadcast_sync(Network network, double time_s) {
    network.sync_time_s = time_s;
    for (auto& node : network.nodes) node.fsm_state = FsmState::Counting;
    return network;
}

FsmState node_state_at(const ImplantNode& node, const SimConfig& cfg, double t_since_sync_s) {
    if (node.fsm_state == FsmState::AwaitSync || t_since_sync_s < 0.0) return FsmState::AwaitSync;
    const double t_query = node_query_time(node, cfg);
    const double t_start = node_start_time(node);
    if (t_since_sync_s < t_query) return FsmState::Counting;
    if (t_since_sync_s < t_start) return FsmState::Queried;
    const double phase = std::fmod(t_since_sync_s - t_start, cfg.cycle_period_s);
    if (phase < cfg.comm_duration_s) return FsmState::Communicating;
    if (phase < cfg.comm_duration_s + cfg.idle_duration_s) return FsmState::Idle;
    if (phase < cfg.comm_duration_s + cfg.idle_duration_s + cfg.stim_duration_s)
        return FsmState::Stimulating;
    return FsmState::CycleWait;
}

SimResult run_simulation(const SimConfig& cfg) {
    auto net = broadcast_sync(build_network(cfg), 0.0);

    SimResult result;
    struct CommWindow {
        double start;
        double end;
        int node;
    };
    std::vector<CommWindow> windows;

    for (const auto& node : net.nodes) {
        auto& tl = result.timeline;
        tl.push_back({node.id, EventKind::Sync, 0.0});
        const double t_query = node_query_time(node, cfg);
        if (t_query <= cfg.sim_duration_s) tl.push_back({node.id, EventKind::Query, t_query});
        const double t_start = node_start_time(node);
        for (int k = 0;; ++k) {
            const double base = t_start + k * cfg.cycle_period_s;
            if (base > cfg.sim_duration_s) break;
            if (k > 0) tl.push_back({node.id, EventKind::CycleRestart, base});
            const double comm_end = base + cfg.comm_duration_s;
            const double stim_start = comm_end + cfg.idle_duration_s;
            const double stim_end = stim_start + cfg.stim_duration_s;
            tl.push_back({node.id, EventKind::CommStart, base});
            windows.push_back({base, comm_end, node.id});
            if (comm_end <= cfg.sim_duration_s) tl.push_back({node.id, EventKind::CommEnd, comm_end});
            if (stim_start <= cfg.sim_duration_s)
                tl.push_back({node.id, EventKind::StimStart, stim_start});
            if (stim_end <= cfg.sim_duration_s) tl.push_back({node.id, EventKind::StimEnd, stim_end});
        }
    }
    // Per-node emission order is already chronological (CycleRestart ahead of
    // the coincident CommStart); a stable sort keeps it that way globally.
    std::stable_sort(result.timeline.begin(), result.timeline.end(),
                     [](const TimelineEvent& a, const TimelineEvent& b) {
                         if (a.time_s != b.time_s) return a.time_s < b.time_s;
                         return a.node_id < b.node_id;
                     });

    // Discrete collisions: nodes that selected the very same slot word.
    std::map<std::uint64_t, std::vector<int>> by_slot;
    for (const auto& node : net.nodes) by_slot[node.cs_value].push_back(node.id);
    for (auto& [slot, ids] : by_slot) {
        if (ids.size() >= 2) {
            std::sort(ids.begin(), ids.end());
            result.report.signature_collisions.push_back(ids);
        }
    }

    // Physical overlaps between communication windows of distinct nodes.
    std::sort(windows.begin(), windows.end(), [](const CommWindow& a, const CommWindow& b) {
        if (a.start != b.start) return a.start < b.start;
        return a.node < b.node;
    });
    std::vector<CommWindow> active;
    for (const auto& w : windows) {
        std::erase_if(active, [&](const CommWindow& a) { return a.end <= w.start; });
        for (const auto& a : active) {
            if (a.node == w.node) continue;
            result.report.window_overlaps.push_back({std::min(a.node, w.node),
                                                     std::max(a.node, w.node), w.start,
                                                     std::min(a.end, w.end)});
        }
        active.push_back(w);
    }
    result.report.any_collision =
        !result.report.signature_collisions.empty() || !result.report.window_overlaps.empty();
    return result;
}

const char* to_string(EventKind kind) {
    switch (kind) {
        case EventKind::Sync: return "Sync";
        case EventKind::Query: return "Query";
        case EventKind::CommStart: return "CommStart";
        case EventKind::CommEnd: return "CommEnd";
        case EventKind::StimStart: return "StimStart";
        case EventKind::StimEnd: return "StimEnd";
        case EventKind::CycleRestart: return "CycleRestart";
    }
    return "?";
}

EventKind event_kind_from_string(const std::string& name) {
    for (auto kind : {EventKind::Sync, EventKind::Query, EventKind::CommStart, EventKind::CommEnd,
                      EventKind::StimStart, EventKind::StimEnd, EventKind::CycleRestart})
        if (name == to_string(kind)) return kind;
    throw std::invalid_argument("unknown event kind: " + name);
}

const char* to_string(FsmState state) {
    switch (state) {
        case FsmState::AwaitSync: return "AwaitSync";
        case FsmState::Counting: return "Counting";
        case FsmState::Queried: return "Queried";
        case FsmState::Communicating: return "Communicating";
        case FsmState::Idle: return "Idle";
        case FsmState::Stimulating: return "Stimulating";
        case FsmState::CycleWait: return "CycleWait";
    }
    return "?";
}

std::string timeline_to_jsonl(const std::vector<TimelineEvent>& timeline) {
    std::string out;
    for (const auto& ev : timeline) {
        nlohmann::ordered_json j;
        j["node_id"] = ev.node_id;
        j["kind"] = to_string(ev.kind);
        j["time"] = ev.time_s;
        out += j.dump();
        out += '\n';
    }
    return out;
}

std::vector<TimelineEvent> timeline_from_jsonl(const std::string& text) {
    std::vector<TimelineEvent> timeline;
    std::istringstream in(text);
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        const auto j = nlohmann::json::parse(line);
        timeline.push_back({j.at("node_id").get<int>(),
                            event_kind_from_string(j.at("kind").get<std::string>()),
                            j.at("time").get<double>()});
    }
    return timeline;
}

std::string timeline_to_csv(const std::vector<TimelineEvent>& timeline) {
    std::string out = "node_id,kind,time\n";
    for (const auto& ev : timeline) {
        out += std::to_string(ev.node_id);
        out += ',';
        out += to_string(ev.kind);
        out += ',';
        out += fmt_double(ev.time_s);
        out += '\n';
    }
    return out;
}

std::vector<TimelineEvent> timeline_from_csv(const std::string& text) {
    std::vector<TimelineEvent> timeline;
    std::istringstream in(text);
    std::string line;
    if (!std::getline(in, line) || line != "node_id,kind,time")
        throw std::invalid_argument("timeline CSV must start with header node_id,kind,time");
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        const auto c1 = line.find(',');
        const auto c2 = line.find(',', c1 + 1);
        if (c1 == std::string::npos || c2 == std::string::npos)
            throw std::invalid_argument("malformed timeline CSV row: " + line);
        timeline.push_back({std::stoi(line.substr(0, c1)),
                            event_kind_from_string(line.substr(c1 + 1, c2 - c1 - 1)),
                            std::stod(line.substr(c2 + 1))});
    }
    return timeline;
}

std::string report_to_json(const CollisionReport& report) {
    nlohmann::ordered_json j;
    j["any_collision"] = report.any_collision;
    j["signature_collisions"] = report.signature_collisions;
    auto& overlaps = j["window_overlaps"] = nlohmann::ordered_json::array();
    for (const auto& o : report.window_overlaps) {
        nlohmann::ordered_json jo;
        jo["node_a"] = o.node_a;
        jo["node_b"] = o.node_b;
        jo["start"] = o.start_s;
        jo["end"] = o.end_s;
        overlaps.push_back(std::move(jo));
    }
    return j.dump(2) + "\n";
}

CollisionReport report_from_json(const std::string& text) {
    const auto j = nlohmann::json::parse(text);
    CollisionReport report;
    report.any_collision = j.at("any_collision").get<bool>();
    report.signature_collisions = j.at("signature_collisions").get<std::vector<std::vector<int>>>();
    for (const auto& jo : j.at("window_overlaps"))
        report.window_overlaps.push_back({jo.at("node_a").get<int>(), jo.at("node_b").get<int>(),
                                          jo.at("start").get<double>(), jo.at("end").get<double>()});
    return report;
}

namespace {

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return "";
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

double parse_double(const std::string& key, const std::string& value) {
    std::size_t pos = 0;
    double v = 0.0;
    try {
        v = std::stod(value, &pos);
    } catch (const std::exception&) {
        throw std::invalid_argument("config key " + key + ": cannot parse number '" + value + "'");
    }
    if (pos != value.size())
        throw std::invalid_argument("config key " + key + ": trailing junk in '" + value + "'");
    return v;
}

long long parse_int(const std::string& key, const std::string& value) {
    std::size_t pos = 0;
    long long v = 0;
    try {
        v = std::stoll(value, &pos);
    } catch (const std::exception&) {
        throw std::invalid_argument("config key " + key + ": cannot parse integer '" + value + "'");
    }
    if (pos != value.size())
        throw std::invalid_argument("config key " + key + ": trailing junk in '" + value + "'");
    return v;
}

bool parse_bool(const std::string& key, const std::string& value) {
    if (value == "true" || value == "1") return true;
    if (value == "false" || value == "0") return false;
    throw std::invalid_argument("config key " + key + ": expected true/false, got '" + value + "'");
}

} // namespace

std::map<std::string, std::string> parse_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open config file: " + path);
    std::map<std::string, std::string> entries;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const std::string stripped = trim(line);
        if (stripped.empty() || stripped.front() == '#') continue;
        const auto eq = stripped.find('=');
        if (eq == std::string::npos)
            throw std::invalid_argument(path + ":" + std::to_string(lineno) +
                                        ": expected key=value");
        const std::string key = trim(stripped.substr(0, eq));
        const std::string value = trim(stripped.substr(eq + 1));
        if (key.empty())
            throw std::invalid_argument(path + ":" + std::to_string(lineno) + ": empty key");
        entries[key] = value;
    }
    return entries;
}

void apply_config_entries(const std::map<std::string, std::string>& entries, SimConfig& cfg) {
    for (const auto& [key, value] : entries) {
        if (key == "num_nodes") cfg.num_nodes = static_cast<int>(parse_int(key, value));
        else if (key == "ro1_freq") cfg.ro1_spec.nominal_freq_hz = parse_double(key, value);
        else if (key == "ro1_sigma") cfg.ro1_spec.sigma_fraction = parse_double(key, value);
        else if (key == "ro2_freq") cfg.ro2_spec.nominal_freq_hz = parse_double(key, value);
        else if (key == "ro2_sigma") cfg.ro2_spec.sigma_fraction = parse_double(key, value);
        else if (key == "prbs_order") cfg.prbs_order = static_cast<int>(parse_int(key, value));
        else if (key == "timer_bits") cfg.timer_bits = static_cast<int>(parse_int(key, value));
        else if (key == "seed_bits") cfg.seed_bits = static_cast<int>(parse_int(key, value));
        else if (key == "pad_zero_bits") cfg.pad_zero_bits = static_cast<int>(parse_int(key, value));
        else if (key == "comm_duration") cfg.comm_duration_s = parse_double(key, value);
        else if (key == "idle_duration") cfg.idle_duration_s = parse_double(key, value);
        else if (key == "stim_duration") cfg.stim_duration_s = parse_double(key, value);
        else if (key == "cycle_period") cfg.cycle_period_s = parse_double(key, value);
        else if (key == "sim_duration") cfg.sim_duration_s = parse_double(key, value);
        else if (key == "rng_seed") cfg.rng_seed = static_cast<std::uint64_t>(parse_int(key, value));
        else if (key == "tick_accurate") cfg.tick_accurate = parse_bool(key, value);
        else throw std::invalid_argument("unknown config key: " + key);
    }
}

} // namespace pufslot::sim
