// pufslot: models PUF-seeded TDMA slot assignment for duty-cycled wireless
// implants. One subcommand per analysis; all randomness flows from
// --rng-seed, never from the environment.

#include <cstdint>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "pufslot/collision.hpp"
#include "pufslot/dispersion.hpp"
#include "pufslot/hardware.hpp"
#include "pufslot/prbs.hpp"
#include "pufslot/sim.hpp"
#include "pufslot/textio.hpp"

namespace {

using pufslot::text::fmt_double;

void emit(const std::optional<std::string>& out_path, const std::string& content) {
    if (out_path)
        pufslot::text::write_file(*out_path, content);
    else
        std::cout << content;
}

int run_collision(int order, std::int64_t max_nodes, std::int64_t trials, std::uint64_t rng_seed,
                  const std::string& format, const std::optional<std::string>& out_path) {
    if (max_nodes < 1) throw std::out_of_range("--nodes must be >= 1");
    // --trials > 0 adds a Monte Carlo cross-check column per row
    std::string content;
    if (format == "csv") {
        content = trials > 0 ? "n,probability,mc_probability,mc_std_error\n" : "n,probability\n";
        for (std::int64_t n = 1; n <= max_nodes; ++n) {
            const auto est = pufslot::collision::collision_probability_exact({order, n});
            content += std::to_string(n) + "," + fmt_double(est.probability);
            if (trials > 0) {
                const auto mc = pufslot::collision::monte_carlo_collision(
                    {order, n}, trials, rng_seed + static_cast<std::uint64_t>(n));
                content += "," + fmt_double(mc.probability) + "," + fmt_double(mc.std_error);
            }
            content += "\n";
        }
    } else {
        nlohmann::ordered_json j;
        j["order"] = order;
        auto& rows = j["rows"] = nlohmann::ordered_json::array();
        for (std::int64_t n = 1; n <= max_nodes; ++n) {
            const auto est = pufslot::collision::collision_probability_exact({order, n});
            nlohmann::ordered_json row{{"n", n}, {"probability", est.probability}};
            if (trials > 0) {
                const auto mc = pufslot::collision::monte_carlo_collision(
                    {order, n}, trials, rng_seed + static_cast<std::uint64_t>(n));
                row["mc_probability"] = mc.probability;
                row["mc_std_error"] = mc.std_error;
            }
            rows.push_back(std::move(row));
        }
        content = j.dump(2) + "\n";
    }
    emit(out_path, content);
    return 0;
}

int run_nodes_supported(int order_min, int order_max, const std::string& format,
                        const std::optional<std::string>& out_path) {
    std::string content;
    if (format == "csv") {
        content = "order,nodes,area_scale,power_scale\n";
        for (int order = order_min; order <= order_max; ++order) {
            const auto nodes = pufslot::collision::nodes_supported(order);
            const auto cost = pufslot::hardware::estimate_cost(order);
            content += std::to_string(order) + "," + std::to_string(nodes) + "," +
                       fmt_double(cost.area_scale) + "," + fmt_double(cost.power_scale) + "\n";
        }
    } else {
        auto rows = nlohmann::ordered_json::array();
        for (int order = order_min; order <= order_max; ++order) {
            const auto nodes = pufslot::collision::nodes_supported(order);
            const auto cost = pufslot::hardware::estimate_cost(order);
            rows.push_back({{"order", order},
                            {"nodes", nodes},
                            {"area_scale", cost.area_scale},
                            {"power_scale", cost.power_scale}});
        }
        content = rows.dump(2) + "\n";
    }
    emit(out_path, content);
    return 0;
}

int run_seed_sweep(int order, int window, const std::string& format,
                   const std::optional<std::string>& out_path) {
    const auto poly = pufslot::prbs::registry_polynomial(order);
    const auto sweep = pufslot::dispersion::sweep_outputs(poly);
    const auto stats = pufslot::dispersion::windowed_std(sweep, window);
    const double normalized = pufslot::dispersion::consecutive_seed_std(poly, window);
    std::string content;
    if (format == "csv") {
        content = "seed,output\n";
        for (std::size_t seed = 0; seed < sweep.outputs.size(); ++seed)
            content += std::to_string(seed) + "," + std::to_string(sweep.outputs[seed]) + "\n";
        content += "# window," + std::to_string(window) + "\n";
        content += "# min_std," + fmt_double(stats.min_std) + "\n";
        content += "# min_std_normalized," + fmt_double(normalized) + "\n";
        if (order == 9)
            content += "# reference_consecutive_seed_std_prbs9," +
                       fmt_double(pufslot::dispersion::kPrbs9ReferenceConsecutiveStd) + "\n";
    } else {
        nlohmann::ordered_json j;
        j["order"] = order;
        j["window"] = window;
        j["min_std"] = stats.min_std;
        j["min_std_normalized"] = normalized;
        if (order == 9)
            j["reference_consecutive_seed_std_prbs9"] =
                pufslot::dispersion::kPrbs9ReferenceConsecutiveStd;
        j["outputs"] = sweep.outputs;
        content = j.dump(2) + "\n";
    }
    emit(out_path, content);
    if (order == 9)
        std::cerr << "PRBS9 min window std (window " << window
                  << "): " << fmt_double(stats.min_std) << " raw, " << fmt_double(normalized)
                  << " of full scale; hardware-reported consecutive-seed std: "
                  << fmt_double(pufslot::dispersion::kPrbs9ReferenceConsecutiveStd)
                  << " (different output conventions; reported side by side, not asserted equal)\n";
    return 0;
}

int run_compare_orders(const std::vector<int>& orders, int window, const std::string& format,
                       const std::optional<std::string>& out_path) {
    const auto rows = pufslot::dispersion::compare_orders(orders, window);
    std::string content;
    if (format == "csv") {
        content = "order,window,min_std,area_scale,power_scale\n";
        for (const auto& r : rows)
            content += std::to_string(r.order) + "," + std::to_string(r.window_size) + "," +
                       fmt_double(r.min_std) + "," + fmt_double(r.area_scale) + "," +
                       fmt_double(r.power_scale) + "\n";
    } else {
        auto j = nlohmann::ordered_json::array();
        for (const auto& r : rows)
            j.push_back({{"order", r.order},
                         {"window", r.window_size},
                         {"min_std", r.min_std},
                         {"area_scale", r.area_scale},
                         {"power_scale", r.power_scale}});
        content = j.dump(2) + "\n";
    }
    emit(out_path, content);
    return 0;
}

struct SimulateFlags {
    std::optional<std::string> config_path;
    std::optional<int> num_nodes;
    std::optional<double> ro1_freq, ro1_sigma, ro2_freq, ro2_sigma;
    std::optional<int> prbs_order, timer_bits, seed_bits, pad_zero_bits;
    std::optional<double> comm_duration, idle_duration, stim_duration, cycle_period, sim_duration;
    std::optional<std::uint64_t> rng_seed;
    bool tick_accurate = false;
};

// Precedence: flag > config file > built-in default.
pufslot::sim::SimConfig resolve_sim_config(const SimulateFlags& flags) {
    pufslot::sim::SimConfig cfg;
    if (flags.config_path)
        pufslot::sim::apply_config_entries(pufslot::sim::parse_config_file(*flags.config_path), cfg);
    if (flags.num_nodes) cfg.num_nodes = *flags.num_nodes;
    if (flags.ro1_freq) cfg.ro1_spec.nominal_freq_hz = *flags.ro1_freq;
    if (flags.ro1_sigma) cfg.ro1_spec.sigma_fraction = *flags.ro1_sigma;
    if (flags.ro2_freq) cfg.ro2_spec.nominal_freq_hz = *flags.ro2_freq;
    if (flags.ro2_sigma) cfg.ro2_spec.sigma_fraction = *flags.ro2_sigma;
    if (flags.prbs_order) cfg.prbs_order = *flags.prbs_order;
    if (flags.timer_bits) cfg.timer_bits = *flags.timer_bits;
    if (flags.seed_bits) cfg.seed_bits = *flags.seed_bits;
    if (flags.pad_zero_bits) cfg.pad_zero_bits = *flags.pad_zero_bits;
    if (flags.comm_duration) cfg.comm_duration_s = *flags.comm_duration;
    if (flags.idle_duration) cfg.idle_duration_s = *flags.idle_duration;
    if (flags.stim_duration) cfg.stim_duration_s = *flags.stim_duration;
    if (flags.cycle_period) cfg.cycle_period_s = *flags.cycle_period;
    if (flags.sim_duration) cfg.sim_duration_s = *flags.sim_duration;
    if (flags.rng_seed) cfg.rng_seed = *flags.rng_seed;
    if (flags.tick_accurate) cfg.tick_accurate = true;
    return cfg;
}

void echo_config(const pufslot::sim::SimConfig& cfg) {
    std::cerr << "config: num_nodes=" << cfg.num_nodes
              << " ro1_freq=" << fmt_double(cfg.ro1_spec.nominal_freq_hz)
              << " ro1_sigma=" << fmt_double(cfg.ro1_spec.sigma_fraction)
              << " ro2_freq=" << fmt_double(cfg.ro2_spec.nominal_freq_hz)
              << " ro2_sigma=" << fmt_double(cfg.ro2_spec.sigma_fraction)
              << " prbs_order=" << cfg.prbs_order << " timer_bits=" << cfg.timer_bits
              << " seed_bits=" << cfg.seed_bits << " pad_zero_bits=" << cfg.pad_zero_bits
              << " comm_duration=" << fmt_double(cfg.comm_duration_s)
              << " idle_duration=" << fmt_double(cfg.idle_duration_s)
              << " stim_duration=" << fmt_double(cfg.stim_duration_s)
              << " cycle_period=" << fmt_double(cfg.cycle_period_s)
              << " sim_duration=" << fmt_double(cfg.sim_duration_s) << " rng_seed=" << cfg.rng_seed
              << " tick_accurate=" << (cfg.tick_accurate ? "true" : "false") << "\n";
}

int run_simulate(const SimulateFlags& flags, const std::string& format,
                 const std::string& out_prefix, bool verbose) {
    const auto cfg = resolve_sim_config(flags);
    if (verbose) echo_config(cfg);
    const auto result = pufslot::sim::run_simulation(cfg);

    const std::string timeline_path =
        out_prefix + (format == "csv" ? ".timeline.csv" : ".timeline.jsonl");
    const std::string report_path = out_prefix + ".report.json";
    pufslot::text::write_file(timeline_path,
                              format == "csv" ? pufslot::sim::timeline_to_csv(result.timeline)
                                              : pufslot::sim::timeline_to_jsonl(result.timeline));
    pufslot::text::write_file(report_path, pufslot::sim::report_to_json(result.report));

    const auto net = pufslot::sim::build_network(cfg);
    for (const auto& node : net.nodes)
        std::cout << "node " << node.id << ": seed=" << node.seed
                  << " signature=" << node.signature << " cs=" << node.cs_value
                  << " start=" << fmt_double(pufslot::sim::node_start_time(node)) << " s\n";
    std::cout << "timeline: " << timeline_path << " (" << result.timeline.size() << " events)\n";
    std::cout << "report: " << report_path
              << (result.report.any_collision ? " (collisions detected)" : " (no collisions)")
              << "\n";
    return 0;
}

int run_ropuf_baseline(int num_ros, double count_window, double ro_freq, double ro_sigma,
                       std::uint64_t rng_seed, const std::string& format,
                       const std::optional<std::string>& out_path) {
    const pufslot::hardware::RoPufConfig puf{num_ros, count_window};
    const pufslot::hardware::RoSpec spec{ro_freq, ro_sigma};
    const auto freqs = pufslot::hardware::sample_ro_frequencies(spec, num_ros, rng_seed);
    const auto challenges = pufslot::hardware::all_pair_challenges(num_ros);
    const auto response =
        pufslot::hardware::traditional_ropuf_response(freqs, challenges, count_window);
    std::string content;
    if (format == "csv") {
        content = "i,j,bit\n";
        for (std::size_t k = 0; k < challenges.size(); ++k)
            content += std::to_string(challenges[k].first) + "," +
                       std::to_string(challenges[k].second) + "," + response[k] + "\n";
    } else {
        nlohmann::ordered_json j;
        j["num_ros"] = num_ros;
        j["challenge_bits"] = puf.challenge_bits();
        j["count_window"] = count_window;
        j["response_bits"] = static_cast<int>(response.size());
        j["response"] = response;
        content = j.dump(2) + "\n";
    }
    emit(out_path, content);
    std::cerr << "response (" << response.size() << " bits, challenge width "
              << puf.challenge_bits() << "): " << response << "\n";
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"PUF-seeded TDMA slot assignment: collision analytics, seed dispersion and "
                 "implant network simulation"};
    app.require_subcommand(1);

    bool verbose = false;
    app.add_flag("-v,--verbose", verbose, "echo resolved configuration to stderr");

    std::string format = "csv";
    std::string sim_format = "json";
    std::optional<std::string> out_path;
    const auto add_io = [&](CLI::App* cmd) {
        cmd->add_option("--format", format, "output format (default csv)")
            ->check(CLI::IsMember({"csv", "json"}));
        cmd->add_option("--out", out_path, "write output to PATH instead of stdout");
    };

    int order = 9;
    std::int64_t max_nodes = 30;
    std::int64_t trials = 0;
    std::uint64_t mc_seed = 1;
    auto* collision = app.add_subcommand("collision", "collision probability vs number of nodes");
    collision->add_option("--order", order, "PRBS order N (signature bit width)")->default_val(9);
    collision->add_option("--nodes", max_nodes, "largest node count to tabulate")->default_val(30);
    collision->add_option("--trials", trials,
                          "if > 0, add a Monte Carlo cross-check column with this many trials");
    collision->add_option("--rng-seed", mc_seed, "seed for the Monte Carlo column")->default_val(1);
    add_io(collision);

    int order_min = 5, order_max = 17;
    auto* nodes_sup =
        app.add_subcommand("nodes-supported", "max nodes with collision probability < 0.5, with "
                                              "relative cost, per order");
    nodes_sup->add_option("--order-min", order_min, "first PRBS order")->default_val(5);
    nodes_sup->add_option("--order-max", order_max, "last PRBS order")->default_val(17);
    add_io(nodes_sup);

    int window = pufslot::dispersion::kDefaultWindow;
    auto* sweep = app.add_subcommand("seed-sweep", "PRBS output for every seed, with moving-window "
                                                   "dispersion summary");
    sweep->add_option("--order", order, "PRBS order")->default_val(9);
    sweep->add_option("--window", window, "moving window over consecutive seeds")
        ->default_val(pufslot::dispersion::kDefaultWindow);
    add_io(sweep);

    std::vector<int> orders{5, 6, 7, 8, 9, 10, 11, 12, 13, 14, 15, 16, 17};
    auto* compare = app.add_subcommand("compare-orders", "min window std and relative cost per "
                                                         "PRBS order");
    compare->add_option("--orders", orders, "comma-separated PRBS orders")->delimiter(',');
    compare->add_option("--window", window, "moving window over consecutive seeds")
        ->default_val(pufslot::dispersion::kDefaultWindow);
    add_io(compare);

    SimulateFlags sf;
    std::string out_prefix = "implant_sim";
    auto* simulate = app.add_subcommand("simulate", "discrete-event simulation of an implant "
                                                    "network after a common sync");
    simulate->add_option("--config", sf.config_path, "key=value config file")
        ->check(CLI::ExistingFile);
    simulate->add_option("--nodes", sf.num_nodes, "number of implants");
    simulate->add_option("--ro1-freq", sf.ro1_freq, "RO1 nominal frequency [Hz]");
    simulate->add_option("--ro1-sigma", sf.ro1_sigma, "RO1 per-die relative std");
    simulate->add_option("--ro2-freq", sf.ro2_freq, "RO2 nominal frequency [Hz]");
    simulate->add_option("--ro2-sigma", sf.ro2_sigma, "RO2 per-die relative std");
    simulate->add_option("--prbs-order", sf.prbs_order, "PRBS order");
    simulate->add_option("--timer-bits", sf.timer_bits, "timer counter width");
    simulate->add_option("--seed-bits", sf.seed_bits, "randomizer counter width");
    simulate->add_option("--pad-zero-bits", sf.pad_zero_bits, "trailing zeros in the slot word");
    simulate->add_option("--comm-duration", sf.comm_duration, "communication window [s]");
    simulate->add_option("--idle-duration", sf.idle_duration, "inactivity between comm and stim [s]");
    simulate->add_option("--stim-duration", sf.stim_duration, "stimulation window [s]");
    simulate->add_option("--cycle-period", sf.cycle_period, "cycle repetition period [s]");
    simulate->add_option("--sim-duration", sf.sim_duration, "simulated time span [s]");
    simulate->add_option("--rng-seed", sf.rng_seed, "seed for all sampling");
    simulate->add_flag("--tick-accurate", sf.tick_accurate,
                       "derive seeds by walking oscillator edges (validation mode)");
    simulate->add_option("--format", sim_format, "timeline format (default json, i.e. JSON lines)")
        ->check(CLI::IsMember({"csv", "json"}));
    simulate->add_option("--out", out_prefix, "output prefix for .timeline.* and .report.json");

    int num_ros = 9;
    double count_window = 1.0, ro_freq = 10e3, ro_sigma = 0.02;
    std::uint64_t rng_seed = 1;
    auto* baseline = app.add_subcommand("ropuf-baseline", "pairwise-comparison response of the "
                                                          "traditional M-oscillator PUF");
    baseline->add_option("--num-ros", num_ros, "number of ring oscillators M")->default_val(9);
    baseline->add_option("--count-window", count_window, "counting window [s]")->default_val(1.0);
    baseline->add_option("--ro-freq", ro_freq, "RO nominal frequency [Hz]")->default_val(10e3);
    baseline->add_option("--ro-sigma", ro_sigma, "per-die relative std")->default_val(0.02);
    baseline->add_option("--rng-seed", rng_seed, "seed for frequency sampling")->default_val(1);
    add_io(baseline);

    CLI11_PARSE(app, argc, argv);

    try {
        if (collision->parsed())
            return run_collision(order, max_nodes, trials, mc_seed, format, out_path);
        if (nodes_sup->parsed()) {
            if (order_min < 5 || order_max > 17 || order_min > order_max)
                throw std::out_of_range("require 5 <= --order-min <= --order-max <= 17");
            return run_nodes_supported(order_min, order_max, format, out_path);
        }
        if (sweep->parsed()) return run_seed_sweep(order, window, format, out_path);
        if (compare->parsed()) return run_compare_orders(orders, window, format, out_path);
        if (simulate->parsed()) return run_simulate(sf, sim_format, out_prefix, verbose);
        if (baseline->parsed())
            return run_ropuf_baseline(num_ros, count_window, ro_freq, ro_sigma, rng_seed, format,
                                      out_path);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
