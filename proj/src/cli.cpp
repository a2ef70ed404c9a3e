#include "sixv/cli.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <future>
#include <iostream>
#include <iterator>
#include <sstream>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "sixv/simulation.hpp"
#include "sixv/verification.hpp"

namespace sixv::cli {

namespace {

using nlohmann::ordered_json;

std::vector<double> parse_csv_doubles(const std::string& text,
                                      std::size_t expected, const char* flag) {
    std::vector<double> values;
    std::stringstream stream(text);
    std::string field;
    while (std::getline(stream, field, ',')) {
        try {
            std::size_t used = 0;
            values.push_back(std::stod(field, &used));
            if (used != field.size())
                throw std::invalid_argument(field);
        } catch (const std::exception&) {
            throw ParseError(std::string(flag) + ": '" + field +
                             "' is not a number");
        }
    }
    if (values.size() != expected)
        throw ParseError(std::string(flag) + " expects " +
                         std::to_string(expected) + " comma-separated values");
    return values;
}

struct WeightOptions {
    std::string weights_text;
    std::string uq_text;
    bool unchecked = false;

    void attach(CLI::App* cmd) {
        cmd->add_option("--weights", weights_text,
                        "six vertex weights: empty,cross,corner_se,corner_wn,"
                        "vert,horiz (positive decimals)");
        cmd->add_option("--uq", uq_text,
                        "derive the weights from two parameters u,q");
        cmd->add_flag("--unchecked", unchecked,
                      "with --uq: return raw, possibly non-positive weights");
    }

    WeightVector resolve() const {
        if (!weights_text.empty() && !uq_text.empty())
            throw ParseError("--weights and --uq are mutually exclusive");
        if (!uq_text.empty()) {
            const auto uq = parse_csv_doubles(uq_text, 2, "--uq");
            return weights_from_uq(uq[0], uq[1], unchecked);
        }
        if (!weights_text.empty()) {
            const auto f = parse_csv_doubles(weights_text, 6, "--weights");
            return WeightVector::checked(f[0], f[1], f[2], f[3], f[4], f[5]);
        }
        return WeightVector::ones();
    }
};

struct GridOptions {
    int cols = 0, rows = 0, k1 = 0, k2 = 0;

    void attach(CLI::App* cmd) {
        cmd->add_option("--M", cols, "torus columns")->required();
        cmd->add_option("--N", rows, "torus rows")->required();
        cmd->add_option("--k1", k1, "horizontal flux (arrows per vertical cut)")
            ->required();
        cmd->add_option("--k2", k2, "vertical flux (arrows per horizontal cut)")
            ->required();
    }

    std::string config_string(const WeightVector& w) const {
        ordered_json j;
        j["M"] = cols;
        j["N"] = rows;
        j["k1"] = k1;
        j["k2"] = k2;
        j["weights"] = w.as_array();
        return j.dump();
    }

    void require_dynamic() const {
        if (k1 < 1 || k1 > rows - 1 || k2 < 1 || k2 > cols - 1)
            throw FluxOutOfRangeError(
                "this command needs 1 <= k1 <= N-1 and 1 <= k2 <= M-1; outside "
                "that range the dynamics degenerates to a one-dimensional "
                "exclusion chain");
    }
};

std::ostream& open_or_stdout(const std::string& path, std::ofstream& file,
                             std::ostream& out) {
    if (path.empty() || path == "-")
        return out;
    file.open(path);
    if (!file)
        throw ParseError("cannot open output file: " + path);
    return file;
}

ordered_json observables_json(const Observables& o) {
    ordered_json j;
    j["elapsed"] = o.elapsed;
    j["events"] = o.events;
    ordered_json jumps;
    for (int k = 0; k < kNumJumpKinds; ++k)
        jumps[to_string(static_cast<JumpKind>(k))] = o.jumps_by_kind[k];
    j["jumps"] = jumps;
    j["swept_right"] = o.swept_right;
    j["swept_left"] = o.swept_left;
    ordered_json density;
    for (int t = 0; t < kNumVertexTypes; ++t)
        density[to_string(static_cast<VertexType>(t))] = o.type_density[t];
    j["density"] = density;
    j["drift"] = o.drift;
    j["absorbed"] = o.absorbed;
    j["total_time"] = o.total_time;
    j["total_events"] = o.total_events;
    return j;
}

struct CheckRow {
    std::string check;
    std::string config;
    double residual = 0;
    double tolerance = 0;
    bool pass = false;
};

void emit_rows(const std::vector<CheckRow>& rows, const std::string& format,
               std::ostream& out) {
    if (format == "csv") {
        out << "check,config,residual,tolerance,pass\n";
        for (const auto& r : rows)
            out << r.check << ",\"" << r.config << "\"," << r.residual << ","
                << r.tolerance << "," << (r.pass ? "true" : "false") << "\n";
        return;
    }
    ordered_json j = ordered_json::array();
    for (const auto& r : rows) {
        ordered_json row;
        row["check"] = r.check;
        row["config"] = r.config;
        row["residual"] = r.residual;
        row["tolerance"] = r.tolerance;
        row["pass"] = r.pass;
        j.push_back(row);
    }
    out << j.dump(2) << "\n";
}

// ---- verify battery -------------------------------------------------------

CheckRow verify_conserved_counts(const StateSpace& space,
                                 const std::string& config) {
    using T = VertexType;
    long worst = 0;
    const long c1_expected =
        static_cast<long>(space.geom().cols) * space.flux().k1;
    const long c2_expected =
        static_cast<long>(space.geom().rows) * space.flux().k2;
    for (int i = 0; i < space.size(); ++i) {
        const auto counts = count_types(space.state(i));
        auto n = [&](T t) { return counts[static_cast<int>(t)]; };
        const long c1 = n(T::Cross) + n(T::CornerWN) + n(T::Horiz);
        const long c2 = n(T::Cross) + n(T::CornerWN) + n(T::Vert);
        const long c3 = n(T::Empty) + n(T::Cross) + n(T::CornerWN) +
                        n(T::CornerSE) + n(T::Vert) + n(T::Horiz);
        worst = std::max({worst, std::abs(c1 - c1_expected),
                          std::abs(c2 - c2_expected),
                          std::abs(c3 - static_cast<long>(space.geom().sites())),
                          std::abs(n(T::CornerWN) - n(T::CornerSE))});
    }
    return {"conserved_counts", config, static_cast<double>(worst), 0,
            worst == 0};
}

CheckRow verify_pair_identities(const StateSpace& space,
                                const std::string& config) {
    long worst = 0;
    for (int i = 0; i < space.size(); ++i) {
        const PairCountReport r = check_pair_identities(space.state(i));
        for (long d : r.differences)
            worst = std::max(worst, std::abs(d - r.common_difference));
        if (!r.block_balance)
            worst = std::max(worst, 1L);
    }
    return {"pair_identities", config, static_cast<double>(worst), 0,
            worst == 0};
}

CheckRow verify_rate_dual(const StateSpace& space, const WeightVector& w,
                          const std::string& config) {
    double worst = 0;
    for (int i = 0; i < space.size(); ++i) {
        const State s = space.state(i);
        for (const Trigger& t : find_triggers(s)) {
            const double direct = jump_rate(classify(s, t), w);
            const double via_dual = rate_via_dual(s, t, w);
            worst = std::max(worst, std::abs(direct - via_dual) / direct);
        }
    }
    for (int k = 0; k < 4; ++k) {
        const auto right = static_cast<JumpKind>(k);
        const double product =
            jump_rate(right, w) * jump_rate(reverse_kind(right), w);
        worst = std::max(worst, std::abs(product - 1));
    }
    return {"rate_dual", config, worst, kRateTol, worst <= kRateTol};
}

CheckRow verify_outflow(const StateSpace& space, const WeightVector& w,
                        const std::string& config) {
    double worst = 0;
    for (int i = 0; i < space.size(); ++i)
        worst = std::max(worst, check_outflow_decomposition(space.state(i), w));
    return {"outflow_decomposition", config, worst, kRateTol, worst <= kRateTol};
}

int cmd_verify(const GridOptions& grid, const WeightVector& w,
               std::vector<std::string> checks, const std::string& format,
               std::ostream& out) {
    grid.require_dynamic();
    const StateSpace space =
        enumerate_states(grid.cols, grid.rows, grid.k1, grid.k2);
    const std::string config = grid.config_string(w);

    if (checks.empty())
        checks = {"flip_weight",       "pair_identities", "conserved_counts",
                  "flip_balance",      "rate_dual",       "stationarity_full",
                  "gauge_invariance",  "outflow_decomposition"};

    std::vector<CheckRow> rows;
    for (const std::string& name : checks) {
        if (name == "flip_weight") {
            const bool ok = check_flip_weight(space);
            rows.push_back({name, config, ok ? 0.0 : 1.0, 0, ok});
        } else if (name == "pair_identities") {
            rows.push_back(verify_pair_identities(space, config));
        } else if (name == "conserved_counts") {
            rows.push_back(verify_conserved_counts(space, config));
        } else if (name == "flip_balance") {
            const double r = check_flip_balance(space, w);
            rows.push_back({name, config, r, kRateTol, r <= kRateTol});
        } else if (name == "rate_dual") {
            rows.push_back(verify_rate_dual(space, w, config));
        } else if (name == "stationarity_full" || name == "stationarity_right" ||
                   name == "stationarity_left") {
            const GeneratorMode mode = name == "stationarity_full"
                                           ? GeneratorMode::Full
                                       : name == "stationarity_right"
                                           ? GeneratorMode::RightOnly
                                           : GeneratorMode::LeftOnly;
            const StationarityReport r = check_stationarity(space, w, mode);
            rows.push_back({name, config, r.residual_inf, r.tolerance, r.pass});
        } else if (name == "gauge_invariance") {
            const double grid_c[] = {0.5, 2.0, 7.0};
            const GaugeInvarianceReport r =
                check_gauge_invariance(space, w, grid_c);
            rows.push_back({name, config,
                            std::max(r.max_rate_deviation, r.max_tv_distance),
                            kRateTol, r.pass});
        } else if (name == "outflow_decomposition") {
            rows.push_back(verify_outflow(space, w, config));
        } else if (name == "connectivity") {
            const ConnectivityReport r =
                check_connectivity(build_generator(space, w));
            CheckRow row{name, config, 0, 0, true};
            row.config += ";components=" + std::to_string(r.components);
            rows.push_back(row);
        } else {
            throw ParseError("unknown check: " + name);
        }
    }
    emit_rows(rows, format, out);
    return std::all_of(rows.begin(), rows.end(),
                       [](const CheckRow& r) { return r.pass; })
               ? 0
               : 1;
}

// ---- simulate --------------------------------------------------------------

ordered_json config_json(const SimConfig& cfg) {
    ordered_json j;
    j["M"] = cfg.cols;
    j["N"] = cfg.rows;
    j["k1"] = cfg.k1;
    j["k2"] = cfg.k2;
    j["weights"] = cfg.weights.as_array();
    j["seed"] = cfg.seed;
    if (cfg.event_horizon > 0)
        j["events"] = cfg.event_horizon;
    else
        j["time"] = cfg.time_horizon;
    j["burnin"] = cfg.burnin_fraction;
    return j;
}

int cmd_simulate(SimConfig cfg, int replicas, int jobs, bool empirical,
                 const std::string& out_path, const std::string& trace_path,
                 const std::string& density_path, const std::string& format,
                 std::ostream& out) {
    std::ofstream out_file;
    std::ostream& sink = open_or_stdout(out_path, out_file, out);

    if (replicas < 1 || jobs < 1)
        throw ParseError("--replicas and --jobs must be positive");
    if (replicas > 1 && (format == "csv" || !trace_path.empty()))
        throw ParseError("trace and csv output are single-replica features");

    if (replicas == 1) {
        std::ofstream trace_file, density_file;
        std::ostream* trace = nullptr;
        std::ostream* density = nullptr;
        if (!trace_path.empty()) {
            trace_file.open(trace_path);
            if (!trace_file)
                throw ParseError("cannot open trace file: " + trace_path);
            trace = &trace_file;
        }
        std::ostringstream density_buf;
        if (!density_path.empty() || format == "csv")
            density = &density_buf;

        const RunResult result = run(cfg, trace, density);

        if (!density_path.empty()) {
            std::ofstream f(density_path);
            if (!f)
                throw ParseError("cannot open density file: " + density_path);
            f << density_buf.str();
        }
        if (format == "csv") {
            sink << density_buf.str();
            return 0;
        }
        ordered_json j;
        j["config"] = config_json(cfg);
        j["observables"] = observables_json(result.observables);
        if (empirical) {
            const StateSpace space =
                enumerate_states(cfg.cols, cfg.rows, cfg.k1, cfg.k2);
            const auto occupation = empirical_distribution(cfg, space);
            const auto gibbs = gibbs_distribution(space, cfg.weights);
            j["empirical_tv"] = tv_distance(occupation, gibbs);
        }
        sink << j.dump() << "\n";
        return 0;
    }

    std::vector<SimConfig> configs(replicas, cfg);
    for (int r = 0; r < replicas; ++r)
        configs[r].seed = cfg.seed + static_cast<std::uint64_t>(r);
    std::vector<Observables> results(replicas);
    // deterministic work distribution: each job takes replicas round-robin
    std::vector<std::future<void>> futures;
    const int workers = std::min(jobs, replicas);
    for (int wi = 0; wi < workers; ++wi)
        futures.push_back(std::async(std::launch::async, [&, wi]() {
            for (int r = wi; r < replicas; r += workers)
                results[r] = run(configs[r]).observables;
        }));
    for (auto& f : futures)
        f.get();

    ordered_json j;
    j["config"] = config_json(cfg);
    j["replicas"] = ordered_json::array();
    double drift_sum = 0;
    for (int r = 0; r < replicas; ++r) {
        ordered_json row;
        row["seed"] = configs[r].seed;
        row["observables"] = observables_json(results[r]);
        j["replicas"].push_back(row);
        drift_sum += results[r].drift;
    }
    j["aggregate"]["drift_mean"] = drift_sum / replicas;
    sink << j.dump() << "\n";
    return 0;
}

// ---- state-tool ------------------------------------------------------------

std::string read_input(const std::string& path, std::istream& fallback) {
    if (path.empty() || path == "-") {
        return std::string(std::istreambuf_iterator<char>(fallback), {});
    }
    std::ifstream f(path);
    if (!f)
        throw ParseError("cannot open input file: " + path);
    return std::string(std::istreambuf_iterator<char>(f), {});
}

int cmd_state_tool(const std::string& op, const std::string& in_path,
                   const std::string& out_path, std::ostream& out,
                   std::istream& in) {
    const std::string text = read_input(in_path, in);
    std::ofstream out_file;
    std::ostream& sink = open_or_stdout(out_path, out_file, out);

    if (op == "validate") {
        ordered_json j;
        try {
            const State s = codec_decode(text);
            const FluxPair flux = validate(s);
            j["valid"] = true;
            j["M"] = s.geom().cols;
            j["N"] = s.geom().rows;
            j["k1"] = flux.k1;
            j["k2"] = flux.k2;
            sink << j.dump() << "\n";
            return 0;
        } catch (const Error& e) {
            j["valid"] = false;
            j["error"] = e.what();
            sink << j.dump() << "\n";
            return 1;
        }
    }
    const State s = codec_decode(text);
    if (op == "flip") {
        sink << codec_encode(flip(s)) << "\n";
    } else if (op == "dual") {
        sink << codec_encode(dual(s)) << "\n";
    } else if (op == "types") {
        const auto counts = count_types(s);
        ordered_json j;
        for (int t = 0; t < kNumVertexTypes; ++t)
            j[to_string(static_cast<VertexType>(t))] = counts[t];
        sink << j.dump() << "\n";
    } else {
        throw ParseError("unknown op: " + op +
                         " (expected validate|flip|dual|types)");
    }
    return 0;
}

} // namespace

int run(std::vector<std::string> args, std::ostream& out, std::ostream& err) {
    CLI::App app{
        "six-vertex model on a torus: fixed-flux enumeration, irreversible "
        "column-jump dynamics, Gibbs stationarity checks, and event-driven "
        "simulation"};
    app.require_subcommand(1);

    auto* cmd_enum = app.add_subcommand(
        "enumerate", "enumerate a fixed-flux state space; report |S| and Z");
    GridOptions enum_grid;
    WeightOptions enum_weights;
    enum_grid.attach(cmd_enum);
    enum_weights.attach(cmd_enum);
    std::string dump_generator_path, dump_states_path, enum_mode = "full";
    bool enum_connectivity = false;
    std::string enum_format = "json";
    cmd_enum->add_option("--dump-generator", dump_generator_path,
                         "write the generator in Matrix Market coordinate text");
    cmd_enum->add_option("--dump-states", dump_states_path,
                         "write the state index as a JSON list of encodings");
    cmd_enum->add_option("--mode", enum_mode, "generator mode: full|right|left")
        ->check(CLI::IsMember({"full", "right", "left"}));
    cmd_enum->add_flag("--connectivity", enum_connectivity,
                       "report strong connectivity of the jump digraph");
    cmd_enum->add_option("--format", enum_format, "json|csv")
        ->check(CLI::IsMember({"json", "csv"}));

    auto* cmd_rates = app.add_subcommand(
        "rates", "print the eight jump rates for a weight vector");
    WeightOptions rates_weights;
    rates_weights.attach(cmd_rates);
    std::string rates_format = "text";
    cmd_rates->add_option("--format", rates_format, "text|json")
        ->check(CLI::IsMember({"text", "json"}));

    auto* cmd_ver = app.add_subcommand(
        "verify", "run structural checks on an enumerated space");
    GridOptions ver_grid;
    WeightOptions ver_weights;
    ver_grid.attach(cmd_ver);
    ver_weights.attach(cmd_ver);
    std::vector<std::string> ver_checks;
    std::string ver_format = "json", ver_out;
    cmd_ver->add_option("--checks", ver_checks,
                        "comma-separated subset of: flip_weight, "
                        "pair_identities, conserved_counts, flip_balance, "
                        "rate_dual, stationarity_full, stationarity_right, "
                        "stationarity_left, gauge_invariance, "
                        "outflow_decomposition, connectivity")
        ->delimiter(',');
    cmd_ver->add_option("--format", ver_format, "json|csv")
        ->check(CLI::IsMember({"json", "csv"}));
    cmd_ver->add_option("--out", ver_out, "write the report here instead of stdout");

    auto* cmd_sim = app.add_subcommand(
        "simulate", "event-driven trajectory from the canonical state");
    GridOptions sim_grid;
    WeightOptions sim_weights;
    sim_grid.attach(cmd_sim);
    sim_weights.attach(cmd_sim);
    std::uint64_t sim_seed = 0;
    long long sim_events = 0;
    double sim_time = 0, sim_burnin = 0.1;
    long long sim_cadence = 0;
    int sim_replicas = 1, sim_jobs = 1;
    bool sim_empirical = false;
    std::string sim_out, sim_trace, sim_density, sim_format = "json";
    cmd_sim->add_option("--seed", sim_seed, "rng seed")->required();
    cmd_sim->add_option("--events", sim_events, "event-count horizon");
    cmd_sim->add_option("--time", sim_time, "total-time horizon");
    cmd_sim->add_option("--burnin", sim_burnin,
                        "fraction of the horizon discarded before statistics");
    cmd_sim->add_option("--cadence", sim_cadence,
                        "density sampling stride in events (0 = auto)");
    cmd_sim->add_option("--replicas", sim_replicas,
                        "independent trajectories with consecutive seeds");
    cmd_sim->add_option("--jobs", sim_jobs, "worker threads for replicas");
    cmd_sim->add_flag("--empirical", sim_empirical,
                      "also report the total-variation distance between "
                      "occupation frequencies and the exact Gibbs vector");
    cmd_sim->add_option("--out", sim_out, "summary destination (default stdout)");
    cmd_sim->add_option("--trace", sim_trace, "JSON-lines event log");
    cmd_sim->add_option("--density-csv", sim_density,
                        "density time series destination");
    cmd_sim->add_option("--format", sim_format, "json|csv")
        ->check(CLI::IsMember({"json", "csv"}));

    auto* cmd_state = app.add_subcommand(
        "state-tool", "validate or transform a state file");
    std::string st_op = "validate", st_in, st_out;
    cmd_state->add_option("--op", st_op, "validate|flip|dual|types")
        ->check(CLI::IsMember({"validate", "flip", "dual", "types"}));
    cmd_state->add_option("--in", st_in, "state JSON file ('-' for stdin)");
    cmd_state->add_option("--out", st_out, "destination (default stdout)");

    std::reverse(args.begin(), args.end());
    try {
        app.parse(std::move(args));
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? 0 : 2;
    }

    try {
        if (app.got_subcommand(cmd_enum)) {
            const WeightVector w = enum_weights.resolve();
            const StateSpace space = enumerate_states(
                enum_grid.cols, enum_grid.rows, enum_grid.k1, enum_grid.k2);
            if (!dump_states_path.empty()) {
                std::ofstream f(dump_states_path);
                if (!f)
                    throw ParseError("cannot open: " + dump_states_path);
                write_state_index(space, f);
            }
            const GeneratorMode mode = enum_mode == "full"
                                           ? GeneratorMode::Full
                                       : enum_mode == "right"
                                           ? GeneratorMode::RightOnly
                                           : GeneratorMode::LeftOnly;
            ordered_json j;
            j["states"] = space.size();
            if (space.size() > 0) {
                const double log_z = log_partition_function(space, w);
                j["logZ"] = log_z;
                j["Z"] = std::exp(log_z);
            }
            if (!dump_generator_path.empty() || enum_connectivity) {
                enum_grid.require_dynamic();
                const GeneratorMatrix q = build_generator(space, w, mode);
                if (!dump_generator_path.empty()) {
                    std::ofstream f(dump_generator_path);
                    if (!f)
                        throw ParseError("cannot open: " + dump_generator_path);
                    write_matrix_market(q, f);
                }
                if (enum_connectivity) {
                    const ConnectivityReport r = check_connectivity(q);
                    j["connectivity"]["components"] = r.components;
                    j["connectivity"]["strongly_connected"] = r.strongly_connected;
                }
            }
            if (enum_format == "csv") {
                out << "key,value\n";
                for (const auto& [key, value] : j.items())
                    out << key << "," << value.dump() << "\n";
            } else {
                out << j.dump() << "\n";
            }
            return 0;
        }
        if (app.got_subcommand(cmd_rates)) {
            const WeightVector w = rates_weights.resolve();
            if (!w.positive())
                throw NonPositiveWeightError(
                    "rates need positive weights; drop --unchecked");
            const RateTable t = RateTable::from_weights(w);
            if (rates_format == "json") {
                ordered_json j;
                for (int k = 0; k < kNumJumpKinds; ++k)
                    j[to_string(static_cast<JumpKind>(k))] = t.rates[k];
                out << j.dump() << "\n";
            } else {
                char buf[64];
                for (int k = 0; k < kNumJumpKinds; ++k) {
                    std::snprintf(buf, sizeof buf, "%.17g", t.rates[k]);
                    out << to_string(static_cast<JumpKind>(k)) << " " << buf
                        << "\n";
                }
            }
            return 0;
        }
        if (app.got_subcommand(cmd_ver)) {
            std::ofstream out_file;
            std::ostream& sink = open_or_stdout(ver_out, out_file, out);
            return cmd_verify(ver_grid, ver_weights.resolve(), ver_checks,
                              ver_format, sink);
        }
        if (app.got_subcommand(cmd_sim)) {
            SimConfig cfg;
            cfg.cols = sim_grid.cols;
            cfg.rows = sim_grid.rows;
            cfg.k1 = sim_grid.k1;
            cfg.k2 = sim_grid.k2;
            cfg.weights = sim_weights.resolve();
            cfg.seed = sim_seed;
            cfg.event_horizon = sim_events;
            cfg.time_horizon = sim_time;
            if (cfg.event_horizon == 0 && cfg.time_horizon == 0)
                cfg.event_horizon = 10000;
            cfg.burnin_fraction = sim_burnin;
            cfg.cadence = sim_cadence;
            sim_grid.require_dynamic();
            return cmd_simulate(cfg, sim_replicas, sim_jobs, sim_empirical,
                                sim_out, sim_trace, sim_density, sim_format,
                                out);
        }
        if (app.got_subcommand(cmd_state))
            return cmd_state_tool(st_op, st_in, st_out, out, std::cin);
    } catch (const Error& e) {
        err << "error: " << e.what() << "\n";
        return 2;
    }
    return 2;
}

} // namespace sixv::cli
