#include "sixv/simulation.hpp"

#include <algorithm>
#include <cassert>
#include <cmath>
#include <cstdio>
#include <ostream>

namespace sixv {

TriggerIndex::TriggerIndex(const State& s, const RateTable& rates)
    : rates_(rates), columns_(s.geom().cols), column_total_(s.geom().cols, 0) {
    require_dynamic_flux(s);
    for (int x = 0; x < s.geom().cols; ++x)
        rescan_column(s, x);
}

void TriggerIndex::rescan_column(const State& s, int x) {
    auto& entries = columns_[x];
    entries.clear();
    double total = 0;
    for (const Trigger& t : column_triggers(s, x)) {
        const JumpKind kind = classify(s, t);
        const double rate = rates_[kind];
        entries.push_back({t, kind, rate});
        total += rate;
    }
    column_total_[x] = total;
}

void TriggerIndex::refresh_after(const State& s, const Move& m) {
    const int cols = s.geom().cols;
    const int x = m.trigger.x;
    int affected[3] = {(x + cols - 1) % cols, x, (x + 1) % cols};
    for (int i = 0; i < 3; ++i) {
        bool seen = false;
        for (int j = 0; j < i; ++j)
            seen |= affected[j] == affected[i];
        if (!seen)
            rescan_column(s, affected[i]);
    }
}

double TriggerIndex::total() const {
    double sum = 0;
    for (double column : column_total_)
        sum += column;
    return sum;
}

const TriggerIndex::Entry& TriggerIndex::sample(double u) const {
    const Entry* last = nullptr;
    for (std::size_t x = 0; x < columns_.size(); ++x) {
        if (columns_[x].empty())
            continue;
        if (u < column_total_[x]) {
            for (const Entry& e : columns_[x]) {
                if (u < e.rate)
                    return e;
                u -= e.rate;
            }
            return columns_[x].back();
        }
        u -= column_total_[x];
        last = &columns_[x].back();
    }
    assert(last); // caller guarantees total() > 0
    return *last;
}

std::vector<TriggerIndex::Entry> TriggerIndex::all() const {
    std::vector<Entry> out;
    for (const auto& column : columns_)
        out.insert(out.end(), column.begin(), column.end());
    return out;
}

std::optional<GillespieStep> gillespie_step(const State& s,
                                            const WeightVector& w, Rng& rng) {
    const auto moves = enumerate_moves(s, w);
    if (moves.empty())
        return std::nullopt;
    double total = 0;
    for (const auto& [move, rate] : moves)
        total += rate;
    const double wait = rng.exponential(total);
    double u = rng.uniform01() * total;
    const Move* chosen = &moves.back().first;
    for (const auto& [move, rate] : moves) {
        if (u < rate) {
            chosen = &move;
            break;
        }
        u -= rate;
    }
    return GillespieStep{wait, *chosen, apply_move(s, *chosen)};
}

namespace {

void write_trace_line(std::ostream& out, double t, const Move& m) {
    char buf[160];
    std::snprintf(buf, sizeof buf,
                  "{\"t\":%.17g,\"x\":%d,\"y\":%d,\"dir\":\"%c\",\"kind\":%d,"
                  "\"span\":%d}",
                  t, m.trigger.x, m.trigger.y,
                  m.trigger.dir == JumpDir::Right ? 'R' : 'L',
                  kind_number(m.kind), m.span);
    out << buf << "\n";
}

struct ColumnCensus {
    std::vector<std::array<long, kNumVertexTypes>> per_column;
    std::array<long, kNumVertexTypes> totals{};

    explicit ColumnCensus(const State& s) : per_column(s.geom().cols) {
        for (int x = 0; x < s.geom().cols; ++x)
            recount(s, x);
    }
    void recount(const State& s, int x) {
        for (int t = 0; t < kNumVertexTypes; ++t)
            totals[t] -= per_column[x][t];
        per_column[x].fill(0);
        for (int y = 0; y < s.geom().rows; ++y)
            ++per_column[x][static_cast<int>(vertex_type(s, x, y))];
        for (int t = 0; t < kNumVertexTypes; ++t)
            totals[t] += per_column[x][t];
    }
    // types change in the trigger pair's two columns only
    void refresh_after(const State& s, const Move& m) {
        recount(s, m.trigger.x);
        recount(s, s.geom().xplus(m.trigger.x));
    }
};

template <typename SojournHook>
RunResult run_core(const SimConfig& cfg, std::ostream* trace,
                   std::ostream* density_csv, SojournHook&& on_sojourn) {
    if ((cfg.event_horizon > 0) == (cfg.time_horizon > 0))
        throw OutOfRangeError("exactly one of event/time horizon must be set");
    if (cfg.burnin_fraction < 0 || cfg.burnin_fraction >= 1)
        throw OutOfRangeError("burn-in fraction must lie in [0, 1)");

    State s = canonical_state(cfg.cols, cfg.rows, cfg.k1, cfg.k2);
    const RateTable rates = RateTable::from_weights(cfg.weights);
    TriggerIndex index(s, rates); // validates the dynamic flux regime
    Rng rng(cfg.seed);
    ColumnCensus census(s);

    const bool event_mode = cfg.event_horizon > 0;
    const long long burn_events =
        event_mode ? static_cast<long long>(cfg.burnin_fraction *
                                            static_cast<double>(cfg.event_horizon))
                   : 0;
    const double burn_time = event_mode ? 0 : cfg.burnin_fraction * cfg.time_horizon;
    const long long cadence =
        cfg.cadence > 0 ? cfg.cadence
                        : (2 * cfg.cols * cfg.rows <= 64 ? 1 : cfg.cols * cfg.rows);
    const int sites = cfg.cols * cfg.rows;

    Observables obs;
    std::array<double, kNumVertexTypes> density_acc{};
    double t = 0;

    if (density_csv)
        *density_csv << "t,empty,cross,corner_se,corner_wn,vert,horiz\n";
    auto emit_density_row = [&]() {
        if (!density_csv)
            return;
        char buf[64];
        std::snprintf(buf, sizeof buf, "%.17g", t);
        *density_csv << buf;
        for (int i = 0; i < kNumVertexTypes; ++i) {
            std::snprintf(buf, sizeof buf, ",%.17g",
                          static_cast<double>(census.totals[i]) / sites);
            *density_csv << buf;
        }
        *density_csv << "\n";
    };

    while (event_mode ? obs.total_events < cfg.event_horizon
                      : t < cfg.time_horizon) {
        const double total_rate = index.total();
        if (total_rate <= 0) {
            obs.absorbed = true;
            break;
        }
        double dt = rng.exponential(total_rate);
        const bool post_burn =
            event_mode ? obs.total_events >= burn_events : t >= burn_time;
        if (!event_mode && t + dt > cfg.time_horizon) {
            const double tail = cfg.time_horizon - t;
            if (post_burn) {
                obs.elapsed += tail;
                for (int i = 0; i < kNumVertexTypes; ++i)
                    density_acc[i] += static_cast<double>(census.totals[i]) * tail;
                on_sojourn(s, tail);
            }
            t = cfg.time_horizon;
            break;
        }

        const TriggerIndex::Entry& entry =
            index.sample(rng.uniform01() * total_rate);
        const Move move = resolve_move(s, entry.trigger);

        if (post_burn) {
            obs.elapsed += dt;
            for (int i = 0; i < kNumVertexTypes; ++i)
                density_acc[i] += static_cast<double>(census.totals[i]) * dt;
            on_sojourn(s, dt);
            ++obs.events;
            ++obs.jumps_by_kind[static_cast<int>(move.kind)];
            if (move.trigger.dir == JumpDir::Right)
                obs.swept_right += move.span;
            else
                obs.swept_left += move.span;
        }

        t += dt;
        ++obs.total_events;
        if (trace)
            write_trace_line(*trace, t, move);

        apply_move_inplace(s, move);
        index.refresh_after(s, move);
        census.refresh_after(s, move);
        if (obs.total_events % cadence == 0)
            emit_density_row();
    }

    obs.total_time = t;
    if (obs.elapsed > 0) {
        for (int i = 0; i < kNumVertexTypes; ++i)
            obs.type_density[i] = density_acc[i] / (obs.elapsed * sites);
        obs.drift = static_cast<double>(obs.swept_right - obs.swept_left) /
                    (obs.elapsed * sites);
    } else {
        for (int i = 0; i < kNumVertexTypes; ++i)
            obs.type_density[i] = static_cast<double>(census.totals[i]) / sites;
    }
    return RunResult{obs, std::move(s)};
}

} // namespace

RunResult run(const SimConfig& config, std::ostream* trace,
              std::ostream* density_csv) {
    return run_core(config, trace, density_csv, [](const State&, double) {});
}

std::vector<double> empirical_distribution(const SimConfig& config,
                                           const StateSpace& space) {
    std::vector<double> occupation(space.size(), 0);
    double mass = 0;
    run_core(config, nullptr, nullptr, [&](const State& s, double dt) {
        const auto i = space.index_of(encode64(s));
        if (!i)
            throw ClosureViolationError("trajectory left the provided space");
        occupation[*i] += dt;
        mass += dt;
    });
    if (mass > 0)
        for (double& f : occupation)
            f /= mass;
    return occupation;
}

double tv_distance(const std::vector<double>& a, const std::vector<double>& b) {
    assert(a.size() == b.size());
    double sum = 0;
    for (std::size_t i = 0; i < a.size(); ++i)
        sum += std::abs(a[i] - b[i]);
    return sum / 2;
}

} // namespace sixv
