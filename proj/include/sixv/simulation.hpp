#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>

#include "sixv/dynamics.hpp"
#include "sixv/enumeration.hpp"
#include "sixv/rng.hpp"

namespace sixv {

struct SimConfig {
    int cols = 0;
    int rows = 0;
    int k1 = 0;
    int k2 = 0;
    WeightVector weights;
    std::uint64_t seed = 0;
    /// Exactly one horizon must be positive.
    long long event_horizon = 0;
    double time_horizon = 0;
    double burnin_fraction = 0.1;
    /// Density-series sampling stride in events; 0 picks every event for
    /// enumerable tori and cols*rows otherwise.
    long long cadence = 0;
};

struct Observables {
    double elapsed = 0;     // post burn-in time
    long long events = 0;   // post burn-in events
    std::array<long long, kNumJumpKinds> jumps_by_kind{};
    long long swept_right = 0; // total span of right jumps
    long long swept_left = 0;
    std::array<double, kNumVertexTypes> type_density{}; // time-averaged
    double drift = 0; // (swept_right - swept_left) / (elapsed * sites)
    bool absorbed = false;
    double total_time = 0;      // including burn-in
    long long total_events = 0; // including burn-in
};

/// Per-column trigger cache with classified kinds and rates. After a move at
/// columns (x, x+1) only columns x-1, x, x+1 can change.
class TriggerIndex {
  public:
    struct Entry {
        Trigger trigger;
        JumpKind kind = JumpKind::R1;
        double rate = 0;
        bool operator==(const Entry&) const = default;
    };

    TriggerIndex(const State& s, const RateTable& rates);

    void refresh_after(const State& s, const Move& m);
    double total() const;
    /// Entry at cumulative rate offset u in [0, total()), walking columns in
    /// order and rows upward.
    const Entry& sample(double u) const;
    /// All entries in lexicographic order (for equivalence against a rescan).
    std::vector<Entry> all() const;

  private:
    void rescan_column(const State& s, int x);

    RateTable rates_;
    std::vector<std::vector<Entry>> columns_;
    std::vector<double> column_total_;
};

struct GillespieStep {
    double wait = 0;
    Move move;
    State next;
};

/// One exponential-clock step: waiting time ~ Exp(total outflow), trigger
/// chosen with probability rate/total. Returns nullopt when the state has no
/// trigger (absorbed). Deterministic given the rng stream.
std::optional<GillespieStep> gillespie_step(const State& s,
                                            const WeightVector& w, Rng& rng);

struct RunResult {
    Observables observables;
    State final_state;
};

/// Event-driven trajectory from the canonical state of the configured flux
/// class. Optional JSON-lines event trace and density time series (CSV).
RunResult run(const SimConfig& config, std::ostream* trace = nullptr,
              std::ostream* density_csv = nullptr);

/// Time-weighted occupation frequencies over the enumerated space, for
/// comparison with the exact Gibbs vector. TooLargeError if a visited state
/// falls outside `space`.
std::vector<double> empirical_distribution(const SimConfig& config,
                                           const StateSpace& space);

/// Total-variation distance between two probability vectors.
double tv_distance(const std::vector<double>& a, const std::vector<double>& b);

} // namespace sixv
