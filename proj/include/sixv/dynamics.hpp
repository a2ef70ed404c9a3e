#pragma once

#include <compare>
#include <cstdint>
#include <utility>
#include <vector>

#include "sixv/lattice.hpp"
#include "sixv/weights.hpp"

namespace sixv {

enum class JumpDir : std::uint8_t { Right, Left };

/// A localized jump opportunity at the h-adjacent pair A=(x,y), B=(x+1,y).
/// Right: v(x,y)=1, h(x,y)=0, v(x+1,y)=0. Left: v(x,y)=0, h(x,y)=1,
/// v(x+1,y)=1. The two directions are mutually exclusive at a position.
struct Trigger {
    int x = 0;
    int y = 0;
    JumpDir dir = JumpDir::Right;
    auto operator<=>(const Trigger&) const = default;
};

/// The eight admissible-pair kinds, keyed by (type A, type B):
///   R1=(CornerWN,Empty)  R2=(Vert,Empty)  R3=(CornerWN,CornerSE)  R4=(Vert,CornerSE)
///   L1=(Horiz,CornerWN)  L2=(CornerSE,CornerWN)  L3=(Horiz,Cross)  L4=(CornerSE,Cross)
enum class JumpKind : std::uint8_t { R1, R2, R3, R4, L1, L2, L3, L4 };

inline constexpr int kNumJumpKinds = 8;

inline bool is_right(JumpKind k) { return static_cast<int>(k) < 4; }
inline JumpDir dir_of(JumpKind k) {
    return is_right(k) ? JumpDir::Right : JumpDir::Left;
}
/// 1..4 within the direction, as used in logs and traces.
inline int kind_number(JumpKind k) { return static_cast<int>(k) % 4 + 1; }
const char* to_string(JumpKind k);

/// Reverse of a jump: Ri <-> Li at the same pair position.
JumpKind reverse_kind(JumpKind k);

/// (type A, type B) of the admissible pair for a kind.
std::pair<VertexType, VertexType> admissible_pair(JumpKind k);

/// Kind matching an h-adjacent pair of types, if any.
std::optional<JumpKind> kind_from_pair(VertexType a, VertexType b);

/// A resolved column transform: the trigger, its kind, the terminal row
/// (vertex C) and the circular span from y to y_top in [1, rows-1].
struct Move {
    Trigger trigger;
    JumpKind kind = JumpKind::R1;
    int y_top = 0;
    int span = 0;
    bool operator==(const Move&) const = default;
};

/// The eight jump rates for a weight vector. Kept as a mutable table so
/// sensitivity tests can perturb single entries.
struct RateTable {
    std::array<double, kNumJumpKinds> rates{};

    static RateTable from_weights(const WeightVector& w);
    double operator[](JumpKind k) const { return rates[static_cast<int>(k)]; }
    double& operator[](JumpKind k) { return rates[static_cast<int>(k)]; }
};

/// True iff the three-edge pattern of `dir` is present at (x, y).
bool is_trigger(const State& s, int x, int y, JumpDir dir);

/// Throws FluxOutOfRangeError unless 1 <= k1 <= rows-1 and 1 <= k2 <= cols-1,
/// the regime where the two-dimensional dynamics is defined.
FluxPair require_dynamic_flux(const State& s);

/// All triggers in lexicographic (x, y) order. Validates the flux regime.
std::vector<Trigger> find_triggers(const State& s);

/// Triggers of one column in ascending y, no flux gate (engine building block).
std::vector<Trigger> column_triggers(const State& s, int x);

/// Kind of a trigger; throws NotATriggerError.
JumpKind classify(const State& s, const Trigger& t);

double jump_rate(JumpKind k, const WeightVector& w);

/// Rate recomputed by the dual-pair recipe: product of the post-move weights
/// of A, B and of their duals, divided by the same four factors pre-move,
/// square-rooted. Equals jump_rate(classify(s,t), w); kept as an independent
/// route, no shared formula with jump_rate.
double rate_via_dual(const State& s, const Trigger& t, const WeightVector& w);

/// Scans upward from the trigger for the terminal row: first non-Vert vertex
/// (right) or first non-Horiz vertex (left) in column x. Termination is
/// guaranteed in the dynamic flux regime; a full wrap throws ScanDivergedError.
Move resolve_move(const State& s, const Trigger& t);

/// Applies the column transform. Throws StaleMoveError if the move does not
/// match the state. Result is valid with unchanged flux.
State apply_move(const State& s, const Move& m);
void apply_move_inplace(State& s, const Move& m);

/// All (move, rate) pairs of a state in lexicographic trigger order.
std::vector<std::pair<Move, double>> enumerate_moves(const State& s,
                                                     const WeightVector& w);

/// Total exit rate of the state.
double outflow(const State& s, const WeightVector& w);

} // namespace sixv
