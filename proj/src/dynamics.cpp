#include "sixv/dynamics.hpp"

#include <cassert>
#include <cmath>

namespace sixv {

namespace {

constexpr std::pair<VertexType, VertexType> kPairs[kNumJumpKinds] = {
    {VertexType::CornerWN, VertexType::Empty},    // R1
    {VertexType::Vert, VertexType::Empty},        // R2
    {VertexType::CornerWN, VertexType::CornerSE}, // R3
    {VertexType::Vert, VertexType::CornerSE},     // R4
    {VertexType::Horiz, VertexType::CornerWN},    // L1
    {VertexType::CornerSE, VertexType::CornerWN}, // L2
    {VertexType::Horiz, VertexType::Cross},       // L3
    {VertexType::CornerSE, VertexType::Cross},    // L4
};

} // namespace

const char* to_string(JumpKind k) {
    static const char* names[kNumJumpKinds] = {"R1", "R2", "R3", "R4",
                                               "L1", "L2", "L3", "L4"};
    return names[static_cast<int>(k)];
}

JumpKind reverse_kind(JumpKind k) {
    return static_cast<JumpKind>((static_cast<int>(k) + 4) % kNumJumpKinds);
}

std::pair<VertexType, VertexType> admissible_pair(JumpKind k) {
    return kPairs[static_cast<int>(k)];
}

std::optional<JumpKind> kind_from_pair(VertexType a, VertexType b) {
    for (int k = 0; k < kNumJumpKinds; ++k)
        if (kPairs[k].first == a && kPairs[k].second == b)
            return static_cast<JumpKind>(k);
    return std::nullopt;
}

RateTable RateTable::from_weights(const WeightVector& w) {
    const double ab = w.cross * w.empty;
    const double hv = w.horiz * w.vert;
    const double cc = w.corner_se * w.corner_wn;
    RateTable t;
    t[JumpKind::R1] = std::sqrt(hv / ab);
    t[JumpKind::R2] = cc / std::sqrt(ab * hv);
    t[JumpKind::R3] = std::sqrt(ab * hv) / cc;
    t[JumpKind::R4] = std::sqrt(ab / hv);
    t[JumpKind::L1] = std::sqrt(ab / hv);
    t[JumpKind::L2] = std::sqrt(ab * hv) / cc;
    t[JumpKind::L3] = cc / std::sqrt(ab * hv);
    t[JumpKind::L4] = std::sqrt(hv / ab);
    return t;
}

bool is_trigger(const State& s, int x, int y, JumpDir dir) {
    const int xp = s.geom().xplus(x);
    if (dir == JumpDir::Right)
        return s.v(x, y) && !s.h(x, y) && !s.v(xp, y);
    return !s.v(x, y) && s.h(x, y) && s.v(xp, y);
}

FluxPair require_dynamic_flux(const State& s) {
    const FluxPair flux = validate(s);
    const TorusGeometry& g = s.geom();
    if (flux.k1 < 1 || flux.k1 > g.rows - 1 || flux.k2 < 1 ||
        flux.k2 > g.cols - 1)
        throw FluxOutOfRangeError(
            "dynamics requires 1 <= k1 <= rows-1 and 1 <= k2 <= cols-1 "
            "(outside this range it degenerates to a one-dimensional chain)");
    return flux;
}

std::vector<Trigger> column_triggers(const State& s, int x) {
    std::vector<Trigger> out;
    for (int y = 0; y < s.geom().rows; ++y) {
        if (is_trigger(s, x, y, JumpDir::Right))
            out.push_back({x, y, JumpDir::Right});
        else if (is_trigger(s, x, y, JumpDir::Left))
            out.push_back({x, y, JumpDir::Left});
    }
    return out;
}

std::vector<Trigger> find_triggers(const State& s) {
    require_dynamic_flux(s);
    std::vector<Trigger> out;
    for (int x = 0; x < s.geom().cols; ++x)
        for (const Trigger& t : column_triggers(s, x))
            out.push_back(t);
    return out;
}

JumpKind classify(const State& s, const Trigger& t) {
    if (!is_trigger(s, t.x, t.y, t.dir))
        throw NotATriggerError("no admissible pair at the given position");
    const VertexType a = vertex_type(s, t.x, t.y);
    const VertexType b = vertex_type(s, s.geom().xplus(t.x), t.y);
    const auto kind = kind_from_pair(a, b);
    // The three-edge pattern plus conservation forces one of the eight pairs.
    assert(kind && dir_of(*kind) == t.dir);
    return *kind;
}

double jump_rate(JumpKind k, const WeightVector& w) {
    return RateTable::from_weights(w)[k];
}

double rate_via_dual(const State& s, const Trigger& t, const WeightVector& w) {
    const JumpKind kind = classify(s, t); // throws NotATriggerError
    const auto [a, b] = admissible_pair(kind);
    const auto [a_after, b_after] = admissible_pair(reverse_kind(kind));
    const double before = w.of(a) * w.of(b) * w.of(dual_type(a)) * w.of(dual_type(b));
    const double after = w.of(a_after) * w.of(b_after) *
                         w.of(dual_type(a_after)) * w.of(dual_type(b_after));
    return std::sqrt(after / before);
}

Move resolve_move(const State& s, const Trigger& t) {
    const JumpKind kind = classify(s, t);
    const TorusGeometry& g = s.geom();
    const VertexType run_type =
        t.dir == JumpDir::Right ? VertexType::Vert : VertexType::Horiz;
    for (int span = 1; span < g.rows; ++span) {
        const int j = (t.y + span) % g.rows;
        const VertexType vt = vertex_type(s, t.x, j);
        if (vt != run_type) {
            assert(t.dir == JumpDir::Right
                       ? (vt == VertexType::CornerSE || vt == VertexType::Cross)
                       : (vt == VertexType::Empty || vt == VertexType::CornerWN));
            return Move{t, kind, j, span};
        }
    }
    // Unreachable in the dynamic flux regime: a full column of run vertices
    // would force k1 = 0 (right) or k1 = rows (left).
    throw ScanDivergedError("column scan wrapped around the torus");
}

void apply_move_inplace(State& s, const Move& m) {
    if (!is_trigger(s, m.trigger.x, m.trigger.y, m.trigger.dir))
        throw StaleMoveError("move does not match the state: trigger absent");
    const Move current = resolve_move(s, m.trigger);
    if (current != m)
        throw StaleMoveError("move does not match the state: resolution differs");

    const TorusGeometry& g = s.geom();
    const int x = m.trigger.x;
    const int xp = g.xplus(x);
    if (m.trigger.dir == JumpDir::Right) {
        for (int i = 0; i < m.span; ++i) {
            const int j = (m.trigger.y + i) % g.rows;
            s.set_v(x, j, false);
            s.set_v(xp, j, true);
        }
        s.set_h(x, m.trigger.y, true);
        s.set_h(x, m.y_top, false);
    } else {
        for (int i = 0; i < m.span; ++i) {
            const int j = (m.trigger.y + i) % g.rows;
            s.set_v(xp, j, false);
            s.set_v(x, j, true);
        }
        s.set_h(x, m.trigger.y, false);
        s.set_h(x, m.y_top, true);
    }
    // The reverse trigger appears at the same pair.
    assert(is_trigger(s, m.trigger.x, m.trigger.y,
                      m.trigger.dir == JumpDir::Right ? JumpDir::Left
                                                      : JumpDir::Right));
}

State apply_move(const State& s, const Move& m) {
    State out = s;
    apply_move_inplace(out, m);
    return out;
}

std::vector<std::pair<Move, double>> enumerate_moves(const State& s,
                                                     const WeightVector& w) {
    const RateTable rates = RateTable::from_weights(w);
    std::vector<std::pair<Move, double>> out;
    for (const Trigger& t : find_triggers(s)) {
        Move m = resolve_move(s, t);
        out.emplace_back(m, rates[m.kind]);
    }
    return out;
}

double outflow(const State& s, const WeightVector& w) {
    double total = 0;
    for (const auto& [move, rate] : enumerate_moves(s, w))
        total += rate;
    return total;
}

} // namespace sixv
