#include "sixv/verification.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace sixv {

namespace {

// Neumaier-compensated accumulator.
struct Kahan {
    double sum = 0, comp = 0;
    void add(double v) {
        const double t = sum + v;
        comp += std::abs(sum) >= std::abs(v) ? (sum - t) + v : (v - t) + sum;
        sum = t;
    }
    double value() const { return sum + comp; }
};

long pair_count(const std::array<std::array<long, kNumVertexTypes>,
                                 kNumVertexTypes>& table,
                VertexType a, VertexType b) {
    return table[static_cast<int>(a)][static_cast<int>(b)];
}

} // namespace

bool check_flip_weight(const StateSpace& space) {
    for (int i = 0; i < space.size(); ++i) {
        const State s = space.state(i);
        const auto counts = count_types(s);
        const auto flipped = count_types(flip(s));
        for (int t = 0; t < kNumVertexTypes; ++t) {
            const auto ft = flip_type(static_cast<VertexType>(t));
            if (counts[t] != flipped[static_cast<int>(ft)])
                return false;
        }
        // weight equality reduces to the corner counts matching
        if (counts[static_cast<int>(VertexType::CornerWN)] !=
            counts[static_cast<int>(VertexType::CornerSE)])
            return false;
    }
    return true;
}

double check_flip_balance(const StateSpace& space, const WeightVector& w,
                          const RateTable& rates) {
    const GeneratorMatrix q = build_generator(space, rates);
    std::vector<double> log_weight(space.size());
    std::vector<int> flip_index(space.size());
    for (int i = 0; i < space.size(); ++i) {
        const State s = space.state(i);
        log_weight[i] = state_log_weight(s, w);
        const auto fi = space.index_of(encode64(flip(s)));
        if (!fi)
            throw MissingFlipImageError("flip image escaped the state space");
        flip_index[i] = *fi;
    }
    double worst = 0;
    for (int i = 0; i < space.size(); ++i) {
        for (const auto& [j, rate] : q.off[i]) {
            const double reverse = q.rate(flip_index[j], flip_index[i]);
            if (!(reverse > 0))
                return std::numeric_limits<double>::infinity();
            // compare w(s1) p(s1->s2) with w(flip s2) p(flip s2 -> flip s1)
            const double lhs = log_weight[i] + std::log(rate);
            const double rhs = log_weight[flip_index[j]] + std::log(reverse);
            worst = std::max(worst, std::abs(lhs - rhs));
        }
    }
    return worst;
}

double check_flip_balance(const StateSpace& space, const WeightVector& w) {
    return check_flip_balance(space, w, RateTable::from_weights(w));
}

PairCountReport check_pair_identities(const State& s) {
    const auto table = count_hpair_table(s);
    using T = VertexType;
    PairCountReport r;
    r.common_difference =
        pair_count(table, T::CornerWN, T::Empty) - pair_count(table, T::Empty, T::CornerSE);
    r.differences = {
        r.common_difference,
        pair_count(table, T::Vert, T::CornerSE) - pair_count(table, T::CornerWN, T::Vert),
        pair_count(table, T::Empty, T::Vert) - pair_count(table, T::Vert, T::Empty),
        pair_count(table, T::CornerSE, T::Horiz) - pair_count(table, T::Horiz, T::CornerWN),
        pair_count(table, T::Cross, T::CornerWN) - pair_count(table, T::CornerSE, T::Cross),
        pair_count(table, T::Horiz, T::Cross) - pair_count(table, T::Cross, T::Horiz),
    };
    r.block_balance =
        pair_count(table, T::CornerWN, T::Empty) + pair_count(table, T::Horiz, T::CornerWN) ==
        pair_count(table, T::Empty, T::CornerSE) + pair_count(table, T::CornerSE, T::Horiz);
    r.pass = r.block_balance &&
             std::all_of(r.differences.begin(), r.differences.end(),
                         [&](long d) { return d == r.common_difference; });
    return r;
}

double stationarity_residual(const std::vector<double>& pi,
                             const GeneratorMatrix& q) {
    std::vector<Kahan> column(q.n);
    for (int i = 0; i < q.n; ++i) {
        column[i].add(pi[i] * q.diag[i]);
        for (const auto& [j, rate] : q.off[i])
            column[j].add(pi[i] * rate);
    }
    double worst = 0;
    for (const Kahan& acc : column)
        worst = std::max(worst, std::abs(acc.value()));
    return worst;
}

StationarityReport check_stationarity(const StateSpace& space,
                                      const WeightVector& w,
                                      GeneratorMode mode) {
    if (mode != GeneratorMode::Full &&
        std::abs(free_fermion_defect(w)) > kDefectTol)
        throw DefectNonzeroError(
            "one-sided stationarity requires the free-fermion defect to vanish");
    const GeneratorMatrix q = build_generator(space, w, mode);
    const std::vector<double> pi = gibbs_distribution(space, w);
    StationarityReport report;
    report.space_size = space.size();
    report.residual_inf = stationarity_residual(pi, q);
    report.tolerance = kStationarityTol;
    report.pass = report.residual_inf <= report.tolerance;
    return report;
}

StationarityReport check_stationarity(int cols, int rows, int k1, int k2,
                                      const WeightVector& w,
                                      GeneratorMode mode) {
    return check_stationarity(enumerate_states(cols, rows, k1, k2), w, mode);
}

double check_outflow_decomposition(const State& s, const WeightVector& w) {
    const RateTable rates = RateTable::from_weights(w);
    const State flipped = flip(s);

    auto directional_outflow = [&](const State& state, JumpDir dir) {
        double total = 0;
        for (const auto& [move, rate] : enumerate_moves(state, w))
            if (move.trigger.dir == dir)
                total += rate;
        return total;
    };

    const double right_s = directional_outflow(s, JumpDir::Right);
    const double right_f = directional_outflow(flipped, JumpDir::Right);
    const double left_s = directional_outflow(s, JumpDir::Left);
    const double left_f = directional_outflow(flipped, JumpDir::Left);

    const double a =
        static_cast<double>(check_pair_identities(s).common_difference);
    const double right_bracket =
        a * (rates[JumpKind::R1] - rates[JumpKind::R2] + rates[JumpKind::R4]);
    const double left_bracket =
        a * (-rates[JumpKind::L1] + rates[JumpKind::L3] - rates[JumpKind::L4]);

    const double scale = std::max(1.0, right_s + left_s);
    double worst = std::abs((right_s - right_f) - right_bracket);
    worst = std::max(worst, std::abs((left_s - left_f) - left_bracket));
    worst = std::max(
        worst, std::abs((right_s + left_s) - (right_f + left_f)));
    return worst / scale;
}

GaugeInvarianceReport check_gauge_invariance(const StateSpace& space,
                                             const WeightVector& w,
                                             std::span<const double> constants) {
    const RateTable base_rates = RateTable::from_weights(w);
    const std::vector<double> base_pi = gibbs_distribution(space, w);

    GaugeInvarianceReport report;
    auto compare = [&](const WeightVector& gauged) {
        const RateTable rates = RateTable::from_weights(gauged);
        for (int k = 0; k < kNumJumpKinds; ++k) {
            const double rel = std::abs(rates.rates[k] - base_rates.rates[k]) /
                               base_rates.rates[k];
            report.max_rate_deviation = std::max(report.max_rate_deviation, rel);
        }
        const std::vector<double> pi = gibbs_distribution(space, gauged);
        double tv = 0;
        for (int i = 0; i < space.size(); ++i)
            tv += std::abs(pi[i] - base_pi[i]);
        report.max_tv_distance = std::max(report.max_tv_distance, tv / 2);
    };

    for (int kind = 1; kind <= 4; ++kind)
        for (double c : constants)
            compare(gauge_apply(w, kind, c));
    for (double c : constants) // one composite transform
        compare(gauge_apply(gauge_apply(gauge_apply(w, 1, c), 2, 1 / c), 4, c));

    report.pass =
        report.max_rate_deviation <= kRateTol && report.max_tv_distance <= kRateTol;
    return report;
}

} // namespace sixv
