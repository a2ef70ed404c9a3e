#pragma once

#include <array>
#include <span>

#include "sixv/enumeration.hpp"

namespace sixv {

inline constexpr double kStationarityTol = 1e-10;
inline constexpr double kRateTol = 1e-12;
inline constexpr double kDefectTol = 1e-12;

/// Six h-adjacent pair-count differences that share one value on every valid
/// state, plus the block-boundary count identity. All integer-exact.
struct PairCountReport {
    long common_difference = 0; // N(CornerWN,Empty) - N(Empty,CornerSE)
    std::array<long, 6> differences{};
    bool block_balance = false; // N(WN,E)+N(H,WN) == N(E,SE)+N(SE,H)
    bool pass = false;
};

struct StationarityReport {
    int space_size = 0;
    double residual_inf = 0;
    double tolerance = kStationarityTol;
    bool pass = false;
};

/// Weight is invariant under the flip: compares the integer type censuses of
/// every state against its flip image (corners swapped).
bool check_flip_weight(const StateSpace& space);

/// For every positive generator edge s1 -> s2: the flipped reverse edge is
/// positive and w(s1) p(s1->s2) = w(flip s2) p(flip s2 -> flip s1).
/// Returns the largest relative (log-space) discrepancy.
double check_flip_balance(const StateSpace& space, const WeightVector& w);
double check_flip_balance(const StateSpace& space, const WeightVector& w,
                          const RateTable& rates);

PairCountReport check_pair_identities(const State& s);

/// Max-norm residual of pi * Q against zero, pi the exact Gibbs vector.
/// RightOnly/LeftOnly modes require a free-fermion weight vector
/// (DefectNonzeroError otherwise); use stationarity_residual to measure the
/// violation of a gated configuration.
StationarityReport check_stationarity(const StateSpace& space,
                                      const WeightVector& w,
                                      GeneratorMode mode = GeneratorMode::Full);
StationarityReport check_stationarity(int cols, int rows, int k1, int k2,
                                      const WeightVector& w,
                                      GeneratorMode mode = GeneratorMode::Full);

/// Ungated core of the stationarity check: max_j |sum_i pi(i) Q(i,j)| with
/// compensated column sums.
double stationarity_residual(const std::vector<double>& pi,
                             const GeneratorMatrix& q);

/// Verifies that outflow(s) - outflow(flip s) decomposes per direction into
/// the common pair-count difference times the alternating rate brackets
/// (and that the total vanishes). Returns the largest residual, relative to
/// max(1, outflow).
double check_outflow_decomposition(const State& s, const WeightVector& w);

struct GaugeInvarianceReport {
    double max_rate_deviation = 0; // relative, over all kinds and transforms
    double max_tv_distance = 0;    // Gibbs distributions before/after
    bool pass = false;
};

/// All eight rates and the Gibbs distribution are unchanged by each of the
/// four transforms (and one composite) for every constant in the grid.
GaugeInvarianceReport check_gauge_invariance(const StateSpace& space,
                                             const WeightVector& w,
                                             std::span<const double> constants);

} // namespace sixv
