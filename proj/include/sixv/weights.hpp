#pragma once

#include <array>

#include "sixv/lattice.hpp"

namespace sixv {

/// Six vertex weights in listing order: empty, cross, corner_se, corner_wn,
/// vert, horiz. Aggregate construction is unchecked (used by weights_from_uq
/// inspection mode); go through `checked` for probabilistic use.
struct WeightVector {
    double empty = 1;
    double cross = 1;
    double corner_se = 1;
    double corner_wn = 1;
    double vert = 1;
    double horiz = 1;

    static WeightVector ones() { return {}; }

    /// Throws NonPositiveWeightError unless all six are > 0.
    static WeightVector checked(double empty, double cross, double corner_se,
                                double corner_wn, double vert, double horiz);
    static WeightVector checked(const std::array<double, 6>& fields);

    double of(VertexType t) const;
    std::array<double, 6> as_array() const {
        return {empty, cross, corner_se, corner_wn, vert, horiz};
    }
    bool positive() const;

    bool operator==(const WeightVector&) const = default;
};

/// log w(s) = sum over types of N_s(type) * log(weight).
double state_log_weight(const State& s, const WeightVector& w);

/// The four weight transforms that leave the fixed-flux Gibbs measure (and
/// every jump rate) unchanged:
///   1: scale {cross, corner_wn, horiz} by c
///   2: scale {cross, corner_wn, vert} by c
///   3: scale all six by c
///   4: scale corner_wn by c and corner_se by 1/c
WeightVector gauge_apply(const WeightVector& w, int kind, double c);

/// Two-parameter (u, q) weight family. Checked mode requires all six values
/// positive; unchecked mode returns the raw signed values for inspection
/// (query .positive()). Throws DegenerateDenominatorError when 1 - u/sqrt(q)
/// vanishes.
WeightVector weights_from_uq(double u, double q, bool unchecked = false);

/// corner_wn*corner_se - cross*empty - horiz*vert; zero exactly at the
/// free-fermion point, where one-sided dynamics is separately stationary.
double free_fermion_defect(const WeightVector& w);

} // namespace sixv
