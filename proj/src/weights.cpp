#include "sixv/weights.hpp"

#include <cmath>

namespace sixv {

WeightVector WeightVector::checked(double empty, double cross, double corner_se,
                                   double corner_wn, double vert, double horiz) {
    WeightVector w{empty, cross, corner_se, corner_wn, vert, horiz};
    if (!w.positive())
        throw NonPositiveWeightError("all six vertex weights must be positive");
    return w;
}

WeightVector WeightVector::checked(const std::array<double, 6>& f) {
    return checked(f[0], f[1], f[2], f[3], f[4], f[5]);
}

double WeightVector::of(VertexType t) const {
    switch (t) {
    case VertexType::Empty: return empty;
    case VertexType::Cross: return cross;
    case VertexType::Horiz: return horiz;
    case VertexType::Vert: return vert;
    case VertexType::CornerWN: return corner_wn;
    case VertexType::CornerSE: return corner_se;
    }
    return 0;
}

bool WeightVector::positive() const {
    for (double f : as_array())
        if (!(f > 0))
            return false;
    return true;
}

double state_log_weight(const State& s, const WeightVector& w) {
    const auto counts = count_types(s);
    double lw = 0;
    for (int t = 0; t < kNumVertexTypes; ++t)
        lw += static_cast<double>(counts[t]) *
              std::log(w.of(static_cast<VertexType>(t)));
    return lw;
}

WeightVector gauge_apply(const WeightVector& w, int kind, double c) {
    if (!(c > 0))
        throw OutOfRangeError("gauge constant must be positive");
    WeightVector out = w;
    switch (kind) {
    case 1:
        out.cross *= c;
        out.corner_wn *= c;
        out.horiz *= c;
        break;
    case 2:
        out.cross *= c;
        out.corner_wn *= c;
        out.vert *= c;
        break;
    case 3:
        out.empty *= c;
        out.cross *= c;
        out.corner_se *= c;
        out.corner_wn *= c;
        out.vert *= c;
        out.horiz *= c;
        break;
    case 4:
        out.corner_wn *= c;
        out.corner_se /= c;
        break;
    default:
        throw OutOfRangeError("gauge kind must be 1..4");
    }
    return out;
}

WeightVector weights_from_uq(double u, double q, bool unchecked) {
    if (!(q > 0))
        throw OutOfRangeError("q must be positive");
    const double rq = std::sqrt(q);
    const double d = 1.0 - u / rq;
    if (d == 0.0)
        throw DegenerateDenominatorError("1 - u/sqrt(q) vanishes");
    WeightVector w;
    w.empty = 1.0;
    w.cross = (u - rq) / d;
    w.horiz = (u - 1.0 / rq) / d;
    w.vert = (1.0 - rq * u) / d;
    w.corner_wn = (1.0 - q) / d;
    w.corner_se = (1.0 - 1.0 / q) * u / d;
    if (!unchecked && !w.positive())
        throw NonPositiveWeightError(
            "(u, q) yields non-positive vertex weights; use unchecked mode to inspect");
    return w;
}

double free_fermion_defect(const WeightVector& w) {
    return w.corner_wn * w.corner_se - w.cross * w.empty - w.horiz * w.vert;
}

} // namespace sixv
