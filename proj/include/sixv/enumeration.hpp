#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <optional>
#include <unordered_map>
#include <vector>

#include "sixv/dynamics.hpp"
#include "sixv/lattice.hpp"
#include "sixv/weights.hpp"

namespace sixv {

/// Enumerated fixed-flux state space, ordered by ascending 64-bit encoding.
class StateSpace {
  public:
    StateSpace() = default;
    StateSpace(TorusGeometry geom, FluxPair flux,
               std::vector<std::uint64_t> encodings);

    const TorusGeometry& geom() const { return geom_; }
    const FluxPair& flux() const { return flux_; }
    int size() const { return static_cast<int>(encodings_.size()); }
    std::uint64_t encoding(int i) const { return encodings_[i]; }
    State state(int i) const { return decode64(geom_, encodings_[i]); }
    std::optional<int> index_of(std::uint64_t encoding) const;

  private:
    TorusGeometry geom_;
    FluxPair flux_;
    std::vector<std::uint64_t> encodings_;
    std::unordered_map<std::uint64_t, int> index_;
};

/// Column-by-column DFS over vertical-edge columns with conservation
/// propagation and per-row sum pruning. Requires 2*cols*rows <= 64.
StateSpace enumerate_states(int cols, int rows, int k1, int k2);

/// Independent oracle: filters all 2^(2*cols*rows) edge subsets through the
/// conservation check and partitions by flux. Requires 2*cols*rows <= 18.
std::map<FluxPair, StateSpace> enumerate_bruteforce(int cols, int rows);

/// Exact Gibbs probabilities w(s)/Z over the space, via log-sum-exp.
std::vector<double> gibbs_distribution(const StateSpace& space,
                                       const WeightVector& w);

/// log of the partition function Z = sum of state weights.
double log_partition_function(const StateSpace& space, const WeightVector& w);

enum class GeneratorMode { Full, RightOnly, LeftOnly };

/// Sparse generator: off-diagonal rates per row (sorted by column, rates of
/// coinciding targets summed) and the negative row sums on the diagonal.
struct GeneratorMatrix {
    int n = 0;
    std::vector<std::vector<std::pair<int, double>>> off;
    std::vector<double> diag;

    double rate(int i, int j) const;
};

GeneratorMatrix build_generator(const StateSpace& space, const WeightVector& w,
                                GeneratorMode mode = GeneratorMode::Full);
GeneratorMatrix build_generator(const StateSpace& space, const RateTable& rates,
                                GeneratorMode mode = GeneratorMode::Full);

struct ConnectivityReport {
    int components = 0;
    bool strongly_connected = false;
    std::vector<int> component_sizes;
};

/// Strong connectivity of the positive-rate digraph. Measured, not asserted.
ConnectivityReport check_connectivity(const GeneratorMatrix& q);

/// Matrix Market coordinate text, 1-based indices, diagonal included.
void write_matrix_market(const GeneratorMatrix& q, std::ostream& out);

/// JSON list of the space's canonical encodings, in index order.
void write_state_index(const StateSpace& space, std::ostream& out);

} // namespace sixv
