#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "sixv/errors.hpp"

namespace sixv {

/// Discrete torus of cols x rows vertices. x grows rightward, y upward,
/// both circular.
struct TorusGeometry {
    int cols = 0; // M
    int rows = 0; // N

    int sites() const { return cols * rows; }
    int xplus(int x) const { return x + 1 == cols ? 0 : x + 1; }
    int xminus(int x) const { return x == 0 ? cols - 1 : x - 1; }
    int yplus(int y) const { return y + 1 == rows ? 0 : y + 1; }
    int yminus(int y) const { return y == 0 ? rows - 1 : y - 1; }

    bool operator==(const TorusGeometry&) const = default;
};

/// The six conserving vertex patterns, named by their incident arrows.
/// CornerWN = west-in/north-out, CornerSE = south-in/east-out.
enum class VertexType : std::uint8_t {
    Empty = 0,
    Cross = 1,
    Horiz = 2,
    Vert = 3,
    CornerWN = 4,
    CornerSE = 5,
};

inline constexpr int kNumVertexTypes = 6;

const char* to_string(VertexType t);

/// Complement of the incident-arrow quadruple: Empty<->Cross, Horiz<->Vert,
/// CornerWN<->CornerSE.
VertexType dual_type(VertexType t);

/// Image of a type under 180-degree rotation plus arrow reversal:
/// corners swap, everything else is fixed.
VertexType flip_type(VertexType t);

/// Maps an incident quadruple (left-in, bottom-in, right-out, top-out) to
/// its vertex type, or nullopt if in-degree != out-degree. Exactly 6 of the
/// 16 quadruples classify.
std::optional<VertexType> classify_quadruple(bool left_in, bool bottom_in,
                                             bool right_out, bool top_out);

/// Horizontal flux k1 (arrows through every vertical cut, in [0, rows]) and
/// vertical flux k2 (arrows through every horizontal cut, in [0, cols]).
struct FluxPair {
    int k1 = 0;
    int k2 = 0;
    auto operator<=>(const FluxPair&) const = default;
};

/// Arrow configuration on the torus: h(x,y) is the edge (x,y)->(x+1,y),
/// v(x,y) is the edge (x,y)->(x,y+1). Bit-packed per column; plain value
/// semantics, cheap to copy. Mutation does not re-validate; `validate`
/// is the gate for raw content.
class State {
  public:
    State() = default;
    explicit State(TorusGeometry geom)
        : geom_(geom), wpc_((geom.rows + 63) / 64),
          hbits_(static_cast<std::size_t>(geom.cols) * wpc_, 0),
          vbits_(static_cast<std::size_t>(geom.cols) * wpc_, 0) {}

    const TorusGeometry& geom() const { return geom_; }

    bool h(int x, int y) const { return bit(hbits_, x, y); }
    bool v(int x, int y) const { return bit(vbits_, x, y); }
    void set_h(int x, int y, bool on) { put(hbits_, x, y, on); }
    void set_v(int x, int y, bool on) { put(vbits_, x, y, on); }

    bool operator==(const State&) const = default;

  private:
    bool bit(const std::vector<std::uint64_t>& layer, int x, int y) const {
        return (layer[static_cast<std::size_t>(x) * wpc_ + (y >> 6)] >> (y & 63)) & 1u;
    }
    void put(std::vector<std::uint64_t>& layer, int x, int y, bool on) {
        std::uint64_t& word = layer[static_cast<std::size_t>(x) * wpc_ + (y >> 6)];
        const std::uint64_t mask = 1ULL << (y & 63);
        word = on ? (word | mask) : (word & ~mask);
    }

    TorusGeometry geom_;
    int wpc_ = 0;
    std::vector<std::uint64_t> hbits_;
    std::vector<std::uint64_t> vbits_;
};

/// Type of vertex (x,y); throws NonConservingError on unvalidated raw input.
VertexType vertex_type(const State& s, int x, int y);

/// Checks conservation at every vertex (lexicographic scan, first offender
/// reported) and returns the flux pair.
FluxPair validate(const State& s);

/// True iff every vertex conserves; never throws.
bool conserving(const State& s);

/// Deterministic member of the fixed-flux class: rows 0..k1-1 fully
/// horizontal, columns 0..k2-1 fully vertical.
State canonical_state(int cols, int rows, int k1, int k2);

/// 180-degree rotation of the torus combined with arrow reversal.
/// Involution; preserves flux; swaps the two corner types.
State flip(const State& s);

/// Complement of the edge set. Involution; flux (k1,k2) -> (rows-k1, cols-k2).
State dual(const State& s);

/// Vertex-type census, indexed by VertexType.
std::array<long, kNumVertexTypes> count_types(const State& s);

/// Counts of h-adjacent ordered pairs (type at (x,y), type at (x+1,y)) over
/// all cols*rows positions, wrap-around included.
std::array<std::array<long, kNumVertexTypes>, kNumVertexTypes>
count_hpair_table(const State& s);

long count_hpairs(const State& s, VertexType left, VertexType right);

/// Packs the configuration into 64 bits: H bits at x*rows+y, then V bits at
/// cols*rows + x*rows + y. Requires 2*cols*rows <= 64 (TooLargeError).
std::uint64_t encode64(const State& s);
State decode64(TorusGeometry geom, std::uint64_t bits);

/// JSON text codec; see README for the schema. Decoding always validates.
std::string codec_encode(const State& s);
State codec_decode(const std::string& text);

} // namespace sixv
