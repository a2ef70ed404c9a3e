#include "sixv/lattice.hpp"

#include <cassert>

#include <nlohmann/json.hpp>

namespace sixv {

const char* to_string(VertexType t) {
    switch (t) {
    case VertexType::Empty: return "empty";
    case VertexType::Cross: return "cross";
    case VertexType::Horiz: return "horiz";
    case VertexType::Vert: return "vert";
    case VertexType::CornerWN: return "corner_wn";
    case VertexType::CornerSE: return "corner_se";
    }
    return "?";
}

VertexType dual_type(VertexType t) {
    switch (t) {
    case VertexType::Empty: return VertexType::Cross;
    case VertexType::Cross: return VertexType::Empty;
    case VertexType::Horiz: return VertexType::Vert;
    case VertexType::Vert: return VertexType::Horiz;
    case VertexType::CornerWN: return VertexType::CornerSE;
    case VertexType::CornerSE: return VertexType::CornerWN;
    }
    return t;
}

VertexType flip_type(VertexType t) {
    switch (t) {
    case VertexType::CornerWN: return VertexType::CornerSE;
    case VertexType::CornerSE: return VertexType::CornerWN;
    default: return t;
    }
}

std::optional<VertexType> classify_quadruple(bool left_in, bool bottom_in,
                                             bool right_out, bool top_out) {
    const int code = int(left_in) | int(bottom_in) << 1 | int(right_out) << 2 |
                     int(top_out) << 3;
    switch (code) {
    case 0b0000: return VertexType::Empty;
    case 0b1111: return VertexType::Cross;
    case 0b0101: return VertexType::Horiz;    // left-in, right-out
    case 0b1010: return VertexType::Vert;     // bottom-in, top-out
    case 0b1001: return VertexType::CornerWN; // left-in, top-out
    case 0b0110: return VertexType::CornerSE; // bottom-in, right-out
    default: return std::nullopt;
    }
}

VertexType vertex_type(const State& s, int x, int y) {
    const TorusGeometry& g = s.geom();
    const auto t = classify_quadruple(s.h(g.xminus(x), y), s.v(x, g.yminus(y)),
                                      s.h(x, y), s.v(x, y));
    if (!t)
        throw NonConservingError(x, y);
    return *t;
}

bool conserving(const State& s) {
    const TorusGeometry& g = s.geom();
    for (int x = 0; x < g.cols; ++x)
        for (int y = 0; y < g.rows; ++y)
            if (!classify_quadruple(s.h(g.xminus(x), y), s.v(x, g.yminus(y)),
                                    s.h(x, y), s.v(x, y)))
                return false;
    return true;
}

FluxPair validate(const State& s) {
    const TorusGeometry& g = s.geom();
    for (int x = 0; x < g.cols; ++x)
        for (int y = 0; y < g.rows; ++y)
            vertex_type(s, x, y); // throws on the first offender

    int k1 = 0;
    for (int y = 0; y < g.rows; ++y)
        k1 += s.h(0, y);
    int k2 = 0;
    for (int x = 0; x < g.cols; ++x)
        k2 += s.v(x, 0);

    // Uniformity across cuts follows from conservation; keep the scan as a
    // structural assertion.
    for (int x = 1; x < g.cols; ++x) {
        int cut = 0;
        for (int y = 0; y < g.rows; ++y)
            cut += s.h(x, y);
        assert(cut == k1);
        (void)cut;
    }
    for (int y = 1; y < g.rows; ++y) {
        int cut = 0;
        for (int x = 0; x < g.cols; ++x)
            cut += s.v(x, y);
        assert(cut == k2);
        (void)cut;
    }
    return {k1, k2};
}

State canonical_state(int cols, int rows, int k1, int k2) {
    if (cols < 1 || rows < 1)
        throw OutOfRangeError("torus dimensions must be positive");
    if (k1 < 0 || k1 > rows)
        throw OutOfRangeError("k1 must lie in [0, rows]");
    if (k2 < 0 || k2 > cols)
        throw OutOfRangeError("k2 must lie in [0, cols]");
    State s(TorusGeometry{cols, rows});
    for (int x = 0; x < cols; ++x)
        for (int y = 0; y < k1; ++y)
            s.set_h(x, y, true);
    for (int x = 0; x < k2; ++x)
        for (int y = 0; y < rows; ++y)
            s.set_v(x, y, true);
    return s;
}

State flip(const State& s) {
    const TorusGeometry& g = s.geom();
    auto modm = [&](int a) { return ((a % g.cols) + g.cols) % g.cols; };
    auto modn = [&](int b) { return ((b % g.rows) + g.rows) % g.rows; };
    State out(g);
    for (int x = 0; x < g.cols; ++x)
        for (int y = 0; y < g.rows; ++y) {
            out.set_h(x, y, s.h(modm(-1 - x), modn(-y)));
            out.set_v(x, y, s.v(modm(-x), modn(-1 - y)));
        }
    return out;
}

State dual(const State& s) {
    const TorusGeometry& g = s.geom();
    State out(g);
    for (int x = 0; x < g.cols; ++x)
        for (int y = 0; y < g.rows; ++y) {
            out.set_h(x, y, !s.h(x, y));
            out.set_v(x, y, !s.v(x, y));
        }
    return out;
}

std::array<long, kNumVertexTypes> count_types(const State& s) {
    std::array<long, kNumVertexTypes> counts{};
    const TorusGeometry& g = s.geom();
    for (int x = 0; x < g.cols; ++x)
        for (int y = 0; y < g.rows; ++y)
            ++counts[static_cast<int>(vertex_type(s, x, y))];
    return counts;
}

std::array<std::array<long, kNumVertexTypes>, kNumVertexTypes>
count_hpair_table(const State& s) {
    std::array<std::array<long, kNumVertexTypes>, kNumVertexTypes> table{};
    const TorusGeometry& g = s.geom();
    std::vector<VertexType> column(g.rows), next(g.rows);
    for (int y = 0; y < g.rows; ++y)
        column[y] = vertex_type(s, 0, y);
    std::vector<VertexType> first = column;
    for (int x = 0; x < g.cols; ++x) {
        if (x + 1 < g.cols) {
            for (int y = 0; y < g.rows; ++y)
                next[y] = vertex_type(s, x + 1, y);
        } else {
            next = first;
        }
        for (int y = 0; y < g.rows; ++y)
            ++table[static_cast<int>(column[y])][static_cast<int>(next[y])];
        column.swap(next);
    }
    return table;
}

long count_hpairs(const State& s, VertexType left, VertexType right) {
    const TorusGeometry& g = s.geom();
    long n = 0;
    for (int x = 0; x < g.cols; ++x)
        for (int y = 0; y < g.rows; ++y)
            n += vertex_type(s, x, y) == left &&
                 vertex_type(s, g.xplus(x), y) == right;
    return n;
}

std::uint64_t encode64(const State& s) {
    const TorusGeometry& g = s.geom();
    if (2 * g.sites() > 64)
        throw TooLargeError("state does not fit the 64-bit encoding");
    std::uint64_t bits = 0;
    const int hn = g.sites();
    for (int x = 0; x < g.cols; ++x)
        for (int y = 0; y < g.rows; ++y) {
            const int i = x * g.rows + y;
            if (s.h(x, y))
                bits |= 1ULL << i;
            if (s.v(x, y))
                bits |= 1ULL << (hn + i);
        }
    return bits;
}

State decode64(TorusGeometry geom, std::uint64_t bits) {
    if (2 * geom.sites() > 64)
        throw TooLargeError("geometry does not fit the 64-bit encoding");
    State s(geom);
    const int hn = geom.sites();
    for (int x = 0; x < geom.cols; ++x)
        for (int y = 0; y < geom.rows; ++y) {
            const int i = x * geom.rows + y;
            s.set_h(x, y, (bits >> i) & 1u);
            s.set_v(x, y, (bits >> (hn + i)) & 1u);
        }
    return s;
}

std::string codec_encode(const State& s) {
    const TorusGeometry& g = s.geom();
    nlohmann::ordered_json j;
    j["M"] = g.cols;
    j["N"] = g.rows;
    auto layer = [&](bool horizontal) {
        nlohmann::ordered_json rows = nlohmann::ordered_json::array();
        for (int x = 0; x < g.cols; ++x) {
            nlohmann::ordered_json col = nlohmann::ordered_json::array();
            for (int y = 0; y < g.rows; ++y)
                col.push_back(horizontal ? int(s.h(x, y)) : int(s.v(x, y)));
            rows.push_back(std::move(col));
        }
        return rows;
    };
    j["H"] = layer(true);
    j["V"] = layer(false);
    return j.dump();
}

State codec_decode(const std::string& text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        throw ParseError(std::string("invalid state JSON: ") + e.what());
    }
    if (!j.is_object() || !j.contains("M") || !j.contains("N") ||
        !j.contains("H") || !j.contains("V"))
        throw ParseError("state JSON must carry fields M, N, H, V");
    if (!j["M"].is_number_integer() || !j["N"].is_number_integer())
        throw ParseError("fields M and N must be integers");
    const int cols = j["M"].get<int>();
    const int rows = j["N"].get<int>();
    if (cols < 1 || rows < 1)
        throw ParseError("fields M and N must be positive");

    State s(TorusGeometry{cols, rows});
    auto read_layer = [&](const char* name, bool horizontal) {
        const auto& layer = j[name];
        if (!layer.is_array() || static_cast<int>(layer.size()) != cols)
            throw ParseError(std::string("field ") + name + " must hold M columns");
        for (int x = 0; x < cols; ++x) {
            const auto& col = layer[x];
            if (!col.is_array() || static_cast<int>(col.size()) != rows)
                throw ParseError(std::string("field ") + name + "[" +
                                 std::to_string(x) + "] must hold N entries");
            for (int y = 0; y < rows; ++y) {
                const auto& cell = col[y];
                if (!cell.is_number_integer() ||
                    (cell.get<int>() != 0 && cell.get<int>() != 1))
                    throw ParseError(std::string("field ") + name + "[" +
                                     std::to_string(x) + "][" + std::to_string(y) +
                                     "] must be 0 or 1");
                if (horizontal)
                    s.set_h(x, y, cell.get<int>() == 1);
                else
                    s.set_v(x, y, cell.get<int>() == 1);
            }
        }
    };
    read_layer("H", true);
    read_layer("V", false);
    validate(s);
    return s;
}

} // namespace sixv
