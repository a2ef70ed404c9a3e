#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <set>

#include "sixv/lattice.hpp"
#include "test_util.hpp"

using namespace sixv;

TEST_CASE("exactly six of the sixteen quadruples conserve") {
    int conserving_count = 0;
    std::set<VertexType> seen;
    for (int code = 0; code < 16; ++code) {
        const auto t = classify_quadruple(code & 1, code & 2, code & 4, code & 8);
        if (t) {
            ++conserving_count;
            seen.insert(*t);
        }
    }
    CHECK(conserving_count == 6);
    CHECK(seen.size() == 6);

    CHECK(classify_quadruple(0, 0, 0, 0) == VertexType::Empty);
    CHECK(classify_quadruple(1, 1, 1, 1) == VertexType::Cross);
    CHECK(classify_quadruple(1, 0, 1, 0) == VertexType::Horiz);
    CHECK(classify_quadruple(0, 1, 0, 1) == VertexType::Vert);
    CHECK(classify_quadruple(1, 0, 0, 1) == VertexType::CornerWN);
    CHECK(classify_quadruple(0, 1, 1, 0) == VertexType::CornerSE);
    CHECK(!classify_quadruple(1, 1, 0, 0));
}

TEST_CASE("vertex_type classifies the incident quadruple") {
    const State empty(TorusGeometry{3, 3});
    CHECK(vertex_type(empty, 0, 0) == VertexType::Empty);

    // lone west-in/north-out corner embedded in a valid 2x2 state
    const State s = canonical_state(2, 2, 1, 1);
    CHECK(vertex_type(s, 0, 0) == VertexType::Cross);
    CHECK(vertex_type(s, 1, 0) == VertexType::Horiz);
    CHECK(vertex_type(s, 0, 1) == VertexType::Vert);
    CHECK(vertex_type(s, 1, 1) == VertexType::Empty);

    State raw(TorusGeometry{2, 2});
    raw.set_h(0, 0, true); // 2 out at (0,0)? no: 1 out -- the tail violates
    CHECK_THROWS_AS(vertex_type(raw, 0, 0), NonConservingError);
}

TEST_CASE("validate returns the flux pair and reports the first offender") {
    CHECK(validate(State(TorusGeometry{4, 3})) == FluxPair{0, 0});
    CHECK(validate(canonical_state(2, 2, 1, 1)) == FluxPair{1, 1});
    CHECK(validate(canonical_state(3, 3, 3, 0)) == FluxPair{3, 0});

    // a single horizontal arrow on the wrap edge: its right endpoint (0,0)
    // is the lexicographically first non-conserving vertex
    State raw(TorusGeometry{3, 2});
    raw.set_h(2, 0, true);
    try {
        validate(raw);
        FAIL("expected NonConservingError");
    } catch (const NonConservingError& e) {
        CHECK(e.x == 0);
        CHECK(e.y == 0);
    }
}

TEST_CASE("canonical_state fills rows then columns") {
    CHECK(canonical_state(2, 2, 0, 0) == State(TorusGeometry{2, 2}));

    const State s = canonical_state(3, 3, 3, 0);
    for (int x = 0; x < 3; ++x)
        for (int y = 0; y < 3; ++y)
            CHECK(vertex_type(s, x, y) == VertexType::Horiz);

    CHECK_THROWS_AS(canonical_state(2, 2, 3, 0), OutOfRangeError);
    CHECK_THROWS_AS(canonical_state(2, 2, 0, -1), OutOfRangeError);
}

TEST_CASE("flip is an involution preserving flux and swapping corners") {
    const State empty(TorusGeometry{2, 3});
    CHECK(flip(empty) == empty);

    const auto states = test::sample_states(6, 5, 2, 2, 40, 11);
    for (const State& s : states) {
        const State f = flip(s);
        CHECK(flip(f) == s);
        CHECK(validate(f) == validate(s));
        const auto counts = count_types(s);
        const auto fcounts = count_types(f);
        CHECK(fcounts[int(VertexType::CornerWN)] == counts[int(VertexType::CornerSE)]);
        CHECK(fcounts[int(VertexType::CornerSE)] == counts[int(VertexType::CornerWN)]);
        CHECK(fcounts[int(VertexType::Empty)] == counts[int(VertexType::Empty)]);
        CHECK(fcounts[int(VertexType::Cross)] == counts[int(VertexType::Cross)]);
        CHECK(fcounts[int(VertexType::Horiz)] == counts[int(VertexType::Horiz)]);
        CHECK(fcounts[int(VertexType::Vert)] == counts[int(VertexType::Vert)]);
    }
}

TEST_CASE("dual complements edges, types and flux") {
    const TorusGeometry g{4, 3};
    const State empty(g);
    const State full = dual(empty);
    CHECK(validate(full) == FluxPair{3, 4});
    for (int x = 0; x < g.cols; ++x)
        for (int y = 0; y < g.rows; ++y)
            CHECK(vertex_type(full, x, y) == VertexType::Cross);

    const auto states = test::sample_states(6, 5, 2, 2, 25, 7);
    for (const State& s : states) {
        const State d = dual(s);
        CHECK(dual(d) == s);
        CHECK(validate(d) == FluxPair{5 - 2, 6 - 2});
        for (int x = 0; x < 6; ++x)
            for (int y = 0; y < 5; ++y)
                CHECK(vertex_type(d, x, y) == dual_type(vertex_type(s, x, y)));
    }
}

TEST_CASE("type and pair censuses") {
    const State s = canonical_state(2, 2, 1, 1);
    const auto counts = count_types(s);
    CHECK(counts[int(VertexType::Cross)] == 1);
    CHECK(counts[int(VertexType::Horiz)] == 1);
    CHECK(counts[int(VertexType::Vert)] == 1);
    CHECK(counts[int(VertexType::Empty)] == 1);

    const State empty(TorusGeometry{5, 3});
    CHECK(count_hpairs(empty, VertexType::Empty, VertexType::Empty) == 15);

    // corner counts agree on every sampled state
    for (const State& t : test::sample_states(6, 5, 2, 2, 30, 3)) {
        const auto c = count_types(t);
        CHECK(c[int(VertexType::CornerWN)] == c[int(VertexType::CornerSE)]);
        long total = 0;
        for (long n : c)
            total += n;
        CHECK(total == 30);
        const auto table = count_hpair_table(t);
        long pair_total = 0;
        for (const auto& row : table)
            for (long n : row)
                pair_total += n;
        CHECK(pair_total == 30);
        CHECK(table[int(VertexType::Empty)][int(VertexType::Empty)] ==
              count_hpairs(t, VertexType::Empty, VertexType::Empty));
    }
}

TEST_CASE("flux cuts are uniform on simulated states") {
    const auto states = test::sample_states(6, 5, 2, 2, 1000, 99, 1);
    REQUIRE(states.size() == 1000);
    for (const State& s : states) {
        for (int x = 0; x < 6; ++x) {
            int cut = 0;
            for (int y = 0; y < 5; ++y)
                cut += s.h(x, y);
            CHECK(cut == 2);
        }
        for (int y = 0; y < 5; ++y) {
            int cut = 0;
            for (int x = 0; x < 6; ++x)
                cut += s.v(x, y);
            CHECK(cut == 2);
        }
    }
}

TEST_CASE("64-bit encoding round-trips") {
    const auto states = test::sample_states(4, 3, 1, 1, 20, 5);
    for (const State& s : states)
        CHECK(decode64(s.geom(), encode64(s)) == s);
    CHECK_THROWS_AS(encode64(State(TorusGeometry{8, 8})), TooLargeError);
}

TEST_CASE("JSON codec round-trips and validates") {
    const std::string canonical_text =
        R"({"M":2,"N":2,"H":[[1,0],[1,0]],"V":[[1,1],[0,0]]})";
    const State s = codec_decode(canonical_text);
    CHECK(s == canonical_state(2, 2, 1, 1));
    CHECK(codec_encode(s) == canonical_text);

    const std::string all_zero =
        R"({"M":2,"N":2,"H":[[0,0],[0,0]],"V":[[0,0],[0,0]]})";
    CHECK(codec_decode(all_zero) == State(TorusGeometry{2, 2}));

    for (const State& t : test::sample_states(6, 5, 2, 2, 10, 21))
        CHECK(codec_decode(codec_encode(t)) == t);

    CHECK_THROWS_AS(codec_decode("{"), ParseError);
    CHECK_THROWS_AS(codec_decode(R"({"M":2,"N":2,"H":[[1,0],[1,0]]})"), ParseError);
    CHECK_THROWS_AS(codec_decode(R"({"M":2,"N":2,"H":[[2,0],[0,0]],"V":[[0,0],[0,0]]})"),
                    ParseError);
    // conservation violated: one lone arrow
    CHECK_THROWS_AS(codec_decode(R"({"M":2,"N":2,"H":[[1,0],[0,0]],"V":[[0,0],[0,0]]})"),
                    NonConservingError);
}
