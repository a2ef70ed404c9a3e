#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <sstream>

#include "sixv/enumeration.hpp"
#include "test_util.hpp"

using namespace sixv;

TEST_CASE("degenerate flux classes hold exactly one state") {
    CHECK(enumerate_states(4, 3, 0, 0).size() == 1);
    CHECK(enumerate_states(4, 3, 0, 0).state(0) == State(TorusGeometry{4, 3}));
    CHECK(enumerate_states(4, 3, 3, 0).size() == 1);
    CHECK(enumerate_states(2, 5, 5, 2).size() == 1);
    CHECK_THROWS_AS(enumerate_states(3, 3, 4, 0), OutOfRangeError);
    CHECK_THROWS_AS(enumerate_states(8, 8, 1, 1), TooLargeError);
    CHECK_THROWS_AS(enumerate_bruteforce(4, 3), TooLargeError);
}

TEST_CASE("depth-first enumeration equals the brute-force filter") {
    // the regression constant fixed from the 2^8 filter
    CHECK(enumerate_states(2, 2, 1, 1).size() == 6);

    for (auto [cols, rows] : {std::pair{2, 2}, {3, 2}, {3, 3}}) {
        const auto classes = enumerate_bruteforce(cols, rows);
        std::size_t total = 0;
        for (const auto& [flux, oracle] : classes) {
            const StateSpace dfs =
                enumerate_states(cols, rows, flux.k1, flux.k2);
            REQUIRE(dfs.size() == oracle.size());
            for (int i = 0; i < dfs.size(); ++i)
                CHECK(dfs.encoding(i) == oracle.encoding(i));
            total += oracle.size();
            CHECK(validate(oracle.state(0)) == flux);
        }
        // every valid subset shows up in exactly one flux class
        std::size_t valid = 0;
        const std::uint64_t limit = 1ULL << (2 * cols * rows);
        for (std::uint64_t bits = 0; bits < limit; ++bits)
            valid += conserving(decode64(TorusGeometry{cols, rows}, bits));
        CHECK(total == valid);
        CHECK(classes.at(FluxPair{0, 0}).size() == 1);
    }
}

TEST_CASE("every member of a space validates to the declared flux") {
    const StateSpace space = enumerate_states(3, 4, 1, 2);
    CHECK(space.size() == 60);
    for (int i = 0; i < space.size(); ++i)
        CHECK(validate(space.state(i)) == FluxPair{1, 2});
    CHECK(space.index_of(space.encoding(17)) == 17);
    CHECK(!space.index_of(~0ULL));
}

TEST_CASE("gibbs distribution normalizes and respects symmetry") {
    const StateSpace space = enumerate_states(3, 3, 1, 1);
    const auto uniform = gibbs_distribution(space, WeightVector::ones());
    for (double p : uniform)
        CHECK(p == doctest::Approx(1.0 / space.size()).epsilon(1e-14));

    const WeightVector w = WeightVector::checked(1, 2, 3, 4, 5, 6);
    const auto pi = gibbs_distribution(space, w);
    double sum = 0;
    for (double p : pi)
        sum += p;
    CHECK(sum == doctest::Approx(1.0).epsilon(1e-14));

    // invariant under every gauge transform
    for (int kind = 1; kind <= 4; ++kind) {
        const auto gauged = gibbs_distribution(space, gauge_apply(w, kind, 3.7));
        for (int i = 0; i < space.size(); ++i)
            CHECK(gauged[i] == doctest::Approx(pi[i]).epsilon(1e-12));
    }

    // equal mass on each state and its flip image
    for (int i = 0; i < space.size(); ++i) {
        const auto j = space.index_of(encode64(flip(space.state(i))));
        REQUIRE(j);
        CHECK(pi[*j] == doctest::Approx(pi[i]).epsilon(1e-12));
    }

    CHECK(std::exp(log_partition_function(space, WeightVector::ones())) ==
          doctest::Approx(double(space.size())).epsilon(1e-12));
    CHECK_THROWS_AS(gibbs_distribution(StateSpace{}, w), EmptySpaceError);
}

TEST_CASE("generator rows balance and split by direction") {
    const StateSpace space = enumerate_states(2, 2, 1, 1);
    const WeightVector ones = WeightVector::ones();
    const GeneratorMatrix full = build_generator(space, ones);
    const GeneratorMatrix right = build_generator(space, ones, GeneratorMode::RightOnly);
    const GeneratorMatrix left = build_generator(space, ones, GeneratorMode::LeftOnly);

    for (int i = 0; i < full.n; ++i) {
        double row_sum = full.diag[i];
        for (const auto& [j, rate] : full.off[i])
            row_sum += rate;
        CHECK(row_sum == 0);
        // off-diagonal mass equals the trigger count at unit rates
        CHECK(-full.diag[i] ==
              doctest::Approx(double(find_triggers(space.state(i)).size())));
        // right + left = full, entrywise
        for (const auto& [j, rate] : full.off[i])
            CHECK(right.rate(i, j) + left.rate(i, j) ==
                  doctest::Approx(rate).epsilon(1e-15));
        CHECK(right.diag[i] + left.diag[i] ==
              doctest::Approx(full.diag[i]).epsilon(1e-15));
    }

    // flipped reverse of every right edge is again a right edge, and the
    // plain reverse is a left edge
    const WeightVector w = WeightVector::checked(1, 2, 3, 4, 5, 6);
    const GeneratorMatrix qr = build_generator(space, w, GeneratorMode::RightOnly);
    const GeneratorMatrix ql = build_generator(space, w, GeneratorMode::LeftOnly);
    std::vector<int> flip_index(space.size());
    for (int i = 0; i < space.size(); ++i)
        flip_index[i] = *space.index_of(encode64(flip(space.state(i))));
    for (int i = 0; i < qr.n; ++i)
        for (const auto& [j, rate] : qr.off[i]) {
            (void)rate;
            CHECK(qr.rate(flip_index[j], flip_index[i]) > 0);
            CHECK(ql.rate(j, i) > 0);
        }

    CHECK_THROWS_AS(build_generator(enumerate_states(2, 2, 0, 0), ones),
                    FluxOutOfRangeError);
}

TEST_CASE("conserved count functionals across enumerated spaces") {
    using T = VertexType;
    for (auto [cols, rows, k1, k2] :
         {std::array<int, 4>{2, 2, 1, 1}, {3, 3, 2, 1}, {3, 4, 1, 2}}) {
        const StateSpace space = enumerate_states(cols, rows, k1, k2);
        for (int i = 0; i < space.size(); ++i) {
            const auto counts = count_types(space.state(i));
            auto n = [&](T t) { return counts[int(t)]; };
            CHECK(n(T::Cross) + n(T::CornerWN) + n(T::Horiz) == cols * k1);
            CHECK(n(T::Cross) + n(T::CornerWN) + n(T::Vert) == rows * k2);
            CHECK(n(T::Empty) + n(T::Cross) + n(T::Horiz) + n(T::Vert) +
                      n(T::CornerWN) + n(T::CornerSE) ==
                  cols * rows);
            CHECK(n(T::CornerWN) == n(T::CornerSE));
        }
    }
}

TEST_CASE("connectivity report") {
    const StateSpace trivial = enumerate_states(2, 2, 1, 1);
    const GeneratorMatrix q = build_generator(trivial, WeightVector::ones());
    const ConnectivityReport full = check_connectivity(q);
    // regression datum: the 6-state space is one strongly connected class,
    // in either mode
    CHECK(full.components == 1);
    CHECK(full.strongly_connected);
    CHECK(full.component_sizes == std::vector<int>{6});
    const ConnectivityReport right = check_connectivity(
        build_generator(trivial, WeightVector::ones(), GeneratorMode::RightOnly));
    CHECK(right.components == 1);

    GeneratorMatrix isolated;
    isolated.n = 3;
    isolated.off.resize(3);
    isolated.diag.assign(3, 0);
    isolated.off[0].push_back({1, 1.0});
    isolated.diag[0] = -1;
    const ConnectivityReport split = check_connectivity(isolated);
    CHECK(split.components == 3);
    CHECK(!split.strongly_connected);
}

TEST_CASE("matrix market and state index output") {
    const StateSpace space = enumerate_states(2, 2, 1, 1);
    const GeneratorMatrix q = build_generator(space, WeightVector::ones());
    std::ostringstream mm;
    write_matrix_market(q, mm);
    std::istringstream lines(mm.str());
    std::string header;
    std::getline(lines, header);
    CHECK(header == "%%MatrixMarket matrix coordinate real general");
    int n, m;
    std::size_t nnz;
    lines >> n >> m >> nnz;
    CHECK(n == 6);
    CHECK(m == 6);
    std::size_t expected = q.n;
    for (const auto& row : q.off)
        expected += row.size();
    CHECK(nnz == expected);
    int i, j;
    double value;
    std::size_t seen = 0;
    while (lines >> i >> j >> value) {
        CHECK(i >= 1);
        CHECK(i <= 6);
        CHECK(j >= 1);
        CHECK(j <= 6);
        if (i == j)
            CHECK(value < 0);
        else
            CHECK(value > 0);
        ++seen;
    }
    CHECK(seen == nnz);

    std::ostringstream idx;
    write_state_index(space, idx);
    CHECK(idx.str().find('[') == 0);
}
