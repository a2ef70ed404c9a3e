#include "sixv/enumeration.hpp"

#include <algorithm>
#include <bit>
#include <cassert>
#include <cmath>
#include <ostream>

#include <nlohmann/json.hpp>

namespace sixv {

StateSpace::StateSpace(TorusGeometry geom, FluxPair flux,
                       std::vector<std::uint64_t> encodings)
    : geom_(geom), flux_(flux), encodings_(std::move(encodings)) {
    std::sort(encodings_.begin(), encodings_.end());
    assert(std::adjacent_find(encodings_.begin(), encodings_.end()) ==
           encodings_.end());
    index_.reserve(encodings_.size());
    for (int i = 0; i < size(); ++i)
        index_.emplace(encodings_[i], i);
}

std::optional<int> StateSpace::index_of(std::uint64_t encoding) const {
    const auto it = index_.find(encoding);
    if (it == index_.end())
        return std::nullopt;
    return it->second;
}

namespace {

struct ColumnDfs {
    int cols, rows, k1, k2;
    std::uint64_t row_mask;
    std::uint64_t hseed = 0;
    std::vector<std::uint64_t> vcols;
    std::vector<std::uint64_t> hcols;
    std::vector<int> row_sums;
    std::vector<std::uint64_t>* out = nullptr;

    std::uint64_t rot_up(std::uint64_t v) const {
        // bit y of the result holds bit y-1 (circular) of v
        return ((v << 1) | (v >> (rows - 1))) & row_mask;
    }

    void emit() {
        std::uint64_t bits = 0;
        for (int x = 0; x < cols; ++x)
            bits |= hcols[x] << (x * rows);
        for (int x = 0; x < cols; ++x)
            bits |= vcols[x] << (cols * rows + x * rows);
        out->push_back(bits);
    }

    void descend(int x, std::uint64_t prev_h) {
        if (x == cols) {
            if (prev_h == hseed &&
                std::all_of(row_sums.begin(), row_sums.end(),
                            [&](int c) { return c == k2; }))
                emit();
            return;
        }
        const int remaining = cols - 1 - x;
        for (std::uint64_t v = 0; v <= row_mask; ++v) {
            const std::uint64_t below = rot_up(v);
            // h = prev_h + below - v per row, each result in {0, 1}
            if ((prev_h & below & ~v) != 0)
                continue; // a row would emit two arrows
            if ((v & ~prev_h & ~below) != 0)
                continue; // a row would absorb an arrow from nothing
            bool fits = true;
            for (int y = 0; y < rows && fits; ++y) {
                const int c = row_sums[y] + static_cast<int>((v >> y) & 1u);
                fits = c <= k2 && c + remaining >= k2;
            }
            if (!fits)
                continue;
            const std::uint64_t h = ((prev_h ^ below) & ~v) | (prev_h & below & v);
            for (int y = 0; y < rows; ++y)
                row_sums[y] += static_cast<int>((v >> y) & 1u);
            vcols[x] = v;
            hcols[x] = h;
            descend(x + 1, h);
            for (int y = 0; y < rows; ++y)
                row_sums[y] -= static_cast<int>((v >> y) & 1u);
        }
    }
};

} // namespace

StateSpace enumerate_states(int cols, int rows, int k1, int k2) {
    if (cols < 1 || rows < 1)
        throw OutOfRangeError("torus dimensions must be positive");
    if (k1 < 0 || k1 > rows || k2 < 0 || k2 > cols)
        throw OutOfRangeError("flux out of range");
    if (2 * cols * rows > 64)
        throw TooLargeError("enumeration requires 2*cols*rows <= 64");

    ColumnDfs dfs;
    dfs.cols = cols;
    dfs.rows = rows;
    dfs.k1 = k1;
    dfs.k2 = k2;
    dfs.row_mask = rows == 64 ? ~0ULL : (1ULL << rows) - 1;
    dfs.vcols.assign(cols, 0);
    dfs.hcols.assign(cols, 0);
    dfs.row_sums.assign(rows, 0);

    std::vector<std::uint64_t> found;
    dfs.out = &found;

    // Gosper's hack over the k1-subsets of rows for the seed column H[M-1].
    if (k1 == 0) {
        dfs.hseed = 0;
        dfs.descend(0, 0);
    } else {
        std::uint64_t seed = (1ULL << k1) - 1;
        while (seed <= dfs.row_mask) {
            dfs.hseed = seed;
            dfs.descend(0, seed);
            const std::uint64_t c = seed & -seed;
            const std::uint64_t r = seed + c;
            const std::uint64_t next = (((r ^ seed) >> 2) / c) | r;
            if (r > dfs.row_mask || next == seed)
                break;
            seed = next;
        }
    }
    return StateSpace(TorusGeometry{cols, rows}, FluxPair{k1, k2},
                      std::move(found));
}

std::map<FluxPair, StateSpace> enumerate_bruteforce(int cols, int rows) {
    if (2 * cols * rows > 18)
        throw TooLargeError("brute force requires 2*cols*rows <= 18");
    const TorusGeometry geom{cols, rows};
    std::map<FluxPair, std::vector<std::uint64_t>> classes;
    const std::uint64_t limit = 1ULL << (2 * cols * rows);
    for (std::uint64_t bits = 0; bits < limit; ++bits) {
        const State s = decode64(geom, bits);
        if (!conserving(s))
            continue;
        int k1 = 0;
        for (int y = 0; y < rows; ++y)
            k1 += s.h(0, y);
        int k2 = 0;
        for (int x = 0; x < cols; ++x)
            k2 += s.v(x, 0);
        classes[FluxPair{k1, k2}].push_back(bits);
    }
    std::map<FluxPair, StateSpace> out;
    for (auto& [flux, encodings] : classes)
        out.emplace(flux, StateSpace(geom, flux, std::move(encodings)));
    return out;
}

double log_partition_function(const StateSpace& space, const WeightVector& w) {
    if (space.size() == 0)
        throw EmptySpaceError("empty state space");
    std::vector<double> lw(space.size());
    for (int i = 0; i < space.size(); ++i)
        lw[i] = state_log_weight(space.state(i), w);
    const double m = *std::max_element(lw.begin(), lw.end());
    double acc = 0;
    for (double v : lw)
        acc += std::exp(v - m);
    return m + std::log(acc);
}

std::vector<double> gibbs_distribution(const StateSpace& space,
                                       const WeightVector& w) {
    if (space.size() == 0)
        throw EmptySpaceError("empty state space");
    std::vector<double> lw(space.size());
    for (int i = 0; i < space.size(); ++i)
        lw[i] = state_log_weight(space.state(i), w);
    const double m = *std::max_element(lw.begin(), lw.end());
    double z = 0;
    for (double& v : lw) {
        v = std::exp(v - m);
        z += v;
    }
    for (double& v : lw)
        v /= z;
    return lw;
}

double GeneratorMatrix::rate(int i, int j) const {
    if (i == j)
        return diag[i];
    for (const auto& [col, rate] : off[i])
        if (col == j)
            return rate;
    return 0;
}

GeneratorMatrix build_generator(const StateSpace& space, const RateTable& rates,
                                GeneratorMode mode) {
    const TorusGeometry& g = space.geom();
    const FluxPair flux = space.flux();
    if (flux.k1 < 1 || flux.k1 > g.rows - 1 || flux.k2 < 1 ||
        flux.k2 > g.cols - 1)
        throw FluxOutOfRangeError("generator requires the dynamic flux regime");

    GeneratorMatrix q;
    q.n = space.size();
    q.off.resize(q.n);
    q.diag.assign(q.n, 0);
    for (int i = 0; i < q.n; ++i) {
        const State s = space.state(i);
        std::map<int, double> row;
        for (const Trigger& t : find_triggers(s)) {
            if (mode == GeneratorMode::RightOnly && t.dir != JumpDir::Right)
                continue;
            if (mode == GeneratorMode::LeftOnly && t.dir != JumpDir::Left)
                continue;
            const Move m = resolve_move(s, t);
            const auto j = space.index_of(encode64(apply_move(s, m)));
            if (!j)
                throw ClosureViolationError(
                    "a move left the enumerated fixed-flux space");
            row[*j] += rates[m.kind];
        }
        double total = 0;
        q.off[i].assign(row.begin(), row.end());
        for (const auto& [col, rate] : q.off[i]) {
            assert(col != i); // a jump always changes the state
            total += rate;
        }
        q.diag[i] = -total;
    }
    return q;
}

GeneratorMatrix build_generator(const StateSpace& space, const WeightVector& w,
                                GeneratorMode mode) {
    return build_generator(space, RateTable::from_weights(w), mode);
}

namespace {

// Iterative Tarjan over the positive-rate adjacency.
struct Tarjan {
    const GeneratorMatrix& q;
    std::vector<int> index, low, comp;
    std::vector<bool> on_stack;
    std::vector<int> stack;
    int next_index = 0, components = 0;

    explicit Tarjan(const GeneratorMatrix& q)
        : q(q), index(q.n, -1), low(q.n, 0), comp(q.n, -1), on_stack(q.n, false) {}

    void run(int root) {
        struct Frame {
            int v;
            std::size_t edge;
        };
        std::vector<Frame> frames{{root, 0}};
        index[root] = low[root] = next_index++;
        stack.push_back(root);
        on_stack[root] = true;
        while (!frames.empty()) {
            auto& [v, edge] = frames.back();
            if (edge < q.off[v].size()) {
                const int w = q.off[v][edge++].first;
                if (index[w] < 0) {
                    index[w] = low[w] = next_index++;
                    stack.push_back(w);
                    on_stack[w] = true;
                    frames.push_back({w, 0});
                } else if (on_stack[w]) {
                    low[v] = std::min(low[v], index[w]);
                }
            } else {
                if (low[v] == index[v]) {
                    int u;
                    do {
                        u = stack.back();
                        stack.pop_back();
                        on_stack[u] = false;
                        comp[u] = components;
                    } while (u != v);
                    ++components;
                }
                const int child = v;
                frames.pop_back();
                if (!frames.empty())
                    low[frames.back().v] =
                        std::min(low[frames.back().v], low[child]);
            }
        }
    }
};

} // namespace

ConnectivityReport check_connectivity(const GeneratorMatrix& q) {
    Tarjan tarjan(q);
    for (int v = 0; v < q.n; ++v)
        if (tarjan.index[v] < 0)
            tarjan.run(v);
    ConnectivityReport report;
    report.components = tarjan.components;
    report.strongly_connected = tarjan.components <= 1;
    report.component_sizes.assign(tarjan.components, 0);
    for (int v = 0; v < q.n; ++v)
        ++report.component_sizes[tarjan.comp[v]];
    std::sort(report.component_sizes.rbegin(), report.component_sizes.rend());
    return report;
}

void write_matrix_market(const GeneratorMatrix& q, std::ostream& out) {
    std::size_t nnz = 0;
    for (const auto& row : q.off)
        nnz += row.size();
    nnz += q.n; // diagonal
    out << "%%MatrixMarket matrix coordinate real general\n";
    out << q.n << " " << q.n << " " << nnz << "\n";
    out.precision(17);
    for (int i = 0; i < q.n; ++i) {
        out << (i + 1) << " " << (i + 1) << " " << q.diag[i] << "\n";
        for (const auto& [j, rate] : q.off[i])
            out << (i + 1) << " " << (j + 1) << " " << rate << "\n";
    }
}

void write_state_index(const StateSpace& space, std::ostream& out) {
    nlohmann::json j = nlohmann::json::array();
    for (int i = 0; i < space.size(); ++i)
        j.push_back(space.encoding(i));
    out << j.dump() << "\n";
}

} // namespace sixv
