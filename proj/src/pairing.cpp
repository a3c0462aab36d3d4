#include "wignerchaos/pairing.hpp"

#include <algorithm>
#include <numeric>
#include <string>

#include "wignerchaos/error.hpp"

namespace wigner {

Pairing::Pairing(std::vector<Pair> pairs) {
    const auto n = 2 * pairs.size();
    partner_.assign(n, 0);
    for (auto& [a, b] : pairs) {
        if (a > b) std::swap(a, b);
        if (a < 1 || static_cast<std::size_t>(b) > n || a == b) {
            throw Error(ErrorKind::InvalidArgument,
                        "pair {" + std::to_string(a) + "," + std::to_string(b) +
                            "} is not a pair of distinct elements of [" + std::to_string(n) + "]");
        }
        auto& pa = partner_[static_cast<std::size_t>(a - 1)];
        auto& pb = partner_[static_cast<std::size_t>(b - 1)];
        if (pa != 0 || pb != 0) {
            throw Error(ErrorKind::InvalidArgument, "element covered twice in pairing");
        }
        pa = b;
        pb = a;
    }
    std::sort(pairs.begin(), pairs.end());
    pairs_ = std::move(pairs);
}

BlockStructure::BlockStructure(std::vector<int> sizes) : sizes_(std::move(sizes)) {
    int q = 0;
    for (int s : sizes_) {
        if (s <= 0) throw Error(ErrorKind::InvalidArgument, "block sizes must be positive");
        offsets_.push_back(total_);
        total_ += s;
        ++q;
        block_of_.insert(block_of_.end(), static_cast<std::size_t>(s), q);
    }
}

BlockStructure BlockStructure::singletons(int n) {
    return BlockStructure(std::vector<int>(static_cast<std::size_t>(n), 1));
}

PairingStream::PairingStream(int n, Kind kind) : n_(n), kind_(kind) {
    if (n < 0 || n % 2 != 0) throw Error(ErrorKind::OddSize, "n=" + std::to_string(n));
    const int guard = kind == Kind::All ? kMaxAllPairingsSize : kMaxNcPairingsSize;
    if (n > guard) {
        throw Error(ErrorKind::SizeGuardExceeded,
                    "n=" + std::to_string(n) + " exceeds guard " + std::to_string(guard));
    }
    partner_.assign(static_cast<std::size_t>(n), -1);
}

PairingStream::PairingStream(const BlockStructure& blocks, Kind kind)
    : n_(blocks.total()), kind_(kind) {
    const int guard = kind == Kind::All ? kMaxAllPairingsSize : kMaxNcPairingsSize;
    if (n_ > guard) {
        throw Error(ErrorKind::SizeGuardExceeded,
                    "n=" + std::to_string(n_) + " exceeds guard " + std::to_string(guard));
    }
    if (n_ % 2 != 0) done_ = true;
    for (int a = 1; a <= n_; ++a) block_of_.push_back(blocks.block_of(a));
    partner_.assign(static_cast<std::size_t>(n_), -1);
}

bool PairingStream::admissible(int a, int b) const {
    if (partner_[static_cast<std::size_t>(b)] != -1) return false;
    if (!block_of_.empty() &&
        block_of_[static_cast<std::size_t>(a)] == block_of_[static_cast<std::size_t>(b)]) {
        return false;
    }
    if (kind_ == Kind::NonCrossing) {
        // Every element before a is matched, so (a, b) is crossing-free and
        // completable iff everything strictly between a and b is unmatched
        // and of even count.
        if ((b - a - 1) % 2 != 0) return false;
        for (int x = a + 1; x < b; ++x) {
            if (partner_[static_cast<std::size_t>(x)] != -1) return false;
        }
    }
    return true;
}

// Depth-first step to the next complete pairing. Returns false when exhausted.
bool PairingStream::advance() {
    auto first_unmatched = [&]() {
        int a = 0;
        while (a < n_ && partner_[static_cast<std::size_t>(a)] != -1) ++a;
        return a;
    };
    auto place = [&](int a, int from) {
        for (int b = from; b < n_; ++b) {
            if (admissible(a, b)) {
                partner_[static_cast<std::size_t>(a)] = b;
                partner_[static_cast<std::size_t>(b)] = a;
                stack_.emplace_back(a, b);
                return true;
            }
        }
        return false;
    };
    auto pop_and_retry = [&]() {
        while (!stack_.empty()) {
            auto [a, b] = stack_.back();
            stack_.pop_back();
            partner_[static_cast<std::size_t>(a)] = -1;
            partner_[static_cast<std::size_t>(b)] = -1;
            if (place(a, b + 1)) return true;
        }
        return false;
    };

    if (started_ && !pop_and_retry()) return false;
    started_ = true;
    while (static_cast<int>(stack_.size()) * 2 < n_) {
        const int a = first_unmatched();
        if (!place(a, a + 1) && !pop_and_retry()) return false;
    }
    return true;
}

std::optional<Pairing> PairingStream::next() {
    if (done_) return std::nullopt;
    if (!advance()) {
        done_ = true;
        return std::nullopt;
    }
    if (n_ == 0) done_ = true;
    std::vector<Pairing::Pair> pairs;
    pairs.reserve(stack_.size());
    for (auto [a, b] : stack_) pairs.emplace_back(a + 1, b + 1);
    return Pairing(std::move(pairs));
}

PairingStream enumerate_pairings(int n) { return PairingStream(n, PairingStream::Kind::All); }

PairingStream enumerate_nc_pairings(int n) {
    return PairingStream(n, PairingStream::Kind::NonCrossing);
}

PairingStream enumerate_respectful_nc(const BlockStructure& blocks) {
    return PairingStream(blocks, PairingStream::Kind::NonCrossing);
}

PairingStream enumerate_respectful(const BlockStructure& blocks) {
    return PairingStream(blocks, PairingStream::Kind::All);
}

std::vector<Pairing> collect(PairingStream stream) {
    std::vector<Pairing> out;
    while (auto p = stream.next()) out.push_back(std::move(*p));
    return out;
}

bool is_noncrossing(const Pairing& pi) {
    const auto& ps = pi.pairs();
    for (std::size_t i = 0; i < ps.size(); ++i) {
        for (std::size_t j = 0; j < ps.size(); ++j) {
            const auto [x1, y1] = ps[i];
            const auto [x2, y2] = ps[j];
            if (x1 < x2 && x2 < y1 && y1 < y2) return false;
        }
    }
    return true;
}

bool respects(const Pairing& pi, const BlockStructure& blocks) {
    if (pi.size() != blocks.total()) {
        throw Error(ErrorKind::SizeMismatch, "pairing of [" + std::to_string(pi.size()) +
                                                 "] against blocks of total " +
                                                 std::to_string(blocks.total()));
    }
    return std::none_of(pi.pairs().begin(), pi.pairs().end(), [&](const auto& p) {
        return blocks.block_of(p.first) == blocks.block_of(p.second);
    });
}

namespace {

void require_respectful(const Pairing& pi, const BlockStructure& blocks) {
    if (!respects(pi, blocks)) {
        throw Error(ErrorKind::NotRespectful, "pairing has a pair inside a single block");
    }
}

struct UnionFind {
    std::vector<int> parent;
    explicit UnionFind(int n) : parent(static_cast<std::size_t>(n)) {
        std::iota(parent.begin(), parent.end(), 0);
    }
    int find(int x) {
        while (parent[static_cast<std::size_t>(x)] != x) {
            auto& p = parent[static_cast<std::size_t>(x)];
            p = parent[static_cast<std::size_t>(p)];
            x = p;
        }
        return x;
    }
    void unite(int a, int b) {
        a = find(a);
        b = find(b);
        if (a != b) parent[static_cast<std::size_t>(std::max(a, b))] = std::min(a, b);
    }
};

// Component root (0-based least block) for each 0-based block.
std::vector<int> component_roots(const Pairing& pi, const BlockStructure& blocks) {
    UnionFind uf(blocks.blocks());
    for (auto [a, b] : pi.pairs()) uf.unite(blocks.block_of(a) - 1, blocks.block_of(b) - 1);
    std::vector<int> roots(static_cast<std::size_t>(blocks.blocks()));
    for (int q = 0; q < blocks.blocks(); ++q) roots[static_cast<std::size_t>(q)] = uf.find(q);
    return roots;
}

}  // namespace

LinkGraph link_graph(const Pairing& pi, const BlockStructure& blocks) {
    require_respectful(pi, blocks);
    LinkGraph g;
    g.vertices = blocks.blocks();
    for (auto [a, b] : pi.pairs()) {
        int qa = blocks.block_of(a), qb = blocks.block_of(b);
        g.edges.emplace_back(std::min(qa, qb), std::max(qa, qb));
    }
    std::sort(g.edges.begin(), g.edges.end());
    g.edges.erase(std::unique(g.edges.begin(), g.edges.end()), g.edges.end());
    return g;
}

bool is_connected(const Pairing& pi, const BlockStructure& blocks) {
    require_respectful(pi, blocks);
    auto roots = component_roots(pi, blocks);
    return std::all_of(roots.begin(), roots.end(), [](int r) { return r == 0; });
}

std::vector<PairingComponent> decompose_connected(const Pairing& pi, const BlockStructure& blocks) {
    require_respectful(pi, blocks);
    const auto roots = component_roots(pi, blocks);
    std::vector<PairingComponent> out;
    for (int root = 0; root < blocks.blocks(); ++root) {
        if (roots[static_cast<std::size_t>(root)] != root) continue;
        PairingComponent comp;
        std::vector<int> sizes;
        // Old element -> new contiguous label.
        std::vector<int> relabel(static_cast<std::size_t>(blocks.total()) + 1, 0);
        int next = 1;
        for (int q = 0; q < blocks.blocks(); ++q) {
            if (roots[static_cast<std::size_t>(q)] != root) continue;
            comp.blocks.push_back(q + 1);
            const int sz = blocks.sizes()[static_cast<std::size_t>(q)];
            sizes.push_back(sz);
            for (int e = 0; e < sz; ++e) relabel[static_cast<std::size_t>(blocks.first_element(q + 1) + e)] = next++;
        }
        std::vector<Pairing::Pair> pairs;
        for (auto [a, b] : pi.pairs()) {
            if (roots[static_cast<std::size_t>(blocks.block_of(a) - 1)] == root) {
                pairs.emplace_back(relabel[static_cast<std::size_t>(a)],
                                   relabel[static_cast<std::size_t>(b)]);
            }
        }
        comp.structure = BlockStructure(std::move(sizes));
        comp.pairing = Pairing(std::move(pairs));
        out.push_back(std::move(comp));
    }
    return out;
}

bool is_nc22(const Pairing& pi, const BlockStructure& blocks) {
    auto comps = decompose_connected(pi, blocks);
    return std::all_of(comps.begin(), comps.end(),
                       [](const PairingComponent& c) { return c.blocks.size() == 2; });
}

std::uint64_t catalan(int m) {
    if (m < 0) throw Error(ErrorKind::InvalidArgument, "catalan index must be nonnegative");
    if (m > 30) throw Error(ErrorKind::Overflow, "catalan(" + std::to_string(m) + ") guarded at m <= 30");
    std::uint64_t c = 1;
    // C_{j+1} = C_j * 2(2j+1) / (j+2); the division is exact.
    for (int j = 0; j < m; ++j) {
        c = c * static_cast<std::uint64_t>(2 * (2 * j + 1)) / static_cast<std::uint64_t>(j + 2);
    }
    return c;
}

std::uint64_t pairing_count(int n) {
    if (n < 0 || n % 2 != 0) throw Error(ErrorKind::OddSize, "n=" + std::to_string(n));
    if (n > 40) throw Error(ErrorKind::Overflow, "(n-1)!! guarded at n <= 40");
    std::uint64_t c = 1;
    for (int k = n - 1; k > 1; k -= 2) c *= static_cast<std::uint64_t>(k);
    return c;
}

}  // namespace wigner
