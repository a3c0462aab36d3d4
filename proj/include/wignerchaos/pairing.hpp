#pragma once

#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

namespace wigner {

/// Perfect matching of [n] = {1, ..., n}, 1-based.
///
/// Canonical form: every pair stored as (min, max) and pairs sorted by their
/// first element, so two equal pairings always compare equal.
class Pairing {
public:
    using Pair = std::pair<int, int>;

    Pairing() = default;
    /// Throws InvalidArgument unless `pairs` covers {1..2*pairs.size()} exactly once.
    explicit Pairing(std::vector<Pair> pairs);

    int size() const noexcept { return 2 * static_cast<int>(pairs_.size()); }
    const std::vector<Pair>& pairs() const noexcept { return pairs_; }
    /// Element matched with `a` (both 1-based).
    int partner(int a) const { return partner_[static_cast<std::size_t>(a - 1)]; }

    bool operator==(const Pairing& other) const { return pairs_ == other.pairs_; }
    bool operator<(const Pairing& other) const { return pairs_ < other.pairs_; }

private:
    std::vector<Pair> pairs_;
    std::vector<int> partner_;
};

/// Interval layout n1 (x) ... (x) nr of [n]: B1 = {1..n1}, B2 = {n1+1..n1+n2}, ...
class BlockStructure {
public:
    BlockStructure() = default;
    /// Sizes must be positive.
    explicit BlockStructure(std::vector<int> sizes);

    static BlockStructure singletons(int n);

    int blocks() const noexcept { return static_cast<int>(sizes_.size()); }
    int total() const noexcept { return total_; }
    const std::vector<int>& sizes() const noexcept { return sizes_; }
    /// 1-based block index containing 1-based element a.
    int block_of(int a) const { return block_of_[static_cast<std::size_t>(a - 1)]; }
    /// First 1-based element of 1-based block q.
    int first_element(int q) const { return offsets_[static_cast<std::size_t>(q - 1)] + 1; }

    bool operator==(const BlockStructure& other) const { return sizes_ == other.sizes_; }

private:
    std::vector<int> sizes_;
    std::vector<int> offsets_;
    std::vector<int> block_of_;
    int total_ = 0;
};

/// C_pi: vertices are blocks 1..r, edges the unordered block pairs (q < q')
/// linked by some pair of pi. Edges are sorted and unique.
struct LinkGraph {
    int vertices = 0;
    std::vector<std::pair<int, int>> edges;
};

inline constexpr int kMaxAllPairingsSize = 20;
inline constexpr int kMaxNcPairingsSize = 32;

/// Single-consumer stream of pairings in lexicographic order of canonical form.
///
/// The smallest unmatched element is paired with every admissible partner in
/// increasing order; backtracking covers the whole search tree, so the stream
/// never materializes more than one pairing at a time.
class PairingStream {
public:
    enum class Kind { All, NonCrossing };

    /// Throws OddSize for odd n and SizeGuardExceeded above the kind's guard.
    PairingStream(int n, Kind kind);
    /// Restricted to pairings respecting `blocks`. An odd total yields an
    /// empty stream.
    PairingStream(const BlockStructure& blocks, Kind kind);

    std::optional<Pairing> next();

private:
    bool admissible(int a, int b) const;
    bool advance();

    int n_ = 0;
    Kind kind_;
    std::vector<int> block_of_;  // 0-based element -> block, empty when unrestricted
    std::vector<int> partner_;   // 0-based, -1 = unmatched
    std::vector<std::pair<int, int>> stack_;  // chosen (a, b), 0-based
    bool started_ = false;
    bool done_ = false;
};

PairingStream enumerate_pairings(int n);
PairingStream enumerate_nc_pairings(int n);
PairingStream enumerate_respectful_nc(const BlockStructure& blocks);
/// Respectful pairings with crossings allowed (P_2(n1 (x) ... (x) nr)).
PairingStream enumerate_respectful(const BlockStructure& blocks);

/// Materializes a stream.
std::vector<Pairing> collect(PairingStream stream);

bool is_noncrossing(const Pairing& pi);

/// No pair of pi lies inside one block. Throws SizeMismatch.
bool respects(const Pairing& pi, const BlockStructure& blocks);

/// Throws NotRespectful unless respects(pi, blocks).
LinkGraph link_graph(const Pairing& pi, const BlockStructure& blocks);
bool is_connected(const Pairing& pi, const BlockStructure& blocks);

/// One connected component of C_pi: the blocks it spans (1-based, increasing)
/// and pi restricted to those blocks, relabeled onto a contiguous ground set.
struct PairingComponent {
    std::vector<int> blocks;
    BlockStructure structure;
    Pairing pairing;
};

/// Components ordered by their least block. Throws NotRespectful.
std::vector<PairingComponent> decompose_connected(const Pairing& pi, const BlockStructure& blocks);

/// Every component links exactly two blocks. Throws NotRespectful.
bool is_nc22(const Pairing& pi, const BlockStructure& blocks);

/// Exact C_m for 0 <= m <= 30; Overflow above.
std::uint64_t catalan(int m);

/// (n-1)!! = |P_2(n)| for even n >= 0, n <= 40.
std::uint64_t pairing_count(int n);

}  // namespace wigner
