#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "wignerchaos/error.hpp"
#include "wignerchaos/moment.hpp"

namespace wigner {

namespace {

// Slot s (0-based over the concatenated arguments) belongs to kernel
// kernel_of[s] at position pos_in_kernel[s]; pair_of[s] is the index of its
// pair in pi.pairs().
struct SlotLayout {
    std::vector<int> kernel_of;
    std::vector<int> pos_in_kernel;
    std::vector<int> pair_of;
    std::vector<int> first_slot;  // per kernel
    int pairs = 0;
};

SlotLayout make_layout(std::span<const StepKernel> kernels, const Pairing& pi) {
    SlotLayout l;
    int n = 0;
    for (std::size_t q = 0; q < kernels.size(); ++q) {
        l.first_slot.push_back(n);
        for (int i = 0; i < kernels[q].order(); ++i) {
            l.kernel_of.push_back(static_cast<int>(q));
            l.pos_in_kernel.push_back(i);
        }
        n += kernels[q].order();
    }
    if (n != pi.size()) {
        throw Error(ErrorKind::SizeMismatch, "kernel orders sum to " + std::to_string(n) +
                                                 " but the pairing is of [" +
                                                 std::to_string(pi.size()) + "]");
    }
    l.pair_of.assign(static_cast<std::size_t>(n), -1);
    for (std::size_t k = 0; k < pi.pairs().size(); ++k) {
        l.pair_of[static_cast<std::size_t>(pi.pairs()[k].first - 1)] = static_cast<int>(k);
        l.pair_of[static_cast<std::size_t>(pi.pairs()[k].second - 1)] = static_cast<int>(k);
    }
    l.pairs = static_cast<int>(pi.pairs().size());
    return l;
}

// One kernel prepared for a visit: entries satisfying its internal pairs,
// sorted by their values at the slots whose pair is already open.
struct PreparedKernel {
    std::vector<int> closing_pairs;   // pairs closed by this kernel, ascending
    std::vector<int> closing_pos;     // matching kernel positions
    std::vector<int> opening_pairs;   // pairs opened by this kernel, ascending
    std::vector<int> opening_pos;
    std::vector<std::size_t> entries; // sorted by closing key
    const StepKernel* kernel = nullptr;

    std::span<const CellIndex> slot_values(std::size_t e) const { return kernel->index(e); }
    CellIndex closing_value(std::size_t e, std::size_t c) const {
        return kernel->index(e)[static_cast<std::size_t>(closing_pos[c])];
    }
};

PreparedKernel prepare(const StepKernel& k, int q, const SlotLayout& l, const std::vector<char>& open) {
    PreparedKernel pk;
    pk.kernel = &k;
    const int base = l.first_slot[static_cast<std::size_t>(q)];
    std::vector<std::pair<int, int>> internal;  // positions forced equal
    std::vector<std::pair<int, int>> closing, opening;
    for (int i = 0; i < k.order(); ++i) {
        const int pair = l.pair_of[static_cast<std::size_t>(base + i)];
        if (open[static_cast<std::size_t>(pair)]) {
            closing.emplace_back(pair, i);
            continue;
        }
        // The other endpoint of the pair, within this kernel or not yet visited.
        int other = -1;
        for (int j = 0; j < k.order(); ++j) {
            if (j != i && l.pair_of[static_cast<std::size_t>(base + j)] == pair) other = j;
        }
        if (other >= 0) {
            if (i < other) internal.emplace_back(i, other);
        } else {
            opening.emplace_back(pair, i);
        }
    }
    std::sort(closing.begin(), closing.end());
    std::sort(opening.begin(), opening.end());
    for (auto [p, i] : closing) {
        pk.closing_pairs.push_back(p);
        pk.closing_pos.push_back(i);
    }
    for (auto [p, i] : opening) {
        pk.opening_pairs.push_back(p);
        pk.opening_pos.push_back(i);
    }
    for (std::size_t e = 0; e < k.nnz(); ++e) {
        auto idx = k.index(e);
        bool ok = std::all_of(internal.begin(), internal.end(), [&](auto ij) {
            return idx[static_cast<std::size_t>(ij.first)] == idx[static_cast<std::size_t>(ij.second)];
        });
        if (ok) pk.entries.push_back(e);
    }
    auto key_less = [&](std::size_t a, std::size_t b) {
        for (std::size_t c = 0; c < pk.closing_pos.size(); ++c) {
            auto va = pk.closing_value(a, c), vb = pk.closing_value(b, c);
            if (va != vb) return va < vb;
        }
        return false;
    };
    std::stable_sort(pk.entries.begin(), pk.entries.end(), key_less);
    return pk;
}

// Entries of pk whose closing values equal `key`.
std::pair<std::size_t, std::size_t> matching_range(const PreparedKernel& pk,
                                                   std::span<const CellIndex> key) {
    auto cmp = [&](std::size_t e) {
        for (std::size_t c = 0; c < key.size(); ++c) {
            auto v = pk.closing_value(e, c);
            if (v != key[c]) return v < key[c] ? -1 : 1;
        }
        return 0;
    };
    std::size_t lo = 0, hi = pk.entries.size();
    while (lo < hi) {
        auto mid = (lo + hi) / 2;
        if (cmp(pk.entries[mid]) < 0) lo = mid + 1;
        else hi = mid;
    }
    std::size_t first = lo;
    hi = pk.entries.size();
    while (lo < hi) {
        auto mid = (lo + hi) / 2;
        if (cmp(pk.entries[mid]) <= 0) lo = mid + 1;
        else hi = mid;
    }
    return {first, lo};
}

// Greedy visiting order: repeatedly take the kernel leaving the fewest open
// pairs, ties broken by position.
std::vector<int> greedy_order(std::span<const StepKernel> kernels, const SlotLayout& l) {
    const int r = static_cast<int>(kernels.size());
    std::vector<char> visited(static_cast<std::size_t>(r), 0);
    std::vector<int> ends_seen(static_cast<std::size_t>(l.pairs), 0);
    std::vector<int> order;
    int open = 0;
    for (int step = 0; step < r; ++step) {
        int best = -1, best_open = 0;
        for (int q = 0; q < r; ++q) {
            if (visited[static_cast<std::size_t>(q)]) continue;
            std::vector<int> seen = ends_seen;
            int delta = 0;
            for (int i = 0; i < kernels[static_cast<std::size_t>(q)].order(); ++i) {
                int& c = seen[static_cast<std::size_t>(l.pair_of[static_cast<std::size_t>(l.first_slot[static_cast<std::size_t>(q)] + i)])];
                ++c;
                delta += c == 1 ? 1 : -1;
            }
            if (best < 0 || open + delta < best_open) {
                best = q;
                best_open = open + delta;
            }
        }
        visited[static_cast<std::size_t>(best)] = 1;
        for (int i = 0; i < kernels[static_cast<std::size_t>(best)].order(); ++i) {
            ++ends_seen[static_cast<std::size_t>(l.pair_of[static_cast<std::size_t>(l.first_slot[static_cast<std::size_t>(best)] + i)])];
        }
        open = best_open;
        order.push_back(best);
    }
    return order;
}

// Flat list of states: the values of the currently open pairs (ascending
// pair id) and the accumulated coefficient.
struct StateSet {
    std::vector<int> open_pairs;
    std::vector<CellIndex> keys;
    std::vector<Complex> values;

    std::size_t width() const { return open_pairs.size(); }
    std::size_t size() const { return values.size(); }
    std::span<const CellIndex> key(std::size_t s) const {
        return {keys.data() + s * width(), width()};
    }
};

// Sorts states by key and sums equal keys in generation order.
void merge_states(StateSet& st) {
    const std::size_t w = st.width();
    std::vector<std::size_t> perm(st.size());
    std::iota(perm.begin(), perm.end(), std::size_t{0});
    std::stable_sort(perm.begin(), perm.end(), [&](std::size_t a, std::size_t b) {
        auto ka = st.key(a), kb = st.key(b);
        return std::lexicographical_compare(ka.begin(), ka.end(), kb.begin(), kb.end());
    });
    StateSet out;
    out.open_pairs = st.open_pairs;
    for (std::size_t i = 0; i < perm.size();) {
        auto k = st.key(perm[i]);
        Complex sum = st.values[perm[i]];
        std::size_t j = i + 1;
        while (j < perm.size() && std::equal(k.begin(), k.end(), st.key(perm[j]).begin())) {
            sum += st.values[perm[j++]];
        }
        if (sum != Complex{}) {
            out.keys.insert(out.keys.end(), k.begin(), k.end());
            out.values.push_back(sum);
        }
        i = j;
    }
    (void)w;
    st = std::move(out);
}

Complex contraction_sweep(std::span<const StepKernel> kernels, const SlotLayout& l,
                          const std::vector<int>& order) {
    StateSet st;
    st.values.push_back(Complex{1.0, 0.0});
    std::vector<char> open(static_cast<std::size_t>(l.pairs), 0);
    std::vector<CellIndex> lookup;
    for (int q : order) {
        const auto& k = kernels[static_cast<std::size_t>(q)];
        PreparedKernel pk = prepare(k, q, l, open);

        // Layout of the next state: old open pairs minus the closed ones, plus
        // the newly opened ones, ascending.
        StateSet next;
        std::vector<int> keep_pos;  // positions in old key that survive
        std::vector<int> close_pos; // positions in old key of closing pairs (closing order)
        for (int p : pk.closing_pairs) {
            auto it = std::find(st.open_pairs.begin(), st.open_pairs.end(), p);
            close_pos.push_back(static_cast<int>(it - st.open_pairs.begin()));
        }
        for (std::size_t i = 0; i < st.open_pairs.size(); ++i) {
            if (std::find(pk.closing_pairs.begin(), pk.closing_pairs.end(), st.open_pairs[i]) ==
                pk.closing_pairs.end()) {
                keep_pos.push_back(static_cast<int>(i));
            }
        }
        // Merge order of kept and opened pairs by pair id: source tags.
        struct Src { bool opened; int at; int pair; };
        std::vector<Src> layout;
        for (int i : keep_pos) layout.push_back({false, i, st.open_pairs[static_cast<std::size_t>(i)]});
        for (std::size_t i = 0; i < pk.opening_pairs.size(); ++i) {
            layout.push_back({true, pk.opening_pos[i], pk.opening_pairs[i]});
        }
        std::sort(layout.begin(), layout.end(), [](const Src& a, const Src& b) { return a.pair < b.pair; });
        for (const auto& s : layout) next.open_pairs.push_back(s.pair);

        lookup.resize(close_pos.size());
        for (std::size_t s = 0; s < st.size(); ++s) {
            auto key = st.key(s);
            for (std::size_t c = 0; c < close_pos.size(); ++c) lookup[c] = key[static_cast<std::size_t>(close_pos[c])];
            auto [lo, hi] = matching_range(pk, lookup);
            for (std::size_t m = lo; m < hi; ++m) {
                const std::size_t e = pk.entries[m];
                auto idx = k.index(e);
                for (const auto& src : layout) {
                    next.keys.push_back(src.opened ? idx[static_cast<std::size_t>(src.at)]
                                                   : key[static_cast<std::size_t>(src.at)]);
                }
                next.values.push_back(st.values[s] * k.value(e));
            }
        }
        merge_states(next);
        for (int p : pk.closing_pairs) open[static_cast<std::size_t>(p)] = 0;
        for (int p : pk.opening_pairs) open[static_cast<std::size_t>(p)] = 1;
        st = std::move(next);
        if (st.size() == 0) return {};
    }
    return st.size() == 1 ? st.values[0] : Complex{};
}

// Depth-first enumeration of consistent cell assignments, one kernel at a
// time in natural order; nothing is summed before the leaves.
struct NaiveWalker {
    std::span<const StepKernel> kernels;
    const SlotLayout& layout;
    std::vector<PreparedKernel> prepared;
    std::vector<CellIndex> pair_value;
    Complex total{};

    void walk(std::size_t q, Complex acc) {
        if (q == prepared.size()) {
            total += acc;
            return;
        }
        const auto& pk = prepared[q];
        std::vector<CellIndex> key(pk.closing_pairs.size());
        for (std::size_t c = 0; c < key.size(); ++c) {
            key[c] = pair_value[static_cast<std::size_t>(pk.closing_pairs[c])];
        }
        auto [lo, hi] = matching_range(pk, key);
        for (std::size_t m = lo; m < hi; ++m) {
            const std::size_t e = pk.entries[m];
            auto idx = pk.kernel->index(e);
            for (std::size_t o = 0; o < pk.opening_pairs.size(); ++o) {
                pair_value[static_cast<std::size_t>(pk.opening_pairs[o])] =
                    idx[static_cast<std::size_t>(pk.opening_pos[o])];
            }
            walk(q + 1, acc * pk.kernel->value(e));
        }
    }
};

Complex naive_sum(std::span<const StepKernel> kernels, const SlotLayout& l) {
    NaiveWalker w{kernels, l, {}, std::vector<CellIndex>(static_cast<std::size_t>(l.pairs), 0)};
    std::vector<char> open(static_cast<std::size_t>(l.pairs), 0);
    for (std::size_t q = 0; q < kernels.size(); ++q) {
        auto pk = prepare(kernels[q], static_cast<int>(q), l, open);
        for (int p : pk.closing_pairs) open[static_cast<std::size_t>(p)] = 0;
        for (int p : pk.opening_pairs) open[static_cast<std::size_t>(p)] = 1;
        w.prepared.push_back(std::move(pk));
    }
    w.walk(0, Complex{1.0, 0.0});
    return w.total;
}

}  // namespace

Complex pairing_integral(std::span<const StepKernel> kernels, const Pairing& pi, Strategy strategy) {
    const StepKernel* ref = nullptr;
    for (const auto& k : kernels) {
        if (k.order() == 0) continue;
        if (ref) require_same_grid(*ref, k);
        else ref = &k;
    }
    const SlotLayout l = make_layout(kernels, pi);
    const double delta = ref ? ref->grid().delta : 1.0;
    const double measure = std::pow(delta, l.pairs);

    const bool nc = is_noncrossing(pi);
    if (strategy == Strategy::Auto) strategy = nc ? Strategy::Contraction : Strategy::Naive;
    Complex raw;
    if (strategy == Strategy::Naive) {
        raw = naive_sum(kernels, l);
    } else {
        std::vector<int> order(kernels.size());
        std::iota(order.begin(), order.end(), 0);
        if (!nc) order = greedy_order(kernels, l);
        raw = contraction_sweep(kernels, l, order);
    }
    return raw * measure;
}

Complex factorized_pairing_integral(std::span<const StepKernel> kernels, const Pairing& pi) {
    std::vector<int> sizes;
    for (const auto& k : kernels) sizes.push_back(k.order());
    const BlockStructure blocks(sizes);
    Complex product{1.0, 0.0};
    for (const auto& comp : decompose_connected(pi, blocks)) {
        std::vector<StepKernel> sub;
        for (int q : comp.blocks) sub.push_back(kernels[static_cast<std::size_t>(q - 1)]);
        product *= pairing_integral(sub, comp.pairing);
    }
    return product;
}

}  // namespace wigner
