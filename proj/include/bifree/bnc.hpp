#ifndef BIFREE_BNC_HPP
#define BIFREE_BNC_HPP

// Chi-maps, the s_chi permutation and bi-non-crossing partitions.
// Indices are 1-based throughout.

#include "core.hpp"

#include <algorithm>
#include <map>
#include <memory>
#include <mutex>
#include <numeric>
#include <sstream>
#include <string>
#include <vector>

namespace bifree {

enum class Side : std::uint8_t { Left, Right };

inline char side_char(Side s) { return s == Side::Left ? 'L' : 'R'; }

inline Side parse_side(std::string_view s) {
    if (s == "L" || s == "l" || s == "left") return Side::Left;
    if (s == "R" || s == "r" || s == "right") return Side::Right;
    throw ArgumentError("unknown side \"" + std::string(s) + "\"");
}

using Blocks = std::vector<std::vector<int>>;

class ChiMap {
public:
    explicit ChiMap(std::vector<Side> sides) : sides_(std::move(sides)) {
        if (sides_.empty()) throw ArgumentError("chi must have length >= 1");
    }

    static ChiMap parse(std::string_view text) {
        std::vector<Side> s;
        for (char c : text) {
            if (c == 'L' || c == 'l')
                s.push_back(Side::Left);
            else if (c == 'R' || c == 'r')
                s.push_back(Side::Right);
            else
                throw ArgumentError("chi string may only contain L and R: \"" + std::string(text) + "\"");
        }
        return ChiMap(std::move(s));
    }
    static ChiMap constant(int n, Side side) { return ChiMap(std::vector<Side>(n, side)); }
    // L at odd positions, R at even positions, length 2*pairs.
    static ChiMap alternating(int pairs) {
        std::vector<Side> s;
        for (int k = 0; k < pairs; ++k) {
            s.push_back(Side::Left);
            s.push_back(Side::Right);
        }
        return ChiMap(std::move(s));
    }

    int size() const { return static_cast<int>(sides_.size()); }
    Side operator()(int k) const { return sides_.at(k - 1); }
    const std::vector<Side>& sides() const { return sides_; }

    std::vector<int> left_indices() const { return indices(Side::Left); }
    std::vector<int> right_indices() const { return indices(Side::Right); }

    bool is_alternating() const {
        if (size() % 2) return false;
        for (int k = 1; k <= size(); ++k)
            if ((*this)(k) != (k % 2 ? Side::Left : Side::Right)) return false;
        return true;
    }

    ChiMap restrict_to(const std::vector<int>& positions) const {
        std::vector<Side> s;
        for (int p : positions) s.push_back((*this)(p));
        return ChiMap(std::move(s));
    }

    std::string str() const {
        std::string out;
        for (Side s : sides_) out += side_char(s);
        return out;
    }

    friend bool operator==(const ChiMap& a, const ChiMap& b) { return a.sides_ == b.sides_; }
    friend bool operator<(const ChiMap& a, const ChiMap& b) { return a.sides_ < b.sides_; }

private:
    std::vector<int> indices(Side side) const {
        std::vector<int> out;
        for (int k = 1; k <= size(); ++k)
            if ((*this)(k) == side) out.push_back(k);
        return out;
    }
    std::vector<Side> sides_;
};

class Permutation {
public:
    explicit Permutation(std::vector<int> images) : images_(std::move(images)) {
        std::vector<bool> seen(images_.size() + 1, false);
        for (int v : images_) {
            if (v < 1 || v > size() || seen[v]) throw ArgumentError("not a permutation");
            seen[v] = true;
        }
    }
    int size() const { return static_cast<int>(images_.size()); }
    int operator()(int k) const { return images_.at(k - 1); }
    const std::vector<int>& images() const { return images_; }
    Permutation inverse() const {
        std::vector<int> inv(images_.size());
        for (int k = 1; k <= size(); ++k) inv[(*this)(k) - 1] = k;
        return Permutation(std::move(inv));
    }
    friend bool operator==(const Permutation& a, const Permutation& b) { return a.images_ == b.images_; }

private:
    std::vector<int> images_;
};

// k -> i_k: left indices ascending, then right indices descending.
inline Permutation s_chi(const ChiMap& chi) {
    std::vector<int> img = chi.left_indices();
    auto right = chi.right_indices();
    img.insert(img.end(), right.rbegin(), right.rend());
    return Permutation(std::move(img));
}

// a precedes b in the chi order.
inline bool precedes_chi(const ChiMap& chi, int a, int b) {
    auto inv = s_chi(chi).inverse();
    return inv(a) < inv(b);
}

inline Blocks canonical_blocks(Blocks blocks) {
    for (auto& b : blocks) std::sort(b.begin(), b.end());
    std::sort(blocks.begin(), blocks.end(),
              [](const std::vector<int>& x, const std::vector<int>& y) { return x.front() < y.front(); });
    return blocks;
}

inline Blocks apply_permutation(const Permutation& p, const Blocks& blocks) {
    Blocks out;
    out.reserve(blocks.size());
    for (const auto& b : blocks) {
        std::vector<int> nb;
        nb.reserve(b.size());
        for (int x : b) nb.push_back(p(x));
        out.push_back(std::move(nb));
    }
    return canonical_blocks(std::move(out));
}

inline std::string blocks_str(const Blocks& blocks) {
    std::ostringstream os;
    os << '{';
    for (std::size_t i = 0; i < blocks.size(); ++i) {
        if (i) os << ',';
        os << '{';
        for (std::size_t j = 0; j < blocks[i].size(); ++j) os << (j ? "," : "") << blocks[i][j];
        os << '}';
    }
    os << '}';
    return os.str();
}

class BiPartition {
public:
    BiPartition(ChiMap chi, Blocks blocks) : chi_(std::move(chi)) {
        const int n = chi_.size();
        std::vector<int> seen(n + 1, 0);
        for (const auto& b : blocks) {
            if (b.empty()) throw ArgumentError("empty block");
            for (int x : b) {
                if (x < 1 || x > n) throw ArgumentError("block element out of range");
                if (seen[x]++) throw ArgumentError("blocks overlap");
            }
        }
        for (int k = 1; k <= n; ++k)
            if (!seen[k]) throw ArgumentError("blocks do not cover {1..n}");
        blocks_ = canonical_blocks(std::move(blocks));
    }

    static BiPartition zero(const ChiMap& chi) {
        Blocks b;
        for (int k = 1; k <= chi.size(); ++k) b.push_back({k});
        return BiPartition(chi, std::move(b));
    }
    static BiPartition one(const ChiMap& chi) {
        std::vector<int> all(chi.size());
        std::iota(all.begin(), all.end(), 1);
        return BiPartition(chi, Blocks{all});
    }

    const ChiMap& chi() const { return chi_; }
    const Blocks& blocks() const { return blocks_; }
    int size() const { return chi_.size(); }
    int block_count() const { return static_cast<int>(blocks_.size()); }

    // labels[k] = index of the block containing k (labels[0] unused).
    std::vector<int> labels() const {
        std::vector<int> lab(size() + 1, -1);
        for (std::size_t i = 0; i < blocks_.size(); ++i)
            for (int x : blocks_[i]) lab[x] = static_cast<int>(i);
        return lab;
    }

    std::string str() const { return blocks_str(blocks_); }

    friend bool operator==(const BiPartition& a, const BiPartition& b) {
        return a.chi_ == b.chi_ && a.blocks_ == b.blocks_;
    }
    friend bool operator!=(const BiPartition& a, const BiPartition& b) { return !(a == b); }
    friend bool operator<(const BiPartition& a, const BiPartition& b) {
        if (!(a.chi_ == b.chi_)) return a.chi_ < b.chi_;
        return a.blocks_ < b.blocks_;
    }

private:
    ChiMap chi_;
    Blocks blocks_;
};

// Non-crossing under the standard order on {1..n}.
inline bool is_noncrossing(const Blocks& blocks, int n) {
    std::vector<int> lab(n + 1, -1);
    for (std::size_t i = 0; i < blocks.size(); ++i)
        for (int x : blocks[i]) lab[x] = static_cast<int>(i);
    // a < b < c < d with a,c in one block and b,d in another.
    for (int a = 1; a <= n; ++a)
        for (int b = a + 1; b <= n; ++b) {
            if (lab[b] == lab[a]) continue;
            for (int c = b + 1; c <= n; ++c) {
                if (lab[c] != lab[a]) continue;
                for (int d = c + 1; d <= n; ++d)
                    if (lab[d] == lab[b]) return false;
            }
        }
    return true;
}

inline bool is_bnc(const BiPartition& pi) {
    auto inv = s_chi(pi.chi()).inverse();
    return is_noncrossing(apply_permutation(inv, pi.blocks()), pi.size());
}

namespace detail {

inline std::vector<Blocks> build_nc(int n) {
    // First-block decomposition: either 1 is a singleton, or c is the second
    // element of the block of 1; (1, c) splits the rest into NC(2..c-1) and
    // NC(c..n) with 1 joined to the block of c.
    std::vector<std::vector<Blocks>> table(n + 1);
    table[0] = {Blocks{}};
    auto shifted = [](const Blocks& b, int off) {
        Blocks out = b;
        for (auto& blk : out)
            for (int& x : blk) x += off;
        return out;
    };
    for (int len = 1; len <= n; ++len) {
        auto& out = table[len];
        for (const auto& rest : table[len - 1]) {
            Blocks b{{1}};
            auto s = shifted(rest, 1);
            b.insert(b.end(), s.begin(), s.end());
            out.push_back(std::move(b));
        }
        for (int c = 2; c <= len; ++c) {
            for (const auto& inner : table[c - 2]) {
                auto in = shifted(inner, 1);
                for (const auto& tail : table[len - c + 1]) {
                    auto t = shifted(tail, c - 1);
                    for (auto& blk : t)
                        if (blk.front() == c) blk.insert(blk.begin(), 1);
                    Blocks b = in;
                    b.insert(b.end(), t.begin(), t.end());
                    out.push_back(canonical_blocks(std::move(b)));
                }
            }
        }
    }
    return table[n];
}

}  // namespace detail

// NC(n) as canonical block lists, cached.
inline std::shared_ptr<const std::vector<Blocks>> nc_partitions(int n) {
    if (n < 0 || n > kMaxPartitionSize)
        throw SizeLimitError("partition size " + std::to_string(n) + " exceeds bound " +
                             std::to_string(kMaxPartitionSize));
    static std::mutex mu;
    static std::map<int, std::shared_ptr<const std::vector<Blocks>>> cache;
    {
        std::lock_guard<std::mutex> lock(mu);
        auto it = cache.find(n);
        if (it != cache.end()) return it->second;
    }
    auto built = std::make_shared<const std::vector<Blocks>>(detail::build_nc(n));
    std::lock_guard<std::mutex> lock(mu);
    return cache.emplace(n, built).first->second;
}

enum class Tag { BNC, BNC_vs, BNC_b, BNC_m };

inline std::string tag_name(Tag t) {
    switch (t) {
        case Tag::BNC: return "BNC";
        case Tag::BNC_vs: return "BNC_vs";
        case Tag::BNC_b: return "BNC_b";
        case Tag::BNC_m: return "BNC_m";
    }
    return "?";
}

inline Tag parse_tag(std::string_view s) {
    if (s == "BNC") return Tag::BNC;
    if (s == "BNC_vs") return Tag::BNC_vs;
    if (s == "BNC_b") return Tag::BNC_b;
    if (s == "BNC_m") return Tag::BNC_m;
    throw ArgumentError("unknown partition family tag \"" + std::string(s) + "\"");
}

struct PartitionFamily {
    Tag tag;
    ChiMap chi;
    std::vector<BiPartition> members;
};

// Cached BNC(chi), sorted by block lists.
inline std::shared_ptr<const std::vector<BiPartition>> bnc_members(const ChiMap& chi,
                                                                   int bound = kMaxPartitionSize) {
    if (chi.size() > bound)
        throw SizeLimitError("chi of length " + std::to_string(chi.size()) + " exceeds bound " +
                             std::to_string(bound));
    static std::mutex mu;
    static std::map<std::string, std::shared_ptr<const std::vector<BiPartition>>> cache;
    const std::string key = chi.str();
    {
        std::lock_guard<std::mutex> lock(mu);
        auto it = cache.find(key);
        if (it != cache.end()) return it->second;
    }
    auto s = s_chi(chi);
    std::vector<BiPartition> out;
    for (const auto& nc : *nc_partitions(chi.size())) out.emplace_back(chi, apply_permutation(s, nc));
    std::sort(out.begin(), out.end());
    auto built = std::make_shared<const std::vector<BiPartition>>(std::move(out));
    std::lock_guard<std::mutex> lock(mu);
    return cache.emplace(key, built).first->second;
}

inline PartitionFamily enumerate_bnc(const ChiMap& chi, int bound = kMaxPartitionSize) {
    return PartitionFamily{Tag::BNC, chi, *bnc_members(chi, bound)};
}

inline void require_same_chi(const BiPartition& a, const BiPartition& b) {
    if (!(a.chi() == b.chi())) throw ArgumentError("partitions carry different chi maps");
}

inline bool refines(const BiPartition& pi, const BiPartition& sigma) {
    require_same_chi(pi, sigma);
    auto lab = sigma.labels();
    for (const auto& b : pi.blocks())
        for (int x : b)
            if (lab[x] != lab[b.front()]) return false;
    return true;
}

inline BiPartition lattice_meet(const BiPartition& pi, const BiPartition& sigma) {
    require_same_chi(pi, sigma);
    if (!is_bnc(pi) || !is_bnc(sigma)) throw ArgumentError("meet requires bi-non-crossing inputs");
    Blocks out;
    for (const auto& a : pi.blocks())
        for (const auto& b : sigma.blocks()) {
            std::vector<int> c;
            std::set_intersection(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(c));
            if (!c.empty()) out.push_back(std::move(c));
        }
    return BiPartition(pi.chi(), std::move(out));
}

// Least upper bound inside the enumerated lattice: the meet of every member
// lying above both arguments.
inline BiPartition lattice_join(const BiPartition& pi, const BiPartition& sigma) {
    require_same_chi(pi, sigma);
    if (!is_bnc(pi) || !is_bnc(sigma)) throw ArgumentError("join requires bi-non-crossing inputs");
    BiPartition acc = BiPartition::one(pi.chi());
    for (const auto& tau : *bnc_members(pi.chi()))
        if (refines(pi, tau) && refines(sigma, tau)) acc = lattice_meet(acc, tau);
    return acc;
}

inline bool is_vertically_split(const BiPartition& pi) {
    for (const auto& b : pi.blocks())
        for (int x : b)
            if (pi.chi()(x) != pi.chi()(b.front())) return false;
    return true;
}

inline bool is_boolean(const BiPartition& pi) {
    if (!pi.chi().is_alternating()) return false;
    auto lab = pi.labels();
    for (int k = 1; 2 * k <= pi.size(); ++k)
        if (lab[2 * k - 1] != lab[2 * k]) return false;
    return true;
}

inline bool is_monotone(const BiPartition& pi) {
    if (!is_vertically_split(pi)) return false;
    const auto& chi = pi.chi();
    for (const auto& b : pi.blocks()) {
        if (chi(b.front()) != Side::Left) continue;
        for (std::size_t i = 0; i + 1 < b.size(); ++i)
            for (int p = b[i] + 1; p < b[i + 1]; ++p)
                if (chi(p) == Side::Right) return false;
    }
    return true;
}

inline std::vector<Tag> classify(const BiPartition& pi) {
    std::vector<Tag> tags;
    if (is_vertically_split(pi)) tags.push_back(Tag::BNC_vs);
    if (is_boolean(pi)) tags.push_back(Tag::BNC_b);
    if (is_monotone(pi)) tags.push_back(Tag::BNC_m);
    return tags;
}

inline bool has_tag(const BiPartition& pi, Tag tag) {
    switch (tag) {
        case Tag::BNC: return is_bnc(pi);
        case Tag::BNC_vs: return is_vertically_split(pi);
        case Tag::BNC_b: return is_boolean(pi);
        case Tag::BNC_m: return is_monotone(pi);
    }
    return false;
}

inline PartitionFamily enumerate_family(const ChiMap& chi, Tag tag) {
    if (tag == Tag::BNC_b && !chi.is_alternating())
        throw ArgumentError("BNC_b requires an alternating chi, got " + chi.str());
    PartitionFamily fam{tag, chi, {}};
    for (const auto& pi : *bnc_members(chi))
        if (has_tag(pi, tag)) fam.members.push_back(pi);
    return fam;
}

// Interval partition of {1..n} -> Boolean partition on the alternating chi of length 2n.
inline BiPartition interval_bijection(const Blocks& interval_partition) {
    auto blocks = canonical_blocks(interval_partition);
    int n = 0;
    for (const auto& b : blocks) n += static_cast<int>(b.size());
    int expect = 1;
    for (const auto& b : blocks)
        for (int x : b) {
            if (x != expect++) throw ArgumentError("not an interval partition: " + blocks_str(blocks));
        }
    Blocks out;
    for (const auto& b : blocks) {
        std::vector<int> nb;
        for (int x = 2 * b.front() - 1; x <= 2 * b.back(); ++x) nb.push_back(x);
        out.push_back(std::move(nb));
    }
    return BiPartition(ChiMap::alternating(n), std::move(out));
}

// One row per node: index, side column, block letter.
inline std::string render_ascii(const BiPartition& pi) {
    auto lab = pi.labels();
    std::ostringstream os;
    for (int k = 1; k <= pi.size(); ++k) {
        char name = static_cast<char>('a' + lab[k] % 26);
        if (pi.chi()(k) == Side::Left)
            os << k << " " << name << " |   |\n";
        else
            os << k << "   |   | " << name << "\n";
    }
    return os.str();
}

}  // namespace bifree

#endif
