#ifndef BIFREE_INCIDENCE_HPP
#define BIFREE_INCIDENCE_HPP

// The Moebius function of BNC(chi): by the closed relation to NC(n) and by
// the defining recursion over the enumerated interval.

#include "bnc.hpp"

#include <map>
#include <memory>
#include <mutex>
#include <unordered_map>

namespace bifree {

// Enumerated BNC(chi) with a precomputed refinement relation.
class LatticeIndex {
public:
    explicit LatticeIndex(const ChiMap& chi) : chi_(chi), members_(bnc_members(chi)) {
        const int m = size();
        for (int i = 0; i < m; ++i) index_.emplace((*members_)[i].blocks(), i);
        leq_.assign(m, std::vector<char>(m, 0));
        std::vector<std::vector<int>> labels;
        for (const auto& p : *members_) labels.push_back(p.labels());
        for (int i = 0; i < m; ++i)
            for (int j = 0; j < m; ++j) {
                bool ok = true;
                for (const auto& b : (*members_)[i].blocks()) {
                    for (int x : b)
                        if (labels[j][x] != labels[j][b.front()]) {
                            ok = false;
                            break;
                        }
                    if (!ok) break;
                }
                leq_[i][j] = ok;
            }
        order_.resize(m);
        std::iota(order_.begin(), order_.end(), 0);
        // Finer partitions (more blocks) first.
        std::stable_sort(order_.begin(), order_.end(), [&](int a, int b) {
            return (*members_)[a].block_count() > (*members_)[b].block_count();
        });
        rows_.resize(m);
    }

    const ChiMap& chi() const { return chi_; }
    int size() const { return static_cast<int>(members_->size()); }
    const BiPartition& member(int i) const { return (*members_)[i]; }
    bool leq(int i, int j) const { return leq_[i][j]; }

    int index_of(const BiPartition& pi) const {
        if (!(pi.chi() == chi_)) throw ArgumentError("partition chi does not match lattice");
        auto it = index_.find(pi.blocks());
        if (it == index_.end()) throw ArgumentError("partition " + pi.str() + " is not bi-non-crossing");
        return it->second;
    }

    // mu(i, .) by the recursion mu(i,tau) = -sum_{i <= rho < tau} mu(i,rho).
    const std::vector<Rational>& recursive_row(int i) const {
        std::lock_guard<std::mutex> lock(mu_);
        auto& row = rows_[i];
        if (!row.empty()) return row;
        std::vector<Rational> r(size(), 0);
        for (int t : order_) {
            if (!leq_[i][t]) continue;
            if (t == i) {
                r[t] = 1;
                continue;
            }
            Rational acc = 0;
            for (int p : order_) {
                if (p != t && leq_[i][p] && leq_[p][t]) acc += r[p];
            }
            r[t] = -acc;
        }
        row = std::move(r);
        return row;
    }

private:
    ChiMap chi_;
    std::shared_ptr<const std::vector<BiPartition>> members_;
    std::map<Blocks, int> index_;
    std::vector<std::vector<char>> leq_;
    std::vector<int> order_;
    mutable std::mutex mu_;
    mutable std::vector<std::vector<Rational>> rows_;
};

inline std::shared_ptr<const LatticeIndex> lattice_index(const ChiMap& chi) {
    static std::mutex mu;
    static std::map<std::string, std::shared_ptr<const LatticeIndex>> cache;
    const std::string key = chi.str();
    {
        std::lock_guard<std::mutex> lock(mu);
        auto it = cache.find(key);
        if (it != cache.end()) return it->second;
    }
    auto built = std::make_shared<const LatticeIndex>(chi);
    std::lock_guard<std::mutex> lock(mu);
    return cache.emplace(key, built).first->second;
}

inline Rational mobius_recursive(const BiPartition& pi, const BiPartition& sigma) {
    require_same_chi(pi, sigma);
    auto lat = lattice_index(pi.chi());
    int i = lat->index_of(pi), j = lat->index_of(sigma);
    return lat->recursive_row(i)[j];
}

// mu_NC(0_m, 1_m) = (-1)^{m-1} Cat(m-1).
inline Rational mobius_nc_full(int m) {
    mpz_class cat = 1;  // Cat(m-1)
    for (int k = 0; k < m - 1; ++k) cat = cat * 2 * (2 * k + 1) / (k + 2);
    Rational r(cat);
    return (m % 2 == 1) ? r : Rational(-r);
}

// Cycle lengths of the Kreweras complement of a non-crossing partition of {1..m}.
inline std::vector<int> kreweras_cycle_type(const Blocks& nc, int m) {
    std::vector<int> perm_inv(m + 1);
    for (const auto& b : nc)
        for (std::size_t t = 0; t < b.size(); ++t) perm_inv[b[(t + 1) % b.size()]] = b[t];
    std::vector<bool> seen(m + 1, false);
    std::vector<int> lengths;
    for (int x = 1; x <= m; ++x) {
        if (seen[x]) continue;
        int len = 0;
        for (int y = x; !seen[y]; y = perm_inv[y % m + 1]) {
            seen[y] = true;
            ++len;
        }
        lengths.push_back(len);
    }
    return lengths;
}

namespace detail {
inline std::mutex& closed_memo_mutex() {
    static std::mutex m;
    return m;
}
inline std::unordered_map<std::string, Rational>& closed_memo() {
    static std::unordered_map<std::string, Rational> m;
    return m;
}
}  // namespace detail

// Conjugate by s_chi, then factor [pi, sigma] in NC(n) blockwise through
// Kreweras complements into full NC lattices.
inline Rational mobius_closed(const BiPartition& pi, const BiPartition& sigma) {
    require_same_chi(pi, sigma);
    if (!is_bnc(pi) || !is_bnc(sigma)) throw ArgumentError("mobius requires bi-non-crossing partitions");
    if (!refines(pi, sigma)) return 0;
    const std::string key = pi.chi().str() + pi.str() + sigma.str();
    {
        std::lock_guard<std::mutex> lock(detail::closed_memo_mutex());
        auto it = detail::closed_memo().find(key);
        if (it != detail::closed_memo().end()) return it->second;
    }
    const int n = pi.size();
    auto inv = s_chi(pi.chi()).inverse();
    Blocks p = apply_permutation(inv, pi.blocks());
    Blocks s = apply_permutation(inv, sigma.blocks());
    std::vector<int> plab(n + 1);
    for (std::size_t i = 0; i < p.size(); ++i)
        for (int x : p[i]) plab[x] = static_cast<int>(i);
    Rational result = 1;
    for (const auto& v : s) {
        const int m = static_cast<int>(v.size());
        std::map<int, std::vector<int>> sub;
        for (int t = 0; t < m; ++t) sub[plab[v[t]]].push_back(t + 1);
        Blocks restricted;
        for (auto& kv : sub) restricted.push_back(kv.second);
        for (int len : kreweras_cycle_type(restricted, m)) result *= mobius_nc_full(len);
    }
    std::lock_guard<std::mutex> lock(detail::closed_memo_mutex());
    detail::closed_memo()[key] = result;
    return result;
}

// Function on (a subfamily of) BNC(chi), keyed by partition.
using PartitionFunction = std::map<BiPartition, Rational>;

inline std::vector<BiPartition> inversion_family(const ChiMap& chi, bool restrict_to_boolean) {
    return restrict_to_boolean ? enumerate_family(chi, Tag::BNC_b).members : *bnc_members(chi);
}

// g(pi) = sum_{sigma <= pi in family} f(sigma) mu_BNC(sigma, pi), so that
// f(pi) = sum_{sigma <= pi} g(sigma).
inline PartitionFunction mobius_invert(const PartitionFunction& f, const ChiMap& chi, bool restrict_to_boolean) {
    auto fam = inversion_family(chi, restrict_to_boolean);
    for (const auto& pi : fam)
        if (!f.count(pi)) throw ArgumentError("table missing entry for " + pi.str());
    PartitionFunction g;
    for (const auto& pi : fam) {
        Rational acc = 0;
        for (const auto& sigma : fam)
            if (refines(sigma, pi)) acc += f.at(sigma) * mobius_closed(sigma, pi);
        g[pi] = acc;
    }
    return g;
}

// f(pi) = sum_{sigma <= pi in family} g(sigma).
inline PartitionFunction zeta_sum(const PartitionFunction& g, const ChiMap& chi, bool restrict_to_boolean) {
    auto fam = inversion_family(chi, restrict_to_boolean);
    for (const auto& pi : fam)
        if (!g.count(pi)) throw ArgumentError("table missing entry for " + pi.str());
    PartitionFunction f;
    for (const auto& pi : fam) {
        Rational acc = 0;
        for (const auto& sigma : fam)
            if (refines(sigma, pi)) acc += g.at(sigma);
        f[pi] = acc;
    }
    return f;
}

}  // namespace bifree

#endif
