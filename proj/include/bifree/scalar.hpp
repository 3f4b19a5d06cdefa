#ifndef BIFREE_SCALAR_HPP
#define BIFREE_SCALAR_HPP

// Scalar moment and cumulant calculus on words over a typed alphabet.

#include "incidence.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <unordered_map>
#include <vector>

namespace bifree {

struct Letter {
    std::string symbol;
    Side side = Side::Left;
    int family = 1;
};

class Alphabet {
public:
    Alphabet() = default;
    explicit Alphabet(const std::vector<Letter>& letters) {
        for (const auto& l : letters) add(l);
    }

    int add(const Letter& l) {
        if (l.symbol.empty()) throw ArgumentError("letter symbol must be nonempty");
        if (index_.count(l.symbol)) throw ArgumentError("duplicate letter symbol \"" + l.symbol + "\"");
        index_[l.symbol] = size();
        letters_.push_back(l);
        return size() - 1;
    }
    int size() const { return static_cast<int>(letters_.size()); }
    const Letter& operator[](int id) const { return letters_.at(id); }
    const std::vector<Letter>& letters() const { return letters_; }
    bool contains(const std::string& sym) const { return index_.count(sym) > 0; }
    int id(const std::string& sym) const {
        auto it = index_.find(sym);
        if (it == index_.end()) throw ArgumentError("unknown letter \"" + sym + "\"");
        return it->second;
    }
    std::set<int> families() const {
        std::set<int> out;
        for (const auto& l : letters_) out.insert(l.family);
        return out;
    }

private:
    std::vector<Letter> letters_;
    std::map<std::string, int> index_;
};

using AlphabetPtr = std::shared_ptr<const Alphabet>;

// A word is a sequence of letter ids into an alphabet.
using Word = std::vector<int>;

struct WordHash {
    std::size_t operator()(const Word& w) const noexcept {
        std::size_t h = 1469598103934665603ull ^ w.size();
        for (int x : w) h = (h ^ static_cast<std::size_t>(x + 1)) * 1099511628211ull;
        return h;
    }
};

inline ChiMap chi_of(const Alphabet& a, const Word& w) {
    std::vector<Side> s;
    for (int x : w) s.push_back(a[x].side);
    return ChiMap(std::move(s));
}

inline std::vector<int> families_of(const Alphabet& a, const Word& w) {
    std::vector<int> f;
    for (int x : w) f.push_back(a[x].family);
    return f;
}

inline bool is_mixed(const Alphabet& a, const Word& w) {
    for (int x : w)
        if (a[x].family != a[w.front()].family) return true;
    return false;
}

inline std::string word_str(const Alphabet& a, const Word& w) {
    std::string s = "(";
    for (std::size_t i = 0; i < w.size(); ++i) s += (i ? "," : "") + a[w[i]].symbol;
    return s + ")";
}

inline Word word_from_symbols(const Alphabet& a, const std::vector<std::string>& syms) {
    Word w;
    for (const auto& s : syms) w.push_back(a.id(s));
    return w;
}

// Letters at the given 1-based positions, in natural order.
inline Word subword(const Word& w, const std::vector<int>& positions) {
    Word out;
    out.reserve(positions.size());
    for (int p : positions) out.push_back(w[p - 1]);
    return out;
}

// All words of length 1..n over an alphabet of the given size, shortest first.
inline std::vector<Word> all_words(int alphabet_size, int n) {
    std::vector<Word> out;
    std::vector<Word> layer{Word{}};
    for (int len = 1; len <= n; ++len) {
        std::vector<Word> next;
        for (const auto& w : layer)
            for (int x = 0; x < alphabet_size; ++x) {
                Word v = w;
                v.push_back(x);
                next.push_back(v);
            }
        out.insert(out.end(), next.begin(), next.end());
        layer = std::move(next);
    }
    return out;
}

// Distinct nonempty subwords (order-preserving subsequences) of w, shortest first.
inline std::vector<Word> subword_closure(const std::vector<Word>& words) {
    std::set<std::pair<std::size_t, Word>> seen;
    for (const auto& w : words) {
        const int n = static_cast<int>(w.size());
        if (n > 20) throw SizeLimitError("word too long for subword closure");
        for (std::uint32_t mask = 1; mask < (1u << n); ++mask) {
            Word s;
            for (int i = 0; i < n; ++i)
                if (mask & (1u << i)) s.push_back(w[i]);
            seen.emplace(s.size(), std::move(s));
        }
    }
    std::vector<Word> out;
    for (auto& p : seen) out.push_back(p.second);
    return out;
}

class WordTable {
public:
    WordTable(AlphabetPtr alphabet, int order) : alphabet_(std::move(alphabet)), order_(order) {
        if (!alphabet_) throw ArgumentError("null alphabet");
        if (order_ < 0) throw ArgumentError("negative order");
    }
    const Alphabet& alphabet() const { return *alphabet_; }
    const AlphabetPtr& alphabet_ptr() const { return alphabet_; }
    int order() const { return order_; }

    void set(const Word& w, const Rational& v) {
        check_word(w);
        values_[w] = v;
    }
    const Rational* find(const Word& w) const {
        auto it = values_.find(w);
        return it == values_.end() ? nullptr : &it->second;
    }
    std::size_t entries() const { return values_.size(); }

    // Stored words sorted by (length, ids).
    std::vector<Word> words() const {
        std::vector<Word> out;
        for (const auto& kv : values_) out.push_back(kv.first);
        std::sort(out.begin(), out.end(), [](const Word& a, const Word& b) {
            return a.size() != b.size() ? a.size() < b.size() : a < b;
        });
        return out;
    }

protected:
    void check_word(const Word& w) const {
        if (static_cast<int>(w.size()) > order_)
            throw SizeLimitError("word " + word_str(*alphabet_, w) + " exceeds order " + std::to_string(order_));
        for (int x : w)
            if (x < 0 || x >= alphabet_->size()) throw ArgumentError("letter id out of range");
    }

    AlphabetPtr alphabet_;
    int order_;
    std::unordered_map<Word, Rational, WordHash> values_;
};

class MomentFunctional : public WordTable {
public:
    using WordTable::WordTable;
    // Empty word has value 1.
    Rational value(const Word& w) const {
        if (w.empty()) return 1;
        check_word(w);
        if (const Rational* v = find(w)) return *v;
        throw MissingDataError("missing moment for word " + word_str(*alphabet_, w));
    }
};

class CumulantTable : public WordTable {
public:
    using WordTable::WordTable;
    Rational value(const Word& w) const {
        if (w.empty()) throw ArgumentError("cumulant of the empty word");
        check_word(w);
        if (const Rational* v = find(w)) return *v;
        throw MissingDataError("missing cumulant for word " + word_str(*alphabet_, w));
    }
};

inline void require_partition_for(const Alphabet& a, const Word& w, const BiPartition& pi) {
    if (!(pi.chi() == chi_of(a, w)))
        throw ArgumentError("partition chi " + pi.chi().str() + " does not match word " + word_str(a, w));
}

inline Rational phi_pi(const Word& w, const BiPartition& pi, const MomentFunctional& phi) {
    require_partition_for(phi.alphabet(), w, pi);
    Rational acc = 1;
    for (const auto& b : pi.blocks()) acc *= phi.value(subword(w, b));
    return acc;
}

// Moebius route: sum over sigma <= pi of phi_sigma mu(sigma, pi).
inline Rational kappa_pi(const Word& w, const BiPartition& pi, const MomentFunctional& phi) {
    require_partition_for(phi.alphabet(), w, pi);
    auto lat = lattice_index(pi.chi());
    const int j = lat->index_of(pi);
    Rational acc = 0;
    for (int i = 0; i < lat->size(); ++i) {
        if (!lat->leq(i, j)) continue;
        Rational mu = mobius_closed(lat->member(i), pi);
        if (mu != 0) acc += phi_pi(w, lat->member(i), phi) * mu;
    }
    return acc;
}

// Product route: product over blocks of table values.
inline Rational kappa_product(const Word& w, const BiPartition& pi, const CumulantTable& kappa) {
    require_partition_for(kappa.alphabet(), w, pi);
    Rational acc = 1;
    for (const auto& b : pi.blocks()) {
        acc *= kappa.value(subword(w, b));
        if (acc == 0) break;
    }
    return acc;
}

// Triangular solve kappa(w) = phi(w) - sum_{pi != 1} prod_V kappa(w|V), for every
// stored word of length <= N.
inline CumulantTable moments_to_cumulants(const MomentFunctional& phi, int N) {
    CumulantTable out(phi.alphabet_ptr(), N);
    std::function<Rational(const Word&)> kappa = [&](const Word& w) -> Rational {
        if (const Rational* v = out.find(w)) return *v;
        const auto chi = chi_of(phi.alphabet(), w);
        Rational acc = phi.value(w);
        const auto members = bnc_members(chi);
        const auto one = BiPartition::one(chi);
        for (const auto& pi : *members) {
            if (pi.block_count() == 1) continue;
            Rational prod = 1;
            for (const auto& b : pi.blocks()) {
                prod *= kappa(subword(w, b));
                if (prod == 0) break;
            }
            acc -= prod;
        }
        out.set(w, acc);
        return acc;
    };
    for (const auto& w : phi.words())
        if (!w.empty() && static_cast<int>(w.size()) <= N) kappa(w);
    return out;
}

inline MomentFunctional cumulants_to_moments(const CumulantTable& kappa, int N) {
    MomentFunctional out(kappa.alphabet_ptr(), N);
    for (const auto& w : kappa.words()) {
        if (static_cast<int>(w.size()) > N) continue;
        const auto chi = chi_of(kappa.alphabet(), w);
        Rational acc = 0;
        for (const auto& pi : *bnc_members(chi)) acc += kappa_product(w, pi, kappa);
        out.set(w, acc);
    }
    return out;
}

// True if pi refines the family partition of w (every block single-family).
inline bool below_epsilon(const BiPartition& pi, const std::vector<int>& eps) {
    for (const auto& b : pi.blocks())
        for (int x : b)
            if (eps[x - 1] != eps[b.front() - 1]) return false;
    return true;
}

// Joint distribution in which the input families are bi-free: moments are
// sums of products of per-family cumulants over pi <= epsilon.
inline MomentFunctional bifree_product(const std::vector<MomentFunctional>& dists, int N) {
    auto joint = std::make_shared<Alphabet>();
    std::set<int> used_families;
    std::vector<CumulantTable> cums;
    std::vector<std::vector<int>> id_map;  // joint id -> (dist, local id)
    std::vector<std::pair<int, int>> origin;
    for (std::size_t d = 0; d < dists.size(); ++d) {
        const auto fams = dists[d].alphabet().families();
        if (fams.size() != 1) throw ArgumentError("each distribution must cover exactly one family");
        const int f = *fams.begin();
        if (!used_families.insert(f).second)
            throw ArgumentError("overlapping family index " + std::to_string(f));
        for (int x = 0; x < dists[d].alphabet().size(); ++x) {
            joint->add(dists[d].alphabet()[x]);
            origin.emplace_back(static_cast<int>(d), x);
        }
        cums.push_back(moments_to_cumulants(dists[d], N));
    }
    MomentFunctional out(joint, N);
    for (const auto& w : all_words(joint->size(), N)) {
        const auto chi = chi_of(*joint, w);
        const auto eps = families_of(*joint, w);
        Rational acc = 0;
        for (const auto& pi : *bnc_members(chi)) {
            if (!below_epsilon(pi, eps)) continue;
            Rational prod = 1;
            for (const auto& b : pi.blocks()) {
                const int d = origin[w[b.front() - 1]].first;
                Word local;
                for (int p : b) local.push_back(origin[w[p - 1]].second);
                prod *= cums[d].value(local);
                if (prod == 0) break;
            }
            acc += prod;
        }
        out.set(w, acc);
    }
    return out;
}

struct WordValue {
    Word word;
    Rational value;
};

// Every mixed word up to N with a nonzero (l,r)-cumulant. Empty means bi-free to order N.
inline std::vector<WordValue> check_bifree(const MomentFunctional& joint, int N) {
    auto kappa = moments_to_cumulants(joint, N);
    std::vector<WordValue> out;
    for (const auto& w : kappa.words())
        if (is_mixed(joint.alphabet(), w) && *kappa.find(w) != 0) out.push_back({w, *kappa.find(w)});
    return out;
}

// Right side of the universal-polynomial formula:
// sum_pi [ sum_{pi <= sigma <= eps} mu(pi, sigma) ] phi_pi.
inline Rational universal_formula_rhs(const Word& w, const MomentFunctional& phi) {
    const auto chi = chi_of(phi.alphabet(), w);
    const auto eps = families_of(phi.alphabet(), w);
    auto lat = lattice_index(chi);
    Rational acc = 0;
    for (int i = 0; i < lat->size(); ++i) {
        Rational coef = 0;
        for (int j = 0; j < lat->size(); ++j)
            if (lat->leq(i, j) && below_epsilon(lat->member(j), eps))
                coef += mobius_closed(lat->member(i), lat->member(j));
        if (coef != 0) acc += coef * phi_pi(w, lat->member(i), phi);
    }
    return acc;
}

enum class IndependenceMode { Free, Classical, Boolean, Monotone };

inline IndependenceMode parse_mode(std::string_view s) {
    if (s == "free") return IndependenceMode::Free;
    if (s == "classical") return IndependenceMode::Classical;
    if (s == "boolean") return IndependenceMode::Boolean;
    if (s == "monotone") return IndependenceMode::Monotone;
    throw ArgumentError("unknown independence mode \"" + std::string(s) + "\"");
}

// chi_eps of the monotone theorem: l on family 2, r on family 1.
inline ChiMap monotone_chi(const std::vector<int>& eps) {
    std::vector<Side> s;
    for (int e : eps) s.push_back(e == 2 ? Side::Left : Side::Right);
    return ChiMap(std::move(s));
}

inline Rational independence_sum(const CumulantTable& kappa, const Word& w, IndependenceMode mode) {
    const Alphabet& a = kappa.alphabet();
    if (w.empty()) throw ArgumentError("independence_sum of the empty word");
    const auto chi = chi_of(a, w);
    const auto eps = families_of(a, w);
    const int n = static_cast<int>(w.size());
    auto shape_error = [&](const std::string& why) {
        return ArgumentError("word " + word_str(a, w) + " violates the " + why);
    };
    Rational acc = 0;
    switch (mode) {
        case IndependenceMode::Free: {
            for (int k = 1; k <= n; ++k)
                if (chi(k) != chi(1)) throw shape_error("free-mode shape (chi must be constant)");
            for (const auto& pi : *bnc_members(chi))
                if (below_epsilon(pi, eps)) acc += kappa_product(w, pi, kappa);
            return acc;
        }
        case IndependenceMode::Classical: {
            for (int k = 1; k <= n; ++k) {
                if (eps[k - 1] != 1 && eps[k - 1] != 2) throw shape_error("classical-mode shape (families 1,2)");
                if (chi(k) != (eps[k - 1] == 1 ? Side::Left : Side::Right))
                    throw shape_error("classical-mode shape (family 1 left, family 2 right)");
            }
            for (const auto& pi : enumerate_family(chi, Tag::BNC_vs).members) acc += kappa_product(w, pi, kappa);
            return acc;
        }
        case IndependenceMode::Boolean: {
            if (!chi.is_alternating()) throw shape_error("boolean-mode shape (alternating chi)");
            for (int m = 1; 2 * m <= n; ++m)
                if (eps[2 * m - 2] != eps[2 * m - 1]) throw shape_error("boolean-mode shape (paired families)");
            for (const auto& pi : enumerate_family(chi, Tag::BNC_b).members) acc += kappa_product(w, pi, kappa);
            return acc;
        }
        case IndependenceMode::Monotone: {
            for (int k = 1; k <= n; ++k) {
                if (eps[k - 1] != 1 && eps[k - 1] != 2) throw shape_error("monotone-mode shape (families 1,2)");
                if (chi(k) != Side::Left) throw shape_error("monotone-mode shape (letters evaluated as left)");
            }
            for (const auto& pi : enumerate_family(monotone_chi(eps), Tag::BNC_m).members)
                acc += kappa_product(w, BiPartition(chi, pi.blocks()), kappa);
            return acc;
        }
    }
    throw InternalError("unreachable independence mode");
}

// kappa_{1_chi} on the interleaved word T_{k1,Z1} S_{k1} ... T_{kn,Zn} S_{kn}.
inline Rational boolean_cumulant(const Word& embedded_word, const MomentFunctional& embedded) {
    const auto chi = chi_of(embedded.alphabet(), embedded_word);
    if (!chi.is_alternating()) throw ArgumentError("boolean cumulant needs an interleaved T,S word");
    return kappa_pi(embedded_word, BiPartition::one(chi), embedded);
}

using WordFunction = std::function<Rational(const Word&)>;

// Moments supplied on demand (e.g. by an operator model) with memoized
// (l,r)-cumulants. Used when tabulating every word to the order is too costly.
class LazyCumulants {
public:
    LazyCumulants(AlphabetPtr alphabet, WordFunction moment) : alphabet_(std::move(alphabet)), moment_(std::move(moment)) {
        if (!alphabet_) throw ArgumentError("null alphabet");
    }
    const Alphabet& alphabet() const { return *alphabet_; }

    Rational moment(const Word& w) {
        if (w.empty()) return 1;
        auto it = moments_.find(w);
        if (it != moments_.end()) return it->second;
        Rational v = moment_(w);
        moments_.emplace(w, v);
        return v;
    }

    Rational cumulant(const Word& w) {
        if (w.empty()) throw ArgumentError("cumulant of the empty word");
        auto it = cumulants_.find(w);
        if (it != cumulants_.end()) return it->second;
        Rational acc = moment(w);
        for (const auto& pi : *bnc_members(chi_of(*alphabet_, w))) {
            if (pi.block_count() == 1) continue;
            Rational prod = 1;
            for (const auto& b : pi.blocks()) {
                prod *= cumulant(subword(w, b));
                if (prod == 0) break;
            }
            acc -= prod;
        }
        cumulants_.emplace(w, acc);
        return acc;
    }

    Rational phi_pi(const Word& w, const BiPartition& pi) {
        require_partition_for(*alphabet_, w, pi);
        Rational acc = 1;
        for (const auto& b : pi.blocks()) {
            acc *= moment(subword(w, b));
            if (acc == 0) break;
        }
        return acc;
    }

    Rational kappa_product(const Word& w, const BiPartition& pi) {
        require_partition_for(*alphabet_, w, pi);
        Rational acc = 1;
        for (const auto& b : pi.blocks()) {
            acc *= cumulant(subword(w, b));
            if (acc == 0) break;
        }
        return acc;
    }

private:
    AlphabetPtr alphabet_;
    WordFunction moment_;
    std::unordered_map<Word, Rational, WordHash> moments_, cumulants_;
};

// ---- Kac/Loeve ----

struct Rotation {
    Rational c, s;
};

inline void validate_rotation(const Rotation& r) {
    if (r.c <= 0 || r.c >= 1 || r.s <= 0 || r.s >= 1)
        throw ArgumentError("rotation coordinates must lie strictly inside (0,1)");
    if (r.c * r.c + r.s * r.s != 1) throw ArgumentError("rotation (c,s) must satisfy c^2 + s^2 = 1");
}

// Pair alphabet {T (left), S (right)} for one family.
inline AlphabetPtr pair_alphabet(const std::string& t, const std::string& s, int family) {
    return std::make_shared<Alphabet>(std::vector<Letter>{{t, Side::Left, family}, {s, Side::Right, family}});
}

// Cumulant table of a pair over {T,S} from a function of chi strings.
inline CumulantTable pair_cumulants(const AlphabetPtr& pair, int N,
                                    const std::function<Rational(const std::string&)>& value_of_chi) {
    CumulantTable out(pair, N);
    for (const auto& w : all_words(2, N)) out.set(w, value_of_chi(chi_of(*pair, w).str()));
    return out;
}

struct LocatedCumulant {
    int pair = 0;             // 1 or 2
    std::string chi;          // input chi pattern
    Rational input_value;     // the offending input cumulant
    std::string rotated_word; // e.g. (T3,S3,T4)
    Rational rotated_value;
    Rational determinant;     // of the 2x2 system (order >= 3) or the single coefficient (order 2)
};

struct KacLoeveReport {
    std::vector<std::pair<std::string, Rational>> mixed_nonzero;  // rotated mixed cumulants
    bool central_limit = true;
    bool equal_covariance = true;
    bool same_rotation = true;
    std::vector<LocatedCumulant> located;
    // Same rotation: vanishing iff central limit with equal covariance.
    // Separate rotations: vanishing only forces central limit.
    bool consistent() const {
        if (!same_rotation) return !mixed_nonzero.empty() || central_limit;
        return (central_limit && equal_covariance) == mixed_nonzero.empty();
    }
};

// The rotated pairs (T3,S3), (T4,S4) built by multilinearity from the bi-free
// product of the two input pairs. Left letters use rot_left, right letters rot_right.
inline KacLoeveReport kac_loeve(const CumulantTable& pair1, const CumulantTable& pair2, const Rotation& rot_left,
                                const Rotation& rot_right, int N) {
    validate_rotation(rot_left);
    validate_rotation(rot_right);
    const CumulantTable* in[2] = {&pair1, &pair2};
    std::vector<MomentFunctional> dists;
    for (int k = 0; k < 2; ++k) {
        const auto& a = in[k]->alphabet();
        if (a.size() != 2 || a[0].side != Side::Left || a[1].side != Side::Right)
            throw ArgumentError("each pair must be an alphabet {T (left), S (right)}");
        auto relabeled = pair_alphabet("T" + std::to_string(k + 1), "S" + std::to_string(k + 1), k + 1);
        CumulantTable c(relabeled, N);
        for (const auto& w : all_words(2, N)) c.set(w, in[k]->value(w));
        auto m = cumulants_to_moments(c, N);
        if (m.value({0}) != 0 || m.value({1}) != 0)
            throw ArgumentError("pair " + std::to_string(k + 1) + " must have phi(T) = phi(S) = 0");
        dists.push_back(std::move(m));
    }
    auto joint = bifree_product(dists, N);
    // joint ids: 0 T1, 1 S1, 2 T2, 3 S2.
    auto rotated = std::make_shared<Alphabet>(std::vector<Letter>{
        {"T3", Side::Left, 3}, {"S3", Side::Right, 3}, {"T4", Side::Left, 4}, {"S4", Side::Right, 4}});
    // coefficient of source pair k (0,1) in rotated letter x.
    auto coef = [&](int x, int k) -> Rational {
        const Rotation& r = (x % 2 == 0) ? rot_left : rot_right;
        const bool three = x < 2;
        if (three) return k == 0 ? r.c : r.s;
        return k == 0 ? Rational(-r.s) : r.c;
    };
    MomentFunctional rot_moments(rotated, N);
    for (const auto& w : all_words(4, N)) {
        const int n = static_cast<int>(w.size());
        Rational acc = 0;
        for (std::uint32_t mask = 0; mask < (1u << n); ++mask) {
            Word src;
            Rational c = 1;
            for (int i = 0; i < n; ++i) {
                const int k = (mask >> i) & 1;
                c *= coef(w[i], k);
                src.push_back(2 * k + (w[i] % 2));
            }
            acc += c * joint.value(src);
        }
        rot_moments.set(w, acc);
    }
    auto rot_kappa = moments_to_cumulants(rot_moments, N);

    KacLoeveReport rep;
    rep.same_rotation = rot_left.c == rot_right.c && rot_left.s == rot_right.s;
    for (const auto& w : rot_kappa.words())
        if (is_mixed(*rotated, w) && *rot_kappa.find(w) != 0)
            rep.mixed_nonzero.emplace_back(word_str(*rotated, w), *rot_kappa.find(w));

    for (const auto& w : all_words(2, N)) {
        const int n = static_cast<int>(w.size());
        const Rational k1 = in[0]->value(w), k2 = in[1]->value(w);
        if (n >= 3 && (k1 != 0 || k2 != 0)) rep.central_limit = false;
        if (n == 2 && k1 != k2) rep.equal_covariance = false;
        if (n < 2 || (n == 2 && !rep.same_rotation)) continue;
        const bool offending = (n >= 3) ? (k1 != 0 || k2 != 0) : (k1 != k2);
        if (!offending) continue;
        // Rotated words: all 3's with a trailing 4, and all 3's with two trailing 4's.
        auto rotated_word = [&](int fours) {
            Word r;
            for (int i = 0; i < n; ++i) r.push_back((i >= n - fours ? 2 : 0) + w[i]);
            return r;
        };
        auto coef_product = [&](const Word& r, int k) {
            Rational c = 1;
            for (int x : r) c *= coef(x, k);
            return c;
        };
        Word r1 = rotated_word(1);
        std::optional<Word> r2;
        if (n >= 3) r2 = rotated_word(2);
        Rational det = coef_product(r1, 0);
        if (r2) det = coef_product(r1, 0) * coef_product(*r2, 1) - coef_product(r1, 1) * coef_product(*r2, 0);
        Word pick = r1;
        if (r2 && rot_kappa.value(r1) == 0) pick = *r2;
        const std::string chi = chi_of(*in[0]->alphabet_ptr(), w).str();
        if (n >= 3) {
            if (k1 != 0) rep.located.push_back({1, chi, k1, word_str(*rotated, pick), rot_kappa.value(pick), det});
            if (k2 != 0) rep.located.push_back({2, chi, k2, word_str(*rotated, pick), rot_kappa.value(pick), det});
        } else {
            rep.located.push_back({1, chi, k1 - k2, word_str(*rotated, pick), rot_kappa.value(pick), det});
        }
    }
    return rep;
}

inline KacLoeveReport kac_loeve(const CumulantTable& pair1, const CumulantTable& pair2, const Rotation& rot, int N) {
    return kac_loeve(pair1, pair2, rot, rot, N);
}

}  // namespace bifree

#endif
