#ifndef BIFREE_SERIES_HPP
#define BIFREE_SERIES_HPP

// Truncated power series over exact rationals and the partial R-transform
// identities for a two-faced pair (T left, S right).

#include "scalar.hpp"

#include <functional>
#include <map>
#include <string>
#include <utility>
#include <vector>

namespace bifree {

inline Rational binomial(int n, int k) {
    if (k < 0 || k > n) return 0;
    mpz_class r;
    mpz_bin_uiui(r.get_mpz_t(), static_cast<unsigned long>(n), static_cast<unsigned long>(k));
    return Rational(r);
}

// c_0 + c_1 x + ... + c_N x^N.
class UniSeries {
public:
    explicit UniSeries(int order) : c_(check_order(order) + 1, Rational(0)) {}
    UniSeries(int order, std::vector<Rational> coeffs) : UniSeries(order) {
        if (static_cast<int>(coeffs.size()) > order + 1) throw ArgumentError("too many coefficients for order");
        for (std::size_t i = 0; i < coeffs.size(); ++i) c_[i] = coeffs[i];
    }
    static UniSeries constant(int order, const Rational& a) { return UniSeries(order, {a}); }
    static UniSeries variable(int order) {
        UniSeries x(order);
        if (order >= 1) x.c_[1] = 1;
        return x;
    }

    int order() const { return static_cast<int>(c_.size()) - 1; }
    const Rational& operator[](int n) const { return c_.at(n); }
    Rational& operator[](int n) { return c_.at(n); }

    bool is_zero() const {
        for (const auto& x : c_)
            if (x != 0) return false;
        return true;
    }
    // Degree of the highest nonzero coefficient, -1 for the zero series.
    int max_degree() const {
        for (int n = order(); n >= 0; --n)
            if (c_[n] != 0) return n;
        return -1;
    }

    friend UniSeries operator+(const UniSeries& a, const UniSeries& b) {
        a.same_order(b);
        UniSeries r = a;
        for (int n = 0; n <= a.order(); ++n) r.c_[n] += b.c_[n];
        return r;
    }
    friend UniSeries operator-(const UniSeries& a, const UniSeries& b) {
        a.same_order(b);
        UniSeries r = a;
        for (int n = 0; n <= a.order(); ++n) r.c_[n] -= b.c_[n];
        return r;
    }
    friend UniSeries operator*(const Rational& s, const UniSeries& a) {
        UniSeries r = a;
        for (auto& x : r.c_) x *= s;
        return r;
    }
    friend UniSeries operator*(const UniSeries& a, const UniSeries& b) {
        a.same_order(b);
        const int N = a.order();
        UniSeries r(N);
        for (int i = 0; i <= N; ++i) {
            if (a.c_[i] == 0) continue;
            for (int j = 0; i + j <= N; ++j) r.c_[i + j] += a.c_[i] * b.c_[j];
        }
        return r;
    }
    friend bool operator==(const UniSeries& a, const UniSeries& b) { return a.c_ == b.c_; }
    friend bool operator!=(const UniSeries& a, const UniSeries& b) { return !(a == b); }

    UniSeries reciprocal() const {
        if (c_[0] == 0) throw ArgumentError("reciprocal of a series with zero constant term");
        const int N = order();
        UniSeries r(N);
        const Rational inv = 1 / c_[0];
        r.c_[0] = inv;
        for (int n = 1; n <= N; ++n) {
            Rational acc = 0;
            for (int i = 1; i <= n; ++i) acc += c_[i] * r.c_[n - i];
            r.c_[n] = -inv * acc;
        }
        return r;
    }

    std::string str(const std::string& var = "z") const {
        std::string s;
        for (int n = 0; n <= order(); ++n) {
            if (c_[n] == 0) continue;
            if (!s.empty()) s += " + ";
            s += c_[n].get_str();
            if (n >= 1) s += "*" + var + (n > 1 ? "^" + std::to_string(n) : "");
        }
        return s.empty() ? "0" : s;
    }

private:
    static int check_order(int order) {
        if (order < 0) throw ArgumentError("negative series order");
        return order;
    }
    void same_order(const UniSeries& b) const {
        if (order() != b.order()) throw ArgumentError("series truncation orders differ");
    }
    std::vector<Rational> c_;
};

// f(g(x)); g must have zero constant term.
inline UniSeries substitute(const UniSeries& f, const UniSeries& g) {
    if (g[0] != 0) throw ArgumentError("substituted series must have zero constant term");
    if (f.order() != g.order()) throw ArgumentError("series truncation orders differ");
    const int N = f.order();
    UniSeries r(N), power = UniSeries::constant(N, 1);
    for (int n = 0; n <= N; ++n) {
        if (f[n] != 0) r = r + f[n] * power;
        power = power * g;
    }
    return r;
}

// sum c_{n,m} z^n w^m over n + m <= N, commuting variables.
class BiSeries {
public:
    explicit BiSeries(int order) : N_(order), c_(static_cast<std::size_t>(order + 1) * (order + 1), Rational(0)) {
        if (order < 0) throw ArgumentError("negative series order");
    }
    static BiSeries constant(int order, const Rational& a) {
        BiSeries s(order);
        s.at(0, 0) = a;
        return s;
    }
    static BiSeries z(int order) {
        BiSeries s(order);
        if (order >= 1) s.at(1, 0) = 1;
        return s;
    }
    static BiSeries w(int order) {
        BiSeries s(order);
        if (order >= 1) s.at(0, 1) = 1;
        return s;
    }
    static BiSeries in_z(const UniSeries& u) {
        BiSeries s(u.order());
        for (int n = 0; n <= u.order(); ++n) s.at(n, 0) = u[n];
        return s;
    }
    static BiSeries in_w(const UniSeries& u) {
        BiSeries s(u.order());
        for (int m = 0; m <= u.order(); ++m) s.at(0, m) = u[m];
        return s;
    }

    int order() const { return N_; }
    Rational coeff(int n, int m) const {
        if (n < 0 || m < 0) throw ArgumentError("negative exponent");
        if (n + m > N_) return 0;
        return c_[idx(n, m)];
    }
    Rational& at(int n, int m) {
        if (n < 0 || m < 0 || n + m > N_) throw ArgumentError("coefficient index beyond truncation order");
        return c_[idx(n, m)];
    }

    bool is_zero() const {
        for (int n = 0; n <= N_; ++n)
            for (int m = 0; n + m <= N_; ++m)
                if (c_[idx(n, m)] != 0) return false;
        return true;
    }
    int max_degree() const {
        int d = -1;
        for (int n = 0; n <= N_; ++n)
            for (int m = 0; n + m <= N_; ++m)
                if (c_[idx(n, m)] != 0) d = std::max(d, n + m);
        return d;
    }
    // Nonzero coefficients as ((n, m), value), ordered by (n, m).
    std::vector<std::pair<std::pair<int, int>, Rational>> nonzero() const {
        std::vector<std::pair<std::pair<int, int>, Rational>> out;
        for (int n = 0; n <= N_; ++n)
            for (int m = 0; n + m <= N_; ++m)
                if (c_[idx(n, m)] != 0) out.push_back({{n, m}, c_[idx(n, m)]});
        return out;
    }

    friend BiSeries operator+(const BiSeries& a, const BiSeries& b) { return combine(a, b, 1); }
    friend BiSeries operator-(const BiSeries& a, const BiSeries& b) { return combine(a, b, -1); }
    friend BiSeries operator*(const Rational& s, const BiSeries& a) {
        BiSeries r = a;
        for (auto& x : r.c_) x *= s;
        return r;
    }
    friend BiSeries operator*(const BiSeries& a, const BiSeries& b) {
        a.same_order(b);
        const int N = a.N_;
        BiSeries r(N);
        for (int i = 0; i <= N; ++i)
            for (int j = 0; i + j <= N; ++j) {
                const Rational& x = a.c_[a.idx(i, j)];
                if (x == 0) continue;
                for (int k = 0; i + j + k <= N; ++k)
                    for (int l = 0; i + j + k + l <= N; ++l) r.c_[r.idx(i + k, j + l)] += x * b.c_[b.idx(k, l)];
            }
        return r;
    }
    friend bool operator==(const BiSeries& a, const BiSeries& b) { return a.N_ == b.N_ && (a - b).is_zero(); }
    friend bool operator!=(const BiSeries& a, const BiSeries& b) { return !(a == b); }

    BiSeries reciprocal() const {
        if (c_[0] == 0) throw ArgumentError("reciprocal of a series with zero constant term");
        BiSeries r(N_);
        const Rational inv = 1 / c_[0];
        r.at(0, 0) = inv;
        for (int d = 1; d <= N_; ++d)
            for (int n = 0; n <= d; ++n) {
                const int m = d - n;
                Rational acc = 0;
                for (int i = 0; i <= n; ++i)
                    for (int j = 0; j <= m; ++j)
                        if (i + j > 0) acc += c_[idx(i, j)] * r.c_[idx(n - i, m - j)];
                r.at(n, m) = -inv * acc;
            }
        return r;
    }

    std::string str() const {
        std::string s;
        for (const auto& [nm, v] : nonzero()) {
            if (!s.empty()) s += " + ";
            s += v.get_str();
            if (nm.first) s += "*z" + (nm.first > 1 ? "^" + std::to_string(nm.first) : std::string());
            if (nm.second) s += "*w" + (nm.second > 1 ? "^" + std::to_string(nm.second) : std::string());
        }
        return s.empty() ? "0" : s;
    }

private:
    std::size_t idx(int n, int m) const { return static_cast<std::size_t>(n) * (N_ + 1) + m; }
    void same_order(const BiSeries& b) const {
        if (N_ != b.N_) throw ArgumentError("series truncation orders differ");
    }
    static BiSeries combine(const BiSeries& a, const BiSeries& b, int sign) {
        a.same_order(b);
        BiSeries r = a;
        for (std::size_t k = 0; k < r.c_.size(); ++k) r.c_[k] += sign * b.c_[k];
        return r;
    }
    int N_;
    std::vector<Rational> c_;
};

// f(g, h) with z -> g and w -> h; g and h must have zero constant term.
inline BiSeries substitute(const BiSeries& f, const BiSeries& g, const BiSeries& h) {
    if (g.coeff(0, 0) != 0 || h.coeff(0, 0) != 0)
        throw ArgumentError("substituted series must have zero constant term");
    if (f.order() != g.order() || f.order() != h.order()) throw ArgumentError("series truncation orders differ");
    const int N = f.order();
    std::vector<BiSeries> hp{BiSeries::constant(N, 1)};
    for (int m = 1; m <= N; ++m) hp.push_back(hp.back() * h);
    BiSeries r(N), gp = BiSeries::constant(N, 1);
    for (int n = 0; n <= N; ++n) {
        BiSeries inner(N);
        for (int m = 0; n + m <= N; ++m)
            if (f.coeff(n, m) != 0) inner = inner + f.coeff(n, m) * hp[m];
        if (!inner.is_zero()) r = r + gp * inner;
        gp = gp * g;
    }
    return r;
}

// ---- pair tables ----

// Alphabets for a two-faced pair must be {T (left), S (right)}: id 0 left, id 1 right.
inline void require_pair_alphabet(const Alphabet& a) {
    if (a.size() != 2 || a[0].side != Side::Left || a[1].side != Side::Right)
        throw ArgumentError("expected a pair alphabet {T (left), S (right)}");
}

// T^n S^m as a word over the pair alphabet.
inline Word lr_word(int n, int m) {
    Word w(n, 0);
    w.insert(w.end(), m, 1);
    return w;
}

inline CumulantTable random_pair_cumulants(Rng& rng, int N, long bound = 10) {
    auto pair = pair_alphabet("T", "S", 1);
    CumulantTable out(pair, N);
    for (const auto& w : all_words(2, N))
        if (!w.empty()) out.set(w, rng.rational(bound));
    return out;
}

// phi(T^n S^m) = sum over BNC(chi_{n,m}) of the block products.
inline Rational lr_moment_from_cumulants(const CumulantTable& kappa, int n, int m) {
    if (n + m == 0) return 1;
    const Word w = lr_word(n, m);
    Rational acc = 0;
    for (const auto& pi : *bnc_members(chi_of(kappa.alphabet(), w))) acc += kappa_product(w, pi, kappa);
    return acc;
}

struct TransformBundle {
    UniSeries M_T, C_T, R_T;  // in z
    UniSeries M_S, C_S, R_S;  // in w
    BiSeries M_TS, C_TS, R_TS;
    const CumulantTable* source = nullptr;
};

inline TransformBundle bundle_from_cumulants(const CumulantTable& kappa, int N) {
    require_pair_alphabet(kappa.alphabet());
    if (N > kappa.order()) throw SizeLimitError("bundle order exceeds the cumulant table order");
    TransformBundle b{UniSeries(N), UniSeries(N), UniSeries(N), UniSeries(N), UniSeries(N),
                      UniSeries(N), BiSeries(N), BiSeries(N), BiSeries(N), &kappa};
    for (int d = 1; d <= N; ++d)
        for (int n = 0; n <= d; ++n) {
            const int m = d - n;
            const Rational k = kappa.value(lr_word(n, m));
            b.R_TS.at(n, m) = k;
            b.M_TS.at(n, m) = lr_moment_from_cumulants(kappa, n, m);
        }
    b.M_TS.at(0, 0) = 1;
    b.C_TS = BiSeries::constant(N, 1) + b.R_TS;
    b.M_T[0] = b.M_S[0] = b.C_T[0] = b.C_S[0] = 1;
    for (int n = 1; n <= N; ++n) {
        b.M_T[n] = b.M_TS.coeff(n, 0);
        b.M_S[n] = b.M_TS.coeff(0, n);
        b.C_T[n] = b.R_TS.coeff(n, 0);
        b.C_S[n] = b.R_TS.coeff(0, n);
        b.R_T[n - 1] = b.C_T[n];
        b.R_S[n - 1] = b.C_S[n];
    }
    const UniSeries one = UniSeries::constant(N, 1), x = UniSeries::variable(N);
    if (b.C_T != x * b.R_T + one || b.C_S != x * b.R_S + one || b.C_TS != BiSeries::constant(N, 1) + b.R_TS)
        throw InternalError("transform bundle invariants violated");
    return b;
}

struct SingleVariableReport {
    UniSeries t_moment, t_cumulant, s_moment, s_cumulant;
    bool ok() const { return t_moment.is_zero() && t_cumulant.is_zero() && s_moment.is_zero() && s_cumulant.is_zero(); }
};

// Residuals of M = C(x M) and C = M(x / C), one set per face.
inline SingleVariableReport check_single_variable_relations(const TransformBundle& b) {
    auto moment_residual = [](const UniSeries& M, const UniSeries& C) {
        return M - substitute(C, UniSeries::variable(M.order()) * M);
    };
    auto cumulant_residual = [](const UniSeries& M, const UniSeries& C) {
        return C - substitute(M, UniSeries::variable(M.order()) * C.reciprocal());
    };
    return {moment_residual(b.M_T, b.C_T), cumulant_residual(b.M_T, b.C_T), moment_residual(b.M_S, b.C_S),
            cumulant_residual(b.M_S, b.C_S)};
}

// M_T(z) + M_S(w) - M_T(z) M_S(w) / M_TS(z,w) - C_TS(z M_T(z), w M_S(w)).
inline BiSeries partial_r_residual(const TransformBundle& b) {
    const int N = b.M_TS.order();
    const BiSeries MT = BiSeries::in_z(b.M_T), MS = BiSeries::in_w(b.M_S);
    const BiSeries lhs = MT + MS;
    const BiSeries rhs = MT * MS * b.M_TS.reciprocal() + substitute(b.C_TS, BiSeries::z(N) * MT, BiSeries::w(N) * MS);
    return lhs - rhs;
}

// ---- Theta ----

enum class ThetaRoute { Direct, MomentDifference, Decomposition };

namespace detail {

// All tuples of `parts` nonnegative integers summing to `total`.
inline void weak_compositions(int total, int parts, const std::function<void(const std::vector<int>&)>& visit) {
    std::vector<int> c(parts, 0);
    std::function<void(int, int)> rec = [&](int i, int left) {
        if (i == parts - 1) {
            c[i] = left;
            visit(c);
            return;
        }
        for (int x = 0; x <= left; ++x) {
            c[i] = x;
            rec(i + 1, left - x);
        }
    };
    if (parts > 0) rec(0, total);
}

}  // namespace detail

// Theta_{n,m}: the part of phi(T^n S^m) carried by partitions with a block
// meeting both sides.
inline Rational compute_theta(int n, int m, const CumulantTable& kappa, ThetaRoute route = ThetaRoute::Direct) {
    require_pair_alphabet(kappa.alphabet());
    if (n < 0 || m < 0 || n + m == 0) throw ArgumentError("theta needs n, m >= 0 with n + m >= 1");
    if (n == 0 || m == 0) return 0;
    switch (route) {
    case ThetaRoute::Direct: {
        const Word w = lr_word(n, m);
        Rational acc = 0;
        for (const auto& pi : *bnc_members(chi_of(kappa.alphabet(), w)))
            if (!is_vertically_split(pi)) acc += kappa_product(w, pi, kappa);
        return acc;
    }
    case ThetaRoute::MomentDifference:
        return lr_moment_from_cumulants(kappa, n, m) -
               lr_moment_from_cumulants(kappa, n, 0) * lr_moment_from_cumulants(kappa, 0, m);
    case ThetaRoute::Decomposition: {
        std::map<std::pair<int, int>, Rational> memo;
        auto phi = [&](int a, int b) -> Rational {
            auto it = memo.find({a, b});
            if (it != memo.end()) return it->second;
            return memo[{a, b}] = lr_moment_from_cumulants(kappa, a, b);
        };
        Rational acc = 0;
        for (int t = 1; t <= n; ++t)
            for (int s = 1; s <= m; ++s) {
                const Rational k = kappa.value(lr_word(t, s));
                if (k == 0) continue;
                detail::weak_compositions(n - t, t + 1, [&](const std::vector<int>& i) {
                    Rational left = 1;
                    for (int q = 1; q <= t; ++q) left *= phi(i[q], 0);
                    if (left == 0) return;
                    detail::weak_compositions(m - s, s + 1, [&](const std::vector<int>& j) {
                        Rational term = k * left * phi(i[0], j[0]);
                        for (int q = 1; q <= s && term != 0; ++q) term *= phi(0, j[q]);
                        acc += term;
                    });
                });
            }
        return acc;
    }
    }
    throw InternalError("unknown theta route");
}

// ---- sided series ----

enum class SidedKind { StartingMoment, EndingCumulant };

// Length of the run of `theta` at the start (or end) of chi.
inline int run_length(const ChiMap& chi, Side theta, bool from_start) {
    const int n = chi.size();
    int k = 0;
    while (k < n && chi(from_start ? k + 1 : n - k) == theta) ++k;
    return k;
}

// M^{m,theta} over chi starting with theta exactly m times (values from a
// moment table) or C^{m,theta} over chi ending so (values from a cumulant table).
inline BiSeries sided_series(const WordTable& table, int m, Side theta, SidedKind kind, int N) {
    require_pair_alphabet(table.alphabet());
    if (m < 0) throw ArgumentError("run length must be nonnegative");
    const bool start = kind == SidedKind::StartingMoment;
    BiSeries out(N);
    for (const auto& w : all_words(2, N)) {
        if (w.empty()) continue;
        const auto chi = chi_of(table.alphabet(), w);
        if (run_length(chi, theta, start) != m) continue;
        const Rational* v = table.find(w);
        if (!v)
            throw MissingDataError(std::string("missing ") + (start ? "moment" : "cumulant") + " for chi " +
                                   chi.str());
        int L = 0;
        for (int x : w) L += x == 0;
        out.at(L, static_cast<int>(w.size()) - L) += *v;
    }
    return out;
}

inline BiSeries commutative_moment_series(const MomentFunctional& phi, int N) {
    require_pair_alphabet(phi.alphabet());
    BiSeries out = BiSeries::constant(N, 1);
    for (const auto& w : all_words(2, N)) {
        if (w.empty()) continue;
        int L = 0;
        for (int x : w) L += x == 0;
        out.at(L, static_cast<int>(w.size()) - L) += phi.value(w);
    }
    return out;
}

// Pure cumulants re-solved so that phi(T^n) = phi(S^n) = 0 for n <= N.
inline CumulantTable force_vanishing_pure_moments(const CumulantTable& kappa, int N) {
    require_pair_alphabet(kappa.alphabet());
    CumulantTable out = kappa;
    for (int letter = 0; letter < 2; ++letter)
        for (int n = 1; n <= N; ++n) {
            const Word w(n, letter);
            Rational acc = 0;
            for (const auto& pi : *bnc_members(chi_of(kappa.alphabet(), w)))
                if (pi.block_count() > 1) acc -= kappa_product(w, pi, out);
            out.set(w, acc);
        }
    return out;
}

// M^c - [1 + sum_m C^{m,l}(1 + sum_k binom(m+k,k) M^{k,r}) + (l <-> r)].
inline BiSeries sided_r_residual(const CumulantTable& kappa, int N) {
    require_pair_alphabet(kappa.alphabet());
    if (N > kappa.order()) throw SizeLimitError("residual order exceeds the cumulant table order");
    const auto phi = cumulants_to_moments(kappa, N);
    for (int letter = 0; letter < 2; ++letter)
        for (int n = 1; n <= N; ++n) {
            const Rational v = phi.value(Word(n, letter));
            if (v != 0)
                throw ArgumentError("pure moment phi(" + kappa.alphabet()[letter].symbol + "^" + std::to_string(n) +
                                    ") = " + v.get_str() + " must vanish");
        }
    const BiSeries one = BiSeries::constant(N, 1);
    BiSeries rhs = one;
    for (Side theta : {Side::Left, Side::Right}) {
        const Side other = theta == Side::Left ? Side::Right : Side::Left;
        std::vector<BiSeries> starting;
        for (int k = 0; k <= N; ++k) starting.push_back(sided_series(phi, k, other, SidedKind::StartingMoment, N));
        for (int m = 1; m <= N; ++m) {
            const BiSeries C = sided_series(kappa, m, theta, SidedKind::EndingCumulant, N);
            if (C.is_zero()) continue;
            BiSeries factor = one;
            for (int k = 0; k + m <= N; ++k) factor = factor + binomial(m + k, k) * starting[k];
            rhs = rhs + C * factor;
        }
    }
    return commutative_moment_series(phi, N) - rhs;
}

struct BooleanCollapseReport {
    UniSeries moments;     // 1 + sum phi((TS)^k) x^k
    UniSeries cumulants;   // sum kappa_{(lr)^k}(T,S) x^k
    UniSeries residual;    // M - 1 - eta M
    BiSeries off_diagonal; // coefficients of M^c with L != R; expected zero
    bool ok() const { return residual.is_zero() && off_diagonal.is_zero(); }
};

// On a pair whose only surviving moments are phi((TS)^k), the commutative
// moment series lives on the diagonal x = zw and satisfies M = 1 + eta M with
// eta built from the alternating (l,r)-cumulants.
inline BooleanCollapseReport boolean_collapse(const MomentFunctional& phi, int N) {
    require_pair_alphabet(phi.alphabet());
    const auto kappa = moments_to_cumulants(phi, N);
    const BiSeries Mc = commutative_moment_series(phi, N);
    const int K = N / 2;
    BooleanCollapseReport rep{UniSeries(K), UniSeries(K), UniSeries(K), Mc};
    rep.moments[0] = 1;
    for (int k = 1; k <= K; ++k) {
        Word w;
        for (int i = 0; i < k; ++i) w.insert(w.end(), {0, 1});
        rep.moments[k] = Mc.coeff(k, k);
        rep.cumulants[k] = kappa.value(w);
    }
    for (int k = 0; k <= K; ++k) rep.off_diagonal.at(k, k) = 0;
    rep.residual = rep.moments - UniSeries::constant(K, 1) - rep.cumulants * rep.moments;
    return rep;
}

// ---- R-additivity ----

struct RAdditivityReport {
    BiSeries r1, r2, r_sum, residual;
    bool ok() const { return residual.is_zero(); }
};

// R of (T1 + T2, S1 + S2) for bi-free pairs, against R_1 + R_2.
inline RAdditivityReport check_r_additivity(const CumulantTable& kappa1, const CumulantTable& kappa2, int N) {
    const CumulantTable* in[2] = {&kappa1, &kappa2};
    std::vector<MomentFunctional> dists;
    for (int k = 0; k < 2; ++k) {
        require_pair_alphabet(in[k]->alphabet());
        auto relabeled = pair_alphabet("T" + std::to_string(k + 1), "S" + std::to_string(k + 1), k + 1);
        CumulantTable c(relabeled, N);
        for (const auto& w : all_words(2, N))
            if (!w.empty()) c.set(w, in[k]->value(w));
        dists.push_back(cumulants_to_moments(c, N));
    }
    const auto joint = bifree_product(dists, N);  // ids: 0 T1, 1 S1, 2 T2, 3 S2
    LazyCumulants sum(pair_alphabet("T", "S", 1), [&](const Word& w) {
        const int n = static_cast<int>(w.size());
        Rational acc = 0;
        for (std::uint32_t mask = 0; mask < (1u << n); ++mask) {
            Word src;
            for (int i = 0; i < n; ++i) src.push_back(2 * static_cast<int>((mask >> i) & 1) + w[i]);
            acc += joint.value(src);
        }
        return acc;
    });
    RAdditivityReport rep{BiSeries(N), BiSeries(N), BiSeries(N), BiSeries(N)};
    for (int d = 1; d <= N; ++d)
        for (int n = 0; n <= d; ++n) {
            const Word w = lr_word(n, d - n);
            rep.r1.at(n, d - n) = kappa1.value(w);
            rep.r2.at(n, d - n) = kappa2.value(w);
            rep.r_sum.at(n, d - n) = sum.cumulant(w);
        }
    rep.residual = rep.r_sum - rep.r1 - rep.r2;
    return rep;
}

}  // namespace bifree

#endif
