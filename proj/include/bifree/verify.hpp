#ifndef BIFREE_VERIFY_HPP
#define BIFREE_VERIFY_HPP

// Self-contained verification runs shared by the command line tool and the
// acceptance driver. Each returns a report with the first counterexample.

#include "json_io.hpp"

#include <set>
#include <string>
#include <vector>

namespace bifree {

struct CheckReport {
    std::string check;
    bool pass = true;
    json detail = json::object();
    json counterexample = nullptr;

    // Records a failure; only the first counterexample is kept.
    void fail(json cx) {
        if (pass) counterexample = std::move(cx);
        pass = false;
    }
    json to_json() const {
        json j = detail;
        j["check"] = check;
        j["status"] = pass ? "PASS" : "FAIL";
        if (!pass) j["counterexample"] = counterexample;
        return j;
    }
};

namespace fixtures {

// Letters T1,S1,...,Tn,Sn with T_j = T_{Z_j} and S_j = S_1 embedded into family eps_j.
inline OperatorModel boolean_pairs_model(const DoubledAlgebra& y, const std::vector<int>& eps, const std::vector<Matrix>& z) {
    OperatorModel m;
    for (std::size_t j = 0; j < eps.size(); ++j) {
        const std::string n = std::to_string(j + 1);
        m.add({"T" + n, Side::Left, eps[j]}, boolean_T(y, eps[j], z[j]));
        m.add({"S" + n, Side::Right, eps[j]}, boolean_S(y, eps[j]));
    }
    return m;
}

inline Word iota(int n) {
    Word w(n);
    for (int k = 0; k < n; ++k) w[k] = k;
    return w;
}

// All maps {1..n} -> {1..k}.
inline std::vector<std::vector<int>> labelings(int n, int k) {
    std::vector<std::vector<int>> out{{}};
    for (int i = 0; i < n; ++i) {
        std::vector<std::vector<int>> next;
        for (const auto& p : out)
            for (int v = 1; v <= k; ++v) {
                next.push_back(p);
                next.back().push_back(v);
            }
        out = std::move(next);
    }
    return out;
}

inline std::vector<ChiMap> all_chis(int n) {
    std::vector<ChiMap> out;
    for (std::uint32_t mask = 0; mask < (1u << n); ++mask) {
        std::vector<Side> s;
        for (int k = 0; k < n; ++k) s.push_back((mask >> k) & 1 ? Side::Right : Side::Left);
        out.emplace_back(std::move(s));
    }
    return out;
}

// T = E_01 (family 1, left) and S = E_10 (family 2, right) in M_2 with the normalized trace.
inline MomentFunctional m2_matrix_unit_pair(int N) {
    auto a = std::make_shared<Alphabet>(std::vector<Letter>{{"T", Side::Left, 1}, {"S", Side::Right, 2}});
    const Matrix mats[2] = {Matrix::unit(2, 0, 1), Matrix::unit(2, 1, 0)};
    MomentFunctional m(a, N);
    for (const auto& w : all_words(2, N)) {
        Matrix p = Matrix::identity(2);
        for (int x : w) p = p * mats[x];
        m.set(w, (p(0, 0) + p(1, 1)) / 2);
    }
    return m;
}

// Monotone pair A1 = {x (x) E_00}, A2 = {I (x) y} inside M_4 and its bi-free embedding.
struct MonotoneSetup {
    MonotoneTensorFixture fx{2, 2};
    StateAlgebra alg = fx.algebra();
    std::vector<Matrix> elems;
    std::vector<int> fams;
    OperatorModel model;
    MomentFunctional base;

    MonotoneSetup(std::uint64_t seed, int N) : base(std::make_shared<Alphabet>(), 0) {
        Rng rng(seed);
        DoubledAlgebra y(alg);
        auto alpha = std::make_shared<Alphabet>();
        for (int j = 0; j < 4; ++j) {
            const int fam = j < 2 ? 1 : 2;
            Matrix small(2, 2);
            for (int r = 0; r < 2; ++r)
                for (int c = 0; c < 2; ++c) small(r, c) = rng.rational();
            elems.push_back(fam == 1 ? fx.embed1(small) : fx.embed2(small));
            fams.push_back(fam);
            Letter l{"Z" + std::to_string(j + 1), Side::Left, fam};
            alpha->add(l);
            model.add(l, fam == 1 ? monotone_beta1(y, elems.back()) : monotone_beta2(alg, elems.back()));
        }
        base = MomentFunctional(alpha, N);
        for (const auto& w : all_words(4, N)) {
            Matrix p = Matrix::identity(alg.m());
            for (int x : w) p = p * elems[x];
            base.set(w, alg.state(p));
        }
    }
};

inline CumulantTable central_limit_pair(const Rational& tt, const Rational& ts, const Rational& st, const Rational& ss,
                                        int N, const std::string& extra_chi = "", const Rational& extra = 0) {
    return pair_cumulants(pair_alphabet("T", "S", 1), N, [&](const std::string& chi) -> Rational {
        if (chi == "LL") return tt;
        if (chi == "LR") return ts;
        if (chi == "RL") return st;
        if (chi == "RR") return ss;
        if (!extra_chi.empty() && chi == extra_chi) return extra;
        return 0;
    });
}

}  // namespace fixtures

// ---- lattice and Moebius ----

inline CheckReport verify_lattice_counts(int max_n = 8) {
    CheckReport rep{"lattice-counts"};
    long total = 0;
    for (int n = 1; n <= max_n; ++n) {
        const Rational catalan = binomial(2 * n, n) / (n + 1);
        for (const auto& chi : fixtures::all_chis(n)) {
            const auto count = bnc_members(chi)->size();
            total += static_cast<long>(count);
            if (Rational(static_cast<long>(count)) != catalan)
                rep.fail({{"chi", chi.str()}, {"count", count}, {"expected", rational_json(catalan)}});
        }
    }
    auto same_set = [](const std::vector<BiPartition>& got, std::vector<Blocks> want) {
        std::set<Blocks> a, b;
        for (const auto& p : got) a.insert(p.blocks());
        for (auto& w : want) b.insert(canonical_blocks(std::move(w)));
        return a == b && got.size() == want.size();
    };
    const auto boolean = enumerate_family(ChiMap::alternating(3), Tag::BNC_b).members;
    const std::vector<Blocks> boolean_want{{{1, 2}, {3, 4}, {5, 6}},
                                           {{1, 2, 3, 4}, {5, 6}},
                                           {{1, 2}, {3, 4, 5, 6}},
                                           {{1, 2, 3, 4, 5, 6}}};
    if (!same_set(boolean, boolean_want)) rep.fail({{"family", family_json(enumerate_family(ChiMap::alternating(3), Tag::BNC_b))}});
    // Lefts {2,3,4,6}, rights {1,5}: the right at 5 separates 6 from the other lefts.
    const auto chi_m = ChiMap::parse("RLLLRL");
    std::vector<Blocks> monotone_want;
    const std::vector<Blocks> lefts{{{2}, {3}, {4}}, {{2, 3}, {4}}, {{2}, {3, 4}}, {{2, 4}, {3}}, {{2, 3, 4}}};
    const std::vector<Blocks> rights{{{1}, {5}}, {{1, 5}}};
    for (const auto& l : lefts)
        for (const auto& r : rights) {
            Blocks b = l;
            b.push_back({6});
            b.insert(b.end(), r.begin(), r.end());
            monotone_want.push_back(b);
        }
    const auto monotone = enumerate_family(chi_m, Tag::BNC_m).members;
    if (!same_set(monotone, monotone_want)) rep.fail({{"family", family_json(enumerate_family(chi_m, Tag::BNC_m))}});
    rep.detail = {{"max_n", max_n}, {"partitions", total}, {"boolean_3_pairs", boolean.size()}, {"monotone_RLLLRL", monotone.size()}};
    return rep;
}

inline CheckReport verify_mobius(int max_n = 6) {
    CheckReport rep{"mobius"};
    long pairs = 0;
    for (int n = 1; n <= max_n; ++n)
        for (const auto& chi : fixtures::all_chis(n)) {
            auto lat = lattice_index(chi);
            const int m = lat->size();
            for (int i = 0; i < m && rep.pass; ++i) {
                const auto row = lat->recursive_row(i);
                for (int j = 0; j < m; ++j) {
                    if (!lat->leq(i, j)) continue;
                    ++pairs;
                    const Rational closed = mobius_closed(lat->member(i), lat->member(j));
                    if (closed != row[j]) {
                        rep.fail({{"pi", partition_json(lat->member(i))}, {"sigma", partition_json(lat->member(j))},
                                  {"closed", rational_json(closed)}, {"recursive", rational_json(row[j])}});
                        break;
                    }
                    Rational left = 0, right = 0;
                    for (int t = 0; t < m; ++t) {
                        if (!lat->leq(i, t) || !lat->leq(t, j)) continue;
                        left += mobius_closed(lat->member(t), lat->member(j));
                        right += mobius_closed(lat->member(i), lat->member(t));
                    }
                    const Rational delta = i == j ? 1 : 0;
                    if (left != delta || right != delta) {
                        rep.fail({{"pi", partition_json(lat->member(i))}, {"sigma", partition_json(lat->member(j))},
                                  {"left_sum", rational_json(left)}, {"right_sum", rational_json(right)}});
                        break;
                    }
                }
            }
        }
    rep.detail = {{"max_n", max_n}, {"comparable_pairs", pairs}};
    return rep;
}

inline CheckReport verify_roundtrip(std::uint64_t seed, int tables = 20, int N = 6) {
    CheckReport rep{"roundtrip"};
    Rng rng(seed);
    for (int t = 0; t < tables && rep.pass; ++t) {
        auto a = std::make_shared<Alphabet>(std::vector<Letter>{{"T", Side::Left, 1}, {"S", Side::Right, 1 + t % 2}});
        MomentFunctional m(a, N);
        for (const auto& w : all_words(2, N))
            if (!w.empty()) m.set(w, rng.rational());
        const auto k = moments_to_cumulants(m, N);
        const auto back = cumulants_to_moments(k, N);
        const auto again = moments_to_cumulants(back, N);
        for (const auto& w : m.words())
            if (back.value(w) != m.value(w) || again.value(w) != k.value(w)) {
                rep.fail({{"table", t}, {"word", word_json(*a, w)}, {"moment", rational_json(m.value(w))},
                          {"roundtrip", rational_json(back.value(w))}});
                break;
            }
    }
    rep.detail = {{"seed", seed}, {"tables", tables}, {"order", N}};
    return rep;
}

// ---- classification ----

inline CheckReport verify_freegroup_bifree(int N = 6) {
    CheckReport rep{"classify.freegroup"};
    const auto dist = freegroup_distribution(freegroup_pairs(2), N);
    const auto mixed = check_bifree(dist, N);
    if (!mixed.empty())
        rep.fail({{"word", word_json(dist.alphabet(), mixed.front().word)}, {"cumulant", rational_json(mixed.front().value)}});
    rep.detail = {{"order", N}, {"words", dist.entries()}};
    return rep;
}

inline CheckReport verify_product_classification(std::uint64_t seed, int N = 4) {
    CheckReport rep{"classify.product"};
    Rng rng(seed);
    std::vector<MomentFunctional> dists;
    for (int f = 1; f <= 2; ++f) {
        auto a = pair_alphabet("T" + std::to_string(f), "S" + std::to_string(f), f);
        MomentFunctional m(a, N);
        for (const auto& w : all_words(2, N))
            if (!w.empty()) m.set(w, rng.rational());
        dists.push_back(std::move(m));
    }
    const auto joint = bifree_product(dists, N);
    const auto mixed = check_bifree(joint, N);
    if (!mixed.empty())
        rep.fail({{"word", word_json(joint.alphabet(), mixed.front().word)}, {"cumulant", rational_json(mixed.front().value)}});
    int words = 0;
    for (const auto& w : all_words(joint.alphabet().size(), N)) {
        if (w.empty()) continue;
        ++words;
        const Rational rhs = universal_formula_rhs(w, joint);
        if (rhs != joint.value(w)) {
            rep.fail({{"word", word_json(joint.alphabet(), w)}, {"moment", rational_json(joint.value(w))},
                      {"formula", rational_json(rhs)}});
            break;
        }
    }
    rep.detail = {{"seed", seed}, {"order", N}, {"words", words}};
    return rep;
}

// Bi-freeness of the families in a user supplied moment table.
inline CheckReport verify_table_bifree(const MomentFunctional& m, int N) {
    CheckReport rep{"classify.table"};
    if (N > m.order())
        throw MissingDataError("table declares order " + std::to_string(m.order()) + ", order " + std::to_string(N) + " requested");
    const auto mixed = check_bifree(m, N);
    if (!mixed.empty())
        rep.fail({{"word", word_json(m.alphabet(), mixed.front().word)}, {"cumulant", rational_json(mixed.front().value)}});
    rep.detail = {{"order", N}, {"mixed_nonzero", mixed.size()}};
    return rep;
}

// tau(TS) = 1/2 whereas tau(T) = tau(S) = 0: the pair is not bi-free.
inline CheckReport verify_m2_counterexample() {
    CheckReport rep{"classify.m2-counterexample"};
    const int N = 4;
    const auto m = fixtures::m2_matrix_unit_pair(N);
    const auto k = moments_to_cumulants(m, N);
    const Rational kts = k.value({0, 1});
    if (m.value({0}) != 0 || m.value({1}) != 0 || kts != Rational(1, 2))
        rep.fail({{"kappa_TS", rational_json(kts)}, {"phi_T", rational_json(m.value({0}))}, {"phi_S", rational_json(m.value({1}))}});
    const auto mixed = check_bifree(m, N);
    if (mixed.empty()) rep.fail({{"reason", "mixed cumulants reported as vanishing"}});
    rep.detail = {{"kappa_TS", rational_json(kts)}, {"mixed_nonzero", mixed.size()}};
    return rep;
}

// ---- Boolean ----

inline CheckReport verify_boolean(std::uint64_t seed, int max_pairs = 4, int lemma_pairs = 3) {
    CheckReport rep{"boolean"};
    Rng rng(seed);
    int formula = 0, vanishing = 0;
    for (auto alg : {StateAlgebra::normalized_trace(2), StateAlgebra::vector_state(2, 0)}) {
        DoubledAlgebra y(alg);
        for (int n = 1; n <= max_pairs && rep.pass; ++n) {
            const auto chi = ChiMap::alternating(n);
            const auto boolean = enumerate_family(chi, Tag::BNC_b).members;
            for (const auto& eps : fixtures::labelings(n, 2)) {
                std::vector<Matrix> z;
                for (int j = 0; j < n; ++j) z.push_back(alg.random_element(rng));
                auto m = fixtures::boolean_pairs_model(y, eps, z);
                LazyCumulants lc(m.alphabet(), m.moment_function());
                const Word w = fixtures::iota(2 * n);
                Rational sum = 0;
                for (const auto& pi : boolean) sum += lc.kappa_product(w, pi);
                ++formula;
                const Rational lhs = m.moment(w);
                const bool constant = std::all_of(eps.begin(), eps.end(), [&](int e) { return e == eps[0]; });
                const Rational k = constant ? Rational(0) : lc.cumulant(w);
                if (lhs != sum || k != 0) {
                    rep.fail({{"families", eps}, {"moment", rational_json(lhs)}, {"boolean_sum", rational_json(sum)},
                              {"mixed_cumulant", rational_json(k)}});
                    break;
                }
            }
        }
        // E_pi vanishes for pi <= eps outside BNC_b.
        for (int n = 1; n <= lemma_pairs && rep.pass; ++n) {
            const auto chi = ChiMap::alternating(n);
            for (const auto& eps : fixtures::labelings(n, 3)) {
                std::vector<Matrix> z;
                for (int j = 0; j < n; ++j) z.push_back(alg.random_element(rng));
                auto m = fixtures::boolean_pairs_model(y, eps, z);
                LazyCumulants lc(m.alphabet(), m.moment_function());
                const Word w = fixtures::iota(2 * n);
                std::vector<int> pos_eps;
                for (int e : eps) pos_eps.insert(pos_eps.end(), {e, e});
                for (const auto& pi : *bnc_members(chi)) {
                    if (!below_epsilon(pi, pos_eps) || has_tag(pi, Tag::BNC_b)) continue;
                    ++vanishing;
                    const Rational v = lc.phi_pi(w, pi);
                    if (v != 0) {
                        rep.fail({{"families", eps}, {"partition", partition_json(pi)}, {"E_pi", rational_json(v)}});
                        break;
                    }
                }
            }
        }
    }
    rep.detail = {{"seed", seed}, {"max_pairs", max_pairs}, {"formula_cases", formula}, {"vanishing_cases", vanishing}};
    return rep;
}

// ---- monotone ----

inline CheckReport verify_monotone(std::uint64_t seed, int N = 5) {
    CheckReport rep{"monotone"};
    fixtures::MonotoneSetup s(seed, N);
    const auto kappa = moments_to_cumulants(s.base, N);
    int words = 0;
    for (const auto& w : all_words(4, N)) {
        if (w.empty()) continue;
        ++words;
        const Rational model = s.model.moment(w), base = s.base.value(w);
        const Rational sum = independence_sum(kappa, w, IndependenceMode::Monotone);
        if (model != base || sum != model) {
            rep.fail({{"word", word_json(s.base.alphabet(), w)}, {"embedded", rational_json(model)},
                      {"base", rational_json(base)}, {"monotone_sum", rational_json(sum)}});
            break;
        }
    }
    // Free group: alg{lambda(u1^p) rho(u1^q)} and alg{lambda(u2^p)} factor monotonically.
    struct Elem {
        int family;
        std::vector<std::pair<Side, GroupWord>> seq;
    };
    std::vector<Elem> elems;
    for (int p = 1; p <= 2; ++p)
        for (int q = -2; q <= 2; ++q)
            elems.push_back({1, {{Side::Left, GroupWord::generator(1, p)}, {Side::Right, GroupWord::generator(1, q)}}});
    for (int p : {-2, -1, 1, 2}) elems.push_back({2, {{Side::Left, GroupWord::generator(2, p)}}});
    int group_words = 0;
    for (int n = 1; n <= 4 && rep.pass; ++n)
        for (const auto& lab : fixtures::labelings(n, static_cast<int>(elems.size()))) {
            std::vector<std::pair<Side, GroupWord>> all, ones, run;
            Rational runs = 1;
            for (int x : lab) {
                const auto& e = elems[x - 1];
                all.insert(all.end(), e.seq.begin(), e.seq.end());
                if (e.family == 1) {
                    ones.insert(ones.end(), e.seq.begin(), e.seq.end());
                    if (!run.empty()) runs *= lr_moment(run);
                    run.clear();
                } else {
                    run.insert(run.end(), e.seq.begin(), e.seq.end());
                }
            }
            if (!run.empty()) runs *= lr_moment(run);
            ++group_words;
            if (lr_moment(all) != runs * lr_moment(ones)) {
                rep.fail({{"freegroup_elements", lab}, {"moment", rational_json(lr_moment(all))},
                          {"factorized", rational_json(runs * lr_moment(ones))}});
                break;
            }
        }
    rep.detail = {{"seed", seed}, {"order", N}, {"words", words}, {"freegroup_words", group_words}};
    return rep;
}

// ---- Kac/Loeve ----

inline CheckReport verify_kacloeve(std::uint64_t seed, int N = 6) {
    CheckReport rep{"kacloeve"};
    const Rotation rot{Rational(3, 5), Rational(4, 5)};
    Rng rng(seed);
    const Rational tt = rng.rational(), ts = rng.rational(), st = rng.rational(), ss = rng.rational();
    // Central limit with equal covariance: every rotated mixed cumulant vanishes.
    const auto clt = fixtures::central_limit_pair(tt, ts, st, ss, N);
    const auto equal = kac_loeve(clt, clt, rot, N);
    if (!equal.mixed_nonzero.empty())
        rep.fail({{"case", "equal covariance"}, {"word", equal.mixed_nonzero.front().first},
                  {"cumulant", rational_json(equal.mixed_nonzero.front().second)}});
    // Unequal covariance: located through the order-2 coefficient.
    const auto other = fixtures::central_limit_pair(tt, ts + 1, st, ss, N);
    const auto unequal = kac_loeve(clt, other, rot, N);
    json located = json::array();
    if (unequal.located.empty() || unequal.located.front().rotated_value == 0)
        rep.fail({{"case", "unequal covariance"}, {"reason", "no nonzero rotated cumulant located"}});
    // A nonzero third-order cumulant: located through the 2x2 system.
    const auto third = fixtures::central_limit_pair(tt, ts, st, ss, N, "LLR", rng.nonzero_rational());
    const auto skew = kac_loeve(third, clt, rot, N);
    bool found = false;
    for (const auto& l : skew.located) {
        if (l.chi != "LLR") continue;
        found = l.rotated_value != 0 && l.determinant != 0;
        located.push_back({{"chi", l.chi}, {"rotated_word", l.rotated_word}, {"rotated_value", rational_json(l.rotated_value)},
                           {"determinant", rational_json(l.determinant)}});
    }
    if (!found) rep.fail({{"case", "third order"}, {"reason", "order-3 cumulant not located"}});
    for (const auto* r : {&equal, &unequal, &skew})
        if (!r->consistent()) rep.fail({{"reason", "report predicate inconsistent with vanishing"}});
    if (!unequal.located.empty()) {
        const auto& l = unequal.located.front();
        located.push_back({{"chi", l.chi}, {"rotated_word", l.rotated_word}, {"rotated_value", rational_json(l.rotated_value)}});
    }
    rep.detail = {{"seed", seed}, {"order", N}, {"rotation", {"3/5", "4/5"}}, {"located", located}};
    return rep;
}

// ---- tensor ----

inline CheckReport verify_tensor(std::uint64_t seed, int max_q = 4, int max_n = 3, int word_order = 4) {
    CheckReport rep{"tensor"};
    Rng rng(seed);
    FreeBimodule fb(2, 2);
    const auto X = fb.space();
    long cases = 0, nonzero = 0;
    for (int n = 1; n <= max_n && rep.pass; ++n) {
        const auto A = amplify(X, n);
        for (int q = 1; q <= max_q && rep.pass; ++q)
            for (const auto& chi : fixtures::all_chis(q)) {
                std::vector<SidedOperator> ops;
                for (Side s : chi.sides()) {
                    auto g = fb.random_grid(rng);
                    ops.push_back(make_sided(X, s == Side::Left ? fb.left_operator(g) : fb.right_operator(g), s));
                }
                for (const auto& pi : *bnc_members(chi)) {
                    std::vector<int> ii(q), jj(q);
                    for (int k = 0; k < q; ++k) {
                        ii[k] = 1 + static_cast<int>(rng.below(n));
                        jj[k] = 1 + static_cast<int>(rng.below(n));
                    }
                    ++cases;
                    if (!f_chi_product(chi, ii, jj, n).is_zero()) ++nonzero;
                    if (!check_tensor_factorization(X, A, n, ops, ii, jj, pi)) {
                        rep.fail({{"n", n}, {"partition", partition_json(pi)}, {"i", ii}, {"j", jj}});
                        break;
                    }
                }
            }
    }
    // Bi-free pairs over C stay bi-free over M_2(C) after amplification.
    FreeGroupBall ball(2, word_order);
    const auto B = ball.space();
    std::vector<BFacePair> pairs;
    for (int k = 1; k <= 2; ++k)
        pairs.push_back(BFacePair{k, {make_sided(B, ball.lambda(GroupWord::generator(k)), Side::Left)},
                                  {make_sided(B, ball.rho(GroupWord::generator(k)), Side::Right)}});
    for (auto mode : {AmplifyMode::Generic, AmplifyMode::Diagonal}) {
        const auto mixed = check_bifree_over_MnB(pairs, B, 2, word_order, mode, seed);
        if (!mixed.empty())
            rep.fail({{"mode", mode == AmplifyMode::Generic ? "generic" : "diagonal"}, {"word", mixed.front().word},
                      {"cumulant", matrix_json(mixed.front().value)}});
    }
    rep.detail = {{"seed", seed}, {"lemma_cases", cases}, {"nonzero_F", nonzero}, {"amplification", 2}, {"word_order", word_order}};
    return rep;
}

// ---- partial R-transforms ----

namespace detail {

inline json residual_cx(const BiSeries& r) {
    const auto nz = r.nonzero();
    return {{"n", nz.front().first.first}, {"m", nz.front().first.second}, {"value", rational_json(nz.front().second)}};
}

}  // namespace detail

inline CheckReport verify_rtransform(std::uint64_t seed, int N = 8) {
    CheckReport rep{"rtransform"};
    Rng rng(seed);
    const auto kappa = random_pair_cumulants(rng, N);
    const auto b = bundle_from_cumulants(kappa, N);
    const auto res = partial_r_residual(b);
    if (!res.is_zero()) rep.fail(detail::residual_cx(res));
    if (!check_single_variable_relations(b).ok()) rep.fail({{"reason", "single-variable relations fail"}});
    // Mixed cumulants removed: the factorized special case.
    CumulantTable split = kappa;
    for (const auto& w : kappa.words())
        if (std::any_of(w.begin(), w.end(), [&](int x) { return x != w[0]; })) split.set(w, 0);
    const auto split_res = partial_r_residual(bundle_from_cumulants(split, N));
    if (!split_res.is_zero()) rep.fail({{"case", "mixed cumulants zero"}, {"residual", detail::residual_cx(split_res)}});
    // Sensitivity control.
    auto perturbed = b;
    perturbed.M_TS.at(1, 1) += 1;
    const bool sensitive = !partial_r_residual(perturbed).is_zero();
    if (!sensitive) rep.fail({{"reason", "perturbed M_TS left the residual zero"}});
    rep.detail = {{"seed", seed}, {"order", N}, {"residual_max_degree", res.max_degree()}, {"sensitivity", sensitive}};
    return rep;
}

inline CheckReport verify_mixed_rtransform(std::uint64_t seed, int N = 7) {
    CheckReport rep{"mixed-rtransform"};
    Rng rng(seed);
    const auto kappa = force_vanishing_pure_moments(random_pair_cumulants(rng, N), N);
    const auto res = sided_r_residual(kappa, N);
    if (!res.is_zero()) rep.fail(detail::residual_cx(res));
    // Diagonal pair Z = T = S: collapse to the Boolean relation.
    const StateAlgebra alg = StateAlgebra::normalized_trace(2);
    DoubledAlgebra y(alg);
    const Matrix z = alg.random_element(rng);
    OperatorModel model;
    model.add({"T", Side::Left, 1}, boolean_T(y, 1, z));
    model.add({"S", Side::Right, 1}, boolean_S(y, 1));
    const auto phi = model.tabulate_all(N);
    const auto collapse = boolean_collapse(phi, N);
    if (!collapse.ok()) rep.fail({{"case", "boolean collapse"}, {"residual", collapse.residual.str()}});
    Matrix p = Matrix::identity(alg.m());
    for (int k = 1; k <= N / 2; ++k) {
        p = p * z;
        if (collapse.moments[k] != alg.state(p)) rep.fail({{"case", "boolean collapse"}, {"k", k}, {"reason", "diagonal moment differs from Phi(Z^k)"}});
    }
    const auto boolean_res = sided_r_residual(moments_to_cumulants(phi, N), N);
    if (!boolean_res.is_zero()) rep.fail({{"case", "boolean data"}, {"residual", detail::residual_cx(boolean_res)}});
    rep.detail = {{"seed", seed}, {"order", N}, {"residual_max_degree", res.max_degree()},
                  {"boolean_eta", series_json(collapse.cumulants, "x")}};
    return rep;
}

inline CheckReport verify_radditivity(std::uint64_t seed, int N = 6) {
    CheckReport rep{"radditivity"};
    Rng rng(seed);
    const auto k1 = random_pair_cumulants(rng, N), k2 = random_pair_cumulants(rng, N);
    const auto r = check_r_additivity(k1, k2, N);
    if (!r.ok()) rep.fail(detail::residual_cx(r.residual));
    rep.detail = {{"seed", seed}, {"order", N}, {"residual_max_degree", r.residual.max_degree()}};
    return rep;
}

}  // namespace bifree

#endif
