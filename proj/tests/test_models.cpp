#include "bifree/models.hpp"
#include "oracles.hpp"

#include <gtest/gtest.h>

using namespace bifree;

namespace {

GroupWord u(int g, int e = 1) { return GroupWord::generator(g, e); }

// Letters T1,S1,...,Tn,Sn with T_j = T_{eps_j, Z_j} and S_j = S_{eps_j, 1}.
OperatorModel boolean_pairs_model(const DoubledAlgebra& y, const std::vector<int>& eps, const std::vector<Matrix>& z) {
    OperatorModel m;
    for (std::size_t j = 0; j < eps.size(); ++j) {
        const std::string n = std::to_string(j + 1);
        m.add({"T" + n, Side::Left, eps[j]}, boolean_T(y, eps[j], z[j]));
        m.add({"S" + n, Side::Right, eps[j]}, boolean_S(y, eps[j]));
    }
    return m;
}

Word iota(int n) {
    Word w;
    for (int k = 0; k < n; ++k) w.push_back(k);
    return w;
}

std::vector<std::vector<int>> all_labelings(int n, int k) {
    std::vector<std::vector<int>> out{{}};
    for (int i = 0; i < n; ++i) {
        std::vector<std::vector<int>> next;
        for (const auto& v : out)
            for (int f = 1; f <= k; ++f) {
                auto x = v;
                x.push_back(f);
                next.push_back(x);
            }
        out = std::move(next);
    }
    return out;
}

// Boolean independence: product of the moments of maximal same-family runs.
template <class Moment>
Rational boolean_oracle(const std::vector<int>& fam, Moment run_moment) {
    Rational acc = 1;
    std::size_t i = 0;
    while (i < fam.size()) {
        std::size_t j = i;
        while (j < fam.size() && fam[j] == fam[i]) ++j;
        acc *= run_moment(i, j);
        i = j;
    }
    return acc;
}

}  // namespace

TEST(GroupWord, ParseReduceAndPrint) {
    EXPECT_TRUE(GroupWord::parse("e").is_identity());
    EXPECT_EQ(GroupWord::parse("u1^-2 u2").str(), "u1^-2 u2");
    EXPECT_EQ(GroupWord::parse("u1u2^3").length(), 4);
    EXPECT_TRUE(GroupWord::parse("u1 u2 u2^-1 u1^-1").is_identity());
    EXPECT_EQ(GroupWord::parse("u1 u1").str(), "u1^2");
    EXPECT_EQ((u(1) * u(2)).inverse(), u(2, -1) * u(1, -1));
    EXPECT_THROW(GroupWord::parse("x1"), ArgumentError);
    EXPECT_THROW(GroupWord::parse("u"), ArgumentError);
    EXPECT_THROW(GroupWord::parse("u0"), ArgumentError);
}

// Inserting h h^-1 anywhere leaves the reduced word unchanged.
TEST(GroupWord, CancellationFuzz) {
    Rng rng(1);
    for (int t = 0; t < 300; ++t) {
        std::vector<std::pair<int, int>> letters;
        const int len = static_cast<int>(rng.below(7));
        for (int i = 0; i < len; ++i) letters.emplace_back(1 + rng.below(3), rng.below(2) ? 1 : -1);
        auto build = [](const std::vector<std::pair<int, int>>& ls) {
            GroupWord w;
            for (const auto& [g, e] : ls) w = w * GroupWord::generator(g, e);
            return w;
        };
        auto base = build(letters);
        auto pos = letters.begin() + rng.below(letters.size() + 1);
        const int g = 1 + static_cast<int>(rng.below(3)), e = rng.below(2) ? 1 : -1;
        auto it = letters.insert(pos, {g, e});
        letters.insert(it + 1, {g, -e});
        EXPECT_EQ(build(letters), base);
        EXPECT_TRUE((base * base.inverse()).is_identity());
    }
}

TEST(LrMoment, Examples) {
    EXPECT_EQ(lr_moment({{Side::Left, u(1)}, {Side::Right, u(1, -1)}}), 1);
    EXPECT_EQ(lr_moment({{Side::Left, u(1)}}), 0);
    EXPECT_EQ(lr_moment({{Side::Left, u(1)}, {Side::Left, u(2)}, {Side::Left, u(2, -1)}, {Side::Left, u(1, -1)}}), 1);
    // Right to left: u1^-1, u1^-1 u2, u1^-1 u2 u1, then u2^-1 u1^-1 u2 u1 != e.
    EXPECT_EQ(lr_moment({{Side::Left, u(2, -1)}, {Side::Right, u(1)}, {Side::Right, u(2)}, {Side::Left, u(1, -1)}}), 0);
    EXPECT_EQ(lr_moment({{Side::Right, u(2)}, {Side::Left, u(2, -1)}}), 1);
    EXPECT_EQ(lr_moment({{Side::Right, u(2, -1)}, {Side::Left, u(1, -1)}, {Side::Left, u(1)}, {Side::Right, u(2)}}), 1);
    EXPECT_EQ(lr_moment({}), 1);
}

TEST(FreeGroup, PairsAreBifreeToOrder6) {
    auto dist = freegroup_distribution(freegroup_pairs(2), 6);
    EXPECT_EQ(dist.entries(), 5460u);
    EXPECT_TRUE(check_bifree(dist, 6).empty());
}

// The unpaired mix (lambda(u1), lambda(u1)) is one family; pairing lambda(u1) with rho(u2) is not bi-free.
TEST(FreeGroup, MismatchedPairIsDetected) {
    std::vector<FreeGroupLetter> spec{{{"T1", Side::Left, 1}, u(1)},
                                      {{"S1", Side::Right, 1}, u(1)},
                                      {{"T2", Side::Left, 2}, u(1, -1)},
                                      {{"S2", Side::Right, 2}, u(2)}};
    auto dist = freegroup_distribution(spec, 4);
    auto report = check_bifree(dist, 4);
    ASSERT_FALSE(report.empty());
    EXPECT_EQ(word_str(dist.alphabet(), report.front().word), "(T1,T2)");
    EXPECT_EQ(report.front().value, 1);
}

// alg{lambda(u_k^p) rho(u_k^{+-q})} for k = 1, 2 are Boolean independent.
TEST(FreeGroup, BooleanFactorization) {
    for (int sign : {1, -1}) {
        std::vector<std::pair<int, std::pair<int, int>>> elems;  // family, (p, q)
        for (int k = 1; k <= 2; ++k)
            for (int p = 1; p <= 2; ++p)
                for (int q = 1; q <= 2; ++q) elems.push_back({k, {p, sign * q}});
        auto seq_of = [&](const std::vector<int>& idx, std::size_t from, std::size_t to) {
            std::vector<std::pair<Side, GroupWord>> seq;
            for (std::size_t i = from; i < to; ++i) {
                const auto& [k, pq] = elems[idx[i]];
                seq.emplace_back(Side::Left, u(k, pq.first));
                seq.emplace_back(Side::Right, u(k, pq.second));
            }
            return seq;
        };
        int checked = 0, nonzero = 0;
        for (int n = 1; n <= 4; ++n)
            for (const auto& lab : all_labelings(n, static_cast<int>(elems.size()))) {
                std::vector<int> idx, fam;
                for (int x : lab) {
                    idx.push_back(x - 1);
                    fam.push_back(elems[x - 1].first);
                }
                const Rational lhs = lr_moment(seq_of(idx, 0, idx.size()));
                const Rational rhs = boolean_oracle(fam, [&](std::size_t i, std::size_t j) { return lr_moment(seq_of(idx, i, j)); });
                ASSERT_EQ(lhs, rhs);
                ++checked;
                if (lhs != 0) ++nonzero;
            }
        EXPECT_GT(checked, 4000);
        // With positive exponents on both sides nothing cancels.
        if (sign < 0) {
            EXPECT_GT(nonzero, 10);
        } else {
            EXPECT_EQ(nonzero, 0);
        }
    }
}

// alg{lambda(u1^p) rho(u1^q)} and alg{lambda(u2^p)} are monotone (1 < 2): each
// maximal run from the second algebra factors out as its own moment.
TEST(FreeGroup, MonotoneFactorization) {
    struct Elem {
        int family;
        std::vector<std::pair<Side, GroupWord>> seq;
    };
    std::vector<Elem> elems;
    for (int p = 1; p <= 2; ++p)
        for (int q = -2; q <= 2; ++q) elems.push_back({1, {{Side::Left, u(1, p)}, {Side::Right, u(1, q)}}});
    for (int p : {-2, -1, 1, 2}) elems.push_back({2, {{Side::Left, u(2, p)}}});
    int nonzero = 0;
    for (int n = 1; n <= 4; ++n)
        for (const auto& lab : all_labelings(n, static_cast<int>(elems.size()))) {
            std::vector<std::pair<Side, GroupWord>> all, ones;
            Rational runs = 1;
            std::vector<std::pair<Side, GroupWord>> run;
            for (std::size_t i = 0; i < lab.size(); ++i) {
                const auto& e = elems[lab[i] - 1];
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
            const Rational lhs = lr_moment(all);
            ASSERT_EQ(lhs, runs * lr_moment(ones));
            if (lhs != 0) ++nonzero;
        }
    EXPECT_GT(nonzero, 100);
}

TEST(FreeGroupBall, MatchesSymbolicMoments) {
    FreeGroupBall ball(2, 4);
    EXPECT_EQ(ball.dim(), 1 + 4 + 12 + 36 + 108);
    auto X = ball.space();
    X.validate();
    // E(lambda(u1) rho(u1^-1)) = 1
    EXPECT_EQ(expectation(X, OpChain{make_op(ball.lambda(u(1))), make_op(ball.rho(u(1, -1)))})(0, 0), 1);
    Rng rng(2);
    for (int t = 0; t < 200; ++t) {
        std::vector<std::pair<Side, GroupWord>> seq;
        OpChain chain;
        const int len = 1 + static_cast<int>(rng.below(4));
        for (int i = 0; i < len; ++i) {
            const Side s = rng.below(2) ? Side::Left : Side::Right;
            const auto h = u(1 + static_cast<int>(rng.below(2)), rng.below(2) ? 1 : -1);
            seq.emplace_back(s, h);
            chain.push_back(make_op(s == Side::Left ? ball.lambda(h) : ball.rho(h)));
        }
        ASSERT_EQ(expectation(X, chain)(0, 0), lr_moment(seq));
    }
}

namespace {

std::vector<BFacePair> ball_pairs(const FreeGroupBall& ball, const ConcreteBBSpace& X) {
    std::vector<BFacePair> pairs;
    for (int k = 1; k <= 2; ++k)
        pairs.push_back(BFacePair{k, {make_sided(X, ball.lambda(u(k)), Side::Left)}, {make_sided(X, ball.rho(u(k)), Side::Right)}});
    return pairs;
}

}  // namespace

TEST(FreeGroupBall, OperatorValuedMixedCumulantsVanish) {
    FreeGroupBall ball(2, 4);
    auto X = ball.space();
    auto pairs = ball_pairs(ball, X);
    std::vector<SidedOperator> letters{pairs[0].left[0], pairs[0].right[0], pairs[1].left[0], pairs[1].right[0]};
    const int fam[4] = {1, 1, 2, 2};
    int mixed = 0;
    for (int n = 2; n <= 4; ++n)
        for (const auto& w : all_words(4, n)) {
            if (static_cast<int>(w.size()) != n) continue;
            bool is_mixed = false;
            std::vector<Side> sides;
            std::vector<SidedOperator> ops;
            for (int x : w) {
                is_mixed |= fam[x] != fam[w[0]];
                sides.push_back(letters[x].side);
                ops.push_back(letters[x]);
            }
            if (!is_mixed) continue;
            ++mixed;
            ASSERT_TRUE(kappa_pi_opval(X, ops, BiPartition::one(ChiMap(sides))).is_zero());
        }
    EXPECT_GT(mixed, 250);
}

TEST(FreeGroupBall, BifreeOverM2) {
    FreeGroupBall ball(2, 4);
    auto X = ball.space();
    auto pairs = ball_pairs(ball, X);
    for (std::uint64_t seed : {1u, 2u})
        EXPECT_TRUE(check_bifree_over_MnB(pairs, X, 2, 4, AmplifyMode::Generic, seed).empty());
    EXPECT_TRUE(check_bifree_over_MnB(pairs, X, 2, 4, AmplifyMode::Diagonal).empty());
}

TEST(FreeGroupBall, TensorLemmaBaseCase) {
    FreeGroupBall ball(2, 3);
    auto X = ball.space();
    auto A = amplify(X, 2);
    auto chi = ChiMap::parse("LR");
    std::vector<SidedOperator> ops{make_sided(X, ball.lambda(u(1)), Side::Left), make_sided(X, ball.rho(u(1, -1)), Side::Right)};
    for (int i1 = 1; i1 <= 2; ++i1)
        for (int j1 = 1; j1 <= 2; ++j1)
            for (int i2 = 1; i2 <= 2; ++i2)
                for (int j2 = 1; j2 <= 2; ++j2)
                    EXPECT_TRUE(check_tensor_factorization(X, A, 2, ops, {i1, i2}, {j1, j2}, BiPartition::one(chi)));
}

TEST(StateAlgebra, AdaptedCoordinates) {
    Rng rng(3);
    Matrix w(3, 3);
    w(0, 0) = Rational(1, 2);
    w(1, 1) = Rational(1, 3);
    w(2, 2) = Rational(1, 6);
    w(0, 2) = 5;
    StateAlgebra a(3, w);
    EXPECT_THROW(StateAlgebra(2, Matrix::identity(2)), ArgumentError);
    for (int t = 0; t < 20; ++t) {
        auto x = a.random_element(rng), z = a.random_element(rng);
        auto c = a.to_coords(x);
        EXPECT_EQ(c[0], a.state(x));
        EXPECT_EQ(a.from_coords(c), x);
        EXPECT_EQ(a.from_coords(a.left_mult(z).apply(c)), z * x);
        EXPECT_EQ(a.from_coords(a.right_mult(z).apply(c)), x * z);
        // Non-vacuum basis vectors lie in ker Phi.
        Vector e(a.dim(), Rational(0));
        e[1 + rng.below(a.dim() - 1)] = 1;
        EXPECT_EQ(a.state(a.from_coords(e)), 0);
    }
}

TEST(BooleanPairs, OperatorIdentities) {
    DoubledAlgebra y(StateAlgebra::normalized_trace(2));
    Rng rng(4);
    auto z = y.base().random_element(rng), z2 = y.base().random_element(rng);
    EXPECT_TRUE((y.T(z) * y.T(z2)).is_zero());
    EXPECT_TRUE((y.S() * y.S()).is_zero());
    EXPECT_EQ(y.U() * y.U(), SparseMatrix::identity(y.dim()));
    EXPECT_EQ(y.T_prime(z) * y.T_prime(z2), y.T_prime(z * z2));
    // n = 1: E(T_Z S_1) = Phi(Z)
    OperatorModel m;
    m.add({"B", Side::Left, 1}, boolean_beta(y, 1, z));
    EXPECT_EQ(m.moment({0}), y.base().state(z));
}

// Single family: E(T_{Z1} S ... T_{Zn} S) = Phi(Z1 ... Zn); conditions of the Boolean system.
TEST(BooleanPairs, MomentIdentityAndSystemConditions) {
    for (auto alg : {StateAlgebra::normalized_trace(2), StateAlgebra::vector_state(3, 1)}) {
        DoubledAlgebra y(alg);
        Rng rng(5);
        for (int n = 1; n <= 4; ++n) {
            std::vector<Matrix> z;
            for (int j = 0; j < n; ++j) z.push_back(alg.random_element(rng));
            auto m = boolean_pairs_model(y, std::vector<int>(n, 1), z);
            Matrix prod = Matrix::identity(alg.m());
            for (const auto& x : z) prod = prod * x;
            EXPECT_EQ(m.moment(iota(2 * n)), alg.state(prod));
            // E(C'(D'C')^k) = 0 = E(D'(C'D')^k) and T T = 0 = S S.
            for (int k = 0; k < n; ++k) {
                Word a, b;
                for (int i = 0; i <= 2 * k; ++i) {
                    a.push_back(i);
                    b.push_back(i + 1);
                }
                EXPECT_EQ(m.moment(a), 0) << word_str(*m.alphabet(), a);
                if (b.back() < 2 * n) {
                    EXPECT_EQ(m.moment(b), 0) << word_str(*m.alphabet(), b);
                }
            }
            if (n >= 2) {
                EXPECT_EQ(m.moment({0, 2, 1, 3}), 0);
                EXPECT_EQ(m.moment({0, 1, 3, 3}), 0);
            }
        }
    }
}

// Boolean independence of the embedded families: the product of run moments.
TEST(BooleanPairs, BooleanFactorizationAcrossFamilies) {
    StateAlgebra alg = StateAlgebra::normalized_trace(2);
    DoubledAlgebra y(alg);
    Rng rng(6);
    std::vector<Matrix> z;
    OperatorModel m;
    for (int j = 0; j < 4; ++j) {
        z.push_back(alg.random_element(rng));
        const int fam = 1 + j / 2;
        m.add({"B" + std::to_string(j), Side::Left, fam}, boolean_beta(y, fam, z[j]));
    }
    for (int n = 1; n <= 4; ++n)
        for (const auto& w : all_words(4, n)) {
            if (static_cast<int>(w.size()) != n) continue;
            std::vector<int> fam;
            for (int x : w) fam.push_back(1 + x / 2);
            const Rational rhs = boolean_oracle(fam, [&](std::size_t i, std::size_t j) {
                Matrix p = Matrix::identity(2);
                for (std::size_t t = i; t < j; ++t) p = p * z[w[t]];
                return alg.state(p);
            });
            ASSERT_EQ(m.moment(w), rhs) << word_str(*m.alphabet(), w);
        }
}

TEST(BooleanEmbedding, HomomorphicEmbedding) {
    StateAlgebra alg = StateAlgebra::vector_state(2, 0);
    DoubledAlgebra y(alg);
    Rng rng(7);
    std::vector<Matrix> z;
    for (int j = 0; j < 4; ++j) z.push_back(alg.random_element(rng));
    OperatorModel m;
    m.add({"A", Side::Left, 1}, boolean_hom_beta(y, 1, z[0]));
    m.add({"B", Side::Left, 1}, boolean_hom_beta(y, 1, z[1]));
    m.add({"AB", Side::Left, 1}, boolean_hom_beta(y, 1, z[0] * z[1]));
    m.add({"C", Side::Left, 2}, boolean_hom_beta(y, 2, z[2]));
    m.add({"D", Side::Left, 1}, boolean_hom_beta(y, 1, z[3]));
    // beta(Z) beta(Z') = beta(Z Z') inside any word.
    EXPECT_EQ(m.moment({0, 1}), m.moment({2}));
    EXPECT_EQ(m.moment({3, 0, 1, 3}), m.moment({3, 2, 3}));
    EXPECT_EQ(m.moment({0, 1, 3}), m.moment({2, 3}));
    // Alternating families: product of the means.
    const Rational p0 = alg.state(z[0]), p2 = alg.state(z[2]), p3 = alg.state(z[3]);
    EXPECT_EQ(m.moment({0, 3, 4}), p0 * p2 * p3);
    EXPECT_EQ(m.moment({3, 0, 3}), p2 * p0 * p2);
    EXPECT_EQ(m.moment({0}), p0);
}

// E(T1 S1 ... Tn Sn) = sum over BNC_b of kappa_pi, and mixed kappa_{1_chi} vanish.
TEST(BooleanPairs, BooleanMomentCumulantFormulaUpTo4Pairs) {
    StateAlgebra alg = StateAlgebra::normalized_trace(2);
    DoubledAlgebra y(alg);
    Rng rng(8);
    for (int n = 1; n <= 4; ++n) {
        const auto chi = ChiMap::alternating(n);
        const auto boolean = enumerate_family(chi, Tag::BNC_b).members;
        for (const auto& eps : all_labelings(n, 2)) {
            std::vector<Matrix> z;
            for (int j = 0; j < n; ++j) z.push_back(alg.random_element(rng));
            auto m = boolean_pairs_model(y, eps, z);
            LazyCumulants lc(m.alphabet(), m.moment_function());
            const Word w = iota(2 * n);
            Rational sum = 0;
            for (const auto& pi : boolean) sum += lc.kappa_product(w, pi);
            ASSERT_EQ(m.moment(w), sum);
            const bool constant = std::all_of(eps.begin(), eps.end(), [&](int e) { return e == eps[0]; });
            if (!constant) {
                ASSERT_EQ(lc.cumulant(w), 0);
            }
        }
    }
}

// E_pi = 0 for pi <= eps outside BNC_b, exhaustively at n <= 3 pairs over three families.
TEST(BooleanPairs, VanishingLemmaUpTo3Pairs) {
    StateAlgebra alg = StateAlgebra::vector_state(2, 0);
    DoubledAlgebra y(alg);
    Rng rng(9);
    int checked = 0;
    for (int n = 1; n <= 3; ++n) {
        const auto chi = ChiMap::alternating(n);
        for (const auto& eps : all_labelings(n, 3)) {
            std::vector<Matrix> z;
            for (int j = 0; j < n; ++j) z.push_back(alg.random_element(rng));
            auto m = boolean_pairs_model(y, eps, z);
            LazyCumulants lc(m.alphabet(), m.moment_function());
            const Word w = iota(2 * n);
            std::vector<int> pos_eps;
            for (int e : eps) pos_eps.insert(pos_eps.end(), {e, e});
            for (const auto& pi : *bnc_members(chi)) {
                if (!below_epsilon(pi, pos_eps) || has_tag(pi, Tag::BNC_b)) continue;
                ASSERT_EQ(lc.phi_pi(w, pi), 0) << pi.str();
                ++checked;
            }
        }
    }
    EXPECT_GT(checked, 100);
}

// Boolean cumulants of the base recovered as kappa_{1_chi} of the embedded word.
TEST(BooleanPairs, BooleanCumulantsViaInterleavedWords) {
    StateAlgebra alg = StateAlgebra::normalized_trace(2);
    DoubledAlgebra y(alg);
    Rng rng(10);
    const int n = 4;
    std::vector<Matrix> z;
    for (int j = 0; j < n; ++j) z.push_back(alg.random_element(rng));
    auto m = boolean_pairs_model(y, std::vector<int>(n, 1), z);
    auto table = m.tabulate({iota(2 * n)}, 2 * n);
    auto phi = [&](int i, int j) {  // Phi(Z_i ... Z_{j-1})
        Matrix p = Matrix::identity(2);
        for (int t = i; t < j; ++t) p = p * z[t];
        return alg.state(p);
    };
    std::vector<Rational> kb(n + 1);  // kb[j] = Boolean cumulant of Z_0 .. Z_{j-1}
    for (int j = 1; j <= n; ++j) {
        kb[j] = phi(0, j);
        for (int i = 1; i < j; ++i) kb[j] -= kb[i] * phi(i, j);
        EXPECT_EQ(boolean_cumulant(iota(2 * j), table), kb[j]) << j;
    }
}

namespace {

struct MonotoneSetup {
    MonotoneTensorFixture fx{2, 2};
    StateAlgebra alg = fx.algebra();
    std::vector<Matrix> elems;  // images in M_{d1 d2}
    std::vector<int> fams;
    OperatorModel model;
    MomentFunctional base;

    explicit MonotoneSetup(std::uint64_t seed, int N) : base(std::make_shared<Alphabet>(), 0) {
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
        for (const auto& w : all_words(4, N)) base.set(w, base_moment(w));
    }
    Rational base_moment(const Word& w) const {
        Matrix p = Matrix::identity(alg.m());
        for (int x : w) p = p * elems[x];
        return alg.state(p);
    }
    // Runs of family-2 elements factor out; the family-1 elements multiply.
    Rational oracle(const Word& w) const {
        Rational acc = 1;
        Word ones, run;
        for (int x : w) {
            if (fams[x] == 1) {
                ones.push_back(x);
                if (!run.empty()) acc *= base_moment(run);
                run.clear();
            } else {
                run.push_back(x);
            }
        }
        if (!run.empty()) acc *= base_moment(run);
        return acc * base_moment(ones);
    }
};

}  // namespace

TEST(MonotoneEmbedding, EmbeddingPreservesTheJointDistribution) {
    MonotoneSetup s(11, 5);
    for (const auto& w : all_words(4, 5)) {
        if (w.empty()) continue;
        ASSERT_EQ(s.model.moment(w), s.base.value(w)) << word_str(s.base.alphabet(), w);
        ASSERT_EQ(s.base.value(w), s.oracle(w)) << word_str(s.base.alphabet(), w);
    }
}

TEST(MonotoneEmbedding, ThreeLetterExamples) {
    MonotoneSetup s(12, 3);
    // Phi(a b a') = Phi(b) Phi(a a') for a, a' in A_1 and b in A_2.
    EXPECT_EQ(s.base.value({0, 2, 1}), s.base.value({2}) * s.base.value({0, 1}));
    // Centering the middle element kills the word.
    auto centred = s.elems[2] - s.alg.state(s.elems[2]) * Matrix::identity(4);
    EXPECT_EQ(s.alg.state(s.elems[0] * centred * s.elems[1]), 0);
}

TEST(MonotoneEmbedding, MonotoneMomentCumulantFormula) {
    for (std::uint64_t seed : {13u, 14u}) {
        MonotoneSetup s(seed, 5);
        auto kappa = moments_to_cumulants(s.base, 5);
        for (const auto& w : all_words(4, 5)) {
            if (w.empty()) continue;
            ASSERT_EQ(independence_sum(kappa, w, IndependenceMode::Monotone), s.model.moment(w))
                << word_str(s.base.alphabet(), w);
        }
    }
}
