#ifndef BIFREE_MODELS_HPP
#define BIFREE_MODELS_HPP

// Concrete spaces producing exact moment data: the free group with its left
// and right regular representations, matrix algebras with a state, and
// reduced free products of vector spaces tracked on finitely many tensors.

#include "opval.hpp"
#include "scalar.hpp"

#include <cctype>
#include <map>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

namespace bifree {

// ---- Free group ----

// Reduced word as syllables (generator >= 1, exponent != 0), adjacent generators distinct.
class GroupWord {
public:
    GroupWord() = default;
    static GroupWord generator(int g, int exponent = 1) {
        if (g < 1) throw ArgumentError("generator index must be >= 1");
        GroupWord w;
        w.push(g, exponent);
        return w;
    }

    // "e", "u1", "u1^-2 u2", "u1u2^3".
    static GroupWord parse(std::string_view text) {
        GroupWord w;
        std::size_t i = 0;
        auto bad = [&](const std::string& why) {
            return ArgumentError("malformed group element \"" + std::string(text) + "\": " + why);
        };
        auto skip = [&] {
            while (i < text.size() && std::isspace(static_cast<unsigned char>(text[i]))) ++i;
        };
        auto number = [&](bool allow_sign) {
            std::size_t start = i;
            if (allow_sign && i < text.size() && text[i] == '-') ++i;
            while (i < text.size() && std::isdigit(static_cast<unsigned char>(text[i]))) ++i;
            std::string s(text.substr(start, i - start));
            if (s.empty() || s == "-") throw bad("expected a number at offset " + std::to_string(start));
            return std::stoi(s);
        };
        skip();
        if (text.substr(i) == "e") return w;
        while (skip(), i < text.size()) {
            if (text[i] != 'u') throw bad("expected 'u' at offset " + std::to_string(i));
            ++i;
            const int g = number(false);
            int e = 1;
            if (i < text.size() && text[i] == '^') {
                ++i;
                e = number(true);
            }
            if (g < 1) throw bad("generator index must be >= 1");
            w.push(g, e);
        }
        return w;
    }

    const std::vector<std::pair<int, int>>& syllables() const { return syl_; }
    bool is_identity() const { return syl_.empty(); }
    int length() const {
        int n = 0;
        for (const auto& s : syl_) n += std::abs(s.second);
        return n;
    }

    GroupWord inverse() const {
        GroupWord w;
        for (auto it = syl_.rbegin(); it != syl_.rend(); ++it) w.syl_.emplace_back(it->first, -it->second);
        return w;
    }

    friend GroupWord operator*(const GroupWord& a, const GroupWord& b) {
        GroupWord w = a;
        for (const auto& s : b.syl_) w.push(s.first, s.second);
        return w;
    }
    friend bool operator==(const GroupWord& a, const GroupWord& b) { return a.syl_ == b.syl_; }
    friend bool operator<(const GroupWord& a, const GroupWord& b) { return a.syl_ < b.syl_; }

    std::string str() const {
        if (syl_.empty()) return "e";
        std::string s;
        for (const auto& [g, e] : syl_) {
            s += (s.empty() ? "u" : " u") + std::to_string(g);
            if (e != 1) s += "^" + std::to_string(e);
        }
        return s;
    }

private:
    void push(int g, int e) {
        if (e == 0) return;
        if (!syl_.empty() && syl_.back().first == g) {
            syl_.back().second += e;
            if (syl_.back().second == 0) syl_.pop_back();
        } else {
            syl_.emplace_back(g, e);
        }
    }
    std::vector<std::pair<int, int>> syl_;
};

// Letters applied right to left to delta_e; lambda(h) prepends h, rho(h) appends h.
inline Rational lr_moment(const std::vector<std::pair<Side, GroupWord>>& letters) {
    GroupWord x;
    for (auto it = letters.rbegin(); it != letters.rend(); ++it) x = it->first == Side::Left ? it->second * x : x * it->second;
    return x.is_identity() ? 1 : 0;
}

struct FreeGroupLetter {
    Letter letter;  // side Left means lambda, Right means rho
    GroupWord element;
};

inline AlphabetPtr freegroup_alphabet(const std::vector<FreeGroupLetter>& spec) {
    auto a = std::make_shared<Alphabet>();
    for (const auto& l : spec) a->add(l.letter);
    return a;
}

inline Rational freegroup_moment(const std::vector<FreeGroupLetter>& spec, const Word& w) {
    std::vector<std::pair<Side, GroupWord>> seq;
    for (int x : w) seq.emplace_back(spec.at(x).letter.side, spec.at(x).element);
    return lr_moment(seq);
}

inline MomentFunctional freegroup_distribution(const std::vector<FreeGroupLetter>& spec, int N) {
    MomentFunctional m(freegroup_alphabet(spec), N);
    for (const auto& w : all_words(static_cast<int>(spec.size()), N)) m.set(w, freegroup_moment(spec, w));
    return m;
}

// Pairs (lambda(u_k), rho(u_k)) named T{k}, S{k} in family k.
inline std::vector<FreeGroupLetter> freegroup_pairs(int g) {
    std::vector<FreeGroupLetter> out;
    for (int k = 1; k <= g; ++k) {
        out.push_back({{"T" + std::to_string(k), Side::Left, k}, GroupWord::generator(k)});
        out.push_back({{"S" + std::to_string(k), Side::Right, k}, GroupWord::generator(k)});
    }
    return out;
}

// l2 of the ball of reduced words of length <= radius, as a space over B = scalars.
// lambda/rho are truncated at the boundary, so words applying at most `radius`
// generators to delta_e are computed exactly.
class FreeGroupBall {
public:
    FreeGroupBall(int generators, int radius) : g_(generators), radius_(radius) {
        if (g_ < 1 || radius_ < 0) throw ArgumentError("free group ball needs g >= 1, radius >= 0");
        std::vector<GroupWord> frontier{GroupWord()};
        add(GroupWord());
        for (int len = 1; len <= radius_; ++len) {
            std::vector<GroupWord> next;
            for (const auto& w : frontier)
                for (int k = 1; k <= g_; ++k)
                    for (int e : {1, -1}) {
                        auto v = w * GroupWord::generator(k, e);
                        if (v.length() == len && !index_.count(v)) {
                            add(v);
                            next.push_back(v);
                        }
                    }
            frontier = std::move(next);
        }
    }
    int dim() const { return static_cast<int>(words_.size()); }
    const GroupWord& word(int i) const { return words_[i]; }

    ConcreteBBSpace space() const {
        auto id = SparseMatrix::identity(dim());
        return ConcreteBBSpace(1, dim(), {0}, {id}, {id});
    }
    SparseMatrix lambda(const GroupWord& h) const { return action(h, Side::Left); }
    SparseMatrix rho(const GroupWord& h) const { return action(h, Side::Right); }

private:
    void add(const GroupWord& w) {
        index_[w] = static_cast<int>(words_.size());
        words_.push_back(w);
    }
    SparseMatrix action(const GroupWord& h, Side side) const {
        std::vector<std::tuple<int, int, Rational>> e;
        for (int i = 0; i < dim(); ++i) {
            auto v = side == Side::Left ? h * words_[i] : words_[i] * h;
            auto it = index_.find(v);
            if (it != index_.end()) e.emplace_back(it->second, i, 1);
        }
        return SparseMatrix::from_entries(dim(), e);
    }

    int g_, radius_;
    std::vector<GroupWord> words_;
    std::map<GroupWord, int> index_;
};

// ---- Matrix algebra with a state ----

// M_m with Phi(X) = sum W_ij X_ij. Coordinates are adapted to Phi: coordinate 0
// is Phi(X), the others are those of X - Phi(X) I in the basis E_rc - Phi(E_rc) I,
// (r,c) != (0,0), so coordinate 0 is the vacuum and the rest span ker Phi.
class StateAlgebra {
public:
    StateAlgebra(int m, Matrix weights) : m_(m), w_(std::move(weights)) {
        if (m_ < 1 || w_.rows() != m_ || w_.cols() != m_) throw ArgumentError("state weights must be m x m");
        Rational tr = 0;
        for (int i = 0; i < m_; ++i) tr += w_(i, i);
        if (tr != 1) throw ArgumentError("state is not unital");
    }
    static StateAlgebra normalized_trace(int m) { return StateAlgebra(m, Rational(1, m) * Matrix::identity(m)); }
    static StateAlgebra vector_state(int m, int i = 0) { return StateAlgebra(m, Matrix::unit(m, i, i)); }

    int m() const { return m_; }
    int dim() const { return m_ * m_; }
    const Matrix& weights() const { return w_; }

    Rational state(const Matrix& x) const {
        Rational acc = 0;
        for (int i = 0; i < m_; ++i)
            for (int j = 0; j < m_; ++j)
                if (w_(i, j) != 0) acc += w_(i, j) * x(i, j);
        return acc;
    }

    Vector to_coords(const Matrix& x) const {
        Vector v(dim(), Rational(0));
        v[0] = state(x);
        for (int r = 0; r < m_; ++r)
            for (int c = 0; c < m_; ++c)
                if (r || c) v[r * m_ + c] = r == c ? x(r, c) - x(0, 0) : x(r, c);
        return v;
    }
    Matrix from_coords(const Vector& v) const {
        Matrix x = v.at(0) * Matrix::identity(m_);
        for (int r = 0; r < m_; ++r)
            for (int c = 0; c < m_; ++c)
                if ((r || c) && v[r * m_ + c] != 0)
                    x = x + v[r * m_ + c] * (Matrix::unit(m_, r, c) - w_(r, c) * Matrix::identity(m_));
        return x;
    }

    // Multiplication as an operator on adapted coordinates.
    SparseMatrix left_mult(const Matrix& z) const {
        return as_operator([&](const Matrix& x) { return z * x; });
    }
    SparseMatrix right_mult(const Matrix& z) const {
        return as_operator([&](const Matrix& x) { return x * z; });
    }

    Matrix random_element(Rng& rng) const {
        Matrix x(m_, m_);
        for (int r = 0; r < m_; ++r)
            for (int c = 0; c < m_; ++c) x(r, c) = rng.rational();
        return x;
    }

    // The scalar B-B-space (A, ker Phi, Phi) at d = 1.
    ConcreteBBSpace space() const {
        auto id = SparseMatrix::identity(dim());
        return ConcreteBBSpace(1, dim(), {0}, {id}, {id});
    }

private:
    template <class F>
    SparseMatrix as_operator(F f) const {
        std::vector<std::tuple<int, int, Rational>> e;
        for (int k = 0; k < dim(); ++k) {
            Vector basis(dim(), Rational(0));
            basis[k] = 1;
            auto out = to_coords(f(from_coords(basis)));
            for (int r = 0; r < dim(); ++r)
                if (out[r] != 0) e.emplace_back(r, k, out[r]);
        }
        return SparseMatrix::from_entries(dim(), e);
    }

    int m_;
    Matrix w_;
};

// A (+) A with Psi(Z1 (+) Z2) = Phi(Z1). Coordinates: adapted Z1, then the plain
// entries of Z2, so coordinate 0 is the vacuum 1 (+) 0.
class DoubledAlgebra {
public:
    explicit DoubledAlgebra(StateAlgebra a) : a_(std::move(a)) {}
    const StateAlgebra& base() const { return a_; }
    int dim() const { return 2 * a_.dim(); }

    Vector to_coords(const Matrix& z1, const Matrix& z2) const {
        Vector v = a_.to_coords(z1);
        for (int r = 0; r < a_.m(); ++r)
            for (int c = 0; c < a_.m(); ++c) v.push_back(z2(r, c));
        return v;
    }
    std::pair<Matrix, Matrix> from_coords(const Vector& v) const {
        const int n = a_.dim(), m = a_.m();
        Matrix z2(m, m);
        for (int r = 0; r < m; ++r)
            for (int c = 0; c < m; ++c) z2(r, c) = v.at(n + r * m + c);
        return {a_.from_coords(Vector(v.begin(), v.begin() + n)), z2};
    }

    // T_Z(Z1, Z2) = (Z Z2, 0)
    SparseMatrix T(const Matrix& z) const {
        const Matrix zero(a_.m(), a_.m());
        return as_operator([&](const Matrix&, const Matrix& z2) { return std::make_pair(z * z2, zero); });
    }
    // S_1(Z1, Z2) = (0, Z1)
    SparseMatrix S() const {
        const Matrix zero(a_.m(), a_.m());
        return as_operator([&](const Matrix& z1, const Matrix&) { return std::make_pair(zero, z1); });
    }
    // T'_Z(Z1, Z2) = (0, Z Z2)
    SparseMatrix T_prime(const Matrix& z) const {
        const Matrix zero(a_.m(), a_.m());
        return as_operator([&](const Matrix&, const Matrix& z2) { return std::make_pair(zero, z * z2); });
    }
    // U_1(Z1, Z2) = (Z2, Z1)
    SparseMatrix U() const {
        return as_operator([&](const Matrix& z1, const Matrix& z2) { return std::make_pair(z2, z1); });
    }

private:
    template <class F>
    SparseMatrix as_operator(F f) const {
        std::vector<std::tuple<int, int, Rational>> e;
        for (int k = 0; k < dim(); ++k) {
            Vector basis(dim(), Rational(0));
            basis[k] = 1;
            auto [z1, z2] = from_coords(basis);
            auto [y1, y2] = f(z1, z2);
            auto out = to_coords(y1, y2);
            for (int r = 0; r < dim(); ++r)
                if (out[r] != 0) e.emplace_back(r, k, out[r]);
        }
        return SparseMatrix::from_entries(dim(), e);
    }
    StateAlgebra a_;
};

// ---- Reduced free product of vector spaces with specified state vectors ----

// Simple tensor of basis vectors (component, index >= 1), adjacent components distinct.
using FPTensor = std::vector<std::pair<int, int>>;
using FPVector = std::map<FPTensor, Rational>;

// lambda_k(A) or rho_k(A) for an operator A on component k (coordinate 0 = vacuum).
class FPFactor {
public:
    FPFactor(int component, Side side, const SparseMatrix& a) : comp_(component), side_(side), dim_(a.size()), cols_(a.size()) {
        for (int r = 0; r < a.size(); ++r)
            for (const auto& [c, v] : a.row(r)) cols_[c].emplace_back(r, v);
    }
    int component() const { return comp_; }
    Side side() const { return side_; }
    int dim() const { return dim_; }

    FPVector apply(const FPVector& x) const {
        FPVector out;
        for (const auto& [t, coef] : x) {
            const bool on_end = !t.empty() && (side_ == Side::Left ? t.front() : t.back()).first == comp_;
            const int i = on_end ? (side_ == Side::Left ? t.front() : t.back()).second : 0;
            for (const auto& [j, v] : cols_[i]) {
                FPTensor u = t;
                if (on_end) {
                    auto pos = side_ == Side::Left ? u.begin() : u.end() - 1;
                    if (j == 0)
                        u.erase(pos);
                    else
                        pos->second = j;
                } else if (j != 0) {
                    if (side_ == Side::Left)
                        u.insert(u.begin(), {comp_, j});
                    else
                        u.push_back({comp_, j});
                }
                Rational& slot = out[u];
                slot += coef * v;
                if (slot == 0) out.erase(u);
            }
        }
        return out;
    }

private:
    int comp_;
    Side side_;
    int dim_;
    std::vector<std::vector<std::pair<int, Rational>>> cols_;
};

// One alphabet letter: a product of factors, leftmost first.
using ModelLetter = std::vector<FPFactor>;

class OperatorModel {
public:
    OperatorModel() : alphabet_(std::make_shared<Alphabet>()) {}

    int add(const Letter& l, ModelLetter factors) {
        for (const auto& f : factors) {
            auto it = dims_.find(f.component());
            if (it == dims_.end())
                dims_[f.component()] = f.dim();
            else if (it->second != f.dim())
                throw ArgumentError("component " + std::to_string(f.component()) + " used with two dimensions");
        }
        const int id = alphabet_->add(l);
        letters_.push_back(std::move(factors));
        memo_.clear();
        return id;
    }
    AlphabetPtr alphabet() const { return alphabet_; }
    int size() const { return alphabet_->size(); }

    // Vacuum coefficient of the word applied to the vacuum.
    Rational moment(const Word& w) const {
        if (w.empty()) return 1;
        auto it = memo_.find(w);
        if (it != memo_.end()) return it->second;
        FPVector x{{FPTensor{}, Rational(1)}};
        for (auto li = w.rbegin(); li != w.rend() && !x.empty(); ++li) {
            const auto& letter = letters_.at(*li);
            for (auto f = letter.rbegin(); f != letter.rend() && !x.empty(); ++f) x = f->apply(x);
        }
        auto v = x.find(FPTensor{});
        Rational r = v == x.end() ? Rational(0) : v->second;
        memo_.emplace(w, r);
        return r;
    }
    WordFunction moment_function() const {
        return [this](const Word& w) { return moment(w); };
    }

    MomentFunctional tabulate(const std::vector<Word>& words, int order) const {
        MomentFunctional m(alphabet_, order);
        for (const auto& w : subword_closure(words))
            if (!w.empty()) m.set(w, moment(w));
        return m;
    }
    MomentFunctional tabulate_all(int N) const {
        MomentFunctional m(alphabet_, N);
        for (const auto& w : all_words(size(), N)) m.set(w, moment(w));
        return m;
    }

private:
    std::shared_ptr<Alphabet> alphabet_;
    std::vector<ModelLetter> letters_;
    std::map<int, int> dims_;
    mutable std::unordered_map<Word, Rational, WordHash> memo_;
};

// ---- Boolean and monotone embeddings ----

// T_{k,Z} = lambda_k(T_Z)
inline ModelLetter boolean_T(const DoubledAlgebra& y, int k, const Matrix& z) { return {FPFactor(k, Side::Left, y.T(z))}; }
// S_{k,1} = rho_k(S_1)
inline ModelLetter boolean_S(const DoubledAlgebra& y, int k) { return {FPFactor(k, Side::Right, y.S())}; }
// T_{k,Z} S_{k,1}
inline ModelLetter boolean_beta(const DoubledAlgebra& y, int k, const Matrix& z) {
    return {FPFactor(k, Side::Left, y.T(z)), FPFactor(k, Side::Right, y.S())};
}
// rho_k(U) lambda_k(T'_Z) rho_k(U)
inline ModelLetter boolean_hom_beta(const DoubledAlgebra& y, int k, const Matrix& z) {
    return {FPFactor(k, Side::Right, y.U()), FPFactor(k, Side::Left, y.T_prime(z)), FPFactor(k, Side::Right, y.U())};
}
// beta_1(Z) = lambda_1(T_Z) rho_1(S_1) on the doubled component 1.
inline ModelLetter monotone_beta1(const DoubledAlgebra& y, const Matrix& z) { return boolean_beta(y, 1, z); }
// beta_2(Z) = lambda_2(Z) on the plain component 2.
inline ModelLetter monotone_beta2(const StateAlgebra& a, const Matrix& z) {
    return {FPFactor(2, Side::Left, a.left_mult(z))};
}

// Kronecker product, rows of x major.
inline Matrix kron(const Matrix& x, const Matrix& y) {
    Matrix out(x.rows() * y.rows(), x.cols() * y.cols());
    for (int i = 0; i < x.rows(); ++i)
        for (int j = 0; j < x.cols(); ++j)
            if (x(i, j) != 0)
                for (int r = 0; r < y.rows(); ++r)
                    for (int c = 0; c < y.cols(); ++c) out(i * y.rows() + r, j * y.cols() + c) = x(i, j) * y(r, c);
    return out;
}

// Monotonically independent A_1 = {x (x) P_e1}, A_2 = {1 (x) y} in M_{d1 d2}
// under the vector state at e1 (x) e1.
struct MonotoneTensorFixture {
    int d1, d2;
    StateAlgebra algebra() const { return StateAlgebra::vector_state(d1 * d2, 0); }
    Matrix embed1(const Matrix& x) const { return kron(x, Matrix::unit(d2, 0, 0)); }
    Matrix embed2(const Matrix& y) const { return kron(Matrix::identity(d1), y); }
};

}  // namespace bifree

#endif
