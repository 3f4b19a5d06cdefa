#ifndef BIFREE_OPVAL_HPP
#define BIFREE_OPVAL_HPP

// Operator-valued machinery over B = M_d: concrete B-B-bimodules, the
// recursive E_pi, operator-valued cumulants and the M_n amplification.

#include "incidence.hpp"
#include "linalg.hpp"

#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace bifree {

using OpPtr = std::shared_ptr<const SparseMatrix>;
// Operator product, leftmost factor first.
using OpChain = std::vector<OpPtr>;

inline OpPtr make_op(SparseMatrix m) { return std::make_shared<const SparseMatrix>(std::move(m)); }

// X = B (+) X°, with B = M_d sitting on the coordinates b_coords (entry (r,c) at r*d+c).
class ConcreteBBSpace {
public:
    ConcreteBBSpace(int d, int D, std::vector<int> b_coords, std::vector<SparseMatrix> l_units,
                    std::vector<SparseMatrix> r_units)
        : d_(d), D_(D), b_coords_(std::move(b_coords)), l_units_(std::move(l_units)), r_units_(std::move(r_units)) {
        if (d_ < 1 || D_ < d_ * d_) throw ArgumentError("bad bimodule dimensions");
        if (static_cast<int>(b_coords_.size()) != d_ * d_ || static_cast<int>(l_units_.size()) != d_ * d_ ||
            static_cast<int>(r_units_.size()) != d_ * d_)
            throw ArgumentError("bimodule needs d*d base coordinates and unit actions");
        is_b_.assign(D_, -1);
        for (int k = 0; k < d_ * d_; ++k) {
            if (b_coords_[k] < 0 || b_coords_[k] >= D_ || is_b_[b_coords_[k]] >= 0)
                throw ArgumentError("base coordinates must be distinct and in range");
            is_b_[b_coords_[k]] = k;
        }
        for (const auto& m : l_units_)
            if (m.size() != D_) throw ArgumentError("left action has wrong dimension");
        for (const auto& m : r_units_)
            if (m.size() != D_) throw ArgumentError("right action has wrong dimension");
    }

    int base_dim() const { return d_; }
    int dim() const { return D_; }
    const std::vector<int>& b_coords() const { return b_coords_; }
    const SparseMatrix& l_unit(int r, int c) const { return l_units_[r * d_ + c]; }
    const SparseMatrix& r_unit(int r, int c) const { return r_units_[r * d_ + c]; }

    SparseMatrix L(const Matrix& b) const { return act(l_units_, b); }
    SparseMatrix R(const Matrix& b) const { return act(r_units_, b); }

    Vector embed(const Matrix& b) const {
        require_base(b);
        Vector x(D_, Rational(0));
        for (int r = 0; r < d_; ++r)
            for (int c = 0; c < d_; ++c) x[b_coords_[r * d_ + c]] = b(r, c);
        return x;
    }
    Vector unit() const { return embed(Matrix::identity(d_)); }

    Matrix project(const Vector& x) const {
        if (static_cast<int>(x.size()) != D_) throw ArgumentError("vector dimension mismatch");
        Matrix b(d_, d_);
        for (int r = 0; r < d_; ++r)
            for (int c = 0; c < d_; ++c) b(r, c) = x[b_coords_[r * d_ + c]];
        return b;
    }

    // Bimodule axioms on the unit actions. Throws ArgumentError naming the failure.
    void validate() const {
        const int n = d_;
        const auto id = SparseMatrix::identity(D_);
        SparseMatrix lsum(D_), rsum(D_);
        for (int i = 0; i < n; ++i) {
            lsum = lsum + l_unit(i, i);
            rsum = rsum + r_unit(i, i);
        }
        if (lsum != id) throw ArgumentError("left action is not unital");
        if (rsum != id) throw ArgumentError("right action is not unital");
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j)
                for (int k = 0; k < n; ++k)
                    for (int l = 0; l < n; ++l) {
                        SparseMatrix want_l = j == k ? l_unit(i, l) : SparseMatrix(D_);
                        if (l_unit(i, j) * l_unit(k, l) != want_l) throw ArgumentError("left action is not multiplicative");
                        // R_{E_ij} R_{E_kl} = R_{E_kl E_ij}
                        SparseMatrix want_r = l == i ? r_unit(k, j) : SparseMatrix(D_);
                        if (r_unit(i, j) * r_unit(k, l) != want_r)
                            throw ArgumentError("right action is not anti-multiplicative");
                        if (l_unit(i, j) * r_unit(k, l) != r_unit(k, l) * l_unit(i, j))
                            throw ArgumentError("left and right actions do not commute");
                    }
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) {
                const auto eu = embed(Matrix::unit(n, i, j));
                for (int k = 0; k < n; ++k)
                    for (int l = 0; l < n; ++l) {
                        if (l_unit(k, l).apply(eu) != embed(Matrix::unit(n, k, l) * Matrix::unit(n, i, j)))
                            throw ArgumentError("left action does not restrict to multiplication on B");
                        if (r_unit(k, l).apply(eu) != embed(Matrix::unit(n, i, j) * Matrix::unit(n, k, l)))
                            throw ArgumentError("right action does not restrict to multiplication on B");
                    }
            }
        // X° (the non-base coordinates) is invariant.
        for (int x = 0; x < D_; ++x) {
            if (is_b_[x] >= 0) continue;
            for (const auto* units : {&l_units_, &r_units_})
                for (const auto& u : *units)
                    for (int y = 0; y < D_; ++y)
                        if (is_b_[y] >= 0)
                            for (const auto& [col, v] : u.row(y))
                                if (col == x && v != 0) throw ArgumentError("complement is not invariant");
        }
    }

private:
    void require_base(const Matrix& b) const {
        if (b.rows() != d_ || b.cols() != d_) throw ArgumentError("base element has wrong size");
    }
    SparseMatrix act(const std::vector<SparseMatrix>& units, const Matrix& b) const {
        require_base(b);
        std::vector<std::tuple<int, int, Rational>> e;
        for (int r = 0; r < d_; ++r)
            for (int c = 0; c < d_; ++c) {
                const Rational& x = b(r, c);
                if (x == 0) continue;
                const auto& u = units[r * d_ + c];
                for (int y = 0; y < D_; ++y)
                    for (const auto& [col, v] : u.row(y)) e.emplace_back(y, col, x * v);
            }
        return SparseMatrix::from_entries(D_, e);
    }

    int d_, D_;
    std::vector<int> b_coords_;
    std::vector<int> is_b_;
    std::vector<SparseMatrix> l_units_, r_units_;
};

struct SidedOperator {
    Side side;
    OpPtr op;
};

// Left operators must commute with every R_b, right operators with every L_b.
inline SidedOperator make_sided(const ConcreteBBSpace& X, SparseMatrix m, Side side) {
    if (m.size() != X.dim()) throw ArgumentError("operator dimension does not match the space");
    const int d = X.base_dim();
    for (int r = 0; r < d; ++r)
        for (int c = 0; c < d; ++c) {
            const auto& u = side == Side::Left ? X.r_unit(r, c) : X.l_unit(r, c);
            if (m * u != u * m)
                throw ArgumentError(std::string(side == Side::Left ? "left" : "right") +
                                    " operator fails to commute with the opposite base action");
        }
    return SidedOperator{side, make_op(std::move(m))};
}

inline Matrix expectation(const ConcreteBBSpace& X, const OpChain& chain) {
    Vector x = X.unit();
    for (auto it = chain.rbegin(); it != chain.rend(); ++it) {
        if ((*it)->size() != X.dim()) throw ArgumentError("operator dimension does not match the space");
        x = (*it)->apply(x);
    }
    return X.project(x);
}

inline Matrix expectation(const ConcreteBBSpace& X, const std::vector<SidedOperator>& ops) {
    OpChain c;
    for (const auto& o : ops) c.push_back(o.op);
    return expectation(X, c);
}

namespace detail {

struct Slot {
    Side side;
    OpChain chain;
};

inline Matrix expectation_of(const ConcreteBBSpace& X, const std::vector<Slot>& slots, const std::vector<int>& pos) {
    OpChain c;
    for (int p : pos)
        for (const auto& op : slots[p - 1].chain) c.push_back(op);
    return expectation(X, c);
}

inline std::vector<Slot> to_slots(const ConcreteBBSpace& X, const std::vector<SidedOperator>& ops, const BiPartition& pi) {
    if (static_cast<int>(ops.size()) != pi.size()) throw ArgumentError("operator count does not match partition size");
    std::vector<Slot> slots;
    for (int k = 1; k <= pi.size(); ++k) {
        const auto& o = ops[k - 1];
        if (o.side != pi.chi()(k)) throw ArgumentError("operator sides do not match chi at position " + std::to_string(k));
        if (o.op->size() != X.dim()) throw ArgumentError("operator dimension does not match the space");
        slots.push_back({o.side, {o.op}});
    }
    return slots;
}

// Drop the positions in `gone` and relabel the remaining blocks.
inline void remove_positions(std::vector<Slot>& slots, Blocks& blocks, const std::vector<int>& gone) {
    const int n = static_cast<int>(slots.size());
    std::vector<int> newpos(n + 1, 0);
    std::vector<bool> drop(n + 1, false);
    for (int g : gone) drop[g] = true;
    std::vector<Slot> kept;
    for (int k = 1; k <= n; ++k)
        if (!drop[k]) {
            kept.push_back(std::move(slots[k - 1]));
            newpos[k] = static_cast<int>(kept.size());
        }
    Blocks nb;
    for (const auto& b : blocks) {
        if (drop[b.front()]) continue;
        std::vector<int> x;
        for (int v : b) x.push_back(newpos[v]);
        nb.push_back(std::move(x));
    }
    slots = std::move(kept);
    blocks = canonical_blocks(std::move(nb));
}

inline ChiMap chi_of_slots(const std::vector<Slot>& slots) {
    std::vector<Side> s;
    for (const auto& x : slots) s.push_back(x.side);
    return ChiMap(std::move(s));
}

// Ranks in the chi order, 0-based.
inline std::vector<int> chi_ranks(const ChiMap& chi) {
    auto inv = s_chi(chi).inverse();
    std::vector<int> r(chi.size() + 1, -1);
    for (int k = 1; k <= chi.size(); ++k) r[k] = inv(k) - 1;
    return r;
}

inline Matrix e_pi_recursive(const ConcreteBBSpace& X, std::vector<Slot> slots, Blocks blocks) {
    for (;;) {
        const int n = static_cast<int>(slots.size());
        if (blocks.size() == 1) return expectation_of(X, slots, blocks[0]);
        // V: the block with the largest minimum (terminates lowest in the diagram).
        const std::vector<int> V = blocks.back();
        const int v = V.front();
        const Matrix b = expectation_of(X, slots, V);
        const Side sv = slots[v - 1].side;
        bool spine = false;
        for (const auto& W : blocks)
            if (W.front() < v && W.back() > v) spine = true;
        if (!spine) {
            if (V.back() != n || static_cast<int>(V.size()) != n - v + 1)
                throw InternalError("bottom block is not a terminal segment");
            auto op = make_op(sv == Side::Left ? X.L(b) : X.R(b));
            slots[v - 2].chain.push_back(op);  // Z_k L_b or Z_k R_b with k = v - 1
        } else {
            const auto chi = chi_of_slots(slots);
            const auto rank = chi_ranks(chi);
            std::vector<int> by_rank(n);
            for (int k = 1; k <= n; ++k) by_rank[rank[k]] = k;
            int lo = n, hi = -1;
            for (int x : V) {
                lo = std::min(lo, rank[x]);
                hi = std::max(hi, rank[x]);
            }
            const int nb_rank = sv == Side::Left ? hi + 1 : lo - 1;
            if (nb_rank < 0 || nb_rank >= n) throw InternalError("no spine adjacent to the bottom block");
            const int neighbour = by_rank[nb_rank];
            const std::vector<int>* W = nullptr;
            for (const auto& blk : blocks)
                if (std::find(blk.begin(), blk.end(), neighbour) != blk.end()) W = &blk;
            if (!W || W->front() == v) throw InternalError("adjacent spine block not found");
            int k = -1;
            for (int w : *W)
                if (w > v) {
                    k = w;
                    break;
                }
            if (k < 0) throw InternalError("adjacent spine has no element below the bottom block");
            auto op = make_op(sv == Side::Left ? X.L(b) : X.R(b));
            slots[k - 1].chain.insert(slots[k - 1].chain.begin(), op);  // L_b Z_k or R_b Z_k
        }
        remove_positions(slots, blocks, V);
    }
}

}  // namespace detail

// The recursive E_pi. Operator sides must match chi.
inline Matrix E_pi(const ConcreteBBSpace& X, const std::vector<SidedOperator>& ops, const BiPartition& pi) {
    if (!is_bnc(pi)) throw ArgumentError("E_pi requires a bi-non-crossing partition");
    return detail::e_pi_recursive(X, detail::to_slots(X, ops, pi), pi.blocks());
}

// Independent evaluator: repeatedly collapse a chi-interval block (the
// `choice`-th one, cyclically) into its chi-order predecessor.
inline Matrix E_pi_by_intervals(const ConcreteBBSpace& X, const std::vector<SidedOperator>& ops, const BiPartition& pi,
                                std::size_t choice) {
    if (!is_bnc(pi)) throw ArgumentError("E_pi requires a bi-non-crossing partition");
    auto slots = detail::to_slots(X, ops, pi);
    Blocks blocks = pi.blocks();
    const int d = X.base_dim();
    Matrix left = Matrix::identity(d), right = Matrix::identity(d);
    while (!blocks.empty()) {
        const int n = static_cast<int>(slots.size());
        const auto chi = detail::chi_of_slots(slots);
        const auto rank = detail::chi_ranks(chi);
        std::vector<int> by_rank(n);
        for (int k = 1; k <= n; ++k) by_rank[rank[k]] = k;
        std::vector<const std::vector<int>*> intervals;
        for (const auto& b : blocks) {
            int lo = n, hi = -1;
            for (int x : b) {
                lo = std::min(lo, rank[x]);
                hi = std::max(hi, rank[x]);
            }
            if (hi - lo + 1 == static_cast<int>(b.size())) intervals.push_back(&b);
        }
        if (intervals.empty()) throw InternalError("bi-non-crossing partition without a chi-interval block");
        const std::vector<int> W = *intervals[choice % intervals.size()];
        const Matrix b = detail::expectation_of(X, slots, W);
        int lo = n;
        for (int x : W) lo = std::min(lo, rank[x]);
        if (lo == 0) {
            // Nothing precedes W. A right letter here means no left letters remain.
            if (chi(by_rank[0]) == Side::Left)
                left = left * b;
            else
                right = right * b;
        } else {
            const int p = by_rank[lo - 1];
            if (chi(p) == Side::Left)
                slots[p - 1].chain.push_back(make_op(X.L(b)));
            else
                slots[p - 1].chain.insert(slots[p - 1].chain.begin(), make_op(X.R(b)));
        }
        detail::remove_positions(slots, blocks, W);
    }
    return left * right;
}

inline Matrix kappa_pi_opval(const ConcreteBBSpace& X, const std::vector<SidedOperator>& ops, const BiPartition& pi) {
    auto lat = lattice_index(pi.chi());
    const int j = lat->index_of(pi);
    Matrix acc(X.base_dim(), X.base_dim());
    for (int i = 0; i < lat->size(); ++i) {
        if (!lat->leq(i, j)) continue;
        Rational mu = mobius_closed(lat->member(i), pi);
        if (mu != 0) acc += mu * E_pi(X, ops, lat->member(i));
    }
    return acc;
}

// ---- A free bimodule M_d^m with copy 0 as B ----

class FreeBimodule {
public:
    FreeBimodule(int d, int m) : d_(d), m_(m) {
        if (d < 1 || m < 1) throw ArgumentError("free bimodule needs d, m >= 1");
    }
    int index(int copy, int r, int c) const { return copy * d_ * d_ + r * d_ + c; }

    ConcreteBBSpace space() const {
        const int D = d_ * d_ * m_;
        std::vector<int> bc;
        std::vector<SparseMatrix> L, R;
        for (int r = 0; r < d_; ++r)
            for (int c = 0; c < d_; ++c) {
                bc.push_back(index(0, r, c));
                std::vector<std::tuple<int, int, Rational>> le, re;
                for (int i = 0; i < m_; ++i)
                    for (int t = 0; t < d_; ++t) {
                        le.emplace_back(index(i, r, t), index(i, c, t), 1);  // E_rc x
                        re.emplace_back(index(i, t, c), index(i, t, r), 1);  // x E_rc
                    }
                L.push_back(SparseMatrix::from_entries(D, le));
                R.push_back(SparseMatrix::from_entries(D, re));
            }
        return ConcreteBBSpace(d_, D, bc, L, R);
    }

    // (A x)_i = sum_j A_ij x_j for an m x m grid of d x d matrices.
    SparseMatrix left_operator(const std::vector<std::vector<Matrix>>& A) const {
        check_grid(A);
        std::vector<std::tuple<int, int, Rational>> e;
        for (int i = 0; i < m_; ++i)
            for (int j = 0; j < m_; ++j)
                for (int r = 0; r < d_; ++r)
                    for (int s = 0; s < d_; ++s)
                        if (A[i][j](r, s) != 0)
                            for (int c = 0; c < d_; ++c) e.emplace_back(index(i, r, c), index(j, s, c), A[i][j](r, s));
        return SparseMatrix::from_entries(d_ * d_ * m_, e);
    }
    // (C x)_i = sum_j x_j C_ij.
    SparseMatrix right_operator(const std::vector<std::vector<Matrix>>& C) const {
        check_grid(C);
        std::vector<std::tuple<int, int, Rational>> e;
        for (int i = 0; i < m_; ++i)
            for (int j = 0; j < m_; ++j)
                for (int s = 0; s < d_; ++s)
                    for (int c = 0; c < d_; ++c)
                        if (C[i][j](s, c) != 0)
                            for (int r = 0; r < d_; ++r) e.emplace_back(index(i, r, c), index(j, r, s), C[i][j](s, c));
        return SparseMatrix::from_entries(d_ * d_ * m_, e);
    }

    std::vector<std::vector<Matrix>> random_grid(Rng& rng) const {
        std::vector<std::vector<Matrix>> g(m_, std::vector<Matrix>(m_, Matrix(d_, d_)));
        for (auto& row : g)
            for (auto& M : row)
                for (int r = 0; r < d_; ++r)
                    for (int c = 0; c < d_; ++c) M(r, c) = rng.rational();
        return g;
    }

private:
    void check_grid(const std::vector<std::vector<Matrix>>& g) const {
        if (static_cast<int>(g.size()) != m_) throw ArgumentError("grid must be m x m");
        for (const auto& row : g) {
            if (static_cast<int>(row.size()) != m_) throw ArgumentError("grid must be m x m");
            for (const auto& M : row)
                if (M.rows() != d_ || M.cols() != d_) throw ArgumentError("grid entries must be d x d");
        }
    }
    int d_, m_;
};

// ---- Matrix amplification M_n(X) ----

// Coordinates of M_n(X): block (i,j) holds a copy of X at offset (i*n + j) * D.
// M_n(B) = M_{nd} with entry ((i,r),(j,c)) at row i*d + r, column j*d + c.
inline ConcreteBBSpace amplify(const ConcreteBBSpace& X, int n) {
    if (n < 1) throw ArgumentError("amplification order must be >= 1");
    const int d = X.base_dim(), D = X.dim();
    const int nd = n * d, ND = n * n * D;
    auto off = [&](int i, int j) { return (i * n + j) * D; };
    std::vector<int> bc(nd * nd);
    std::vector<SparseMatrix> L(nd * nd), R(nd * nd);
    for (int i = 0; i < n; ++i)
        for (int r = 0; r < d; ++r)
            for (int j = 0; j < n; ++j)
                for (int c = 0; c < d; ++c) {
                    const int u = (i * d + r) * nd + (j * d + c);
                    bc[u] = off(i, j) + X.b_coords()[r * d + c];
                    std::vector<std::tuple<int, int, Rational>> le, re;
                    // [F_ij (x) E_rc][xi]: block (j,m) -> (i,m) through L_{E_rc}.
                    for (int m = 0; m < n; ++m)
                        for (int y = 0; y < D; ++y)
                            for (const auto& [x, v] : X.l_unit(r, c).row(y)) le.emplace_back(off(i, m) + y, off(j, m) + x, v);
                    // [xi][F_ij (x) E_rc]: block (a,i) -> (a,j) through R_{E_rc}.
                    for (int a = 0; a < n; ++a)
                        for (int y = 0; y < D; ++y)
                            for (const auto& [x, v] : X.r_unit(r, c).row(y)) re.emplace_back(off(a, j) + y, off(a, i) + x, v);
                    L[u] = SparseMatrix::from_entries(ND, le);
                    R[u] = SparseMatrix::from_entries(ND, re);
                }
    return ConcreteBBSpace(nd, ND, bc, L, R);
}

using OpGrid = std::vector<std::vector<OpPtr>>;  // n x n, null entries are zero

inline void check_op_grid(const ConcreteBBSpace& X, const OpGrid& Z) {
    const std::size_t n = Z.size();
    for (const auto& row : Z) {
        if (row.size() != n) throw ArgumentError("operator grid must be square");
        for (const auto& op : row)
            if (op && op->size() != X.dim()) throw ArgumentError("grid operator has wrong dimension");
    }
}

// [Z_ij] acting by ([Z] xi)_{a,b} = sum_k Z_{a,k} xi_{k,b}.
inline SparseMatrix embed_left(const ConcreteBBSpace& X, const OpGrid& Z) {
    check_op_grid(X, Z);
    const int n = static_cast<int>(Z.size()), D = X.dim();
    std::vector<std::tuple<int, int, Rational>> e;
    for (int a = 0; a < n; ++a)
        for (int k = 0; k < n; ++k) {
            if (!Z[a][k]) continue;
            for (int b = 0; b < n; ++b)
                for (int y = 0; y < D; ++y)
                    for (const auto& [x, v] : Z[a][k]->row(y)) e.emplace_back((a * n + b) * D + y, (k * n + b) * D + x, v);
        }
    return SparseMatrix::from_entries(n * n * D, e);
}

// Right face: ([Z] xi)_{a,b} = sum_k Z_{k,b}(xi_{a,k}), composition order reversed across the index.
inline SparseMatrix embed_right(const ConcreteBBSpace& X, const OpGrid& Z) {
    check_op_grid(X, Z);
    const int n = static_cast<int>(Z.size()), D = X.dim();
    std::vector<std::tuple<int, int, Rational>> e;
    for (int k = 0; k < n; ++k)
        for (int b = 0; b < n; ++b) {
            if (!Z[k][b]) continue;
            for (int a = 0; a < n; ++a)
                for (int y = 0; y < D; ++y)
                    for (const auto& [x, v] : Z[k][b]->row(y)) e.emplace_back((a * n + b) * D + y, (a * n + k) * D + x, v);
        }
    return SparseMatrix::from_entries(n * n * D, e);
}

inline SidedOperator embed_sided(const ConcreteBBSpace& X, const OpGrid& Z, Side side) {
    return SidedOperator{side, make_op(side == Side::Left ? embed_left(X, Z) : embed_right(X, Z))};
}

inline OpGrid single_entry_grid(int n, int i, int j, const OpPtr& op) {
    OpGrid g(n, std::vector<OpPtr>(n));
    g[i][j] = op;
    return g;
}

// E (x) F as an element of M_n(M_d): block (a,b) = F_ab E.
inline Matrix tensor(const Matrix& E, const Matrix& F) {
    const int d = E.rows(), n = F.rows();
    Matrix out(n * d, n * d);
    for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b)
            if (F(a, b) != 0)
                for (int r = 0; r < d; ++r)
                    for (int c = 0; c < d; ++c) out(a * d + r, b * d + c) = F(a, b) * E(r, c);
    return out;
}

// Block (i,j) of an element of M_n(M_d).
inline Matrix block_of(const Matrix& M, int d, int i, int j) {
    Matrix out(d, d);
    for (int r = 0; r < d; ++r)
        for (int c = 0; c < d; ++c) out(r, c) = M(i * d + r, j * d + c);
    return out;
}

// F_{i_s(1), j_s(1)} ... F_{i_s(q), j_s(q)} with 1-based indices.
inline Matrix f_chi_product(const ChiMap& chi, const std::vector<int>& i_idx, const std::vector<int>& j_idx, int n) {
    const int q = chi.size();
    if (static_cast<int>(i_idx.size()) != q || static_cast<int>(j_idx.size()) != q)
        throw ArgumentError("index lists must match chi length");
    for (int k = 0; k < q; ++k)
        if (i_idx[k] < 1 || i_idx[k] > n || j_idx[k] < 1 || j_idx[k] > n) throw ArgumentError("matrix unit index out of range");
    auto s = s_chi(chi);
    Matrix acc = Matrix::identity(n);
    for (int t = 1; t <= q; ++t) acc = acc * Matrix::unit(n, i_idx[s(t) - 1] - 1, j_idx[s(t) - 1] - 1);
    return acc;
}

// E_pi(Z_1 (x) F_{i1 j1}, ...) in M_n(X) against E_pi(Z_1, ...) (x) F_chi.
inline bool check_tensor_factorization(const ConcreteBBSpace& X, const ConcreteBBSpace& amplified, int n,
                                       const std::vector<SidedOperator>& ops, const std::vector<int>& i_idx,
                                       const std::vector<int>& j_idx, const BiPartition& pi) {
    if (amplified.base_dim() != n * X.base_dim() || amplified.dim() != n * n * X.dim())
        throw ArgumentError("amplified space does not match n");
    std::vector<SidedOperator> amp;
    for (std::size_t k = 0; k < ops.size(); ++k)
        amp.push_back(embed_sided(X, single_entry_grid(n, i_idx.at(k) - 1, j_idx.at(k) - 1, ops[k].op), ops[k].side));
    const Matrix lhs = E_pi(amplified, amp, pi);
    const Matrix rhs = tensor(E_pi(X, ops, pi), f_chi_product(pi.chi(), i_idx, j_idx, n));
    return lhs == rhs;
}

inline bool check_tensor_factorization(const ConcreteBBSpace& X, int n, const std::vector<SidedOperator>& ops,
                                       const std::vector<int>& i_idx, const std::vector<int>& j_idx,
                                       const BiPartition& pi) {
    return check_tensor_factorization(X, amplify(X, n), n, ops, i_idx, j_idx, pi);
}

// ---- Bi-freeness over M_n(B) ----

struct BFacePair {
    int family = 1;
    std::vector<SidedOperator> left, right;  // generators; L_B and R_B are adjoined implicitly
};

enum class AmplifyMode {
    Diagonal,  // first generator on the diagonal, Z (x) I_n
    Generic,   // every entry a random combination of generators and base actions
};

struct MnBEntry {
    std::string word;
    Matrix value;
};

inline std::string face_letter_name(int family, Side side) {
    return std::string(side == Side::Left ? "T" : "S") + std::to_string(family);
}

// Mixed M_n(B)-valued cumulants of amplified face letters up to length N.
inline std::vector<MnBEntry> check_bifree_over_MnB(const std::vector<BFacePair>& pairs, const ConcreteBBSpace& X, int n,
                                                   int N, AmplifyMode mode, std::uint64_t seed = 0) {
    const auto amp = amplify(X, n);
    const int d = X.base_dim();
    Rng rng(seed);
    struct AmpLetter {
        int family;
        SidedOperator op;
    };
    std::vector<AmpLetter> letters;
    for (const auto& pr : pairs)
        for (Side side : {Side::Left, Side::Right}) {
            const auto& gens = side == Side::Left ? pr.left : pr.right;
            if (gens.empty()) continue;
            for (const auto& g : gens)
                if (g.side != side) throw ArgumentError("face generator declared on the wrong side");
            OpGrid grid(n, std::vector<OpPtr>(n));
            if (mode == AmplifyMode::Diagonal) {
                for (int i = 0; i < n; ++i) grid[i][i] = gens[0].op;
            } else {
                for (int i = 0; i < n; ++i)
                    for (int j = 0; j < n; ++j) {
                        SparseMatrix acc(X.dim());
                        for (const auto& g : gens) acc = acc + rng.rational() * *g.op;
                        Matrix b(d, d);
                        for (int r = 0; r < d; ++r)
                            for (int c = 0; c < d; ++c) b(r, c) = rng.rational();
                        acc = acc + (side == Side::Left ? X.L(b) : X.R(b));
                        grid[i][j] = make_op(std::move(acc));
                    }
            }
            letters.push_back({pr.family, embed_sided(X, grid, side)});
        }
    std::vector<MnBEntry> out;
    const int L = static_cast<int>(letters.size());
    std::vector<int> w;
    std::function<void()> rec = [&]() {
        if (!w.empty()) {
            bool mixed = false;
            for (int x : w) mixed |= letters[x].family != letters[w[0]].family;
            if (mixed) {
                std::vector<Side> sides;
                std::vector<SidedOperator> ops;
                std::string name = "(";
                for (std::size_t t = 0; t < w.size(); ++t) {
                    sides.push_back(letters[w[t]].op.side);
                    ops.push_back(letters[w[t]].op);
                    name += (t ? "," : "") + face_letter_name(letters[w[t]].family, letters[w[t]].op.side);
                }
                const Matrix k = kappa_pi_opval(amp, ops, BiPartition::one(ChiMap(sides)));
                if (!k.is_zero()) out.push_back({name + ")", k});
            }
        }
        if (static_cast<int>(w.size()) == N) return;
        for (int x = 0; x < L; ++x) {
            w.push_back(x);
            rec();
            w.pop_back();
        }
    };
    rec();
    return out;
}

}  // namespace bifree

#endif
