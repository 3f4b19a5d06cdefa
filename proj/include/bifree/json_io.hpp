#ifndef BIFREE_JSON_IO_HPP
#define BIFREE_JSON_IO_HPP

// JSON documents for partitions, word tables, series, operators and model
// letter specs. Rationals travel as "p/q" strings.

#include "models.hpp"
#include "opval.hpp"
#include "series.hpp"

#include <json.hpp>

#include <fstream>
#include <sstream>
#include <string>

namespace bifree {

using nlohmann::json;

inline json parse_json(std::string_view text, const std::string& source) {
    try {
        return json::parse(text.begin(), text.end());
    } catch (const json::parse_error& e) {
        // The library message already carries line and column.
        std::string what = e.what();
        if (auto p = what.find("parse error"); p != std::string::npos) what = what.substr(p);
        throw ParseError(source + ": " + what);
    }
}

inline json read_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ArgumentError("cannot open " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_json(ss.str(), path);
}

namespace detail {

inline const json& field(const json& j, const std::string& key, const std::string& where) {
    if (!j.is_object()) throw ParseError(where + ": expected an object");
    auto it = j.find(key);
    if (it == j.end()) throw ParseError(where + ": missing key \"" + key + "\"");
    return *it;
}

inline const json& array_field(const json& j, const std::string& key, const std::string& where) {
    const json& a = field(j, key, where);
    if (!a.is_array()) throw ParseError(where + "/" + key + ": expected an array");
    return a;
}

inline std::string string_field(const json& j, const std::string& key, const std::string& where) {
    const json& s = field(j, key, where);
    if (!s.is_string()) throw ParseError(where + "/" + key + ": expected a string");
    return s.get<std::string>();
}

inline int int_field(const json& j, const std::string& key, const std::string& where) {
    const json& s = field(j, key, where);
    if (!s.is_number_integer()) throw ParseError(where + "/" + key + ": expected an integer");
    return s.get<int>();
}

// Rethrow library argument errors with the document location attached.
template <class F>
auto at_location(const std::string& where, F&& f) -> decltype(f()) {
    try {
        return f();
    } catch (const ArgumentError& e) {
        throw ParseError(where + ": " + e.what());
    }
}

}  // namespace detail

inline json rational_json(Rational q) {
    q.canonicalize();
    return q.get_str();
}

inline Rational rational_from_json(const json& j, const std::string& where) {
    if (j.is_number_integer()) return Rational(j.get<long>());
    if (!j.is_string()) throw ParseError(where + ": expected a rational string \"p/q\"");
    return detail::at_location(where, [&] { return parse_rational(j.get<std::string>()); });
}

// ---- partitions ----

inline json partition_json(const BiPartition& pi) { return {{"chi", pi.chi().str()}, {"blocks", pi.blocks()}}; }

inline BiPartition partition_from_json(const json& j, const std::string& where = "partition") {
    const std::string chi = detail::string_field(j, "chi", where);
    const json& blocks = detail::array_field(j, "blocks", where);
    Blocks b;
    for (std::size_t i = 0; i < blocks.size(); ++i) {
        const std::string bw = where + "/blocks/" + std::to_string(i);
        if (!blocks[i].is_array()) throw ParseError(bw + ": expected an array of positions");
        std::vector<int> block;
        for (const auto& x : blocks[i]) {
            if (!x.is_number_integer()) throw ParseError(bw + ": positions must be integers");
            block.push_back(x.get<int>());
        }
        b.push_back(std::move(block));
    }
    return detail::at_location(where, [&] { return BiPartition(ChiMap::parse(chi), std::move(b)); });
}

inline json family_json(const PartitionFamily& f) {
    json members = json::array();
    for (const auto& pi : f.members) members.push_back(pi.blocks());
    return {{"chi", f.chi.str()}, {"tag", tag_name(f.tag)}, {"count", f.members.size()}, {"members", members}};
}

// ---- word tables ----

inline json letter_json(const Letter& l) {
    return {{"sym", l.symbol}, {"side", std::string(1, side_char(l.side))}, {"family", l.family}};
}

inline json word_json(const Alphabet& a, const Word& w) {
    json out = json::array();
    for (int x : w) out.push_back(a[x].symbol);
    return out;
}

// key is "moments" or "cumulants".
inline json table_json(const WordTable& t, const std::string& key) {
    json letters = json::array(), values = json::array();
    for (const auto& l : t.alphabet().letters()) letters.push_back(letter_json(l));
    for (const auto& w : t.words()) {
        if (w.empty()) continue;
        values.push_back({{"word", word_json(t.alphabet(), w)}, {"value", rational_json(*t.find(w))}});
    }
    return {{"order", t.order()}, {"letters", letters}, {key, values}};
}

inline AlphabetPtr alphabet_from_json(const json& j, const std::string& where) {
    const json& letters = detail::array_field(j, "letters", where);
    auto a = std::make_shared<Alphabet>();
    for (std::size_t i = 0; i < letters.size(); ++i) {
        const std::string lw = where + "/letters/" + std::to_string(i);
        Letter l;
        l.symbol = detail::string_field(letters[i], "sym", lw);
        l.side = detail::at_location(lw, [&] { return parse_side(detail::string_field(letters[i], "side", lw)); });
        l.family = detail::int_field(letters[i], "family", lw);
        detail::at_location(lw, [&] { return a->add(l); });
    }
    return a;
}

template <class Table>
Table table_from_json(const json& j, const std::string& key, const std::string& where) {
    const int order = detail::int_field(j, "order", where);
    if (order < 0) throw ParseError(where + "/order: must be nonnegative");
    Table t(alphabet_from_json(j, where), order);
    const json& values = detail::array_field(j, key, where);
    for (std::size_t i = 0; i < values.size(); ++i) {
        const std::string vw = where + "/" + key + "/" + std::to_string(i);
        const json& word = detail::array_field(values[i], "word", vw);
        Word w;
        for (const auto& s : word) {
            if (!s.is_string()) throw ParseError(vw + "/word: letters must be strings");
            w.push_back(detail::at_location(vw, [&] { return t.alphabet().id(s.get<std::string>()); }));
        }
        if (static_cast<int>(w.size()) > order)
            throw ParseError(vw + ": word longer than the declared order " + std::to_string(order));
        if (w.empty()) continue;
        t.set(w, rational_from_json(detail::field(values[i], "value", vw), vw + "/value"));
    }
    return t;
}

inline MomentFunctional moments_from_json(const json& j, const std::string& where = "moments") {
    return table_from_json<MomentFunctional>(j, "moments", where);
}

inline CumulantTable cumulants_from_json(const json& j, const std::string& where = "cumulants") {
    return table_from_json<CumulantTable>(j, "cumulants", where);
}

// ---- series ----

inline json series_json(const BiSeries& s) {
    json coeffs = json::array();
    for (const auto& [nm, v] : s.nonzero()) coeffs.push_back({{"n", nm.first}, {"m", nm.second}, {"value", rational_json(v)}});
    return {{"vars", {"z", "w"}}, {"order", s.order()}, {"coeffs", coeffs}};
}

inline json series_json(const UniSeries& s, const std::string& var) {
    json coeffs = json::array();
    for (int n = 0; n <= s.order(); ++n)
        if (s[n] != 0) coeffs.push_back({{"n", n}, {"value", rational_json(s[n])}});
    return {{"vars", {var}}, {"order", s.order()}, {"coeffs", coeffs}};
}

inline BiSeries bi_series_from_json(const json& j, const std::string& where = "series") {
    const int order = detail::int_field(j, "order", where);
    if (order < 0) throw ParseError(where + "/order: must be nonnegative");
    BiSeries s(order);
    const json& coeffs = detail::array_field(j, "coeffs", where);
    for (std::size_t i = 0; i < coeffs.size(); ++i) {
        const std::string cw = where + "/coeffs/" + std::to_string(i);
        const int n = detail::int_field(coeffs[i], "n", cw);
        const int m = coeffs[i].contains("m") ? detail::int_field(coeffs[i], "m", cw) : 0;
        const Rational v = rational_from_json(detail::field(coeffs[i], "value", cw), cw + "/value");
        detail::at_location(cw, [&]() -> Rational& { return s.at(n, m); }) = v;
    }
    return s;
}

// ---- operators and spaces ----

inline json matrix_json(const Matrix& m) {
    json rows = json::array();
    for (int i = 0; i < m.rows(); ++i) {
        json row = json::array();
        for (int j = 0; j < m.cols(); ++j) row.push_back(rational_json(m(i, j)));
        rows.push_back(row);
    }
    return rows;
}

inline Matrix matrix_from_json(const json& j, const std::string& where) {
    if (!j.is_array()) throw ParseError(where + ": expected an array of rows");
    std::vector<std::vector<Rational>> rows;
    for (std::size_t i = 0; i < j.size(); ++i) {
        const std::string rw = where + "/" + std::to_string(i);
        if (!j[i].is_array()) throw ParseError(rw + ": expected a row array");
        std::vector<Rational> row;
        for (std::size_t k = 0; k < j[i].size(); ++k) row.push_back(rational_from_json(j[i][k], rw + "/" + std::to_string(k)));
        rows.push_back(std::move(row));
    }
    return detail::at_location(where, [&] { return Matrix::from_rows(rows); });
}

inline json operator_json(const SidedOperator& x) {
    return {{"side", std::string(1, side_char(x.side))}, {"matrix", matrix_json(x.op->to_dense())}};
}

inline SidedOperator operator_from_json(const ConcreteBBSpace& X, const json& j, const std::string& where = "operator") {
    const Side side = detail::at_location(where, [&] { return parse_side(detail::string_field(j, "side", where)); });
    const Matrix m = matrix_from_json(detail::field(j, "matrix", where), where + "/matrix");
    if (m.rows() != X.dim() || m.cols() != X.dim())
        throw ParseError(where + "/matrix: expected a " + std::to_string(X.dim()) + "x" + std::to_string(X.dim()) + " matrix");
    return detail::at_location(where, [&] { return make_sided(X, SparseMatrix::from_dense(m), side); });
}

inline json space_json(const ConcreteBBSpace& X) {
    json left = json::array(), right = json::array();
    const int d = X.base_dim();
    for (int r = 0; r < d; ++r)
        for (int c = 0; c < d; ++c) {
            const std::string basis = "E" + std::to_string(r) + std::to_string(c);
            left.push_back({{"basis", basis}, {"matrix", matrix_json(X.l_unit(r, c).to_dense())}});
            right.push_back({{"basis", basis}, {"matrix", matrix_json(X.r_unit(r, c).to_dense())}});
        }
    return {{"base_dim", d}, {"dim", X.dim()}, {"p", {{"rows", X.b_coords()}}}, {"L", left}, {"R", right}};
}

// ---- model letter specs ----

inline std::vector<FreeGroupLetter> freegroup_letters_from_json(const json& j, const std::string& where = "letters") {
    const json& letters = detail::array_field(j, "letters", where);
    std::vector<FreeGroupLetter> out;
    for (std::size_t i = 0; i < letters.size(); ++i) {
        const std::string lw = where + "/letters/" + std::to_string(i);
        FreeGroupLetter f;
        f.letter.symbol = detail::string_field(letters[i], "symbol", lw);
        f.letter.side = detail::at_location(lw, [&] { return parse_side(detail::string_field(letters[i], "side", lw)); });
        f.letter.family = detail::int_field(letters[i], "family", lw);
        f.element = detail::at_location(lw, [&] { return GroupWord::parse(detail::string_field(letters[i], "element", lw)); });
        out.push_back(std::move(f));
    }
    if (out.empty()) throw ParseError(where + "/letters: at least one letter is required");
    return out;
}

}  // namespace bifree

#endif
