#ifndef BIFREE_CORE_HPP
#define BIFREE_CORE_HPP

#include <gmpxx.h>

#include <cstdint>
#include <cstdlib>
#include <random>
#include <stdexcept>
#include <string>
#include <string_view>

namespace bifree {

using Rational = mpq_class;

struct ArgumentError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};
struct SizeLimitError : std::length_error {
    using std::length_error::length_error;
};
struct MissingDataError : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct InternalError : std::logic_error {
    using std::logic_error::logic_error;
};
// Malformed input document; the message carries the location.
struct ParseError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Bound on word length used as the default order. BIFREE_MAX_ORDER overrides it.
inline int max_word_order() {
    static const int value = [] {
        if (const char* env = std::getenv("BIFREE_MAX_ORDER")) {
            try {
                int v = std::stoi(env);
                if (v >= 1) return v;
            } catch (...) {
            }
        }
        return 8;
    }();
    return value;
}

inline constexpr int kMaxPartitionSize = 12;

inline std::string to_string(const Rational& q) { return q.get_str(); }

// Accepts "p", "p/q" and "-p/q". The result is canonicalized.
inline Rational parse_rational(std::string_view text) {
    std::string s(text);
    auto bad = [&] { return ArgumentError("malformed rational \"" + s + "\""); };
    if (s.empty()) throw bad();
    auto slash = s.find('/');
    auto digits_ok = [](std::string_view t, bool allow_sign) {
        if (allow_sign && !t.empty() && (t[0] == '-' || t[0] == '+')) t.remove_prefix(1);
        if (t.empty()) return false;
        for (char c : t)
            if (c < '0' || c > '9') return false;
        return true;
    };
    if (slash == std::string::npos) {
        if (!digits_ok(s, true)) throw bad();
    } else {
        if (!digits_ok(std::string_view(s).substr(0, slash), true) ||
            !digits_ok(std::string_view(s).substr(slash + 1), false))
            throw bad();
    }
    std::string body = (s[0] == '+') ? s.substr(1) : s;
    Rational q;
    if (q.set_str(body, 10) != 0) throw bad();
    if (q.get_den() == 0) throw ArgumentError("zero denominator in \"" + s + "\"");
    q.canonicalize();
    return q;
}

// Seeded generator. Draws are derived from raw mt19937_64 output so that
// streams are identical across standard library implementations.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : eng_(seed) {}

    std::uint64_t below(std::uint64_t n) {
        if (n == 0) throw ArgumentError("Rng::below(0)");
        const std::uint64_t limit = UINT64_MAX - UINT64_MAX % n;
        std::uint64_t x;
        do {
            x = eng_();
        } while (x >= limit);
        return x % n;
    }

    long uniform(long lo, long hi) {
        return lo + static_cast<long>(below(static_cast<std::uint64_t>(hi - lo + 1)));
    }

    // p/q with |p| <= bound, 1 <= q <= bound.
    Rational rational(long bound = 10) {
        Rational r(uniform(-bound, bound), uniform(1, bound));
        r.canonicalize();
        return r;
    }

    Rational nonzero_rational(long bound = 10) {
        for (;;) {
            Rational r = rational(bound);
            if (r != 0) return r;
        }
    }

private:
    std::mt19937_64 eng_;
};

}  // namespace bifree

#endif
