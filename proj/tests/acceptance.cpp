// One PASS/FAIL line per acceptance criterion. Exit status 1 if any fails.

#include "bifree/verify.hpp"

#include <chrono>
#include <cstdio>
#include <functional>
#include <iostream>

using namespace bifree;

namespace {

struct Criterion {
    int id;
    const char* title;
    double limit_seconds;  // 0 means no limit
    std::function<std::vector<CheckReport>()> run;
};

std::vector<CheckReport> seeds(std::uint64_t from, std::uint64_t to, const std::function<CheckReport(std::uint64_t)>& f) {
    std::vector<CheckReport> out;
    for (std::uint64_t s = from; s <= to; ++s) out.push_back(f(s));
    return out;
}

}  // namespace

int main() {
    const std::vector<Criterion> criteria{
        {1, "lattice counts: Catalan(n) for all chi, n <= 8; BNC_b and BNC_m examples", 5,
         [] { return std::vector<CheckReport>{verify_lattice_counts(8)}; }},
        {2, "Moebius: closed form equals recursion, defining sums, n <= 6", 30,
         [] { return std::vector<CheckReport>{verify_mobius(6)}; }},
        {3, "moment/cumulant roundtrip on 20 random tables to order 6", 10,
         [] { return std::vector<CheckReport>{verify_roundtrip(2024, 20, 6)}; }},
        {4, "free group pairs (lambda(u_k), rho(u_k)) bi-free to length 6", 60,
         [] { return std::vector<CheckReport>{verify_freegroup_bifree(6)}; }},
        {5, "M_2 matrix-unit pair has kappa(T,S) = 1/2", 0,
         [] { return std::vector<CheckReport>{verify_m2_counterexample()}; }},
        {6, "Boolean: E(T1S1...TnSn) over BNC_b for n <= 4 pairs; E_pi = 0 off BNC_b for n <= 3", 0,
         [] { return seeds(1, 2, [](std::uint64_t s) { return verify_boolean(s, 4, 3); }); }},
        {7, "monotone: BNC_m sum equals Psi for words <= 5; free group factorization", 0,
         [] { return seeds(13, 14, [](std::uint64_t s) { return verify_monotone(s, 5); }); }},
        {8, "Kac/Loeve with (3/5, 4/5) in both directions to order 6", 60,
         [] { return seeds(1, 2, [](std::uint64_t s) { return verify_kacloeve(s, 6); }); }},
        {9, "tensor lemma q <= 4, n <= 3; amplified M_2 cumulants vanish to length 4", 0,
         [] { return std::vector<CheckReport>{verify_tensor(1, 4, 3, 4)}; }},
        {10, "partial R-transform identity, 20 seeds to total degree 8", 120,
         [] { return seeds(1, 20, [](std::uint64_t s) { return verify_rtransform(s, 8); }); }},
        {11, "sided R-transform identity, 10 seeds to degree 7; Boolean collapse", 0,
         [] { return seeds(1, 10, [](std::uint64_t s) { return verify_mixed_rtransform(s, 7); }); }},
        {12, "R-additivity under bi-free convolution to order 6", 0,
         [] { return seeds(1, 3, [](std::uint64_t s) { return verify_radditivity(s, 6); }); }},
    };

    int failed = 0;
    for (const auto& c : criteria) {
        const auto t0 = std::chrono::steady_clock::now();
        std::vector<CheckReport> reports;
        std::string error;
        try {
            reports = c.run();
        } catch (const std::exception& e) {
            error = e.what();
        }
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        bool pass = error.empty();
        const CheckReport* bad = nullptr;
        for (const auto& r : reports)
            if (!r.pass) {
                pass = false;
                if (!bad) bad = &r;
            }
        const bool slow = c.limit_seconds > 0 && secs > c.limit_seconds;
        if (slow) pass = false;
        char timing[64];
        std::snprintf(timing, sizeof timing, "%.2fs", secs);
        std::cout << (pass ? "PASS" : "FAIL") << " " << c.id << " " << c.title << " (" << timing;
        if (c.limit_seconds > 0) std::cout << ", limit " << c.limit_seconds << "s";
        std::cout << ")";
        if (!error.empty()) std::cout << " error: " << error;
        if (bad) std::cout << " " << bad->to_json().dump();
        if (slow) std::cout << " over time limit";
        std::cout << std::endl;
        if (!pass) ++failed;
    }
    return failed ? 1 : 0;
}
