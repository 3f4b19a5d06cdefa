// Command line front end: enumeration, Moebius values, moment/cumulant
// transforms, free group models and verification runs. JSON on stdout.

#include "bifree/verify.hpp"

#include <CLI11.hpp>

#include <chrono>
#include <iostream>
#include <optional>

using namespace bifree;

namespace {

enum Exit { kOk = 0, kCheckFailed = 1, kBadArgument = 2, kBadInput = 3, kTooLarge = 4, kMissing = 5, kInternal = 70 };

int bounded_order(const std::optional<int>& requested, int fallback) {
    const int bound = max_word_order();
    if (!requested) return std::min(fallback, bound);
    if (*requested < 1) throw ArgumentError("--order must be >= 1");
    if (*requested > bound)
        throw SizeLimitError("order " + std::to_string(*requested) + " exceeds the bound " + std::to_string(bound) +
                             " (set BIFREE_MAX_ORDER to raise it)");
    return *requested;
}

int table_order(const std::optional<int>& requested, const WordTable& t) {
    const int N = bounded_order(requested, t.order());
    if (N > t.order())
        throw MissingDataError("table declares order " + std::to_string(t.order()) + ", order " + std::to_string(N) + " requested");
    return N;
}

json read_input(const std::string& source) {
    if (source != "-") return read_json_file(source);
    std::stringstream ss;
    ss << std::cin.rdbuf();
    return parse_json(ss.str(), "<stdin>");
}

// "zero", "one", inline JSON, or a path to a partition JSON file.
BiPartition partition_arg(const std::string& arg, const std::optional<ChiMap>& chi, const std::string& flag) {
    if (arg == "zero" || arg == "one") {
        if (!chi) throw ArgumentError(flag + " " + arg + " needs --chi or --n");
        return arg == "zero" ? BiPartition::zero(*chi) : BiPartition::one(*chi);
    }
    const json j = !arg.empty() && arg.front() == '{' ? parse_json(arg, flag) : read_json_file(arg);
    return partition_from_json(j, flag);
}

void print(const json& j) { std::cout << j.dump() << "\n"; }

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Bi-free probability toolkit"};
    app.require_subcommand(1);
    bool timing = false;
    app.add_flag("--timing", timing, "Report elapsed time on stderr");

    // enum
    auto* enum_cmd = app.add_subcommand("enum", "List BNC(chi) or one of its families");
    std::string enum_chi, enum_tag = "BNC";
    enum_cmd->add_option("--chi", enum_chi, "Side pattern, e.g. LLRLR")->required();
    enum_cmd->add_option("--tag", enum_tag, "BNC, BNC_vs, BNC_b or BNC_m");

    // mobius
    auto* mobius_cmd = app.add_subcommand("mobius", "Moebius function mu(from, to) of the BNC lattice");
    std::string mob_from, mob_to, mob_chi;
    std::optional<int> mob_n;
    mobius_cmd->add_option("--from", mob_from, "zero, one, partition JSON or file")->required();
    mobius_cmd->add_option("--to", mob_to, "zero, one, partition JSON or file")->required();
    mobius_cmd->add_option("--chi", mob_chi, "Side pattern for zero/one");
    mobius_cmd->add_option("--n", mob_n, "Length of the all-left pattern for zero/one");

    // transform
    auto* transform_cmd = app.add_subcommand("transform", "Moment table to cumulant table (or back)");
    std::string tr_input;
    bool tr_inverse = false, tr_series = false;
    std::optional<int> tr_order;
    transform_cmd->add_option("--input", tr_input, "Table JSON file, - for stdin")->required();
    transform_cmd->add_flag("--inverse", tr_inverse, "Input holds cumulants; output moments");
    transform_cmd->add_option("--order", tr_order, "Truncation order");
    transform_cmd->add_flag("--series", tr_series, "For a pair {T (left), S (right)}: emit the transform series");

    // model
    auto* model_cmd = app.add_subcommand("model", "Moment tables of operator models");
    model_cmd->require_subcommand(1);
    auto* fg_cmd = model_cmd->add_subcommand("freegroup", "Left/right regular representations of a free group");
    int fg_generators = 0;
    std::string fg_letters;
    std::optional<int> fg_order;
    fg_cmd->add_option("--generators", fg_generators, "Number of free generators")->required();
    fg_cmd->add_option("--letters", fg_letters, "Letter spec JSON file")->required();
    fg_cmd->add_option("--order", fg_order, "Maximal word length");

    // verify
    auto* verify_cmd = app.add_subcommand("verify", "Run a verification and report PASS/FAIL");
    verify_cmd->require_subcommand(1);
    std::uint64_t seed = 1;
    std::optional<int> order;
    std::string classify_input;
    const std::vector<std::string> checks{"classify", "boolean", "monotone", "kacloeve", "tensor",
                                          "rtransform", "mixed-rtransform", "radditivity"};
    for (const auto& name : checks) {
        auto* c = verify_cmd->add_subcommand(name);
        c->add_option("--seed", seed, "Random seed (echoed in the report)");
        c->add_option("--order", order, "Word length or series truncation order");
    }
    verify_cmd->get_subcommand("classify")->add_option("--input", classify_input, "Moment table to classify instead of the built-in fixtures");

    CLI11_PARSE(app, argc, argv);
    const auto t0 = std::chrono::steady_clock::now();
    int status = kOk;
    try {
        if (enum_cmd->parsed()) {
            const auto chi = ChiMap::parse(enum_chi);
            print(family_json(enumerate_family(chi, parse_tag(enum_tag))));
        } else if (mobius_cmd->parsed()) {
            std::optional<ChiMap> chi;
            if (!mob_chi.empty()) chi = ChiMap::parse(mob_chi);
            if (mob_n) {
                if (chi && chi->size() != *mob_n) throw ArgumentError("--chi and --n disagree");
                if (!chi) chi = ChiMap::constant(*mob_n, Side::Left);
            }
            const auto from = partition_arg(mob_from, chi, "--from");
            const auto to = partition_arg(mob_to, chi, "--to");
            std::cout << mobius_closed(from, to).get_str() << "\n";
        } else if (transform_cmd->parsed()) {
            const json in = read_input(tr_input);
            std::optional<CumulantTable> kappa;
            std::optional<MomentFunctional> moments;
            if (tr_inverse) {
                kappa = cumulants_from_json(in);
                const int N = table_order(tr_order, *kappa);
                moments = cumulants_to_moments(*kappa, N);
            } else {
                moments = moments_from_json(in);
                const int N = table_order(tr_order, *moments);
                kappa = moments_to_cumulants(*moments, N);
            }
            if (tr_series) {
                const auto b = bundle_from_cumulants(*kappa, table_order(tr_order, *kappa));
                print({{"M_T", series_json(b.M_T, "z")}, {"C_T", series_json(b.C_T, "z")}, {"R_T", series_json(b.R_T, "z")},
                       {"M_S", series_json(b.M_S, "w")}, {"C_S", series_json(b.C_S, "w")}, {"R_S", series_json(b.R_S, "w")},
                       {"M_TS", series_json(b.M_TS)}, {"R_TS", series_json(b.R_TS)}});
            } else if (tr_inverse) {
                print(table_json(*moments, "moments"));
            } else {
                print(table_json(*kappa, "cumulants"));
            }
        } else if (fg_cmd->parsed()) {
            if (fg_generators < 1) throw ArgumentError("--generators must be >= 1");
            const auto letters = freegroup_letters_from_json(read_json_file(fg_letters), fg_letters);
            for (const auto& l : letters)
                for (const auto& [g, e] : l.element.syllables())
                    if (g > fg_generators)
                        throw ArgumentError("letter " + l.letter.symbol + " uses u" + std::to_string(g) + " but only " +
                                            std::to_string(fg_generators) + " generators are declared");
            print(table_json(freegroup_distribution(letters, bounded_order(fg_order, max_word_order())), "moments"));
        } else {
            std::vector<CheckReport> reports;
            auto ran = [&](const std::string& name) { return verify_cmd->get_subcommand(name)->parsed(); };
            if (ran("classify") && !classify_input.empty()) {
                const auto m = moments_from_json(read_input(classify_input));
                reports.push_back(verify_table_bifree(m, bounded_order(order, m.order())));
            } else if (ran("classify")) {
                reports.push_back(verify_freegroup_bifree(bounded_order(order, 6)));
                reports.push_back(verify_product_classification(seed, bounded_order(order, 4)));
                reports.push_back(verify_m2_counterexample());
            } else if (ran("boolean")) {
                // --order counts letters; each pair contributes two.
                const int pairs = bounded_order(order, 8) / 2;
                reports.push_back(verify_boolean(seed, pairs, std::min(pairs, 3)));
            } else if (ran("monotone")) {
                reports.push_back(verify_monotone(seed, bounded_order(order, 5)));
            } else if (ran("kacloeve")) {
                reports.push_back(verify_kacloeve(seed, bounded_order(order, 6)));
            } else if (ran("tensor")) {
                reports.push_back(verify_tensor(seed, 4, 3, bounded_order(order, 4)));
            } else if (ran("rtransform")) {
                reports.push_back(verify_rtransform(seed, bounded_order(order, 8)));
            } else if (ran("mixed-rtransform")) {
                reports.push_back(verify_mixed_rtransform(seed, bounded_order(order, 7)));
            } else if (ran("radditivity")) {
                reports.push_back(verify_radditivity(seed, bounded_order(order, 6)));
            }
            std::sort(reports.begin(), reports.end(), [](const CheckReport& a, const CheckReport& b) { return a.check < b.check; });
            for (const auto& r : reports) {
                json j = r.to_json();
                j["seed"] = seed;
                print(j);
                if (!r.pass) status = kCheckFailed;
            }
        }
    } catch (const ParseError& e) {
        std::cerr << "parse error: " << e.what() << "\n";
        status = kBadInput;
    } catch (const SizeLimitError& e) {
        std::cerr << "size limit: " << e.what() << "\n";
        status = kTooLarge;
    } catch (const MissingDataError& e) {
        std::cerr << "missing data: " << e.what() << "\n";
        status = kMissing;
    } catch (const ArgumentError& e) {
        std::cerr << "error: " << e.what() << "\n";
        status = kBadArgument;
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << "\n";
        status = kInternal;
    }
    if (timing) {
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        std::cerr << "elapsed " << secs << " s\n";
    }
    return status;
}
