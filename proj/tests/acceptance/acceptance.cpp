// Acceptance suite: one pass/fail line per criterion, nonzero exit when any
// criterion fails. The CLI path for the round-trip criterion comes from
// argv[1] (ctest passes the built binary).

#include "../unit/helpers.hpp"

#include "cspbd/backdoor.hpp"
#include "cspbd/class_expr.hpp"
#include "cspbd/generators.hpp"
#include "cspbd/json_io.hpp"

#include <algorithm>
#include <bit>
#include <chrono>
#include <set>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

using namespace cspbd;
using testutil::rel;

namespace {

std::string cli_path;

Relation r1_fixture() { return rel(2, 2, {{0, 0}, {0, 1}, {1, 0}}); }
Relation r2_fixture() { return rel(2, 2, {{1, 1}, {0, 1}, {1, 0}}); }

ClassExprPtr three_way_union() {
    return make_union({make_atomic(BuiltinOp::Max), make_atomic(BuiltinOp::Min),
                       make_atomic(BuiltinOp::DualDiscriminator)});
}

struct Failure {
    std::string message;
};

void require(bool condition, const std::string& message) {
    if (!condition)
        throw Failure{message};
}

// ---- criterion 1 -----------------------------------------------------------

void reference_fixture_exactness() {
    HittingSetInstance hs(7, 3, {{2, 3, 4}, {1, 4, 5}, {0, 2, 6}});
    CspInstance instance = gen_single_constraint_csp(hs, {true, false, false});

    Relation expected(7, 8,
                      {{2, 2, 3, 2, 2, 2, 2},
                       {2, 2, 2, 3, 2, 2, 2},
                       {2, 2, 2, 2, 3, 2, 2},
                       {4, 5, 4, 4, 4, 4, 4},
                       {4, 4, 4, 4, 5, 5, 4},
                       {7, 6, 6, 6, 6, 6, 6},
                       {6, 6, 7, 6, 6, 6, 7}});
    require(instance.num_vars() == 7 && instance.domain_size() == 8, "fixture shape mismatch");
    require(instance.constraints().size() == 1, "fixture must have a single constraint");
    require(instance.constraints()[0].relation == expected, "fixture relation differs from the reference rows");
}

// ---- criterion 2 -----------------------------------------------------------

void factored_equals_naive() {
    testutil::Rng rng(20240801);
    Limits limits;
    std::vector<ClassExprPtr> classes = {make_atomic(BuiltinOp::Max), make_atomic(BuiltinOp::Min),
                                         make_atomic(BuiltinOp::DualDiscriminator), three_way_union(),
                                         make_family(IdentityFamily::semilattice())};
    const int trials = 500;
    int positives = 0, negatives = 0;
    for (int iter = 0; iter < trials; ++iter) {
        CspInstance instance = testutil::random_instance(rng, 6, 3, 3, 3, 8);
        std::vector<int> backdoor;
        for (int v = 0; v < instance.num_vars(); ++v)
            if (rng.below(2))
                backdoor.push_back(v);
        const ClassExprPtr& cls = classes[iter % classes.size()];
        bool naive = check_backdoor_naive(instance, backdoor, *cls, limits);
        bool factored = check_backdoor_factored(instance, backdoor, *cls, limits);
        require(naive == factored, "checker disagreement at trial " + std::to_string(iter));
        (naive ? positives : negatives)++;
    }
    require(positives >= 100 && negatives >= 10, "sampling produced a degenerate outcome mix");
}

// ---- criterion 3 -----------------------------------------------------------

void detector_equivalence() {
    testutil::Rng rng(20240802);
    Limits limits;
    std::vector<ClassExprPtr> classes = {make_atomic(BuiltinOp::Max), make_atomic(BuiltinOp::Min),
                                         make_atomic(BuiltinOp::DualDiscriminator), three_way_union()};
    const int trials = 200;
    int found = 0, missing = 0;
    for (int iter = 0; iter < trials; ++iter) {
        CspInstance instance = testutil::random_instance(rng, 8, 3, 3, 3, 6);
        const ClassExprPtr& cls = classes[iter % classes.size()];
        int k = rng.below(4);
        BackdoorQuery query{&instance, cls, k, *helly_bound(*cls)};
        auto fpt = find_backdoor_fpt(query, limits);
        auto brute = find_backdoor_bruteforce(instance, *cls, k, limits);
        require(fpt.has_value() == brute.has_value(), "detector disagreement at trial " + std::to_string(iter));
        if (fpt) {
            require(static_cast<int>(fpt->size()) <= k, "witness exceeds the budget");
            require(check_backdoor_naive(instance, *fpt, *cls, limits), "witness failed re-verification");
            ++found;
        } else {
            ++missing;
        }
    }
    require(found >= 50 && missing >= 3, "sampling produced a degenerate outcome mix");
}

// ---- criterion 4 -----------------------------------------------------------

void reduction_soundness() {
    Limits limits;
    ClassExprPtr max_cls = make_atomic(BuiltinOp::Max);

    testutil::Rng rng(20240803);
    for (int iter = 0; iter < 100; ++iter) {
        int n = 1 + rng.below(8);
        const int all_edges = n * (n - 1) / 2;
        int m = rng.below(all_edges + 1);
        std::set<std::pair<int, int>> edges;
        while (static_cast<int>(edges.size()) < m) {
            int a = rng.below(n), b = rng.below(n);
            if (a != b)
                edges.insert({std::min(a, b), std::max(a, b)});
        }
        Graph graph(n, {edges.begin(), edges.end()});
        CspInstance instance = gen_vertex_cover_csp(graph, *max_cls, limits);
        auto backdoor = find_backdoor_bruteforce(instance, *max_cls, n, limits);
        require(backdoor.has_value(), "cover instance without a backdoor");
        require(static_cast<int>(backdoor->size()) == min_vertex_cover_size(graph),
                "cover optimum mismatch at graph trial " + std::to_string(iter));
    }

    for (int iter = 0; iter < 100; ++iter) {
        int n = 3 + rng.below(6);
        const int distinct_blocks = n * (n - 1) * (n - 2) / 6;
        int s = std::min(1 + rng.below(3), distinct_blocks);
        std::set<std::vector<int>> sets;
        while (static_cast<int>(sets.size()) < s) {
            std::set<int> block;
            while (static_cast<int>(block.size()) < 3)
                block.insert(rng.below(n));
            sets.insert(std::vector<int>(block.begin(), block.end()));
        }
        HittingSetInstance hs(n, 3, {sets.begin(), sets.end()});
        int optimum = min_hitting_set_size(hs);

        CspInstance single = gen_single_constraint_csp(hs, single_constraint_flags(hs, *max_cls, limits));
        auto single_backdoor = find_backdoor_bruteforce(single, *max_cls, n, limits);
        require(single_backdoor.has_value(), "single-constraint instance without a backdoor");
        require(static_cast<int>(single_backdoor->size()) == optimum,
                "single-constraint optimum mismatch at trial " + std::to_string(iter));

        CspInstance uniform = gen_boolean_uniform_csp(hs, *max_cls, limits);
        auto uniform_backdoor = find_backdoor_bruteforce(uniform, *max_cls, n, limits);
        require(uniform_backdoor.has_value(), "uniform instance without a backdoor");
        require(static_cast<int>(uniform_backdoor->size()) == optimum,
                "uniform optimum mismatch at trial " + std::to_string(iter));
    }
}

// ---- criterion 5 -----------------------------------------------------------

void tsi_fixtures() {
    Limits limits;
    auto f1 = tsi_member(Language(2, {r1_fixture()}), limits);
    require(f1.has_value(), "first fixture must be a member");
    require(verify_tsi(*f1, Language(2, {r1_fixture()}), limits), "first witness failed verification");

    auto f2 = tsi_member(Language(2, {r2_fixture()}), limits);
    require(f2.has_value(), "second fixture must be a member");
    require(verify_tsi(*f2, Language(2, {r2_fixture()}), limits), "second witness failed verification");

    require(!tsi_member(Language(2, {r1_fixture(), r2_fixture()}), limits).has_value(),
            "the pair must not be a member");
}

// ---- criterion 6 -----------------------------------------------------------

void union_helly_property() {
    testutil::Rng rng(20240806);
    Limits limits;
    ClassExprPtr expr = three_way_union();
    const int h = *helly_bound(*expr);
    require(h == 3, "three-way union must have bound 3");
    int premise_held = 0;
    for (int iter = 0; iter < 1000; ++iter) {
        Language lang = testutil::random_language(rng, 3, 6, 2, 6);
        const auto& rels = lang.relations();
        const int n = lang.size();
        bool all_small_member = true;
        for (std::uint64_t mask = 1; mask < (std::uint64_t{1} << n) && all_small_member; ++mask) {
            if (std::popcount(mask) > h)
                continue;
            std::vector<Relation> part;
            for (int i = 0; i < n; ++i)
                if (mask >> i & 1)
                    part.push_back(rels[i]);
            if (!member_bool(*expr, Language(lang.domain_size(), part), limits))
                all_small_member = false;
        }
        if (all_small_member) {
            require(member_bool(*expr, lang, limits), "helly counterexample at trial " + std::to_string(iter));
            ++premise_held;
        }
    }
    require(premise_held >= 300, "sampling rarely satisfied the premise");
}

// ---- criterion 7 -----------------------------------------------------------

void extension_invariance() {
    testutil::Rng rng(20240807);
    Limits limits;
    const ClassExprPtr classes[] = {make_atomic(BuiltinOp::Max), make_atomic(BuiltinOp::Min),
                                    make_atomic(BuiltinOp::DualDiscriminator)};
    int members = 0, non_members = 0;
    for (int iter = 0; iter < 200; ++iter) {
        int arity = 1 + rng.below(3);
        int d = 1 + rng.below(3);
        Relation base = testutil::random_relation(rng, arity, d, 6);
        std::vector<ColumnSpec> spec;
        for (int i = 0, extra = 1 + rng.below(3); i < extra; ++i) {
            if (rng.below(2))
                spec.push_back(ColumnSpec::constant(rng.below(4)));
            else
                spec.push_back(ColumnSpec::copy_of(rng.below(arity)));
        }
        Relation extended = extend_relation(base, spec);
        Language base_lang(base.domain_size(), {base});
        Language ext_lang(extended.domain_size(), {extended});
        for (const ClassExprPtr& cls : classes) {
            bool base_member = member_bool(*cls, base_lang, limits);
            require(base_member == member_bool(*cls, ext_lang, limits),
                    "extension membership mismatch at trial " + std::to_string(iter));
            (base_member ? members : non_members)++;
        }
    }
    require(members >= 30 && non_members >= 10, "sampling produced a degenerate outcome mix");
}

// ---- criterion 8 -----------------------------------------------------------

void renaming_closure_exhaustive() {
    // Fixture family on a three-value domain: a renamed copy of the second
    // block linked by the value map 0 -> 2.
    struct Fixture {
        std::vector<Relation> whole;   // gamma1 + gamma2 + link
        std::vector<Relation> implied; // gamma1 + renamed gamma2
    };
    std::vector<Fixture> fixtures = {
        {{rel(2, 3, {{0, 1}, {1, 0}}), rel(1, 3, {{0}}), rel(2, 3, {{0, 2}})},
         {rel(2, 3, {{0, 1}, {1, 0}}), rel(1, 3, {{2}})}},
        {{rel(2, 3, {{0, 0}, {0, 1}, {1, 0}}), rel(1, 3, {{0}}), rel(2, 3, {{0, 2}})},
         {rel(2, 3, {{0, 0}, {0, 1}, {1, 0}}), rel(1, 3, {{2}})}},
        {{rel(1, 3, {{1}}), rel(2, 3, {{1, 1}}), rel(2, 3, {{1, 2}})},
         {rel(1, 3, {{1}}), rel(2, 3, {{2, 2}})}},
    };

    long preserving = 0;
    for (int arity = 1; arity <= 2; ++arity) {
        const std::size_t cell_count = arity == 1 ? 3 : 9;
        std::vector<Value> cells(cell_count, 0);
        while (true) {
            OperationTable op(arity, 3, cells);
            for (const Fixture& fixture : fixtures) {
                bool whole = true;
                for (const Relation& r : fixture.whole)
                    whole = whole && preserves(op, r);
                if (whole) {
                    ++preserving;
                    for (const Relation& r : fixture.implied)
                        require(preserves(op, r), "renaming closure violated");
                }
            }
            std::size_t pos = cell_count;
            while (pos > 0 && cells[pos - 1] == 2)
                cells[--pos] = 0;
            if (pos == 0)
                break;
            ++cells[pos - 1];
        }
    }
    require(preserving > 0, "no table preserved any fixture");
}

// ---- criterion 9 -----------------------------------------------------------

void renaming_chain_soundness() {
    Limits limits;
    limits.tsi_domain_cap = 64;
    ClassExprPtr tsi = make_family(IdentityFamily::tsi_all_arities());
    NonHellyWitness witness = make_non_helly_witness(Language(2, {r1_fixture(), r2_fixture()}));

    std::vector<HittingSetInstance> inputs = {
        HittingSetInstance(3, 3, {{0, 1, 2}}),
        HittingSetInstance(4, 3, {{0, 1, 2}}),
        HittingSetInstance(4, 3, {{0, 1, 2}, {1, 2, 3}}),
        HittingSetInstance(4, 3, {{0, 1, 2}, {0, 1, 3}, {0, 2, 3}}),
        HittingSetInstance(4, 3, {{0, 1, 2}, {0, 1, 3}, {0, 2, 3}, {1, 2, 3}}),
    };
    for (std::size_t i = 0; i < inputs.size(); ++i) {
        CspInstance instance = gen_renaming_chain_csp(inputs[i], witness, *tsi, limits);
        int optimum = min_hitting_set_size(inputs[i]);
        auto backdoor = find_backdoor_bruteforce(instance, *tsi, instance.num_vars(), limits);
        require(backdoor.has_value(), "chain instance without a backdoor");
        require(static_cast<int>(backdoor->size()) == optimum,
                "chain optimum mismatch at input " + std::to_string(i));
    }
}

// ---- criterion 10 ----------------------------------------------------------

struct CliResult {
    int exit_code;
    std::string output;
};

CliResult run_cli(const std::string& args) {
    std::string command = cli_path + " " + args + " 2>/dev/null";
    FILE* pipe = popen(command.c_str(), "r");
    if (!pipe)
        throw Failure{"cannot spawn the CLI"};
    std::string output;
    char buffer[4096];
    std::size_t got;
    while ((got = fread(buffer, 1, sizeof buffer, pipe)) > 0)
        output.append(buffer, got);
    int status = pclose(pipe);
    int code = (status >= 0 && WIFEXITED(status)) ? WEXITSTATUS(status) : -1;
    return {code, output};
}

void cli_round_trip() {
    require(!cli_path.empty(), "CLI path missing (pass it as argv[1])");
    namespace fs = std::filesystem;
    fs::path dir = fs::temp_directory_path() / "cspbd_acceptance";
    fs::remove_all(dir);
    fs::create_directories(dir);
    auto path = [&](const std::string& name) { return (dir / name).string(); };

    {
        std::ofstream out(path("hs.json"));
        out << R"({"universe":7,"p":3,"sets":[[2,3,4],[1,4,5],[0,2,6]]})";
    }
    {
        std::ofstream out(path("k3.json"));
        out << R"({"num_vertices":3,"edges":[[0,1],[1,2],[0,2]]})";
    }
    {
        // Minimum except that the pair {2,3} keeps its own two-value block.
        Json cls;
        std::vector<Value> cells;
        for (Value x = 0; x < 8; ++x)
            for (Value y = 0; y < 8; ++y)
                cells.push_back(x == 3 && y == 2 ? 3 : std::min(x, y));
        cls["atomic_table"] = operation_to_json(OperationTable(2, 8, cells));
        save_json_file(path("fixture_class.json"), cls);
    }

    // Reference fixture: generate, detect, verify.
    require(run_cli("generate --construction single-constraint --hitting-set " + path("hs.json") +
                    " --flags 1,0,0 --out " + path("fig.json"))
                    .exit_code == 0,
            "generate failed for the reference fixture");
    CliResult find_fig = run_cli("find --instance " + path("fig.json") + " --class " + path("fixture_class.json") +
                                 " --k 2 --deterministic --json");
    require(find_fig.exit_code == 0, "find failed on the reference fixture");
    require(find_fig.output.find("\"found\":true") != std::string::npos, "reference fixture backdoor not found");
    CliResult find_fig_again = run_cli("find --instance " + path("fig.json") + " --class " +
                                       path("fixture_class.json") + " --k 2 --deterministic --json");
    require(find_fig.output == find_fig_again.output, "deterministic reruns differ on the reference fixture");

    CliResult check_fig = run_cli("check --instance " + path("fig.json") + " --class " +
                                  path("fixture_class.json") + " --backdoor 2,4 --checker both --json");
    require(check_fig.exit_code == 0, "check failed on the reference fixture");
    require(check_fig.output.find("\"naive\":true") != std::string::npos &&
                check_fig.output.find("\"factored\":true") != std::string::npos,
            "hitting set not verified as a backdoor");

    // Triangle cover instance with the max class.
    require(run_cli("generate --construction vertex-cover --graph " + path("k3.json") +
                    " --class \"{\\\"atomic\\\":\\\"max\\\"}\" --out " + path("vc.json"))
                    .exit_code == 0,
            "generate failed for the cover instance");
    CliResult find_vc =
        run_cli("find --instance " + path("vc.json") + " --class \"{\\\"atomic\\\":\\\"max\\\"}\" --k 2 "
                "--deterministic --json");
    require(find_vc.exit_code == 0 && find_vc.output.find("\"found\":true") != std::string::npos,
            "cover backdoor not found");
    CliResult find_vc_again =
        run_cli("find --instance " + path("vc.json") + " --class \"{\\\"atomic\\\":\\\"max\\\"}\" --k 2 "
                "--deterministic --json");
    require(find_vc.output == find_vc_again.output, "deterministic reruns differ on the cover instance");
    require(run_cli("solve --instance " + path("vc.json") + " --class \"{\\\"atomic\\\":\\\"max\\\"}\" --k 2")
                    .exit_code == 0,
            "solve failed on the cover instance");

    // Uniform Boolean instance.
    {
        std::ofstream out(path("hs2.json"));
        out << R"({"universe":4,"p":3,"sets":[[0,1,2],[1,2,3]]})";
    }
    require(run_cli("generate --construction boolean-uniform --hitting-set " + path("hs2.json") +
                    " --class \"{\\\"atomic\\\":\\\"max\\\"}\" --out " + path("uniform.json"))
                    .exit_code == 0,
            "generate failed for the uniform instance");
    CliResult find_uniform = run_cli("find --instance " + path("uniform.json") +
                                     " --class \"{\\\"atomic\\\":\\\"max\\\"}\" --k 1 --json");
    require(find_uniform.exit_code == 0 && find_uniform.output.find("\"found\":true") != std::string::npos,
            "uniform backdoor not found");

    // Renaming-chain instance with the tsi class and the searched witness.
    require(run_cli("generate --construction renaming-chain --hitting-set " + path("hs2.json") +
                    " --class \"{\\\"family\\\":\\\"tsi_all_arities\\\"}\" --witness auto --out " +
                    path("chain.json"))
                    .exit_code == 0,
            "generate failed for the chain instance");
    CliResult find_chain = run_cli("find-brute --instance " + path("chain.json") +
                                   " --class \"{\\\"family\\\":\\\"tsi_all_arities\\\"}\" --k 2 "
                                   "--cap-tsi-domain 64 --json");
    require(find_chain.exit_code == 0 && find_chain.output.find("\"found\":true") != std::string::npos,
            "chain backdoor not found");
    require(find_chain.output.find("\"backdoor\":[1]") != std::string::npos ||
                find_chain.output.find("\"backdoor\":[2]") != std::string::npos ||
                find_chain.output.find("\"backdoor\":[0") != std::string::npos,
            "chain backdoor has unexpected shape");

    fs::remove_all(dir);
}

} // namespace

int main(int argc, char** argv) {
    if (argc > 1)
        cli_path = argv[1];

    struct Criterion {
        int number;
        std::string name;
        std::function<void()> run;
    };
    const std::vector<Criterion> criteria = {
        {1, "single-constraint reference fixture exactness", reference_fixture_exactness},
        {2, "factored backdoor check agrees with naive enumeration", factored_equals_naive},
        {3, "bounded-search-tree detector agrees with brute force", detector_equivalence},
        {4, "reduction optima equal cover/hitting optima", reduction_soundness},
        {5, "tsi membership fixtures", tsi_fixtures},
        {6, "three-way union helly property", union_helly_property},
        {7, "extension membership invariance", extension_invariance},
        {8, "renaming closure, exhaustive over small tables", renaming_closure_exhaustive},
        {9, "renaming-chain reduction optimum under tsi", renaming_chain_soundness},
        {10, "cli round trip determinism", cli_round_trip},
    };

    int failures = 0;
    for (const Criterion& criterion : criteria) {
        auto start = std::chrono::steady_clock::now();
        std::string note;
        bool ok = true;
        try {
            criterion.run();
        } catch (const Failure& failure) {
            ok = false;
            note = failure.message;
        } catch (const std::exception& e) {
            ok = false;
            note = std::string("exception: ") + e.what();
        }
        auto elapsed = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        std::printf("[%s] %2d. %s (%.2fs)%s%s\n", ok ? "PASS" : "FAIL", criterion.number, criterion.name.c_str(),
                    elapsed, note.empty() ? "" : " -- ", note.c_str());
        std::fflush(stdout);
        if (!ok)
            ++failures;
    }
    if (failures) {
        std::printf("%d criterion(s) failed\n", failures);
        return 1;
    }
    std::printf("all criteria passed\n");
    return 0;
}
