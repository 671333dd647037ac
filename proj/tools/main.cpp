#include "cspbd/backdoor.hpp"
#include "cspbd/class_expr.hpp"
#include "cspbd/gac.hpp"
#include "cspbd/generators.hpp"
#include "cspbd/json_io.hpp"

#include <CLI11.hpp>

#include <cstdint>
#include <filesystem>
#include <iostream>
#include <random>
#include <sstream>
#include <string>

namespace {

using namespace cspbd;

struct CommonOptions {
    bool json_output = false;
    bool deterministic = false; // runs are sequential either way; kept for pipelines
    std::uint64_t seed = 0;
    Limits limits;
};

void add_common_flags(CLI::App* cmd, CommonOptions& opts) {
    cmd->add_flag("--json", opts.json_output, "machine-readable output");
    cmd->add_flag("--deterministic", opts.deterministic, "force sequential, byte-reproducible runs");
    cmd->add_option("--seed", opts.seed, "seed for random input synthesis");
    cmd->add_option("--cap-naive", opts.limits.naive_assignment_budget, "assignment budget of the naive check");
    cmd->add_option("--cap-factored", opts.limits.factored_product_budget, "product budget of the factored check");
    cmd->add_option("--cap-brute", opts.limits.bruteforce_budget, "work budget of the brute-force detector");
    cmd->add_option("--cap-search", opts.limits.search_step_budget, "step budget of the polymorphism searches");
    cmd->add_option("--cap-witness", opts.limits.witness_language_budget, "language budget of the witness search");
    cmd->add_option("--cap-arity", opts.limits.table_arity_cap, "largest dense operation table arity");
    cmd->add_option("--cap-tsi-domain", opts.limits.tsi_domain_cap, "largest active domain in the tsi test");
    cmd->add_option("--cap-tsi-tuples", opts.limits.tsi_tuple_cap, "largest relation in the tsi test");
    cmd->add_option("--cap-tsi-subsets", opts.limits.tsi_subset_budget, "subset budget of the tsi test");
}

// Class expressions may be given as a file path or as inline JSON.
ClassExprPtr load_class_expr(const std::string& spec) {
    if (std::filesystem::exists(spec))
        return class_expr_from_json(load_json_file(spec));
    return class_expr_from_json(Json::parse(spec));
}

std::vector<int> parse_index_list(const std::string& text) {
    std::vector<int> out;
    std::stringstream in(text);
    std::string item;
    while (std::getline(in, item, ','))
        if (!item.empty())
            out.push_back(std::stoi(item));
    return out;
}

void emit(const CommonOptions& opts, const Json& machine, const std::string& human) {
    if (opts.json_output)
        std::cout << machine.dump() << '\n';
    else
        std::cout << human << '\n';
}

std::string format_set(const std::vector<int>& vars) {
    std::string out = "{";
    for (std::size_t i = 0; i < vars.size(); ++i) {
        if (i)
            out += ", ";
        out += std::to_string(vars[i]);
    }
    return out + "}";
}

int run_member(const CommonOptions& opts, const std::string& language_path, const std::string& class_spec) {
    Language language = language_from_json(load_json_file(language_path));
    ClassExprPtr expr = load_class_expr(class_spec);
    ClassReport report = member(*expr, language, opts.limits);

    Json j;
    j["member"] = report.member;
    j["helly_bound"] = report.helly_bound ? Json(*report.helly_bound) : Json(nullptr);
    j["idempotent_class"] = report.idempotent_class;
    Json witnesses = Json::array();
    for (const Witness& w : report.evidence) {
        Json entry;
        entry["source"] = w.source;
        if (const OperationTable* table = std::get_if<OperationTable>(&w.value))
            entry["operation"] = operation_to_json(*table);
        else
            entry["set_function"] = set_function_to_json(std::get<SetFunction>(w.value));
        witnesses.push_back(std::move(entry));
    }
    j["witnesses"] = std::move(witnesses);

    std::string human = report.member ? "member" : "not a member";
    if (report.member && !report.evidence.empty())
        human += " (via " + report.evidence.front().source + ")";
    emit(opts, j, human);
    return 0;
}

int run_check(const CommonOptions& opts, const std::string& instance_path, const std::string& class_spec,
              const std::string& backdoor_list, const std::string& checker) {
    CspInstance instance = instance_from_json(load_json_file(instance_path));
    ClassExprPtr expr = load_class_expr(class_spec);
    std::vector<int> backdoor = parse_index_list(backdoor_list);

    DetectStats stats;
    Json j;
    j["backdoor"] = backdoor;
    std::string human;
    if (checker == "naive" || checker == "both") {
        bool ok = check_backdoor_naive(instance, backdoor, *expr, opts.limits, &stats);
        j["naive"] = ok;
        human += std::string("naive: ") + (ok ? "backdoor" : "not a backdoor");
    }
    if (checker == "factored" || checker == "both") {
        bool ok = check_backdoor_factored(instance, backdoor, *expr, opts.limits, &stats);
        j["factored"] = ok;
        if (!human.empty())
            human += ", ";
        human += std::string("factored: ") + (ok ? "backdoor" : "not a backdoor");
    }
    j["membership_tests"] = stats.membership_tests;
    emit(opts, j, human);
    return 0;
}

int run_find(const CommonOptions& opts, const std::string& instance_path, const std::string& class_spec, int k,
             int helly_override, bool brute) {
    CspInstance instance = instance_from_json(load_json_file(instance_path));
    ClassExprPtr expr = load_class_expr(class_spec);

    DetectStats stats;
    std::optional<std::vector<int>> backdoor;
    std::string mode;
    bool conditional = false;
    if (brute) {
        mode = "bruteforce";
        backdoor = find_backdoor_bruteforce(instance, *expr, k, opts.limits, &stats);
    } else {
        mode = "fpt";
        int h;
        if (helly_override > 0) {
            h = helly_override;
            conditional = true;
        } else if (auto derived = helly_bound(*expr)) {
            h = *derived;
        } else {
            std::cerr << "no Helly bound is derivable for this class; pass --helly-override\n";
            return 1;
        }
        BackdoorQuery query{&instance, expr, k, h};
        backdoor = find_backdoor_fpt(query, opts.limits, &stats);
    }

    if (backdoor && !check_backdoor_naive(instance, *backdoor, *expr, opts.limits, &stats)) {
        std::cerr << "internal error: detector result failed re-verification\n";
        return 1;
    }

    Json j = detection_report(backdoor.has_value(), backdoor, stats, mode);
    if (backdoor)
        j["verified"] = true;
    if (conditional)
        j["conditional_on_asserted_helly"] = helly_override;

    std::string human = backdoor ? "found backdoor of size " + std::to_string(backdoor->size()) + ": " +
                                       format_set(*backdoor) + " (re-verified)"
                                 : "no backdoor of size <= " + std::to_string(k);
    if (conditional)
        human += " [conditional on asserted Helly bound " + std::to_string(helly_override) + "]";
    emit(opts, j, human);
    return 0;
}

int run_solve(const CommonOptions& opts, const std::string& instance_path, const std::string& class_spec,
              const std::string& backdoor_list, int k, int helly_override) {
    CspInstance instance = instance_from_json(load_json_file(instance_path));
    ClassExprPtr expr = load_class_expr(class_spec);

    std::vector<int> backdoor;
    if (!backdoor_list.empty()) {
        backdoor = parse_index_list(backdoor_list);
    } else {
        DetectStats stats;
        int h;
        if (helly_override > 0)
            h = helly_override;
        else if (auto derived = helly_bound(*expr))
            h = *derived;
        else {
            std::cerr << "no Helly bound is derivable for this class; pass --helly-override or --backdoor\n";
            return 1;
        }
        BackdoorQuery query{&instance, expr, k, h};
        auto found = find_backdoor_fpt(query, opts.limits, &stats);
        if (!found) {
            std::cerr << "no backdoor of size <= " << k << "; cannot decompose\n";
            return 1;
        }
        backdoor = *found;
    }

    auto solution = solve_via_backdoor(instance, backdoor, *expr, opts.limits);
    Json j;
    j["backdoor"] = backdoor;
    j["satisfiable"] = solution.has_value();
    j["solution"] = solution ? Json(*solution) : Json(nullptr);
    std::string human;
    if (solution) {
        human = "satisfiable:";
        for (int v = 0; v < instance.num_vars(); ++v)
            human += " x" + std::to_string(v) + "=" + std::to_string((*solution)[v]);
    } else {
        human = "unsatisfiable";
    }
    emit(opts, j, human);
    return 0;
}

Graph random_graph(int vertices, int edges, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::set<std::pair<int, int>> chosen;
    const long long all = static_cast<long long>(vertices) * (vertices - 1) / 2;
    edges = static_cast<int>(std::min<long long>(edges, all));
    while (static_cast<int>(chosen.size()) < edges) {
        int a = static_cast<int>(rng() % vertices);
        int b = static_cast<int>(rng() % vertices);
        if (a == b)
            continue;
        chosen.insert({std::min(a, b), std::max(a, b)});
    }
    return Graph(vertices, {chosen.begin(), chosen.end()});
}

HittingSetInstance random_hitting_set(int universe, int p, int sets, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::set<std::vector<int>> chosen;
    long long all = 1;
    for (int i = 0; i < p; ++i)
        all = all * (universe - i) / (i + 1);
    sets = static_cast<int>(std::min<long long>(sets, all));
    while (static_cast<int>(chosen.size()) < sets) {
        std::set<int> block;
        while (static_cast<int>(block.size()) < p)
            block.insert(static_cast<int>(rng() % universe));
        chosen.insert(std::vector<int>(block.begin(), block.end()));
    }
    return HittingSetInstance(universe, p, {chosen.begin(), chosen.end()});
}

int run_generate(const CommonOptions& opts, const std::string& construction, const std::string& graph_path,
                 const std::string& hs_path, const std::string& random_graph_spec, const std::string& random_hs_spec,
                 const std::string& class_spec, const std::string& flags_list, const std::string& witness_spec,
                 const std::string& out_path) {
    std::optional<Graph> graph;
    std::optional<HittingSetInstance> hs;
    if (!graph_path.empty())
        graph = graph_from_json(load_json_file(graph_path));
    if (!hs_path.empty())
        hs = hitting_set_from_json(load_json_file(hs_path));
    if (!random_graph_spec.empty()) {
        auto parts = parse_index_list(random_graph_spec);
        if (parts.size() != 2)
            throw std::invalid_argument("--random-graph needs n,m");
        graph = random_graph(parts[0], parts[1], opts.seed);
    }
    if (!random_hs_spec.empty()) {
        auto parts = parse_index_list(random_hs_spec);
        if (parts.size() != 3)
            throw std::invalid_argument("--random-hitting-set needs n,p,s");
        hs = random_hitting_set(parts[0], parts[1], parts[2], opts.seed);
    }

    ClassExprPtr expr;
    if (!class_spec.empty())
        expr = load_class_expr(class_spec);

    std::optional<CspInstance> instance;
    Json metadata;
    metadata["construction"] = construction;

    auto need_graph = [&]() -> const Graph& {
        if (!graph)
            throw std::invalid_argument(construction + " needs a graph input");
        return *graph;
    };
    auto need_hs = [&]() -> const HittingSetInstance& {
        if (!hs)
            throw std::invalid_argument(construction + " needs a hitting-set input");
        return *hs;
    };
    auto need_expr = [&]() -> const ClassExpr& {
        if (!expr)
            throw std::invalid_argument(construction + " needs --class");
        return *expr;
    };

    if (construction == "vertex-cover") {
        instance = gen_vertex_cover_csp(need_graph(), need_expr(), opts.limits);
        metadata["ground_truth"] = min_vertex_cover_size(*graph);
    } else if (construction == "boolean") {
        std::variant<Graph, HittingSetInstance> input = [&]() -> std::variant<Graph, HittingSetInstance> {
            if (graph)
                return *graph;
            return need_hs();
        }();
        instance = gen_boolean_csp(input, need_expr(), opts.limits);
        metadata["ground_truth"] = graph ? min_vertex_cover_size(*graph) : min_hitting_set_size(*hs);
    } else if (construction == "single-constraint") {
        std::vector<bool> flags;
        if (!flags_list.empty()) {
            for (int f : parse_index_list(flags_list))
                flags.push_back(f != 0);
        } else {
            flags = single_constraint_flags(need_hs(), need_expr(), opts.limits);
        }
        instance = gen_single_constraint_csp(need_hs(), flags);
        metadata["ground_truth"] = min_hitting_set_size(*hs);
        Json flag_json = Json::array();
        for (bool f : flags)
            flag_json.push_back(f);
        metadata["flags"] = std::move(flag_json);
    } else if (construction == "boolean-uniform") {
        instance = gen_boolean_uniform_csp(need_hs(), need_expr(), opts.limits);
        metadata["ground_truth"] = min_hitting_set_size(*hs);
    } else if (construction == "renaming-chain") {
        NonHellyWitness witness = [&] {
            if (witness_spec.empty() || witness_spec == "auto") {
                WitnessSearchResult found = find_non_helly_witness(need_expr(), 2, 2, 2, opts.limits);
                if (found.resource_limited)
                    throw ResourceLimitError("witness search hit a resource cap");
                if (!found.witness)
                    throw std::invalid_argument("no non-Helly witness found within the default caps");
                return *found.witness;
            }
            return witness_from_json(load_json_file(witness_spec));
        }();
        instance = gen_renaming_chain_csp(need_hs(), witness, need_expr(), opts.limits);
        metadata["ground_truth"] = min_hitting_set_size(*hs);
        metadata["assumptions"] = Json::array({"idempotent", "value_renamable", "domain_decomposable"});
        metadata["witness"] = witness_to_json(witness);
    } else {
        throw std::invalid_argument("unknown construction: " + construction);
    }

    Json j = instance_to_json(*instance);
    j["metadata"] = std::move(metadata);
    if (out_path.empty()) {
        std::cout << j.dump(2) << '\n';
    } else {
        save_json_file(out_path, j);
        emit(opts, Json{{"written", out_path}, {"ground_truth", j["metadata"]["ground_truth"]}},
             "wrote " + out_path + " (ground truth " + j["metadata"]["ground_truth"].dump() + ")");
    }
    return 0;
}

int run_witness(const CommonOptions& opts, const std::string& class_spec, int arity_cap, int domain_cap,
                int size_cap, const std::string& out_path) {
    ClassExprPtr expr = load_class_expr(class_spec);
    WitnessSearchResult result = find_non_helly_witness(*expr, arity_cap, domain_cap, size_cap, opts.limits);
    if (result.resource_limited) {
        std::cerr << "witness search hit a resource cap before finishing\n";
        return 2;
    }
    if (!result.witness) {
        emit(opts, Json{{"found", false}}, "no witness within the caps");
        return 0;
    }
    Json j = witness_to_json(*result.witness);
    if (!out_path.empty())
        save_json_file(out_path, j);
    emit(opts, Json{{"found", true}, {"witness", j}},
         "found witness with " + std::to_string(result.witness->language.size()) + " relations of arity " +
             std::to_string(result.witness->arity));
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"strong-backdoor detection toolkit for finite-domain CSPs"};
    app.require_subcommand(1);

    CommonOptions opts;

    std::string language_path, class_spec, instance_path, backdoor_list, checker = "naive";
    int k = 0, helly_override = 0;
    std::string construction, graph_path, hs_path, random_graph_spec, random_hs_spec, flags_list, witness_spec,
        out_path;
    int arity_cap = 2, domain_cap = 2, size_cap = 2;

    CLI::App* member_cmd = app.add_subcommand("member", "decide language membership in a class");
    member_cmd->add_option("--language", language_path, "language json file")->required();
    member_cmd->add_option("--class", class_spec, "class expression file or inline json")->required();
    add_common_flags(member_cmd, opts);

    CLI::App* check_cmd = app.add_subcommand("check", "verify a candidate strong backdoor");
    check_cmd->add_option("--instance", instance_path, "instance json file")->required();
    check_cmd->add_option("--class", class_spec, "class expression file or inline json")->required();
    check_cmd->add_option("--backdoor", backdoor_list, "comma-separated variable indices")->required();
    check_cmd->add_option("--checker", checker, "naive, factored or both");
    add_common_flags(check_cmd, opts);

    CLI::App* find_cmd = app.add_subcommand("find", "bounded-search-tree backdoor detection");
    find_cmd->add_option("--instance", instance_path, "instance json file")->required();
    find_cmd->add_option("--class", class_spec, "class expression file or inline json")->required();
    find_cmd->add_option("--k", k, "backdoor size budget")->required();
    find_cmd->add_option("--helly-override", helly_override, "asserted Helly bound (marks the result conditional)");
    add_common_flags(find_cmd, opts);

    CLI::App* brute_cmd = app.add_subcommand("find-brute", "exhaustive minimum backdoor search");
    brute_cmd->add_option("--instance", instance_path, "instance json file")->required();
    brute_cmd->add_option("--class", class_spec, "class expression file or inline json")->required();
    brute_cmd->add_option("--k", k, "backdoor size budget")->required();
    add_common_flags(brute_cmd, opts);

    CLI::App* gen_cmd = app.add_subcommand("generate", "emit a labelled reduction instance");
    gen_cmd->add_option("--construction", construction,
                        "vertex-cover | boolean | single-constraint | boolean-uniform | renaming-chain")
        ->required();
    gen_cmd->add_option("--graph", graph_path, "graph json file");
    gen_cmd->add_option("--hitting-set", hs_path, "hitting-set json file");
    gen_cmd->add_option("--random-graph", random_graph_spec, "n,m random graph");
    gen_cmd->add_option("--random-hitting-set", random_hs_spec, "n,p,s random hitting set");
    gen_cmd->add_option("--class", class_spec, "class expression file or inline json");
    gen_cmd->add_option("--flags", flags_list, "injected per-set membership flags (single-constraint)");
    gen_cmd->add_option("--witness", witness_spec, "witness json file or 'auto' (renaming-chain)");
    gen_cmd->add_option("--out", out_path, "output instance file");
    add_common_flags(gen_cmd, opts);

    CLI::App* solve_cmd = app.add_subcommand("solve", "solve through a backdoor decomposition");
    solve_cmd->add_option("--instance", instance_path, "instance json file")->required();
    solve_cmd->add_option("--class", class_spec, "class expression file or inline json")->required();
    solve_cmd->add_option("--backdoor", backdoor_list, "comma-separated variable indices");
    solve_cmd->add_option("--k", k, "budget when searching for the backdoor");
    solve_cmd->add_option("--helly-override", helly_override, "asserted Helly bound for the search");
    add_common_flags(solve_cmd, opts);

    CLI::App* witness_cmd = app.add_subcommand("witness", "search for a non-Helly witness language");
    witness_cmd->add_option("--class", class_spec, "class expression file or inline json")->required();
    witness_cmd->add_option("--arity-cap", arity_cap, "largest relation arity to try");
    witness_cmd->add_option("--domain-cap", domain_cap, "largest domain size to try");
    witness_cmd->add_option("--size-cap", size_cap, "largest witness language size to try");
    witness_cmd->add_option("--out", out_path, "output witness file");
    add_common_flags(witness_cmd, opts);

    CLI11_PARSE(app, argc, argv);

    try {
        if (member_cmd->parsed())
            return run_member(opts, language_path, class_spec);
        if (check_cmd->parsed())
            return run_check(opts, instance_path, class_spec, backdoor_list, checker);
        if (find_cmd->parsed())
            return run_find(opts, instance_path, class_spec, k, helly_override, false);
        if (brute_cmd->parsed())
            return run_find(opts, instance_path, class_spec, k, 0, true);
        if (gen_cmd->parsed())
            return run_generate(opts, construction, graph_path, hs_path, random_graph_spec, random_hs_spec,
                                class_spec, flags_list, witness_spec, out_path);
        if (solve_cmd->parsed())
            return run_solve(opts, instance_path, class_spec, backdoor_list, k, helly_override);
        if (witness_cmd->parsed())
            return run_witness(opts, class_spec, arity_cap, domain_cap, size_cap, out_path);
    } catch (const cspbd::ResourceLimitError& e) {
        std::cerr << "resource cap: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 1;
}
