#include "cspbd/json_io.hpp"

#include <fstream>
#include <stdexcept>

namespace cspbd {

namespace {

std::vector<Tuple> tuples_from_json(const Json& rows, int arity) {
    std::vector<Tuple> tuples;
    for (const Json& row : rows) {
        Tuple t;
        for (const Json& v : row)
            t.push_back(v.get<Value>());
        if (static_cast<int>(t.size()) != arity)
            throw std::invalid_argument("tuple arity mismatch in json input");
        tuples.push_back(std::move(t));
    }
    return tuples;
}

Json tuples_to_json(const Relation& relation) {
    Json rows = Json::array();
    for (const Tuple& t : relation.tuples())
        rows.push_back(t);
    return rows;
}

} // namespace

Json instance_to_json(const CspInstance& instance) {
    Json j;
    j["domain_size"] = instance.domain_size();
    j["num_vars"] = instance.num_vars();
    Json constraints = Json::array();
    for (const Constraint& c : instance.constraints()) {
        Json entry;
        entry["scope"] = c.scope;
        entry["tuples"] = tuples_to_json(c.relation);
        constraints.push_back(std::move(entry));
    }
    j["constraints"] = std::move(constraints);
    return j;
}

CspInstance instance_from_json(const Json& j) {
    const int d = j.at("domain_size").get<int>();
    const int n = j.at("num_vars").get<int>();
    if (n < 1)
        throw std::invalid_argument("instance needs a positive variable count");
    std::vector<Constraint> constraints;
    for (const Json& entry : j.at("constraints")) {
        std::vector<int> scope = entry.at("scope").get<std::vector<int>>();
        const int arity = static_cast<int>(scope.size());
        Relation relation(arity, d, tuples_from_json(entry.at("tuples"), arity));
        constraints.push_back({std::move(scope), std::move(relation)});
    }
    return CspInstance(n, d, std::move(constraints));
}

Json language_to_json(const Language& language) {
    Json j;
    j["domain_size"] = language.domain_size();
    Json relations = Json::array();
    for (const Relation& r : language.relations()) {
        Json entry;
        entry["arity"] = r.arity();
        entry["tuples"] = tuples_to_json(r);
        relations.push_back(std::move(entry));
    }
    j["relations"] = std::move(relations);
    return j;
}

Language language_from_json(const Json& j) {
    const int d = j.at("domain_size").get<int>();
    std::vector<Relation> relations;
    for (const Json& entry : j.at("relations")) {
        const int arity = entry.at("arity").get<int>();
        relations.push_back(Relation(arity, d, tuples_from_json(entry.at("tuples"), arity)));
    }
    return Language(d, std::move(relations));
}

Json operation_to_json(const OperationTable& op) {
    Json j;
    j["arity"] = op.arity();
    j["domain_size"] = op.domain_size();
    j["table"] = op.cells();
    return j;
}

OperationTable operation_from_json(const Json& j) {
    return OperationTable(j.at("arity").get<int>(), j.at("domain_size").get<int>(),
                          j.at("table").get<std::vector<Value>>());
}

Json set_function_to_json(const SetFunction& f) {
    Json j;
    j["domain_size"] = f.domain_size();
    Json sets = Json::array();
    for (const auto& [mask, value] : f.pinned()) {
        Json entry;
        std::vector<Value> members;
        for (int bit = 0; bit < 64; ++bit)
            if (mask >> bit & 1)
                members.push_back(bit);
        entry["set"] = members;
        entry["value"] = value;
        sets.push_back(std::move(entry));
    }
    j["sets"] = std::move(sets);
    j["default"] = "min";
    return j;
}

Json class_expr_to_json(const ClassExpr& expr) {
    if (const auto* fixed = std::get_if<AtomicFixedNode>(&expr.node)) {
        Json j;
        if (const BuiltinOp* op = std::get_if<BuiltinOp>(&fixed->op))
            j["atomic"] = builtin_name(*op);
        else
            j["atomic_table"] = operation_to_json(std::get<OperationTable>(fixed->op));
        return j;
    }
    if (const auto* family = std::get_if<AtomicFamilyNode>(&expr.node)) {
        Json j;
        switch (family->family.kind) {
        case IdentityFamily::Kind::Semilattice:
            j["family"] = "semilattice";
            break;
        case IdentityFamily::Kind::Majority:
            j["family"] = "majority";
            break;
        case IdentityFamily::Kind::NearUnanimity:
            j["family"] = "near_unanimity";
            j["arity"] = family->family.nu_arity;
            break;
        case IdentityFamily::Kind::Maltsev:
            j["family"] = "maltsev";
            break;
        case IdentityFamily::Kind::TsiAllArities:
            j["family"] = "tsi_all_arities";
            break;
        }
        return j;
    }
    auto children_json = [](const std::vector<ClassExprPtr>& children) {
        Json arr = Json::array();
        for (const ClassExprPtr& child : children)
            arr.push_back(class_expr_to_json(*child));
        return arr;
    };
    if (const auto* node = std::get_if<IntersectNode>(&expr.node))
        return Json{{"intersect", children_json(node->children)}};
    if (const auto* node = std::get_if<UnionNode>(&expr.node))
        return Json{{"union", children_json(node->children)}};
    const auto& node = std::get<AllButHNode>(expr.node);
    Json inner;
    inner["h"] = node.h;
    inner["classes"] = children_json(node.children);
    return Json{{"all_but_h", std::move(inner)}};
}

ClassExprPtr class_expr_from_json(const Json& j) {
    if (j.contains("atomic")) {
        const std::string name = j.at("atomic").get<std::string>();
        if (name == "max")
            return make_atomic(BuiltinOp::Max);
        if (name == "min")
            return make_atomic(BuiltinOp::Min);
        if (name == "dual_discriminator")
            return make_atomic(BuiltinOp::DualDiscriminator);
        throw std::invalid_argument("unknown named operation: " + name);
    }
    if (j.contains("atomic_table"))
        return make_atomic(operation_from_json(j.at("atomic_table")));
    if (j.contains("family")) {
        const std::string name = j.at("family").get<std::string>();
        if (name == "semilattice")
            return make_family(IdentityFamily::semilattice());
        if (name == "majority")
            return make_family(IdentityFamily::majority());
        if (name == "near_unanimity")
            return make_family(IdentityFamily::near_unanimity(j.at("arity").get<int>()));
        if (name == "maltsev")
            return make_family(IdentityFamily::maltsev());
        if (name == "tsi_all_arities")
            return make_family(IdentityFamily::tsi_all_arities());
        throw std::invalid_argument("unknown family: " + name);
    }
    auto children_from = [](const Json& arr) {
        std::vector<ClassExprPtr> children;
        for (const Json& child : arr)
            children.push_back(class_expr_from_json(child));
        return children;
    };
    if (j.contains("intersect"))
        return make_intersect(children_from(j.at("intersect")));
    if (j.contains("union"))
        return make_union(children_from(j.at("union")));
    if (j.contains("all_but_h")) {
        const Json& inner = j.at("all_but_h");
        return make_all_but_h(inner.at("h").get<int>(), children_from(inner.at("classes")));
    }
    throw std::invalid_argument("unrecognized class expression");
}

Json graph_to_json(const Graph& graph) {
    Json j;
    j["num_vertices"] = graph.num_vertices;
    Json edges = Json::array();
    for (const auto& [a, b] : graph.edges)
        edges.push_back(Json::array({a, b}));
    j["edges"] = std::move(edges);
    return j;
}

Graph graph_from_json(const Json& j) {
    std::vector<std::pair<int, int>> edges;
    for (const Json& e : j.at("edges"))
        edges.emplace_back(e.at(0).get<int>(), e.at(1).get<int>());
    return Graph(j.at("num_vertices").get<int>(), std::move(edges));
}

Json hitting_set_to_json(const HittingSetInstance& instance) {
    Json j;
    j["universe"] = instance.universe;
    j["p"] = instance.p;
    j["sets"] = instance.sets;
    return j;
}

HittingSetInstance hitting_set_from_json(const Json& j) {
    return HittingSetInstance(j.at("universe").get<int>(), j.at("p").get<int>(),
                              j.at("sets").get<std::vector<std::vector<int>>>());
}

Json witness_to_json(const NonHellyWitness& witness) {
    Json j = language_to_json(witness.language);
    j["arity"] = witness.arity;
    return j;
}

NonHellyWitness witness_from_json(const Json& j) {
    return make_non_helly_witness(language_from_json(j));
}

Json detection_report(bool found, const std::optional<std::vector<int>>& backdoor, const DetectStats& stats,
                      const std::string& mode) {
    Json j;
    j["found"] = found;
    j["backdoor"] = backdoor ? Json(*backdoor) : Json::array();
    j["nodes_expanded"] = stats.nodes_expanded;
    j["membership_tests"] = stats.membership_tests;
    j["mode"] = mode;
    return j;
}

Json load_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in)
        throw std::invalid_argument("cannot open file: " + path);
    Json j;
    in >> j;
    return j;
}

void save_json_file(const std::string& path, const Json& j) {
    std::ofstream out(path);
    if (!out)
        throw std::invalid_argument("cannot write file: " + path);
    out << j.dump(2) << '\n';
}

} // namespace cspbd
