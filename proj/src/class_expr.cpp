#include "cspbd/class_expr.hpp"

#include <algorithm>
#include <exception>
#include <stdexcept>

namespace cspbd {

ClassExprPtr make_atomic(BuiltinOp op) {
    return std::make_shared<const ClassExpr>(ClassExpr{AtomicFixedNode{op}});
}

ClassExprPtr make_atomic(OperationTable table) {
    if (table.domain_size() < 1)
        throw std::invalid_argument("fixed operation table needs a nonempty domain");
    return std::make_shared<const ClassExpr>(ClassExpr{AtomicFixedNode{std::move(table)}});
}

ClassExprPtr make_family(IdentityFamily family) {
    return std::make_shared<const ClassExpr>(ClassExpr{AtomicFamilyNode{family}});
}

ClassExprPtr make_intersect(std::vector<ClassExprPtr> children) {
    if (children.empty())
        throw std::invalid_argument("intersection needs at least one class");
    return std::make_shared<const ClassExpr>(ClassExpr{IntersectNode{std::move(children)}});
}

ClassExprPtr make_union(std::vector<ClassExprPtr> children) {
    if (children.empty())
        throw std::invalid_argument("union needs at least one class");
    return std::make_shared<const ClassExpr>(ClassExpr{UnionNode{std::move(children)}});
}

ClassExprPtr make_all_but_h(int h, std::vector<ClassExprPtr> children) {
    if (h < 1)
        throw std::invalid_argument("all-but-h needs h >= 1");
    for (const ClassExprPtr& child : children)
        if (!is_simple(*child))
            throw std::invalid_argument("all-but-h children must be simple classes");
    return std::make_shared<const ClassExpr>(ClassExpr{AllButHNode{h, std::move(children)}});
}

bool expr_equal(const ClassExpr& a, const ClassExpr& b) {
    if (a.node.index() != b.node.index())
        return false;
    if (const auto* fa = std::get_if<AtomicFixedNode>(&a.node)) {
        const auto& fb = std::get<AtomicFixedNode>(b.node);
        return fa->op == fb.op;
    }
    if (const auto* ma = std::get_if<AtomicFamilyNode>(&a.node)) {
        const auto& mb = std::get<AtomicFamilyNode>(b.node);
        return ma->family == mb.family;
    }
    auto children_equal = [](const std::vector<ClassExprPtr>& xs, const std::vector<ClassExprPtr>& ys) {
        if (xs.size() != ys.size())
            return false;
        for (std::size_t i = 0; i < xs.size(); ++i)
            if (!expr_equal(*xs[i], *ys[i]))
                return false;
        return true;
    };
    if (const auto* ia = std::get_if<IntersectNode>(&a.node))
        return children_equal(ia->children, std::get<IntersectNode>(b.node).children);
    if (const auto* ua = std::get_if<UnionNode>(&a.node))
        return children_equal(ua->children, std::get<UnionNode>(b.node).children);
    const auto& ha = std::get<AllButHNode>(a.node);
    const auto& hb = std::get<AllButHNode>(b.node);
    return ha.h == hb.h && children_equal(ha.children, hb.children);
}

bool is_simple(const ClassExpr& expr) {
    if (std::holds_alternative<AtomicFixedNode>(expr.node))
        return true;
    if (const auto* node = std::get_if<IntersectNode>(&expr.node)) {
        for (const ClassExprPtr& child : node->children)
            if (!is_simple(*child))
                return false;
        return true;
    }
    return false;
}

std::string expr_label(const ClassExpr& expr) {
    if (const auto* fixed = std::get_if<AtomicFixedNode>(&expr.node)) {
        if (const BuiltinOp* op = std::get_if<BuiltinOp>(&fixed->op))
            return builtin_name(*op);
        return "table";
    }
    if (const auto* family = std::get_if<AtomicFamilyNode>(&expr.node))
        return family->family.name();
    if (std::holds_alternative<IntersectNode>(expr.node))
        return "intersect";
    if (std::holds_alternative<UnionNode>(expr.node))
        return "union";
    return "all_but_h";
}

namespace {

bool eval_atomic_fixed(const AtomicFixedNode& node, const Language& language, std::vector<Witness>* evidence) {
    std::vector<Value> active = active_domain(language);
    const int needed = active.empty() ? 1 : active.back() + 1;

    OperationTable op = [&] {
        if (const BuiltinOp* builtin = std::get_if<BuiltinOp>(&node.op))
            return materialize_builtin(*builtin, needed);
        const OperationTable& table = std::get<OperationTable>(node.op);
        if (needed > table.domain_size())
            throw std::invalid_argument("language domain exceeds the fixed operation table");
        return table;
    }();

    bool ok = preserves_language(op, language);
    if (ok && evidence) {
        std::string source = std::holds_alternative<BuiltinOp>(node.op) ? builtin_name(std::get<BuiltinOp>(node.op))
                                                                        : std::string("table");
        evidence->push_back({std::move(source), std::move(op)});
    }
    return ok;
}

bool eval_family(const AtomicFamilyNode& node, const Language& language, const Limits& limits,
                 std::vector<Witness>* evidence) {
    if (node.family.kind == IdentityFamily::Kind::TsiAllArities) {
        std::optional<SetFunction> witness = tsi_member(language, limits);
        if (!witness)
            return false;
        if (evidence)
            evidence->push_back({node.family.name(), std::move(*witness)});
        return true;
    }
    std::optional<OperationTable> witness = search_polymorphism(language, node.family, limits);
    if (!witness)
        return false;
    if (evidence)
        evidence->push_back({node.family.name(), std::move(*witness)});
    return true;
}

bool eval_expr(const ClassExpr& expr, const Language& language, const Limits& limits,
               std::vector<Witness>* evidence);

bool eval_intersect(const IntersectNode& node, const Language& language, const Limits& limits,
                    std::vector<Witness>* evidence) {
    std::exception_ptr pending;
    std::vector<Witness> collected;
    for (const ClassExprPtr& child : node.children) {
        try {
            if (!eval_expr(*child, language, limits, evidence ? &collected : nullptr))
                return false;
        } catch (const ResourceLimitError&) {
            if (!pending)
                pending = std::current_exception();
        }
    }
    if (pending)
        std::rethrow_exception(pending);
    if (evidence)
        evidence->insert(evidence->end(), collected.begin(), collected.end());
    return true;
}

bool eval_union(const UnionNode& node, const Language& language, const Limits& limits,
                std::vector<Witness>* evidence) {
    std::exception_ptr pending;
    for (const ClassExprPtr& child : node.children) {
        try {
            if (eval_expr(*child, language, limits, evidence))
                return true;
        } catch (const ResourceLimitError&) {
            if (!pending)
                pending = std::current_exception();
        }
    }
    if (pending)
        std::rethrow_exception(pending);
    return false;
}

bool eval_all_but_h(const AllButHNode& node, const Language& language, const Limits& limits,
                    std::vector<Witness>* evidence) {
    std::exception_ptr pending;
    int non_members = 0;
    std::vector<Witness> collected;
    for (const ClassExprPtr& child : node.children) {
        try {
            if (!eval_expr(*child, language, limits, evidence ? &collected : nullptr))
                ++non_members;
        } catch (const ResourceLimitError&) {
            if (!pending)
                pending = std::current_exception();
        }
        if (non_members > node.h)
            return false;
    }
    if (pending)
        std::rethrow_exception(pending);
    if (evidence)
        evidence->insert(evidence->end(), collected.begin(), collected.end());
    return true;
}

bool eval_expr(const ClassExpr& expr, const Language& language, const Limits& limits,
               std::vector<Witness>* evidence) {
    return std::visit(
        [&](const auto& node) -> bool {
            using T = std::decay_t<decltype(node)>;
            if constexpr (std::is_same_v<T, AtomicFixedNode>)
                return eval_atomic_fixed(node, language, evidence);
            else if constexpr (std::is_same_v<T, AtomicFamilyNode>)
                return eval_family(node, language, limits, evidence);
            else if constexpr (std::is_same_v<T, IntersectNode>)
                return eval_intersect(node, language, limits, evidence);
            else if constexpr (std::is_same_v<T, UnionNode>)
                return eval_union(node, language, limits, evidence);
            else
                return eval_all_but_h(node, language, limits, evidence);
        },
        expr.node);
}

bool contains_family(const ClassExpr& expr) {
    return std::visit(
        [](const auto& node) -> bool {
            using T = std::decay_t<decltype(node)>;
            if constexpr (std::is_same_v<T, AtomicFamilyNode>)
                return true;
            else if constexpr (std::is_same_v<T, AtomicFixedNode>)
                return false;
            else {
                for (const ClassExprPtr& child : node.children)
                    if (contains_family(*child))
                        return true;
                return false;
            }
        },
        expr.node);
}

void flatten_union(const ClassExpr& expr, std::vector<const ClassExpr*>& out) {
    if (const auto* node = std::get_if<UnionNode>(&expr.node)) {
        for (const ClassExprPtr& child : node->children)
            flatten_union(*child, out);
    } else {
        out.push_back(&expr);
    }
}

} // namespace

ClassReport member(const ClassExpr& expr, const Language& language, const Limits& limits) {
    ClassReport report;
    report.helly_bound = helly_bound(expr);
    report.idempotent_class = is_idempotent_class(expr);
    report.member = eval_expr(expr, language, limits, &report.evidence);
    if (!report.member)
        report.evidence.clear();
    return report;
}

bool member_bool(const ClassExpr& expr, const Language& language, const Limits& limits) {
    return eval_expr(expr, language, limits, nullptr);
}

std::optional<int> helly_bound(const ClassExpr& expr) {
    if (contains_family(expr))
        return std::nullopt;
    if (is_simple(expr))
        return 1;
    if (std::holds_alternative<UnionNode>(expr.node)) {
        std::vector<const ClassExpr*> parts;
        flatten_union(expr, parts);
        std::vector<const ClassExpr*> distinct;
        for (const ClassExpr* part : parts) {
            if (!is_simple(*part))
                return std::nullopt;
            bool dup = false;
            for (const ClassExpr* seen : distinct)
                if (expr_equal(*seen, *part)) {
                    dup = true;
                    break;
                }
            if (!dup)
                distinct.push_back(part);
        }
        return static_cast<int>(distinct.size());
    }
    if (const auto* node = std::get_if<AllButHNode>(&expr.node))
        return node->h + 1;
    return std::nullopt;
}

bool is_idempotent_class(const ClassExpr& expr) {
    return std::visit(
        [](const auto& node) -> bool {
            using T = std::decay_t<decltype(node)>;
            if constexpr (std::is_same_v<T, AtomicFixedNode>) {
                if (std::holds_alternative<BuiltinOp>(node.op))
                    return true; // max, min and the dual discriminator are conservative
                return is_idempotent(std::get<OperationTable>(node.op));
            } else if constexpr (std::is_same_v<T, AtomicFamilyNode>) {
                return true; // every menu family includes f(x,...,x) = x
            } else {
                for (const ClassExprPtr& child : node.children)
                    if (!is_idempotent_class(*child))
                        return false;
                return true;
            }
        },
        expr.node);
}

} // namespace cspbd
