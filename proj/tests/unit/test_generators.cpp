#include "helpers.hpp"

#include "cspbd/backdoor.hpp"
#include "cspbd/generators.hpp"
#include "cspbd/set_function.hpp"

#include <doctest.h>

#include <set>
#include <stdexcept>

using namespace cspbd;
using testutil::rel;

namespace {

ClassExprPtr max_class() { return make_atomic(BuiltinOp::Max); }

ClassExprPtr tsi_class() { return make_family(IdentityFamily::tsi_all_arities()); }

Relation r1_fixture() { return rel(2, 2, {{0, 0}, {0, 1}, {1, 0}}); }
Relation r2_fixture() { return rel(2, 2, {{1, 1}, {0, 1}, {1, 0}}); }

int min_backdoor_size(const CspInstance& instance, const ClassExpr& expr, const Limits& limits) {
    auto found = find_backdoor_bruteforce(instance, expr, instance.num_vars(), limits);
    REQUIRE(found.has_value());
    return static_cast<int>(found->size());
}

} // namespace

TEST_CASE("hitting set padding") {
    HittingSetInstance hs(4, 2, {{0, 1}, {2, 3}});
    HittingSetInstance padded = pad_hitting_set(hs, 3);
    CHECK(padded.p == 3);
    CHECK(padded.universe == 6);
    CHECK(padded.sets[0] == std::vector<int>{0, 1, 4});
    CHECK(padded.sets[1] == std::vector<int>{2, 3, 5});
    CHECK(min_hitting_set_size(hs) == min_hitting_set_size(padded));

    CHECK_THROWS_AS(pad_hitting_set(hs, 1), std::invalid_argument);
}

TEST_CASE("cover and hitting oracles") {
    Graph triangle(3, {{0, 1}, {1, 2}, {0, 2}});
    CHECK_FALSE(solve_vertex_cover(triangle, 1).has_value());
    auto cover = solve_vertex_cover(triangle, 2);
    REQUIRE(cover.has_value());
    CHECK(*cover == std::vector<int>{0, 1});

    CHECK(solve_vertex_cover(Graph(4, {}), 0)->empty());

    HittingSetInstance reference(7, 3, {{2, 3, 4}, {1, 4, 5}, {0, 2, 6}});
    CHECK_FALSE(solve_hitting_set(reference, 1).has_value());
    auto hit = solve_hitting_set(reference, 2);
    REQUIRE(hit.has_value());
    CHECK(hit->size() == 2);
    // Lexicographically first among the size-2 hitting sets.
    CHECK(*hit == std::vector<int>{0, 4});
    CHECK(min_hitting_set_size(reference) == 2);
}

TEST_CASE("vertex-cover construction") {
    Limits limits;
    Graph triangle(3, {{0, 1}, {1, 2}, {0, 2}});
    CspInstance instance = gen_vertex_cover_csp(triangle, *max_class(), limits);
    CHECK(instance.domain_size() == 4);
    CHECK(instance.constraints().size() == 3); // the unary pairs are max-closed, so inequality edges
    CHECK(instance.constraints()[0].relation.tuple_count() == 6);

    CHECK(min_backdoor_size(instance, *max_class(), limits) == 2);

    Graph single(2, {{0, 1}});
    CHECK(min_backdoor_size(gen_vertex_cover_csp(single, *max_class(), limits), *max_class(), limits) == 1);

    Graph edgeless(3, {});
    CHECK(min_backdoor_size(gen_vertex_cover_csp(edgeless, *max_class(), limits), *max_class(), limits) == 0);

    ClassExprPtr constant = make_atomic(OperationTable(2, 2, {0, 0, 0, 0}));
    CHECK_THROWS_AS(gen_vertex_cover_csp(triangle, *constant, limits), std::invalid_argument);
}

TEST_CASE("vertex-cover construction falls back to the binary extensions") {
    // An idempotent table that maps the pair {1,2} outside itself: the unary
    // two-value relations are not all members, so edges carry the three
    // extension relations.
    Limits limits;
    std::vector<Value> cells;
    for (Value x = 0; x < 4; ++x)
        for (Value y = 0; y < 4; ++y) {
            Value out = std::min(x, y);
            if ((x == 1 && y == 2) || (x == 2 && y == 1))
                out = 3;
            cells.push_back(x == y ? x : out);
        }
    ClassExprPtr weird = make_atomic(OperationTable(2, 4, std::move(cells)));
    REQUIRE(is_idempotent_class(*weird));

    Graph single(2, {{0, 1}});
    CspInstance instance = gen_vertex_cover_csp(single, *weird, limits);
    CHECK(instance.constraints().size() == 3);
    CHECK(instance.constraints()[0].relation == rel(2, 4, {{1, 1}, {2, 2}}));

    // A single edge keeps residual languages on one value, so the optimum
    // matches the cover. Larger graphs mix singleton residuals over several
    // values, which needs pairwise closure that this table lacks; the
    // labelled optimum is guaranteed for the conservative named operations.
    CHECK(min_backdoor_size(instance, *weird, limits) == 1);
}

TEST_CASE("boolean construction, hitting-set case") {
    Limits limits;
    // The dual discriminator is a Boolean majority operation, so every
    // Boolean language of arity <= 2 is a member.
    ClassExprPtr cls = make_atomic(BuiltinOp::DualDiscriminator);
    HittingSetInstance hs(3, 3, {{0, 1, 2}});
    CspInstance instance = gen_boolean_csp(hs, *cls, limits);
    CHECK(instance.domain_size() == 2);
    REQUIRE(instance.constraints().size() == 1);
    // The single-flip relation is majority-closed, so the one-in-three gadget
    // is used.
    CHECK(instance.constraints()[0].relation == rel(3, 2, {{1, 0, 0}, {0, 1, 0}, {0, 0, 1}}));
    CHECK(min_backdoor_size(instance, *cls, limits) == 1);

    CHECK(min_backdoor_size(gen_boolean_csp(HittingSetInstance(3, 3, {}), *cls, limits), *cls, limits) == 0);

    // A graph input is rejected in this case.
    CHECK_THROWS_AS(gen_boolean_csp(Graph(2, {{0, 1}}), *cls, limits), std::invalid_argument);
}

TEST_CASE("boolean construction, vertex-cover case") {
    Limits limits;
    // min keeps the single-tuple binary language but breaks the inequality
    // relation, so the full Boolean language goes on every edge.
    ClassExprPtr cls = make_atomic(BuiltinOp::Min);
    Graph single(2, {{0, 1}});
    CspInstance instance = gen_boolean_csp(single, *cls, limits);
    CHECK(instance.domain_size() == 2);
    CHECK(min_backdoor_size(instance, *cls, limits) == 1);

    Graph triangle(3, {{0, 1}, {1, 2}, {0, 2}});
    CHECK(min_backdoor_size(gen_boolean_csp(triangle, *cls, limits), *cls, limits) == 2);

    CHECK_THROWS_AS(gen_boolean_csp(HittingSetInstance(3, 3, {{0, 1, 2}}), *cls, limits), std::invalid_argument);
}

TEST_CASE("boolean construction with a class missing the single-tuple language") {
    Limits limits;
    // Idempotent, but f(0,1) escapes {0,1}: the single-tuple binary language
    // is not a member, so each edge carries just that relation.
    std::vector<Value> cells = {0, 2, 0, 0, 1, 0, 0, 0, 2};
    ClassExprPtr cls = make_atomic(OperationTable(2, 3, std::move(cells)));
    REQUIRE(is_idempotent_class(*cls));

    Graph single(2, {{0, 1}});
    CspInstance instance = gen_boolean_csp(single, *cls, limits);
    REQUIRE(instance.constraints().size() == 1);
    CHECK(instance.constraints()[0].relation == rel(2, 2, {{0, 1}}));
    CHECK(min_backdoor_size(instance, *cls, limits) == 1);
}

TEST_CASE("single-constraint construction reproduces the reference relation") {
    HittingSetInstance hs(7, 3, {{2, 3, 4}, {1, 4, 5}, {0, 2, 6}});
    CspInstance instance = gen_single_constraint_csp(hs, {true, false, false});
    CHECK(instance.num_vars() == 7);
    CHECK(instance.domain_size() == 8);
    REQUIRE(instance.constraints().size() == 1);
    CHECK(instance.constraints()[0].scope == std::vector<int>{0, 1, 2, 3, 4, 5, 6});

    Relation expected(7, 8,
                      {{2, 2, 3, 2, 2, 2, 2},
                       {2, 2, 2, 3, 2, 2, 2},
                       {2, 2, 2, 2, 3, 2, 2},
                       {4, 5, 4, 4, 4, 4, 4},
                       {4, 4, 4, 4, 5, 5, 4},
                       {7, 6, 6, 6, 6, 6, 6},
                       {6, 6, 7, 6, 6, 6, 7}});
    CHECK(instance.constraints()[0].relation == expected);
    CHECK(residual_language(instance) == Language(8, {expected}));
}

TEST_CASE("single-constraint construction basics") {
    Limits limits;
    HittingSetInstance one(3, 3, {{0, 1, 2}});
    CspInstance instance = gen_single_constraint_csp(one, {false});
    REQUIRE(instance.constraints().size() == 1);
    CHECK(instance.constraints()[0].relation.tuple_count() == 2);
    CHECK(min_backdoor_size(instance, *max_class(), limits) == 1);

    CHECK(gen_single_constraint_csp(HittingSetInstance(3, 3, {}), {}).constraints().empty());
    CHECK_THROWS_AS(gen_single_constraint_csp(one, {}), std::invalid_argument);

    // Computed flags for max: the two-value gadget is never max-closed.
    CHECK(single_constraint_flags(one, *max_class(), limits) == std::vector<bool>{false});

    // Blocks of different sets share no values.
    HittingSetInstance hs(5, 3, {{0, 1, 2}, {2, 3, 4}});
    CspInstance two = gen_single_constraint_csp(hs, {false, true});
    const Relation& r = two.constraints()[0].relation;
    std::set<Value> first_block, second_block;
    for (int i = 0; i < r.tuple_count(); ++i) {
        auto row = r.row(i);
        std::set<Value>& target = (row[0] >= 4) ? second_block : first_block;
        for (Value v : row)
            target.insert(v);
    }
    for (Value v : first_block)
        CHECK_FALSE(second_block.count(v));
}

TEST_CASE("boolean uniform construction") {
    Limits limits;
    HittingSetInstance hs(4, 3, {{0, 1, 2}, {1, 2, 3}});
    CspInstance instance = gen_boolean_uniform_csp(hs, *max_class(), limits);
    CHECK(instance.domain_size() == 2);
    REQUIRE(instance.constraints().size() == 2);
    // Every constraint is the same two-row gadget for max.
    CHECK(instance.constraints()[0].relation == gadget_relation(GadgetKind::TwoRow, 3, 0));
    CHECK(instance.constraints()[0].relation == instance.constraints()[1].relation);

    CHECK(min_backdoor_size(instance, *max_class(), limits) == min_hitting_set_size(hs));
    CHECK(gen_boolean_uniform_csp(HittingSetInstance(4, 3, {}), *max_class(), limits).constraints().empty());
}

TEST_CASE("non-Helly witness validation") {
    Limits limits;
    Language good(2, {r1_fixture(), r2_fixture()});
    NonHellyWitness witness = make_non_helly_witness(good);
    CHECK(validate_non_helly_witness(witness, *tsi_class(), limits));
    CHECK_FALSE(validate_non_helly_witness(witness, *max_class(), limits));

    CHECK_THROWS_AS(make_non_helly_witness(Language(2, {r1_fixture()})), std::invalid_argument);
    CHECK_THROWS_AS(make_non_helly_witness(Language(2, {r1_fixture(), rel(1, 2, {{0}})})), std::invalid_argument);
}

TEST_CASE("witness search") {
    Limits limits;

    WitnessSearchResult tsi = find_non_helly_witness(*tsi_class(), 2, 2, 2, limits);
    REQUIRE(tsi.witness.has_value());
    CHECK(tsi.witness->arity == 2);
    CHECK(tsi.witness->language == Language(2, {r1_fixture(), r2_fixture()}));

    WitnessSearchResult none = find_non_helly_witness(*max_class(), 2, 2, 2, limits);
    CHECK_FALSE(none.witness.has_value());
    CHECK_FALSE(none.resource_limited);

    ClassExprPtr min_max = make_union({make_atomic(BuiltinOp::Max), make_atomic(BuiltinOp::Min)});
    WitnessSearchResult pair = find_non_helly_witness(*min_max, 2, 2, 2, limits);
    REQUIRE(pair.witness.has_value());
    CHECK(pair.witness->language.size() == 2);
    CHECK(validate_non_helly_witness(*pair.witness, *min_max, limits));

    Limits tiny;
    tiny.witness_language_budget = 3;
    CHECK(find_non_helly_witness(*tsi_class(), 2, 2, 2, tiny).resource_limited);
}

TEST_CASE("renaming-chain construction layout") {
    Limits limits;
    HittingSetInstance hs(7, 3, {{1, 3, 4}, {0, 3, 5}});
    NonHellyWitness witness = make_non_helly_witness(Language(2, {r1_fixture(), r2_fixture()}));
    CspInstance instance = gen_renaming_chain_csp(hs, witness, *tsi_class(), limits);

    // 7 element variables plus 2*r*s auxiliaries.
    CHECK(instance.num_vars() == 7 + 2 * 2 * 2);
    // Per set: p+1 chain links, one first-relation copy, one remaining copy.
    CHECK(instance.constraints().size() == 2 * ((3 + 1) + 1 + 1));
    // Fresh domains: s * (p+2) blocks of the witness's two values.
    CHECK(instance.domain_size() == 2 * 5 * 2);

    // Auxiliary value blocks of different sets are disjoint.
    std::set<Value> per_set[2];
    for (const Constraint& c : instance.constraints()) {
        std::set<Value> values;
        for (Value v : c.relation.occurring_values())
            values.insert(v);
        int block = *values.begin() / 10; // 10 values per set
        for (Value v : values) {
            CHECK(v / 10 == block);
            per_set[block].insert(v);
        }
    }
    CHECK(per_set[0].size() > 0);
    CHECK(per_set[1].size() > 0);

    // Renaming the witness into a fresh block keeps it a non-member.
    CHECK_THROWS_AS(
        gen_renaming_chain_csp(hs, make_non_helly_witness(Language(2, {r1_fixture(), rel(2, 2, {{0, 0}, {1, 1}})})),
                               *tsi_class(), limits),
        std::invalid_argument);

    CHECK(gen_renaming_chain_csp(HittingSetInstance(4, 3, {}), witness, *tsi_class(), limits).num_vars() == 4);
}

TEST_CASE("renaming-chain minimum backdoor equals the hitting-set optimum") {
    Limits limits;
    limits.tsi_domain_cap = 64;

    HittingSetInstance hs(4, 3, {{0, 1, 2}, {1, 2, 3}});
    NonHellyWitness witness = make_non_helly_witness(Language(2, {r1_fixture(), r2_fixture()}));
    CspInstance instance = gen_renaming_chain_csp(hs, witness, *tsi_class(), limits);

    int optimum = min_hitting_set_size(hs);
    CHECK(optimum == 1);
    auto found = find_backdoor_bruteforce(instance, *tsi_class(), instance.num_vars(), limits);
    REQUIRE(found.has_value());
    CHECK(static_cast<int>(found->size()) == optimum);
}
