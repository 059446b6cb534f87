#include <catch2/catch_amalgamated.hpp>

#include <fsmviz/subset.hpp>

#include "support/fixtures.hpp"
#include "support/oracles.hpp"
#include "support/random_nfa.hpp"

using namespace fsmviz;
using namespace fsmviz::testing;

namespace {

std::set<State> as_set(const SuperState& ss)
{
    return {ss.begin(), ss.end()};
}

} // namespace

TEST_CASE("compute_empties_tbl", "[subset]")
{
    auto nd_tbl = compute_empties_tbl(nd());
    CHECK(nd_tbl.entries == std::vector<std::pair<State, SuperState>>{{"S", {"S"}},
                                                                      {"A", {"A"}},
                                                                      {"B", {"B"}},
                                                                      {"C", {"C"}},
                                                                      {"D", {"D", "S"}},
                                                                      {"E", {"E", "S"}}});

    auto ab_tbl = compute_empties_tbl(aa_ab());
    CHECK(ab_tbl.closure_of("S") == SuperState{"F", "S"});
    CHECK(ab_tbl.closure_of("A") == SuperState{"A"});
    CHECK(ab_tbl.closure_of("B") == SuperState{"B"});
    CHECK(ab_tbl.closure_of("F") == SuperState{"F"});

    auto eps_free = make_ndfa({"S", "A"}, {'a'}, "S", {"A"}, {{"S", 'a', "A"}});
    for (const auto& [q, c] : compute_empties_tbl(eps_free).entries)
        CHECK(c == SuperState{q});
}

TEST_CASE("find_reachables and get_reachable", "[subset]")
{
    const auto m = nd();
    const auto empties = compute_empties_tbl(m);

    auto from_s = find_reachables({"S"}, m.sigma(), m.rules(), empties);
    CHECK(from_s == ReachableMatrix{{{"A", "B"}, {}}});

    auto from_ab = find_reachables({"A", "B"}, m.sigma(), m.rules(), empties);
    CHECK(from_ab == ReachableMatrix{{{}, {"C"}}, {{}, {"D", "S"}}});
    CHECK(get_reachable(0, from_ab) == SuperState{});
    CHECK(get_reachable(1, from_ab) == SuperState{"C", "D", "S"});
    CHECK_THROWS_AS(get_reachable(2, from_ab), std::out_of_range);

    auto from_dead = find_reachables({}, m.sigma(), m.rules(), empties);
    CHECK(from_dead.empty());
    CHECK(get_reachable(0, from_dead) == SuperState{});
    CHECK(get_reachable(7, from_dead) == SuperState{});
}

TEST_CASE("compute_ss_dfa_rules follows breadth-first discovery order", "[subset]")
{
    // Hand-run queue: [(S)] -> [(A B) ()] -> [() (C D S)] -> [(C D S)] -> [(A B E S)]
    CHECK(compute_ss_dfa_rules(nd()) == std::vector<SsRule>{
                                            {{"S"}, 'a', {"A", "B"}},
                                            {{"S"}, 'b', {}},
                                            {{"A", "B"}, 'a', {}},
                                            {{"A", "B"}, 'b', {"C", "D", "S"}},
                                            {{}, 'a', {}},
                                            {{}, 'b', {}},
                                            {{"C", "D", "S"}, 'a', {"A", "B", "E", "S"}},
                                            {{"C", "D", "S"}, 'b', {}},
                                            {{"A", "B", "E", "S"}, 'a', {"A", "B"}},
                                            {{"A", "B", "E", "S"}, 'b', {"C", "D", "S"}},
                                        });

    // Hand-run queue: [(F S)] -> [(A B) ()] -> [() (A) (B)] -> [(A) (B)] -> [(B)]
    CHECK(compute_ss_dfa_rules(aa_ab()) == std::vector<SsRule>{
                                               {{"F", "S"}, 'a', {"A", "B"}},
                                               {{"F", "S"}, 'b', {}},
                                               {{"A", "B"}, 'a', {"A"}},
                                               {{"A", "B"}, 'b', {"B"}},
                                               {{}, 'a', {}},
                                               {{}, 'b', {}},
                                               {{"A"}, 'a', {"A"}},
                                               {{"A"}, 'b', {}},
                                               {{"B"}, 'a', {}},
                                               {{"B"}, 'b', {"B"}},
                                           });
}

TEST_CASE("compute_ss_name_tbl", "[subset]")
{
    auto t = compute_ss_name_tbl({{"S"}, {"A", "B"}, {}, {"C", "D", "S"}});
    CHECK(t.entries == std::vector<std::pair<SuperState, State>>{
                           {{"S"}, "Q0"}, {{"A", "B"}, "Q1"}, {{}, "ds"}, {{"C", "D", "S"}, "Q2"}});
    CHECK(t.name_of({"A", "B"}) == "Q1");
    CHECK(t.super_state_of("ds") == SuperState{});

    CHECK(compute_ss_name_tbl({{}}).entries == std::vector<std::pair<SuperState, State>>{{{}, "ds"}});
    CHECK(compute_ss_name_tbl({}).entries.empty());
    CHECK_THROWS_AS(compute_ss_name_tbl({{"S"}, {"S"}}), std::invalid_argument);
}

TEST_CASE("convert ND", "[subset]")
{
    auto a = convert(nd());
    CHECK(a.dfa.states() == std::vector<State>{"Q0", "Q1", "ds", "Q2", "Q3"});
    CHECK(a.dfa.rules().size() == 10);
    CHECK(a.dfa.finals() == std::vector<State>{"Q0", "Q2", "Q3"});
    CHECK(a.dfa.start() == "Q0");
    CHECK(a.names.super_state_of("Q3") == SuperState{"A", "B", "E", "S"});
    CHECK(a.dfa.definition().no_dead);
    CHECK(exact_equiv(AnyMachine{a.dfa}, AnyMachine{d()}).equivalent);
}

TEST_CASE("convert aa-ab", "[subset]")
{
    auto a = convert(aa_ab());
    CHECK(a.dfa.states().size() == 5);
    CHECK(a.dfa.rules().size() == 10);
    std::set<SuperState> finals;
    for (const auto& f : a.dfa.finals())
        finals.insert(a.names.super_state_of(f));
    CHECK(finals == std::set<SuperState>{{"A", "B"}, {"A"}, {"B"}});
}

TEST_CASE("convert an already deterministic total machine", "[subset]")
{
    auto m = make_ndfa({"S"}, {'a', 'b'}, "S", {}, {{"S", 'a', "S"}, {"S", 'b', "S"}});
    auto a = convert(m);
    CHECK(a.dfa.states() == std::vector<State>{"Q0"});
    CHECK(a.dfa.rules() == std::vector<Rule>{{"Q0", 'a', "Q0"}, {"Q0", 'b', "Q0"}});
}

TEST_CASE("convert with an empty alphabet still has a start state", "[subset]")
{
    auto m = make_ndfa({"S", "A"}, {}, "S", {"A"}, {{"S", eps, "A"}});
    auto a = convert(m);
    CHECK(a.ss_rules.empty());
    CHECK(a.dfa.states() == std::vector<State>{"Q0"});
    CHECK(a.dfa.finals() == std::vector<State>{"Q0"});
}

TEST_CASE("ndfa2dfa", "[subset]")
{
    AnyMachine dm = d();
    CHECK(ndfa2dfa(dm) == d());
    CHECK(exact_equiv(AnyMachine{ndfa2dfa(AnyMachine{nd()})}, dm).equivalent);

    auto l = ndfa2dfa(AnyMachine{lndfa()});
    for (const auto& w : all_words({'a', 'b'}, 6)) {
        bool in_language = w.empty() || (w[0] == 'a' && (w.find('b') == Word::npos || w.find('a', 1) == Word::npos));
        CHECK((dfa_apply(l, w) == Verdict::accept) == in_language);
    }
}

TEST_CASE("convert preserves the language of random machines", "[subset][property]")
{
    for (std::uint64_t seed = 0; seed < 100; ++seed) {
        auto m = random_nfa(seed);
        auto a = convert(m);
        INFO("seed " << seed);

        CHECK(exact_equiv(AnyMachine{m}, AnyMachine{a.dfa}).equivalent);
        for (const auto& w : all_words(m.sigma(), 6)) {
            bool expected = accepts_by_search(m.definition(), w);
            CHECK((dfa_apply(a.dfa, w) == Verdict::accept) == expected);
            CHECK((nfa_apply(m, w) == Verdict::accept) == expected);
        }
    }
}

TEST_CASE("convert structural properties", "[subset][property]")
{
    for (std::uint64_t seed = 0; seed < 100; ++seed) {
        auto m = random_nfa(seed);
        auto a = convert(m);
        const auto& def = m.definition();
        INFO("seed " << seed);

        CHECK(a == convert(m));

        for (const auto& q : a.dfa.states()) {
            auto n = std::count_if(a.dfa.rules().begin(), a.dfa.rules().end(), [&](const Rule& r) { return r.src == q; });
            CHECK(static_cast<std::size_t>(n) == m.sigma().size());
        }

        auto start = closure_by_search(def, {m.start()});
        CHECK(as_set(a.names.super_state_of(a.dfa.start())) == start);

        for (const auto& [ss, name] : a.names.entries) {
            bool any_final = std::any_of(ss.begin(), ss.end(), [&](const State& q) { return m.is_final(q); });
            CHECK(a.dfa.is_final(name) == any_final);
        }

        for (const auto& r : a.ss_rules) {
            CHECK(as_set(r.dst) == successor_by_search(def, as_set(r.src), r.sym));
            if (r.src.empty())
                CHECK(r.dst.empty());
        }

        for (std::size_t i = 0; i < a.ss_rules.size(); ++i)
            CHECK(a.dfa.rules()[i] ==
                  Rule{a.names.name_of(a.ss_rules[i].src), a.ss_rules[i].sym, a.names.name_of(a.ss_rules[i].dst)});
    }
}
