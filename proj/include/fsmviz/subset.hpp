// NFA to DFA conversion by breadth-first search over reachable super states.
//
// Only super states reachable from E(start) are ever built. The search keeps
// a FIFO of unexplored super states; each one is expanded once per alphabet
// symbol, and destinations not seen before go to the back of the queue. The
// empty super state is the dead state and is expanded like any other, so the
// resulting DFA is total without a separate completion pass.

#pragma once

#include "core.hpp"

#include <algorithm>
#include <deque>
#include <set>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace fsmviz {

struct EmptiesTable {
    std::vector<std::pair<State, SuperState>> entries;

    const SuperState& closure_of(const State& q) const
    {
        for (const auto& [state, closure] : entries)
            if (state == q)
                return closure;
        throw std::out_of_range("no empties entry for state " + q);
    }

    bool operator==(const EmptiesTable&) const = default;
};

/// One transition between super states, before the states are renamed.
struct SsRule {
    SuperState src;
    Symbol sym;
    SuperState dst;

    auto operator<=>(const SsRule&) const = default;

    std::string to_string() const { return "(" + src.to_string() + " " + sym + " " + dst.to_string() + ")"; }
};

struct SsNameTable {
    std::vector<std::pair<SuperState, State>> entries;

    const State& name_of(const SuperState& ss) const
    {
        for (const auto& [s, name] : entries)
            if (s == ss)
                return name;
        throw std::out_of_range("no name for super state " + ss.to_string());
    }

    const SuperState& super_state_of(const State& name) const
    {
        for (const auto& [s, n] : entries)
            if (n == name)
                return s;
        throw std::out_of_range("no super state named " + name);
    }

    bool operator==(const SsNameTable&) const = default;
};

struct ConversionArtifacts {
    EmptiesTable empties;
    std::vector<SsRule> ss_rules;
    SsNameTable names;
    Dfa dfa;

    bool operator==(const ConversionArtifacts&) const = default;
};

/// Rows follow the members of the super state, columns follow sigma.
using ReachableMatrix = std::vector<std::vector<SuperState>>;

inline EmptiesTable compute_empties_tbl(const Nfa& m)
{
    EmptiesTable table;
    for (const auto& q : m.states())
        table.entries.emplace_back(q, epsilon_closure(m, q));
    return table;
}

inline ReachableMatrix find_reachables(const SuperState& ss, const std::vector<Symbol>& sigma,
                                       const std::vector<Rule>& rules, const EmptiesTable& empties)
{
    ReachableMatrix matrix;
    matrix.reserve(ss.size());
    for (const auto& p : ss) {
        auto& row = matrix.emplace_back();
        row.reserve(sigma.size());
        for (Symbol c : sigma) {
            SuperState cell;
            for (const auto& r : rules)
                if (r.src == p && !r.label.is_epsilon() && r.label.symbol() == c)
                    cell.merge(empties.closure_of(r.dst));
            row.push_back(std::move(cell));
        }
    }
    return matrix;
}

/// Union of column `column` across every row.
inline SuperState get_reachable(std::size_t column, const ReachableMatrix& reachables)
{
    SuperState out;
    for (const auto& row : reachables) {
        if (column >= row.size())
            throw std::out_of_range("reachable column " + std::to_string(column) + " out of range");
        out.merge(row[column]);
    }
    return out;
}

inline std::vector<SsRule> compute_ss_dfa_rules(const SuperState& start, const std::vector<Symbol>& sigma,
                                                const std::vector<Rule>& rules, const EmptiesTable& empties)
{
    std::vector<SsRule> out;
    std::deque<SuperState> to_search{start};
    std::set<SuperState> known{start};

    while (!to_search.empty()) {
        SuperState current = std::move(to_search.front());
        to_search.pop_front();
        const auto reachables = find_reachables(current, sigma, rules, empties);
        for (std::size_t i = 0; i < sigma.size(); ++i) {
            SuperState dst = get_reachable(i, reachables);
            if (known.insert(dst).second)
                to_search.push_back(dst);
            out.push_back({current, sigma[i], std::move(dst)});
        }
    }
    return out;
}

inline std::vector<SsRule> compute_ss_dfa_rules(const Nfa& m)
{
    const auto empties = compute_empties_tbl(m);
    return compute_ss_dfa_rules(empties.closure_of(m.start()), m.sigma(), m.rules(), empties);
}

/// Empty super state -> "ds"; the others -> "Q0", "Q1", ... in list order.
inline SsNameTable compute_ss_name_tbl(const std::vector<SuperState>& super_states)
{
    SsNameTable table;
    std::set<SuperState> seen;
    std::size_t next = 0;
    for (const auto& ss : super_states) {
        if (!seen.insert(ss).second)
            throw std::invalid_argument("duplicate super state " + ss.to_string());
        table.entries.emplace_back(ss, ss.empty() ? State(dead_state_name) : "Q" + std::to_string(next++));
    }
    return table;
}

/// Super states in order of first appearance: E(start), then each rule's source and destination.
inline std::vector<SuperState> super_states_of(const SuperState& start, const std::vector<SsRule>& ss_rules)
{
    std::vector<SuperState> out{start};
    std::set<SuperState> seen{start};
    for (const auto& r : ss_rules)
        for (const auto* ss : {&r.src, &r.dst})
            if (seen.insert(*ss).second)
                out.push_back(*ss);
    return out;
}

inline ConversionArtifacts convert(const Nfa& m)
{
    auto empties = compute_empties_tbl(m);
    const SuperState& start = empties.closure_of(m.start());
    auto ss_rules = compute_ss_dfa_rules(start, m.sigma(), m.rules(), empties);
    const auto super_states = super_states_of(start, ss_rules);
    auto names = compute_ss_name_tbl(super_states);

    MachineDef def;
    def.kind = Kind::dfa;
    def.sigma = m.sigma();
    def.start = names.name_of(start);
    def.no_dead = true;
    for (const auto& ss : super_states) {
        def.states.push_back(names.name_of(ss));
        if (ss.intersects(m.finals()))
            def.finals.push_back(names.name_of(ss));
    }
    for (const auto& r : ss_rules)
        def.rules.push_back({names.name_of(r.src), r.sym, names.name_of(r.dst)});

    auto dfa = std::get<Dfa>(validate_machine(std::move(def)));
    return {std::move(empties), std::move(ss_rules), std::move(names), std::move(dfa)};
}

inline Dfa ndfa2dfa(const AnyMachine& m)
{
    if (const auto* d = std::get_if<Dfa>(&m))
        return *d;
    return convert(std::get<Nfa>(m)).dfa;
}

} // namespace fsmviz
