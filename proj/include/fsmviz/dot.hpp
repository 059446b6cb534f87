// DOT (Graphviz) transition diagrams.
//
// Start states are drawn green, final states as double circles. Every rule
// becomes its own edge, never merged with a parallel one, so that each NFA
// edge can carry its own partition color. Layout is left to the DOT processor.

#pragma once

#include "core.hpp"
#include "subset.hpp"
#include "viz.hpp"

#include <map>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>

namespace fsmviz {

struct DotDoc {
    std::string text;

    bool operator==(const DotDoc&) const = default;
};

struct DotOptions {
    bool ascii_epsilon = false;                    // "EMP" instead of "ε"
    std::map<State, std::string> node_labels;      // display label per state, defaults to the state name
};

inline constexpr std::string_view color_hedge = "violet";
inline constexpr std::string_view color_fedge = "gray";
inline constexpr std::string_view color_bledge = "black";
inline constexpr std::string_view color_start = "green";

inline std::string_view edge_color(EdgeClass c)
{
    switch (c) {
    case EdgeClass::hedge:
        return color_hedge;
    case EdgeClass::fedge:
        return color_fedge;
    case EdgeClass::bledge:
        break;
    }
    return color_bledge;
}

namespace detail {

inline std::string dot_quote(std::string_view s)
{
    std::string out = "\"";
    for (char c : s) {
        if (c == '"' || c == '\\')
            out += '\\';
        out += c;
    }
    return out + "\"";
}

inline void dot_header(std::ostream& o)
{
    o << "digraph G {\n"
      << "  rankdir=LR;\n"
      << "  node [shape=circle];\n";
}

inline void dot_node(std::ostream& o, std::string_view id, std::string_view label, bool start, bool final)
{
    o << "  " << dot_quote(id) << " [label=" << dot_quote(label) << ", shape=" << (final ? "doublecircle" : "circle")
      << ", color=" << (start ? color_start : color_bledge) << "];\n";
}

inline void dot_edge(std::ostream& o, std::string_view from, std::string_view to, std::string_view label,
                     std::string_view color)
{
    o << "  " << dot_quote(from) << " -> " << dot_quote(to) << " [label=" << dot_quote(label) << ", color=" << color
      << ", fontcolor=" << color << "];\n";
}

inline std::string label_text(const Label& l, const DotOptions& opts)
{
    if (l.is_epsilon())
        return opts.ascii_epsilon ? "EMP" : "ε";
    return std::string(1, l.symbol());
}

inline std::string machine_dot(const Machine& m, const DotOptions& opts, const EdgePartition* partition)
{
    std::ostringstream o;
    dot_header(o);
    for (const auto& q : m.states()) {
        auto it = opts.node_labels.find(q);
        dot_node(o, q, it == opts.node_labels.end() ? q : it->second, q == m.start(), m.is_final(q));
    }
    for (const auto& r : m.rules()) {
        auto color = partition ? edge_color(partition->classify(r)) : color_bledge;
        dot_edge(o, r.src, r.dst, label_text(r.label, opts), color);
    }
    o << "}\n";
    return o.str();
}

} // namespace detail

inline DotDoc machine_to_dot(const Machine& m, const DotOptions& opts = {})
{
    return {detail::machine_dot(m, opts, nullptr)};
}

inline DotDoc machine_to_dot(const AnyMachine& m, const DotOptions& opts = {})
{
    return machine_to_dot(as_machine(m), opts);
}

/// Maps each converted DFA state to the member list of its super state.
inline std::map<State, std::string> dfa_node_labels(const ConversionArtifacts& a)
{
    std::map<State, std::string> labels;
    for (const auto& [ss, name] : a.names.entries)
        labels.emplace(name, ss.label());
    return labels;
}

/// Violet for hedges, gray for fedges, black for bledges.
inline DotDoc nfa_partition_to_dot(const Nfa& m, const EdgePartition& p, const DotOptions& opts = {})
{
    if (!p.covers_exactly(m.rules()))
        throw std::invalid_argument("edge partition does not cover the machine's rules");
    return {detail::machine_dot(m, opts, &p)};
}

/// The DFA built so far: one node per included super state, one edge per
/// processed super-state rule, the most recent one violet.
inline DotDoc dfa_snapshot_to_dot(const VizSnapshot& s)
{
    std::ostringstream o;
    detail::dot_header(o);
    std::map<SuperState, std::string> ids;
    for (std::size_t i = 0; i < s.dfa_nodes.size(); ++i) {
        const auto& n = s.dfa_nodes[i];
        auto id = "n" + std::to_string(i);
        ids.emplace(n.super_state, id);
        detail::dot_node(o, id, n.super_state.label(), n.is_start, n.is_final && !n.super_state.empty());
    }
    for (const auto& e : s.dfa_edges)
        detail::dot_edge(o, ids.at(e.rule.src), ids.at(e.rule.dst), std::string(1, e.rule.sym),
                         e.highlighted ? color_hedge : color_bledge);
    o << "}\n";
    return {o.str()};
}

} // namespace fsmviz
