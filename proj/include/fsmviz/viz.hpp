// Bidirectional stepping over an NFA to DFA conversion.
//
// The full super-state rule sequence e_1..e_n is computed once. A VizState is
// that sequence plus a cursor k; everything drawn on screen is derived from
// (sequence, k) by snapshot():
//
//   hedges = H_init                           if k = 0
//          = H(e_k)                           otherwise
//   fedges = H_init + H(e_1) + ... + H(e_k-1)  (multiset, empty when k = 0)
//   bledges = rules - hedges - support(fedges)
//
// where H(e) = compute_all_hedges(rules, e.dst, e). VizRecord keeps the same
// seven fields incrementally, the way an event loop would, and must agree
// with snapshot() at every cursor.

#pragma once

#include "core.hpp"
#include "subset.hpp"

#include <algorithm>
#include <cstddef>
#include <deque>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <span>
#include <stdexcept>
#include <string_view>
#include <vector>

namespace fsmviz {

enum class EdgeClass { hedge, fedge, bledge };

inline std::string_view to_string(EdgeClass c)
{
    switch (c) {
    case EdgeClass::hedge:
        return "hedge";
    case EdgeClass::fedge:
        return "fedge";
    case EdgeClass::bledge:
        break;
    }
    return "bledge";
}

struct EdgePartition {
    std::set<Rule> hedges;
    std::map<Rule, std::size_t> fedges;  // rule -> positive multiplicity
    std::set<Rule> bledges;

    bool in_fedges(const Rule& r) const { return fedges.count(r) != 0; }

    std::size_t fedge_count(const Rule& r) const
    {
        auto it = fedges.find(r);
        return it == fedges.end() ? 0 : it->second;
    }

    /// Rendering precedence: hedges, then fedges, then bledges.
    EdgeClass classify(const Rule& r) const
    {
        if (hedges.count(r))
            return EdgeClass::hedge;
        if (in_fedges(r))
            return EdgeClass::fedge;
        return EdgeClass::bledge;
    }

    /// Every rule is covered and bledges are disjoint from the other two classes.
    bool covers_exactly(const std::vector<Rule>& rules) const
    {
        std::set<Rule> all(rules.begin(), rules.end());
        std::set<Rule> seen = hedges;
        for (const auto& [r, n] : fedges) {
            if (n == 0)
                return false;
            seen.insert(r);
        }
        for (const auto& r : bledges)
            if (seen.count(r))
                return false;
        seen.insert(bledges.begin(), bledges.end());
        return seen == all;
    }

    bool operator==(const EdgePartition&) const = default;
};

/// NFA edges that justify a DFA edge. With edge (P x Q): the x-rules leaving P
/// plus the epsilon rules leaving Q. Without an edge: the epsilon rules leaving
/// the target (the start super state).
inline std::set<Rule> compute_all_hedges(const std::vector<Rule>& rules, const SuperState& target,
                                         const std::optional<SsRule>& edge)
{
    std::set<Rule> out;
    for (const auto& r : rules) {
        if (r.label.is_epsilon()) {
            if (target.contains(r.src))
                out.insert(r);
        } else if (edge && r.label.symbol() == edge->sym && edge->src.contains(r.src)) {
            out.insert(r);
        }
    }
    return out;
}

struct DfaNode {
    SuperState super_state;
    bool is_start = false;
    bool is_final = false;

    bool operator==(const DfaNode&) const = default;
};

struct DfaEdge {
    SsRule rule;
    bool highlighted = false;

    bool operator==(const DfaEdge&) const = default;
};

struct VizSnapshot {
    std::size_t cursor = 0;
    std::size_t total = 0;
    std::vector<DfaNode> dfa_nodes;
    std::vector<DfaEdge> dfa_edges;
    EdgePartition partition;
    bool can_forward = false;
    bool can_backward = false;

    bool operator==(const VizSnapshot&) const = default;
};

class VizBoundaryError : public std::runtime_error {
public:
    enum class Code { at_start, at_end };

    explicit VizBoundaryError(Code c)
        : std::runtime_error(c == Code::at_start ? "already at the first step" : "already at the last step"), code_(c)
    {}

    Code code() const noexcept { return code_; }
    std::string_view code_name() const noexcept { return code_ == Code::at_start ? "at-start" : "at-end"; }

private:
    Code code_;
};

class VizState {
public:
    explicit VizState(Nfa nfa) : shared_(std::make_shared<const Shared>(build(std::move(nfa)))) {}

    const Nfa& nfa() const noexcept { return shared_->nfa; }
    const ConversionArtifacts& artifacts() const noexcept { return shared_->artifacts; }
    const SuperState& start_super_state() const noexcept { return shared_->start; }
    std::size_t cursor() const noexcept { return cursor_; }
    std::size_t total() const noexcept { return shared_->artifacts.ss_rules.size(); }

    /// ss_rules[0..k), oldest first.
    std::span<const SsRule> processed() const { return std::span(artifacts().ss_rules).first(cursor_); }
    /// ss_rules[k..n).
    std::span<const SsRule> unprocessed() const { return std::span(artifacts().ss_rules).subspan(cursor_); }

    const std::set<Rule>& initial_hedges() const noexcept { return shared_->initial_hedges; }
    /// Hedges of edge e_i, 1-based.
    const std::set<Rule>& hedges_of(std::size_t i) const { return shared_->edge_hedges.at(i - 1); }

    VizState at(std::size_t k) const
    {
        if (k > total())
            throw std::out_of_range("cursor beyond the last step");
        VizState v = *this;
        v.cursor_ = k;
        return v;
    }

    bool operator==(const VizState& o) const
    {
        return cursor_ == o.cursor_ &&
               (shared_ == o.shared_ || (nfa() == o.nfa() && artifacts().ss_rules == o.artifacts().ss_rules));
    }

private:
    struct Shared {
        Nfa nfa;
        ConversionArtifacts artifacts;
        SuperState start;
        std::set<Rule> initial_hedges;
        std::vector<std::set<Rule>> edge_hedges;
    };

    static Shared build(Nfa nfa)
    {
        auto artifacts = convert(nfa);
        SuperState start = epsilon_closure(nfa, nfa.start());
        auto initial = compute_all_hedges(nfa.rules(), start, std::nullopt);
        std::vector<std::set<Rule>> per_edge;
        per_edge.reserve(artifacts.ss_rules.size());
        for (const auto& e : artifacts.ss_rules)
            per_edge.push_back(compute_all_hedges(nfa.rules(), e.dst, e));
        return {std::move(nfa), std::move(artifacts), std::move(start), std::move(initial), std::move(per_edge)};
    }

    std::shared_ptr<const Shared> shared_;
    std::size_t cursor_ = 0;
};

inline VizState init_viz(const Nfa& m)
{
    return VizState(m);
}

inline VizSnapshot snapshot(const VizState& vs)
{
    const std::size_t k = vs.cursor();
    const auto& rules = vs.nfa().rules();
    VizSnapshot s;
    s.cursor = k;
    s.total = vs.total();
    s.can_forward = k < s.total;
    s.can_backward = k > 0;

    auto& p = s.partition;
    if (k == 0) {
        p.hedges = vs.initial_hedges();
    } else {
        p.hedges = vs.hedges_of(k);
        for (const auto& r : vs.initial_hedges())
            ++p.fedges[r];
        for (std::size_t i = 1; i < k; ++i)
            for (const auto& r : vs.hedges_of(i))
                ++p.fedges[r];
    }
    for (const auto& r : rules)
        if (!p.hedges.count(r) && !p.in_fedges(r))
            p.bledges.insert(r);

    std::set<SuperState> seen;
    auto add_node = [&](const SuperState& ss) {
        if (seen.insert(ss).second)
            s.dfa_nodes.push_back({ss, ss == vs.start_super_state(), ss.intersects(vs.nfa().finals())});
    };
    add_node(vs.start_super_state());
    const auto done = vs.processed();
    for (std::size_t i = 0; i < done.size(); ++i) {
        add_node(done[i].src);
        add_node(done[i].dst);
        s.dfa_edges.push_back({done[i], i + 1 == done.size()});
    }
    return s;
}

inline VizState step_forward(const VizState& vs)
{
    if (vs.cursor() == vs.total())
        throw VizBoundaryError(VizBoundaryError::Code::at_end);
    return vs.at(vs.cursor() + 1);
}

inline VizState step_backward(const VizState& vs)
{
    if (vs.cursor() == 0)
        throw VizBoundaryError(VizBoundaryError::Code::at_start);
    return vs.at(vs.cursor() - 1);
}

inline VizState finish(const VizState& vs)
{
    return vs.at(vs.total());
}

inline VizState reset(const VizState& vs)
{
    return vs.at(0);
}

/// The explicit up-edges / ad-edges / incl-nodes / hedges / fedges / bledges
/// record, updated in place one step at a time.
class VizRecord {
public:
    explicit VizRecord(const Nfa& m)
        : rules_(m.rules()), finals_(m.finals()), start_(epsilon_closure(m, m.start()))
    {
        auto sequence = compute_ss_dfa_rules(m);
        up_edges_.assign(sequence.begin(), sequence.end());
        total_ = up_edges_.size();
        add_node(start_);
        hedges_ = compute_all_hedges(rules_, start_, std::nullopt);
        bledges_.insert(rules_.begin(), rules_.end());
        for (const auto& r : hedges_)
            bledges_.erase(r);
    }

    std::size_t cursor() const noexcept { return ad_edges_.size(); }

    void forward()
    {
        if (up_edges_.empty())
            throw VizBoundaryError(VizBoundaryError::Code::at_end);
        SsRule e = std::move(up_edges_.front());
        up_edges_.pop_front();
        add_node(e.src);
        add_node(e.dst);
        for (const auto& r : hedges_)
            ++fedges_[r];
        hedges_ = compute_all_hedges(rules_, e.dst, e);
        for (const auto& r : hedges_)
            bledges_.erase(r);
        ad_edges_.push_back(std::move(e));
    }

    void backward()
    {
        if (ad_edges_.empty())
            throw VizBoundaryError(VizBoundaryError::Code::at_start);
        SsRule last = std::move(ad_edges_.back());
        ad_edges_.pop_back();
        drop_node(last.dst);
        drop_node(last.src);

        std::set<Rule> released = hedges_;
        if (ad_edges_.empty()) {
            hedges_ = compute_all_hedges(rules_, start_, std::nullopt);
            for (const auto& [r, n] : fedges_)
                released.insert(r);
            fedges_.clear();
        } else {
            const auto& prev = ad_edges_.back();
            hedges_ = compute_all_hedges(rules_, prev.dst, prev);
            for (const auto& r : hedges_) {
                auto it = fedges_.find(r);
                if (--it->second == 0) {
                    fedges_.erase(it);
                    released.insert(r);
                }
            }
        }
        for (const auto& r : released)
            if (!hedges_.count(r) && !fedges_.count(r))
                bledges_.insert(r);
        up_edges_.push_front(std::move(last));
    }

    void finish()
    {
        while (!up_edges_.empty())
            forward();
    }

    VizSnapshot snapshot() const
    {
        VizSnapshot s;
        s.cursor = cursor();
        s.total = total_;
        s.can_forward = !up_edges_.empty();
        s.can_backward = !ad_edges_.empty();
        s.partition = {hedges_, fedges_, bledges_};
        for (const auto& ss : incl_nodes_)
            s.dfa_nodes.push_back({ss, ss == start_, ss.intersects(finals_)});
        for (std::size_t i = 0; i < ad_edges_.size(); ++i)
            s.dfa_edges.push_back({ad_edges_[i], i + 1 == ad_edges_.size()});
        return s;
    }

private:
    void add_node(const SuperState& ss)
    {
        if (node_refs_[ss]++ == 0)
            incl_nodes_.push_back(ss);
    }

    void drop_node(const SuperState& ss)
    {
        if (--node_refs_[ss] == 0) {
            node_refs_.erase(ss);
            incl_nodes_.erase(std::find(incl_nodes_.begin(), incl_nodes_.end(), ss));
        }
    }

    std::vector<Rule> rules_;
    std::vector<State> finals_;
    SuperState start_;
    std::size_t total_ = 0;

    std::deque<SsRule> up_edges_;
    std::vector<SsRule> ad_edges_;  // oldest first
    std::vector<SuperState> incl_nodes_;
    std::map<SuperState, std::size_t> node_refs_;
    std::set<Rule> hedges_;
    std::map<Rule, std::size_t> fedges_;
    std::set<Rule> bledges_;
};

} // namespace fsmviz
