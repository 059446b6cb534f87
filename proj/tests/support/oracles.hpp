// Test-only reference implementations. None of these call into the library's
// simulation, closure or conversion code; they recompute from the raw rules.

#pragma once

#include <fsmviz/core.hpp>

#include <algorithm>
#include <cctype>
#include <cstddef>
#include <map>
#include <set>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace fsmviz::testing {

/// Accepts iff some configuration path from (start, 0) consumes w and stops in a final state.
inline bool accepts_by_search(const MachineDef& m, const Word& w)
{
    std::set<std::pair<State, std::size_t>> seen;
    std::vector<std::pair<State, std::size_t>> stack{{m.start, 0}};
    while (!stack.empty()) {
        auto [q, i] = stack.back();
        stack.pop_back();
        if (!seen.insert({q, i}).second)
            continue;
        if (i == w.size() && std::find(m.finals.begin(), m.finals.end(), q) != m.finals.end())
            return true;
        for (const auto& r : m.rules) {
            if (r.src != q)
                continue;
            if (r.label.is_epsilon())
                stack.push_back({r.dst, i});
            else if (i < w.size() && r.label.symbol() == w[i])
                stack.push_back({r.dst, i + 1});
        }
    }
    return false;
}

inline std::vector<Word> all_words(const std::vector<Symbol>& sigma, std::size_t max_len)
{
    std::vector<Word> out{Word{}};
    std::vector<Word> layer{Word{}};
    for (std::size_t len = 1; len <= max_len; ++len) {
        std::vector<Word> next;
        for (const auto& w : layer)
            for (Symbol c : sigma)
                next.push_back(w + c);
        out.insert(out.end(), next.begin(), next.end());
        layer = std::move(next);
    }
    return out;
}

inline std::set<State> closure_by_search(const MachineDef& m, const std::set<State>& from)
{
    std::set<State> out = from;
    bool grew = true;
    while (grew) {
        grew = false;
        for (const auto& r : m.rules)
            if (r.label.is_epsilon() && out.count(r.src) && out.insert(r.dst).second)
                grew = true;
    }
    return out;
}

/// Union of E(r) over all rules (p sym r) with p in src.
inline std::set<State> successor_by_search(const MachineDef& m, const std::set<State>& src, Symbol sym)
{
    std::set<State> out;
    for (const auto& r : m.rules)
        if (!r.label.is_epsilon() && r.label.symbol() == sym && src.count(r.src))
            for (const auto& q : closure_by_search(m, {r.dst}))
                out.insert(q);
    return out;
}

/// Hedges recomputed from their definition: sym-rules leaving src, epsilon rules leaving dst.
inline std::set<Rule> hedges_by_definition(const MachineDef& m, const std::set<State>& src, Symbol sym,
                                           const std::set<State>& dst)
{
    std::set<Rule> out;
    for (const auto& r : m.rules) {
        if (r.label.is_epsilon() ? dst.count(r.src) : (r.label.symbol() == sym && src.count(r.src)))
            out.insert(r);
    }
    return out;
}

// Minimal DOT grammar checker covering the statement forms the renderer may emit:
//   graph  : "digraph" [ID] "{" stmt* "}"
//   stmt   : (ID "=" ID | ("graph"|"node"|"edge") attrs | ID ("->" ID)* [attrs]) [";"]
//   attrs  : "[" (ID "=" ID [","|";"])* "]"
struct DotCheck {
    bool ok = false;
    std::size_t nodes = 0;
    std::size_t edges = 0;
    std::vector<std::string> edge_colors;
    std::string error;
};

namespace detail {

class DotLexer {
public:
    explicit DotLexer(std::string_view s) : s_(s) {}

    // Returns the next token; quoted strings keep their quotes. Empty at end.
    std::string next()
    {
        while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_])))
            ++pos_;
        if (pos_ >= s_.size())
            return {};
        char c = s_[pos_];
        if (c == '"') {
            std::string out = "\"";
            ++pos_;
            while (pos_ < s_.size() && s_[pos_] != '"') {
                if (s_[pos_] == '\\' && pos_ + 1 < s_.size())
                    out += s_[pos_++];
                out += s_[pos_++];
            }
            if (pos_ >= s_.size())
                throw std::runtime_error("unterminated string");
            ++pos_;
            return out + "\"";
        }
        if (c == '-' && pos_ + 1 < s_.size() && s_[pos_ + 1] == '>') {
            pos_ += 2;
            return "->";
        }
        if (std::string_view("{}[];,=").find(c) != std::string_view::npos) {
            ++pos_;
            return std::string(1, c);
        }
        std::string out;
        while (pos_ < s_.size() && (std::isalnum(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '_' ||
                                    s_[pos_] == '.'))
            out += s_[pos_++];
        if (out.empty())
            throw std::runtime_error(std::string("unexpected character '") + c + "'");
        return out;
    }

private:
    std::string_view s_;
    std::size_t pos_ = 0;
};

inline bool is_id(const std::string& t)
{
    return !t.empty() && (t.front() == '"' || std::isalnum(static_cast<unsigned char>(t.front())) || t.front() == '_');
}

} // namespace detail

inline DotCheck check_dot(std::string_view text)
{
    DotCheck out;
    try {
        detail::DotLexer lex(text);
        std::vector<std::string> toks;
        for (auto t = lex.next(); !t.empty(); t = lex.next())
            toks.push_back(t);
        std::size_t i = 0;
        auto peek = [&]() -> std::string { return i < toks.size() ? toks[i] : std::string(); };
        auto expect = [&](const std::string& t) {
            if (peek() != t)
                throw std::runtime_error("expected '" + t + "' got '" + peek() + "'");
            ++i;
        };
        auto attrs = [&]() {
            std::map<std::string, std::string> a;
            expect("[");
            while (peek() != "]") {
                auto k = peek();
                if (!detail::is_id(k))
                    throw std::runtime_error("bad attribute name '" + k + "'");
                ++i;
                expect("=");
                auto v = peek();
                if (!detail::is_id(v))
                    throw std::runtime_error("bad attribute value '" + v + "'");
                ++i;
                a[k] = v;
                if (peek() == "," || peek() == ";")
                    ++i;
            }
            expect("]");
            return a;
        };

        expect("digraph");
        if (peek() != "{") {
            if (!detail::is_id(peek()))
                throw std::runtime_error("bad graph id");
            ++i;
        }
        expect("{");
        while (peek() != "}") {
            auto t = peek();
            if (t.empty())
                throw std::runtime_error("missing '}'");
            if (t == "graph" || t == "node" || t == "edge") {
                ++i;
                attrs();
            } else if (detail::is_id(t)) {
                ++i;
                if (peek() == "=") {
                    ++i;
                    if (!detail::is_id(peek()))
                        throw std::runtime_error("bad value");
                    ++i;
                } else if (peek() == "->") {
                    while (peek() == "->") {
                        ++i;
                        if (!detail::is_id(peek()))
                            throw std::runtime_error("bad edge target");
                        ++i;
                    }
                    ++out.edges;
                    if (peek() == "[") {
                        auto a = attrs();
                        out.edge_colors.push_back(a.count("color") ? a["color"] : "");
                    } else
                        out.edge_colors.emplace_back();
                } else {
                    ++out.nodes;
                    if (peek() == "[")
                        attrs();
                }
            } else
                throw std::runtime_error("unexpected token '" + t + "'");
            if (peek() == ";")
                ++i;
        }
        expect("}");
        if (i != toks.size())
            throw std::runtime_error("trailing tokens");
        out.ok = true;
    } catch (const std::exception& e) {
        out.error = e.what();
    }
    return out;
}

} // namespace fsmviz::testing
