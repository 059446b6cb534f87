// Finite-state machine values: definitions, validation, execution, epsilon
// closure, dead-state completion and language equivalence.
//
// A MachineDef is the raw, unchecked shape of a machine. validate_machine()
// turns it into an immutable Nfa or Dfa; every other operation works on
// validated values only.

#pragma once

#include <algorithm>
#include <compare>
#include <cstdint>
#include <deque>
#include <initializer_list>
#include <map>
#include <optional>
#include <random>
#include <set>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

namespace fsmviz {

using State = std::string;
using Symbol = char;

/// A word is a sequence of one-character symbols. The empty string is EMP.
using Word = std::string;

inline constexpr std::string_view dead_state_name = "ds";

/// Transition label: either an alphabet symbol or the epsilon marker.
class Label {
public:
    constexpr Label() noexcept = default;
    constexpr Label(Symbol s) noexcept : sym_(s) {}

    constexpr bool is_epsilon() const noexcept { return sym_ == '\0'; }
    constexpr Symbol symbol() const noexcept { return sym_; }

    std::string to_string() const { return is_epsilon() ? std::string("ε") : std::string(1, sym_); }

    constexpr auto operator<=>(const Label&) const = default;

private:
    Symbol sym_ = '\0';
};

inline constexpr Label eps{};

struct Rule {
    State src;
    Label label;
    State dst;

    auto operator<=>(const Rule&) const = default;

    std::string to_string() const { return "(" + src + " " + label.to_string() + " " + dst + ")"; }
};

enum class Kind { ndfa, dfa };

inline std::string_view to_string(Kind k) { return k == Kind::dfa ? "dfa" : "ndfa"; }

struct MachineDef {
    Kind kind = Kind::ndfa;
    std::vector<State> states;
    std::vector<Symbol> sigma;
    State start;
    std::vector<State> finals;
    std::vector<Rule> rules;
    bool no_dead = false;

    bool operator==(const MachineDef&) const = default;
};

enum class Verdict { accept, reject };

inline std::string_view to_string(Verdict v) { return v == Verdict::accept ? "accept" : "reject"; }

class ValidationError : public std::runtime_error {
public:
    explicit ValidationError(std::vector<std::string> problems)
        : std::runtime_error(join(problems)), problems_(std::move(problems)) {}

    const std::vector<std::string>& problems() const noexcept { return problems_; }

private:
    static std::string join(const std::vector<std::string>& ps)
    {
        std::string out;
        for (const auto& p : ps) {
            if (!out.empty())
                out += "; ";
            out += p;
        }
        return out;
    }

    std::vector<std::string> problems_;
};

/// Thrown when a word or a second machine does not fit a machine's alphabet.
class AlphabetError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

inline bool is_valid_symbol(Symbol c) noexcept
{
    return (c >= 'a' && c <= 'z') || (c >= '0' && c <= '9');
}

/// Uppercase-initial alphanumeric tokens, plus the dead-state family "ds", "ds0", "ds1", ...
inline bool is_valid_state_name(std::string_view name) noexcept
{
    if (name.empty())
        return false;
    auto alnum = [](char c) { return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9'); };
    if (name.substr(0, 2) == dead_state_name)
        return std::all_of(name.begin() + 2, name.end(), [](char c) { return c >= '0' && c <= '9'; });
    return name.front() >= 'A' && name.front() <= 'Z' && std::all_of(name.begin(), name.end(), alnum);
}

inline std::string format_word(const Word& w)
{
    if (w.empty())
        return "EMP";
    std::string out;
    for (Symbol c : w) {
        if (!out.empty())
            out += ' ';
        out += c;
    }
    return out;
}

/// Canonical set of NFA states: sorted, duplicate free. The empty set is the dead state.
class SuperState {
public:
    SuperState() = default;
    SuperState(std::initializer_list<State> states) : members_(states) { normalize(); }

    template <class It>
    SuperState(It first, It last) : members_(first, last)
    {
        normalize();
    }

    explicit SuperState(std::vector<State> states) : members_(std::move(states)) { normalize(); }

    const std::vector<State>& members() const noexcept { return members_; }
    bool empty() const noexcept { return members_.empty(); }
    std::size_t size() const noexcept { return members_.size(); }
    auto begin() const noexcept { return members_.begin(); }
    auto end() const noexcept { return members_.end(); }

    bool contains(const State& q) const { return std::binary_search(members_.begin(), members_.end(), q); }

    template <class Range>
    bool intersects(const Range& states) const
    {
        return std::any_of(states.begin(), states.end(), [this](const State& q) { return contains(q); });
    }

    SuperState& merge(const SuperState& other)
    {
        std::vector<State> out;
        out.reserve(members_.size() + other.members_.size());
        std::set_union(members_.begin(), members_.end(), other.members_.begin(), other.members_.end(),
                       std::back_inserter(out));
        members_ = std::move(out);
        return *this;
    }

    /// "(A B C)", or "()" for the dead state.
    std::string to_string() const
    {
        std::string out = "(";
        for (std::size_t i = 0; i < members_.size(); ++i) {
            if (i)
                out += ' ';
            out += members_[i];
        }
        return out + ")";
    }

    /// Members joined by commas; the dead state reads "ds".
    std::string label() const
    {
        if (members_.empty())
            return std::string(dead_state_name);
        std::string out;
        for (std::size_t i = 0; i < members_.size(); ++i) {
            if (i)
                out += ',';
            out += members_[i];
        }
        return out;
    }

    auto operator<=>(const SuperState&) const = default;

private:
    void normalize()
    {
        std::sort(members_.begin(), members_.end());
        members_.erase(std::unique(members_.begin(), members_.end()), members_.end());
    }

    std::vector<State> members_;
};

namespace detail {
struct Checked {
    explicit Checked() = default;
};
} // namespace detail

/// Common read-only view over a validated machine.
class Machine {
public:
    const MachineDef& definition() const noexcept { return def_; }
    Kind kind() const noexcept { return def_.kind; }
    const std::vector<State>& states() const noexcept { return def_.states; }
    const std::vector<Symbol>& sigma() const noexcept { return def_.sigma; }
    const State& start() const noexcept { return def_.start; }
    const std::vector<State>& finals() const noexcept { return def_.finals; }
    const std::vector<Rule>& rules() const noexcept { return def_.rules; }

    bool has_state(const State& q) const { return std::find(states().begin(), states().end(), q) != states().end(); }
    bool is_final(const State& q) const { return std::find(finals().begin(), finals().end(), q) != finals().end(); }
    bool in_alphabet(Symbol c) const { return std::find(sigma().begin(), sigma().end(), c) != sigma().end(); }

    void check_word(const Word& w) const
    {
        for (Symbol c : w)
            if (!in_alphabet(c))
                throw AlphabetError(std::string("symbol '") + c + "' is not in the alphabet");
    }

    bool operator==(const Machine& o) const { return def_ == o.def_; }

protected:
    Machine(detail::Checked, MachineDef def) : def_(std::move(def)) {}

    MachineDef def_;
};

class Nfa : public Machine {
public:
    Nfa(detail::Checked tag, MachineDef def) : Machine(tag, std::move(def)) {}
};

class Dfa : public Machine {
public:
    Dfa(detail::Checked tag, MachineDef def) : Machine(tag, std::move(def))
    {
        for (const auto& r : def_.rules)
            delta_.emplace(std::pair{r.src, r.label.symbol()}, r.dst);
    }

    const State& next(const State& q, Symbol c) const { return delta_.at({q, c}); }

    /// The same relation viewed as a nondeterministic machine.
    Nfa as_nfa() const
    {
        MachineDef d = def_;
        d.kind = Kind::ndfa;
        d.no_dead = false;
        return Nfa(detail::Checked{}, std::move(d));
    }

private:
    std::map<std::pair<State, Symbol>, State> delta_;
};

using AnyMachine = std::variant<Nfa, Dfa>;

inline const Machine& as_machine(const AnyMachine& m)
{
    return std::visit([](const auto& x) -> const Machine& { return x; }, m);
}

inline Nfa as_nfa(const AnyMachine& m)
{
    if (const auto* d = std::get_if<Dfa>(&m))
        return d->as_nfa();
    return std::get<Nfa>(m);
}

namespace detail {

inline std::vector<std::string> structural_problems(const MachineDef& def)
{
    std::vector<std::string> problems;
    std::set<State> states;
    for (const auto& q : def.states) {
        if (!is_valid_state_name(q))
            problems.push_back("invalid state name '" + q + "'");
        if (!states.insert(q).second)
            problems.push_back("duplicate state " + q);
    }
    std::set<Symbol> sigma;
    for (Symbol c : def.sigma) {
        if (!is_valid_symbol(c))
            problems.push_back(std::string("invalid symbol '") + c + "'");
        if (!sigma.insert(c).second)
            problems.push_back(std::string("duplicate symbol ") + c);
    }
    if (!states.count(def.start))
        problems.push_back("start state " + def.start + " is not a declared state");
    std::set<State> finals;
    for (const auto& f : def.finals) {
        if (!states.count(f))
            problems.push_back("final state " + f + " is not a declared state");
        if (!finals.insert(f).second)
            problems.push_back("duplicate final state " + f);
    }
    std::set<Rule> seen;
    for (const auto& r : def.rules) {
        if (!states.count(r.src))
            problems.push_back("rule " + r.to_string() + ": unknown source state " + r.src);
        if (!states.count(r.dst))
            problems.push_back("rule " + r.to_string() + ": unknown destination state " + r.dst);
        if (!r.label.is_epsilon() && !sigma.count(r.label.symbol()))
            problems.push_back("rule " + r.to_string() + ": symbol " + r.label.to_string() + " not in alphabet");
        if (!seen.insert(r).second)
            problems.push_back("duplicate rule " + r.to_string());
    }
    return problems;
}

inline std::vector<std::string> dfa_shape_problems(const MachineDef& def)
{
    std::vector<std::string> problems;
    std::set<std::pair<State, Symbol>> pairs;
    for (const auto& r : def.rules) {
        if (r.label.is_epsilon()) {
            problems.push_back("epsilon rule in dfa: " + r.to_string());
            continue;
        }
        if (!pairs.insert({r.src, r.label.symbol()}).second)
            problems.push_back("more than one rule for (" + r.src + " " + r.label.to_string() + ") in dfa");
    }
    return problems;
}

inline std::vector<std::pair<State, Symbol>> missing_pairs(const MachineDef& def)
{
    std::set<std::pair<State, Symbol>> present;
    for (const auto& r : def.rules)
        present.insert({r.src, r.label.symbol()});
    std::vector<std::pair<State, Symbol>> missing;
    for (const auto& q : def.states)
        for (Symbol c : def.sigma)
            if (!present.count({q, c}))
                missing.emplace_back(q, c);
    return missing;
}

} // namespace detail

/// Adds a fresh non-final dead state and routes every missing (state, symbol)
/// pair into it. A total relation is returned unchanged, with no_dead set.
inline MachineDef complete_dfa(MachineDef def)
{
    if (def.kind != Kind::dfa)
        throw ValidationError({"complete_dfa requires a dfa definition"});
    if (auto problems = detail::dfa_shape_problems(def); !problems.empty())
        throw ValidationError(std::move(problems));

    const auto missing = detail::missing_pairs(def);
    def.no_dead = true;
    if (missing.empty())
        return def;

    State dead(dead_state_name);
    for (int i = 0; std::find(def.states.begin(), def.states.end(), dead) != def.states.end(); ++i)
        dead = std::string(dead_state_name) + std::to_string(i);

    for (const auto& [q, c] : missing)
        def.rules.push_back({q, c, dead});
    def.states.push_back(dead);
    for (Symbol c : def.sigma)
        def.rules.push_back({dead, c, dead});
    return def;
}

/// Checks every invariant of a definition. A dfa without no_dead is completed
/// first; with no_dead set, totality is required.
inline AnyMachine validate_machine(MachineDef def)
{
    auto problems = detail::structural_problems(def);
    if (def.kind == Kind::ndfa) {
        if (!problems.empty())
            throw ValidationError(std::move(problems));
        def.no_dead = false;
        return Nfa(detail::Checked{}, std::move(def));
    }

    auto shape = detail::dfa_shape_problems(def);
    problems.insert(problems.end(), shape.begin(), shape.end());
    if (!problems.empty())
        throw ValidationError(std::move(problems));

    if (!def.no_dead)
        def = complete_dfa(std::move(def));
    else if (auto missing = detail::missing_pairs(def); !missing.empty()) {
        for (const auto& [q, c] : missing)
            problems.push_back(std::string("dfa marked no-dead has no rule for (") + q + " " + c + ")");
        throw ValidationError(std::move(problems));
    }
    return Dfa(detail::Checked{}, std::move(def));
}

inline Nfa make_ndfa(std::vector<State> states, std::vector<Symbol> sigma, State start, std::vector<State> finals,
                     std::vector<Rule> rules)
{
    return std::get<Nfa>(validate_machine(
        {Kind::ndfa, std::move(states), std::move(sigma), std::move(start), std::move(finals), std::move(rules)}));
}

inline Dfa make_dfa(std::vector<State> states, std::vector<Symbol> sigma, State start, std::vector<State> finals,
                    std::vector<Rule> rules, bool no_dead = false)
{
    return std::get<Dfa>(validate_machine({Kind::dfa, std::move(states), std::move(sigma), std::move(start),
                                           std::move(finals), std::move(rules), no_dead}));
}

inline SuperState epsilon_closure(const Machine& m, const SuperState& from)
{
    std::set<State> seen(from.begin(), from.end());
    std::vector<State> stack(from.begin(), from.end());
    while (!stack.empty()) {
        State q = std::move(stack.back());
        stack.pop_back();
        for (const auto& r : m.rules())
            if (r.label.is_epsilon() && r.src == q && seen.insert(r.dst).second)
                stack.push_back(r.dst);
    }
    return SuperState(seen.begin(), seen.end());
}

inline SuperState epsilon_closure(const Machine& m, const State& q)
{
    if (!m.has_state(q))
        throw std::invalid_argument("unknown state " + q);
    return epsilon_closure(m, SuperState{q});
}

namespace detail {

/// States reachable from `from` by consuming c, then closed under epsilon.
inline SuperState subset_step(const Machine& m, const SuperState& from, Symbol c)
{
    std::vector<State> moved;
    for (const auto& r : m.rules())
        if (!r.label.is_epsilon() && r.label.symbol() == c && from.contains(r.src))
            moved.push_back(r.dst);
    return epsilon_closure(m, SuperState(std::move(moved)));
}

} // namespace detail

inline Verdict nfa_apply(const Nfa& m, const Word& w)
{
    m.check_word(w);
    SuperState current = epsilon_closure(m, m.start());
    for (Symbol c : w)
        current = detail::subset_step(m, current, c);
    return current.intersects(m.finals()) ? Verdict::accept : Verdict::reject;
}

inline Verdict dfa_apply(const Dfa& m, const Word& w)
{
    m.check_word(w);
    State q = m.start();
    for (Symbol c : w)
        q = m.next(q, c);
    return m.is_final(q) ? Verdict::accept : Verdict::reject;
}

inline Verdict apply(const AnyMachine& m, const Word& w)
{
    return std::visit(
        [&](const auto& x) {
            if constexpr (std::is_same_v<std::decay_t<decltype(x)>, Dfa>)
                return dfa_apply(x, w);
            else
                return nfa_apply(x, w);
        },
        m);
}

struct Config {
    Word unconsumed;
    State state;

    bool operator==(const Config&) const = default;
};

struct Trace {
    std::vector<Config> configs;  // empty when a nondeterministic machine rejects
    Verdict result = Verdict::reject;

    bool operator==(const Trace&) const = default;
};

inline Trace show_transitions(const Dfa& m, const Word& w)
{
    m.check_word(w);
    Trace t;
    State q = m.start();
    t.configs.push_back({w, q});
    for (std::size_t i = 0; i < w.size(); ++i) {
        q = m.next(q, w[i]);
        t.configs.push_back({w.substr(i + 1), q});
    }
    t.result = m.is_final(q) ? Verdict::accept : Verdict::reject;
    return t;
}

/// Shortest accepting configuration path. Search nodes are (state, consumed
/// count); rules are tried in declaration order, so the first path found at
/// the minimal depth wins.
inline Trace show_transitions(const Nfa& m, const Word& w)
{
    m.check_word(w);
    using Node = std::pair<State, std::size_t>;
    std::map<Node, std::optional<Node>> parent;
    std::deque<Node> queue;
    Node root{m.start(), 0};
    parent.emplace(root, std::nullopt);
    queue.push_back(root);

    while (!queue.empty()) {
        Node node = queue.front();
        queue.pop_front();
        const auto& [q, used] = node;
        if (used == w.size() && m.is_final(q)) {
            Trace t;
            for (std::optional<Node> at = node; at; at = parent.at(*at))
                t.configs.push_back({w.substr(at->second), at->first});
            std::reverse(t.configs.begin(), t.configs.end());
            t.result = Verdict::accept;
            return t;
        }
        for (const auto& r : m.rules()) {
            if (r.src != q)
                continue;
            std::optional<Node> next;
            if (r.label.is_epsilon())
                next = Node{r.dst, used};
            else if (used < w.size() && r.label.symbol() == w[used])
                next = Node{r.dst, used + 1};
            if (next && parent.emplace(*next, node).second)
                queue.push_back(*next);
        }
    }
    return {};
}

inline Trace show_transitions(const AnyMachine& m, const Word& w)
{
    return std::visit([&](const auto& x) { return show_transitions(x, w); }, m);
}

namespace detail {

inline std::vector<Symbol> sorted_alphabet(const Machine& m)
{
    std::vector<Symbol> s = m.sigma();
    std::sort(s.begin(), s.end());
    return s;
}

inline std::vector<Symbol> shared_alphabet(const Machine& a, const Machine& b)
{
    auto sa = sorted_alphabet(a);
    if (sa != sorted_alphabet(b))
        throw AlphabetError("machines have different alphabets");
    return sa;
}

} // namespace detail

/// n words from a seeded mt19937_64: length uniform on [0, max_len] then each
/// symbol uniform over sigma, both drawn as `engine() % range`.
inline std::vector<Word> random_words(const std::vector<Symbol>& sigma, std::size_t n, std::size_t max_len,
                                      std::uint64_t seed)
{
    std::mt19937_64 engine(seed);
    std::vector<Word> words;
    words.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
        std::size_t len = sigma.empty() ? 0 : static_cast<std::size_t>(engine() % (max_len + 1));
        Word w;
        for (std::size_t j = 0; j < len; ++j)
            w += sigma[engine() % sigma.size()];
        words.push_back(std::move(w));
    }
    return words;
}

inline bool random_equiv_test(const AnyMachine& a, const AnyMachine& b, std::size_t n, std::size_t max_len = 8,
                              std::uint64_t seed = 0)
{
    auto sigma = detail::shared_alphabet(as_machine(a), as_machine(b));
    for (const auto& w : random_words(sigma, n, max_len, seed))
        if (apply(a, w) != apply(b, w))
            return false;
    return true;
}

struct EquivReport {
    bool equivalent = true;
    std::optional<Word> counterexample;

    bool operator==(const EquivReport&) const = default;
};

/// Breadth-first search of the product of both machines' subset automata.
/// The first disagreeing pair found yields a shortest counterexample, ties
/// broken in alphabet order.
inline EquivReport exact_equiv(const AnyMachine& a, const AnyMachine& b)
{
    const auto sigma = detail::shared_alphabet(as_machine(a), as_machine(b));
    const Nfa na = as_nfa(a);
    const Nfa nb = as_nfa(b);

    using Pair = std::pair<SuperState, SuperState>;
    std::map<Pair, std::optional<std::pair<Pair, Symbol>>> parent;
    std::deque<Pair> queue;
    Pair root{epsilon_closure(na, na.start()), epsilon_closure(nb, nb.start())};
    parent.emplace(root, std::nullopt);
    queue.push_back(root);

    while (!queue.empty()) {
        Pair p = queue.front();
        queue.pop_front();
        if (p.first.intersects(na.finals()) != p.second.intersects(nb.finals())) {
            Word w;
            for (auto at = parent.at(p); at; at = parent.at(at->first))
                w += at->second;
            std::reverse(w.begin(), w.end());
            return {false, w};
        }
        for (Symbol c : sigma) {
            Pair next{detail::subset_step(na, p.first, c), detail::subset_step(nb, p.second, c)};
            if (parent.emplace(next, std::pair{p, c}).second)
                queue.push_back(std::move(next));
        }
    }
    return {true, std::nullopt};
}

} // namespace fsmviz
