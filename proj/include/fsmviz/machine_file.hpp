// Text format for machine definitions.
//
//   type: ndfa                  (or "dfa", or "dfa no-dead")
//   states: S A B F
//   sigma: a b
//   start: S
//   finals: A B F
//   rules:
//   S a A
//   S eps F
//
// Headers appear in exactly this order. Blank lines and lines starting with
// '#' are ignored by the parser. The serializer writes single spaces and '\n'
// line endings, rules in definition order.

#pragma once

#include "core.hpp"

#include <array>
#include <fstream>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace fsmviz {

struct ParseIssue {
    std::size_t line = 0;
    std::size_t column = 0;
    std::string message;

    std::string to_string() const
    {
        return "line " + std::to_string(line) + ", column " + std::to_string(column) + ": " + message;
    }

    bool operator==(const ParseIssue&) const = default;
};

class ParseError : public std::runtime_error {
public:
    explicit ParseError(std::vector<ParseIssue> issues)
        : std::runtime_error(join(issues)), issues_(std::move(issues))
    {}

    const std::vector<ParseIssue>& issues() const noexcept { return issues_; }

private:
    static std::string join(const std::vector<ParseIssue>& is)
    {
        std::string out;
        for (const auto& i : is) {
            if (!out.empty())
                out += '\n';
            out += i.to_string();
        }
        return out;
    }

    std::vector<ParseIssue> issues_;
};

inline constexpr std::string_view epsilon_token = "eps";

namespace detail {

struct Token {
    std::string text;
    std::size_t column;  // 1-based
};

inline std::vector<Token> tokenize(std::string_view line)
{
    std::vector<Token> out;
    std::size_t i = 0;
    while (i < line.size()) {
        while (i < line.size() && (line[i] == ' ' || line[i] == '\t'))
            ++i;
        std::size_t begin = i;
        while (i < line.size() && line[i] != ' ' && line[i] != '\t')
            ++i;
        if (i > begin)
            out.push_back({std::string(line.substr(begin, i - begin)), begin + 1});
    }
    return out;
}

class MachineFileParser {
public:
    explicit MachineFileParser(std::string_view text)
    {
        std::size_t n = 1;
        std::size_t pos = 0;
        while (pos <= text.size()) {
            std::size_t end = text.find('\n', pos);
            if (end == std::string_view::npos)
                end = text.size();
            std::string_view line = text.substr(pos, end - pos);
            if (!line.empty() && line.back() == '\r')
                line.remove_suffix(1);
            auto tokens = tokenize(line);
            if (!tokens.empty() && tokens.front().text.front() != '#')
                lines_.push_back({n, std::move(tokens)});
            pos = end + 1;
            ++n;
        }
        eof_line_ = n - 1;
    }

    MachineDef parse()
    {
        MachineDef def;
        std::size_t at = 0;
        for (std::string_view key : header_order) {
            if (at >= lines_.size()) {
                fail(eof_line_, 1, "missing header '" + std::string(key) + ":'");
                break;
            }
            const auto& [line_no, tokens] = lines_[at];
            const auto& head = tokens.front();
            std::string found = head.text.back() == ':' ? head.text.substr(0, head.text.size() - 1) : head.text;
            if (found != key) {
                if (head.text.back() != ':' || !is_header(found))
                    fail(line_no, head.column, "unknown token '" + head.text + "', expected header '" + std::string(key) + ":'");
                else
                    fail(line_no, head.column, "missing header '" + std::string(key) + ":' before '" + head.text + "'");
                throw ParseError(issues_);
            }
            std::vector<Token> values(tokens.begin() + 1, tokens.end());
            read_header(def, key, line_no, head, values);
            ++at;
        }
        if (at == header_order.size())
            for (; at < lines_.size(); ++at)
                read_rule(def, lines_[at].first, lines_[at].second);
        if (!issues_.empty())
            throw ParseError(issues_);
        return def;
    }

private:
    static constexpr std::array<std::string_view, 6> header_order{"type", "states", "sigma", "start", "finals", "rules"};

    static bool is_header(std::string_view s)
    {
        for (auto k : header_order)
            if (k == s)
                return true;
        return false;
    }

    void fail(std::size_t line, std::size_t column, std::string message)
    {
        issues_.push_back({line, column, std::move(message)});
    }

    void read_header(MachineDef& def, std::string_view key, std::size_t line, const Token& head,
                     const std::vector<Token>& values)
    {
        if (key == "type") {
            std::string joined;
            for (const auto& v : values)
                joined += (joined.empty() ? "" : " ") + v.text;
            if (joined == "ndfa")
                def.kind = Kind::ndfa;
            else if (joined == "dfa" || joined == "dfa no-dead") {
                def.kind = Kind::dfa;
                def.no_dead = joined != "dfa";
            } else
                fail(line, values.empty() ? head.column : values.front().column,
                     "unknown machine type '" + joined + "'");
        } else if (key == "states") {
            for (const auto& v : values) {
                if (!is_valid_state_name(v.text))
                    fail(line, v.column, "invalid state name '" + v.text + "'");
                else if (!states_.insert(v.text).second)
                    fail(line, v.column, "duplicate state " + v.text);
                def.states.push_back(v.text);
            }
        } else if (key == "sigma") {
            for (const auto& v : values) {
                if (v.text.size() != 1 || !is_valid_symbol(v.text[0]))
                    fail(line, v.column, "invalid symbol '" + v.text + "'");
                else if (!sigma_.insert(v.text[0]).second)
                    fail(line, v.column, "duplicate symbol " + v.text);
                else
                    def.sigma.push_back(v.text[0]);
            }
        } else if (key == "start") {
            if (values.size() != 1) {
                fail(line, head.column, "expected exactly one start state");
                return;
            }
            def.start = values[0].text;
            expect_state(line, values[0]);
        } else if (key == "finals") {
            for (const auto& v : values) {
                expect_state(line, v);
                def.finals.push_back(v.text);
            }
        } else if (!values.empty()) {
            fail(line, values.front().column, "unexpected token '" + values.front().text + "' after 'rules:'");
        }
    }

    void read_rule(MachineDef& def, std::size_t line, const std::vector<Token>& tokens)
    {
        if (tokens.size() != 3) {
            fail(line, tokens.front().column, "rule must have the form 'SRC LABEL DST'");
            return;
        }
        Rule r{tokens[0].text, eps, tokens[2].text};
        bool ok = expect_state(line, tokens[0]) & expect_state(line, tokens[2]);
        const auto& label = tokens[1];
        if (label.text != epsilon_token) {
            if (label.text.size() != 1 || !sigma_.count(label.text[0])) {
                fail(line, label.column, "unknown symbol '" + label.text + "' (not in sigma)");
                ok = false;
            } else
                r.label = label.text[0];
        }
        if (!ok)
            return;
        if (!rules_.insert(r).second) {
            fail(line, tokens.front().column, "duplicate rule " + r.to_string());
            return;
        }
        def.rules.push_back(std::move(r));
    }

    bool expect_state(std::size_t line, const Token& t)
    {
        if (states_.count(t.text))
            return true;
        fail(line, t.column, "unknown state '" + t.text + "'");
        return false;
    }

    std::vector<std::pair<std::size_t, std::vector<Token>>> lines_;
    std::size_t eof_line_ = 0;
    std::vector<ParseIssue> issues_;
    std::set<State> states_;
    std::set<Symbol> sigma_;
    std::set<Rule> rules_;
};

} // namespace detail

inline MachineDef parse_machine_file(std::string_view text)
{
    return detail::MachineFileParser(text).parse();
}

inline std::string serialize_machine_file(const MachineDef& def)
{
    std::ostringstream o;
    o << "type: " << to_string(def.kind) << (def.kind == Kind::dfa && def.no_dead ? " no-dead" : "") << '\n';
    o << "states:";
    for (const auto& q : def.states)
        o << ' ' << q;
    o << "\nsigma:";
    for (Symbol c : def.sigma)
        o << ' ' << c;
    o << "\nstart: " << def.start << "\nfinals:";
    for (const auto& q : def.finals)
        o << ' ' << q;
    o << "\nrules:\n";
    for (const auto& r : def.rules)
        o << r.src << ' ' << (r.label.is_epsilon() ? std::string(epsilon_token) : std::string(1, r.label.symbol()))
          << ' ' << r.dst << '\n';
    return o.str();
}

inline std::string serialize_machine_file(const Machine& m)
{
    return serialize_machine_file(m.definition());
}

inline std::string read_text_file(const std::string& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw std::runtime_error("cannot read " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

/// Reads, parses and validates a machine file.
inline AnyMachine load_machine(const std::string& path)
{
    return validate_machine(parse_machine_file(read_text_file(path)));
}

} // namespace fsmviz
