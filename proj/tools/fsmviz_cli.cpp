// fsmviz: command-line front end.
//
//   fsmviz convert IN --out OUT [--dot FILE]
//   fsmviz trace IN WORD
//   fsmviz equiv A B [--mode exact|random] [--n N] [--max-len L] [--seed S]
//   fsmviz steps IN --out DIR
//   fsmviz graph IN [--out FILE]
//   fsmviz serve [--port P] [--static-dir DIR]
//
// Exit status: 0 success or equivalent, 1 not equivalent, 2 usage, parse or
// validation errors.

#include <fsmviz/fsmviz.hpp>
#include <fsmviz/service.hpp>

#include <CLI11.hpp>

#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

namespace fs = std::filesystem;
using namespace fsmviz;

namespace {

constexpr int exit_ok = 0;
constexpr int exit_negative = 1;
constexpr int exit_usage = 2;

void write_file(const fs::path& path, const std::string& text)
{
    std::ofstream out(path, std::ios::binary);
    if (!out || !(out << text))
        throw std::runtime_error("cannot write " + path.string());
}

Word parse_word(std::string text)
{
    if (text == "EMP")
        return {};
    std::erase(text, ' ');
    return text;
}

void print_table(std::ostream& o, const std::vector<std::vector<std::string>>& rows)
{
    std::vector<std::size_t> width;
    for (const auto& row : rows)
        for (std::size_t i = 0; i < row.size(); ++i) {
            width.resize(std::max(width.size(), row.size()));
            width[i] = std::max(width[i], row[i].size());
        }
    for (const auto& row : rows) {
        std::string line;
        for (std::size_t i = 0; i < row.size(); ++i) {
            line += row[i];
            if (i + 1 < row.size())
                line += std::string(width[i] - row[i].size() + 2, ' ');
        }
        o << line << '\n';
    }
}

void print_artifacts(std::ostream& o, const ConversionArtifacts& a)
{
    std::vector<std::vector<std::string>> empties{{"state", "E(state)"}};
    for (const auto& [q, closure] : a.empties.entries)
        empties.push_back({q, closure.to_string()});
    print_table(o, empties);
    o << '\n';

    const auto& sigma = a.dfa.sigma();
    std::vector<std::vector<std::string>> transitions{{"super state"}};
    for (Symbol c : sigma)
        transitions.front().push_back(std::string(1, c));
    for (const auto& [ss, name] : a.names.entries) {
        std::vector<std::string> row{ss.to_string()};
        for (Symbol c : sigma)
            for (const auto& r : a.ss_rules)
                if (r.src == ss && r.sym == c)
                    row.push_back(r.dst.to_string());
        transitions.push_back(std::move(row));
    }
    print_table(o, transitions);
    o << '\n';

    std::vector<std::vector<std::string>> names{{"super state", "dfa state"}};
    for (const auto& [ss, name] : a.names.entries)
        names.push_back({ss.to_string(), name});
    print_table(o, names);
}

std::string format_config(const Config& c)
{
    return "(" + (c.unconsumed.empty() ? std::string("EMP") : "(" + format_word(c.unconsumed) + ")") + " " +
           c.state + ")";
}

int run_convert(const std::string& in, const std::string& out, const std::string& dot, bool ascii)
{
    auto m = load_machine(in);
    DotOptions opts{ascii, {}};
    if (const auto* d = std::get_if<Dfa>(&m)) {
        std::cout << "input already deterministic\n";
        write_file(out, serialize_machine_file(*d));
        if (!dot.empty())
            write_file(dot, machine_to_dot(*d, opts).text);
        return exit_ok;
    }
    auto artifacts = convert(std::get<Nfa>(m));
    print_artifacts(std::cout, artifacts);
    write_file(out, serialize_machine_file(artifacts.dfa));
    if (!dot.empty()) {
        opts.node_labels = dfa_node_labels(artifacts);
        write_file(dot, machine_to_dot(artifacts.dfa, opts).text);
    }
    return exit_ok;
}

int run_trace(const std::string& in, const std::string& word)
{
    auto m = load_machine(in);
    auto t = show_transitions(m, parse_word(word));
    for (const auto& c : t.configs)
        std::cout << format_config(c) << '\n';
    std::cout << to_string(t.result) << '\n';
    return exit_ok;
}

int run_equiv(const std::string& a, const std::string& b, const std::string& mode, std::size_t n,
              std::size_t max_len, std::uint64_t seed)
{
    auto ma = load_machine(a);
    auto mb = load_machine(b);
    if (mode == "random") {
        if (random_equiv_test(ma, mb, n, max_len, seed)) {
            std::cout << "equivalent\n";
            return exit_ok;
        }
        std::cout << "not equivalent\n";
        return exit_negative;
    }
    auto report = exact_equiv(ma, mb);
    if (report.equivalent) {
        std::cout << "equivalent\n";
        return exit_ok;
    }
    std::cout << "not equivalent\ncounterexample: " << format_word(*report.counterexample) << '\n';
    return exit_negative;
}

int run_steps(const std::string& in, const std::string& dir, bool ascii)
{
    auto m = load_machine(in);
    if (!std::holds_alternative<Nfa>(m)) {
        std::cerr << "steps: input must be an ndfa\n";
        return exit_usage;
    }
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec) {
        std::cerr << "steps: cannot create " << dir << ": " << ec.message() << '\n';
        return exit_usage;
    }
    const DotOptions opts{ascii, {}};
    VizState vs = init_viz(std::get<Nfa>(m));
    for (std::size_t k = 0; k <= vs.total(); ++k) {
        auto snap = snapshot(vs.at(k));
        write_file(fs::path(dir) / ("nfa_" + std::to_string(k) + ".dot"),
                   nfa_partition_to_dot(vs.nfa(), snap.partition, opts).text);
        write_file(fs::path(dir) / ("dfa_" + std::to_string(k) + ".dot"), dfa_snapshot_to_dot(snap).text);
    }
    std::cout << vs.total() + 1 << " steps written to " << dir << '\n';
    return exit_ok;
}

int run_graph(const std::string& in, const std::string& out, bool ascii)
{
    auto doc = machine_to_dot(load_machine(in), {ascii, {}});
    if (out.empty())
        std::cout << doc.text;
    else
        write_file(out, doc.text);
    return exit_ok;
}

int run_serve(int port, const std::string& static_dir, int idle_seconds)
{
    ServiceOptions opts;
    opts.idle_timeout = std::chrono::seconds(idle_seconds);
    if (!static_dir.empty())
        opts.static_dir = static_dir;
    Service service(opts);
    if (!service.bind_to_port("0.0.0.0", port)) {
        std::cerr << "serve: cannot listen on port " << port << '\n';
        return exit_usage;
    }
    std::cout << "listening on port " << port << std::endl;
    return service.listen_after_bind() ? exit_ok : exit_usage;
}

int default_port()
{
    if (const char* env = std::getenv("FSMVIZ_PORT"))
        return std::atoi(env);
    return 8080;
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Nondeterministic to deterministic automaton conversion with step-through visualization"};
    app.require_subcommand(1);

    std::string in, in2, out, dot, word, mode = "exact", static_dir;
    bool ascii = false;
    std::size_t n = 500, max_len = 8;
    std::uint64_t seed = 0;
    int port = default_port();
    int idle = 3600;

    auto* convert_cmd = app.add_subcommand("convert", "Convert an ndfa to an equivalent dfa");
    convert_cmd->add_option("input", in, "Machine file")->required();
    convert_cmd->add_option("--out", out, "Output machine file")->required();
    convert_cmd->add_option("--dot", dot, "Also write the dfa's transition diagram");
    convert_cmd->add_flag("--ascii", ascii, "Write EMP instead of the epsilon glyph");

    auto* trace_cmd = app.add_subcommand("trace", "Print the configurations traversed on a word");
    trace_cmd->add_option("input", in, "Machine file")->required();
    trace_cmd->add_option("word", word, "Input word, e.g. aab or EMP")->required();

    auto* equiv_cmd = app.add_subcommand("equiv", "Test two machines for language equivalence");
    equiv_cmd->add_option("a", in, "First machine file")->required();
    equiv_cmd->add_option("b", in2, "Second machine file")->required();
    equiv_cmd->add_option("--mode", mode, "exact or random")->check(CLI::IsMember({"exact", "random"}));
    equiv_cmd->add_option("--n", n, "Number of random words");
    equiv_cmd->add_option("--max-len", max_len, "Maximum random word length");
    equiv_cmd->add_option("--seed", seed, "Random seed");

    auto* steps_cmd = app.add_subcommand("steps", "Write the nfa/dfa diagrams of every conversion step");
    steps_cmd->add_option("input", in, "Machine file")->required();
    steps_cmd->add_option("--out", out, "Output directory")->required();
    steps_cmd->add_flag("--ascii", ascii, "Write EMP instead of the epsilon glyph");

    auto* graph_cmd = app.add_subcommand("graph", "Write a machine's transition diagram");
    graph_cmd->add_option("input", in, "Machine file")->required();
    graph_cmd->add_option("--out", out, "Output file (default: stdout)");
    graph_cmd->add_flag("--ascii", ascii, "Write EMP instead of the epsilon glyph");

    auto* serve_cmd = app.add_subcommand("serve", "Run the visualization service");
    serve_cmd->add_option("--port", port, "Port (default: $FSMVIZ_PORT or 8080)");
    serve_cmd->add_option("--static-dir", static_dir, "Directory of web UI assets to serve at /");
    serve_cmd->add_option("--idle-timeout", idle, "Seconds before an idle session expires");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return exit_usage;
    }

    try {
        if (*convert_cmd)
            return run_convert(in, out, dot, ascii);
        if (*trace_cmd)
            return run_trace(in, word);
        if (*equiv_cmd)
            return run_equiv(in, in2, mode, n, max_len, seed);
        if (*steps_cmd)
            return run_steps(in, out, ascii);
        if (*graph_cmd)
            return run_graph(in, out, ascii);
        if (*serve_cmd)
            return run_serve(port, static_dir, idle);
    } catch (const ParseError& e) {
        std::cerr << "parse error:\n" << e.what() << '\n';
    } catch (const ValidationError& e) {
        for (const auto& p : e.problems())
            std::cerr << "invalid machine: " << p << '\n';
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
    }
    return exit_usage;
}
