// Session-based HTTP API around the stepping engine.
//
//   POST   /api/sessions              body: machine file text -> 201 payload
//   GET    /api/sessions/{id}                                 -> 200 payload
//   POST   /api/sessions/{id}/step    {"action": "forward" | "backward" | "finish" | "reset"}
//   DELETE /api/sessions/{id}                                 -> 204
//
// Boundary steps answer 409 with {"code": "at-start"} or {"code": "at-end"}.
// Sessions live in memory and expire after an idle timeout. Each session's
// steps are serialized by a per-session mutex.

#pragma once

#include "core.hpp"
#include "dot.hpp"
#include "machine_file.hpp"
#include "subset.hpp"
#include "viz.hpp"

#include <httplib.h>
#include <json.hpp>

#include <chrono>
#include <cstdint>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <random>
#include <string>

namespace fsmviz {

using json = nlohmann::json;

namespace detail {

inline json to_json(const SuperState& ss)
{
    return ss.members();
}

inline json to_json(const Rule& r)
{
    return {{"src", r.src},
            {"label", r.label.is_epsilon() ? std::string(epsilon_token) : std::string(1, r.label.symbol())},
            {"dst", r.dst}};
}

inline json to_json(const SsRule& r, const SsNameTable& names)
{
    return {{"src", to_json(r.src)},
            {"sym", std::string(1, r.sym)},
            {"dst", to_json(r.dst)},
            {"src_name", names.name_of(r.src)},
            {"dst_name", names.name_of(r.dst)}};
}

} // namespace detail

/// Wire form of one visualization step: both diagrams as DOT plus the tables behind them.
inline json snapshot_payload(const VizState& vs)
{
    const auto snap = snapshot(vs);
    const auto& art = vs.artifacts();
    json out;
    out["cursor"] = snap.cursor;
    out["total"] = snap.total;
    out["can_forward"] = snap.can_forward;
    out["can_backward"] = snap.can_backward;
    out["nfa_dot"] = nfa_partition_to_dot(vs.nfa(), snap.partition).text;
    out["dfa_dot"] = dfa_snapshot_to_dot(snap).text;

    json processed = json::array();
    for (const auto& e : snap.dfa_edges) {
        auto j = detail::to_json(e.rule, art.names);
        j["highlighted"] = e.highlighted;
        processed.push_back(std::move(j));
    }
    out["processed"] = std::move(processed);

    json unprocessed = json::array();
    for (const auto& e : vs.unprocessed())
        unprocessed.push_back(detail::to_json(e, art.names));
    out["unprocessed"] = std::move(unprocessed);

    json names = json::array();
    for (const auto& [ss, name] : art.names.entries)
        names.push_back({{"super_state", detail::to_json(ss)}, {"name", name}});
    out["names"] = std::move(names);

    json empties = json::array();
    for (const auto& [q, closure] : art.empties.entries)
        empties.push_back({{"state", q}, {"closure", detail::to_json(closure)}});
    out["empties"] = std::move(empties);

    json nodes = json::array();
    for (const auto& n : snap.dfa_nodes)
        nodes.push_back({{"super_state", detail::to_json(n.super_state)},
                         {"label", n.super_state.label()},
                         {"start", n.is_start},
                         {"final", n.is_final}});
    out["dfa_nodes"] = std::move(nodes);

    json partition = json::array();
    for (const auto& r : vs.nfa().rules()) {
        auto cls = snap.partition.classify(r);
        auto j = detail::to_json(r);
        j["class"] = to_string(cls);
        j["color"] = edge_color(cls);
        j["fedge_count"] = snap.partition.fedge_count(r);
        partition.push_back(std::move(j));
    }
    out["partition"] = std::move(partition);
    return out;
}

struct Session {
    std::string id;
    std::chrono::system_clock::time_point created_at;
    std::mutex mutex;  // guards viz
    VizState viz;

    Session(std::string id_, VizState v)
        : id(std::move(id_)), created_at(std::chrono::system_clock::now()), viz(std::move(v))
    {}
};

class SessionStore {
public:
    using Clock = std::chrono::steady_clock;

    explicit SessionStore(std::chrono::seconds idle_timeout = std::chrono::hours(1))
        : idle_timeout_(idle_timeout), rng_(std::random_device{}())
    {}

    std::shared_ptr<Session> create(VizState viz)
    {
        std::lock_guard lock(mutex_);
        expire_locked(Clock::now());
        std::string id;
        do {
            id = fresh_id();
        } while (entries_.count(id));
        auto s = std::make_shared<Session>(id, std::move(viz));
        entries_.emplace(id, Entry{s, Clock::now()});
        return s;
    }

    std::shared_ptr<Session> find(const std::string& id)
    {
        std::lock_guard lock(mutex_);
        const auto now = Clock::now();
        expire_locked(now);
        auto it = entries_.find(id);
        if (it == entries_.end())
            return nullptr;
        it->second.last_used = now;
        return it->second.session;
    }

    bool erase(const std::string& id)
    {
        std::lock_guard lock(mutex_);
        return entries_.erase(id) != 0;
    }

    std::size_t size()
    {
        std::lock_guard lock(mutex_);
        return entries_.size();
    }

    /// Drops sessions idle for longer than the timeout as of `now`.
    void expire(Clock::time_point now)
    {
        std::lock_guard lock(mutex_);
        expire_locked(now);
    }

private:
    struct Entry {
        std::shared_ptr<Session> session;
        Clock::time_point last_used;
    };

    void expire_locked(Clock::time_point now)
    {
        std::erase_if(entries_, [&](const auto& kv) { return now - kv.second.last_used > idle_timeout_; });
    }

    std::string fresh_id()
    {
        static constexpr char hex[] = "0123456789abcdef";
        std::string id;
        for (int i = 0; i < 2; ++i) {
            std::uint64_t v = rng_();
            for (int j = 0; j < 16; ++j, v >>= 4)
                id += hex[v & 0xf];
        }
        return id;
    }

    std::chrono::seconds idle_timeout_;
    std::mutex mutex_;
    std::mt19937_64 rng_;
    std::map<std::string, Entry> entries_;
};

struct ServiceOptions {
    std::chrono::seconds idle_timeout = std::chrono::hours(1);
    std::optional<std::string> static_dir;
};

class Service {
public:
    explicit Service(ServiceOptions opts = {}) : sessions_(opts.idle_timeout)
    {
        // SO_REUSEADDR only, so a port already in use fails to bind.
        server_.set_socket_options([](socket_t sock) {
            int yes = 1;
            setsockopt(sock, SOL_SOCKET, SO_REUSEADDR, &yes, sizeof(yes));
        });
        if (opts.static_dir && !server_.set_mount_point("/", *opts.static_dir))
            throw std::runtime_error("static directory not found: " + *opts.static_dir);
        routes();
    }

    Service(const Service&) = delete;
    Service& operator=(const Service&) = delete;

    bool listen(const std::string& host, int port) { return server_.listen(host, port); }
    bool bind_to_port(const std::string& host, int port) { return server_.bind_to_port(host, port); }
    int bind_to_any_port(const std::string& host) { return server_.bind_to_any_port(host); }
    bool listen_after_bind() { return server_.listen_after_bind(); }
    void wait_until_ready() { server_.wait_until_ready(); }
    void stop() { server_.stop(); }

    SessionStore& sessions() noexcept { return sessions_; }

private:
    static void reply(httplib::Response& res, int status, const json& body)
    {
        res.status = status;
        res.set_content(body.dump(), "application/json");
    }

    static void reply_error(httplib::Response& res, int status, std::string_view code, const std::string& message)
    {
        reply(res, status, {{"code", code}, {"message", message}});
    }

    static json payload_for(const Session& s)
    {
        auto p = snapshot_payload(s.viz);
        p["id"] = s.id;
        return p;
    }

    void routes()
    {
        server_.Post("/api/sessions", [this](const httplib::Request& req, httplib::Response& res) {
            try {
                auto nfa = as_nfa(validate_machine(parse_machine_file(req.body)));
                auto s = sessions_.create(VizState(std::move(nfa)));
                std::lock_guard lock(s->mutex);
                reply(res, 201, payload_for(*s));
            } catch (const ParseError& e) {
                json errors = json::array();
                for (const auto& i : e.issues())
                    errors.push_back({{"line", i.line}, {"column", i.column}, {"message", i.message}});
                reply(res, 400, {{"code", "parse-error"}, {"message", e.what()}, {"errors", errors}});
            } catch (const ValidationError& e) {
                reply(res, 400, {{"code", "invalid-machine"}, {"message", e.what()}, {"errors", e.problems()}});
            }
        });

        server_.Get(R"(/api/sessions/([0-9a-f]+))", [this](const httplib::Request& req, httplib::Response& res) {
            auto s = sessions_.find(req.matches[1]);
            if (!s)
                return reply_error(res, 404, "not-found", "no such session");
            std::lock_guard lock(s->mutex);
            reply(res, 200, payload_for(*s));
        });

        server_.Post(R"(/api/sessions/([0-9a-f]+)/step)", [this](const httplib::Request& req, httplib::Response& res) {
            auto s = sessions_.find(req.matches[1]);
            if (!s)
                return reply_error(res, 404, "not-found", "no such session");
            auto body = json::parse(req.body, nullptr, false);
            if (body.is_discarded() || !body.is_object() || !body.contains("action") || !body["action"].is_string())
                return reply_error(res, 400, "bad-request", R"(expected {"action": ...})");
            const auto action = body["action"].get<std::string>();

            std::lock_guard lock(s->mutex);
            try {
                if (action == "forward")
                    s->viz = step_forward(s->viz);
                else if (action == "backward")
                    s->viz = step_backward(s->viz);
                else if (action == "finish")
                    s->viz = finish(s->viz);
                else if (action == "reset")
                    s->viz = reset(s->viz);
                else
                    return reply_error(res, 400, "bad-action", "unknown action '" + action + "'");
            } catch (const VizBoundaryError& e) {
                return reply_error(res, 409, e.code_name(), e.what());
            }
            reply(res, 200, payload_for(*s));
        });

        server_.Delete(R"(/api/sessions/([0-9a-f]+))", [this](const httplib::Request& req, httplib::Response& res) {
            if (!sessions_.erase(req.matches[1]))
                return reply_error(res, 404, "not-found", "no such session");
            res.status = 204;
        });
    }

    SessionStore sessions_;
    httplib::Server server_;
};

} // namespace fsmviz
