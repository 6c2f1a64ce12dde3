#include "chainnet/service/http.hpp"

#include <functional>

#include "httplib.h"

namespace chainnet {

namespace {

void reply(httplib::Response& res, int status, const Json& body) {
    res.status = status;
    res.set_content(body.dump(), "application/json");
}

Json parse_body(const httplib::Request& req) {
    try {
        return Json::parse(req.body);
    } catch (const Json::parse_error& e) {
        throw ServiceError(400, std::string("request body is not JSON: ") + e.what());
    }
}

long expected_version(const Json& body) {
    if (!body.is_object() || !body.contains("expected_version") || !body.at("expected_version").is_number_integer()) {
        throw ServiceError(400, "missing integer 'expected_version'");
    }
    return body.at("expected_version").get<long>();
}

using Handler = std::function<void(const httplib::Request&, httplib::Response&, const std::string& annotator)>;

httplib::Server::Handler guarded(const std::map<std::string, std::string>& tokens, Handler handler) {
    return [&tokens, handler = std::move(handler)](const httplib::Request& req, httplib::Response& res) {
        const auto header = req.get_header_value("Authorization");
        const std::string prefix = "Bearer ";
        auto it = header.rfind(prefix, 0) == 0 ? tokens.find(header.substr(prefix.size())) : tokens.end();
        if (it == tokens.end()) {
            reply(res, 401, Json{{"error", "missing or unknown bearer token"}});
            return;
        }
        try {
            handler(req, res, it->second);
        } catch (const ServiceError& e) {
            reply(res, e.status(), Json{{"error", e.what()}});
        } catch (const DataError& e) {
            reply(res, 400, Json{{"error", e.what()}});
        } catch (const UsageError& e) {
            reply(res, 400, Json{{"error", e.what()}});
        } catch (const Json::exception& e) {
            reply(res, 400, Json{{"error", e.what()}});
        }
    };
}

}  // namespace

void install_routes(httplib::Server& server, AnnotationService& service, std::map<std::string, std::string> tokens) {
    // The handlers outlive this call, so the token table is owned by them.
    auto table = std::make_shared<const std::map<std::string, std::string>>(std::move(tokens));
    auto route = [table](Handler h) {
        return [table, inner = guarded(*table, std::move(h))](const httplib::Request& req, httplib::Response& res) {
            inner(req, res);
        };
    };

    server.Get("/tasks/next", route([&service](const auto&, auto& res, const std::string& annotator) {
        auto task = service.next_task(annotator);
        if (!task) {
            reply(res, 200, Json{{"done", true}});
            return;
        }
        reply(res, 200, Json{{"done", false}, {"task", to_json(*task)}});
    }));

    server.Get("/tasks/:id", route([&service](const auto& req, auto& res, const std::string&) {
        reply(res, 200, to_json(service.get_task(req.path_params.at("id"))));
    }));

    server.Post("/tasks/:id/check", route([&service](const auto& req, auto& res, const std::string&) {
        const auto body = parse_body(req);
        const Json& draft = body.is_object() && body.contains("draft") ? body.at("draft") : body;
        reply(res, 200, to_json(service.check(req.path_params.at("id"), draft)));
    }));

    server.Post("/tasks/:id/edit", route([&service](const auto& req, auto& res, const std::string& annotator) {
        const auto body = parse_body(req);
        const auto version = expected_version(body);
        const auto op = edit_op_from_json(body);
        std::optional<Json> draft;
        if (body.contains("draft") && !body.at("draft").is_null()) draft = body.at("draft");
        reply(res, 200, to_json(service.edit(req.path_params.at("id"), annotator, version, op, draft)));
    }));

    server.Put("/tasks/:id/submit", route([&service](const auto& req, auto& res, const std::string& annotator) {
        const auto body = parse_body(req);
        const auto version = expected_version(body);
        if (!body.contains("draft")) throw ServiceError(400, "missing 'draft'");
        const auto outcome = service.submit(req.path_params.at("id"), annotator, version, body.at("draft"));
        reply(res, outcome.accepted ? 200 : 400,
              Json{{"accepted", outcome.accepted}, {"task", to_json(outcome.task)}, {"check", to_json(outcome.check)}});
    }));

    server.Get("/tasks/:id/history", route([&service](const auto& req, auto& res, const std::string&) {
        reply(res, 200, service.history(req.path_params.at("id")));
    }));

    server.Get("/gloss", route([&service](const auto& req, auto& res, const std::string&) {
        if (!req.has_param("lemma")) throw ServiceError(400, "missing 'lemma' parameter");
        const auto lemma = req.get_param_value("lemma");
        auto entry = service.gloss(lemma);
        if (!entry) throw ServiceError(404, "no entry for '" + lemma + "'");
        reply(res, 200, *entry);
    }));

    server.Get("/export", route([&service](const auto&, auto& res, const std::string&) {
        res.status = 200;
        res.set_content(service.export_jsonl(), "application/x-ndjson");
    }));
}

void serve(AnnotationService& service, std::map<std::string, std::string> tokens, const std::string& host, int port) {
    httplib::Server server;
    install_routes(server, service, std::move(tokens));
    if (!server.listen(host, port)) throw UsageError("cannot listen on " + host + ":" + std::to_string(port));
}

}  // namespace chainnet
