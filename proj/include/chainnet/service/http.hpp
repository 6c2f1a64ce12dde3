#pragma once

#include <map>
#include <string>

#include "chainnet/service/annotation_service.hpp"

namespace httplib {
class Server;
}

namespace chainnet {

/// Registers the JSON API on `server`. Every route requires
/// "Authorization: Bearer <token>" with a token from `tokens`
/// (token -> annotator id); otherwise 401.
///
///   GET  /tasks/next            {"done": bool, "task": ...}
///   GET  /tasks/{id}
///   POST /tasks/{id}/check      body: draft
///   POST /tasks/{id}/edit       body: edit op + "expected_version" [+ "draft"]
///   PUT  /tasks/{id}/submit     body: {"expected_version": n, "draft": ...}
///   GET  /gloss?lemma=...
///   GET  /export                one annotation per line
///   GET  /tasks/{id}/history
///
/// Errors are {"error": message} with 400 (bad input or rejected
/// submission), 404 (unknown task or lemma) or 409 (version or ownership
/// conflict).
void install_routes(httplib::Server& server, AnnotationService& service, std::map<std::string, std::string> tokens);

/// Blocks serving on host:port until the process is stopped.
void serve(AnnotationService& service, std::map<std::string, std::string> tokens, const std::string& host, int port);

}  // namespace chainnet
