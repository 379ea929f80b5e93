#include "corpaudit/annotation_server.hpp"

#include <httplib.h>

#include <json.hpp>

namespace corpaudit {

using json = nlohmann::ordered_json;

namespace {

int status_for(const std::string& code) {
  if (code == "unknown_project") return 404;
  if (code == "duplicate_project") return 409;
  if (code == "invalid_annotation" || code == "bad_request" || code == "unreadable_corpus") {
    return 400;
  }
  return 500;
}

void send_error(httplib::Response& res, int status, const std::string& code,
                const std::string& message, const std::vector<Violation>& violations = {}) {
  json body{{"error", code}, {"message", message}};
  if (!violations.empty()) {
    json list = json::array();
    for (const auto& v : violations) list.push_back({{"code", v.code}, {"message", v.message}});
    body["violations"] = list;
  }
  res.status = status;
  res.set_content(body.dump(), "application/json");
}

void send_json(httplib::Response& res, const json& body, int status = 200) {
  res.status = status;
  res.set_content(body.dump(), "application/json");
}

json item_json(const StoredItem& item) {
  json j{{"index", item.index}, {"id", item.id}, {"lang", item.lang}, {"src", item.src}};
  if (item.tgt) j["tgt"] = *item.tgt;
  return j;
}

ProjectSpec spec_from_json(const json& j) {
  ProjectSpec spec;
  spec.name = j.at("name").get<std::string>();
  spec.corpus_path = j.at("corpus").get<std::string>();
  spec.kind = parse_corpus_kind(j.value("kind", std::string("mono")));
  spec.dataset = j.value("dataset", std::string());
  spec.lang = j.value("lang", std::string());
  spec.src_lang = j.value("src_lang", std::string());
  spec.tgt_lang = j.value("tgt_lang", std::string());
  spec.n = j.value("n", std::uint64_t{100});
  spec.seed = j.value("seed", std::uint64_t{0});
  spec.instructions = j.value("instructions", std::string());
  return spec;
}

AnnotationRecord record_from_request(const json& j) {
  AnnotationRecord r;
  r.item_id = j.at("id").get<std::string>();
  r.rater_id = j.value("rater", std::string());
  r.label = parse_label(j.at("label").get<std::string>());
  r.porn = j.value("porn", false);
  r.offensive = j.value("offensive", false);
  if (j.contains("note") && !j.at("note").is_null()) r.note = j.at("note").get<std::string>();
  return r;
}

}  // namespace

struct AnnotationServer::Impl {
  AnnotationStore& store;
  httplib::Server server;

  explicit Impl(AnnotationStore& s) : store(s) { routes(); }

  // Runs `fn`, translating store, label and JSON errors into error responses.
  template <class Fn>
  auto guarded(Fn fn) {
    return [fn](const httplib::Request& req, httplib::Response& res) {
      try {
        fn(req, res);
      } catch (const StoreError& e) {
        send_error(res, status_for(e.code()), e.code(), e.what(), e.violations());
      } catch (const LabelError& e) {
        send_error(res, 400, "invalid_label", e.what());
      } catch (const json::exception& e) {
        send_error(res, 400, "bad_request", e.what());
      } catch (const std::invalid_argument& e) {
        send_error(res, 400, "bad_request", e.what());
      } catch (const std::exception& e) {
        send_error(res, 500, "internal", e.what());
      }
    };
  }

  void routes() {
    server.Post("/projects", guarded([this](const httplib::Request& req, httplib::Response& res) {
      auto m = store.create_project(spec_from_json(json::parse(req.body)));
      send_json(res, {{"id", m.id}, {"n_items", m.n_items}, {"total_sentences", m.total_sentences}},
                201);
    }));
    server.Get("/projects", guarded([this](const httplib::Request&, httplib::Response& res) {
      send_json(res, {{"projects", store.list_projects()}});
    }));
    server.Get(R"(/projects/([^/]+))",
               guarded([this](const httplib::Request& req, httplib::Response& res) {
                 const auto m = store.manifest(req.matches[1]);
                 send_json(res, {{"id", m.id},
                                 {"dataset", m.dataset},
                                 {"kind", std::string(to_string(m.kind))},
                                 {"lang", m.lang},
                                 {"seed", m.seed},
                                 {"n_items", m.n_items},
                                 {"instructions", m.instructions}});
               }));
    server.Get(R"(/projects/([^/]+)/items)",
               guarded([this](const httplib::Request& req, httplib::Response& res) {
                 if (!req.has_param("rater") || req.get_param_value("rater").empty()) {
                   send_error(res, 400, "bad_request", "query parameter 'rater' is required");
                   return;
                 }
                 std::size_t limit = 10;
                 if (req.has_param("limit")) limit = std::stoul(req.get_param_value("limit"));
                 json items = json::array();
                 for (const auto& item :
                      store.next_items(req.matches[1], req.get_param_value("rater"), limit)) {
                   items.push_back(item_json(item));
                 }
                 send_json(res, {{"items", items}});
               }));
    server.Post(R"(/projects/([^/]+)/annotations)",
                guarded([this](const httplib::Request& req, httplib::Response& res) {
                  const auto r = store.submit(req.matches[1], record_from_request(json::parse(req.body)));
                  send_json(res, {{"ok", true}, {"id", r.item_id}, {"rater", r.rater_id},
                                  {"ts", r.timestamp}});
                }));
    server.Get(R"(/projects/([^/]+)/progress)",
               guarded([this](const httplib::Request& req, httplib::Response& res) {
                 const auto p = store.progress(req.matches[1]);
                 json raters = json::object();
                 for (const auto& [id, r] : p.raters) {
                   raters[id] = {{"labeled", r.labeled}, {"remaining", r.remaining},
                                 {"by_label", r.by_label}};
                 }
                 send_json(res, {{"n_items", p.n_items}, {"records", p.records},
                                 {"raters", raters}, {"by_label", p.by_label}});
               }));
    server.Get(R"(/projects/([^/]+)/export)",
               guarded([this](const httplib::Request& req, httplib::Response& res) {
                 const auto e = store.export_project(req.matches[1]);
                 res.set_header("X-Export-Manifest", e.manifest_json);
                 res.set_content(e.jsonl, "application/x-ndjson");
               }));
  }
};

AnnotationServer::AnnotationServer(AnnotationStore& store) : impl_(std::make_unique<Impl>(store)) {}

AnnotationServer::~AnnotationServer() { stop(); }

bool AnnotationServer::listen(const std::string& host, int port) {
  return impl_->server.listen(host, port);
}

int AnnotationServer::bind_any_port(const std::string& host) {
  return impl_->server.bind_to_any_port(host);
}

bool AnnotationServer::listen_after_bind() { return impl_->server.listen_after_bind(); }

void AnnotationServer::stop() {
  if (impl_) impl_->server.stop();
}

void AnnotationServer::wait_until_ready() const { impl_->server.wait_until_ready(); }

}  // namespace corpaudit
