#pragma once

#include <memory>
#include <string>

#include "corpaudit/annotation_store.hpp"

namespace corpaudit {

// HTTP+JSON front end of an AnnotationStore.
//
//   POST /projects                      {"name","corpus","kind","n","seed",...}
//   GET  /projects                      ids
//   GET  /projects/{id}                 manifest
//   GET  /projects/{id}/items?rater=&limit=
//   POST /projects/{id}/annotations     {"id","rater","label","porn","offensive","note"}
//   GET  /projects/{id}/progress
//   GET  /projects/{id}/export          JSONL body, manifest in X-Export-Manifest
//
// Errors are {"error": code, "message": text[, "violations": [...]]}.
class AnnotationServer {
 public:
  explicit AnnotationServer(AnnotationStore& store);
  ~AnnotationServer();

  // Binds and serves until stop(); returns false if binding failed.
  bool listen(const std::string& host, int port);
  // Binds to an ephemeral port and returns it (or -1); serve with
  // listen_after_bind() on another thread.
  int bind_any_port(const std::string& host);
  bool listen_after_bind();
  void stop();
  void wait_until_ready() const;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

}  // namespace corpaudit
