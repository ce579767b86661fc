#pragma once

#include <istream>
#include <string>
#include <vector>

#include "gridsec/errors.hpp"
#include "gridsec/sentinel/sentinel.hpp"

namespace gridsec::sentinel {

class TraceParseError : public Error {
 public:
  TraceParseError(std::size_t line, const std::string& what)
      : Error("line " + std::to_string(line) + ": " + what), line_(line) {}
  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

struct ReplayResult {
  std::vector<IntegrityEvent> events;
  std::vector<Alert> alerts;
  std::uint64_t warnings = 0;
  std::uint64_t fingerprint_computations = 0;
};

/// Replays a line-oriented trace:
///
///   # comment
///   <tick> register <artifact> <content-hex>
///   <tick> metadata_change <artifact> [process...]
///   <tick> content_change <artifact> [content=<hex>] [process...]
///
/// Each process token is `pid:artifact` or a bare artifact id, and lists a
/// process active at that tick. Ticks may not decrease.
ReplayResult replay_trace(std::istream& in);
ReplayResult replay_trace_text(const std::string& text);

}  // namespace gridsec::sentinel
