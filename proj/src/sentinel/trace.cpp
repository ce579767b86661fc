#include "gridsec/sentinel/trace.hpp"

#include <charconv>
#include <sstream>

namespace gridsec::sentinel {

namespace {

std::uint64_t parse_u64(const std::string& s, std::size_t line, const char* what) {
  std::uint64_t v = 0;
  auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || p != s.data() + s.size()) throw TraceParseError(line, std::string("invalid ") + what);
  return v;
}

Bytes parse_hex(const std::string& s, std::size_t line) {
  try {
    return from_hex(s);
  } catch (const Error&) {
    throw TraceParseError(line, "invalid content hex");
  }
}

}  // namespace

ReplayResult replay_trace(std::istream& in) {
  Sentinel sentinel;
  ReplayResult result;
  std::string raw;
  std::size_t line_no = 0;
  std::uint64_t last_tick = 0;

  while (std::getline(in, raw)) {
    ++line_no;
    if (auto hash = raw.find('#'); hash != std::string::npos) raw.erase(hash);
    std::istringstream ls(raw);
    std::vector<std::string> tok;
    for (std::string t; ls >> t;) tok.push_back(t);
    if (tok.empty()) continue;
    if (tok.size() < 3) throw TraceParseError(line_no, "expected: tick kind artifact_id ...");

    const std::uint64_t tick = parse_u64(tok[0], line_no, "tick");
    if (tick < last_tick) throw TraceParseError(line_no, "ticks must not decrease");
    last_tick = tick;
    const std::string& kind = tok[1];
    const std::string& artifact = tok[2];

    if (kind == "register") {
      if (tok.size() != 4) throw TraceParseError(line_no, "register takes exactly one content hex token");
      try {
        sentinel.watch(artifact, parse_hex(tok[3], line_no), tick);
      } catch (const InvalidParameter& e) {
        throw TraceParseError(line_no, e.what());
      }
      continue;
    }

    ChangeEvent ev;
    ev.tick = tick;
    ev.artifact_id = artifact;
    if (kind == "metadata_change") {
      ev.kind = ChangeKind::kMetadata;
    } else if (kind == "content_change") {
      ev.kind = ChangeKind::kContent;
    } else {
      throw TraceParseError(line_no, "unknown event kind '" + kind + "'");
    }

    ProcessRegistry registry;
    std::uint64_t next_pid = 1;
    for (std::size_t i = 3; i < tok.size(); ++i) {
      const std::string& t = tok[i];
      if (t.rfind("content=", 0) == 0) {
        if (ev.kind != ChangeKind::kContent) throw TraceParseError(line_no, "content= only applies to content_change");
        ev.new_content = parse_hex(t.substr(8), line_no);
        continue;
      }
      if (auto colon = t.find(':'); colon != std::string::npos) {
        const std::uint64_t pid = parse_u64(t.substr(0, colon), line_no, "pid");
        if (colon + 1 == t.size()) throw TraceParseError(line_no, "empty process artifact");
        registry.start(pid, t.substr(colon + 1));
      } else {
        registry.start(1'000'000 + next_pid++, t);
      }
    }

    if (auto judged = sentinel.on_event(ev, registry)) result.events.push_back(*judged);
    for (auto& a : sentinel.drain_alerts()) result.alerts.push_back(std::move(a));
  }

  result.warnings = sentinel.warnings();
  result.fingerprint_computations = sentinel.fingerprint_computations();
  return result;
}

ReplayResult replay_trace_text(const std::string& text) {
  std::istringstream in(text);
  return replay_trace(in);
}

}  // namespace gridsec::sentinel
