#include "gridsec/sim/scenario.hpp"

#include <yaml-cpp/yaml.h>

#include <fstream>
#include <limits>
#include <sstream>

#include "gridsec/crypto/hmac.hpp"
#include "gridsec/keyx/spatial.hpp"
#include "gridsec/keyx/temporal.hpp"

namespace gridsec::sim {

const char* to_string(KeyScheme scheme) { return scheme == KeyScheme::kSpatial ? "spatial" : "temporal"; }

const char* to_string(Strategy strategy) {
  switch (strategy) {
    case Strategy::kRecordOnly: return "record_only";
    case Strategy::kSpatialReconstruct: return "spatial_reconstruct";
    case Strategy::kTemporalGuess: return "temporal_guess";
    case Strategy::kWinnowAttempt: return "winnow_attempt";
  }
  return "?";
}

ConfigError::ConfigError(const std::string& source, std::size_t line, const std::string& path, const std::string& what)
    : Error(source + (line ? ":" + std::to_string(line) : std::string()) + ": " + (path.empty() ? "" : path + ": ") +
            what),
      line_(line),
      path_(path),
      detail_(what) {}

namespace {

class Parser {
 public:
  explicit Parser(std::string source) : source_(std::move(source)) {}

  [[noreturn]] void fail(const YAML::Node& node, const std::string& path, const std::string& what) const {
    const std::size_t line = node.IsDefined() && node.Mark().line >= 0 ? static_cast<std::size_t>(node.Mark().line) + 1 : 0;
    throw ConfigError(source_, line, path, what);
  }

  void only_keys(const YAML::Node& map, const std::string& path, std::initializer_list<const char*> allowed) const {
    if (!map.IsMap()) fail(map, path, "expected a mapping");
    for (const auto& kv : map) {
      const auto key = kv.first.as<std::string>();
      bool ok = false;
      for (const char* a : allowed) ok = ok || key == a;
      if (!ok) fail(kv.first, join(path, key), "unknown key");
    }
  }

  template <class T>
  T scalar(const YAML::Node& node, const std::string& path) const {
    if (!node.IsScalar()) fail(node, path, "expected a scalar");
    try {
      return node.as<T>();
    } catch (const YAML::Exception&) {
      fail(node, path, "invalid value '" + node.Scalar() + "'");
    }
  }

  std::uint64_t u64(const YAML::Node& node, const std::string& path) const {
    if (node.IsScalar() && !node.Scalar().empty() && node.Scalar()[0] == '-') fail(node, path, "must not be negative");
    return scalar<std::uint64_t>(node, path);
  }

  template <class T>
  void optional(const YAML::Node& map, const char* key, const std::string& path, T& out) const {
    if (auto n = map[key]) {
      if constexpr (std::is_same_v<T, std::size_t> || std::is_same_v<T, std::uint64_t>) {
        out = static_cast<T>(u64(n, join(path, key)));
      } else if constexpr (std::is_same_v<T, unsigned>) {
        const auto v = u64(n, join(path, key));
        if (v > std::numeric_limits<unsigned>::max()) fail(n, join(path, key), "out of range");
        out = static_cast<unsigned>(v);
      } else {
        out = scalar<T>(n, join(path, key));
      }
    }
  }

  static std::string join(const std::string& path, const std::string& key) {
    return path.empty() ? key : path + "." + key;
  }
  static std::string index(const std::string& path, std::size_t i) { return path + "[" + std::to_string(i) + "]"; }

  Scenario parse(const YAML::Node& root) {
    Scenario s;
    if (!root.IsDefined() || root.IsNull()) throw ConfigError(source_, 0, "", "empty scenario");
    only_keys(root, "", {"name", "seed", "topology", "key_exchange", "channel", "jobs", "adversaries", "compromised_drms"});
    optional(root, "name", "", s.name);
    optional(root, "seed", "", s.seed);
    if (!root["topology"]) fail(root, "topology", "missing");
    parse_topology(root["topology"], s);
    if (auto n = root["key_exchange"]) parse_key_exchange(n, s.key_exchange);
    if (auto n = root["channel"]) parse_channel(n, s.channel);
    if (auto n = root["jobs"]) {
      only_keys(n, "jobs", {"count", "payload_bytes"});
      optional(n, "count", "jobs", s.jobs.count);
      optional(n, "payload_bytes", "jobs", s.jobs.payload_bytes);
    }
    if (auto n = root["adversaries"]) parse_adversaries(n, s);
    if (auto n = root["compromised_drms"]) {
      if (!n.IsSequence()) fail(n, "compromised_drms", "expected a list");
      for (std::size_t i = 0; i < n.size(); ++i) {
        const auto id = scalar<std::string>(n[i], index("compromised_drms", i));
        if (!s.topology.has_node(id) || s.topology.role(id) != NodeRole::kDrm)
          fail(n[i], index("compromised_drms", i), "'" + id + "' is not a drm");
        s.compromised_drms.insert(id);
      }
    }
    check(root, s);
    return s;
  }

 private:
  void parse_topology(const YAML::Node& t, Scenario& s) {
    only_keys(t, "topology", {"nodes", "edges", "paths"});
    const auto nodes = t["nodes"];
    if (!nodes || !nodes.IsMap()) fail(nodes ? nodes : t, "topology.nodes", "expected a mapping of id: role");
    for (const auto& kv : nodes) {
      const auto id = scalar<std::string>(kv.first, "topology.nodes");
      const auto path = join("topology.nodes", id);
      try {
        s.topology.add_node(id, parse_role(scalar<std::string>(kv.second, path)));
      } catch (const Error& e) {
        fail(kv.second, path, e.what());
      }
    }
    const auto edges = t["edges"];
    if (!edges || !edges.IsSequence()) fail(edges ? edges : t, "topology.edges", "expected a list of [a, b, latency]");
    for (std::size_t i = 0; i < edges.size(); ++i) {
      const auto e = edges[i];
      const auto path = index("topology.edges", i);
      if (!e.IsSequence() || e.size() != 3) fail(e, path, "expected [a, b, latency]");
      try {
        s.topology.add_edge(scalar<std::string>(e[0], path), scalar<std::string>(e[1], path), u64(e[2], path));
      } catch (const TopologyError& err) {
        fail(e, path, err.what());
      }
    }
    const auto paths = t["paths"];
    if (!paths || !paths.IsMap()) fail(paths ? paths : t, "topology.paths", "expected a mapping of drm: [routes]");
    for (const auto& kv : paths) {
      const auto drm = scalar<std::string>(kv.first, "topology.paths");
      const auto path = join("topology.paths", drm);
      if (!kv.second.IsSequence()) fail(kv.second, path, "expected a list of routes");
      for (std::size_t r = 0; r < kv.second.size(); ++r) {
        const auto route = kv.second[r];
        if (!route.IsSequence()) fail(route, index(path, r), "expected a list of node ids");
        Route nodes_on;
        for (std::size_t i = 0; i < route.size(); ++i) nodes_on.push_back(scalar<std::string>(route[i], index(path, r)));
        s.topology.add_route(drm, std::move(nodes_on));
      }
    }
    try {
      s.topology.validate();
    } catch (const TopologyError& e) {
      fail(paths, "topology", e.what());
    }
  }

  void parse_key_exchange(const YAML::Node& n, KeyExchangeConfig& k) {
    const std::string p = "key_exchange";
    only_keys(n, p, {"scheme", "key_bits", "threshold", "field_prime", "prime", "parts", "packet_interval"});
    if (auto sch = n["scheme"]) {
      const auto v = scalar<std::string>(sch, join(p, "scheme"));
      if (v == "spatial") k.scheme = KeyScheme::kSpatial;
      else if (v == "temporal") k.scheme = KeyScheme::kTemporal;
      else fail(sch, join(p, "scheme"), "expected spatial or temporal");
    }
    optional(n, "key_bits", p, k.key_bits);
    optional(n, "threshold", p, k.threshold);
    optional(n, "field_prime", p, k.field_prime);
    optional(n, "prime", p, k.prime);
    optional(n, "parts", p, k.parts);
    optional(n, "packet_interval", p, k.packet_interval);
  }

  void parse_channel(const YAML::Node& n, ChannelSettings& c) {
    const std::string p = "channel";
    only_keys(n, p, {"chaff_ratio", "mac_bits", "audit_mode", "chaff_payload", "chunk_bytes"});
    optional(n, "chaff_ratio", p, c.chaff_ratio);
    optional(n, "mac_bits", p, c.mac_bits);
    optional(n, "audit_mode", p, c.audit_mode);
    optional(n, "chunk_bytes", p, c.chunk_bytes);
    if (auto cp = n["chaff_payload"]) {
      const auto v = scalar<std::string>(cp, join(p, "chaff_payload"));
      if (v == "complement") c.chaff_payload = wnc::ChaffPayload::kComplement;
      else if (v == "random") c.chaff_payload = wnc::ChaffPayload::kRandom;
      else fail(cp, join(p, "chaff_payload"), "expected complement or random");
    }
  }

  void parse_adversaries(const YAML::Node& list, Scenario& s) {
    if (!list.IsSequence()) fail(list, "adversaries", "expected a list");
    for (std::size_t i = 0; i < list.size(); ++i) {
      const auto a = list[i];
      const auto path = index("adversaries", i);
      only_keys(a, path, {"name", "taps", "strategy", "knowledge", "candidate_primes"});
      AdversaryConfig adv;
      adv.name = "adversary" + std::to_string(i);
      optional(a, "name", path, adv.name);
      if (auto st = a["strategy"]) {
        const auto v = scalar<std::string>(st, join(path, "strategy"));
        if (v == "record_only") adv.strategy = Strategy::kRecordOnly;
        else if (v == "spatial_reconstruct") adv.strategy = Strategy::kSpatialReconstruct;
        else if (v == "temporal_guess") adv.strategy = Strategy::kTemporalGuess;
        else if (v == "winnow_attempt") adv.strategy = Strategy::kWinnowAttempt;
        else fail(st, join(path, "strategy"), "unknown strategy '" + v + "'");
      }
      const auto taps = a["taps"];
      if (!taps || !taps.IsSequence()) fail(taps ? taps : a, join(path, "taps"), "expected a list of [a, b] edges");
      for (std::size_t t = 0; t < taps.size(); ++t) {
        const auto tp = index(join(path, "taps"), t);
        if (!taps[t].IsSequence() || taps[t].size() != 2) fail(taps[t], tp, "expected [a, b]");
        const auto x = scalar<std::string>(taps[t][0], tp);
        const auto y = scalar<std::string>(taps[t][1], tp);
        if (!s.topology.has_edge(x, y)) fail(taps[t], tp, "no edge " + x + "-" + y);
        adv.taps.push_back(edge_key(x, y));
      }
      if (auto kn = a["knowledge"]) {
        if (!kn.IsSequence()) fail(kn, join(path, "knowledge"), "expected a list");
        for (std::size_t k = 0; k < kn.size(); ++k) {
          const auto v = scalar<std::string>(kn[k], index(join(path, "knowledge"), k));
          if (v == "mac_key") adv.knows_mac_key = true;
          else if (v == "prime_p") adv.knows_prime = true;
          else fail(kn[k], index(join(path, "knowledge"), k), "expected mac_key or prime_p");
        }
      }
      if (auto cp = a["candidate_primes"]) {
        if (!cp.IsSequence()) fail(cp, join(path, "candidate_primes"), "expected a list");
        for (std::size_t k = 0; k < cp.size(); ++k)
          adv.candidate_primes.push_back(u64(cp[k], index(join(path, "candidate_primes"), k)));
      }
      s.adversaries.push_back(std::move(adv));
    }
  }

  void check(const YAML::Node& root, const Scenario& s) {
    try {
      s.validate();
    } catch (const ConfigError& e) {
      // Re-anchor on the section that owns the offending key.
      const auto head = e.path().substr(0, e.path().find_first_of(".["));
      const auto node = head.empty() ? root : root[head];
      throw ConfigError(source_, node.IsDefined() ? static_cast<std::size_t>(node.Mark().line) + 1 : 0, e.path(),
                        e.detail());
    }
  }

  std::string source_;
};

}  // namespace

void Scenario::validate() const {
  auto bad = [](const std::string& path, const std::string& what) { throw ConfigError("", 0, path, what); };
  try {
    topology.validate();
  } catch (const TopologyError& e) {
    bad("topology", e.what());
  }

  const auto& k = key_exchange;
  if (k.key_bits < keyx::kMinKeyBits || k.key_bits > 8 * crypto::MacKey::kMaxBytes)
    bad("key_exchange.key_bits", "must be in [16, 512] so the key can key the channel MAC");
  if (k.scheme == KeyScheme::kSpatial) {
    for (const auto& drm : topology.drms()) {
      try {
        keyx::ThresholdPolicy{k.threshold, topology.routes(drm).size(), k.field_prime}.validate();
      } catch (const Error& e) {
        bad("key_exchange", "drm '" + drm + "': " + e.what());
      }
    }
  } else {
    try {
      keyx::TemporalParams{k.prime, k.key_bits, k.parts}.validate();
    } catch (const Error& e) {
      bad("key_exchange", e.what());
    }
    if (k.prime - 1 - k.key_bits < k.parts) bad("key_exchange.prime", "too small to draw distinct evaluation points");
    if (k.packet_interval == 0) bad("key_exchange.packet_interval", "must be at least one tick");
  }

  wnc::ChannelConfig cc{crypto::MacKey(Bytes(1, 0)), channel.chaff_ratio, channel.mac_bits, 0, channel.chaff_payload,
                        channel.audit_mode};
  try {
    cc.validate();
  } catch (const Error& e) {
    bad("channel", e.what());
  }
  if (channel.chunk_bytes == 0 || channel.chunk_bytes > wnc::kMaxPayloadBytes)
    bad("channel.chunk_bytes", "must be in [1, 1024]");

  std::set<std::string> names;
  for (std::size_t i = 0; i < adversaries.size(); ++i) {
    const auto& a = adversaries[i];
    const auto path = "adversaries[" + std::to_string(i) + "]";
    if (!names.insert(a.name).second) bad(path + ".name", "duplicate adversary '" + a.name + "'");
    for (const auto& e : a.taps)
      if (!topology.has_edge(e.first, e.second)) bad(path + ".taps", "no edge " + e.first + "-" + e.second);
    for (auto p : a.candidate_primes)
      if (!is_prime(p)) bad(path + ".candidate_primes", std::to_string(p) + " is not prime");
  }
  for (const auto& id : compromised_drms)
    if (!topology.has_node(id) || topology.role(id) != NodeRole::kDrm) bad("compromised_drms", "'" + id + "' is not a drm");
}

Scenario parse_scenario(const std::string& text, const std::string& source) {
  YAML::Node root;
  try {
    root = YAML::Load(text);
  } catch (const YAML::ParserException& e) {
    throw ConfigError(source, static_cast<std::size_t>(e.mark.line) + 1, "", e.msg);
  }
  return Parser(source).parse(root);
}

Scenario load_scenario(const std::string& file) {
  std::ifstream in(file);
  if (!in) throw ConfigError(file, 0, "", "cannot open");
  std::ostringstream text;
  text << in.rdbuf();
  return parse_scenario(text.str(), file);
}

}  // namespace gridsec::sim
