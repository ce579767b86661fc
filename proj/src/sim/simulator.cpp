#include "gridsec/sim/simulator.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <memory>
#include <queue>
#include <set>
#include <sstream>

#include "json.hpp"

#include "gridsec/crypto/sha1.hpp"
#include "gridsec/keyx/spatial.hpp"
#include "gridsec/keyx/temporal.hpp"
#include "gridsec/wnc/packet.hpp"

namespace gridsec::sim {

using json = nlohmann::ordered_json;

DrmAuthenticator::DrmAuthenticator(const crypto::MacKey& key, crypto::OpCount* ops)
    : receiver_(wnc::ChannelConfig{key}, ops) {}

bool DrmAuthenticator::accept(const wnc::WcPacket& challenge) {
  return receiver_.push(challenge) == wnc::Verdict::kWheat;
}

wnc::WcPacket make_challenge(const crypto::MacKey& key, std::uint32_t seq, Rng& rng, crypto::OpCount* ops) {
  Bytes nonce(16);
  rng.fill(nonce.begin(), nonce.end());
  wnc::Sender sender(wnc::ChannelConfig{key}, ops);
  return sender.make_wheat(seq, nonce);
}

bool AdversaryVerdict::recovered() const {
  if (jobs_recovered > 0) return true;
  return std::any_of(targets.begin(), targets.end(), [](const TargetOutcome& t) { return t.recovered; });
}

namespace {

// Stream ids for Rng::derive; adversaries sit far above node streams so
// adding taps never shifts a node's draws.
constexpr std::uint64_t kKeyStream = 1;
constexpr std::uint64_t kSpatialStream = 2;
constexpr std::uint64_t kTemporalStream = 3;
constexpr std::uint64_t kJobStream = 4;
constexpr std::uint64_t kChallengeStream = 5;
constexpr std::uint64_t kStubStream = 6;
constexpr std::uint64_t kJobSenderBase = 0x100;
constexpr std::uint64_t kResultSenderBase = 0x10000;
constexpr std::uint64_t kAdversaryBase = 0x100000000ull;

constexpr const char* kStub = "stub";

enum class Kind { kShare, kTemporalHeader, kTemporal, kChallenge, kJob, kResult, kAlert };

const char* to_string(Kind k) {
  switch (k) {
    case Kind::kShare: return "share";
    case Kind::kTemporalHeader: return "temporal_header";
    case Kind::kTemporal: return "temporal";
    case Kind::kChallenge: return "challenge";
    case Kind::kJob: return "job";
    case Kind::kResult: return "result";
    case Kind::kAlert: return "alert";
  }
  return "?";
}

struct Envelope {
  std::uint64_t id = 0;
  Kind kind = Kind::kShare;
  std::string drm;  // the DRM whose traffic this is
  Route path;       // travel order
  std::size_t route_index = 0;
  Bytes wire;
  int job = -1;
  bool chaff = false;  // ground truth label, never read by nodes
};

struct Observation {
  std::uint64_t tick = 0;
  Envelope env;
};

struct DrmState {
  std::optional<SecretKey> key;
  std::optional<crypto::MacKey> mac_key;
  std::vector<keyx::ShareBundle> bundles;
  std::optional<std::pair<std::size_t, std::size_t>> temporal_header;
  std::vector<keyx::TemporalPacket> temporal_packets;
  std::unique_ptr<DrmAuthenticator> auth;
  std::map<int, wnc::Receiver> receivers;
  sentinel::Sentinel sentinel;
  sentinel::ProcessRegistry registry;
  std::uint64_t clock = 0;
  std::uint64_t next_pid = 100;
};

struct Event {
  std::uint64_t tick;
  std::uint64_t order;
  std::function<void()> fn;
};

struct Later {
  bool operator()(const Event& a, const Event& b) const {
    return a.tick != b.tick ? a.tick > b.tick : a.order > b.order;
  }
};

std::uint64_t pow_capped(std::uint64_t base, std::size_t exp, std::uint64_t cap) {
  std::uint64_t r = 1;
  for (std::size_t i = 0; i < exp; ++i) {
    if (r > cap / base) return cap + 1;
    r *= base;
  }
  return r;
}

class Simulation {
 public:
  Simulation(const Scenario& s, std::uint64_t seed) : s_(s), seed_(seed), topo_(s.topology) {
    result_.name = s.name;
    result_.seed = seed;
    drm_ids_ = topo_.drms();
    grb_ = topo_.grb();
    for (const auto& id : topo_.nodes()) result_.nodes[id.first];
    for (const auto& d : drm_ids_) {
      drms_[d];
      result_.drms[d];
    }
    for (const auto& a : s.adversaries) {
      std::set<EdgeKey> taps(a.taps.begin(), a.taps.end());
      taps_.push_back(std::move(taps));
      observed_.emplace_back();
    }
  }

  ScenarioResult run() {
    at(0, [this] { start(); });
    while (!queue_.empty()) {
      Event ev = queue_.top();
      queue_.pop();
      now_ = ev.tick;
      ev.fn();
    }
    result_.final_tick = now_;
    analyse_adversaries();
    return std::move(result_);
  }

 private:
  // ---- event plumbing ----

  void at(std::uint64_t tick, std::function<void()> fn) { queue_.push(Event{tick, order_++, std::move(fn)}); }

  void log(json record) {
    json line;
    line["tick"] = now_;
    for (auto& [k, v] : record.items()) line[k] = v;
    result_.event_log.push_back(line.dump());
  }

  std::uint64_t max_latency(const std::string& drm) const {
    std::uint64_t m = 0;
    for (const auto& r : topo_.routes(drm)) m = std::max(m, topo_.route_latency(r));
    return m;
  }

  static Route reversed(Route r) {
    std::reverse(r.begin(), r.end());
    return r;
  }

  void send_at(std::uint64_t tick, Envelope env) {
    env.id = next_msg_++;
    at(tick, [this, env = std::move(env)]() mutable { transmit_now(std::move(env)); });
  }

  void transmit_now(Envelope env) {
    ++result_.packets_on_wire;
    result_.bytes_on_wire += env.wire.size();
    log({{"event", "send"},
         {"msg", env.id},
         {"kind", to_string(env.kind)},
         {"src", env.path.front()},
         {"dst", env.path.back()},
         {"route", env.route_index},
         {"bytes", env.wire.size()}});

    // Passive taps: a copy per adversary at the first tapped edge.
    std::uint64_t elapsed = 0;
    std::vector<bool> seen(taps_.size(), false);
    for (std::size_t i = 1; i < env.path.size(); ++i) {
      const auto e = edge_key(env.path[i - 1], env.path[i]);
      for (std::size_t a = 0; a < taps_.size(); ++a) {
        if (seen[a] || !taps_[a].count(e)) continue;
        seen[a] = true;
        json rec{{"tick", now_ + elapsed},
                 {"adversary", s_.adversaries[a].name},
                 {"msg", env.id},
                 {"kind", to_string(env.kind)},
                 {"edge", e.first + "-" + e.second},
                 {"bytes", env.wire.size()}};
        result_.observation_log.push_back(rec.dump());
        observed_[a].push_back(Observation{now_ + elapsed, env});
      }
      elapsed += topo_.latency(env.path[i - 1], env.path[i]);
    }

    const std::uint64_t arrive = now_ + elapsed;
    at(arrive, [this, env = std::move(env)] { deliver(env); });
  }

  void deliver(const Envelope& env) {
    log({{"event", "deliver"}, {"msg", env.id}, {"node", env.path.back()}});
    switch (env.kind) {
      case Kind::kShare: on_share(env); break;
      case Kind::kTemporalHeader: on_temporal_header(env); break;
      case Kind::kTemporal: on_temporal(env); break;
      case Kind::kChallenge: on_challenge(env); break;
      case Kind::kJob: on_job_packet(env); break;
      case Kind::kResult: on_result_packet(env); break;
      case Kind::kAlert: on_alert(env); break;
    }
  }

  NodeStats& stats(const std::string& node) { return result_.nodes[node]; }

  // ---- phases ----

  void start() {
    log({{"event", "lookup"}, {"node", grb_}, {"info", topo_.nodes_with(NodeRole::kInfo)}, {"drms", drm_ids_}});

    Rng keys = Rng::derive(seed_, kKeyStream);
    Rng spatial = Rng::derive(seed_, kSpatialStream);
    Rng temporal = Rng::derive(seed_, kTemporalStream);
    const auto& kx = s_.key_exchange;
    std::uint64_t kx_end = 0;

    for (const auto& d : drm_ids_) {
      auto key = SecretKey::random(kx.key_bits, keys);
      result_.distributed_keys.emplace(d, key);
      grb_mac_keys_.emplace(d, crypto::MacKey(Bytes(key.bytes().begin(), key.bytes().end())));
      const auto& routes = topo_.routes(d);

      if (kx.scheme == KeyScheme::kSpatial) {
        keyx::ThresholdPolicy policy{kx.threshold, routes.size(), kx.field_prime};
        auto bundles = keyx::split(key, policy, spatial);
        for (std::size_t i = 0; i < bundles.size(); ++i) {
          send_at(0, Envelope{0, Kind::kShare, d, routes[i], i, keyx::encode_bundle(bundles[i])});
          kx_end = std::max(kx_end, topo_.route_latency(routes[i]));
        }
      } else {
        keyx::TemporalParams params{kx.prime, kx.key_bits, kx.parts};
        auto ex = keyx::temporal_send(key, params, temporal);
        Bytes header;
        put_be16(header, keyx::kExchangeMagic);
        put_be16(header, static_cast<std::uint16_t>(kx.key_bits));
        put_be16(header, static_cast<std::uint16_t>(kx.parts));
        send_at(0, Envelope{0, Kind::kTemporalHeader, d, routes[0], 0, header});
        for (std::size_t i = 0; i < ex.packets.size(); ++i) {
          Bytes wire;
          keyx::encode_packet_to(wire, ex.packets[i]);
          const std::uint64_t tick = (i + 1) * kx.packet_interval;
          send_at(tick, Envelope{0, Kind::kTemporal, d, routes[0], 0, std::move(wire)});
          kx_end = std::max(kx_end, tick + topo_.route_latency(routes[0]));
        }
      }
    }
    at(kx_end + 1, [this] { authenticate(); });
  }

  void authenticate() {
    Rng nonce = Rng::derive(seed_, kChallengeStream);
    std::uint64_t auth_end = now_;
    for (const auto& d : drm_ids_) {
      auto pkt = make_challenge(grb_mac_keys_.at(d), 0, nonce, &stats(grb_).ops);
      ++stats(grb_).mac_tags;
      Bytes wire;
      wnc::encode_to(wire, pkt);
      const auto& route = topo_.routes(d)[0];
      send_at(now_, Envelope{0, Kind::kChallenge, d, route, 0, std::move(wire)});
      auth_end = std::max(auth_end, now_ + topo_.route_latency(route));
    }
    at(auth_end + 1, [this] { dispatch_jobs(); });

    for (const auto& d : s_.compromised_drms) {
      at(auth_end + 1, [this, d] { tamper_stub(d); });
    }
  }

  wnc::ChannelConfig channel_config(const crypto::MacKey& key, std::uint64_t seed) const {
    return wnc::ChannelConfig{key, s_.channel.chaff_ratio, s_.channel.mac_bits, seed, s_.channel.chaff_payload,
                              s_.channel.audit_mode};
  }

  // Labels each transmitted packet as wheat or chaff from ground truth.
  static std::vector<bool> chaff_labels(const std::vector<wnc::WcPacket>& packets, const std::vector<Bytes>& chunks,
                                        const wnc::ChannelConfig& cfg) {
    crypto::HmacSha1 oracle(cfg.key);
    std::vector<bool> out;
    std::set<std::uint32_t> wheat_done;
    for (const auto& p : packets) {
      const bool wheat = !wheat_done.count(p.seq) && p.seq < chunks.size() && p.payload == chunks[p.seq] &&
                         p.mac == wnc::packet_mac(oracle, cfg.mac_bits, p.seq, p.payload);
      if (wheat) wheat_done.insert(p.seq);
      out.push_back(!wheat);
    }
    return out;
  }

  void dispatch_jobs() {
    Rng data = Rng::derive(seed_, kJobStream);
    std::uint64_t clock = now_;
    for (std::size_t j = 0; j < s_.jobs.count; ++j) {
      const std::string& d = drm_ids_[j % drm_ids_.size()];
      Bytes payload(s_.jobs.payload_bytes);
      data.fill(payload.begin(), payload.end());
      const auto chunks = wnc::chunk_stream(payload, s_.channel.chunk_bytes);
      job_payloads_.push_back(payload);
      job_drm_.push_back(d);

      const auto cfg = channel_config(grb_mac_keys_.at(d), Rng::derive(seed_, kJobSenderBase + j).next());
      wnc::Sender sender(cfg, &stats(grb_).ops);
      const auto packets = sender.transmit(chunks);
      stats(grb_).mac_tags += sender.mac_calls();
      result_.wheat += chunks.size();
      result_.chaff += sender.chaff_count();
      const auto labels = chaff_labels(packets, chunks, cfg);
      ++result_.jobs_sent;

      const auto& routes = topo_.routes(d);
      log({{"event", "job"}, {"job", j}, {"drm", d}, {"bytes", payload.size()}, {"packets", packets.size()}});
      for (std::size_t k = 0; k < packets.size(); ++k) {
        Bytes wire;
        wnc::encode_to(wire, packets[k]);
        const std::size_t r = k % routes.size();
        Envelope env{0, Kind::kJob, d, routes[r], r, std::move(wire), static_cast<int>(j), labels[k]};
        send_at(clock++, std::move(env));
      }
      const std::uint64_t done = clock + max_latency(d);
      at(done, [this, d, j] { finish_job(d, static_cast<int>(j)); });
    }
  }

  // ---- DRM handlers ----

  void establish(const std::string& d, std::optional<SecretKey> key, const std::string& how) {
    auto& st = drms_.at(d);
    auto& out = result_.drms.at(d);
    out.key_established = key.has_value();
    if (key) {
      st.key = key;
      st.mac_key = crypto::MacKey(Bytes(key->bytes().begin(), key->bytes().end()));
      st.auth = std::make_unique<DrmAuthenticator>(*st.mac_key, &stats(d).ops);
      st.sentinel.watch(kStub, stub_content(d), now_);
      out.key_matches = *key == result_.distributed_keys.at(d);
    }
    log({{"event", "key_established"}, {"node", d}, {"ok", key.has_value()}, {"detail", how}});
  }

  Bytes stub_content(const std::string& d) const {
    Bytes content(d.begin(), d.end());
    content.insert(content.end(), {'/', 's', 't', 'u', 'b'});
    return content;
  }

  void on_share(const Envelope& env) {
    auto& st = drms_.at(env.drm);
    if (st.key) return;
    try {
      st.bundles.push_back(keyx::decode_bundle(env.wire));
    } catch (const Error& e) {
      log({{"event", "drop"}, {"node", env.drm}, {"msg", env.id}, {"reason", e.what()}});
      return;
    }
    const auto& kx = s_.key_exchange;
    const std::size_t n = topo_.routes(env.drm).size();
    if (st.bundles.size() < n) return;
    try {
      keyx::ThresholdPolicy policy{kx.threshold, n, kx.field_prime};
      establish(env.drm, keyx::reconstruct(st.bundles, policy, kx.key_bits), "spatial");
    } catch (const Error& e) {
      establish(env.drm, std::nullopt, e.what());
    }
  }

  void on_temporal_header(const Envelope& env) {
    auto& st = drms_.at(env.drm);
    try {
      ByteReader r(env.wire);
      if (r.be16() != keyx::kExchangeMagic) throw MalformedInput("bad exchange magic");
      const std::size_t L = r.be16();
      const std::size_t N = r.be16();
      st.temporal_header = {L, N};
    } catch (const Error& e) {
      log({{"event", "drop"}, {"node", env.drm}, {"msg", env.id}, {"reason", e.what()}});
      return;
    }
    try_temporal(env.drm);
  }

  void on_temporal(const Envelope& env) {
    auto& st = drms_.at(env.drm);
    try {
      ByteReader r(env.wire);
      st.temporal_packets.push_back(keyx::decode_packet(r));
    } catch (const Error& e) {
      log({{"event", "drop"}, {"node", env.drm}, {"msg", env.id}, {"reason", e.what()}});
      return;
    }
    try_temporal(env.drm);
  }

  void try_temporal(const std::string& d) {
    auto& st = drms_.at(d);
    if (st.key || !st.temporal_header || st.temporal_packets.size() < st.temporal_header->second) return;
    auto packets = st.temporal_packets;
    std::sort(packets.begin(), packets.end(), [](const auto& a, const auto& b) { return a.seq < b.seq; });
    try {
      keyx::TemporalParams params{s_.key_exchange.prime, st.temporal_header->first, st.temporal_header->second};
      establish(d, keyx::temporal_receive(packets, params), "temporal");
    } catch (const Error& e) {
      establish(d, std::nullopt, e.what());
    }
  }

  void on_challenge(const Envelope& env) {
    auto& st = drms_.at(env.drm);
    bool ok = false;
    if (st.auth) {
      try {
        ByteReader r(env.wire);
        ok = st.auth->accept(wnc::decode(r));
        ++stats(env.drm).mac_checks;
      } catch (const Error&) {
        ok = false;
      }
    }
    result_.drms.at(env.drm).authenticated = ok;
    log({{"event", "auth"}, {"node", env.drm}, {"verdict", ok ? "accept" : "reject"}});
  }

  void on_job_packet(const Envelope& env) {
    auto& st = drms_.at(env.drm);
    auto& out = result_.drms.at(env.drm);
    ++out.addressed;
    if (!out.authenticated || !st.mac_key) {
      ++out.rejected;
      return;
    }
    auto it = st.receivers.find(env.job);
    if (it == st.receivers.end()) {
      it = st.receivers.try_emplace(env.job, channel_config(*st.mac_key, 0), &stats(env.drm).ops).first;
    }
    try {
      ByteReader r(env.wire);
      const auto verdict = it->second.push(wnc::decode(r));
      ++stats(env.drm).mac_checks;
      ++(verdict == wnc::Verdict::kWheat ? out.accepted : out.rejected);
    } catch (const Error&) {
      ++out.rejected;
    }
  }

  void finish_job(const std::string& d, int job) {
    auto& st = drms_.at(d);
    auto& out = result_.drms.at(d);

    // The stub runs while it processes the job; its own touch is authorized.
    const std::uint64_t pid = st.next_pid++;
    st.registry.start(pid, kStub);
    if (st.key) judge(d, sentinel::ChangeEvent{now_, sentinel::ChangeKind::kMetadata, kStub, std::nullopt});

    std::optional<Bytes> data;
    auto it = st.receivers.find(job);
    if (it != st.receivers.end()) {
      try {
        data = wnc::join(it->second.finish());
      } catch (const wnc::IncompleteStream&) {
      }
    }
    st.registry.stop(pid);

    if (!data) {
      ++out.jobs_failed;
      log({{"event", "job_done"}, {"node", d}, {"job", job}, {"ok", false}});
      return;
    }
    ++out.jobs_done;
    log({{"event", "job_done"}, {"node", d}, {"job", job}, {"ok", true}, {"bytes", data->size()}});

    // The work: a digest of the payload, returned over the reverse routes.
    const auto digest = crypto::sha1(*data);
    const auto chunks = wnc::chunk_stream(digest, s_.channel.chunk_bytes);
    const auto cfg =
        channel_config(*st.mac_key, Rng::derive(seed_, kResultSenderBase + static_cast<std::uint64_t>(job)).next());
    wnc::Sender sender(cfg, &stats(d).ops);
    const auto packets = sender.transmit(chunks);
    stats(d).mac_tags += sender.mac_calls();
    result_.wheat += chunks.size();
    result_.chaff += sender.chaff_count();
    const auto labels = chaff_labels(packets, chunks, cfg);

    const auto& routes = topo_.routes(d);
    st.clock = std::max(st.clock, now_);
    for (std::size_t k = 0; k < packets.size(); ++k) {
      Bytes wire;
      wnc::encode_to(wire, packets[k]);
      const std::size_t r = k % routes.size();
      send_at(st.clock++, Envelope{0, Kind::kResult, d, reversed(routes[r]), r, std::move(wire), job, labels[k]});
    }
    at(st.clock + max_latency(d), [this, d, job] { finish_result(d, job); });
  }

  void judge(const std::string& d, const sentinel::ChangeEvent& ev) {
    auto& st = drms_.at(d);
    auto judged = st.sentinel.on_event(ev, st.registry);
    if (!judged) return;
    log({{"event", "integrity"},
         {"node", d},
         {"kind", sentinel::to_string(judged->kind)},
         {"judged", sentinel::to_string(judged->judged)}});
    for (const auto& alert : st.sentinel.drain_alerts()) {
      Bytes wire;
      put_be64(wire, alert.tick);
      wire.push_back(static_cast<std::uint8_t>(alert.kind));
      wire.insert(wire.end(), alert.artifact_id.begin(), alert.artifact_id.end());
      st.clock = std::max(st.clock, now_);
      send_at(st.clock++, Envelope{0, Kind::kAlert, d, reversed(topo_.routes(d)[0]), 0, std::move(wire)});
    }
  }

  void tamper_stub(const std::string& d) {
    if (!drms_.at(d).key) return;
    Rng rng = Rng::derive(seed_, kStubStream);
    Bytes content(32);
    rng.fill(content.begin(), content.end());
    judge(d, sentinel::ChangeEvent{now_, sentinel::ChangeKind::kContent, kStub, content});
  }

  // ---- broker handlers ----

  void on_result_packet(const Envelope& env) {
    auto it = grb_receivers_.find(env.job);
    if (it == grb_receivers_.end()) {
      it = grb_receivers_.try_emplace(env.job, channel_config(grb_mac_keys_.at(env.drm), 0), &stats(grb_).ops).first;
    }
    try {
      ByteReader r(env.wire);
      it->second.push(wnc::decode(r));
      ++stats(grb_).mac_checks;
    } catch (const Error&) {
    }
  }

  void finish_result(const std::string& d, int job) {
    bool ok = false;
    auto it = grb_receivers_.find(job);
    if (it != grb_receivers_.end()) {
      try {
        const auto got = wnc::join(it->second.finish());
        const auto want = crypto::sha1(job_payloads_[static_cast<std::size_t>(job)]);
        ok = got == Bytes(want.begin(), want.end());
      } catch (const wnc::IncompleteStream&) {
      }
    }
    if (ok) ++result_.results_verified;
    log({{"event", "result"}, {"node", grb_}, {"drm", d}, {"job", job}, {"verified", ok}});
  }

  void on_alert(const Envelope& env) {
    try {
      ByteReader r(env.wire);
      sentinel::Alert a;
      a.tick = r.be64();
      a.kind = static_cast<sentinel::ChangeKind>(r.u8());
      const auto rest = r.take(r.remaining());
      a.artifact_id.assign(rest.begin(), rest.end());
      log({{"event", "alert"}, {"node", grb_}, {"from", env.drm}, {"artifact", a.artifact_id},
           {"kind", sentinel::to_string(a.kind)}, {"raised", a.tick}});
      result_.alerts.push_back(std::move(a));
    } catch (const Error&) {
    }
  }

  // ---- adversaries ----

  void analyse_adversaries() {
    for (std::size_t a = 0; a < s_.adversaries.size(); ++a) {
      const auto& cfg = s_.adversaries[a];
      AdversaryVerdict v;
      v.name = cfg.name;
      v.strategy = cfg.strategy;
      for (const auto& o : observed_[a]) {
        ++v.packets_seen;
        v.bytes_seen += o.env.wire.size();
      }
      Rng rng = Rng::derive(seed_, kAdversaryBase + a);
      switch (cfg.strategy) {
        case Strategy::kRecordOnly: break;
        case Strategy::kSpatialReconstruct: spatial_attack(observed_[a], v); break;
        case Strategy::kTemporalGuess: temporal_attack(cfg, observed_[a], v); break;
        case Strategy::kWinnowAttempt: winnow_attack(cfg, observed_[a], rng, v); break;
      }
      result_.adversaries.push_back(std::move(v));
    }
  }

  void spatial_attack(const std::vector<Observation>& seen, AdversaryVerdict& v) {
    const auto& kx = s_.key_exchange;
    for (const auto& d : drm_ids_) {
      TargetOutcome t;
      t.drm = d;
      std::vector<keyx::ShareBundle> bundles;
      for (const auto& o : seen) {
        if (o.env.kind != Kind::kShare || o.env.drm != d) continue;
        try {
          bundles.push_back(keyx::decode_bundle(o.env.wire));
        } catch (const Error&) {
        }
      }
      t.observed = bundles.size();
      keyx::ThresholdPolicy policy{kx.threshold, topo_.routes(d).size(), kx.field_prime};
      if (bundles.size() >= kx.threshold) {
        try {
          t.recovered = keyx::reconstruct(bundles, policy, kx.key_bits) == result_.distributed_keys.at(d);
        } catch (const Error&) {
        }
      }
      if (kx.field_prime <= 101 && pow_capped(kx.field_prime, kx.threshold, 10'000'000) <= 10'000'000) {
        std::vector<keyx::Share> first;
        for (const auto& b : bundles)
          if (!b.empty() && first.size() < kx.threshold) first.push_back(b.front());
        const auto audit = keyx::secrecy_audit(policy, first);
        t.consistent_secrets = audit.consistent_secrets;
        t.field_size = kx.field_prime;
      }
      v.targets.push_back(std::move(t));
    }
  }

  void temporal_attack(const AdversaryConfig& cfg, const std::vector<Observation>& seen, AdversaryVerdict& v) {
    for (const auto& d : drm_ids_) {
      TargetOutcome t;
      t.drm = d;
      std::optional<std::pair<std::size_t, std::size_t>> header;
      std::vector<keyx::TemporalPacket> packets;
      for (const auto& o : seen) {
        if (o.env.drm != d) continue;
        try {
          ByteReader r(o.env.wire);
          if (o.env.kind == Kind::kTemporalHeader) {
            r.be16();
            const std::size_t L = r.be16();
            header = {L, r.be16()};
          } else if (o.env.kind == Kind::kTemporal) {
            packets.push_back(keyx::decode_packet(r));
          }
        } catch (const Error&) {
        }
      }
      t.observed = packets.size();
      if (header && packets.size() >= header->second && header->second >= 2) {
        std::sort(packets.begin(), packets.end(), [](const auto& a, const auto& b) { return a.seq < b.seq; });
        const auto& truth = result_.distributed_keys.at(d);
        if (cfg.knows_prime) {
          t.candidates = 1;
          try {
            const auto key =
                keyx::temporal_receive(packets, keyx::TemporalParams{s_.key_exchange.prime, header->first, header->second});
            t.valid_decodes = 1;
            t.recovered = key == truth;
          } catch (const Error&) {
          }
        } else {
          auto candidates = cfg.candidate_primes;
          if (candidates.empty()) {
            for (std::uint64_t c = header->first + 1; candidates.size() < 64; ++c)
              if (is_prime(c)) candidates.push_back(c);
          }
          const auto report = keyx::adversary_attack(packets, candidates, header->first, header->second);
          t.candidates = candidates.size();
          t.valid_decodes = report.valid_decodes;
          std::set<std::string> distinct;
          for (const auto& at : report.attempts)
            if (at.valid && at.key) distinct.insert(at.key->to_hex() + "/" + std::to_string(at.key->bit_length()));
          const std::string want = truth.to_hex() + "/" + std::to_string(truth.bit_length());
          t.recovered = distinct.size() == 1 && *distinct.begin() == want;
        }
      }
      v.targets.push_back(std::move(t));
    }
  }

  void winnow_attack(const AdversaryConfig& cfg, const std::vector<Observation>& seen, Rng& rng,
                     AdversaryVerdict& v) {
    // Without the key the adversary can only try a key of its own.
    Bytes guess(20);
    rng.fill(guess.begin(), guess.end());
    const crypto::MacKey guessed(guess);

    std::map<std::pair<int, bool>, std::vector<wnc::WcPacket>> streams;  // (job, is_result)
    for (const auto& o : seen) {
      if (o.env.kind != Kind::kJob && o.env.kind != Kind::kResult) continue;
      wnc::WcPacket p;
      try {
        ByteReader r(o.env.wire);
        p = wnc::decode(r);
      } catch (const Error&) {
        continue;
      }
      const auto& key = cfg.knows_mac_key ? grb_mac_keys_.at(o.env.drm) : guessed;
      const bool accepted = wnc::verify(channel_config(key, 0), p) == wnc::Verdict::kWheat;
      if (o.env.chaff) {
        ++v.chaff_seen;
        v.chaff_accepted += accepted;
      } else {
        ++v.wheat_seen;
        v.wheat_accepted += accepted;
      }
      streams[{o.env.job, o.env.kind == Kind::kResult}].push_back(std::move(p));
    }
    if (!cfg.knows_mac_key) return;
    for (const auto& [id, packets] : streams) {
      if (id.second) continue;
      const auto job = static_cast<std::size_t>(id.first);
      try {
        wnc::Receiver rx(channel_config(grb_mac_keys_.at(job_drm_[job]), 0));
        for (const auto& p : packets) rx.push(p);
        if (wnc::join(rx.finish()) == job_payloads_[job]) ++v.jobs_recovered;
      } catch (const wnc::IncompleteStream&) {
      }
    }
  }

  const Scenario& s_;
  std::uint64_t seed_;
  const Topology& topo_;
  ScenarioResult result_;
  std::string grb_;
  std::vector<std::string> drm_ids_;
  std::map<std::string, DrmState> drms_;
  std::map<std::string, crypto::MacKey> grb_mac_keys_;
  std::map<int, wnc::Receiver> grb_receivers_;
  std::vector<Bytes> job_payloads_;
  std::vector<std::string> job_drm_;
  std::vector<std::set<EdgeKey>> taps_;
  std::vector<std::vector<Observation>> observed_;
  std::priority_queue<Event, std::vector<Event>, Later> queue_;
  std::uint64_t order_ = 0;
  std::uint64_t now_ = 0;
  std::uint64_t next_msg_ = 0;
};

std::string join_lines(const std::vector<std::string>& lines) {
  std::string out;
  for (const auto& l : lines) {
    out += l;
    out += '\n';
  }
  return out;
}

json ops_json(const crypto::OpCount& c) {
  return json{{"xor32", c.xor32}, {"shift32", c.shift32}, {"gf8_mul", c.gf8_mul}, {"mul8", c.mul8}, {"gf8_inv", c.gf8_inv}};
}

}  // namespace

std::string ScenarioResult::event_log_text() const { return join_lines(event_log); }
std::string ScenarioResult::observation_log_text() const { return join_lines(observation_log); }

std::string ScenarioResult::summary_json() const {
  json j;
  j["name"] = name;
  j["seed"] = seed;
  j["final_tick"] = final_tick;
  j["packets_on_wire"] = packets_on_wire;
  j["bytes_on_wire"] = bytes_on_wire;
  j["wheat"] = wheat;
  j["chaff"] = chaff;
  j["jobs_sent"] = jobs_sent;
  j["results_verified"] = results_verified;
  j["alerts"] = alerts.size();
  json d = json::object();
  for (const auto& [id, o] : drms) {
    d[id] = json{{"key_established", o.key_established}, {"key_matches", o.key_matches},
                 {"authenticated", o.authenticated},     {"addressed", o.addressed},
                 {"accepted", o.accepted},               {"rejected", o.rejected},
                 {"jobs_done", o.jobs_done},             {"jobs_failed", o.jobs_failed}};
  }
  j["drms"] = d;
  json n = json::object();
  for (const auto& [id, s] : nodes) n[id] = json{{"mac_tags", s.mac_tags}, {"mac_checks", s.mac_checks}, {"ops", ops_json(s.ops)}};
  j["nodes"] = n;
  json adv = json::array();
  for (const auto& a : adversaries) {
    json targets = json::array();
    for (const auto& t : a.targets) {
      json tj{{"drm", t.drm}, {"observed", t.observed}, {"recovered", t.recovered}};
      if (t.consistent_secrets) tj["consistent_secrets"] = *t.consistent_secrets;
      if (t.field_size) tj["field_size"] = *t.field_size;
      if (a.strategy == Strategy::kTemporalGuess) {
        tj["candidates"] = t.candidates;
        tj["valid_decodes"] = t.valid_decodes;
      }
      targets.push_back(tj);
    }
    json aj{{"name", a.name},
            {"strategy", to_string(a.strategy)},
            {"packets_seen", a.packets_seen},
            {"bytes_seen", a.bytes_seen},
            {"recovered", a.recovered()},
            {"targets", targets}};
    if (a.strategy == Strategy::kWinnowAttempt) {
      aj["wheat_seen"] = a.wheat_seen;
      aj["chaff_seen"] = a.chaff_seen;
      aj["wheat_accepted"] = a.wheat_accepted;
      aj["chaff_accepted"] = a.chaff_accepted;
      aj["jobs_recovered"] = a.jobs_recovered;
    }
    adv.push_back(aj);
  }
  j["adversaries"] = adv;
  return j.dump();
}

std::string ScenarioResult::summary() const {
  std::ostringstream os;
  os << "scenario " << (name.empty() ? "(unnamed)" : name) << "  seed " << seed << "  ticks " << final_tick << "\n";
  os << "wire: " << packets_on_wire << " packets, " << bytes_on_wire << " bytes, wheat " << wheat << ", chaff "
     << chaff << "\n";
  os << "jobs: " << jobs_sent << " sent, " << results_verified << " results verified, " << alerts.size()
     << " integrity alerts\n";
  os << "\n";
  os << "drm            key   auth  accepted  rejected  done  failed\n";
  for (const auto& [id, o] : drms) {
    char line[160];
    std::snprintf(line, sizeof line, "%-14s %-5s %-5s %9llu %9llu %5zu %7zu\n", id.c_str(),
                  o.key_matches ? "ok" : (o.key_established ? "bad" : "none"), o.authenticated ? "yes" : "no",
                  static_cast<unsigned long long>(o.accepted), static_cast<unsigned long long>(o.rejected),
                  o.jobs_done, o.jobs_failed);
    os << line;
  }
  os << "\n";
  os << "node            mac_tags mac_checks      xor32    shift32\n";
  for (const auto& [id, s] : nodes) {
    char line[160];
    std::snprintf(line, sizeof line, "%-14s %9llu %10llu %10llu %10llu\n", id.c_str(),
                  static_cast<unsigned long long>(s.mac_tags), static_cast<unsigned long long>(s.mac_checks),
                  static_cast<unsigned long long>(s.ops.xor32), static_cast<unsigned long long>(s.ops.shift32));
    os << line;
  }
  if (!adversaries.empty()) {
    os << "\n";
    os << "adversary      strategy             seen  verdict\n";
    for (const auto& a : adversaries) {
      char line[200];
      std::snprintf(line, sizeof line, "%-14s %-20s %5llu  %s\n", a.name.c_str(), to_string(a.strategy),
                    static_cast<unsigned long long>(a.packets_seen), a.recovered() ? "recovered" : "failed");
      os << line;
      for (const auto& t : a.targets) {
        os << "  " << t.drm << ": observed " << t.observed << (t.recovered ? ", key recovered" : ", no key");
        if (t.consistent_secrets)
          os << ", consistent secrets " << *t.consistent_secrets << " of " << *t.field_size;
        if (a.strategy == Strategy::kTemporalGuess && t.candidates)
          os << ", valid decodes " << t.valid_decodes << " of " << t.candidates;
        os << "\n";
      }
      if (a.strategy == Strategy::kWinnowAttempt) {
        os << "  accepted wheat " << a.wheat_accepted << "/" << a.wheat_seen << ", chaff " << a.chaff_accepted
           << "/" << a.chaff_seen << ", jobs recovered " << a.jobs_recovered << "\n";
      }
    }
  }
  return os.str();
}

ScenarioResult run_scenario(const Scenario& scenario, std::uint64_t seed) {
  try {
    scenario.validate();
  } catch (const ConfigError& e) {
    throw ConfigError("<scenario>", 0, e.path(), e.detail());
  }
  return Simulation(scenario, seed).run();
}

}  // namespace gridsec::sim
