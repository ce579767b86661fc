#include <gtest/gtest.h>

#include <cmath>
#include <sstream>

#include "gridsec/errors.hpp"
#include "gridsec/sim/scenario.hpp"
#include "gridsec/sim/simulator.hpp"

using namespace gridsec;
using namespace gridsec::sim;

namespace {

// Broker -> router rK -> drm1 for K = 1..paths, latencies varied per path.
std::string star(std::size_t paths, const std::string& key_exchange, const std::string& extra = "") {
  std::ostringstream os;
  os << "topology:\n  nodes:\n    grb: grb\n    info: info\n    drm1: drm\n";
  for (std::size_t k = 1; k <= paths; ++k) os << "    r" << k << ": router\n";
  os << "  edges:\n    - [grb, info, 1]\n";
  for (std::size_t k = 1; k <= paths; ++k) {
    os << "    - [grb, r" << k << ", " << 1 + k % 3 << "]\n";
    os << "    - [r" << k << ", drm1, " << 1 + (k * 2) % 5 << "]\n";
  }
  os << "  paths:\n    drm1:\n";
  for (std::size_t k = 1; k <= paths; ++k) os << "      - [grb, r" << k << ", drm1]\n";
  os << key_exchange << extra;
  return os.str();
}

std::string taps_on(std::size_t count) {
  std::ostringstream os;
  os << "[";
  for (std::size_t k = 1; k <= count; ++k) os << (k > 1 ? ", " : "") << "[grb, r" << k << "]";
  os << "]";
  return os.str();
}

const std::string kSpatial35 =
    "key_exchange: {scheme: spatial, key_bits: 128, threshold: 3, field_prime: 13}\n"
    "jobs: {count: 1, payload_bytes: 256}\n";

Scenario spatial_with_taps(std::size_t taps) {
  return parse_scenario(star(5, kSpatial35,
                             "adversaries:\n  - name: eve\n    strategy: spatial_reconstruct\n    taps: " +
                                 taps_on(taps) + "\n"));
}

std::size_t error_line(const std::string& text) {
  try {
    parse_scenario(text);
  } catch (const ConfigError& e) {
    return e.line();
  }
  return 0;
}

}  // namespace

TEST(Topology, AcceptsDisjointPaths) {
  EXPECT_NO_THROW(parse_scenario(star(5, kSpatial35)));
}

TEST(Topology, RejectsSharedInteriorNode) {
  Topology t;
  t.add_node("grb", NodeRole::kGrb);
  t.add_node("drm", NodeRole::kDrm);
  t.add_node("a", NodeRole::kRouter);
  t.add_node("b", NodeRole::kRouter);
  t.add_edge("grb", "a", 1);
  t.add_edge("a", "b", 1);
  t.add_edge("b", "drm", 1);
  t.add_edge("a", "drm", 1);
  t.add_route("drm", {"grb", "a", "drm"});
  t.add_route("drm", {"grb", "a", "b", "drm"});
  EXPECT_THROW(t.validate(), TopologyError);
}

TEST(Topology, RejectsBrokenRoutes) {
  auto base = [] {
    Topology t;
    t.add_node("grb", NodeRole::kGrb);
    t.add_node("drm", NodeRole::kDrm);
    t.add_node("r", NodeRole::kRouter);
    t.add_edge("grb", "r", 1);
    t.add_edge("r", "drm", 1);
    return t;
  };
  {
    auto t = base();
    EXPECT_THROW(t.validate(), TopologyError);  // no paths
  }
  {
    auto t = base();
    t.add_route("drm", {"grb", "drm"});  // missing edge
    EXPECT_THROW(t.validate(), TopologyError);
  }
  {
    auto t = base();
    t.add_route("drm", {"r", "drm"});  // wrong start
    EXPECT_THROW(t.validate(), TopologyError);
  }
  {
    auto t = base();
    t.add_route("drm", {"grb", "r", "grb", "r", "drm"});  // revisits
    EXPECT_THROW(t.validate(), TopologyError);
  }
  {
    auto t = base();
    t.add_route("drm", {"grb", "r", "drm"});
    EXPECT_NO_THROW(t.validate());
    t.add_node("grb2", NodeRole::kGrb);
    EXPECT_THROW(t.validate(), TopologyError);
  }
  auto t = base();
  EXPECT_THROW(t.add_edge("grb", "r", 2), TopologyError);
  EXPECT_THROW(t.add_edge("grb", "x", 2), TopologyError);
  EXPECT_THROW(t.add_edge("grb", "drm", 0), TopologyError);
  EXPECT_THROW(t.add_node("r", NodeRole::kRouter), TopologyError);
}

TEST(ScenarioConfig, DiagnosticsCarryLines) {
  EXPECT_EQ(error_line("topology:\n  nodes: {grb: grb}\n  edges: []\n  paths: {}\nbogus: 1\n"), 5u);
  EXPECT_EQ(error_line("topology:\n  nodes:\n    grb: grb\n    d: dram\n  edges: []\n  paths: {}\n"), 4u);
  const auto bad_tap = star(3, kSpatial35, "adversaries:\n  - taps: [[grb, drm1]]\n");
  EXPECT_GT(error_line(bad_tap), 0u);
  const auto bad_strategy = star(3, kSpatial35, "adversaries:\n  - taps: []\n    strategy: jam\n");
  EXPECT_GT(error_line(bad_strategy), 0u);
  EXPECT_GT(error_line("seed: -3\n"), 0u);
  EXPECT_GT(error_line("a: [1, 2\n"), 0u);
}

TEST(ScenarioConfig, CrossChecks) {
  // Threshold above the path count.
  EXPECT_THROW(parse_scenario(star(2, kSpatial35)), ConfigError);
  // Field too small for the share count.
  EXPECT_THROW(parse_scenario(star(5, "key_exchange: {threshold: 2, field_prime: 5}\n")), ConfigError);
  // Key too long to key the channel MAC.
  EXPECT_THROW(parse_scenario(star(3, "key_exchange: {key_bits: 1024}\n")), ConfigError);
  EXPECT_THROW(parse_scenario(star(3, "key_exchange: {scheme: temporal, prime: 97, key_bits: 128}\n")),
               ConfigError);
  EXPECT_THROW(parse_scenario(star(3, "channel: {mac_bits: 8}\n")), ConfigError);
  EXPECT_NO_THROW(parse_scenario(star(3, "channel: {mac_bits: 8, audit_mode: true}\n")));
  try {
    parse_scenario(star(2, kSpatial35));
  } catch (const ConfigError& e) {
    EXPECT_EQ(e.path(), "key_exchange");
    EXPECT_GT(e.line(), 0u);
  }
}

TEST(Authenticator, MatchingKeyAcceptsAndReplayIsRefused) {
  Rng rng(1);
  crypto::MacKey key(Bytes(16, 0x42));
  DrmAuthenticator auth(key);
  const auto c0 = make_challenge(key, 0, rng);
  EXPECT_TRUE(auth.accept(c0));
  EXPECT_FALSE(auth.accept(c0));
  EXPECT_TRUE(auth.accept(make_challenge(key, 1, rng)));
  EXPECT_FALSE(auth.accept(c0));
  EXPECT_EQ(auth.mac_calls(), 4u);
}

TEST(Authenticator, MismatchedKeysReject) {
  Rng rng(2);
  for (int i = 0; i < 1000; ++i) {
    Bytes a(16), b(16);
    rng.fill(a.begin(), a.end());
    rng.fill(b.begin(), b.end());
    if (a == b) continue;
    DrmAuthenticator auth{crypto::MacKey(b)};
    ASSERT_FALSE(auth.accept(make_challenge(crypto::MacKey(a), 0, rng)));
  }
}

TEST(Simulator, SpatialBelowThresholdLeavesFieldUniform) {
  const auto s = spatial_with_taps(2);
  for (std::uint64_t seed = 1; seed <= 50; ++seed) {
    auto r = run_scenario(s, seed);
    ASSERT_EQ(r.adversaries.size(), 1u);
    const auto& t = r.adversaries[0].targets.at(0);
    EXPECT_EQ(t.observed, 2u);
    EXPECT_FALSE(t.recovered);
    ASSERT_TRUE(t.consistent_secrets);
    EXPECT_EQ(*t.consistent_secrets, 13u);
    EXPECT_TRUE(r.drms.at("drm1").key_matches);
  }
}

TEST(Simulator, SpatialAtThresholdRecoversKey) {
  const auto s = spatial_with_taps(3);
  for (std::uint64_t seed = 1; seed <= 50; ++seed) {
    auto r = run_scenario(s, seed);
    const auto& t = r.adversaries[0].targets.at(0);
    EXPECT_EQ(t.observed, 3u);
    EXPECT_TRUE(t.recovered);
    EXPECT_EQ(*t.consistent_secrets, 1u);
  }
}

TEST(Simulator, Deterministic) {
  const auto s = spatial_with_taps(3);
  auto a = run_scenario(s, 99);
  auto b = run_scenario(s, 99);
  EXPECT_EQ(a.event_log_text(), b.event_log_text());
  EXPECT_EQ(a.observation_log_text(), b.observation_log_text());
  EXPECT_EQ(a.summary_json(), b.summary_json());
  EXPECT_EQ(a.summary(), b.summary());
  auto c = run_scenario(s, 100);
  EXPECT_NE(a.summary_json(), c.summary_json());
}

TEST(Simulator, TapsArePassive) {
  const auto plain = parse_scenario(star(5, kSpatial35));
  const auto tapped = parse_scenario(star(
      5, kSpatial35,
      "adversaries:\n"
      "  - {name: a, strategy: spatial_reconstruct, taps: [[grb, r1], [grb, r2], [grb, r3], [grb, r4]]}\n"
      "  - {name: b, strategy: winnow_attempt, knowledge: [mac_key], taps: [[r5, drm1]]}\n"
      "  - {name: c, strategy: record_only, taps: [[grb, info]]}\n"));
  for (std::uint64_t seed : {1, 2, 3}) {
    auto x = run_scenario(plain, seed);
    auto y = run_scenario(tapped, seed);
    EXPECT_EQ(x.event_log_text(), y.event_log_text());
    EXPECT_TRUE(x.observation_log.empty());
    EXPECT_FALSE(y.observation_log.empty());
    EXPECT_EQ(x.bytes_on_wire, y.bytes_on_wire);
    for (const auto& [id, st] : x.nodes) {
      EXPECT_EQ(st.ops, y.nodes.at(id).ops);
      EXPECT_EQ(st.mac_calls(), y.nodes.at(id).mac_calls());
    }
  }
}

TEST(Simulator, ConservationAndJobDelivery) {
  const auto s = parse_scenario(star(3,
                                     "key_exchange: {threshold: 2}\n"
                                     "channel: {chaff_ratio: 1.5, chunk_bytes: 100}\n"
                                     "jobs: {count: 5, payload_bytes: 3000}\n"));
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    auto r = run_scenario(s, seed);
    const auto& d = r.drms.at("drm1");
    EXPECT_TRUE(d.authenticated);
    EXPECT_EQ(d.accepted + d.rejected, d.addressed);
    EXPECT_EQ(d.accepted, 5u * 30u);
    EXPECT_EQ(d.jobs_done, 5u);
    EXPECT_EQ(r.results_verified, 5u);
    EXPECT_EQ(r.nodes.at("drm1").mac_checks, d.addressed + 1);
  }
}

TEST(Simulator, BrokerMacCostIgnoresChaff) {
  for (const char* ratio : {"0", "1", "3"}) {
    const auto s = parse_scenario(star(
        2, std::string("key_exchange: {threshold: 2}\nchannel: {chunk_bytes: 64, chaff_ratio: ") + ratio +
               "}\njobs: {count: 2, payload_bytes: 1024}\n"));
    auto r = run_scenario(s, 5);
    const std::uint64_t job_wheat = 2 * 16;
    const auto& d = r.drms.at("drm1");
    EXPECT_EQ(d.addressed, job_wheat * (1 + std::stoul(ratio)));
    // One challenge plus one tag per wheat, whatever the chaff volume.
    EXPECT_EQ(r.nodes.at("grb").mac_tags, job_wheat + 1);
  }
}

TEST(Simulator, TemporalExchange) {
  const auto s = parse_scenario(star(
      2, "key_exchange: {scheme: temporal, key_bits: 96, parts: 4, prime: 1000003, packet_interval: 7}\n",
      "adversaries:\n"
      "  - {name: blind, strategy: temporal_guess, taps: [[grb, r1]]}\n"
      "  - {name: told, strategy: temporal_guess, knowledge: [prime_p], taps: [[grb, r1]]}\n"
      "  - {name: off-path, strategy: temporal_guess, knowledge: [prime_p], taps: [[grb, r2]]}\n"));
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    auto r = run_scenario(s, seed);
    EXPECT_TRUE(r.drms.at("drm1").key_matches);
    EXPECT_TRUE(r.drms.at("drm1").authenticated);
    EXPECT_EQ(r.adversaries[0].targets[0].observed, 4u);
    EXPECT_EQ(r.adversaries[0].targets[0].candidates, 64u);
    EXPECT_FALSE(r.adversaries[0].recovered());
    EXPECT_TRUE(r.adversaries[1].recovered());
    EXPECT_FALSE(r.adversaries[2].recovered());
  }
}

TEST(Simulator, WinnowWithoutKeyAcceptsAtTruncationRate) {
  const auto s = parse_scenario(star(
      1, "key_exchange: {threshold: 1}\n",
      "channel: {mac_bits: 8, audit_mode: true, chaff_ratio: 3, chunk_bytes: 8}\n"
      "jobs: {count: 2, payload_bytes: 32768}\n"
      "adversaries:\n  - {name: w, strategy: winnow_attempt, taps: [[grb, r1]]}\n"));
  auto r = run_scenario(s, 3);
  const auto& a = r.adversaries[0];
  // Job chaff plus the chaff of two 20-byte results returned in 8-byte chunks.
  EXPECT_EQ(a.chaff_seen, 3u * 8192u + 2u * 3u * 3u);
  const double n = static_cast<double>(a.chaff_seen);
  const double mean = n / 256.0;
  const double sigma = std::sqrt(n * (1.0 / 256.0) * (255.0 / 256.0));
  EXPECT_NEAR(static_cast<double>(a.chaff_accepted), mean, 4 * sigma);
  EXPECT_EQ(a.jobs_recovered, 0u);
}

TEST(Simulator, WinnowWithKeyIsPerfect) {
  const auto s = parse_scenario(star(2, "key_exchange: {threshold: 2}\n",
                                     "jobs: {count: 3, payload_bytes: 2000}\n"
                                     "adversaries:\n"
                                     "  - {name: w, strategy: winnow_attempt, knowledge: [mac_key], "
                                     "taps: [[grb, r1], [grb, r2]]}\n"));
  auto r = run_scenario(s, 4);
  const auto& a = r.adversaries[0];
  EXPECT_GT(a.wheat_seen, 0u);
  EXPECT_EQ(a.wheat_accepted, a.wheat_seen);
  EXPECT_EQ(a.chaff_accepted, 0u);
  EXPECT_EQ(a.jobs_recovered, 3u);
}

TEST(Simulator, CompromisedDrmRaisesAlert) {
  const std::string kx = "key_exchange: {threshold: 2}\njobs: {count: 2, payload_bytes: 64}\n";
  auto clean = run_scenario(parse_scenario(star(2, kx)), 1);
  EXPECT_TRUE(clean.alerts.empty());
  auto bad = run_scenario(parse_scenario(star(2, kx, "compromised_drms: [drm1]\n")), 1);
  ASSERT_EQ(bad.alerts.size(), 1u);
  EXPECT_EQ(bad.alerts[0].artifact_id, "stub");
  EXPECT_EQ(bad.alerts[0].kind, sentinel::ChangeKind::kContent);
  EXPECT_EQ(bad.results_verified, 2u);
}

TEST(Simulator, ExampleScenariosLoad) {
  for (const char* f : {"spatial_3of5.yaml", "temporal_grid.yaml"}) {
    auto s = load_scenario(std::string(GRIDSEC_SOURCE_DIR) + "/scenarios/" + f);
    auto r = run_scenario(s);
    for (const auto& [id, d] : r.drms) EXPECT_TRUE(d.key_matches) << f << " " << id;
    EXPECT_EQ(r.results_verified, r.jobs_sent) << f;
  }
}
