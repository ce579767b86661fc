// gridsec: command-line front end for the channel, key exchange, simulator,
// sentinel and cost benchmarks.
//
// Exit status: 0 success, 1 operational failure, 2 usage error.

#include <chrono>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <iterator>
#include <optional>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "json.hpp"

#include "gridsec/bench.hpp"
#include "gridsec/bytes.hpp"
#include "gridsec/cost_model.hpp"
#include "gridsec/crypto/instrumented.hpp"
#include "gridsec/errors.hpp"
#include "gridsec/keyx/spatial.hpp"
#include "gridsec/keyx/temporal.hpp"
#include "gridsec/modarith.hpp"
#include "gridsec/secret_key.hpp"
#include "gridsec/sentinel/trace.hpp"
#include "gridsec/sim/simulator.hpp"
#include "gridsec/wnc/channel.hpp"
#include "loopback.hpp"

namespace {

using json = nlohmann::ordered_json;
using namespace gridsec;

constexpr int kOk = 0;
constexpr int kFailure = 1;
constexpr int kUsage = 2;
constexpr const char* kReportSchema = "gridsec.run_report/1";

constexpr const char* kMacKeyEnv = "GRIDSEC_MAC_KEY";
constexpr const char* kKeyEnv = "GRIDSEC_KEY";
constexpr const char* kPrimeEnv = "GRIDSEC_PRIME";

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct Report {
  std::string command;
  json parameters = json::object();
  json metrics = json::object();
  std::string outcome = "success";
  std::string message;
};

json ops_json(const crypto::OpCount& c) {
  return json{{"xor32", c.xor32}, {"shift32", c.shift32}, {"gf8_mul", c.gf8_mul}, {"mul8", c.mul8}, {"gf8_inv", c.gf8_inv}};
}

Bytes read_stream(std::istream& in) {
  return Bytes(std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>());
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open '" + path + "'");
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

void write_out(ByteView data) {
  std::cout.write(reinterpret_cast<const char*>(data.data()), static_cast<std::streamsize>(data.size()));
  std::cout.flush();
}

// Secrets come from a file or the environment, never from argv.
std::string secret_text(const std::string& file, const char* env, const char* what, const char* flag) {
  if (!file.empty()) return read_file(file);
  if (const char* v = std::getenv(env)) return v;
  throw UsageError(std::string("no ") + what + ": pass " + flag + " or set " + env);
}

crypto::MacKey load_mac_key(const std::string& file) {
  Bytes key;
  try {
    key = from_hex(secret_text(file, kMacKeyEnv, "MAC key", "--key-file"));
  } catch (const MalformedInput& e) {
    throw Error(std::string("MAC key: ") + e.what());
  }
  return crypto::MacKey(std::move(key));
}

SecretKey load_key(const std::string& file, std::optional<std::size_t> bits) {
  return SecretKey::from_hex(secret_text(file, kKeyEnv, "key", "--key-file"), bits);
}

std::uint64_t parse_prime(std::string text, const std::string& what) {
  const auto b = text.find_first_not_of(" \t\r\n");
  const auto e = text.find_last_not_of(" \t\r\n");
  text = b == std::string::npos ? "" : text.substr(b, e - b + 1);
  std::uint64_t p = 0;
  std::size_t used = 0;
  try {
    p = std::stoull(text, &used, 0);
  } catch (const std::exception&) {
    used = 0;
  }
  if (text.empty() || used != text.size()) throw Error(what + ": expected an integer");
  if (!is_prime(p)) throw Error(what + ": " + std::to_string(p) + " is not prime");
  return p;
}

std::uint64_t load_prime(const std::string& file) {
  return parse_prime(secret_text(file, kPrimeEnv, "prime", "--prime-file"), "prime");
}

wnc::ChaffPayload parse_chaff_payload(const std::string& s) {
  return s == "random" ? wnc::ChaffPayload::kRandom : wnc::ChaffPayload::kComplement;
}

std::vector<std::string> lines_of(const std::string& text) {
  std::vector<std::string> out;
  std::istringstream in(text);
  for (std::string line; std::getline(in, line);) {
    if (auto h = line.find('#'); h != std::string::npos) line.erase(h);
    if (line.find_first_not_of(" \t\r") != std::string::npos) out.push_back(line);
  }
  return out;
}

// ---- wc ----

struct WcOptions {
  std::string key_file;
  double chaff_ratio = 1.0;
  std::uint64_t seed = 0;
  unsigned mac_bits = 160;
  bool audit = false;
  std::string chaff_payload = "complement";
  std::size_t chunk_bytes = wnc::kMaxPayloadBytes;
  std::optional<std::uint16_t> port;
};

wnc::ChannelConfig channel_config(const WcOptions& o) {
  wnc::ChannelConfig cfg{load_mac_key(o.key_file), o.chaff_ratio, o.mac_bits, o.seed, parse_chaff_payload(o.chaff_payload),
                         o.audit};
  cfg.validate();
  return cfg;
}

int wc_send(const WcOptions& o, Report& r) {
  r.parameters = {{"chaff_ratio", o.chaff_ratio}, {"seed", o.seed},           {"mac_bits", o.mac_bits},
                  {"audit_mode", o.audit},        {"chaff_payload", o.chaff_payload}, {"chunk_bytes", o.chunk_bytes}};
  if (o.chunk_bytes == 0 || o.chunk_bytes > wnc::kMaxPayloadBytes) throw UsageError("--chunk-bytes must be in [1, 1024]");
  const auto cfg = channel_config(o);
  const Bytes input = read_stream(std::cin);
  crypto::OpCount ops;
  wnc::Sender sender(cfg, &ops);
  const auto chunks = wnc::chunk_stream(input, o.chunk_bytes);
  Bytes wire;
  for (const auto& p : sender.transmit(chunks)) wnc::encode_to(wire, p);
  if (o.port) {
    tools::send_once(*o.port, wire);
  } else {
    write_out(wire);
  }
  r.metrics = {{"input_bytes", input.size()},    {"wheat", chunks.size()},    {"chaff", sender.chaff_count()},
               {"wire_bytes", wire.size()},      {"mac_calls", sender.mac_calls()}, {"ops", ops_json(ops)}};
  return kOk;
}

int wc_recv(const WcOptions& o, Report& r) {
  r.parameters = {{"mac_bits", o.mac_bits}, {"audit_mode", o.audit}};
  const auto cfg = channel_config(o);
  const Bytes wire = o.port ? tools::receive_once(*o.port) : read_stream(std::cin);
  const auto packets = wnc::decode_stream(wire);
  crypto::OpCount ops;
  wnc::Receiver rx(cfg, &ops);
  for (const auto& p : packets) rx.push(p);
  r.metrics = {{"wire_bytes", wire.size()}, {"packets", packets.size()}, {"rejected", rx.state().rejected_count},
               {"mac_calls", rx.mac_calls()}, {"ops", ops_json(ops)}};
  const Bytes out = wnc::join(rx.finish());
  r.metrics["output_bytes"] = out.size();
  write_out(out);
  return kOk;
}

// ---- keyx ----

struct KeyxOptions {
  std::string key_file;
  std::string prime_file;
  std::optional<std::size_t> bits;
  std::size_t threshold = 0;
  std::size_t shares = 0;
  std::size_t parts = 0;
  std::uint64_t field_prime = kDefaultPrime;
  std::uint64_t seed = 1;
  std::vector<std::string> inputs;
};

std::string read_inputs(const std::vector<std::string>& files) {
  if (files.empty()) {
    const auto b = read_stream(std::cin);
    return std::string(b.begin(), b.end());
  }
  std::string all;
  for (const auto& f : files) all += read_file(f) + "\n";
  return all;
}

int spatial_split(const KeyxOptions& o, Report& r) {
  const keyx::ThresholdPolicy policy{o.threshold, o.shares, o.field_prime};
  r.parameters = {{"threshold", o.threshold}, {"shares", o.shares}, {"field_prime", o.field_prime}, {"seed", o.seed}};
  try {
    policy.validate();
  } catch (const InvalidParameter& e) {
    throw UsageError(e.what());
  }
  const auto key = load_key(o.key_file, o.bits);
  r.parameters["bits"] = key.bit_length();
  for (const auto& bundle : keyx::split(key, policy, o.seed)) std::cout << to_hex(keyx::encode_bundle(bundle)) << "\n";
  r.metrics = {{"bundles", o.shares}, {"chunks", (key.bit_length() + policy.chunk_bits() - 1) / policy.chunk_bits()}};
  return kOk;
}

int spatial_reconstruct(const KeyxOptions& o, Report& r) {
  r.parameters = {{"threshold", o.threshold}, {"bits", *o.bits}, {"field_prime", o.field_prime}};
  std::vector<keyx::ShareBundle> bundles;
  for (const auto& line : lines_of(read_inputs(o.inputs))) bundles.push_back(keyx::decode_bundle(from_hex(line)));
  const keyx::ThresholdPolicy policy{o.threshold, std::max(o.threshold, bundles.size()), o.field_prime};
  try {
    policy.validate();
  } catch (const InvalidParameter& e) {
    throw UsageError(e.what());
  }
  const auto key = keyx::reconstruct(bundles, policy, *o.bits);
  std::cout << key.to_hex() << "\n";
  r.metrics = {{"bundles", bundles.size()}};
  return kOk;
}

int temporal_send(const KeyxOptions& o, Report& r) {
  r.parameters = {{"parts", o.parts}, {"seed", o.seed}};
  const auto key = load_key(o.key_file, o.bits);
  const keyx::TemporalParams params{load_prime(o.prime_file), key.bit_length(), o.parts};
  r.parameters["bits"] = key.bit_length();
  try {
    params.validate();
  } catch (const InvalidParameter& e) {
    throw UsageError(e.what());
  }
  const auto ex = keyx::temporal_send(key, params, o.seed);
  const auto wire = keyx::encode_exchange(ex);
  std::cout << to_hex(wire) << "\n";
  r.metrics = {{"packets", ex.packets.size()}, {"wire_bytes", wire.size()}};
  return kOk;
}

int temporal_receive(const KeyxOptions& o, Report& r) {
  const std::uint64_t p = load_prime(o.prime_file);
  const auto ex = keyx::decode_exchange(from_hex(read_inputs(o.inputs)));
  const keyx::TemporalParams params{p, ex.key_bits, ex.parts};
  r.parameters = {{"bits", ex.key_bits}, {"parts", ex.parts}};
  const auto key = keyx::temporal_receive(ex.packets, params);
  std::cout << key.to_hex() << "\n";
  r.metrics = {{"packets", ex.packets.size()}};
  return kOk;
}

// ---- sim, sentinel, bench ----

int sim_run(const std::string& file, std::optional<std::uint64_t> seed, const std::string& out_dir, Report& r) {
  const auto scenario = sim::load_scenario(file);
  const auto result = sim::run_scenario(scenario, seed.value_or(scenario.seed));
  r.parameters = {{"scenario", file}, {"seed", result.seed}};
  if (!out_dir.empty()) {
    std::filesystem::create_directories(out_dir);
    const auto write = [&](const char* name, const std::string& text) {
      std::ofstream f(std::filesystem::path(out_dir) / name, std::ios::binary);
      if (!f) throw Error(std::string("cannot write ") + name);
      f << text;
    };
    write("events.jsonl", result.event_log_text());
    write("observations.jsonl", result.observation_log_text());
    write("summary.json", result.summary_json() + "\n");
  }
  std::cout << result.summary();
  r.metrics = json::parse(result.summary_json());
  return kOk;
}

int sentinel_replay(const std::string& file, bool as_json, Report& r) {
  std::ifstream in(file);
  if (!in) throw Error("cannot open '" + file + "'");
  const auto res = sentinel::replay_trace(in);
  for (const auto& a : res.alerts) {
    if (as_json) {
      std::cout << json{{"tick", a.tick}, {"artifact", a.artifact_id}, {"kind", sentinel::to_string(a.kind)}}.dump()
                << "\n";
    } else {
      std::cout << a.tick << " " << a.artifact_id << " " << sentinel::to_string(a.kind) << "\n";
    }
  }
  r.parameters = {{"trace", file}};
  r.metrics = {{"events", res.events.size()},
               {"alerts", res.alerts.size()},
               {"warnings", res.warnings},
               {"fingerprint_computations", res.fingerprint_computations}};
  return kOk;
}

struct BenchOptions {
  std::string scheme = "both";
  std::uint64_t bits = 512;
  std::string counts = "analytic";
  std::uint64_t stream_bytes = 0;
  double chaff_ratio = 1.0;
  unsigned trials = 5;
  std::size_t chunk_bytes = 1024;
  std::uint64_t seed = 1;
};

int bench(const BenchOptions& o, Report& r) {
  r.parameters = {{"scheme", o.scheme},           {"bits", o.bits},   {"counts", o.counts},
                  {"stream_bytes", o.stream_bytes}, {"chaff_ratio", o.chaff_ratio}, {"trials", o.trials},
                  {"chunk_bytes", o.chunk_bytes}, {"seed", o.seed}};
  if (o.bits == 0) throw UsageError("--bits must be positive");
  cost::BenchReport timing;
  if (o.stream_bytes > 0) {
    try {
      timing = cost::wallclock_bench(cost::BenchConfig{o.stream_bytes, o.chaff_ratio, o.trials, o.chunk_bytes, o.seed});
    } catch (const InvalidParameter& e) {
      throw UsageError(e.what());
    }
  }

  std::vector<cost::Scheme> schemes;
  if (o.scheme != "aes") schemes.push_back(cost::Scheme::kHmacSha1);
  if (o.scheme != "hmac") schemes.push_back(cost::Scheme::kAes128);

  std::cout << "scheme,message_bits,xor32,shift32,gf8_mul,mul8,gf8_inv,bytes_transferred,median_throughput_MBps\n";
  json rows = json::array();
  for (auto s : schemes) {
    crypto::OpCount ops;
    if (o.counts == "instrumented") {
      const auto alg = s == cost::Scheme::kHmacSha1 ? crypto::Algorithm::kHmacSha1 : crypto::Algorithm::kAes128;
      ops = crypto::instrumented_run(alg, (o.bits + 7) / 8);
    } else {
      ops = cost::analytic_cost(s, o.bits).ops;
    }
    std::string bytes, mbps;
    if (!timing.empty) {
      const bool wc = s == cost::Scheme::kHmacSha1;
      bytes = std::to_string(wc ? timing.wc_wire_bytes : timing.baseline_wire_bytes);
      char buf[32];
      std::snprintf(buf, sizeof buf, "%.2f", wc ? timing.wc_mbps : timing.baseline_mbps);
      mbps = buf;
    }
    std::cout << cost::scheme_name(s) << "," << o.bits << "," << ops.xor32 << "," << ops.shift32 << "," << ops.gf8_mul
              << "," << ops.mul8 << "," << ops.gf8_inv << "," << bytes << "," << mbps << "\n";
    rows.push_back(json{{"scheme", cost::scheme_name(s)}, {"ops", ops_json(ops)}});
  }
  r.metrics = {{"rows", rows}};
  if (!timing.empty) {
    r.metrics["wc_mbps"] = timing.wc_mbps;
    r.metrics["baseline_mbps"] = timing.baseline_mbps;
  }
  return kOk;
}

void write_report(const std::string& path, const Report& r, int status, double wall_ms) {
  json j;
  j["schema"] = kReportSchema;
  j["command"] = r.command;
  j["parameters"] = r.parameters;
  j["outcome"] = r.outcome;
  if (!r.message.empty()) j["message"] = r.message;
  j["metrics"] = r.metrics;
  j["timings"] = json{{"wall_ms", wall_ms}};
  j["exit_status"] = status;
  std::ofstream out(path);
  if (!out) {
    std::cerr << "gridsec: cannot write report '" << path << "'\n";
    return;
  }
  out << j.dump(2) << "\n";
}

}  // namespace

int main(int argc, char** argv) {
  std::ios::sync_with_stdio(false);

  CLI::App app{"Grid security toolkit: chaffing channel, key exchange, simulator, sentinel, benchmarks"};
  app.require_subcommand(1);
  std::string report_path;
  app.add_option("--report", report_path, "Write a JSON run report to this file");

  Report report;
  std::function<int(Report&)> action;

  // wc
  auto* wc = app.add_subcommand("wc", "Chaffing and winnowing transfer over stdin/stdout");
  wc->require_subcommand(1);
  WcOptions wco;
  auto add_channel_opts = [&](CLI::App* c) {
    c->add_option("--key-file", wco.key_file, "Hex MAC key file (default: $GRIDSEC_MAC_KEY)");
    c->add_option("--mac-bits", wco.mac_bits, "MAC bits compared, multiple of 8 in [8, 160]");
    c->add_flag("--audit-mode", wco.audit, "Allow truncation below 64 bits");
    c->add_option("--port", wco.port, "Use a TCP loopback connection instead of stdin/stdout");
  };
  auto* wc_send_cmd = wc->add_subcommand("send", "Read a byte stream, write wheat and chaff packets");
  add_channel_opts(wc_send_cmd);
  wc_send_cmd->add_option("--chaff-ratio", wco.chaff_ratio, "Chaff packets per wheat packet")->check(CLI::NonNegativeNumber);
  wc_send_cmd->add_option("--seed", wco.seed, "Seed for chaff placement and content");
  wc_send_cmd->add_option("--chaff-payload", wco.chaff_payload, "complement or random")
      ->check(CLI::IsMember({"complement", "random"}));
  wc_send_cmd->add_option("--chunk-bytes", wco.chunk_bytes, "Payload bytes per packet (1..1024)");
  wc_send_cmd->callback([&] {
    report.command = "wc send";
    action = [&](Report& r) { return wc_send(wco, r); };
  });
  auto* wc_recv_cmd = wc->add_subcommand("recv", "Read packets, write the winnowed byte stream");
  add_channel_opts(wc_recv_cmd);
  wc_recv_cmd->callback([&] {
    report.command = "wc recv";
    action = [&](Report& r) { return wc_recv(wco, r); };
  });

  // keyx
  auto* keyx = app.add_subcommand("keyx", "Split-distribution key exchange");
  keyx->require_subcommand(1);
  KeyxOptions ko;
  auto* ss = keyx->add_subcommand("spatial-split", "Split a key into threshold share bundles (hex lines)");
  ss->add_option("--key-file", ko.key_file, "Hex key file (default: $GRIDSEC_KEY)");
  ss->add_option("--bits", ko.bits, "Key length in bits when not a whole number of hex bytes");
  ss->add_option("-t,--threshold", ko.threshold, "Bundles needed to reconstruct")->required();
  ss->add_option("-n,--shares", ko.shares, "Bundles to produce")->required();
  ss->add_option("--field-prime", ko.field_prime, "Share field prime");
  ss->add_option("--seed", ko.seed, "Seed for polynomial coefficients");
  ss->callback([&] {
    report.command = "keyx spatial-split";
    action = [&](Report& r) { return spatial_split(ko, r); };
  });
  auto* sr = keyx->add_subcommand("spatial-reconstruct", "Rebuild a key from bundle hex lines");
  sr->add_option("-t,--threshold", ko.threshold, "Bundles needed to reconstruct")->required();
  sr->add_option("--bits", ko.bits, "Key length in bits")->required();
  sr->add_option("--field-prime", ko.field_prime, "Share field prime");
  sr->add_option("inputs", ko.inputs, "Bundle files (default: stdin)");
  sr->callback([&] {
    report.command = "keyx spatial-reconstruct";
    action = [&](Report& r) { return spatial_reconstruct(ko, r); };
  });
  auto* ts = keyx->add_subcommand("temporal-send", "Encode a key as a temporal exchange (hex)");
  ts->add_option("--key-file", ko.key_file, "Hex key file (default: $GRIDSEC_KEY)");
  ts->add_option("--bits", ko.bits, "Key length in bits when not a whole number of hex bytes");
  ts->add_option("--parts", ko.parts, "Number of key parts")->required();
  ts->add_option("--prime-file", ko.prime_file, "Pre-shared prime file (default: $GRIDSEC_PRIME)");
  ts->add_option("--seed", ko.seed, "Seed for split positions, points and slot fill");
  ts->callback([&] {
    report.command = "keyx temporal-send";
    action = [&](Report& r) { return temporal_send(ko, r); };
  });
  auto* tr = keyx->add_subcommand("temporal-receive", "Recover the key from a temporal exchange (hex)");
  tr->add_option("--prime-file", ko.prime_file, "Pre-shared prime file (default: $GRIDSEC_PRIME)");
  tr->add_option("inputs", ko.inputs, "Exchange file (default: stdin)");
  tr->callback([&] {
    report.command = "keyx temporal-receive";
    action = [&](Report& r) { return temporal_receive(ko, r); };
  });

  // sim
  auto* sim = app.add_subcommand("sim", "Grid simulator");
  sim->require_subcommand(1);
  std::string scenario_file, out_dir;
  std::optional<std::uint64_t> sim_seed;
  auto* run = sim->add_subcommand("run", "Run a scenario; summary to stdout, logs to --out");
  run->add_option("scenario", scenario_file, "Scenario YAML file")->required();
  run->add_option("--seed", sim_seed, "Override the scenario seed");
  run->add_option("--out", out_dir, "Directory for events.jsonl, observations.jsonl, summary.json");
  run->callback([&] {
    report.command = "sim run";
    action = [&](Report& r) { return sim_run(scenario_file, sim_seed, out_dir, r); };
  });

  // sentinel
  auto* sen = app.add_subcommand("sentinel", "Integrity listener");
  sen->require_subcommand(1);
  std::string trace_file;
  bool trace_json = false;
  auto* replay = sen->add_subcommand("replay", "Replay a change trace; one line per alert");
  replay->add_option("trace", trace_file, "Trace file")->required();
  replay->add_flag("--json", trace_json, "Emit alerts as JSON Lines");
  replay->callback([&] {
    report.command = "sentinel replay";
    action = [&](Report& r) { return sentinel_replay(trace_file, trace_json, r); };
  });

  // bench
  BenchOptions bo;
  auto* bench_cmd = app.add_subcommand("bench", "Operation counts and optional wall-clock throughput as CSV");
  bench_cmd->add_option("--scheme", bo.scheme, "hmac, aes or both")->check(CLI::IsMember({"hmac", "aes", "both"}));
  bench_cmd->add_option("--bits", bo.bits, "Message length in bits");
  bench_cmd->add_option("--counts", bo.counts, "analytic or instrumented")
      ->check(CLI::IsMember({"analytic", "instrumented"}));
  bench_cmd->add_option("--stream-bytes", bo.stream_bytes, "Time a stream of this size (0: skip timing)");
  bench_cmd->add_option("--chaff-ratio", bo.chaff_ratio, "Chaff ratio for the timed channel")
      ->check(CLI::NonNegativeNumber);
  bench_cmd->add_option("--trials", bo.trials, "Timed trials; the median is reported");
  bench_cmd->add_option("--chunk-bytes", bo.chunk_bytes, "Payload bytes per packet for the timed runs");
  bench_cmd->add_option("--seed", bo.seed, "Seed for the timed stream");
  bench_cmd->callback([&] {
    report.command = "bench";
    action = [&](Report& r) { return bench(bo, r); };
  });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kUsage;
  }

  const auto t0 = std::chrono::steady_clock::now();
  int status = kOk;
  try {
    status = action(report);
  } catch (const UsageError& e) {
    std::cerr << "gridsec: " << e.what() << "\nRun with --help for usage.\n";
    report.outcome = "usage_error";
    report.message = e.what();
    status = kUsage;
  } catch (const std::exception& e) {
    std::cerr << "gridsec: " << e.what() << "\n";
    report.outcome = "failure";
    report.message = e.what();
    status = kFailure;
  }
  const double ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
  if (!report_path.empty()) write_report(report_path, report, status, ms);
  return status;
}
