#include <gtest/gtest.h>

#include <algorithm>
#include <bit>

#include "gridsec/errors.hpp"
#include "gridsec/rng.hpp"
#include "gridsec/wnc/channel.hpp"

using namespace gridsec;
using namespace gridsec::wnc;

namespace {

Bytes random_bytes(Rng& rng, std::size_t n) {
  Bytes b(n);
  rng.fill(b.begin(), b.end());
  return b;
}

ChannelConfig config_with(Rng& rng, double ratio = 1.0) {
  return ChannelConfig{.key = crypto::MacKey(random_bytes(rng, 1 + rng.below(64))),
                       .chaff_ratio = ratio,
                       .rng_seed = rng.next()};
}

std::vector<Bytes> random_stream(Rng& rng, std::size_t max_chunks, std::size_t max_len) {
  std::vector<Bytes> s(rng.below(max_chunks + 1));
  for (auto& c : s) c = random_bytes(rng, 1 + rng.below(max_len));
  return s;
}

}  // namespace

TEST(ChannelConfig, Validation) {
  ChannelConfig c{.key = crypto::MacKey(Bytes{1})};
  EXPECT_NO_THROW(c.validate());
  c.mac_bits = 12;
  EXPECT_THROW(c.validate(), InvalidParameter);
  c.mac_bits = 8;
  EXPECT_THROW(c.validate(), InvalidParameter);  // needs audit mode
  c.audit_mode = true;
  EXPECT_NO_THROW(c.validate());
  c.mac_bits = 168;
  EXPECT_THROW(c.validate(), InvalidParameter);
  c.mac_bits = 160;
  c.chaff_ratio = -0.5;
  EXPECT_THROW(c.validate(), InvalidParameter);
}

TEST(Wheat, VerifiesUnderItsKey) {
  Rng rng(1);
  for (int i = 0; i < 500; ++i) {
    auto cfg = config_with(rng);
    auto p = make_wheat(cfg, static_cast<std::uint32_t>(rng.next()), random_bytes(rng, 1 + rng.below(1024)));
    EXPECT_EQ(verify(cfg, p), Verdict::kWheat);
  }
}

TEST(Wheat, SequenceNumberIsAuthenticated) {
  Rng rng(2);
  for (int i = 0; i < 1000; ++i) {
    auto cfg = config_with(rng);
    Bytes payload = random_bytes(rng, 1 + rng.below(64));
    auto s1 = static_cast<std::uint32_t>(rng.next());
    auto s2 = s1 + 1 + static_cast<std::uint32_t>(rng.below(1000));
    EXPECT_NE(make_wheat(cfg, s1, payload).mac, make_wheat(cfg, s2, payload).mac);
  }
}

TEST(Wheat, KeyChangeBreaksVerification) {
  Rng rng(3);
  for (int i = 0; i < 1000; ++i) {
    auto cfg = config_with(rng);
    auto p = make_wheat(cfg, 7, random_bytes(rng, 32));
    auto other = config_with(rng);
    if (other.key == cfg.key) continue;
    EXPECT_EQ(verify(other, p), Verdict::kChaff);
  }
}

TEST(Wheat, PayloadBounds) {
  ChannelConfig cfg{.key = crypto::MacKey(Bytes{1, 2, 3})};
  EXPECT_THROW(make_wheat(cfg, 0, Bytes{}), SizeError);
  EXPECT_THROW(make_wheat(cfg, 0, Bytes(1025, 0)), SizeError);
  EXPECT_NO_THROW(make_wheat(cfg, 0, Bytes(1024, 0)));
}

TEST(Wheat, TruncatedMacZeroPadded) {
  ChannelConfig cfg{.key = crypto::MacKey(Bytes{9}), .mac_bits = 64};
  auto p = make_wheat(cfg, 1, Bytes{1, 2, 3});
  EXPECT_TRUE(std::all_of(p.mac.begin() + 8, p.mac.end(), [](auto b) { return b == 0; }));
  EXPECT_EQ(verify(cfg, p), Verdict::kWheat);
}

TEST(Chaff, ComplementPayloadAndRandomMac) {
  Rng rng(4);
  auto cfg = config_with(rng);
  Sender tx(cfg);
  for (int i = 0; i < 200; ++i) {
    Bytes wheat = random_bytes(rng, 1 + rng.below(1024));
    auto c = tx.make_chaff(5, wheat);
    ASSERT_EQ(c.payload.size(), wheat.size());
    for (std::size_t j = 0; j < wheat.size(); ++j) EXPECT_EQ(c.payload[j] ^ wheat[j], 0xff);
    EXPECT_EQ(verify(cfg, c), Verdict::kChaff);
  }
  EXPECT_EQ(tx.mac_calls(), 0u);
}

TEST(Chaff, RandomPayloadMode) {
  Rng rng(5);
  auto cfg = config_with(rng);
  cfg.chaff_payload = ChaffPayload::kRandom;
  Sender tx(cfg);
  Bytes wheat(64, 0x00);
  auto c = tx.make_chaff(0, wheat);
  EXPECT_EQ(c.payload.size(), 64u);
  EXPECT_NE(c.payload, Bytes(64, 0xff));
}

TEST(Chaff, SameSeedSameMacSequence) {
  Rng rng(6);
  auto cfg = config_with(rng);
  Sender a(cfg), b(cfg);
  Bytes wheat = random_bytes(rng, 40);
  for (std::uint32_t s = 0; s < 100; ++s) EXPECT_EQ(a.make_chaff(s, wheat), b.make_chaff(s, wheat));
}

TEST(Transmit, RatioOneDoublesPacketCount) {
  Rng rng(7);
  for (int i = 0; i < 50; ++i) {
    auto cfg = config_with(rng, 1.0);
    auto stream = random_stream(rng, 40, 64);
    EXPECT_EQ(transmit(cfg, stream).size(), 2 * stream.size());
  }
}

TEST(Transmit, RatioZeroIsWheatInOrder) {
  Rng rng(8);
  auto cfg = config_with(rng, 0.0);
  auto stream = random_stream(rng, 30, 64);
  auto packets = transmit(cfg, stream);
  ASSERT_EQ(packets.size(), stream.size());
  for (std::size_t i = 0; i < packets.size(); ++i) {
    EXPECT_EQ(packets[i].seq, i);
    EXPECT_EQ(packets[i].payload, stream[i]);
    EXPECT_EQ(verify(cfg, packets[i]), Verdict::kWheat);
  }
}

TEST(Transmit, WheatOrderPreservedAndChaffNearPartner) {
  Rng rng(9);
  auto cfg = config_with(rng, 2.0);
  auto stream = random_stream(rng, 100, 16);
  auto packets = transmit(cfg, stream);
  std::int64_t last_seq = -1;
  std::size_t wheat_seen = 0;
  for (const auto& p : packets) {
    if (verify(cfg, p) == Verdict::kWheat) {
      EXPECT_EQ(static_cast<std::int64_t>(p.seq), last_seq + 1);
      last_seq = p.seq;
      ++wheat_seen;
    } else {
      // A chaff packet sits within two wheat slots of its partner.
      EXPECT_LE(std::llabs(static_cast<std::int64_t>(p.seq) - static_cast<std::int64_t>(wheat_seen)), 3);
    }
  }
  EXPECT_EQ(wheat_seen, stream.size());
}

TEST(Transmit, FractionalRatioInExpectation) {
  Rng rng(10);
  auto cfg = config_with(rng, 0.25);
  std::vector<Bytes> stream(20000, Bytes{1});
  Sender tx(cfg);
  auto packets = tx.transmit(stream);
  const double chaff = static_cast<double>(packets.size() - stream.size());
  // Binomial(20000, 0.25): mean 5000, sd ~61; 5 sd bound.
  EXPECT_NEAR(chaff, 5000.0, 310.0);
  EXPECT_EQ(tx.chaff_count(), packets.size() - stream.size());
}

TEST(Transmit, MacCallsEqualWheatCount) {
  Rng rng(11);
  for (double ratio : {0.0, 1.0, 3.0, 1.7}) {
    auto cfg = config_with(rng, ratio);
    auto stream = random_stream(rng, 50, 32);
    Sender tx(cfg);
    auto packets = tx.transmit(stream);
    EXPECT_EQ(tx.mac_calls(), stream.size());
    EXPECT_EQ(tx.chaff_count() + stream.size(), packets.size());
  }
}

TEST(Winnow, RoundtripProperty) {
  Rng rng(12);
  for (int trial = 0; trial < 2000; ++trial) {
    auto cfg = config_with(rng, static_cast<double>(rng.below(301)) / 100.0);
    auto stream = random_stream(rng, 12, 48);
    Sender tx(cfg);
    auto packets = tx.transmit(stream);
    auto r = winnow(cfg, packets);
    ASSERT_EQ(r.payloads, stream);
    ASSERT_EQ(r.rejected_count, tx.chaff_count());
  }
}

TEST(Winnow, PureChaffIsEmpty) {
  Rng rng(13);
  auto cfg = config_with(rng);
  Sender tx(cfg);
  std::vector<WcPacket> chaff;
  for (std::uint32_t s = 0; s < 100; ++s) chaff.push_back(tx.make_chaff(s, random_bytes(rng, 10)));
  auto r = winnow(cfg, chaff);
  EXPECT_TRUE(r.payloads.empty());
  EXPECT_EQ(r.rejected_count, chaff.size());
}

TEST(Winnow, ShuffledInputSameOrder) {
  Rng rng(14);
  for (int trial = 0; trial < 1000; ++trial) {
    auto cfg = config_with(rng, 1.0);
    auto stream = random_stream(rng, 10, 16);
    auto packets = transmit(cfg, stream);
    for (std::size_t i = packets.size(); i > 1; --i) std::swap(packets[i - 1], packets[rng.below(i)]);
    ASSERT_EQ(winnow(cfg, packets).payloads, stream);
  }
}

TEST(Winnow, DuplicateSeqKeepsFirst) {
  Rng rng(15);
  auto cfg = config_with(rng, 0.0);
  auto a = make_wheat(cfg, 0, Bytes{1});
  auto replay = a;
  auto b = make_wheat(cfg, 1, Bytes{2});
  auto r = winnow(cfg, std::vector<WcPacket>{a, b, replay});
  EXPECT_EQ(r.payloads, (std::vector<Bytes>{{1}, {2}}));
  EXPECT_EQ(r.rejected_count, 1u);

  // A verified packet with a seq already delivered in order is a replay too.
  auto forged_again = make_wheat(cfg, 0, Bytes{9});
  auto r2 = winnow(cfg, std::vector<WcPacket>{a, forged_again});
  EXPECT_EQ(r2.payloads, (std::vector<Bytes>{{1}}));
  EXPECT_EQ(r2.rejected_count, 1u);
}

TEST(Winnow, GapRaisesIncompleteStreamWithPrefix) {
  Rng rng(16);
  auto cfg = config_with(rng, 0.0);
  std::vector<WcPacket> packets{make_wheat(cfg, 0, Bytes{1}), make_wheat(cfg, 1, Bytes{2}),
                                make_wheat(cfg, 3, Bytes{4})};
  try {
    winnow(cfg, packets);
    FAIL() << "expected IncompleteStream";
  } catch (const IncompleteStream& e) {
    EXPECT_EQ(e.prefix(), (std::vector<Bytes>{{1}, {2}}));
  }
}

TEST(Winnow, WrongKeyAcceptsNothing) {
  Rng rng(17);
  for (int trial = 0; trial < 300; ++trial) {
    auto cfg = config_with(rng, 1.0);
    auto other = config_with(rng, 1.0);
    if (other.key == cfg.key) continue;
    auto stream = random_stream(rng, 10, 16);
    auto packets = transmit(cfg, stream);
    auto r = winnow(other, packets);
    EXPECT_TRUE(r.payloads.empty());
    EXPECT_EQ(r.rejected_count, packets.size());
  }
}

TEST(Winnow, EightBitTruncationFalseAccepts) {
  Rng rng(18);
  ChannelConfig cfg{.key = crypto::MacKey(random_bytes(rng, 20)), .mac_bits = 8, .rng_seed = 99, .audit_mode = true};
  Sender tx(cfg);
  std::uint64_t accepted = 0;
  const int n = 20000;
  for (int i = 0; i < n; ++i) {
    Bytes wheat = random_bytes(rng, 8);
    if (verify(cfg, tx.make_chaff(static_cast<std::uint32_t>(i), wheat)) == Verdict::kWheat) ++accepted;
  }
  // Binomial(20000, 1/256): mean 78.1, sd 8.8; 4 sd.
  EXPECT_NEAR(static_cast<double>(accepted), 78.1, 35.3);
}

// A keyless observer that picks the packet whose MAC has the larger
// popcount (ties broken by the leading byte) should do no better than chance.
TEST(Indistinguishability, MacStructureObserverIsAtChance) {
  Rng rng(19);
  auto cfg = config_with(rng, 1.0);
  Sender tx(cfg);
  const int trials = 10000;
  int correct = 0;
  for (int i = 0; i < trials; ++i) {
    Bytes payload = random_bytes(rng, 32);
    auto wheat = tx.make_wheat(static_cast<std::uint32_t>(i), payload);
    auto chaff = tx.make_chaff(static_cast<std::uint32_t>(i), payload);
    const bool wheat_first = rng.below(2) == 0;
    const auto& first = wheat_first ? wheat : chaff;
    const auto& second = wheat_first ? chaff : wheat;
    auto score = [](const WcPacket& p) {
      int pc = 0;
      for (auto b : p.mac) pc += std::popcount(b);
      return pc * 256 + p.mac[0];
    };
    const bool guess_first = score(first) >= score(second);
    if (guess_first == wheat_first) ++correct;
  }
  EXPECT_NEAR(static_cast<double>(correct) / trials, 0.5, 0.02);
}

TEST(Wire, EncodeLayoutIsBitExact) {
  WcPacket p{.seq = 0x01020304, .payload = {0xaa, 0xbb}, .mac = {}};
  p.mac.fill(0x11);
  Bytes w = encode(p);
  const Bytes head{0x57, 0x43, 0x01, 0x00, 0x01, 0x02, 0x03, 0x04, 0x00, 0x02, 0xaa, 0xbb};
  ASSERT_EQ(w.size(), head.size() + 20);
  EXPECT_TRUE(std::equal(head.begin(), head.end(), w.begin()));
  EXPECT_TRUE(std::all_of(w.begin() + 12, w.end(), [](auto b) { return b == 0x11; }));
}

TEST(Wire, StreamRoundtripProperty) {
  Rng rng(20);
  for (int trial = 0; trial < 200; ++trial) {
    auto cfg = config_with(rng, 1.5);
    auto packets = transmit(cfg, random_stream(rng, 20, 1024));
    Bytes wire;
    for (const auto& p : packets) encode_to(wire, p);
    EXPECT_EQ(decode_stream(wire), packets);
  }
}

TEST(Wire, MalformedFramesRejected) {
  WcPacket p{.seq = 1, .payload = {1}, .mac = {}};
  Bytes w = encode(p);
  Bytes bad_magic = w;
  bad_magic[0] = 0;
  EXPECT_THROW(decode_stream(bad_magic), MalformedInput);
  Bytes bad_version = w;
  bad_version[2] = 2;
  EXPECT_THROW(decode_stream(bad_version), MalformedInput);
  Bytes truncated(w.begin(), w.end() - 1);
  EXPECT_THROW(decode_stream(truncated), MalformedInput);
  Bytes zero_len = w;
  zero_len[8] = 0;
  zero_len[9] = 0;
  EXPECT_THROW(decode_stream(zero_len), MalformedInput);
}

TEST(ChunkStream, SplitsAndJoins) {
  Rng rng(21);
  Bytes data = random_bytes(rng, 5000);
  auto chunks = chunk_stream(data, 1024);
  EXPECT_EQ(chunks.size(), 5u);
  EXPECT_EQ(chunks.back().size(), 5000u - 4096u);
  EXPECT_EQ(join(chunks), data);
  EXPECT_TRUE(chunk_stream(Bytes{}, 10).empty());
  EXPECT_THROW(chunk_stream(data, 0), InvalidParameter);
}
