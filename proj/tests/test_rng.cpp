#include <doctest.h>

#include <cmath>
#include <set>
#include <vector>

#include "tfs/rng.hpp"

using namespace tfs;

TEST_CASE("philox known-answer vectors (Random123 kat_vectors)") {
  auto out = philox4x32_10({0, 0, 0, 0}, {0, 0});
  CHECK(out == std::array<std::uint32_t, 4>{0x6627e8d5u, 0xe169c58du,
                                            0xbc57ac4cu, 0x9b00dbd8u});
  out = philox4x32_10({0xffffffffu, 0xffffffffu, 0xffffffffu, 0xffffffffu},
                      {0xffffffffu, 0xffffffffu});
  CHECK(out == std::array<std::uint32_t, 4>{0x408f276du, 0x41c83b0eu,
                                            0xa20bc7c6u, 0x6d5451fdu});
  out = philox4x32_10({0x243f6a88u, 0x85a308d3u, 0x13198a2eu, 0x03707344u},
                      {0xa4093822u, 0x299f31d0u});
  CHECK(out == std::array<std::uint32_t, 4>{0xd16cfe09u, 0x94fdccebu,
                                            0x5001e420u, 0x24126ea1u});
}

TEST_CASE("identical (seed, stream) replays bit-identically") {
  RngStream a(42, 7), b(42, 7);
  for (int i = 0; i < 1000; ++i) {
    CHECK(a.next_u64() == b.next_u64());
  }
  RngStream c(42, 7), d(42, 7);
  for (int i = 0; i < 100; ++i) {
    CHECK(c.uniform() == d.uniform());
    CHECK(c.normal() == d.normal());
  }
}

TEST_CASE("distinct streams differ and don't collide") {
  RngStream a(42, 0), b(42, 1), c(43, 0);
  std::set<std::uint64_t> firsts;
  firsts.insert(a.next_u64());
  firsts.insert(b.next_u64());
  firsts.insert(c.next_u64());
  CHECK(firsts.size() == 3);
}

TEST_CASE("substreams are deterministic and distinct from parent") {
  RngStream parent(1, 2);
  RngStream s1 = parent.substream(5);
  RngStream s2 = RngStream(1, 2).substream(5);
  CHECK(s1.next_u64() == s2.next_u64());
  RngStream s3 = parent.substream(6);
  CHECK(s1.next_u64() != s3.next_u64());
}

TEST_CASE("uniform and normal have the right moments") {
  RngStream rng(7, 0);
  const int n = 200000;
  double su = 0, su2 = 0, sn = 0, sn2 = 0;
  for (int i = 0; i < n; ++i) {
    double u = rng.uniform();
    CHECK(u >= 0.0);
    CHECK(u < 1.0);
    su += u;
    su2 += u * u;
    double z = rng.normal();
    sn += z;
    sn2 += z * z;
  }
  // 3-sigma bands for the sample means/variances.
  double mu = su / n;
  CHECK(std::abs(mu - 0.5) < 3.0 * std::sqrt(1.0 / 12.0 / n));
  CHECK(std::abs(sn / n) < 3.0 / std::sqrt(static_cast<double>(n)));
  double var_n = sn2 / n - (sn / n) * (sn / n);
  CHECK(std::abs(var_n - 1.0) < 3.0 * std::sqrt(2.0 / n));
}

TEST_CASE("hash_combine is order sensitive") {
  CHECK(hash_combine(hash_combine(0, 1), 2) !=
        hash_combine(hash_combine(0, 2), 1));
}
