//------------------------------------------------------------------------------
//
//   Copyright 2026 The Monadring Authors
//
//   Licensed under the Apache License, Version 2.0 (the "License");
//   you may not use this file except in compliance with the License.
//   You may obtain a copy of the License at
//
//       http://www.apache.org/licenses/LICENSE-2.0
//
//   Unless required by applicable law or agreed to in writing, software
//   distributed under the License is distributed on an "AS IS" BASIS,
//   WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
//   See the License for the specific language governing permissions and
//   limitations under the License.
//
//------------------------------------------------------------------------------


#include "monadring/digest.hpp"
#include "monadring/rng.hpp"
#include "monadring/wire.hpp"

#include "doctest.h"

#include <set>

using namespace monadring;

TEST_CASE("sha256 matches the FIPS 180-2 vectors")
{
  CHECK(to_hex(sha256(std::string_view{"abc"})) ==
        "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
  CHECK(to_hex(sha256(std::string_view{""})) ==
        "e3b0c44298fc1c149afbf4c8996fb92427ae41e4649b934ca495991b7852b855");
}

TEST_CASE("hmac-sha256 matches RFC 4231 case 2")
{
  auto const key  = to_bytes("Jefe");
  auto const data = to_bytes("what do ya want for nothing?");
  CHECK(to_hex(hmac_sha256(key, data)) ==
        "5bdcc146bf60754e6a042426089575c75a003f089d2739839dec58b964ec3843");
}

TEST_CASE("hex roundtrip and rejection")
{
  Bytes const raw{0x00, 0x7f, 0xff, 0x10};
  CHECK(to_hex(raw) == "007fff10");
  CHECK(from_hex("007fff10") == raw);
  CHECK_THROWS_AS(from_hex("abc"), DecodeError);
  CHECK_THROWS_AS(from_hex("zz"), DecodeError);
}

TEST_CASE("digest builder is length delimited")
{
  auto const a = DigestBuilder{}.add(std::string_view{"ab"}).add(std::string_view{"c"}).finish();
  auto const b = DigestBuilder{}.add(std::string_view{"a"}).add(std::string_view{"bc"}).finish();
  CHECK(a != b);
  CHECK(short_hex(a).size() == 16);
}

TEST_CASE("rng streams are reproducible and separated")
{
  Rng a{42};
  Rng b{42};
  for (int i = 0; i < 100; ++i)
  {
    CHECK(a.next_u64() == b.next_u64());
  }
  auto x = Rng::derive(7, "fhe", 0);
  auto y = Rng::derive(7, "fhe", 1);
  auto z = Rng::derive(7, "ring", 0);
  auto const vx = x.next_u64();
  CHECK(vx != y.next_u64());
  CHECK(vx != z.next_u64());
  CHECK(Rng::derive(7, "fhe", 0).next_u64() == vx);
}

TEST_CASE("rng bounded draws stay in range and cover it")
{
  Rng                     r{1};
  std::set<std::uint64_t> seen;
  for (int i = 0; i < 2000; ++i)
  {
    auto const v = r.below(7);
    REQUIRE(v < 7);
    seen.insert(v);
    auto const w = r.between(-3, 3);
    REQUIRE(w >= -3);
    REQUIRE(w <= 3);
    auto const u = r.unit();
    REQUIRE(u >= 0.0);
    REQUIRE(u < 1.0);
  }
  CHECK(seen.size() == 7);
}

TEST_CASE("wire frames roundtrip")
{
  wire::ByteWriter w;
  w.u8(9);
  w.u32(0xdeadbeef);
  w.i64(-5);
  w.f64(0.25);
  w.str("hello");
  auto const framed = wire::frame(wire::RecordKind::GroupBroadcast, w.data());
  CHECK(framed[0] == 'M');
  CHECK(framed[3] == '1');

  auto const f = wire::unframe(framed);
  CHECK(f.kind == wire::RecordKind::GroupBroadcast);
  wire::ByteReader r{f.body};
  CHECK(r.u8() == 9);
  CHECK(r.u32() == 0xdeadbeef);
  CHECK(r.i64() == -5);
  CHECK(r.f64() == 0.25);
  CHECK(r.str() == "hello");
  CHECK(r.done());
  CHECK_THROWS_AS(r.u8(), DecodeError);
}

TEST_CASE("wire framing rejects damage")
{
  Bytes const body{1, 2, 3};
  auto        framed = wire::frame(wire::RecordKind::Ciphertext, body);

  auto truncated = framed;
  truncated.pop_back();
  CHECK_THROWS_AS(wire::unframe(truncated), DecodeError);

  auto trailing = framed;
  trailing.push_back(0);
  CHECK_THROWS_AS(wire::unframe(trailing), DecodeError);

  auto bad_magic = framed;
  bad_magic[0]   = 'X';
  CHECK_THROWS_AS(wire::unframe(bad_magic), DecodeError);

  auto bad_kind = framed;
  bad_kind[4]   = 99;
  CHECK_THROWS_AS(wire::unframe(bad_kind), DecodeError);
}
