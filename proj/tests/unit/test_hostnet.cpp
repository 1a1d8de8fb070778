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


#include "monadring/hostnet.hpp"

#include "doctest.h"

using namespace monadring;
using namespace monadring::hostnet;

namespace {

Hostnet launched(std::size_t registrations, std::size_t threshold = 4)
{
  Hostnet h;
  REQUIRE(h.submit(RegisterSubnet{1, threshold}).accepted);
  REQUIRE(h.submit(RegisterFunction{1, ring::function_binary(1)}).accepted);
  for (NodeId id = 1; id <= registrations; ++id)
  {
    REQUIRE(h.submit(RegisterKey{id, to_bytes("k" + std::to_string(id))}).accepted);
    REQUIRE(h.submit(Join{1, id}).accepted);
  }
  return h;
}

}  // namespace

TEST_CASE("subnet launches at its registration threshold")
{
  Hostnet h;
  CHECK_FALSE(h.submit(RegisterSubnet{1, 2}).accepted);
  REQUIRE(h.submit(RegisterSubnet{1, 3}).accepted);
  CHECK_FALSE(h.submit(RegisterSubnet{1, 3}).accepted);
  CHECK(h.submit(Join{1, 10}).accepted);
  CHECK(h.submit(Join{1, 11}).accepted);
  CHECK_FALSE(h.submit(Join{1, 11}).accepted);
  CHECK(h.subnet(1)->status == SubnetStatus::Pending);
  CHECK(h.subnet(1)->members.empty());
  CHECK(h.submit(Join{1, 12}).accepted);
  CHECK(h.subnet(1)->status == SubnetStatus::Active);
  CHECK(h.subnet(1)->members == std::vector<NodeId>{10, 11, 12});
  CHECK(h.submit(Join{1, 13}).accepted);
  CHECK(h.subnet(1)->pool == std::vector<NodeId>{13});
  CHECK_FALSE(h.submit(Join{2, 1}).accepted);
  CHECK(h.subnet(2) == nullptr);
}

TEST_CASE("function versions and keys")
{
  auto h = launched(4);
  REQUIRE(h.latest_function(1));
  CHECK(h.latest_function(1)->version == 1);
  CHECK_FALSE(h.submit(RegisterFunction{1, ring::function_binary(1)}).accepted);
  CHECK_FALSE(h.submit(RegisterFunction{1, to_bytes("junk")}).accepted);
  CHECK(h.submit(RegisterFunction{1, ring::function_binary(2)}).accepted);
  auto const rec = *h.latest_function(1);
  CHECK(rec.version == 2);
  CHECK(rec.digest == sha256(ring::function_binary(2)));
  CHECK_FALSE(h.latest_function(9));

  CHECK(h.node_key(3) == to_bytes("k3"));
  CHECK_FALSE(h.node_key(99));
  CHECK_FALSE(h.submit(RegisterKey{3, to_bytes("other")}).accepted);
  CHECK_FALSE(h.submit(RegisterKey{98, {}}).accepted);
  CHECK(h.mid_round_joiners(1) == 0);
}

TEST_CASE("rotation keeps positions and cycles the pool")
{
  auto h = launched(7);
  CHECK(h.subnet(1)->members == std::vector<NodeId>{1, 2, 3, 4});
  CHECK(h.subnet(1)->pool == std::vector<NodeId>{5, 6, 7});

  CHECK_FALSE(h.submit(Rotate{1, 0, {1, 2, 3, 4}}).accepted);        // epoch must increase
  CHECK_FALSE(h.submit(Rotate{1, 1, {1, 2, 3}}).accepted);           // size
  CHECK_FALSE(h.submit(Rotate{1, 1, {1, 2, 3, 9}}).accepted);        // not pooled
  CHECK_FALSE(h.submit(Rotate{1, 1, {5, 5, 3, 4}}).accepted);        // twice
  REQUIRE(h.submit(Rotate{1, 1, {1, 6, 3, 5}}).accepted);
  auto const *s = h.subnet(1);
  CHECK(s->members == std::vector<NodeId>{1, 6, 3, 5});
  CHECK(s->epoch == 1);
  CHECK(std::is_permutation(s->pool.begin(), s->pool.end(), std::vector<NodeId>{7, 2, 4}.begin()));
}

TEST_CASE("anchors advance strictly")
{
  auto       h = launched(4);
  auto const d = sha256(std::string_view{"state"});
  CHECK(h.submit(Anchor{1, 10, d}).accepted);
  CHECK_FALSE(h.submit(Anchor{1, 10, d}).accepted);
  CHECK_FALSE(h.submit(Anchor{1, 9, d}).accepted);
  CHECK(h.submit(Anchor{1, 11, d}).accepted);
  CHECK(h.subnet(1)->anchored_max == 11u);
  CHECK(h.subnet(1)->anchored_digest == d);

  Hostnet pending;
  pending.submit(RegisterSubnet{5, 3});
  CHECK_FALSE(pending.submit(Anchor{5, 1, d}).accepted);
}

TEST_CASE("slashing removes a node for good")
{
  auto       h  = launched(6);
  auto const ev = sha256(std::string_view{"evidence"});
  CHECK_FALSE(h.submit(Slash{1, 42, ev}).accepted);
  REQUIRE(h.submit(Slash{1, 5, ev}).accepted);
  CHECK_FALSE(h.submit(Slash{1, 5, ev}).accepted);
  CHECK(h.subnet(1)->slashed == std::vector<NodeId>{5});
  CHECK(h.subnet(1)->pool == std::vector<NodeId>{6});

  // a slashed member is not returned to the pool on rotation
  REQUIRE(h.submit(Slash{1, 2, ev}).accepted);
  REQUIRE(h.submit(Rotate{1, 1, {1, 6, 3, 4}}).accepted);
  CHECK(h.subnet(1)->pool.empty());
}

TEST_CASE("rejected transactions leave the log and head untouched")
{
  auto       h    = launched(4);
  auto const head = h.head();
  auto const size = h.log().size();
  auto const r    = h.submit(Join{1, 2});
  CHECK_FALSE(r.accepted);
  CHECK_FALSE(r.reason.empty());
  CHECK(h.head() == head);
  CHECK(h.log().size() == size);
}

TEST_CASE("replay rebuilds the same state")
{
  auto h = launched(7);
  h.submit(RegisterFunction{1, ring::function_binary(2)});
  h.submit(Rotate{1, 1, {5, 2, 3, 4}});
  h.submit(Anchor{1, 3, sha256(std::string_view{"a"})});
  h.submit(Slash{1, 6, sha256(std::string_view{"e"})});

  auto const again = Hostnet::replay(h.log());
  CHECK(again.head() == h.head());
  CHECK(again.report() == h.report());
  CHECK(again.log().size() == h.log().size());

  // the head is a hash chain over the canonical text of each transaction
  Digest chain = sha256(std::string_view{"monadring/hostnet/genesis"});
  for (auto const &tx : h.log())
  {
    chain = DigestBuilder{}.add(chain).add(to_text(tx)).finish();
  }
  CHECK(chain == h.head());

  std::vector<Transaction> bad = h.log();
  bad.push_back(Join{1, 2});
  CHECK_THROWS_AS(Hostnet::replay(bad), InvalidArgument);
}

TEST_CASE("transaction text is canonical")
{
  CHECK(to_text(Join{3, 7}) == to_text(Join{3, 7}));
  CHECK(to_text(Join{3, 7}) != to_text(Join{3, 8}));
  CHECK(to_text(Rotate{1, 2, {4, 5}}) != to_text(Rotate{1, 2, {5, 4}}));
  CHECK(std::string{to_string(SubnetStatus::Active)} != to_string(SubnetStatus::Pending));
}
