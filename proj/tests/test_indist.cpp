#include <doctest.h>

#include "flowtest/generators.hpp"
#include "flowtest/indist.hpp"

using namespace flowtest;

namespace {

const Lattice kLat = Lattice::two_point();
const Lattice kDia = Lattice::diamond();
const Label L = kLat.parse("L");
const Label H = kLat.parse("H");

Relation rel(RelKind k, Label obs = Label{0}) { return Relation{k, obs}; }

SState mks(const std::string& prog, std::vector<Atom> mem, std::vector<StackEntry> stack = {},
           Atom pc = {0, Label{0}}) {
  SState s;
  s.imem = std::make_shared<const SProgram>(parse_program(prog, kLat));
  s.mem = std::move(mem);
  s.stack = std::move(stack);
  s.pc = pc;
  return s;
}

}  // namespace

TEST_CASE("value indistinguishability") {
  CHECK(indist_atom(rel(RelKind::MEM), kLat, {0, H}, {1, H}));
  CHECK(indist_atom(rel(RelKind::MEM), kLat, {1, L}, {1, L}));
  CHECK_FALSE(indist_atom(rel(RelKind::MEM), kLat, {0, L}, {0, H}));  // labels observable
  CHECK_FALSE(indist_atom(rel(RelKind::MEM), kLat, {0, L}, {1, L}));
}

TEST_CASE("register value indistinguishability is syntactic under the label") {
  Relation r{RelKind::FULL_WS, kDia.bottom()};
  RAtom p1{RValue::pointer({kDia.parse("M1"), 0}, 2), kDia.bottom()};
  RAtom p2{RValue::pointer({kDia.parse("M1"), 0}, 2), kDia.bottom()};
  CHECK(indist_ratom(r, kDia, p1, p2));
  p2.v.n = 3;  // offsets are part of the payload
  CHECK_FALSE(indist_ratom(r, kDia, p1, p2));
  p2.label = kDia.parse("M2");
  CHECK_FALSE(indist_ratom(r, kDia, p1, p2));  // labels always compared
  p1.label = kDia.parse("M2");
  CHECK(indist_ratom(r, kDia, p1, p2));  // both hidden at bottom
}

TEST_CASE("ints-in-regs: equal integers or no integers at all") {
  Relation r{RelKind::INTS_IN_REGS, kDia.bottom()};
  Label bot = kDia.bottom();
  CHECK(indist_ratom(r, kDia, {RValue::integer(3), bot}, {RValue::integer(3), bot}));
  CHECK_FALSE(indist_ratom(r, kDia, {RValue::integer(3), bot}, {RValue::integer(4), bot}));
  CHECK_FALSE(indist_ratom(r, kDia, {RValue::integer(3), bot}, {RValue::label(bot), bot}));
  CHECK(indist_ratom(r, kDia, {RValue::label(bot), bot},
                     {RValue::label(kDia.parse("H")), bot}));
}

TEST_CASE("crop_stack") {
  CHECK(crop_stack(kLat, L, {}).empty());
  std::vector<StackEntry> s = {StackEntry::data({1, H}), StackEntry::ret(3, false, L),
                               StackEntry::data({2, L})};
  auto cropped = crop_stack(kLat, L, s);
  REQUIRE(cropped.size() == 2);
  CHECK(cropped[0].is_ret());
  CHECK(cropped[0].atom.value == 3);
  // no visible return address: everything goes
  CHECK(crop_stack(kLat, L, {StackEntry::data({1, L})}).empty());
  CHECK(crop_stack(kLat, L, {StackEntry::ret(1, false, H)}).empty());
}

TEST_CASE("high states compare under FULL via cropped stacks") {
  SState a = mks("Halt\nHalt", {{1, L}},
                 {StackEntry::data({7, H}), StackEntry::ret(1, true, L), StackEntry::data({2, L})},
                 {0, H});
  SState b = a;
  b.pc.value = 9;  // different high pcs are fine
  b.stack[0] = StackEntry::data({8, H});
  b.imem = a.imem;
  CHECK(indist_state(rel(RelKind::FULL), kLat, a, b));
  // but a difference below the visible return address is not
  b.stack[2] = StackEntry::data({3, L});
  CHECK_FALSE(indist_state(rel(RelKind::FULL), kLat, a, b));
  // and a completely different top is
  b.stack = {StackEntry::ret(1, true, L), StackEntry::data({2, L})};
  CHECK(indist_state(rel(RelKind::FULL), kLat, a, b));
}

TEST_CASE("identical states are related under every relation") {
  SState s = mks("Push 1@L\nHalt", {{0, L}}, {StackEntry::data({1, H})});
  for (RelKind k : {RelKind::MEM, RelKind::LOW, RelKind::FULL}) {
    CHECK(indist_state(rel(k), kLat, s, s));
  }
  Rng rng(3);
  RegisterGen gen{&kDia, GenStrategy{GenKind::BY_EXEC}};
  RState r = gen_register_state(rng, gen, StartSet::ANY);
  for (RelKind k : {RelKind::FULL_WS, RelKind::INTS_IN_REGS}) {
    CHECK(indist_state(Relation{k, kDia.bottom()}, kDia, r, r));
  }
}

TEST_CASE("relations are symmetric on random pairs") {
  Rng rng(5);
  StackGen gen{&kLat, true, GenStrategy{GenKind::BY_EXEC}};
  for (RelKind k : {RelKind::MEM, RelKind::LOW, RelKind::FULL}) {
    StartSet start = k == RelKind::FULL ? StartSet::ANY : StartSet::QUASI_INIT;
    for (int i = 0; i < 100; ++i) {
      auto v = gen_pair(rng, gen, start, rel(k));
      CHECK(indist_state(rel(k), kLat, v.left, v.right));
      CHECK(indist_state(rel(k), kLat, v.right, v.left));
    }
  }
  RegisterGen rgen{&kDia, GenStrategy{GenKind::BY_EXEC}};
  Relation fws{RelKind::FULL_WS, kDia.bottom()};
  for (int i = 0; i < 60; ++i) {
    auto v = gen_pair(rng, rgen, StartSet::ANY, fws);
    CHECK(indist_state(fws, kDia, v.left, v.right));
    CHECK(indist_state(fws, kDia, v.right, v.left));
  }
}

TEST_CASE("FULL is transitive on the two-point lattice") {
  Rng rng(7);
  StackGen gen{&kLat, true, GenStrategy{GenKind::TINY_SSNI}};
  Relation full = rel(RelKind::FULL);
  int triples = 0;
  for (int i = 0; i < 300; ++i) {
    auto v = gen_pair(rng, gen, StartSet::TINY, full);
    IntDist ints{true, -20, 20, int(v.left.mem.size()), int(v.left.imem->size())};
    SState third = vary(rng, full, kLat, v.left, StartSet::TINY, ints);
    if (!indist_state(full, kLat, v.right, v.left)) continue;
    REQUIRE(indist_state(full, kLat, v.left, third));
    CHECK(indist_state(full, kLat, v.right, third));
    ++triples;
  }
  CHECK(triples > 100);
}

TEST_CASE("FULL_WS relates only states that agree on visibility of the pc") {
  Rng rng(9);
  RegisterGen gen{&kDia, GenStrategy{GenKind::BY_EXEC}};
  Relation fws{RelKind::FULL_WS, kDia.bottom()};
  for (int i = 0; i < 80; ++i) {
    auto v = gen_pair(rng, gen, StartSet::ANY, fws);
    bool low1 = kDia.flows_to(v.left.pc.label, fws.obs);
    bool low2 = kDia.flows_to(v.right.pc.label, fws.obs);
    CHECK(low1 == low2);
  }
}

TEST_CASE("vary leaves an all-low state alone") {
  Rng rng(11);
  SState s = mks("Push 1@L\nStore\nHalt", {{0, L}}, {StackEntry::data({5, L})});
  IntDist ints{false, -20, 20, 1, 3};
  for (int i = 0; i < 20; ++i) {
    SState varied = vary(rng, rel(RelKind::LOW), kLat, s, StartSet::QUASI_INIT, ints);
    CHECK(varied.pc == s.pc);
    CHECK(varied.stack == s.stack);
    CHECK(varied.mem == s.mem);
    CHECK(*varied.imem == *s.imem);
  }
}

TEST_CASE("vary rerandomizes high push immediates") {
  Rng rng(13);
  SState s = mks("Push 0@H\nHalt", {});
  IntDist ints{false, -20, 20, 0, 2};
  bool changed = false;
  for (int i = 0; i < 64 && !changed; ++i) {
    SState varied = vary(rng, rel(RelKind::MEM), kLat, s, StartSet::INIT, ints);
    REQUIRE(indist_state(rel(RelKind::MEM), kLat, s, varied));
    if ((*varied.imem)[0].imm.value != 0) changed = true;
    CHECK((*varied.imem)[0].imm.label == H);
  }
  CHECK(changed);
}

TEST_CASE("vary output always satisfies the relation") {
  Rng rng(17);
  StackGen gen{&kLat, true, GenStrategy{GenKind::BY_EXEC}};
  for (auto [k, start] : std::vector<std::pair<RelKind, StartSet>>{
           {RelKind::MEM, StartSet::INIT},
           {RelKind::LOW, StartSet::QUASI_INIT},
           {RelKind::FULL, StartSet::ANY}}) {
    for (int i = 0; i < 150; ++i) {
      SState s = gen_stack_state(rng, gen, start);
      IntDist ints{true, -20, 20, int(s.mem.size()), int(s.imem->size())};
      SState varied = vary(rng, rel(k), kLat, s, start, ints);
      CAPTURE(to_string(k));
      CHECK(indist_state(rel(k), kLat, s, varied));
    }
  }
  RegisterGen rgen{&kDia, GenStrategy{GenKind::BY_EXEC}};
  Relation fws{RelKind::FULL_WS, kDia.bottom()};
  for (int i = 0; i < 100; ++i) {
    RState s = gen_register_state(rng, rgen, StartSet::ANY);
    IntDist ints{true, -10, 10, 0, int(s.imem->size())};
    RState varied = vary(rng, fws, kDia, s, StartSet::ANY, ints);
    CHECK(indist_state(fws, kDia, s, varied));
    CHECK(well_stamped(kDia, varied));
  }
}

TEST_CASE("vary support covers every related state on a tiny space") {
  // one high atom in memory; every payload in a small domain must appear
  Rng rng(19);
  SState s = mks("Halt", {{0, H}});
  IntDist ints{false, 0, 3, 1, 1};
  std::set<int64_t> seen;
  for (int i = 0; i < 2000; ++i) {
    SState varied = vary(rng, rel(RelKind::LOW), kLat, s, StartSet::QUASI_INIT, ints);
    seen.insert(varied.mem[0].value);
  }
  for (int64_t want : {0, 1, 2, 3}) CHECK(seen.count(want));
}

TEST_CASE("wrong relations behave as documented") {
  Relation weak_all{RelKind::WRONG_HIGH_EQ_ALL, L};
  CHECK(indist_atom(weak_all, kLat, {0, L}, {9, H}));
  CHECK_FALSE(indist_atom(weak_all, kLat, {0, L}, {9, L}));

  Relation weak_payload{RelKind::WRONG_PAYLOAD_ONLY, L};
  CHECK(indist_atom(weak_payload, kLat, {3, L}, {3, H}));
  CHECK_FALSE(indist_atom(weak_payload, kLat, {3, L}, {4, H}));
  CHECK(indist_atom(weak_payload, kLat, {3, H}, {4, H}));

  Relation ret_eq_data{RelKind::WRONG_RET_EQ_DATA, L};
  CHECK(indist_entry(ret_eq_data, kLat, StackEntry::data({0, H}), StackEntry::ret(0, false, H)));
  CHECK_FALSE(
      indist_entry(ret_eq_data, kLat, StackEntry::data({0, L}), StackEntry::ret(0, false, H)));
  CHECK_FALSE(
      indist_entry(rel(RelKind::LOW), kLat, StackEntry::data({0, H}), StackEntry::ret(0, false, H)));
}
