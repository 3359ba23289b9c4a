#include <doctest.h>

#include <algorithm>
#include <set>

#include "stablab/acceptance.hpp"
#include "stablab/error.hpp"
#include "stablab/io.hpp"
#include "stablab/metric.hpp"
#include "stablab/oracle.hpp"
#include "stablab/tilting.hpp"

using namespace stablab;

namespace {

const std::string kModels = STABLAB_MODELS_DIR;

std::vector<IndecomposableRef> refs(const CategoryModel& m, std::vector<std::string> names) {
  std::vector<IndecomposableRef> out;
  for (const auto& n : names) out.push_back(m.parse_ref(n));
  std::sort(out.begin(), out.end());
  return out;
}

Heart heart_of(const CategoryModel& m, std::vector<std::string> names) { return make_heart(m, refs(m, names)); }

// Torsion classes of mod-A2 by the double-perpendicular test over F2.
std::set<std::vector<int>> torsion_classes_by_hom_dims(const CategoryModel& m) {
  const auto& q = *m.quiver;
  const int n = static_cast<int>(m.indecomposables.size());
  auto hom = [&](int a, int b) { return oracle::hom_dim(q, *m.indecomposables[a].rep, *m.indecomposables[b].rep); };
  std::set<std::vector<int>> out;
  for (int mask = 0; mask < (1 << n); ++mask) {
    std::vector<int> t, f, tt;
    for (int i = 0; i < n; ++i)
      if (mask >> i & 1) t.push_back(i);
    for (int y = 0; y < n; ++y)
      if (std::all_of(t.begin(), t.end(), [&](int x) { return hom(x, y) == 0; })) f.push_back(y);
    for (int x = 0; x < n; ++x)
      if (std::all_of(f.begin(), f.end(), [&](int y) { return hom(x, y) == 0; })) tt.push_back(x);
    if (tt == t) out.insert(t);
  }
  return out;
}

StabilityCondition fixture(const ModelPtr& m) { return io::load_stability(m, kModels + "/sigma_a2.json"); }

}  // namespace

TEST_CASE("torsion pairs of the standard A2 heart") {
  auto m = io::load_model(kModels + "/a2.json");
  Heart a = standard_heart(*m);
  auto pairs = enumerate_torsion_pairs(*m, a);
  CHECK(pairs.size() == 5);
  std::set<std::vector<int>> got;
  for (const auto& p : pairs) {
    std::vector<int> t;
    for (const auto& r : p.torsion) t.push_back(r.base);
    std::sort(t.begin(), t.end());
    got.insert(t);
    CHECK(check_torsion_pair(*m, a, p).ok());
    for (const auto& x : p.torsion)
      for (const auto& y : p.free) CHECK_FALSE(m->hom_nonzero(x, y));
  }
  CHECK(got == torsion_classes_by_hom_dims(*m));
  const int s1 = m->index_of("S1"), s2 = m->index_of("S2"), x = m->index_of("X");
  std::set<std::vector<int>> named = {{}, {s2}, {s1}, {std::min(s1, x), std::max(s1, x)}, {0, 1, 2}};
  CHECK(got == named);
}

TEST_CASE("A1 has only the trivial torsion pairs") {
  auto m = io::load_model(kModels + "/a1.json");
  CHECK(enumerate_torsion_pairs(*m, standard_heart(*m)).size() == 2);
}

TEST_CASE("non-torsion classes are rejected") {
  auto m = io::load_model(kModels + "/a2.json");
  Heart a = standard_heart(*m);
  CHECK_THROWS_AS(torsion_pair_of(*m, a, refs(*m, {"X"})), Error);
  CHECK_THROWS_AS(torsion_pair_of(*m, a, refs(*m, {"S2", "X"})), Error);
  TorsionPair bogus{refs(*m, {"X"}), refs(*m, {"S1", "S2"})};
  CHECK_FALSE(check_torsion_pair(*m, a, bogus).ok());
  CHECK_THROWS_AS(left_tilt(*m, a, bogus), Error);
}

TEST_CASE("left tilts of the standard heart") {
  auto m = io::load_model(kModels + "/a2.json");
  Heart a = standard_heart(*m);
  CHECK(left_tilt(*m, a, torsion_pair_of(*m, a, refs(*m, {"S1", "X"}))) ==
        heart_of(*m, {"S2", "S1[-1]", "X[-1]"}));
  CHECK(left_tilt(*m, a, torsion_pair_of(*m, a, {})) == a);
  CHECK(left_tilt(*m, a, torsion_pair_of(*m, a, a.members)) == a.shifted(-1));
}

TEST_CASE("right tilts of the standard heart") {
  auto m = io::load_model(kModels + "/a2.json");
  Heart a = standard_heart(*m);
  Heart h = right_tilt(*m, a, torsion_pair_of(*m, a, refs(*m, {"S2"})));
  CHECK(h == heart_of(*m, {"S1[1]", "S2"}));
  CHECK(h.simples == h.members);
  CHECK(right_tilt(*m, a, torsion_pair_of(*m, a, a.members)) == a);
  CHECK(right_tilt(*m, a, torsion_pair_of(*m, a, refs(*m, {"S1", "X"}))) ==
        heart_of(*m, {"S2[1]", "S1", "X"}));
}

TEST_CASE("tilting inverts") {
  auto m = io::load_model(kModels + "/a2.json");
  for (std::size_t i = 0; i < m->atlas.size(); ++i) {
    Heart e = m->atlas.hearts()[i];
    for (const auto& p : enumerate_torsion_pairs(*m, e)) {
      Heart l = left_tilt(*m, e, p);
      CHECK(right_tilt(*m, l, torsion_pair_of(*m, l, p.free)) == e);
      Heart r = right_tilt(*m, e, p);
      std::vector<IndecomposableRef> f1;
      for (const auto& x : p.free) f1.push_back(x.shifted(1));
      CHECK(left_tilt(*m, r, torsion_pair_of(*m, r, f1)) == e);
      CHECK(r == l.shifted(1));
    }
  }
}

TEST_CASE("torsion from an intermediate heart") {
  auto m = io::load_model(kModels + "/a2.json");
  Heart a = standard_heart(*m);
  for (const auto& p : enumerate_torsion_pairs(*m, a)) {
    Heart e = left_tilt(*m, a, p);
    CHECK(torsion_from_intermediate(*m, a, e) == p);
  }
  CHECK(torsion_from_intermediate(*m, a, a).torsion.empty());
  CHECK(torsion_from_intermediate(*m, a, a.shifted(-1)).torsion == a.members);
  try {
    torsion_from_intermediate(*m, a, a.shifted(1));
    FAIL("expected throw");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::Domain);
  }
}

TEST_CASE("tilt decomposition of nearby conditions") {
  auto m = io::load_model(kModels + "/a2.json");
  StabilityCondition s = fixture(m);
  TiltDecomposition same = tilt_decompose_pair(s, s);
  CHECK(same.left.torsion.empty());
  CHECK(same.result == s.heart());

  StabilityCondition t = c_act(s, 0.3);
  TiltDecomposition d = tilt_decompose_pair(s, t);
  CHECK(left_tilt(*m, s.heart(), d.left) == d.intermediate);
  CHECK(right_tilt(*m, d.intermediate, d.right) == t.heart());
  CHECK(d.result == t.heart());

  try {
    tilt_decompose_pair(s, c_act(s, 0.6));
    FAIL("expected throw");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::Precondition);
  }
}

TEST_CASE("random nearby pairs round-trip") {
  auto m = io::load_model(kModels + "/a2.json");
  Rng rng(21);
  std::uniform_real_distribution<double> u(-0.45, 0.45), v(-0.14, 0.14);
  int done = 0;
  for (int k = 0; k < 60; ++k) {
    StabilityCondition s = random_stability(m, rng);
    StabilityCondition t = c_act(s, {u(rng), v(rng)});
    if (!(distance(s, t).value() < 0.5)) continue;
    TiltDecomposition d = tilt_decompose_pair(s, t);
    CHECK(d.result == t.heart());
    ++done;
  }
  CHECK(done > 30);
}

TEST_CASE("heart atlas of the fixtures") {
  auto a2 = io::load_model(kModels + "/a2.json");
  CHECK(a2->atlas.size() == 4);
  CHECK(a2->atlas.hearts()[0] == standard_heart(*a2));
  for (std::size_t i = 0; i < a2->atlas.size(); ++i) {
    CHECK(a2->atlas.hearts()[i].min_shift() == 0);
    CHECK(check_heart(*a2, a2->atlas.hearts()[i]).ok());
    CHECK(heart_span(*a2, a2->atlas.hearts()[i]).value() <= a2->atlas_span);
  }
  CHECK(a2->atlas.depth()[0] == 0);

  // hearts between A and A[-1]: the pentagon
  Heart a = standard_heart(*a2);
  std::set<std::vector<IndecomposableRef>> window;
  for (const auto& p : enumerate_torsion_pairs(*a2, a)) {
    Heart e = left_tilt(*a2, a, p);
    CHECK(a2->atlas.resolve(e).has_value());
    window.insert(e.members);
  }
  CHECK(window.size() == 5);

  auto a1 = io::load_model(kModels + "/a1.json");
  CHECK(a1->atlas.size() == 1);
}

TEST_CASE("tilts leave the atlas only by growing the span") {
  auto m = io::load_model(kModels + "/a2.json");
  int outside = 0;
  for (const auto& e : m->atlas.hearts())
    for (const auto& p : enumerate_torsion_pairs(*m, e))
      for (const Heart& h : {left_tilt(*m, e, p), right_tilt(*m, e, p)}) {
        if (m->atlas.resolve(h)) continue;
        ++outside;
        CHECK(heart_span(*m, h).value() > m->atlas_span);
      }
  CHECK(outside > 0);
}

TEST_CASE("limiting torsion pair of the fixture sequence") {
  auto m = io::load_model(kModels + "/a2.json");
  StabilitySequence seq = a2_completeness_sequence(m, 200);
  TorsionPair tp = limiting_torsion_pair(seq);
  CHECK(tp.torsion == refs(*m, {"S1", "X"}));
  CHECK(tp.free == refs(*m, {"S2"}));
}
