#include <doctest.h>

#include <numbers>
#include <random>

#include "collapseloc/spacetime.hpp"

using namespace collapseloc;
using Eigen::Vector3d;

namespace {

const PhysicalConstants k;
const double c = k.c;

SpacetimeEvent ev(double t, double x, double y = 0, double z = 0) { return {t, Vector3d(x, y, z)}; }

} // namespace

TEST_CASE("squared interval of pure time, pure space and light-like pairs") {
  CHECK(squared_interval(ev(0, 0), ev(1, 0)) == doctest::Approx(c * c).epsilon(1e-15));
  CHECK(squared_interval(ev(0, 0), ev(0, 1)) == doctest::Approx(-1.0));
  CHECK(squared_interval(ev(0, 0), ev(1, c)) == 0.0);
}

TEST_CASE("causal class examples") {
  auto tl = causal_class(ev(0, 0), ev(1, 0));
  CHECK(tl.separation == Separation::Timelike);
  CHECK(tl.ordering == Ordering::FirstEarlier);

  auto sl = causal_class(ev(0, 0), ev(0, 1));
  CHECK(sl.separation == Separation::Spacelike);
  CHECK(sl.ordering == Ordering::None);
  CHECK_FALSE(sl.causally_ordered());

  // dx = c dt exactly. The rounded 2.9979e5 m is 2.458 m short of the light
  // cone, well outside the 1e-12 relative band, and so lands on Timelike.
  auto ll = causal_class(ev(0, 0), ev(1e-3, c * 1e-3));
  CHECK(ll.separation == Separation::Lightlike);
  CHECK(ll.ordering == Ordering::FirstEarlier);
  CHECK(ll.causally_ordered());
  CHECK(causal_class(ev(0, 0), ev(1e-3, 2.9979e5)).separation == Separation::Timelike);
}

TEST_CASE("lightlike band is relative") {
  const double dt = 0.04;
  const double x = c * dt;
  CHECK(causal_class(ev(0, 0), ev(dt, x * (1 + 1e-14))).separation == Separation::Lightlike);
  CHECK(causal_class(ev(0, 0), ev(dt, x * (1 + 1e-9))).separation == Separation::Spacelike);
  CHECK(causal_class(ev(0, 0), ev(dt, x * (1 - 1e-9))).separation == Separation::Timelike);
}

TEST_CASE("simultaneous coincident events are lightlike and simultaneous") {
  auto cc = causal_class(ev(3, 1, 2, 3), ev(3, 1, 2, 3));
  CHECK(cc.separation == Separation::Lightlike);
  CHECK(cc.ordering == Ordering::Simultaneous);
}

TEST_CASE("windows_spacelike examples") {
  auto far = windows_spacelike(make_window(Vector3d(0, 0, 0), 0.0, 1e-6),
                               make_window(Vector3d(1.8e7, 0, 0), 0.0, 1e-6));
  CHECK(far.spacelike);
  // D/c = 6.00416e-2 s; worst |dt| = 1e-6 s
  CHECK(far.margin == doctest::Approx(1.8e7 / c - 1e-6).epsilon(1e-14));
  CHECK(far.margin == doctest::Approx(0.0600406).epsilon(1e-6));

  auto same = windows_spacelike(make_window(Vector3d(5, 0, 0), 0.0, 1e-6),
                                make_window(Vector3d(5, 0, 0), 0.0, 1e-6));
  CHECK_FALSE(same.spacelike);
  CHECK(same.margin == doctest::Approx(-1e-6));

  auto boundary = windows_spacelike(make_window(Vector3d(0, 0, 0), 0.0, 0.0),
                                    make_window(Vector3d(c, 0, 0), 1.0, 1.0));
  CHECK_FALSE(boundary.spacelike);
}

TEST_CASE("co-located instants are never spacelike") {
  auto w = make_window(Vector3d(1, 1, 1), 2.0, 2.0);
  auto r = windows_spacelike(w, w);
  CHECK_FALSE(r.spacelike);
  CHECK(r.margin == 0.0);
}

TEST_CASE("make_window rejects reversed intervals") {
  CHECK_THROWS_AS(make_window(Vector3d(0, 0, 0), 1.0, 0.0), std::invalid_argument);
}

TEST_CASE("geo_to_event examples") {
  const double R = 6.2e6;
  auto e = geo_to_event({0, 0, 0}, 0.0, k);
  CHECK(e.t == 0.0);
  CHECK(e.pos.x() == doctest::Approx(R));
  CHECK(std::abs(e.pos.y()) < 1e-9);
  CHECK(std::abs(e.pos.z()) < 1e-9);

  auto a = geo_to_event({0, std::numbers::pi, 0}, 0.0, k);
  CHECK(a.pos.x() == doctest::Approx(-R));
  CHECK(std::abs(a.pos.y()) < 1e-6);

  for (double lon : {0.0, 1.0, 4.0}) {
    auto p = geo_to_event({std::numbers::pi / 2, lon, 1e6}, 0.0, k);
    CHECK(std::abs(p.pos.x()) < 1e-6);
    CHECK(std::abs(p.pos.y()) < 1e-6);
    CHECK(p.pos.z() == doctest::Approx(R + 1e6));
  }
}

TEST_CASE("GeoPoint validation") {
  CHECK_NOTHROW(validate(GeoPoint{std::numbers::pi / 2, 0, 0}));
  CHECK_THROWS_AS(validate(GeoPoint{2.0, 0, 0}), std::invalid_argument);
  CHECK_THROWS_AS(validate(GeoPoint{0, 0, -1}), std::invalid_argument);
}

TEST_CASE("chord distance examples") {
  CHECK(chord_distance({0, 0, 0}, {0, std::numbers::pi, 0}, k) == doctest::Approx(1.24e7).epsilon(1e-14));
  CHECK(chord_distance({0.3, 1.1, 50}, {0.3, 1.1, 50}, k) == 0.0);
  const double expect = 2 * 6.2e6 * std::sin(std::numbers::pi / 4);
  CHECK(chord_distance({0, 0, 0}, {0, std::numbers::pi / 2, 0}, k) == doctest::Approx(expect).epsilon(1e-14));
  CHECK(expect == doctest::Approx(8.768e6).epsilon(1e-4));
}

TEST_CASE("light time examples") {
  CHECK(light_time(1.24e7, k) == doctest::Approx(4.1362e-2).epsilon(1e-4));
  CHECK(light_time(0.0, k) == 0.0);
  CHECK(light_time(60e-6 * c, k) == doctest::Approx(60e-6).epsilon(1e-15));
  CHECK(60e-6 * c == doctest::Approx(1.7988e4).epsilon(1e-4));
  CHECK_THROWS_AS(light_time(-1.0, k), std::invalid_argument);
}

TEST_CASE("templated scalar types agree with double") {
  Event<long double> a{0.0L, Vector3<long double>(0, 0, 0)};
  Event<long double> b{1e-3L, Vector3<long double>(1e5L, 0, 0)};
  CHECK(causal_class(a, b).separation == Separation::Timelike);
  Event<float> fa{0.0f, Vector3<float>(0, 0, 0)};
  Event<float> fb{0.0f, Vector3<float>(2, 0, 0)};
  CHECK(squared_interval(fa, fb) == doctest::Approx(-4.0f));
}

// ---- properties ---------------------------------------------------------

namespace {

struct Gen {
  std::mt19937_64 rng{20240611};
  double uni(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng); }
  SpacetimeEvent event(double tscale, double xscale) {
    return {uni(-tscale, tscale), Vector3d(uni(-xscale, xscale), uni(-xscale, xscale), uni(-xscale, xscale))};
  }
};

} // namespace

TEST_CASE("causal class symmetry under argument swap") {
  Gen g;
  for (int i = 0; i < 2000; ++i) {
    auto a = g.event(1e-3, 3e5);
    auto b = g.event(1e-3, 3e5);
    auto ab = causal_class(a, b);
    auto ba = causal_class(b, a);
    CHECK(ab.separation == ba.separation);
    if (ab.ordering == Ordering::FirstEarlier) CHECK(ba.ordering == Ordering::SecondEarlier);
    if (ab.ordering == Ordering::SecondEarlier) CHECK(ba.ordering == Ordering::FirstEarlier);
    if (ab.ordering == Ordering::None) CHECK(ba.ordering == Ordering::None);
    CHECK(squared_interval(a, b) == squared_interval(b, a));
    CHECK(squared_interval(a, a) == 0.0);
  }
}

TEST_CASE("instant windows reduce to causal_class") {
  Gen g;
  for (int i = 0; i < 2000; ++i) {
    auto a = g.event(1e-3, 3e5);
    auto b = g.event(1e-3, 3e5);
    auto r = windows_spacelike(make_window(a.pos, a.t, a.t), make_window(b.pos, b.t, b.t));
    CHECK(r.spacelike == (causal_class(a, b).separation == Separation::Spacelike));
  }
}

TEST_CASE("spacelike windows stay spacelike when shrunk") {
  Gen g;
  int checked = 0;
  for (int i = 0; i < 4000; ++i) {
    auto a = g.event(1e-3, 3e5);
    auto b = g.event(1e-3, 3e5);
    auto w1 = make_window(a.pos, a.t, a.t + g.uni(0, 1e-3));
    auto w2 = make_window(b.pos, b.t, b.t + g.uni(0, 1e-3));
    if (!windows_spacelike(w1, w2).spacelike) continue;
    ++checked;
    for (int j = 0; j < 5; ++j) {
      double s1 = g.uni(w1.t_start, w1.t_end), e1 = g.uni(s1, w1.t_end);
      double s2 = g.uni(w2.t_start, w2.t_end), e2 = g.uni(s2, w2.t_end);
      CHECK(windows_spacelike(make_window(w1.pos, s1, e1), make_window(w2.pos, s2, e2)).spacelike);
    }
  }
  CHECK(checked > 100);
}

TEST_CASE("chord bounded by diameter plus altitudes, equality at antipodes") {
  Gen g;
  for (int i = 0; i < 2000; ++i) {
    GeoPoint p{g.uni(-1.5, 1.5), g.uni(-3.1, 3.1), g.uni(0, 3e7)};
    GeoPoint q{g.uni(-1.5, 1.5), g.uni(-3.1, 3.1), g.uni(0, 3e7)};
    CHECK(chord_distance(p, q, k) <= k.earth_diameter + p.altitude + q.altitude + 1e-6);
  }
  for (int i = 0; i < 50; ++i) {
    const double lat = g.uni(-1.5, 1.5), lon = g.uni(-3.0, 0.0);
    GeoPoint p{lat, lon, 0}, q{-lat, lon + std::numbers::pi, 0};
    CHECK(chord_distance(p, q, k) == doctest::Approx(k.earth_diameter).epsilon(1e-13));
  }
}

TEST_CASE("brute-force sampled instants agree with windows_spacelike") {
  Gen g;
  int agree_spacelike = 0, agree_open = 0;
  for (int trial = 0; trial < 300; ++trial) {
    auto a = g.event(1e-4, 3e4);
    auto b = g.event(1e-4, 3e4);
    auto w1 = make_window(a.pos, a.t, a.t + g.uni(0, 1e-4));
    auto w2 = make_window(b.pos, b.t, b.t + g.uni(0, 1e-4));
    const bool verdict = windows_spacelike(w1, w2).spacelike;

    // Endpoints first (where the worst pair lives), then 10^3 random instants.
    bool all_spacelike = true;
    auto probe = [&](double t1, double t2) {
      if (causal_class(SpacetimeEvent{t1, w1.pos}, SpacetimeEvent{t2, w2.pos}).separation != Separation::Spacelike)
        all_spacelike = false;
    };
    for (double t1 : {w1.t_start, w1.t_end})
      for (double t2 : {w2.t_start, w2.t_end}) probe(t1, t2);
    for (int s = 0; s < 1000; ++s) probe(g.uni(w1.t_start, w1.t_end), g.uni(w2.t_start, w2.t_end));

    CHECK(verdict == all_spacelike);
    (verdict ? agree_spacelike : agree_open) += 1;
  }
  CHECK(agree_spacelike > 20);
  CHECK(agree_open > 20);
}
