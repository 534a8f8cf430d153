#include "stpca/bounds.hpp"

#include "stpca/rng.hpp"

#include <doctest.h>

#include <cmath>
#include <limits>
#include <vector>

using stpca::ConfigError;
using stpca::CounterRng;
using stpca::RngRole;
namespace bounds = stpca::bounds;
using bounds::BoundKind;
using bounds::SequenceBoundSpec;

namespace {

SequenceBoundSpec make_spec(int p, double a1, double a2, double b1,
                            double b2) {
  SequenceBoundSpec spec;
  spec.p = p;
  spec.a1 = a1;
  spec.a2 = a2;
  spec.b1 = b1;
  spec.b2 = b2;
  return spec;
}

double increment(BoundKind kind, int p, double u) {
  switch (kind) {
    case BoundKind::Gronwall:
      return u;
    case BoundKind::Bihari:
      return std::pow(u, p - 1);
    case BoundKind::Logistic:
      return u * (1.0 - u);
  }
  return 0.0;
}

// Extremal sequence of the defining recursion with pinned coefficients
// (a, b): u_t = a + b sum_{s<t} f(u_s).
std::vector<double> extremal_sequence(const SequenceBoundSpec& spec,
                                      BoundKind kind, long horizon,
                                      double cap = 1e50) {
  std::vector<double> u;
  double sum = 0.0;
  for (long t = 0; t < horizon; ++t) {
    const double ut = spec.a1 + spec.b1 * sum;
    if (ut > cap) break;
    u.push_back(ut);
    sum += increment(kind, spec.p, ut);
  }
  return u;
}

}  // namespace

TEST_CASE("validation rejects degenerate coefficient boxes") {
  CHECK_THROWS_AS(make_spec(1, 0.1, 0.2, 0.1, 0.2).validate(), ConfigError);
  CHECK_THROWS_AS(make_spec(2, 0.0, 0.2, 0.1, 0.2).validate(), ConfigError);
  CHECK_THROWS_AS(make_spec(2, 0.1, 0.2, 0.0, 0.2).validate(), ConfigError);
  CHECK_THROWS_AS(make_spec(2, 0.3, 0.2, 0.1, 0.2).validate(), ConfigError);
  CHECK_THROWS_AS(make_spec(2, 0.1, 0.2, 0.3, 0.2).validate(), ConfigError);
  CHECK_NOTHROW(make_spec(2, 0.1, 0.2, 0.1, 0.2).validate());
}

TEST_CASE("gronwall envelope compounds geometrically") {
  const auto env = bounds::gronwall_envelope(make_spec(2, 1, 1, 1, 1), 3.0);
  CHECK(env.lower == doctest::Approx(8.0).epsilon(1e-12));
  CHECK(env.upper == doctest::Approx(8.0).epsilon(1e-12));

  const auto mixed =
      bounds::gronwall_envelope(make_spec(2, 0.5, 1.0, 0.1, 0.3), 10.0);
  CHECK(mixed.lower == doctest::Approx(0.5 * std::pow(1.1, 10)).epsilon(1e-12));
  CHECK(mixed.upper == doctest::Approx(1.0 * std::pow(1.3, 10)).epsilon(1e-12));

  CHECK_THROWS_AS(bounds::gronwall_envelope(make_spec(3, 1, 1, 1, 1), 1.0),
                  ConfigError);
}

TEST_CASE("gronwall recursion with pinned coefficients sits exactly on the envelope") {
  const auto spec = make_spec(2, 0.3, 0.3, 0.7, 0.7);
  const auto u = extremal_sequence(spec, BoundKind::Gronwall, 21);
  REQUIRE(u.size() == 21);
  for (long t = 0; t <= 20; ++t) {
    const auto env = bounds::gronwall_envelope(spec, static_cast<double>(t));
    const double ut = u[static_cast<std::size_t>(t)];
    CHECK(std::abs(ut - env.lower) <= 1e-12 * (1.0 + std::abs(ut)));
    CHECK(std::abs(ut - env.upper) <= 1e-12 * (1.0 + std::abs(ut)));
  }
  CHECK(bounds::verify_sandwich(u, spec, BoundKind::Gronwall).ok);
}

TEST_CASE("bihari envelope blows up at 1/((p-2) b a^{p-2})") {
  CHECK(bounds::bihari_blowup_time(1.0, 1.0, 3) == doctest::Approx(1.0));
  CHECK(bounds::bihari_blowup_time(0.7, 1.3, 4) ==
        doctest::Approx(1.0 / (2 * 1.3 * 0.49)).epsilon(1e-13));
  CHECK_THROWS_AS(bounds::bihari_blowup_time(1.0, 1.0, 2), ConfigError);
  CHECK_THROWS_AS(bounds::bihari_blowup_time(0.0, 1.0, 3), ConfigError);

  const auto spec = make_spec(3, 1, 1, 1, 1);
  const auto env = bounds::bihari_lasalle_envelope(spec, 0.5);
  CHECK(env.upper == doctest::Approx(2.0).epsilon(1e-13));
  CHECK_THROWS_AS(bounds::bihari_lasalle_envelope(spec, 1.0),
                  bounds::BlowupError);
  try {
    bounds::bihari_lasalle_envelope(spec, 1.0);
  } catch (const bounds::BlowupError& e) {
    CHECK(e.t_star() == doctest::Approx(1.0));
  }
  CHECK_THROWS_AS(bounds::bihari_lasalle_envelope(make_spec(2, 1, 1, 1, 1),
                                                  0.5),
                  ConfigError);
}

TEST_CASE("refined bihari lower bound stays below the first recursion step") {
  // With a = 0.1, b = 1, p = 3 the first recursion value is
  // u_1 = a + b a^2 = 0.11, but the unrefined continuous lower bound already
  // reads 0.1111..., overshooting the genuine sequence.
  const auto spec = make_spec(3, 0.1, 0.1, 1.0, 1.0);
  const double u1 = 0.1 + 1.0 * 0.01;
  const auto plain = bounds::bihari_lasalle_envelope(spec, 1.0);
  CHECK(plain.lower == doctest::Approx(1.0 / 9.0).epsilon(1e-13));
  CHECK(plain.lower > u1);

  const auto refined = bounds::bihari_lasalle_envelope(spec, 1.0, 0.1);
  // Rate correction b / (1 + b u_prev)^2 = 1 / 1.21.
  CHECK(refined.lower ==
        doctest::Approx(0.1 / (1.0 - 0.1 / 1.21)).epsilon(1e-13));
  CHECK(refined.lower <= u1);
  // The refinement only touches the lower side.
  CHECK(refined.upper == plain.upper);

  // And verify_sandwich, which applies the refinement, accepts the genuine
  // extremal sequence the plain bound would reject.
  const auto u = extremal_sequence(spec, BoundKind::Bihari, 8);
  CHECK(bounds::verify_sandwich(u, spec, BoundKind::Bihari).ok);
}

TEST_CASE("logistic envelope matches its sigmoid closed form") {
  const auto spec = make_spec(2, 0.01, 0.02, 0.2, 0.3);
  const auto env0 = bounds::logistic_envelope(spec, 0.0);
  CHECK(env0.lower == doctest::Approx(0.01).epsilon(1e-12));
  CHECK(env0.upper == doctest::Approx(0.02).epsilon(1e-12));

  const auto env = bounds::logistic_envelope(spec, 10.0);
  const double expected_lower =
      1.0 / (1.0 + std::exp(-(std::log(0.01 / 0.99) + (0.2 / 1.2) * 10.0)));
  const double expected_upper =
      1.0 / (1.0 + std::exp(-(std::log(0.02 / 0.98) + 0.3 * 10.0)));
  CHECK(env.lower == doctest::Approx(expected_lower).epsilon(1e-12));
  CHECK(env.upper == doctest::Approx(expected_upper).epsilon(1e-12));

  CHECK_THROWS_AS(bounds::logistic_envelope(make_spec(2, 0.5, 1.0, 0.1, 0.1),
                                            1.0),
                  ConfigError);
}

TEST_CASE("logistic checks stop at the first crossing of one half") {
  // With a modest rate the recursion crosses 1/2 and keeps growing past the
  // range where the envelopes apply; the recursion itself must still hold.
  const auto spec = make_spec(2, 0.05, 0.05, 0.3, 0.3);
  const auto u = extremal_sequence(spec, BoundKind::Logistic, 60);
  REQUIRE(u.size() == 60);
  bool crossed = false;
  for (double v : u) crossed = crossed || v >= 0.5;
  CHECK(crossed);
  CHECK(bounds::verify_sandwich(u, spec, BoundKind::Logistic).ok);
}

TEST_CASE("in-class random sequences pass every kind of sandwich check") {
  CounterRng rng(1234, 0, RngRole::Generic);
  for (BoundKind kind :
       {BoundKind::Gronwall, BoundKind::Bihari, BoundKind::Logistic}) {
    for (int rep = 0; rep < 10; ++rep) {
      SequenceBoundSpec spec;
      spec.p = kind == BoundKind::Gronwall ? 2 : (rep % 2 == 0 ? 3 : 4);
      if (kind == BoundKind::Logistic) spec.p = 2;
      spec.a1 = 1e-3 + 0.1 * rng.uniform01();
      spec.a2 = spec.a1 * (1.0 + rng.uniform01());
      spec.b1 = 1e-3 + 0.2 * rng.uniform01();
      spec.b2 = spec.b1 * (1.0 + rng.uniform01());
      if (kind == BoundKind::Logistic) spec.a2 = std::min(spec.a2, 0.45);

      std::vector<double> u;
      double sum = 0.0;
      for (long t = 0; t < 200; ++t) {
        const double lo = spec.a1 + spec.b1 * sum;
        const double hi = spec.a2 + spec.b2 * sum;
        const double ut = lo + (hi - lo) * rng.uniform01();
        if (kind == BoundKind::Logistic && ut > 0.95) break;
        if (ut > 1e90) break;
        u.push_back(ut);
        sum += increment(kind, spec.p, ut);
      }
      const auto report = bounds::verify_sandwich(u, spec, kind);
      CHECK(report.ok);
      if (!report.ok)
        MESSAGE("kind ", static_cast<int>(kind), " rep ", rep, ": ",
                report.what);
    }
  }
}

TEST_CASE("sandwich violations report the first failing index") {
  const auto spec = make_spec(2, 0.3, 0.4, 0.5, 0.6);
  auto u = extremal_sequence(spec, BoundKind::Gronwall, 12);

  auto bumped = u;
  bumped[5] *= 3.0;
  const auto high = bounds::verify_sandwich(bumped, spec, BoundKind::Gronwall);
  CHECK(!high.ok);
  CHECK(high.first_violation == 5);
  CHECK(!high.what.empty());

  auto sunk = u;
  sunk[3] = 1e-6;
  const auto low = bounds::verify_sandwich(sunk, spec, BoundKind::Gronwall);
  CHECK(!low.ok);
  CHECK(low.first_violation == 3);

  auto poisoned = u;
  poisoned[2] = std::numeric_limits<double>::infinity();
  const auto inf = bounds::verify_sandwich(poisoned, spec, BoundKind::Gronwall);
  CHECK(!inf.ok);
  CHECK(inf.first_violation == 2);
  CHECK(inf.what.find("non-finite") != std::string::npos);

  CHECK_THROWS_AS(
      bounds::verify_sandwich(u, make_spec(3, 0.1, 0.1, 0.1, 0.1),
                              BoundKind::Gronwall),
      ConfigError);
  CHECK_THROWS_AS(
      bounds::verify_sandwich(u, make_spec(2, 0.1, 0.1, 0.1, 0.1),
                              BoundKind::Bihari),
      ConfigError);
}
