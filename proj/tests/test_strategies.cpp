#include <doctest.h>

#include <cmath>
#include <numbers>
#include <string>
#include <vector>

#include "localitylab/errors.hpp"
#include "localitylab/qoracle.hpp"
#include "localitylab/strategies.hpp"
#include "oracles.hpp"

using namespace localitylab;

namespace {

constexpr double kPi = std::numbers::pi;

double bell_correlation(double theta, int trials, std::uint64_t seed) {
  const auto m = UnitVector3::in_plane(0.0);
  const auto n = UnitVector3::in_plane(theta);
  long long sum = 0;
  for (int i = 0; i < trials; ++i) {
    Rng rng = Rng::for_stream(RngSeed{seed}, static_cast<std::uint64_t>(i));
    const auto h = bell_prepare(rng);
    sum += bell_alice(m, h) * bell_bob(n, h);
  }
  return double(sum) / trials;
}

struct TonerBaconMoments {
  double ab = 0, a = 0, b = 0;
};

TonerBaconMoments toner_bacon_moments(const UnitVector3& m, const UnitVector3& n, int trials,
                                      std::uint64_t seed) {
  long long ab = 0, a = 0, b = 0;
  for (int i = 0; i < trials; ++i) {
    Rng rng = Rng::for_stream(RngSeed{seed}, static_cast<std::uint64_t>(i));
    const auto r = toner_bacon_run(m, n, toner_bacon_prepare(rng));
    ab += r.a * r.b;
    a += r.a;
    b += r.b;
  }
  return {double(ab) / trials, double(a) / trials, double(b) / trials};
}

/// Exact distribution of an outcome rule over the eight hidden bit triples.
template <typename Rule>
JointDistribution enumerate_rule(const PauliTriple& s, Rule rule) {
  std::vector<double> p(8, 0.0);
  for (const auto& h : tessier_hidden_space()) {
    const OutcomeTriple o = rule(s, h);
    p[JointDistribution::index_of({o[0], o[1], o[2]})] += 1.0 / 8.0;
  }
  return JointDistribution(3, p);
}

std::vector<PauliTriple> all_pauli_triples() {
  std::vector<PauliTriple> out;
  for (auto a : kPauliAxes)
    for (auto b : kPauliAxes)
      for (auto c : kPauliAxes) out.push_back({a, b, c});
  return out;
}

/// Marginal of `d` on the parties flagged in `keep`, as a table over those parties.
std::vector<double> marginal(const JointDistribution& d, const std::vector<bool>& keep) {
  std::size_t kept = 0;
  for (bool k : keep) kept += k;
  std::vector<double> out(std::size_t{1} << kept, 0.0);
  for (std::size_t i = 0; i < d.size(); ++i) {
    const auto o = JointDistribution::outcomes_at(d.num_parties(), i);
    OutcomeTuple sub;
    for (std::size_t k = 0; k < o.size(); ++k) {
      if (keep[k]) sub.push_back(o[k]);
    }
    out[sub.empty() ? 0 : JointDistribution::index_of(sub)] += d[i];
  }
  return out;
}

}  // namespace

TEST_CASE("Bell preparation") {
  Rng rng(RngSeed{4});
  Eigen::Vector3d mean = Eigen::Vector3d::Zero();
  for (int i = 0; i < 100000; ++i) {
    const auto h = bell_prepare(rng);
    REQUIRE(std::abs(h.lambda.vector().norm() - 1.0) <= 1e-9);
    mean += h.lambda.vector();
  }
  mean /= 100000.0;
  CHECK(mean.cwiseAbs().maxCoeff() < 0.02);

  Rng a(RngSeed{6}), b(RngSeed{6});
  CHECK(bell_prepare(a).lambda == bell_prepare(b).lambda);
}

TEST_CASE("Bell response functions") {
  const SpherePoint h{UnitVector3::z_axis()};
  CHECK(bell_alice(UnitVector3::z_axis(), h) == 1);
  CHECK(bell_bob(UnitVector3::z_axis(), h) == -1);
  // sign(0) = +1
  CHECK(bell_alice(UnitVector3::x_axis(), h) == 1);
  CHECK(bell_bob(UnitVector3::x_axis(), h) == -1);
}

TEST_CASE("Bell model correlation curve: quadrature oracle") {
  // The model's correlation is -1 + 2 theta / pi on [0, pi]; check the closed
  // form against direct integration over the sphere before relying on it.
  for (double theta : {0.0, kPi / 6, kPi / 4, kPi / 2, 2 * kPi / 3, kPi}) {
    const double quad = testing::bell_model_quadrature(theta, 1000, 1000);
    CHECK(std::abs(quad - (-1.0 + 2.0 * theta / kPi)) < 2e-3);
  }
}

TEST_CASE("Bell model Monte Carlo") {
  CHECK(std::abs(bell_correlation(kPi / 2, 1000000, 17)) < 0.005);
  const double theta = kPi / 3;
  CHECK(std::abs(bell_correlation(theta, 1000000, 18) - (-1.0 + 2.0 * theta / kPi)) < 0.005);
  CHECK(bell_correlation(0.0, 1000, 19) == -1.0);
  CHECK(bell_correlation(kPi, 1000, 19) == 1.0);
}

TEST_CASE("Tessier table entries") {
  const HiddenBits3 plus{{1, 1, 1}};
  CHECK(tessier_local_outcome(kAlice, PauliAxis::Y, plus) == -1);
  for (const auto& h : tessier_hidden_space()) {
    CHECK(tessier_local_outcome(kBob, PauliAxis::I, h) == 1);
  }
  CHECK(tessier_local_outcome(kCandice, PauliAxis::X, HiddenBits3{{1, -1, -1}}) == -1);

  for (const auto& h : tessier_hidden_space()) {
    const int r1 = h.r[0], r2 = h.r[1], r3 = h.r[2];
    CHECK(tessier_local_outcome(kAlice, PauliAxis::X, h) == -r2 * r3);
    CHECK(tessier_local_outcome(kAlice, PauliAxis::Z, h) == r1);
    CHECK(tessier_local_outcome(kBob, PauliAxis::X, h) == r2);
    CHECK(tessier_local_outcome(kBob, PauliAxis::Y, h) == r1 * r2);
    CHECK(tessier_local_outcome(kBob, PauliAxis::Z, h) == r1);
    CHECK(tessier_local_outcome(kCandice, PauliAxis::Y, h) == r1 * r3);
    CHECK(tessier_local_outcome(kCandice, PauliAxis::Z, h) == r1);
  }
}

TEST_CASE("Tessier without communication") {
  const PauliTriple yxy{PauliAxis::Y, PauliAxis::X, PauliAxis::Y};
  const auto ghz = make_ghz(3);
  const Settings yxy_settings{PauliAxis::Y, PauliAxis::X, PauliAxis::Y};
  CHECK(joint_distribution(ghz, yxy_settings).product_expectation() ==
        doctest::Approx(1.0).epsilon(1e-12));
  for (const auto& h : tessier_hidden_space()) {
    const auto o = tessier_run_no_comm(yxy, h);
    CHECK(o[0] * o[1] * o[2] == -1);
  }
  const auto zzz = tessier_run_no_comm({PauliAxis::Z, PauliAxis::Z, PauliAxis::Z},
                                       HiddenBits3{{-1, 1, -1}});
  CHECK(zzz == OutcomeTriple{-1, -1, -1});
  const auto iii = tessier_run_no_comm({PauliAxis::I, PauliAxis::I, PauliAxis::I},
                                       HiddenBits3{{-1, -1, -1}});
  CHECK(iii == OutcomeTriple{1, 1, 1});
}

TEST_CASE("Tessier one-bit flip rule") {
  const PauliTriple yxy{PauliAxis::Y, PauliAxis::X, PauliAxis::Y};
  for (const auto& h : tessier_hidden_space()) {
    const auto r = tessier_run_one_bit(yxy, h);
    CHECK(r.outcomes[0] * r.outcomes[1] * r.outcomes[2] == 1);
    CHECK(r.transcript.bit_count() == 1);
    CHECK(r.transcript.messages.front().sender == kBob);
    CHECK(r.transcript.messages.front().receiver == kAlice);
  }
  const auto yii = tessier_run_one_bit({PauliAxis::Y, PauliAxis::I, PauliAxis::I},
                                       HiddenBits3{{1, 1, 1}});
  CHECK(yii.outcomes[0] == 1);
  CHECK(tessier_bob_bit(PauliAxis::Y));
  CHECK_FALSE(tessier_bob_bit(PauliAxis::X));
  // Inclusive or: both measuring Y flips once.
  CHECK(tessier_alice_outcome(PauliAxis::Y, HiddenBits3{{1, 1, 1}}, true) == 1);
  CHECK(tessier_alice_outcome(PauliAxis::I, HiddenBits3{{1, 1, 1}}, true) == 1);
}

TEST_CASE("Tessier one-bit scheme against every GHZ Pauli distribution") {
  // Matches the oracle everywhere except (Z, Y, Z): Bob's Y bit flips Alice's
  // Z outcome, anticorrelating her with Candice. The three-party product still
  // averages to zero there.
  const auto ghz = make_ghz(3);
  std::vector<std::string> mismatched;
  for (const auto& t : all_pauli_triples()) {
    const auto sim = enumerate_rule(
        t, [](const PauliTriple& s, const HiddenBits3& h) { return tessier_run_one_bit(s, h).outcomes; });
    const Settings settings{t[0], t[1], t[2]};
    const auto q = joint_distribution(ghz, settings);
    CHECK(std::abs(sim.product_expectation(measured_parties(settings)) -
                   q.product_expectation(measured_parties(settings))) <= 1e-12);
    if (tv_distance(sim, q) > 1e-12) {
      mismatched.push_back({to_char(t[0]), to_char(t[1]), to_char(t[2])});
    }
  }
  CHECK(mismatched == std::vector<std::string>{"ZYZ"});

  const auto zyz = enumerate_rule({PauliAxis::Z, PauliAxis::Y, PauliAxis::Z},
                                  [](const PauliTriple& s, const HiddenBits3& h) {
                                    return tessier_run_one_bit(s, h).outcomes;
                                  });
  const auto q = joint_distribution(ghz, Settings{PauliAxis::Z, PauliAxis::Y, PauliAxis::Z});
  CHECK(tv_distance(zyz, q) == doctest::Approx(1.0));
}

TEST_CASE("restricting the flip to X and Y settings reproduces all 64 tables") {
  const auto ghz = make_ghz(3);
  for (const auto& t : all_pauli_triples()) {
    const auto sim = enumerate_rule(t, [](const PauliTriple& s, const HiddenBits3& h) {
      Outcome a = tessier_local_outcome(kAlice, s[0], h);
      if ((s[0] == PauliAxis::X || s[0] == PauliAxis::Y) &&
          (s[0] == PauliAxis::Y || tessier_bob_bit(s[1]))) {
        a = -a;
      }
      return OutcomeTriple{a, tessier_local_outcome(kBob, s[1], h),
                           tessier_local_outcome(kCandice, s[2], h)};
    });
    CHECK(tv_distance(sim, joint_distribution(ghz, Settings{t[0], t[1], t[2]})) <= 1e-12);
  }
}

TEST_CASE("literal flip for an unmeasured Alice changes only her bookkeeping outcome") {
  // Applying the flip even when Alice's setting is I alters her +1 and nothing
  // else: measured-party marginals agree with the implemented rule everywhere.
  int differing_full_tables = 0;
  for (const auto& t : all_pauli_triples()) {
    const auto literal = enumerate_rule(t, [](const PauliTriple& s, const HiddenBits3& h) {
      const bool bit = tessier_bob_bit(s[1]);
      Outcome a = tessier_local_outcome(kAlice, s[0], h);
      if (s[0] == PauliAxis::Y || bit) a = -a;
      return OutcomeTriple{a, tessier_local_outcome(kBob, s[1], h),
                           tessier_local_outcome(kCandice, s[2], h)};
    });
    const auto implemented = enumerate_rule(
        t, [](const PauliTriple& s, const HiddenBits3& h) { return tessier_run_one_bit(s, h).outcomes; });
    const auto keep = measured_parties(Settings{t[0], t[1], t[2]});
    const auto lm = marginal(literal, keep);
    const auto im = marginal(implemented, keep);
    for (std::size_t i = 0; i < lm.size(); ++i) CHECK(std::abs(lm[i] - im[i]) <= 1e-12);
    differing_full_tables += tv_distance(literal, implemented) > 1e-12;
  }
  // (I, Y, *) for the four Candice settings.
  CHECK(differing_full_tables == 4);
}

TEST_CASE("Toner-Bacon protocol") {
  const auto z = UnitVector3::z_axis();
  const auto same = toner_bacon_moments(z, z, 1000000, 21);
  CHECK(std::abs(same.ab + 1.0) < 0.005);
  CHECK(std::abs(same.a) < 0.005);
  CHECK(std::abs(same.b) < 0.005);

  Rng pick(RngSeed{22});
  for (int k = 0; k < 20; ++k) {
    const auto m = sample_sphere(pick);
    const auto n = sample_sphere(pick);
    const auto mom = toner_bacon_moments(m, n, 100000, 1000 + k);
    CHECK(std::abs(mom.ab + m.dot(n)) <= 0.02);
  }
}

TEST_CASE("Toner-Bacon locality structure") {
  Rng rng(RngSeed{23});
  for (int k = 0; k < 2000; ++k) {
    const auto h = toner_bacon_prepare(rng);
    const auto m = sample_sphere(rng);
    const auto n1 = sample_sphere(rng);
    const auto n2 = sample_sphere(rng);
    const auto r1 = toner_bacon_run(m, n1, h);
    const auto r2 = toner_bacon_run(m, n2, h);
    CHECK(r1.a == r2.a);
    CHECK(r1.transcript == r2.transcript);
    CHECK(r1.transcript.bit_count() == 1);
    // Bob's output depends on m only through c.
    const auto m2 = sample_sphere(rng);
    const auto alice2 = toner_bacon_alice(m2, h);
    const auto alice1 = toner_bacon_alice(m, h);
    if (alice1.c == alice2.c) CHECK(toner_bacon_run(m2, n1, h).b == r1.b);
    CHECK(r1.b == toner_bacon_bob(n1, h, alice1.c));
  }
  CHECK(encode_sign(1) == false);
  CHECK(encode_sign(-1) == true);
  CHECK(decode_sign(true) == -1);
}

TEST_CASE("registry") {
  CHECK(strategy_names().size() == 4);
  const std::pair<std::string_view, std::size_t> expected[] = {
      {kBellSinglet, 0}, {kTessierGhz3, 1}, {kTessierGhz3NoComm, 0}, {kTonerBacon, 1}};
  for (const auto& [name, bits] : expected) {
    const auto s = find_strategy(name);
    CHECK(s->spec().name == name);
    CHECK(s->spec().declared_bits == bits);
    CHECK_NOTHROW(s->spec().validate());
  }
  CHECK_THROWS_AS(find_strategy("bohm"), UsageError);
  CHECK(find_strategy(kTessierGhz3)->hidden_state_space().size() == 8);
  CHECK(find_strategy(kTonerBacon)->hidden_state_space().empty());
}

TEST_CASE("strategy spec validation") {
  StrategySpec s{"x", 2, SettingKind::PauliOnly, 2, {{1, 0, 1, 1}}};
  CHECK_THROWS_AS(s.validate(), InvariantError);
  s.declared_bits = 1;
  CHECK_NOTHROW(s.validate());
  s.round_schedule[0].receiver = 0;
  CHECK_THROWS_AS(s.validate(), InvariantError);
  s.round_schedule[0] = {0, 0, 1, 1};
  CHECK_THROWS_AS(s.validate(), InvariantError);
}

TEST_CASE("hidden state digests") {
  const HiddenState a = HiddenBits3{{1, -1, 1}};
  const HiddenState b = HiddenBits3{{1, -1, 1}};
  const HiddenState c = HiddenBits3{{1, 1, 1}};
  CHECK(digest(a) == digest(b));
  CHECK(digest(a) != digest(c));
  CHECK(digest(HiddenState{SpherePoint{UnitVector3::z_axis()}}) !=
        digest(HiddenState{SpherePoint{UnitVector3::x_axis()}}));
}

TEST_CASE("bit strings") {
  BitString b{true, false, true};
  CHECK(b.size() == 3);
  CHECK(b.to_string() == "101");
  BitString full;
  for (std::size_t i = 0; i < BitString::kCapacity; ++i) full.push_back(i % 2 == 0);
  CHECK_THROWS_AS(full.push_back(true), SizeError);
}
