#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>
#include <sstream>

#include "collapseloc/scenarios.hpp"
#include "collapseloc/trials.hpp"

using namespace collapseloc;
using Eigen::Vector3d;
using std::numbers::pi;

namespace {

enum class Layout { Spacelike, LeftFirst, RightFirst, CoLocated };

// Two human-observed wings 1 km apart with 0.1 us perception. Humans collapse
// deterministically, so the causal class is the same on every trial.
ExperimentConfig toy_config(Layout layout, SettingsSpec settings = {}) {
  ExperimentConfig c;
  c.settings = settings;
  const double t_det = 2e-6;
  c.wing_L.detector_event = {t_det, Vector3d(-500, 0, 0)};
  c.wing_R.detector_event = {t_det, Vector3d(500, 0, 0)};
  c.wing_L.amplifier_site = Vector3d(-500, 0, 0);
  c.wing_R.amplifier_site = Vector3d(500, 0, 0);
  c.wing_L.observer = HumanObserver{1e-7};
  c.wing_R.observer = HumanObserver{1e-7};
  if (layout == Layout::LeftFirst) c.wing_R.added_sync_delay = 1e-3;
  if (layout == Layout::RightFirst) c.wing_L.added_sync_delay = 1e-3;
  if (layout == Layout::CoLocated) c.wing_R.amplifier_site = Vector3d(-500, 0, 0);
  return c;
}

const CollapseModel any_model = model_preset("dp-diosi");

std::vector<TrialRecord> run(const ExperimentConfig& c, Engine e, std::uint64_t n, std::uint64_t seed,
                             unsigned threads = 0) {
  TrialOptions o;
  o.threads = threads;
  return run_trials(c, any_model, e, n, seed, o);
}

TrialRecord synthetic(int i, int j, int a, int b) {
  TrialRecord r;
  r.setting_L = i;
  r.setting_R = j;
  SettingsSpec s;
  r.angle_L = s.angles_L[i - 1];
  r.angle_R = s.angles_R[j - 1];
  r.outcome_a = a;
  r.outcome_b = b;
  return r;
}

// 4-cell chi-square of outcome frequencies against the singlet law.
double chi_square(const std::vector<TrialRecord>& recs, double delta) {
  std::array<double, 4> counts{};
  for (const auto& r : recs) counts[(r.outcome_a == 1 ? 0 : 2) + (r.outcome_b == 1 ? 0 : 1)] += 1;
  double chi = 0;
  int cell = 0;
  for (int a : {1, -1}) {
    for (int b : {1, -1}) {
      const double expect = recs.size() * qm_joint_prob(delta, a, b);
      chi += (counts[cell] - expect) * (counts[cell] - expect) / expect;
      ++cell;
    }
  }
  return chi;
}

// Chi-square with 3 degrees of freedom at the 4-sigma tail (p = 6.3e-5).
constexpr double kChi2Crit = 22.3;

} // namespace

TEST_CASE("toy layouts have the intended causal class") {
  auto spacelike = run(toy_config(Layout::Spacelike), Engine::CausalCollapse, 100, 1);
  auto left = run(toy_config(Layout::LeftFirst), Engine::CausalCollapse, 100, 1);
  auto right = run(toy_config(Layout::RightFirst), Engine::CausalCollapse, 100, 1);
  for (std::size_t i = 0; i < 100; ++i) {
    CHECK(spacelike[i].causal_class.separation == Separation::Spacelike);
    CHECK(left[i].causal_class.ordering == Ordering::FirstEarlier);
    CHECK(right[i].causal_class.ordering == Ordering::SecondEarlier);
    CHECK(spacelike[i].collapse_L.t == doctest::Approx(2e-6 + 1e-7));
  }
}

TEST_CASE("settings are uniform and outcomes are +-1") {
  auto recs = run(toy_config(Layout::Spacelike), Engine::CausalCollapse, 200000, 5);
  auto res = chsh_estimate(recs);
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) CHECK(std::abs(double(res.counts[i][j]) - 50000) < 4 * std::sqrt(50000 * 0.75));
  for (const auto& r : recs) {
    CHECK((r.outcome_a == 1 || r.outcome_a == -1));
    CHECK((r.outcome_b == 1 || r.outcome_b == -1));
  }
}

TEST_CASE("records are bit-identical for a seed regardless of threads") {
  const auto c = toy_config(Layout::LeftFirst);
  auto one = run(c, Engine::CausalCollapse, 50000, 42, 1);
  auto many = run(c, Engine::CausalCollapse, 50000, 42, 7);
  auto again = run(c, Engine::CausalCollapse, 50000, 42, 3);
  CHECK(one == many);
  CHECK(one == again);
  auto other = run(c, Engine::CausalCollapse, 50000, 43, 1);
  CHECK_FALSE(one == other);

  std::ostringstream a, b;
  write_trial_csv(a, one);
  write_trial_csv(b, many);
  CHECK(a.str() == b.str());
}

TEST_CASE("trial prefix does not depend on n") {
  const auto c = build_scenario(ScenarioId::Salart2008);
  auto small = run_trials(c, any_model, Engine::CausalCollapse, 1000, 9);
  auto large = run_trials(c, any_model, Engine::CausalCollapse, 20000, 9);
  CHECK(std::equal(small.begin(), small.end(), large.begin()));
}

TEST_CASE("exponential sampling places collapses after the actuation lead") {
  const auto c = build_scenario(ScenarioId::Salart2008);
  auto recs = run_trials(c, any_model, Engine::CausalCollapse, 20000, 1);
  const double input_L = amplifier_input_event(c.wing_L, c.constants).t;
  const double tau = apparatus_tau(salart_apparatus(), any_model).tau;
  double mean = 0;
  for (const auto& r : recs) {
    CHECK(r.collapse_L.t >= input_L + 6e-6);
    mean += r.collapse_L.t - input_L - 6e-6;
  }
  mean /= recs.size();
  CHECK(mean == doctest::Approx(tau).epsilon(0.03));

  TrialOptions det;
  det.sampling = CollapseSampling::Deterministic;
  auto fixed = run_trials(c, any_model, Engine::CausalCollapse, 10, 1, det);
  CHECK(fixed[3].collapse_L.t == doctest::Approx(input_L + 6e-6 + tau).epsilon(1e-15));
}

TEST_CASE("run_trials errors") {
  CHECK_THROWS_AS(run(toy_config(Layout::Spacelike), Engine::StandardQm, 0, 1), std::invalid_argument);
  auto c = build_scenario(ScenarioId::Salart2008);
  std::get<DeviceObserver>(c.wing_L.observer).apparatus.displacement_d = 0;
  CHECK_THROWS_AS(run_trials(c, model_preset("csl-standard"), Engine::CausalCollapse, 10, 1), ModelError);
}

TEST_CASE("chsh_estimate on hand-built records") {
  std::vector<TrialRecord> anti;
  for (int i = 1; i <= 2; ++i)
    for (int j = 1; j <= 2; ++j) anti.push_back(synthetic(i, j, 1, -1));
  auto r = chsh_estimate(anti);
  for (auto& row : r.correlations)
    for (double e : row) CHECK(e == -1);
  CHECK(r.s_hat == -2);
  CHECK(r.magnitude() == 2);

  std::vector<TrialRecord> four{synthetic(1, 1, 1, -1), synthetic(1, 2, 1, 1), synthetic(2, 1, 1, -1),
                                synthetic(2, 2, 1, -1)};
  auto extreme = chsh_estimate(four);
  CHECK(extreme.s_hat == -4);
  CHECK(extreme.n == 4);
  CHECK(extreme.s_game == 4);
  CHECK(extreme.p_bound == doctest::Approx(std::exp(-4.0 * 4 / 32)));

  std::vector<TrialRecord> missing{synthetic(1, 1, 1, -1), synthetic(2, 1, 1, -1), synthetic(2, 2, 1, -1)};
  CHECK_THROWS_WITH_AS(chsh_estimate(missing), doctest::Contains("(1,2)"), std::invalid_argument);
}

TEST_CASE("chsh_estimate on records drawn independently from the singlet law") {
  std::mt19937_64 rng(2718);
  std::uniform_real_distribution<double> u(0, 1);
  const SettingsSpec s;
  std::vector<TrialRecord> recs;
  for (int t = 0; t < 1000000; ++t) {
    const int i = u(rng) < 0.5 ? 1 : 2, j = u(rng) < 0.5 ? 1 : 2;
    const double delta = s.angles_L[i - 1] - s.angles_R[j - 1];
    const double x = u(rng);
    const double p_pp = qm_joint_prob(delta, 1, 1), p_pm = qm_joint_prob(delta, 1, -1),
                 p_mp = qm_joint_prob(delta, -1, 1);
    int a = -1, b = -1;
    if (x < p_pp) a = 1, b = 1;
    else if (x < p_pp + p_pm) a = 1, b = -1;
    else if (x < p_pp + p_pm + p_mp) a = -1, b = 1;
    recs.push_back(synthetic(i, j, a, b));
  }
  auto r = chsh_estimate(recs);
  CHECK(std::abs(r.magnitude() - 2 * std::numbers::sqrt2) < 3 * r.std_err);
  CHECK(r.std_err == doctest::Approx(std::sqrt(4 * 0.5 / 250000)).epsilon(0.01));
  CHECK(r.s_game == doctest::Approx(r.magnitude()).epsilon(0.01));
  CHECK(r.p_bound < 1e-300);
}

TEST_CASE("causally ordered collapses reproduce the singlet joint law") {
  std::mt19937_64 rng(99);
  std::uniform_real_distribution<double> angle(0, 2 * pi);
  for (int k = 0; k < 10; ++k) {
    const double ta = angle(rng), tb = angle(rng);
    const SettingsSpec fixed{{ta, ta}, {tb, tb}};
    const auto layout = k % 2 ? Layout::RightFirst : Layout::LeftFirst;
    auto recs = run(toy_config(layout, fixed), Engine::CausalCollapse, 1000000, 1000 + k);
    CAPTURE(ta);
    CAPTURE(tb);
    CHECK(chi_square(recs, ta - tb) < kChi2Crit);
  }
}

TEST_CASE("co-located collapses also follow the singlet law") {
  const SettingsSpec fixed{{0.3, 0.3}, {2.0, 2.0}};
  auto recs = run(toy_config(Layout::CoLocated, fixed), Engine::CausalCollapse, 1000000, 17);
  CHECK(chi_square(recs, 0.3 - 2.0) < kChi2Crit);
}

TEST_CASE("standard engine follows the singlet law for any layout") {
  const SettingsSpec fixed{{1.1, 1.1}, {0.2, 0.2}};
  auto recs = run(toy_config(Layout::Spacelike, fixed), Engine::StandardQm, 1000000, 5);
  CHECK(chi_square(recs, 1.1 - 0.2) < kChi2Crit);
}

TEST_CASE("spacelike collapses respect the CHSH bound for random angles") {
  std::mt19937_64 rng(123);
  std::uniform_real_distribution<double> angle(0, 2 * pi);
  for (int k = 0; k < 6; ++k) {
    const SettingsSpec s{{angle(rng), angle(rng)}, {angle(rng), angle(rng)}};
    auto recs = run(toy_config(Layout::Spacelike, s), Engine::CausalCollapse, 1000000, 50 + k);
    auto r = chsh_estimate(recs);
    CHECK(r.magnitude() <= 2 + 4 * r.std_err);
  }
}

TEST_CASE("empirical correlations match the closed forms") {
  for (double delta : {0.2, pi / 4, 1.3, 2.9}) {
    const SettingsSpec s{{delta, delta}, {0, 0}};
    const std::uint64_t n = 400000;
    for (auto [layout, engine, model] :
         {std::tuple{Layout::Spacelike, Engine::CausalCollapse, CorrelationModel::LhvSpacelike},
          std::tuple{Layout::Spacelike, Engine::StandardQm, CorrelationModel::Qm},
          std::tuple{Layout::LeftFirst, Engine::CausalCollapse, CorrelationModel::Qm}}) {
      auto recs = run(toy_config(layout, s), engine, n, 77);
      double sum = 0;
      for (const auto& r : recs) sum += r.outcome_a * r.outcome_b;
      const double e = correlation_closed_form(model, delta);
      const double sigma = std::sqrt((1 - e * e) / n);
      CHECK(std::abs(sum / n - e) < 4 * sigma);
    }
  }
}

TEST_CASE("engine separation at optimal angles") {
  const std::uint64_t n = 1000000;
  auto qm = chsh_estimate(run(toy_config(Layout::Spacelike), Engine::StandardQm, n, 1));
  auto lhv = chsh_estimate(run(toy_config(Layout::Spacelike), Engine::CausalCollapse, n, 2));
  auto faux = chsh_estimate(run(toy_config(Layout::LeftFirst), Engine::CausalCollapse, n, 3));
  CHECK(qm.magnitude() == doctest::Approx(2.828).epsilon(0.01 / 2.828));
  CHECK(lhv.magnitude() == doctest::Approx(2.0).epsilon(0.01 / 2));
  CHECK(faux.magnitude() == doctest::Approx(2.828).epsilon(0.01 / 2.828));
  CHECK(lhv.p_bound == 1.0);
  CHECK(faux.p_bound < 1e-100);
}

TEST_CASE("CSV log layout") {
  auto recs = run(toy_config(Layout::Spacelike), Engine::CausalCollapse, 3, 8);
  std::ostringstream out;
  write_trial_csv(out, recs);
  std::istringstream in(out.str());
  std::string line;
  std::getline(in, line);
  CHECK(line == "trial,setL,setR,a,b,tL,xL,yL,zL,tR,xR,yR,zR,class");
  int rows = 0;
  while (std::getline(in, line)) {
    CHECK(std::count(line.begin(), line.end(), ',') == 13);
    CHECK(line.starts_with(std::to_string(rows) + ","));
    CHECK(line.ends_with(",spacelike"));
    ++rows;
  }
  CHECK(rows == 3);
}
