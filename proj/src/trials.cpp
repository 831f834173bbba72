#include "collapseloc/trials.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <ostream>
#include <stdexcept>
#include <string>
#include <thread>

#include "collapseloc/rng.hpp"

namespace collapseloc {

namespace {

struct Prepared {
  WingCollapseProfile L;
  WingCollapseProfile R;
};

double collapse_delay(const WingCollapseProfile& p, CollapseSampling sampling, TrialRng& rng) {
  if (p.deterministic || sampling == CollapseSampling::Deterministic) return p.lead + p.tau;
  return p.lead + rng.exponential(p.tau);
}

// Later wing's outcome given the earlier one: P(x | y) = (1 - x y cos delta) / 2.
int conditional_outcome(int earlier, double delta, TrialRng& rng) {
  const double p_plus = 0.5 * (1.0 - earlier * std::cos(delta));
  return rng.uniform() < p_plus ? 1 : -1;
}

std::pair<int, int> joint_outcomes(double delta, TrialRng& rng) {
  const double u = rng.uniform();
  double acc = 0;
  for (int a : {1, -1}) {
    for (int b : {1, -1}) {
      acc += qm_joint_prob(delta, a, b);
      if (u < acc) return {a, b};
    }
  }
  return {-1, -1};
}

TrialRecord simulate_one(const ExperimentConfig& config, const Prepared& prep, Engine engine,
                         CollapseSampling sampling, std::uint64_t seed, std::uint64_t index) {
  TrialRng rng(seed, index);
  TrialRecord r;
  r.setting_L = rng.coin() ? 2 : 1;
  r.setting_R = rng.coin() ? 2 : 1;
  r.angle_L = config.settings.angles_L[r.setting_L - 1];
  r.angle_R = config.settings.angles_R[r.setting_R - 1];

  r.collapse_L = {prep.L.input.t + collapse_delay(prep.L, sampling, rng), prep.L.input.pos};
  r.collapse_R = {prep.R.input.t + collapse_delay(prep.R, sampling, rng), prep.R.input.pos};
  r.causal_class = causal_class(r.collapse_L, r.collapse_R, config.constants);

  const double delta = r.angle_L - r.angle_R;
  if (engine == Engine::StandardQm) {
    r.outcome_a = rng.sign();
    r.outcome_b = conditional_outcome(r.outcome_a, delta, rng);
    return r;
  }

  if (r.collapse_L.pos == r.collapse_R.pos) {
    std::tie(r.outcome_a, r.outcome_b) = joint_outcomes(delta, rng);
  } else if (r.causal_class.separation == Separation::Spacelike) {
    const HiddenVariable lambda{2 * std::numbers::pi * rng.uniform()};
    r.outcome_a = lhv_outcome(lambda, r.angle_L, Wing::L);
    r.outcome_b = lhv_outcome(lambda, r.angle_R, Wing::R);
  } else if (r.causal_class.ordering == Ordering::SecondEarlier) {
    r.outcome_b = rng.sign();
    r.outcome_a = conditional_outcome(r.outcome_b, delta, rng);
  } else {
    r.outcome_a = rng.sign();
    r.outcome_b = conditional_outcome(r.outcome_a, delta, rng);
  }
  return r;
}

} // namespace

std::vector<TrialRecord> run_trials(const ExperimentConfig& config, const CollapseModel& model,
                                    Engine engine, std::uint64_t n, std::uint64_t seed,
                                    const TrialOptions& opts) {
  if (n == 0) throw std::invalid_argument("run_trials requires n >= 1");
  validate(config);
  const Prepared prep{wing_collapse_profile(config.wing_L, model, config.constants, opts.analysis),
                      wing_collapse_profile(config.wing_R, model, config.constants, opts.analysis)};
  for (const auto* p : {&prep.L, &prep.R}) {
    if (!(p->tau > 0)) throw ModelError("collapse time must be strictly positive");
  }

  std::vector<TrialRecord> out(n);
  unsigned threads = opts.threads ? opts.threads : std::max(1u, std::thread::hardware_concurrency());
  threads = static_cast<unsigned>(std::min<std::uint64_t>(threads, (n + 4095) / 4096));
  auto work = [&](std::uint64_t begin, std::uint64_t end) {
    for (std::uint64_t i = begin; i < end; ++i) {
      out[i] = simulate_one(config, prep, engine, opts.sampling, seed, i);
    }
  };
  if (threads <= 1) {
    work(0, n);
    return out;
  }
  std::vector<std::jthread> pool;
  const std::uint64_t chunk = (n + threads - 1) / threads;
  for (unsigned t = 0; t < threads; ++t) {
    const std::uint64_t begin = t * chunk;
    const std::uint64_t end = std::min(n, begin + chunk);
    if (begin < end) pool.emplace_back(work, begin, end);
  }
  pool.clear();
  return out;
}

ChshResult chsh_estimate(std::span<const TrialRecord> records) {
  ChshResult res;
  std::array<std::array<double, 2>, 2> sums{};
  SettingsSpec seen;
  for (const auto& r : records) {
    const int i = r.setting_L - 1, j = r.setting_R - 1;
    if (i < 0 || i > 1 || j < 0 || j > 1) throw std::invalid_argument("setting index must be 1 or 2");
    res.counts[i][j] += 1;
    sums[i][j] += r.outcome_a * r.outcome_b;
    seen.angles_L[i] = r.angle_L;
    seen.angles_R[j] = r.angle_R;
  }
  double var = 0;
  for (int i = 0; i < 2; ++i) {
    for (int j = 0; j < 2; ++j) {
      if (res.counts[i][j] == 0) {
        throw std::invalid_argument("no trials for setting pair (" + std::to_string(i + 1) + "," +
                                    std::to_string(j + 1) + ")");
      }
      const double e = sums[i][j] / static_cast<double>(res.counts[i][j]);
      res.correlations[i][j] = e;
      var += (1 - e * e) / static_cast<double>(res.counts[i][j]);
    }
  }
  const auto& E = res.correlations;
  res.s_hat = E[0][0] - E[0][1] + E[1][0] + E[1][1];
  res.std_err = std::sqrt(var);
  res.n = records.size();

  // Game score: sigma(1,2) = -1, else +1, oriented by the sign of the quantum prediction
  // for these settings (fixed before looking at outcomes).
  const double orientation = chsh_signed_closed_form(CorrelationModel::Qm, seen) < 0 ? -1.0 : 1.0;
  const double total = sums[0][0] - sums[0][1] + sums[1][0] + sums[1][1];
  res.s_game = 4 * orientation * total / static_cast<double>(res.n);
  res.p_bound = azuma_p_bound(res.s_game, static_cast<double>(res.n));
  return res;
}

void write_trial_csv(std::ostream& out, std::span<const TrialRecord> records) {
  out << "trial,setL,setR,a,b,tL,xL,yL,zL,tR,xR,yR,zR,class\n";
  char buf[512];
  std::uint64_t index = 0;
  for (const auto& r : records) {
    const auto& l = r.collapse_L;
    const auto& q = r.collapse_R;
    std::snprintf(buf, sizeof buf,
                  "%llu,%d,%d,%d,%d,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%s\n",
                  static_cast<unsigned long long>(index++), r.setting_L, r.setting_R, r.outcome_a,
                  r.outcome_b, l.t, l.pos.x(), l.pos.y(), l.pos.z(), q.t, q.pos.x(), q.pos.y(),
                  q.pos.z(), std::string(to_string(r.causal_class.separation)).c_str());
    out << buf;
  }
}

} // namespace collapseloc
