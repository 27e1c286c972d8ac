#include <gtest/gtest.h>

#include <cmath>

#include "sparsecert/ensemble.hpp"
#include "sparsecert/errors.hpp"
#include "sparsecert/rng.hpp"

namespace sparsecert {
namespace {

EnsembleConfig small_config() {
  EnsembleConfig cfg;
  cfg.p_list = {9, 16};
  cfg.alpha_grid = {1.0, 3.0};
  cfg.rho_multipliers = {2.0, 8.0};
  cfg.trials = 5;
  cfg.master_seed = 42;
  return cfg;
}

TEST(CellShape, CeilSqrt) {
  EXPECT_EQ(ceil_sqrt(64), 8);
  EXPECT_EQ(ceil_sqrt(65), 9);
  EXPECT_EQ(ceil_sqrt(9), 3);
  EXPECT_EQ(ceil_sqrt(10), 4);
  EXPECT_EQ(ceil_sqrt(1), 1);
}

TEST(CellShape, ReferenceCell) {
  const CellShape s = cell_shape(64, 3.0, 2.0);
  EXPECT_EQ(s.k, 8);
  EXPECT_EQ(s.n, 97);  // ceil(3 * 8 * ln 56) = ceil(96.61)
  EXPECT_DOUBLE_EQ(s.rho, 2.0 * std::sqrt(97.0));
}

TEST(CellShape, RejectsDegenerateDimension) {
  EXPECT_THROW(cell_shape(3, 1.0, 1.0), InvalidConfig);
}

TEST(Config, Validation) {
  EnsembleConfig cfg = small_config();
  EXPECT_NO_THROW(cfg.validate());
  cfg.p_list = {3};
  EXPECT_THROW(cfg.validate(), InvalidConfig);
  cfg = small_config();
  cfg.trials = 0;
  EXPECT_THROW(cfg.validate(), InvalidConfig);
  cfg = small_config();
  cfg.gamma = -1.0;
  EXPECT_THROW(cfg.validate(), InvalidConfig);
  cfg = small_config();
  cfg.k_rule = "half";
  EXPECT_THROW(cfg.validate(), InvalidConfig);
}

TEST(Rng, SeedDeriveSeparatesFields) {
  EXPECT_EQ(seed_derive(0, 0, 0, 0, 0), 12321809464288559627ULL);
  EXPECT_EQ(seed_derive(0, 64, 0, 0, 0), 15116060839540587749ULL);
  EXPECT_EQ(seed_derive(7, 64, 3, 1, 5), 16903277856451393312ULL);
  EXPECT_NE(seed_derive(0, 1, 0, 0, 0), seed_derive(0, 0, 1, 0, 0));
  EXPECT_NE(seed_derive(0, 0, 0, 1, 0), seed_derive(0, 0, 0, 0, 1));
}

TEST(Rng, SplitMixReferenceStream) {
  SplitMix64 g(0);
  EXPECT_EQ(g.next(), 0xE220A8397B1DCDAFULL);
  EXPECT_EQ(g.next(), 0x6E789E6AA1B965F4ULL);
}

TEST(Rng, DrawsLookRight) {
  SplitMix64 g(2024);
  const int N = 200000;
  double sum = 0.0, sq = 0.0;
  for (int i = 0; i < N; ++i) {
    const double x = g.normal();
    sum += x;
    sq += x * x;
  }
  const double mean = sum / N;
  EXPECT_NEAR(mean, 0.0, 0.015);
  EXPECT_NEAR(sq / N - mean * mean, 1.0, 0.02);

  std::vector<int> hist(7, 0);
  for (int i = 0; i < 70000; ++i) {
    const double u = g.uniform();
    ASSERT_GE(u, 0.0);
    ASSERT_LT(u, 1.0);
    ++hist[g.below(7)];
  }
  for (int count : hist) EXPECT_NEAR(count, 10000, 500);
}

TEST(Generate, Deterministic) {
  const EnsembleConfig cfg = small_config();
  const TrialKey key{16, 1, 0, 3};
  const GeneratedInstance a = generate_instance(cfg, key);
  const GeneratedInstance b = generate_instance(cfg, key);
  EXPECT_EQ(a.instance.X(), b.instance.X());
  EXPECT_EQ(a.instance.y(), b.instance.y());
  EXPECT_EQ(a.support, b.support);
  EXPECT_EQ(a.seed, seed_derive(42, 16, 1, 0, 3));

  const GeneratedInstance c = generate_instance(cfg, TrialKey{16, 1, 0, 4});
  EXPECT_NE(a.instance.X(), c.instance.X());
}

TEST(Generate, ShapeAndSignal) {
  EnsembleConfig cfg = small_config();
  cfg.gamma = 0.0;
  const GeneratedInstance g = generate_instance(cfg, TrialKey{16, 1, 1, 0});
  EXPECT_EQ(g.instance.p(), 16);
  EXPECT_EQ(g.instance.k(), 4);
  EXPECT_EQ(g.instance.n(), g.shape.n);
  EXPECT_DOUBLE_EQ(g.instance.rho(), 8.0 * std::sqrt(static_cast<double>(g.shape.n)));
  EXPECT_EQ(g.support.size(), 4u);
  for (Index j = 0; j < 16; ++j) {
    EXPECT_EQ(std::abs(g.beta_star(j)), g.support.contains(j) ? 1.0 : 0.0);
  }
  EXPECT_EQ(g.instance.y(), g.instance.X() * g.beta_star);
}

TEST(Generate, DesignEntriesLookStandardNormal) {
  const EnsembleConfig cfg = small_config();
  const GeneratedInstance g = generate_instance(cfg, TrialKey{16, 1, 1, 2});
  const double m = static_cast<double>(g.instance.X().size());
  const double mean = g.instance.X().mean();
  const double var = (g.instance.X().array() - mean).square().sum() / (m - 1.0);
  EXPECT_LE(std::abs(mean), 5.0 / std::sqrt(m));
  EXPECT_LE(std::abs(var - 1.0), 5.0 * std::sqrt(2.0 / (m - 1.0)));
}

TEST(EvaluateTrial, OrthogonalNoiselessRecovers) {
  Eigen::VectorXd y = Eigen::VectorXd::Zero(6);
  y(1) = 1.0;
  y(4) = -1.0;
  const ProblemInstance inst(Eigen::MatrixXd::Identity(6, 6), y, 0.1, 2);
  const TrialOutcome o = evaluate_trial(inst, SupportSet{1, 4});
  EXPECT_TRUE(o.pwg_exact);
  EXPECT_TRUE(o.dcl_exact);
}

TEST(EvaluateTrial, ZeroResponse) {
  const ProblemInstance inst(Eigen::MatrixXd::Identity(4, 4), Eigen::VectorXd::Zero(4), 1.0, 2);
  const TrialOutcome o = evaluate_trial(inst, SupportSet{0, 1});
  EXPECT_FALSE(o.pwg_exact);
  EXPECT_TRUE(o.dcl_exact);
}

TEST(EvaluateTrial, RequiresFullSupport) {
  const ProblemInstance inst(Eigen::MatrixXd::Identity(4, 4), Eigen::VectorXd::Ones(4), 1.0, 2);
  EXPECT_THROW(evaluate_trial(inst, SupportSet{0}), InvalidInput);
}

TEST(Sweep, KeyOrder) {
  const std::vector<TrialKey> keys = sweep_keys(small_config());
  ASSERT_EQ(keys.size(), 2u * 2u * 2u * 5u);
  EXPECT_EQ(keys[0].p, 9);
  EXPECT_EQ(keys[4].trial_index, 4);
  EXPECT_EQ(keys[5].rho_index, 1u);
  EXPECT_EQ(keys[10].alpha_index, 1u);
  EXPECT_EQ(keys[20].p, 16);
}

TEST(Sweep, IndependentOfWorkerCount) {
  const EnsembleConfig cfg = small_config();
  const std::vector<TrialRecord> one = run_sweep(cfg, 1);
  const std::vector<TrialRecord> many = run_sweep(cfg, 3);
  ASSERT_EQ(one.size(), many.size());
  for (std::size_t i = 0; i < one.size(); ++i) {
    EXPECT_EQ(one[i].trial_seed, many[i].trial_seed);
    EXPECT_EQ(one[i].pwg_exact, many[i].pwg_exact);
    EXPECT_EQ(one[i].dcl_exact, many[i].dcl_exact);
    EXPECT_LE(one[i].pwg_exact, one[i].dcl_exact);
  }
}

TEST(Sweep, MoreDataDoesNotHurtDcl) {
  EnsembleConfig cfg;
  cfg.p_list = {64};
  cfg.alpha_grid = {1.0, 10.0};
  cfg.rho_multipliers = {2.0};
  cfg.trials = 20;
  const std::vector<RecoveryCurve> curves = aggregate(run_sweep(cfg, 0));
  ASSERT_EQ(curves.size(), 1u);
  EXPECT_GE(curves[0].points[1].dcl_rate, curves[0].points[0].dcl_rate);
  for (const RecoveryPoint& pt : curves[0].points) EXPECT_GE(pt.dcl_rate, pt.pwg_rate);
}

TEST(Aggregate, Rates) {
  std::vector<TrialRecord> records;
  auto add = [&](Index p, double alpha, double mult, bool pwg, bool dcl) {
    TrialRecord r;
    r.p = p;
    r.alpha = alpha;
    r.rho_multiplier = mult;
    r.pwg_exact = pwg;
    r.dcl_exact = dcl;
    records.push_back(r);
  };
  add(16, 1.0, 2.0, false, true);
  add(16, 1.0, 2.0, false, false);
  add(16, 2.0, 2.0, true, true);
  add(16, 1.0, 8.0, true, true);

  const std::vector<RecoveryCurve> curves = aggregate(records);
  ASSERT_EQ(curves.size(), 2u);
  EXPECT_EQ(curves[0].rho_multiplier, 2.0);
  ASSERT_EQ(curves[0].points.size(), 2u);
  EXPECT_EQ(curves[0].points[0].trials, 2);
  EXPECT_DOUBLE_EQ(curves[0].points[0].pwg_rate, 0.0);
  EXPECT_DOUBLE_EQ(curves[0].points[0].dcl_rate, 0.5);
  EXPECT_DOUBLE_EQ(curves[0].points[1].dcl_rate, 1.0);
  EXPECT_EQ(curves[1].points.size(), 1u);
}

}  // namespace
}  // namespace sparsecert
