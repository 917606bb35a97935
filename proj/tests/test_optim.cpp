#include <gtest/gtest.h>

#include <cmath>
#include <stdexcept>

#include "risopt/optim.hpp"
#include "test_util.hpp"

using namespace risopt;
using namespace risopt::testing;

namespace {

FrequencyChannel scalar_channel(cplx direct, cplx v) {
  FrequencyChannel fc;
  fc.direct = CVector::Constant(1, direct);
  fc.composite = CMatrix::Constant(1, 1, v);
  return fc;
}

FrequencyChannel random_fc(Eigen::Index n, Eigen::Index k, RandomStream& s) {
  FrequencyChannel fc;
  fc.direct = random_cvector(k, s);
  fc.composite.resize(k, n);
  for (Eigen::Index i = 0; i < n; ++i) fc.composite.col(i) = random_cvector(k, s);
  return fc;
}

}  // namespace

TEST(Objective, HandExamples) {
  const FrequencyChannel fc = scalar_channel(1.0, 1.0);
  EXPECT_EQ(objective(fc, CVector::Constant(1, -1.0)), 0.0);
  EXPECT_EQ(objective(fc, CVector::Constant(1, 1.0)), -4.0);
  EXPECT_THROW(objective(fc, CVector::Ones(2)), std::invalid_argument);
}

TEST(Compensation, KeepsMagnitudesAndAddsPhase) {
  CVector w(3);
  w << 0.5, cplx(0, 2), std::polar(1.5, -1.0);
  RVector t(3);
  t << 0.1, -0.2, 3.0;
  const CVector out = apply_compensation(w, t);
  for (Eigen::Index n = 0; n < 3; ++n) {
    EXPECT_NEAR(std::abs(out[n]), std::abs(w[n]), 1e-15);
    EXPECT_NEAR(std::remainder(std::arg(out[n]) - std::arg(w[n]) - t[n], 2 * kPi), 0.0, 1e-14);
  }
  EXPECT_THROW(apply_compensation(w, RVector::Zero(2)), std::invalid_argument);
}

TEST(Gradient, MatchesFiniteDifferences) {
  RandomStream s = make_stream(1, 1);
  for (int t = 0; t < 100; ++t) {
    const Eigen::Index n = 1 + t % 20, k = 1 + (t * 7) % 33;
    const FrequencyChannel fc = random_fc(n, k, s);
    CVector wp = random_unit(n, s);
    if (t % 2) wp = wp.cwiseProduct(random_cvector(n, s));  // non-unit magnitudes too
    RVector tb(n);
    for (auto& x : tb) x = s.uniform(-kPi, kPi);
    const RVector g = gradient(fc, wp, tb);
    const RVector fd = finite_difference_gradient(fc, wp, tb);
    EXPECT_LT(max_relative_error(g, fd), 1e-6) << "instance " << t;
  }
}

TEST(Gradient, ZeroAtCoherentAlignment) {
  const FrequencyChannel fc = scalar_channel(1.0, 1.0);
  const CVector wp = CVector::Constant(1, cplx(0, 1));
  EXPECT_NEAR(gradient(fc, wp, RVector::Constant(1, -kPi / 2))[0], 0.0, 1e-15);
  // J(t) = -|1 + j e^{jt}|^2 = -2 + 2 sin t, dJ/dt = 2 cos t
  EXPECT_NEAR(gradient(fc, wp, RVector::Zero(1))[0], 2.0, 1e-15);
}

TEST(MaxRelativeError, InfNormScaled) {
  RVector a(2), b(2);
  a << 1.0, 2.1;
  b << 1.0, 2.0;
  EXPECT_NEAR(max_relative_error(a, b), 0.05, 1e-15);
  EXPECT_EQ(max_relative_error(RVector(), RVector()), 0.0);
}

TEST(Steps, GdExample) {
  CompensationState st = CompensationState::zeros(2);
  OptimizerOptions o;
  o.gamma = 0.1;
  RVector g(2);
  g << 1.0, -2.0;
  gd_step(st, g, o);
  EXPECT_NEAR(st.theta_bar[0], -0.1, 1e-15);
  EXPECT_NEAR(st.theta_bar[1], 0.2, 1e-15);
  EXPECT_EQ(st.iter, 1u);
  EXPECT_TRUE(st.objective_trace.empty());
  g[0] = std::nan("");
  EXPECT_THROW(gd_step(st, g, o), std::domain_error);
}

TEST(Steps, AdamFirstStepIsSignedLearningRate) {
  CompensationState st = CompensationState::zeros(3);
  OptimizerOptions o;
  o.gamma = 0.01;
  RVector g(3);
  g << 5.0, -0.001, 0.0;
  adam_step(st, g, o);
  EXPECT_NEAR(st.theta_bar[0], -0.01, 1e-10);
  EXPECT_NEAR(st.theta_bar[1], 0.01, 1e-7);
  EXPECT_EQ(st.theta_bar[2], 0.0);
  EXPECT_NEAR(st.first_moment[0], 0.5, 1e-15);
  EXPECT_NEAR(st.second_moment[0], 0.025, 1e-15);
  // Second step with the same gradient keeps the bias-corrected ratio at one.
  adam_step(st, g, o);
  EXPECT_NEAR(st.theta_bar[0], -0.02, 1e-10);
  EXPECT_EQ(st.iter, 2u);
  g[1] = INFINITY;
  EXPECT_THROW(adam_step(st, g, o), std::domain_error);
}

TEST(Optimize, SmallStepsDescendMonotonically) {
  RandomStream s = make_stream(2, 2);
  const FrequencyChannel fc = random_fc(8, 16, s);
  const CVector wp = random_unit(8, s);
  OptimizerOptions o;
  o.curvature = 0;
  o.gamma = 1e-4;
  o.max_iters = 100;
  o.stop_rel_tol = 0;
  const OptimizeResult r = optimize(fc, wp, o);
  ASSERT_EQ(r.state.objective_trace.size(), 101u);
  for (std::size_t i = 1; i < r.state.objective_trace.size(); ++i)
    EXPECT_LE(r.state.objective_trace[i], r.state.objective_trace[i - 1]);
  EXPECT_FALSE(r.converged);
}

TEST(Optimize, TwoPhasorOptimum) {
  const FrequencyChannel fc = scalar_channel(1.0, 1.0);
  const CVector wp = CVector::Constant(1, cplx(0, 1));
  for (Method m : {Method::gd, Method::adam}) {
    OptimizerOptions o;
    o.method = m;
    o.gamma = m == Method::gd ? 1e-2 : 5e-2;
    o.max_iters = 2000;
    o.stop_rel_tol = 1e-14;
    const OptimizeResult r = optimize(fc, wp, o);
    EXPECT_NEAR(r.theta_bar[0], -kPi / 2, 1e-3);
    EXPECT_NEAR(r.objective, -4.0, 1e-6);
  }
}

TEST(Optimize, ReturnsBestWrappedIterateAndObservesEveryIterate) {
  RandomStream s = make_stream(3, 3);
  const FrequencyChannel fc = random_fc(12, 24, s);
  const CVector wp = random_unit(12, s);
  OptimizerOptions o;
  o.max_iters = 40;
  o.stop_rel_tol = 0;
  std::size_t calls = 0;
  const OptimizeResult r = optimize(fc, wp, o, [&](std::size_t it, const RVector&, double) {
    EXPECT_EQ(it, calls);
    ++calls;
  });
  EXPECT_EQ(calls, 41u);
  const auto& tr = r.state.objective_trace;
  EXPECT_EQ(r.objective, *std::min_element(tr.begin(), tr.end()));
  EXPECT_LE(r.theta_bar.cwiseAbs().maxCoeff(), kPi);
  EXPECT_NEAR(objective(fc, apply_compensation(wp, r.theta_bar)), r.objective, 1e-9 * std::abs(r.objective));
  EXPECT_LT(r.objective, tr.front());
}

TEST(Optimize, PeriodicInTheta) {
  RandomStream s = make_stream(4, 4);
  const FrequencyChannel fc = random_fc(5, 9, s);
  const CVector wp = random_unit(5, s);
  RVector t(5);
  for (auto& x : t) x = s.uniform(-kPi, kPi);
  const RVector shifted = t + RVector::Constant(5, 2 * kPi);
  EXPECT_NEAR(objective(fc, apply_compensation(wp, t)), objective(fc, apply_compensation(wp, shifted)), 1e-10);
  EXPECT_LT((gradient(fc, wp, t) - gradient(fc, wp, shifted)).norm(), 1e-10);
}

TEST(Optimize, StopsOnRelativeWindow) {
  const FrequencyChannel fc = scalar_channel(1.0, 1.0);
  OptimizerOptions o;
  o.max_iters = 10000;
  const OptimizeResult r = optimize(fc, CVector::Constant(1, 1.0), o);  // already optimal
  EXPECT_TRUE(r.converged);
  EXPECT_EQ(r.state.iter, o.stop_window);
}

TEST(Optimize, ScaleAndValidation) {
  const FrequencyChannel fc = scalar_channel(1.0, 1.0);
  // b = 1 + 1 = 2, diag = 2 * 1 * (1 * 2) = 4
  EXPECT_NEAR(objective_scale(fc, CVector::Constant(1, 1.0), 25.0), 4.0 / 25.0, 1e-15);
  EXPECT_EQ(objective_scale(fc, CVector::Constant(1, 1.0), 0.0), 1.0);
  OptimizerOptions o;
  o.max_iters = 0;
  EXPECT_THROW(optimize(fc, CVector::Ones(1), o), std::invalid_argument);
  o = {};
  o.beta1 = 1.0;
  EXPECT_THROW(o.validate(), std::invalid_argument);
}
