#include "ukfse/ukf.hpp"
#include "oracles.hpp"

#include <gtest/gtest.h>

using namespace ukfse;

namespace {

SystemCallbacks linear_system(const Matrix& A, const Matrix& C) {
  SystemCallbacks s;
  s.n_x = A.rows();
  s.n_y = C.rows();
  s.n_w = A.rows();
  s.n_v = C.rows();
  s.f = [A](const Vector& x, const Vector&, const Vector& w) -> Vector { return A * x + w; };
  s.g = [C](const Vector& x, const Vector&, const Vector& v) -> Vector { return C * x + v; };
  return s;
}

oracle::LinearGaussian random_model(int n_x, int n_y, std::mt19937_64& g) {
  std::normal_distribution<double> d;
  oracle::LinearGaussian m;
  m.A = Matrix(n_x, n_x);
  m.C = Matrix(n_y, n_x);
  for (int i = 0; i < n_x; ++i)
    for (int j = 0; j < n_x; ++j) m.A(i, j) = 0.4 * d(g);
  for (int i = 0; i < n_y; ++i)
    for (int j = 0; j < n_x; ++j) m.C(i, j) = d(g);
  m.Q = 0.1 * oracle::random_spd(n_x, g, 0.05);
  m.R = 0.1 * oracle::random_spd(n_y, g, 0.05);
  return m;
}

}  // namespace

TEST(SigmaPoints, HandWeightsUnitCase) {
  UkfParams p{1.0, 0.0, 2.0};
  UkfEstimate est{Vector::Zero(1), Matrix::Identity(1, 1)};
  const SigmaPointSet sp = generate_sigma_points(est, Matrix::Identity(1, 1),
                                                 Matrix::Identity(1, 1), p);
  ASSERT_EQ(sp.size(), 7);
  EXPECT_DOUBLE_EQ(p.lambda(3), 0.0);
  EXPECT_DOUBLE_EQ(sp.weights_mean(0), 0.0);
  for (int i = 1; i < 7; ++i) EXPECT_DOUBLE_EQ(sp.weights_mean(i), 1.0 / 6.0);
  for (int i = 0; i < 3; ++i) {
    EXPECT_NEAR(sp.points(i, 1 + i), std::sqrt(3.0), 1e-15);
    EXPECT_NEAR(sp.points(i, 4 + i), -std::sqrt(3.0), 1e-15);
  }
}

TEST(SigmaPoints, DefaultParametersL20) {
  UkfParams p;
  UkfEstimate est{Vector::Zero(7), Matrix::Identity(7, 7)};
  const SigmaPointSet sp =
      generate_sigma_points(est, Matrix::Identity(7, 7), Matrix::Identity(6, 6), p);
  ASSERT_EQ(sp.size(), 41);
  EXPECT_NEAR(p.lambda(20), -19.998, 1e-12);
  EXPECT_NEAR(sp.weights_mean(0), -9999.0, 1e-7);
  EXPECT_NEAR(sp.weights_mean(1), 250.0, 1e-9);
  EXPECT_NEAR(sp.weights_mean.sum(), 1.0, 1e-9);
}

TEST(SigmaPoints, ZeroSpreadCollapsesToMean) {
  Vector x(2);
  x << 1, -2;
  UkfEstimate est{x, Matrix::Zero(2, 2)};
  const SigmaPointSet sp = generate_sigma_points(est, Matrix::Zero(1, 1), Matrix::Zero(2, 2), {});
  for (Eigen::Index i = 0; i < sp.size(); ++i) {
    EXPECT_EQ(sp.x_part(i), x);
    EXPECT_TRUE(sp.w_part(i).isZero());
    EXPECT_TRUE(sp.v_part(i).isZero());
  }
}

TEST(SigmaPoints, WeightIdentitiesOverGrid) {
  for (int L = 1; L <= 41; ++L) {
    for (double gamma : {1e-3, 1e-2, 1.0}) {
      for (double kappa : {0.0, 3.0 - L}) {
        for (double beta : {0.0, 2.0}) {
          UkfParams p{gamma, kappa, beta};
          if (L + p.lambda(L) <= 0.0) continue;
          UkfEstimate est{Vector::Zero(L), Matrix::Identity(L, L)};
          const SigmaPointSet sp =
              generate_sigma_points(est, Matrix::Zero(0, 0), Matrix::Zero(0, 0), p);
          const double scale = std::abs(sp.weights_mean(0)) + 1.0;
          EXPECT_NEAR(sp.weights_mean.sum(), 1.0, 1e-12 * scale) << L << ' ' << gamma;
          EXPECT_NEAR(sp.weights_cov.sum() - sp.weights_mean.sum(), 1.0 - gamma * gamma + beta,
                      1e-12 * scale);
          // Second moment of the symmetric points reproduces the identity covariance.
          const Matrix cov = weighted_cross_covariance(sp.points, Vector::Zero(L), sp.points,
                                                       Vector::Zero(L), sp.weights_mean);
          EXPECT_LT((cov - Matrix::Identity(L, L)).cwiseAbs().maxCoeff(), 1e-9);
        }
      }
    }
  }
}

TEST(SigmaPoints, RejectsBadParameters) {
  UkfEstimate est{Vector::Zero(2), Matrix::Identity(2, 2)};
  EXPECT_THROW(generate_sigma_points(est, Matrix::Zero(0, 0), Matrix::Zero(0, 0), {0.0, 0, 2}),
               NumericalError);
  EXPECT_THROW(generate_sigma_points(est, Matrix::Zero(0, 0), Matrix::Zero(0, 0), {1.0, -2, 2}),
               NumericalError);
  UkfEstimate bad{Vector::Zero(2), Matrix::Identity(3, 3)};
  EXPECT_THROW(generate_sigma_points(bad, Matrix::Zero(0, 0), Matrix::Zero(0, 0), {}),
               NumericalError);
}

TEST(TimeUpdate, IdentityDynamics) {
  std::mt19937_64 g(1);
  UkfEstimate est{Vector::LinSpaced(3, 1, 3), oracle::random_spd(3, g)};
  SystemCallbacks s;
  s.n_x = 3;
  s.n_y = 1;
  s.f = [](const Vector& x, const Vector&, const Vector&) -> Vector { return x; };
  s.g = [](const Vector& x, const Vector&, const Vector&) -> Vector { return x.head(1); };
  const Prediction pr =
      time_update(generate_sigma_points(est, Matrix::Zero(0, 0), Matrix::Zero(0, 0), {}), s, {});
  EXPECT_LT((pr.x_pred - est.x).cwiseAbs().maxCoeff(), 1e-10);
  EXPECT_LT((pr.P_pred - est.P).cwiseAbs().maxCoeff(), 1e-10);
}

TEST(TimeUpdate, AffineMapExact) {
  std::mt19937_64 g(2);
  for (double gamma : {1e-2, 1.0}) {
    const Matrix A = Matrix::Random(3, 3);
    const Vector b = Vector::Random(3);
    UkfEstimate est{Vector::Random(3), oracle::random_spd(3, g)};
    SystemCallbacks s;
    s.n_x = 3;
    s.n_y = 2;
    s.f = [&](const Vector& x, const Vector&, const Vector&) -> Vector { return A * x + b; };
    s.g = [](const Vector& x, const Vector&, const Vector&) -> Vector { return x.head(2); };
    const Prediction pr = time_update(
        generate_sigma_points(est, Matrix::Zero(0, 0), Matrix::Zero(0, 0), {gamma, 0, 2}), s, {});
    EXPECT_LT((pr.x_pred - (A * est.x + b)).cwiseAbs().maxCoeff(), 1e-9);
    EXPECT_LT((pr.P_pred - A * est.P * A.transpose()).cwiseAbs().maxCoeff(), 1e-9);
  }
}

TEST(TimeUpdate, ClassicThreePointSecondMoment) {
  UkfEstimate est{Vector::Zero(1), Matrix::Identity(1, 1)};
  SystemCallbacks s;
  s.n_x = 1;
  s.n_y = 1;
  s.f = [](const Vector& x, const Vector&, const Vector&) -> Vector { return x.cwiseAbs2(); };
  s.g = [](const Vector& x, const Vector&, const Vector&) -> Vector { return x; };
  const Prediction pr = time_update(
      generate_sigma_points(est, Matrix::Zero(0, 0), Matrix::Zero(0, 0), {1.0, 2.0, 0.0}), s, {});
  EXPECT_NEAR(pr.x_pred(0), 1.0, 1e-14);
}

TEST(TimeUpdate, ReportsNonFiniteSigmaPoint) {
  UkfEstimate est{Vector::Zero(1), Matrix::Identity(1, 1)};
  SystemCallbacks s;
  s.n_x = 1;
  s.n_y = 1;
  s.f = [](const Vector& x, const Vector&, const Vector&) -> Vector {
    return x(0) > 0 ? Vector::Constant(1, NAN) : x;
  };
  s.g = [](const Vector& x, const Vector&, const Vector&) -> Vector { return x; };
  const auto sp = generate_sigma_points(est, Matrix::Zero(0, 0), Matrix::Zero(0, 0), {});
  try {
    time_update(sp, s, {});
    FAIL();
  } catch (const NumericalError& e) {
    EXPECT_NE(std::string(e.what()).find("sigma point 1"), std::string::npos);
  }
}

TEST(MeasurementUpdate, ZeroInnovationKeepsPrediction) {
  std::mt19937_64 g(4);
  const auto m = random_model(3, 2, g);
  const SystemCallbacks s = linear_system(m.A, m.C);
  UkfEstimate est{Vector::Random(3), oracle::random_spd(3, g)};
  const Prediction pr = time_update(generate_sigma_points(est, m.Q, m.R, {}), s, {});
  const UkfEstimate post = measurement_update(pr, pr.y_pred);
  EXPECT_EQ(post.x, pr.x_pred);
}

TEST(MeasurementUpdate, UncorrelatedGivesZeroGain) {
  // y depends only on the measurement noise.
  SystemCallbacks s;
  s.n_x = 2;
  s.n_y = 1;
  s.n_v = 1;
  s.f = [](const Vector& x, const Vector&, const Vector&) -> Vector { return x; };
  s.g = [](const Vector&, const Vector&, const Vector& v) -> Vector { return v; };
  UkfEstimate est{Vector::Ones(2), Matrix::Identity(2, 2)};
  const Prediction pr =
      time_update(generate_sigma_points(est, Matrix::Zero(0, 0), Matrix::Identity(1, 1), {}), s, {});
  const UkfEstimate post = measurement_update(pr, Vector::Constant(1, 5.0));
  EXPECT_LT((post.x - pr.x_pred).cwiseAbs().maxCoeff(), 1e-9);
  EXPECT_LT((post.P - pr.P_pred).cwiseAbs().maxCoeff(), 1e-9);
}

TEST(MeasurementUpdate, SingularInnovationThrows) {
  SystemCallbacks s;
  s.n_x = 1;
  s.n_y = 1;
  s.f = [](const Vector& x, const Vector&, const Vector&) -> Vector { return x; };
  s.g = [](const Vector&, const Vector&, const Vector&) -> Vector { return Vector::Zero(1); };
  UkfEstimate est{Vector::Zero(1), Matrix::Identity(1, 1)};
  const Prediction pr =
      time_update(generate_sigma_points(est, Matrix::Zero(0, 0), Matrix::Zero(0, 0), {}), s, {});
  EXPECT_THROW(measurement_update(pr, Vector::Zero(1)), NumericalError);
  EXPECT_THROW(measurement_update(pr, Vector::Zero(2)), NumericalError);
}

TEST(UkfStep, MatchesKalmanFilterOneStep) {
  std::mt19937_64 g(5);
  for (int n_x = 1; n_x <= 4; ++n_x) {
    const auto m = random_model(n_x, 2, g);
    UkfEstimate est{Vector::Random(n_x), oracle::random_spd(n_x, g)};
    const Vector y = Vector::Random(2);
    const UkfEstimate u = ukf_step(est, linear_system(m.A, m.C), {}, y, m.Q, m.R, {});
    const oracle::KalmanState k = oracle::kalman_step({est.x, est.P}, m, y);
    EXPECT_LT((u.x - k.x).cwiseAbs().maxCoeff(), 1e-8);
    EXPECT_LT((u.P - k.P).cwiseAbs().maxCoeff(), 1e-8);
  }
}

TEST(UkfStep, RiccatiTraceOver200Steps) {
  std::mt19937_64 g(6);
  const auto m = random_model(3, 2, g);
  const SystemCallbacks s = linear_system(m.A, m.C);
  UkfEstimate est{Vector::Zero(3), 5.0 * Matrix::Identity(3, 3)};
  Matrix P = est.P;
  for (int k = 0; k < 200; ++k) {
    est = ukf_step(est, s, {}, Vector::Zero(2), m.Q, m.R, {1.0, 0.0, 2.0});
    const Matrix Pp = m.A * P * m.A.transpose() + m.Q;
    const Matrix S = m.C * Pp * m.C.transpose() + m.R;
    P = Pp - Pp * m.C.transpose() * S.inverse() * m.C * Pp;
    EXPECT_NEAR(est.P.trace(), P.trace(), 1e-6) << "step " << k;
  }
}

TEST(UkfStep, NoiseFreeErrorNonIncreasing) {
  const double c = std::cos(0.3), s = std::sin(0.3);
  Matrix A(2, 2);
  A << 0.9 * c, -0.9 * s, 0.9 * s, 0.9 * c;
  const Matrix C = Matrix::Identity(2, 2);
  const SystemCallbacks sys = linear_system(A, C);
  Vector x_true(2);
  x_true << 1.0, -0.5;
  UkfEstimate est{Vector::Zero(2), Matrix::Identity(2, 2)};
  double prev = (est.x - x_true).norm();
  for (int k = 0; k < 50; ++k) {
    x_true = A * x_true;
    est = ukf_step(est, sys, {}, C * x_true, Matrix::Zero(2, 2), 1e-10 * Matrix::Identity(2, 2),
                   {});
    const double err = (est.x - x_true).norm();
    EXPECT_LE(err, prev + 1e-12) << "step " << k;
    prev = err;
  }
}
