#include <bit>
#include <cmath>
#include <cstdint>
#include <vector>

#include <gtest/gtest.h>

#include "tdrk/catalog.hpp"
#include "tdrk/errors.hpp"
#include "tdrk/harness.hpp"
#include "tdrk/integrator.hpp"
#include "tdrk/problems.hpp"

using namespace tdrk;

namespace {

using Mat = std::vector<std::vector<long double>>;

Mat matmul(const Mat& a, const Mat& b) {
  const std::size_t n = a.size();
  Mat c(n, std::vector<long double>(n, 0.0L));
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t l = 0; l < n; ++l) {
      for (std::size_t j = 0; j < n; ++j) c[i][j] += a[i][l] * b[l][j];
    }
  }
  return c;
}

// Plain binary64 TDRK step for linear advection in the stepper's operation order.
std::vector<double> plain_step(const TdrkTableau& t, const std::vector<double>& d1, std::size_t n, double dt,
                               const std::vector<double>& u) {
  std::vector<double> d2(n * n);
  for (std::size_t j = 0; j < n; ++j) {
    for (std::size_t k = 0; k < n; ++k) {
      double acc = 0.0;
      for (std::size_t l = 0; l < n; ++l) acc = acc + d1[j * n + l] * d1[l * n + k];
      d2[j * n + k] = acc;
    }
  }
  auto matvec = [&](const std::vector<double>& m, const std::vector<double>& v) {
    std::vector<double> out(n);
    for (std::size_t j = 0; j < n; ++j) {
      double acc = 0.0;
      for (std::size_t k = 0; k < n; ++k) acc = acc + m[j * n + k] * v[k];
      out[j] = acc;
    }
    return out;
  };
  const std::size_t s = t.stages();
  const double dt2 = dt * dt;
  std::vector<std::vector<double>> f(s), fd(s);
  auto combine = [&](auto coef_a, auto coef_ad, std::size_t upto) {
    std::vector<double> y = u;
    for (std::size_t j = 0; j < upto; ++j) {
      const double a = coef_a(j), ad = coef_ad(j);
      if (a != 0.0) {
        for (std::size_t i = 0; i < n; ++i) y[i] = y[i] + a * f[j][i];
      }
      if (ad != 0.0) {
        for (std::size_t i = 0; i < n; ++i) y[i] = y[i] + ad * fd[j][i];
      }
    }
    return y;
  };
  for (std::size_t i = 0; i < s; ++i) {
    const auto y = combine([&](std::size_t j) { return to_double(t.a()[i][j]) * dt; },
                           [&](std::size_t j) { return to_double(t.adot()[i][j]) * dt2; }, i);
    f[i] = matvec(d1, y);
    for (auto& v : f[i]) v = -1.0 * v;
    fd[i] = matvec(d2, y);
    for (auto& v : fd[i]) v = 1.0 * v;
  }
  return combine([&](std::size_t j) { return to_double(t.b()[j]) * dt; },
                 [&](std::size_t j) { return to_double(t.bdot()[j]) * dt2; }, s);
}

double run_error(const std::string& method, std::size_t nx, double dt, Format high, Format low) {
  const auto p = make_problem({"advection", nx, high, low, Implementation::Impl1, 1.0});
  const auto traj = integrate({dt, 0.5, &get_method(method), p.get()});
  if (traj.diverged) return INFINITY;
  return max_abs_diff(traj.final_state, *p->exact_solution(0.5));
}

}  // namespace

TEST(Integrator, StepCount) {
  EXPECT_EQ(step_count(0.1, 0.5), 5);
  EXPECT_EQ(step_count(2.5e-2, 0.5), 20);
  EXPECT_EQ(step_count(1e-4, 0.5), 5000);
  EXPECT_EQ(step_count(0.1, 0.0), 0);
  EXPECT_THROW(step_count(0.3, 0.5), ConfigError);
  EXPECT_THROW(step_count(0.0, 0.5), ConfigError);
  EXPECT_THROW(step_count(-0.1, 0.5), ConfigError);
  EXPECT_THROW(step_count(1.0, 0.5), ConfigError);
}

TEST(Integrator, ZeroStepIsIdentity) {
  const auto p = make_problem({"advection", 16, Format::B64, Format::B16, Implementation::Impl1, 1.0});
  const SimVector u = p->initial_condition();
  for (const auto& card : list_methods()) {
    const auto next = tdrk_step(u, {0.0, 0.5, &card, p.get()});
    ASSERT_TRUE(next.has_value());
    EXPECT_EQ(*next, u) << card.name;
  }
  EXPECT_EQ(ssp33_step(*p, u, 0.0, Format::B64), u);
}

TEST(Integrator, TaylorPolynomialOracle) {
  const std::size_t n = 20;
  const double dt = 0.05;
  const auto p = make_problem({"advection", n, Format::B64, Format::B64, Implementation::Impl1, 1.0});
  const auto d1 = fourier_d1(n, Format::B64);
  Mat l(n, std::vector<long double>(n));
  for (std::size_t j = 0; j < n; ++j) {
    for (std::size_t k = 0; k < n; ++k) l[j][k] = -dt * static_cast<long double>(d1->at(j, k).to_double());
  }
  Mat term(n, std::vector<long double>(n, 0.0L)), sum(n, std::vector<long double>(n, 0.0L));
  for (std::size_t i = 0; i < n; ++i) term[i][i] = sum[i][i] = 1.0L;
  for (int k = 1; k <= 4; ++k) {
    term = matmul(term, l);
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < n; ++j) sum[i][j] += term[i][j] / std::tgamma(k + 1.0L);
    }
  }
  const SimVector u = p->initial_condition();
  const auto next = tdrk_step(u, {dt, 0.5, &get_method("TDRK2s4p1e"), p.get()});
  ASSERT_TRUE(next.has_value());
  double err = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    long double want = 0.0L;
    for (std::size_t j = 0; j < n; ++j) want += sum[i][j] * u[j].to_double();
    err = std::max(err, static_cast<double>(std::fabs(want - (*next)[i].to_double())));
  }
  EXPECT_LE(err, 1e-12);
}

TEST(Integrator, ScalarAmplification) {
  const double lambda = -3.0, dt = 0.2, z = lambda * dt;
  ScalarLinear p(lambda, Format::B64, Format::B64);
  const auto next = tdrk_step(p.initial_condition(), {dt, dt, &get_method("TDRK2s3p1e"), &p});
  const double want = 1 + z + z * z / 2 + z * z * z / 6 + z * z * z * z / 12;
  EXPECT_NEAR((*next)[0].to_double(), want, 1e-15);

  ScalarLinear growth(1.0, Format::B64, Format::B64);
  const double h = 0.1;
  const SimVector s = ssp33_step(growth, growth.initial_condition(), h, Format::B64);
  EXPECT_NEAR(s[0].to_double(), 1 + h + h * h / 2 + h * h * h / 6, 1e-15);
}

TEST(Integrator, MixedEqualsPlainAtFullPrecision) {
  const std::size_t n = 16;
  const double dt = 0.025;
  const auto p = make_problem({"advection", n, Format::B64, Format::B64, Implementation::Impl1, 1.0});
  std::vector<double> d1(n * n);
  for (std::size_t i = 0; i < n * n; ++i) d1[i] = fourier_d1(n, Format::B64)->entries()[i].to_double();
  const SimVector u = p->initial_condition();
  for (const auto& card : list_methods()) {
    const auto got = tdrk_step(u, {dt, 0.5, &card, p.get()});
    const auto want = plain_step(card.tableau, d1, n, dt, u.to_doubles());
    for (std::size_t i = 0; i < n; ++i) {
      ASSERT_EQ(std::bit_cast<std::uint64_t>((*got)[i].to_double()), std::bit_cast<std::uint64_t>(want[i]))
          << card.name << " i=" << i;
    }
  }
}

TEST(Integrator, Deterministic) {
  const auto p = make_problem({"burgers", 24, Format::B64, Format::B16, Implementation::Impl1, 1.0});
  const StepConfig cfg{0.01, 0.5, &get_method("TDRK3s4p2e"), p.get()};
  const auto a = integrate(cfg);
  const auto b = integrate(cfg);
  EXPECT_EQ(a.final_state, b.final_state);
  EXPECT_EQ(a.steps_taken, 50);
  EXPECT_FALSE(a.diverged);
}

TEST(Integrator, DivergenceIsData) {
  const auto mid = make_problem({"advection", 100, Format::B64, Format::B32, Implementation::Impl1, 1.0});
  const auto t32 = integrate({0.1, 0.5, &get_method("TDRK2s3p1e"), mid.get()});
  EXPECT_FALSE(t32.diverged);
  EXPECT_GT(max_abs_diff(t32.final_state, *mid->exact_solution(0.5)), 1e6);

  const auto low = make_problem({"advection", 100, Format::B64, Format::B16, Implementation::Impl1, 1.0});
  const auto t16 = integrate({0.1, 0.5, &get_method("TDRK2s3p1e"), low.get()});
  EXPECT_TRUE(t16.diverged);
  EXPECT_LT(t16.steps_taken, 5);
  EXPECT_TRUE(t16.final_state.all_finite());
}

TEST(Integrator, FullPrecisionOrders) {
  const std::vector<double> dts{0.1, 0.05, 0.025, 0.02, 0.01};
  for (const auto& card : list_methods()) {
    std::vector<OrderPoint> pts;
    for (double dt : dts) pts.push_back({dt, run_error(card.name, 25, dt, Format::B64, Format::B64)});
    const double slope = *estimate_order(pts);
    // Fifth order in general, sixth order on linear problems.
    const double p = card.name == "TDRK3s5p1e" ? 6.0 : card.claimed_p;
    EXPECT_GE(slope, p - 0.3) << card.name;
    EXPECT_LE(slope, p + 0.7) << card.name;
  }
}

TEST(Integrator, PrecisionOrdering) {
  for (const char* m : {"TDRK2s3p1e", "TDRK2s3p2e", "TDRK3s3p3e"}) {
    for (double dt : {1e-2, 1e-3}) {
      const double e64 = run_error(m, 25, dt, Format::B64, Format::B64);
      const double e32 = run_error(m, 25, dt, Format::B64, Format::B32);
      const double e16 = run_error(m, 25, dt, Format::B64, Format::B16);
      EXPECT_GE(e16, e32) << m << " " << dt;
      EXPECT_GE(e32, e64 * 0.999) << m << " " << dt;
    }
  }
}

TEST(Integrator, Ssp33ThirdOrder) {
  const auto p = make_problem({"advection", 25, Format::B64, Format::B64, Implementation::Impl1, 1.0});
  std::vector<OrderPoint> pts;
  for (double dt : {1e-2, 5e-3, 2.5e-3}) {
    const auto t = ssp33_integrate(*p, dt, 0.5, Format::B64);
    pts.push_back({dt, max_abs_diff(t.final_state, *p->exact_solution(0.5))});
  }
  EXPECT_NEAR(*estimate_order(pts), 3.0, 0.1);
  EXPECT_THROW(ssp33_integrate(*p, 0.01, 0.5, Format::EXT), ConfigError);
}

TEST(Integrator, ZeroFinalTime) {
  const auto p = make_problem({"advection", 25, Format::B64, Format::B64, Implementation::Impl1, 1.0});
  const auto t = integrate({0.1, 0.0, &get_method("TDRK2s3p1e"), p.get()});
  EXPECT_EQ(t.steps_taken, 0);
  EXPECT_LE(max_abs_diff(t.final_state, *p->exact_solution(0.0)), 1e-16);
}
