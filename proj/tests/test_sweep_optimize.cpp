#include <gtest/gtest.h>

#include <cmath>
#include <sstream>

#include "twistsense/io.hpp"
#include "twistsense/sweep_optimize.hpp"

using namespace twistsense;

TEST(Grid, EndpointsExact) {
  EXPECT_EQ(grid_point(0, 201), 0.0);
  EXPECT_EQ(grid_point(200, 201), 1.0);
  EXPECT_DOUBLE_EQ(grid_point(100, 201), 0.5);
  EXPECT_EQ(parse_engine("closed_form"), Engine::closed_form);
  EXPECT_THROW(parse_engine("gpu"), InvalidArgument);
}

TEST(Sweep, OrderingAndShape) {
  SweepSpec spec;
  spec.scheme = Scheme::B;
  spec.n_spins = 6;
  spec.twist_values = {0.4, 2.0};
  spec.t_grid = 11;
  const auto rows = sweep_curve(spec);
  ASSERT_EQ(rows.size(), 22u);
  EXPECT_EQ(rows[0].twist_strength, 0.4);
  EXPECT_EQ(rows[0].sensing_fraction, 0.0);
  EXPECT_EQ(rows[10].sensing_fraction, 1.0);
  EXPECT_EQ(rows[11].twist_strength, 2.0);
  for (const auto& r : rows) {
    EXPECT_EQ(r.method, Method::qfi);
    EXPECT_EQ(r.n_spins, std::optional<int>(6));
  }
}

TEST(Sweep, SchemeAIsFlat) {
  SweepSpec spec;
  spec.scheme = Scheme::A;
  spec.n_spins = 10;
  spec.twist_values = {0.0};
  for (const auto& r : sweep_curve(spec)) EXPECT_NEAR(r.sensitivity, 1.0, 1e-9);
}

TEST(Sweep, EchoVanishesAtEnds) {
  SweepSpec spec;
  spec.scheme = Scheme::Bprime;
  spec.n_spins = 10;
  spec.twist_values = {11.5};
  spec.t_grid = 21;
  const auto rows = sweep_curve(spec);
  EXPECT_NEAR(rows.front().sensitivity, 0.0, 1e-12);
  EXPECT_NEAR(rows.back().sensitivity, 0.0, 1e-12);
  EXPECT_EQ(rows.front().method, Method::echo);
}

TEST(Sweep, Validation) {
  SweepSpec spec;
  spec.scheme = Scheme::B;
  spec.n_spins = 4;
  EXPECT_THROW(sweep_curve(spec), InvalidArgument);
  spec.twist_values = {1.0};
  spec.t_grid = 2;
  EXPECT_THROW(sweep_curve(spec), InvalidArgument);
  spec.t_grid = 5;
  spec.engine = Engine::closed_form;
  EXPECT_THROW(sweep_curve(spec), InvalidArgument);
  spec.n_spins.reset();
  spec.engine = Engine::spin;
  EXPECT_THROW(sweep_curve(spec), InvalidArgument);
  spec.engine = Engine::closed_form;
  spec.scheme = Scheme::C;
  spec.twist_values = {0.0};
  EXPECT_THROW(sweep_curve(spec), SingularParameter);
}

TEST(Optimize, GoldenSection) {
  const auto [x, fx] = golden_section_maximize([](double s) { return -(s - 0.3) * (s - 0.3); }, 0.0, 1.0, 1e-8);
  EXPECT_NEAR(x, 0.3, 1e-7);
  EXPECT_NEAR(fx, 0.0, 1e-14);
}

TEST(Optimize, TiesGoToLargestFraction) {
  const auto r = optimize_curve([](double) { return 1.0; }, 0.0);
  EXPECT_EQ(r.t_opt, 1.0);
  EXPECT_EQ(r.boundary, Boundary::right_edge);
}

TEST(Optimize, WeakTwistSensesTheWholeTime) {
  const auto r = optimize_t(Scheme::B, 10, 0.4, Engine::spin);
  EXPECT_EQ(r.t_opt, 1.0);
  EXPECT_EQ(r.boundary, Boundary::right_edge);
  EXPECT_NEAR(r.best_sensitivity, 1.0, 1e-9);
}

TEST(Optimize, ClosedFormLocations) {
  const auto weak = optimize_t(Scheme::B, std::nullopt, 0.3, Engine::closed_form);
  EXPECT_EQ(weak.t_opt, 1.0);
  const auto strong = optimize_t(Scheme::B, std::nullopt, 2.0, Engine::closed_form);
  EXPECT_NEAR(strong.t_opt, 0.25, 1e-6);
  EXPECT_NEAR(strong.best_sensitivity, 5.0213842307969169, 1e-9);
  EXPECT_EQ(strong.boundary, Boundary::interior);
  const auto c = optimize_t(Scheme::C, std::nullopt, 1.0, Engine::closed_form);
  EXPECT_EQ(c.t_opt, 0.0);
  EXPECT_EQ(c.boundary, Boundary::left_edge);
  EXPECT_NEAR(c.best_sensitivity, 3.1945280494653251, 1e-12);
  const auto bp = optimize_t(Scheme::Bprime, std::nullopt, 8.0, Engine::closed_form);
  EXPECT_NEAR(bp.t_opt, 0.5, 1e-9);
  EXPECT_NEAR(bp.best_sensitivity, 1.0, 1e-12);
}

TEST(Optimize, ConcurrentDominatesInClosedForm) {
  for (double x : {0.1, 0.5, 1.0, 2.0, 5.0}) {
    const double c = optimize_t(Scheme::C, std::nullopt, x, Engine::closed_form).best_sensitivity;
    const double b = optimize_t(Scheme::B, std::nullopt, x, Engine::closed_form).best_sensitivity;
    EXPECT_GE(c, b) << x;
  }
}

TEST(Threshold, ClosedForm) {
  EXPECT_NEAR(find_threshold(Scheme::B, std::nullopt, Engine::closed_form, 0.0, 3.0, 1e-4), 0.5, 1e-3);
  EXPECT_NEAR(find_threshold(Scheme::Bprime, std::nullopt, Engine::closed_form, 0.0, 30.0, 1e-4), 8.0, 1e-3);
  EXPECT_NEAR(find_threshold(Scheme::Cprime, std::nullopt, Engine::closed_form, 0.0, 30.0, 1e-4), 4.0, 1e-3);
}

TEST(Threshold, SpinBprimeSmallN) {
  EXPECT_NEAR(find_threshold(Scheme::Bprime, 10, Engine::spin, 0.0, 30.0, 1e-3), 11.5, 0.5);
}

TEST(Threshold, Bracketing) {
  EXPECT_THROW(find_threshold(Scheme::Bprime, std::nullopt, Engine::closed_form, 0.0, 5.0), BracketingError);
  EXPECT_THROW(find_threshold(Scheme::Bprime, std::nullopt, Engine::closed_form, 9.0, 20.0), BracketingError);
  EXPECT_THROW(find_threshold(Scheme::A, std::nullopt, Engine::closed_form, 0.0, 5.0), BracketingError);
  EXPECT_THROW(find_threshold(Scheme::B, std::nullopt, Engine::closed_form, 2.0, 1.0), InvalidArgument);
}

TEST(Io, CsvFormat) {
  std::vector<SensitivityRecord> rows = {{Scheme::Cprime, std::nullopt, 8.0, 0.5, 1.5, Method::closed_form},
                                         {Scheme::B, 10, 0.1, 1.0 / 3.0, std::exp(1.0), Method::qfi}};
  std::ostringstream os;
  io::write_csv(os, rows, Engine::closed_form);
  EXPECT_EQ(os.str(),
            "scheme,n_spins,twist_times_tau,t_over_tau,sensitivity,method,engine\n"
            "Cprime,inf,8,0.5,1.5,closed_form,closed_form\n"
            "B,10,0.1,0.333333333333,2.71828182846,qfi,closed_form\n");
}

TEST(Io, JsonRecord) {
  const auto j = io::to_json(SensitivityRecord{Scheme::A, 3, 0.0, 1.0, 1.0, Method::qfi}, Engine::spin);
  EXPECT_EQ(j["scheme"], "A");
  EXPECT_EQ(j["n_spins"], 3);
  EXPECT_EQ(j["engine"], "spin");
  EXPECT_EQ(io::spins_json(std::nullopt), "inf");
}
