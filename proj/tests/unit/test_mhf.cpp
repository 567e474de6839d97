#include <doctest.h>

#include <cmath>
#include <random>

#include "mhfseg/error.hpp"
#include "mhfseg/mhf.hpp"
#include "support/corpus.hpp"
#include "support/naive_mhf.hpp"

using namespace mhfseg;

namespace {

FrameMatrix column(const std::vector<double>& xs) {
  FrameMatrix X(xs.size(), 1);
  for (std::size_t t = 0; t < xs.size(); ++t) X(t, 0) = xs[t];
  return X;
}

FrameMatrix random_rows(std::mt19937_64& rng, std::size_t T, std::size_t M) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  FrameMatrix X(T, M);
  for (auto& v : X.data()) v = u(rng);
  return X;
}

MhfConfig config(Stage2Kind s2, MeasureKind m = MeasureKind::L2, std::size_t K = 4) {
  MhfConfig c;
  c.context = K;
  c.stage2 = s2;
  c.measure = m;
  return c;
}

naive::Reduce to_naive(Stage2Kind k) {
  switch (k) {
    case Stage2Kind::Min: return naive::Reduce::Min;
    case Stage2Kind::Max: return naive::Reduce::Max;
    case Stage2Kind::Median: return naive::Reduce::Median;
    case Stage2Kind::Mean: return naive::Reduce::Mean;
  }
  return naive::Reduce::Min;
}

naive::Measure to_naive(MeasureKind k) {
  switch (k) {
    case MeasureKind::L1: return naive::Measure::L1;
    case MeasureKind::L2: return naive::Measure::L2;
    case MeasureKind::Linf: return naive::Measure::Linf;
    case MeasureKind::Cosine: return naive::Measure::Cosine;
    case MeasureKind::Canberra: return naive::Measure::Canberra;
    case MeasureKind::Tanimoto: return naive::Measure::Tanimoto;
    case MeasureKind::PinvEnergy: return naive::Measure::Pinv;
  }
  return naive::Measure::L2;
}

const Stage2Kind kStage2[] = {Stage2Kind::Min, Stage2Kind::Max, Stage2Kind::Median, Stage2Kind::Mean};
const MeasureKind kMeasures[] = {MeasureKind::L1,     MeasureKind::L2,       MeasureKind::Linf,
                                 MeasureKind::Cosine, MeasureKind::Canberra, MeasureKind::Tanimoto};

}  // namespace

TEST_CASE("config validation and names") {
  CHECK_NOTHROW(MhfConfig{}.validate());
  MhfConfig bad;
  bad.context = 0;
  CHECK_THROWS_AS(bad.validate(), Error);
  bad = MhfConfig{};
  bad.measure = MeasureKind::PinvEnergy;
  CHECK_THROWS_AS(bad.validate(), Error);
  for (auto k : kStage2) CHECK(parse_stage2(to_string(k)) == k);
  CHECK(parse_stage1("median") == Stage1Kind::Median);
  CHECK_FALSE(parse_stage2("mode").has_value());
}

TEST_CASE("context averages") {
  const auto X = column({0, 1, 2, 3, 4, 5, 6, 7, 8});
  const auto c = context_averages(X, 4, 2, Stage1Kind::Mean);
  CHECK(c.left[0][0] == 3.5);
  CHECK(c.left[1][0] == 3.0);
  CHECK(c.right[0][0] == 4.5);
  CHECK(c.right[1][0] == 5.0);

  const auto ex = context_averages(X, 4, 2, Stage1Kind::Mean, true);
  CHECK(ex.left[0][0] == 3.0);
  CHECK(ex.left[1][0] == 2.5);
  CHECK(ex.right[0][0] == 5.0);
  CHECK(ex.right[1][0] == 5.5);

  const auto X2 = column({0, 0, 9, 1, 2, 0, 0, 0, 0});
  const auto med = context_averages(X2, 4, 2, Stage1Kind::Median);
  CHECK(med.left[0][0] == 1.5);  // {1, 2}
  CHECK(med.left[1][0] == 2.0);  // {9, 1, 2}
  CHECK(med.right[1][0] == 0.0);

  for (std::size_t t : {std::size_t{1}, std::size_t{7}}) {
    try {
      context_averages(X, t, 2, Stage1Kind::Mean);
      FAIL("edge frame accepted");
    } catch (const Error& e) {
      CHECK(e.kind() == ErrorKind::IndexOutOfValidRange);
    }
  }
}

TEST_CASE("difference vector on a unit step") {
  const auto X = corpus::step_rows(12, 6, {0.0}, {1.0});
  const auto D = difference_vector(context_averages(X, 6, 4, Stage1Kind::Mean), MeasureKind::L2);
  const std::vector<double> expect{1.0 / 2, 2.0 / 3, 3.0 / 4, 4.0 / 5, 4.0 / 5, 4.0 / 5, 4.0 / 5};
  REQUIRE(D.size() == 7);
  for (std::size_t i = 0; i < 7; ++i) CHECK(D[i] == doctest::Approx(expect[i]).epsilon(1e-15));
}

TEST_CASE("stage2 reductions") {
  const std::vector<double> d{3, 1, 1, 2};
  CHECK(stage2(d, Stage2Kind::Min).value == 1.0);
  CHECK(stage2(d, Stage2Kind::Min).index == 2);
  CHECK(stage2(d, Stage2Kind::Max).value == 3.0);
  CHECK(stage2(d, Stage2Kind::Max).index == 1);
  CHECK(stage2(d, Stage2Kind::Median).value == 1.5);
  CHECK(stage2(d, Stage2Kind::Median).index == 0);
  CHECK(stage2(d, Stage2Kind::Mean).value == 1.75);
  CHECK(stage2(std::vector<double>{5, 5, 5}, Stage2Kind::Max).index == 1);
  CHECK(stage2(std::vector<double>{7, 2, 9}, Stage2Kind::Median).value == 7.0);
  try {
    stage2(std::vector<double>{}, Stage2Kind::Min);
    FAIL("empty input accepted");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::EmptyInput);
  }
}

TEST_CASE("step response is exact") {
  const std::size_t T = 30, t0 = 15;
  const auto X = corpus::step_rows(T, t0, {0.0}, {1.0});

  const auto mn = variation_function(X, config(Stage2Kind::Min));
  for (std::size_t t = 0; t < T; ++t) {
    const double expect = (t == t0 - 1 || t == t0) ? 0.5 : 0.0;
    CHECK(mn.values[t] == doctest::Approx(expect).epsilon(1e-15));
  }
  CHECK(mn.argmin_index[t0] == 1);
  CHECK(mn.argmin_index[t0 - 1] == 5);

  const auto mx = variation_function(X, config(Stage2Kind::Max));
  const double ramp[] = {0.2, 0.4, 0.6, 0.8, 0.8, 0.6, 0.4, 0.2};
  for (std::size_t t = 0; t < T; ++t) {
    const bool inside = t + 4 >= t0 && t < t0 + 4;
    const double expect = inside ? ramp[t + 4 - t0] : 0.0;
    CHECK(mx.values[t] == doctest::Approx(expect).epsilon(1e-14));
    if (inside) CHECK(mx.argmin_index[t] == (t < t0 ? 1u : 4u));
  }
}

TEST_CASE("edge frames and minimum length") {
  std::mt19937_64 rng(1);
  const auto X = random_rows(rng, 9, 3);
  const auto tr = variation_function(X, config(Stage2Kind::Min));
  CHECK(tr.first_valid() == 4);
  CHECK(tr.last_valid() == 4);
  for (std::size_t t : {0, 1, 2, 3, 5, 6, 7, 8}) {
    CHECK(tr.values[t] == 0.0);
    CHECK(tr.argmin_index[t] == 0);
    CHECK(tr.energy[t] == kEnergyBaseline);
  }
  try {
    variation_function(random_rows(rng, 8, 3), config(Stage2Kind::Min));
    FAIL("T = 2K accepted");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::TooFewFrames);
  }
}

TEST_CASE("matches the reference filter on random input") {
  std::mt19937_64 rng(99);
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t K = 1 + trial % 4;
    const std::size_t T = 2 * K + 1 + trial % 6;
    const auto X = random_rows(rng, T, 1 + trial % 3);
    const auto rows = corpus::to_rows(X);
    for (bool median1 : {false, true}) {
      for (bool excl : {false, true}) {
        for (auto s2 : kStage2) {
          for (auto m : kMeasures) {
            auto cfg = config(s2, m, K);
            cfg.stage1 = median1 ? Stage1Kind::Median : Stage1Kind::Mean;
            cfg.exclude_center = excl;
            const auto tr = variation_function(X, cfg);
            for (std::size_t t = K; t + K < T; ++t) {
              const auto ref = naive::mhf_frame(rows, t, K, median1, to_naive(s2), to_naive(m), excl);
              CHECK(std::abs(tr.values[t] - ref.value) <= 1e-12);
              if (s2 == Stage2Kind::Min || s2 == Stage2Kind::Max) {
                REQUIRE(tr.argmin_index[t] >= 1);
                REQUIRE(tr.argmin_index[t] <= 2 * K - 1);
                CHECK(std::abs(ref.D[tr.argmin_index[t] - 1] - ref.value) <= 1e-12);
              }
            }
          }
        }
      }
    }
  }
}

TEST_CASE("energy trace matches the reference filter") {
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 100; ++trial) {
    const auto X = random_rows(rng, 14, 4);
    const auto rows = corpus::to_rows(X);
    auto cfg = config(kStage2[trial % 4]);
    cfg.energy_exclude_center = trial % 2 == 0;
    const auto e = energy_trace(X, cfg);
    for (std::size_t t = 4; t < 10; ++t) {
      const auto ref = naive::mhf_frame(rows, t, 4, false, to_naive(cfg.stage2), naive::Measure::Pinv,
                                        cfg.energy_exclude_center);
      CHECK(e[t] == doctest::Approx(ref.value).epsilon(1e-12));
    }
  }
}

TEST_CASE("ordered reductions nest") {
  std::mt19937_64 rng(7);
  for (int trial = 0; trial < 200; ++trial) {
    const auto X = random_rows(rng, 20, 3);
    const auto m = kMeasures[trial % 6];
    const auto lo = variation_function(X, config(Stage2Kind::Min, m));
    const auto med = variation_function(X, config(Stage2Kind::Median, m));
    const auto mean = variation_function(X, config(Stage2Kind::Mean, m));
    const auto hi = variation_function(X, config(Stage2Kind::Max, m));
    for (std::size_t t = 0; t < 20; ++t) {
      CHECK(lo.values[t] <= med.values[t]);
      CHECK(med.values[t] <= hi.values[t]);
      CHECK(lo.values[t] <= mean.values[t] + 1e-15);
      CHECK(mean.values[t] <= hi.values[t] + 1e-15);
    }
  }
}

TEST_CASE("max trace support contains min trace support") {
  std::mt19937_64 rng(8);
  for (int trial = 0; trial < 100; ++trial) {
    const std::size_t t0 = 8 + trial % 10;
    const auto X = corpus::step_rows(30, t0, corpus::to_rows(random_rows(rng, 1, 5))[0],
                                     corpus::to_rows(random_rows(rng, 1, 5))[0]);
    const auto lo = variation_function(X, config(Stage2Kind::Min));
    const auto hi = variation_function(X, config(Stage2Kind::Max));
    std::size_t lo_support = 0, hi_support = 0;
    for (std::size_t t = 0; t < 30; ++t) {
      if (lo.values[t] > 1e-12) {
        ++lo_support;
        CHECK(hi.values[t] > 1e-12);
      }
      if (hi.values[t] > 1e-12) ++hi_support;
    }
    CHECK(lo_support == 2);
    CHECK(hi_support == 8);
  }
}

TEST_CASE("time shift equivariance") {
  std::mt19937_64 rng(9);
  const auto X = random_rows(rng, 25, 4);
  for (std::size_t s : {1, 3, 7}) {
    FrameMatrix Y(25 + s, 4);
    const auto pad = random_rows(rng, s, 4);
    for (std::size_t t = 0; t < s; ++t) {
      for (std::size_t m = 0; m < 4; ++m) Y(t, m) = pad(t, m);
    }
    for (std::size_t t = 0; t < 25; ++t) {
      for (std::size_t m = 0; m < 4; ++m) Y(t + s, m) = X(t, m);
    }
    for (auto s2 : kStage2) {
      const auto a = variation_function(X, config(s2));
      const auto b = variation_function(Y, config(s2));
      for (std::size_t t = 4; t + 4 < 25; ++t) {
        CHECK(b.values[t + s] == a.values[t]);
        CHECK(b.argmin_index[t + s] == a.argmin_index[t]);
        CHECK(b.energy[t + s] == a.energy[t]);
      }
    }
  }
}

TEST_CASE("scaling behaviour") {
  std::mt19937_64 rng(10);
  const auto X = random_rows(rng, 20, 5);
  for (double c : {0.25, 3.0, 1000.0}) {
    FrameMatrix Y(X);
    for (auto& v : Y.data()) v *= c;
    for (auto m : kMeasures) {
      const auto a = variation_function(X, config(Stage2Kind::Min, m));
      const auto b = variation_function(Y, config(Stage2Kind::Min, m));
      const bool homogeneous = m == MeasureKind::L1 || m == MeasureKind::L2 || m == MeasureKind::Linf;
      for (std::size_t t = 4; t < 16; ++t) {
        const double expect = homogeneous ? c * a.values[t] : a.values[t];
        CHECK(std::abs(b.values[t] - expect) <= 1e-12 * std::max(1.0, std::abs(expect)));
        CHECK(b.energy[t] == doctest::Approx(a.energy[t]).epsilon(1e-12));
      }
    }
  }
}

TEST_CASE("stationary input gives zero variation and baseline energy") {
  FrameMatrix X(15, 3);
  for (std::size_t t = 0; t < 15; ++t) {
    X(t, 0) = 0.3;
    X(t, 1) = 1.7;
    X(t, 2) = 0.01;
  }
  for (auto s2 : kStage2) {
    for (auto m : kMeasures) {
      for (bool median1 : {false, true}) {
        auto cfg = config(s2, m);
        cfg.stage1 = median1 ? Stage1Kind::Median : Stage1Kind::Mean;
        const auto tr = variation_function(X, cfg);
        for (std::size_t t = 0; t < 15; ++t) {
          CHECK(tr.values[t] == 0.0);
          CHECK(tr.energy[t] == 2.0);
        }
      }
    }
  }
  const auto silent = variation_function(FrameMatrix(15, 3), config(Stage2Kind::Min));
  for (double e : silent.energy) CHECK(e == 2.0);
}

TEST_CASE("energy on an amplitude step") {
  const std::size_t t0 = 12;
  const auto X = corpus::step_rows(25, t0, {1.0, 0.5}, {2.0, 1.0});
  const auto e = energy_trace(X, config(Stage2Kind::Min));
  CHECK(e[t0 - 1] == 2.5);
  CHECK(e[t0] == 2.5);
  for (double v : e) {
    CHECK(v >= 2.0 - 1e-12);
    CHECK(v <= 2.5);
  }

  auto incl = config(Stage2Kind::Min);
  incl.energy_exclude_center = false;
  const auto ei = energy_trace(X, incl);
  for (double v : ei) CHECK(v < 2.5);
}

TEST_CASE("window usage") {
  const auto X = corpus::step_rows(30, 15, {0.0}, {1.0});
  const auto mn = variation_function(X, config(Stage2Kind::Min));
  const auto u = window_usage(mn, 0.1);
  CHECK(u.frames_counted == 2);
  REQUIRE(u.percent.size() == 7);
  CHECK(u.percent[0] == 50.0);
  CHECK(u.percent[4] == 50.0);

  const auto mx = variation_function(X, config(Stage2Kind::Max));
  const auto w = window_usage(mx, 0.1);
  CHECK(w.frames_counted == 8);
  CHECK(w.percent[0] == 50.0);
  CHECK(w.percent[3] == 50.0);
  CHECK(window_usage(mx, 0.5).frames_counted == 4);

  const auto none = window_usage(mx, 5.0);
  CHECK(none.empty());
  for (double p : none.percent) CHECK(p == 0.0);

  std::mt19937_64 rng(3);
  const auto tr = variation_function(random_rows(rng, 40, 4), config(Stage2Kind::Min));
  const auto r = window_usage(tr, 0.0);
  CHECK(r.frames_counted == 32);
  double total = 0.0;
  for (double p : r.percent) total += p;
  CHECK(total == doctest::Approx(100.0));
}
