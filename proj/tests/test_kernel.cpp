// Copyright 2026 The qoverlap Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.


#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <sstream>

#include "qoverlap/kernel/svm.hpp"

using namespace qoverlap;
using namespace qoverlap::kernel;

namespace {

KernelMatrix from_rows(std::vector<std::vector<double>> r) {
  KernelMatrix k(r.size(), r[0].size());
  for (std::size_t i = 0; i < r.size(); ++i)
    for (std::size_t j = 0; j < r[i].size(); ++j) k(i, j) = r[i][j];
  return k;
}

// Margin y_t f(x_t) using the dual threshold.
double margin(const SvmModel& m, const KernelMatrix& k, std::size_t t) {
  return m.y[t] * m.decision(k.row(t), SvmModel::Bias::Dual);
}

}  // namespace

TEST(Dataset, DeterministicAndBalanced) {
  for (auto kind : {DatasetKind::Separate, DatasetKind::Spherical, DatasetKind::Overlapping}) {
    const auto a = gen_dataset(kind, 60, 9), b = gen_dataset(kind, 60, 9), c = gen_dataset(kind, 60, 10);
    ASSERT_EQ(a.size(), 60u);
    int pos = 0;
    bool same = true, differ = false;
    for (std::size_t i = 0; i < a.size(); ++i) {
      pos += a[i].y == 1;
      same = same && a[i].x == b[i].x && a[i].y == b[i].y;
      differ = differ || a[i].x != c[i].x;
      for (double v : a[i].x) {
        EXPECT_GE(v, 0.0);
        EXPECT_LT(v, 2 * optics::pi);
      }
    }
    EXPECT_EQ(pos, 30);
    EXPECT_TRUE(same);
    EXPECT_TRUE(differ);
  }
  EXPECT_THROW(gen_dataset(DatasetKind::Separate, 7, 1), ParameterError);
  EXPECT_THROW(dataset_kind_from_string("moons"), ConfigError);
}

TEST(Dataset, CsvRoundTrip) {
  const auto d = gen_dataset(DatasetKind::Spherical, 20, 4);
  std::stringstream ss;
  write_dataset_csv(ss, d);
  const auto back = read_dataset_csv(ss);
  ASSERT_EQ(back.size(), d.size());
  for (std::size_t i = 0; i < d.size(); ++i) {
    EXPECT_EQ(back[i].x, d[i].x);
    EXPECT_EQ(back[i].y, d[i].y);
  }
  std::stringstream bad("1,2,3,0\n");
  EXPECT_THROW(read_dataset_csv(bad), ConfigError);
}

TEST(Dataset, SplitPartitions) {
  const auto d = gen_dataset(DatasetKind::Separate, 20, 1);
  const auto [tr, te] = split_dataset(d, 12, 2);
  EXPECT_EQ(tr.size(), 12u);
  EXPECT_EQ(te.size(), 8u);
  EXPECT_THROW(split_dataset(d, 21, 2), ParameterError);
}

TEST(Kernel, ExactGramProperties) {
  const auto d = gen_dataset(DatasetKind::Overlapping, 16, 2);
  const auto k = kernel_matrix(d, {});
  EXPECT_EQ(k.asymmetry(), 0.0);
  const auto amps = chip::nominal_amplitudes();
  for (std::size_t i = 0; i < d.size(); ++i) {
    EXPECT_EQ(k(i, i), 1.0);
    for (std::size_t j = 0; j < d.size(); ++j) EXPECT_NEAR(k(i, j), chip::qudit_overlap(amps, d[i].x, d[j].x), 1e-15);
  }
}

TEST(Kernel, SampledEntriesWithinHoeffdingRadius) {
  const auto d = gen_dataset(DatasetKind::Overlapping, 20, 3);
  KernelOptions o;
  o.n_shots = 1000;
  o.base_seed = 17;
  const auto k = kernel_matrix(d, o), exact = kernel_matrix(d, {});
  EXPECT_EQ(k.asymmetry(), 0.0);
  const double eps = overlap::hoeffding_radius(1000);
  std::size_t bad = 0, n = 0;
  for (std::size_t i = 0; i < d.size(); ++i)
    for (std::size_t j = i; j < d.size(); ++j, ++n) bad += std::abs(k(i, j) - exact(i, j)) > eps;
  EXPECT_LE(double(bad) / double(n), 0.1);
  EXPECT_EQ(k, kernel_matrix(d, o));
  o.jobs = 3;
  EXPECT_EQ(k, kernel_matrix(d, o));
}

TEST(Kernel, CsvRoundTrip) {
  const auto k = kernel_matrix(gen_dataset(DatasetKind::Separate, 8, 1), {});
  std::stringstream ss;
  write_kernel_csv(ss, k);
  EXPECT_EQ(read_kernel_csv(ss), k);
}

TEST(Svm, TwoPointOracle) {
  // Dual optimum for two opposite labels: beta = min(C, 1 / (1 - k)).
  for (double kij : {0.0, 0.3, 0.7}) {
    for (double C : {0.8, 10.0}) {
      const auto k = from_rows({{1, kij}, {kij, 1}});
      const auto m = svm_train(k, {1, -1}, C, {1e-12, 100000, false});
      const double beta = std::min(C, 1.0 / (1.0 - kij));
      EXPECT_NEAR(m.beta[0], beta, 1e-10);
      EXPECT_NEAR(m.beta[1], beta, 1e-10);
      EXPECT_NEAR(m.b, 0.0, 1e-12);
      EXPECT_NEAR(m.b_dual, 0.0, 1e-10);
    }
  }
}

TEST(Svm, SingleClass) {
  const auto k = from_rows({{1, 0.5, 0.2}, {0.5, 1, 0.1}, {0.2, 0.1, 1}});
  const auto m = svm_train(k, {1, 1, 1}, 0.8);
  for (double b : m.beta) EXPECT_EQ(b, 0.0);
  EXPECT_TRUE(m.support_indices.empty());
  EXPECT_EQ(m.b, 1.0);
  EXPECT_EQ(svm_predict(m, k.row(0)), 1);
}

TEST(Svm, FeasibilityKktAndMonotoneObjective) {
  const auto d = gen_dataset(DatasetKind::Overlapping, 60, 5);
  const auto k = kernel_matrix(d, {});
  const auto y = labels(d);
  const double C = 0.8;
  const auto m = svm_train(k, y, C, {1e-8, 1000000, true});
  double eq = 0.0;
  for (std::size_t t = 0; t < y.size(); ++t) {
    EXPECT_GE(m.beta[t], 0.0);
    EXPECT_LE(m.beta[t], C);
    eq += m.beta[t] * y[t];
  }
  EXPECT_NEAR(eq, 0.0, 1e-8);
  for (std::size_t t = 0; t < y.size(); ++t) {
    const double g = margin(m, k, t);
    if (m.beta[t] == 0.0) EXPECT_GE(g, 1.0 - 1e-4);
    else if (m.beta[t] == C) EXPECT_LE(g, 1.0 + 1e-4);
    else EXPECT_NEAR(g, 1.0, 1e-4);
  }
  ASSERT_GE(m.objective_history.size(), 2u);
  for (std::size_t i = 1; i < m.objective_history.size(); ++i)
    EXPECT_GE(m.objective_history[i], m.objective_history[i - 1] - 1e-12);
  EXPECT_NEAR(m.objective_history.back(), dual_objective(k, y, m.beta), 1e-12);
}

TEST(Svm, DuplicatedPointsGivePredictionsOfTheOriginal) {
  const auto d = gen_dataset(DatasetKind::Separate, 20, 8);
  auto dd = d;
  dd.insert(dd.end(), d.begin(), d.end());
  const auto q = gen_dataset(DatasetKind::Separate, 30, 9);
  const auto m1 = svm_train(kernel_matrix(d, {}), labels(d), 0.8);
  const auto m2 = svm_train(kernel_matrix(dd, {}), labels(dd), 0.8);
  EXPECT_EQ(accuracy(m1, kernel_cross(q, d, {}), labels(q)), accuracy(m2, kernel_cross(q, dd, {}), labels(q)));
}

TEST(Svm, ErrorsAndAccuracy) {
  const auto k = from_rows({{1, 0.2}, {0.2, 1}});
  const auto m = svm_train(k, {1, -1}, 1.0);
  const std::vector<double> short_row{0.5};
  EXPECT_THROW(m.decision(short_row), DimensionError);
  EXPECT_THROW(svm_train(k, {1, 0}, 1.0), ParameterError);
  EXPECT_THROW(svm_train(k, {1, -1}, 0.0), ParameterError);
  EXPECT_THROW(svm_train(from_rows({{1, 0.2}, {0.3, 1}}), {1, -1}, 1.0), ParameterError);
  EXPECT_EQ(accuracy(m, k, {1, -1}), 1.0);
}

TEST(Svm, SeparableDataClassifiedPerfectly) {
  const auto d = gen_dataset(DatasetKind::Separate, 100, 11);
  const auto [tr, te] = split_dataset(d, 50, 12);
  const auto m = svm_train(kernel_matrix(tr, {}), labels(tr), 0.8);
  EXPECT_EQ(accuracy(m, kernel_cross(te, tr, {}), labels(te)), 1.0);
}

TEST(Bootstrap, SpreadAndDeterminism) {
  const auto d = gen_dataset(DatasetKind::Separate, 40, 2);
  const auto [tr, te] = split_dataset(d, 24, 3);
  KernelOptions o;
  o.base_seed = 5;
  const auto g = kernel_tallies(tr, tr, true, 4000, o), x = kernel_tallies(te, tr, false, 4000, o);
  const double R = overlap::bunching_probability(o.amps);
  const auto b = bootstrap_accuracy(g, x, labels(tr), labels(te), R, 0.8, 6, 1000, 7);
  EXPECT_TRUE(b.std_defined);
  EXPECT_GE(b.mean, 0.9);
  EXPECT_LT(b.std, 0.1);
  const auto b2 = bootstrap_accuracy(g, x, labels(tr), labels(te), R, 0.8, 6, 1000, 7, 3);
  EXPECT_EQ(b.mean, b2.mean);
  EXPECT_EQ(b.std, b2.std);

  const auto one = bootstrap_accuracy(g, x, labels(tr), labels(te), R, 0.8, 1, 1000, 7);
  EXPECT_FALSE(one.std_defined);
  EXPECT_EQ(one.std, 0.0);
  EXPECT_THROW(bootstrap_accuracy(g, x, labels(tr), labels(te), R, 0.8, 2, 5000, 7), ParameterError);
  EXPECT_THROW(bootstrap_accuracy(g, x, labels(tr), labels(te), R, 0.8, 0, 100, 7), ParameterError);
}

TEST(Bootstrap, TalliesWithoutResamplingMatchTheKernel) {
  const auto d = gen_dataset(DatasetKind::Overlapping, 10, 6);
  KernelOptions o;
  o.base_seed = 3;
  const auto t = kernel_tallies(d, d, true, 2000, o);
  const auto k = kernel_from_tallies(t, overlap::bunching_probability(o.amps));
  EXPECT_EQ(k.asymmetry(), 0.0);
  for (std::size_t i = 0; i < d.size(); ++i)
    for (std::size_t j = i; j < d.size(); ++j)
      EXPECT_NEAR(k(i, j),
                  std::clamp(1.0 - 2.0 * (1.0 - overlap::bunching_probability(o.amps)) * t.at(i, j).n_odd / 2000.0, 0.0, 1.0),
                  1e-15);
}
