#include <gtest/gtest.h>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "support/fixtures.hpp"

using namespace cyclerep;

namespace {

std::vector<std::vector<double>> parse(const std::string& s) {
  std::istringstream in(s);
  return parse_csv(in, "test.csv");
}

std::string temp_file(const std::string& name, const std::string& body) {
  const std::string path = ::testing::TempDir() + name;
  std::ofstream(path) << body;
  return path;
}

}  // namespace

TEST(ParseCsv, MatrixWithAndWithoutHeader) {
  const auto m = parse("0,1,1\n1,0,1\n1,1,0\n");
  ASSERT_EQ(m.size(), 3u);
  EXPECT_EQ(m[2][1], 1.0);
  const auto h = parse("x,y\n0.5, 2\n\n1e-3,-4\n");
  ASSERT_EQ(h.size(), 2u);
  EXPECT_EQ(h[1][0], 1e-3);
  EXPECT_EQ(h[1][1], -4.0);
}

TEST(ParseCsv, Diagnostics) {
  try {
    parse("1,2\n3,abc\n");
    FAIL();
  } catch (const ValidationError& e) {
    EXPECT_NE(std::string(e.what()).find("line 2, column 2"), std::string::npos) << e.what();
  }
  EXPECT_THROW(parse("1,2\n3\n"), ValidationError);
  EXPECT_THROW(parse("1,2\n3,inf\n"), ValidationError);
  EXPECT_THROW(parse("1,2\n3,\n"), ValidationError);
}

TEST(Ingest, DistanceMatrixFile) {
  const auto path = temp_file("eq3.csv", "0,1,1\n1,0,1\n1,1,0\n");
  const auto ds = ingest(path, InputKind::Distances);
  EXPECT_EQ(ds.distances.size(), 3u);
  const auto k = build_complex(ds, 2.0);
  EXPECT_EQ(k.size(2), 1u);
}

TEST(Ingest, AsymmetricRejectedWithPosition) {
  const auto path = temp_file("asym.csv", "0,1,1\n1,0,2\n1,1,0\n");
  try {
    ingest(path, InputKind::Distances);
    FAIL();
  } catch (const ValidationError& e) {
    const std::string msg = e.what();
    EXPECT_NE(msg.find("1"), std::string::npos);
    EXPECT_NE(msg.find("2"), std::string::npos);
  }
  const auto neg = temp_file("neg.csv", "0,-1\n-1,0\n");
  EXPECT_THROW(ingest(neg, InputKind::Distances), ValidationError);
  EXPECT_THROW(ingest(::testing::TempDir() + "missing.csv", InputKind::Points), ValidationError);
}

TEST(Ingest, UnitSquarePoints) {
  const auto path = temp_file("sq.csv", "x,y\n0,0\n1,0\n1,1\n0,1\n");
  const auto ds = ingest(path, InputKind::Points);
  ASSERT_EQ(ds.distances.size(), 4u);
  for (Index i = 0; i < 4; ++i)
    for (Index j = 0; j < 4; ++j) {
      if (i == j) continue;
      const double d = ds.distances[i][j];
      EXPECT_TRUE(d == 1.0 || d == std::sqrt(2.0)) << d;
    }
}

TEST(Ingest, DedupeIsExplicit) {
  const auto path = temp_file("dup.csv", "0,0\n1,0\n0,0\n");
  EXPECT_EQ(ingest(path, InputKind::Points).points.size(), 3u);
  EXPECT_EQ(ingest(path, InputKind::Points, true).points.size(), 2u);
  // duplicate points give zero-length edges, which the complex accepts
  const auto k = build_complex(ingest(path, InputKind::Points), std::nullopt);
  EXPECT_EQ(k.birth(1, 0), 0);
}

TEST(Generate, Deterministic) {
  GeneratorSpec s{GeneratorKind::Normal, 100, 2};
  const auto a = generate(s, 42);
  const auto b = generate(s, 42);
  EXPECT_EQ(a.points, b.points);
  EXPECT_NE(a.points, generate(s, 43).points);
}

TEST(Generate, ErdosRenyi) {
  GeneratorSpec s{GeneratorKind::ErdosRenyi, 100, 0};
  const auto ds = generate(s, 1);
  ASSERT_EQ(ds.kind, InputKind::Distances);
  Index count = 0;
  for (Index i = 0; i < 100; ++i) {
    EXPECT_EQ(ds.distances[i][i], 0.0);
    for (Index j = i + 1; j < 100; ++j) {
      EXPECT_EQ(ds.distances[i][j], ds.distances[j][i]);
      EXPECT_GT(ds.distances[i][j], 0.0);
      EXPECT_LT(ds.distances[i][j], 1.0);
      ++count;
    }
  }
  EXPECT_EQ(count, 4950u);
  EXPECT_NO_THROW(validate_distance_matrix(ds.distances));
}

TEST(Generate, SupportsAndMoments) {
  const auto ex = generate({GeneratorKind::Exponential, 100, 10}, 3);
  for (const auto& p : ex.points)
    for (double x : p) EXPECT_GT(x, 0.0);
  const auto ga = generate({GeneratorKind::Gamma, 2000, 1}, 3);
  double mean = 0;
  for (const auto& p : ga.points) {
    EXPECT_GT(p[0], 0.0);
    mean += p[0];
  }
  mean /= 2000;
  EXPECT_NEAR(mean, 2.0, 0.15);  // shape 2, scale 1
  const auto no = generate({GeneratorKind::Normal, 4000, 1}, 5);
  double m = 0, v = 0;
  for (const auto& p : no.points) m += p[0];
  m /= 4000;
  for (const auto& p : no.points) v += (p[0] - m) * (p[0] - m);
  v /= 4000;
  EXPECT_NEAR(m, 0.0, 0.06);
  EXPECT_NEAR(v, 1.0, 0.08);
  const auto lo = generate({GeneratorKind::Logistic, 4000, 1}, 6);
  double lm = 0;
  for (const auto& p : lo.points) lm += p[0];
  EXPECT_NEAR(lm / 4000, 0.0, 0.1);
}

TEST(Generate, InvalidCounts) {
  EXPECT_THROW(generate({GeneratorKind::Normal, 1, 2}, 0), ValidationError);
  EXPECT_THROW(generate({GeneratorKind::Normal, 5, 0}, 0), ValidationError);
  GeneratorSpec bad{GeneratorKind::Gamma, 5, 1, -1.0};
  EXPECT_THROW(generate(bad, 0), ValidationError);
  EXPECT_THROW(parse_generator_kind("cauchy"), ValidationError);
}

TEST(WriteCsv, RoundTripsDoubles) {
  const std::vector<std::vector<double>> rows = {{0.1, -2.5e-8}, {1.0 / 3.0, 12345.678}};
  std::ostringstream os;
  write_csv(os, rows);
  EXPECT_EQ(parse(os.str()), rows);
}
