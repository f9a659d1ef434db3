#include <gtest/gtest.h>

#include <numbers>

#include "fracp/domain.hpp"
#include "fracp/error.hpp"
#include "helpers.hpp"

using namespace fracp;
using fracp::testing::intervals;

TEST(Lattice, UnitIntervalCellCenters) {
  const Params p{0.5, 2.0, 1};
  const auto dom = build_lattice(intervals({{0.0, 1.0}}), 0.25, p);
  ASSERT_EQ(dom.size(), 4u);
  const double expected[] = {0.125, 0.375, 0.625, 0.875};
  for (std::size_t i = 0; i < 4; ++i) EXPECT_DOUBLE_EQ(dom.coordinate(i)[0], expected[i]);
  EXPECT_EQ(connected_components(dom), 1);
  EXPECT_DOUBLE_EQ(measure(dom), 1.0);
}

TEST(Lattice, TwoDisjointIntervals) {
  const Params p{0.5, 2.0, 1};
  const auto dom = build_lattice(intervals({{0.0, 1.0}, {2.0, 3.0}}), 0.25, p);
  ASSERT_EQ(dom.size(), 8u);
  EXPECT_EQ(connected_components(dom), 2);
  EXPECT_DOUBLE_EQ(measure(dom), 2.0);
  int first = 0;
  for (int id : dom.component_ids()) first += id == dom.component_ids()[0] ? 1 : 0;
  EXPECT_EQ(first, 4);
}

TEST(Lattice, AdjacentIntervalsFormOneComponent) {
  const Params p{0.5, 2.0, 1};
  const auto dom = build_lattice(intervals({{0.0, 1.0}, {1.0, 2.0}}), 0.25, p);
  EXPECT_EQ(dom.size(), 8u);
  EXPECT_EQ(connected_components(dom), 1);
}

TEST(Lattice, TinyBallIsEmpty) {
  const Params p{0.5, 2.0, 2};
  ShapeSpec spec;
  spec.primitives.push_back(Ball{{0.0, 0.0}, 0.1});
  try {
    build_lattice(spec, 1.0, p);
    FAIL() << "expected EmptyDomain";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::EmptyDomain);
  }
}

TEST(Lattice, DiskAreaNearPi) {
  const Params p{0.5, 2.0, 2};
  ShapeSpec spec;
  spec.primitives.push_back(Ball{{0.0, 0.0}, 1.0});
  const auto dom = build_lattice(spec, 0.05, p);
  EXPECT_NEAR(measure(dom) / std::numbers::pi, 1.0, 0.02);
  EXPECT_EQ(connected_components(dom), 1);
}

TEST(Lattice, BoxDimensionMismatch) {
  const Params p{0.5, 2.0, 1};
  ShapeSpec spec;
  spec.primitives.push_back(Box{{0.0, 0.0}, {1.0, 1.0}});
  EXPECT_THROW(build_lattice(spec, 0.1, p), Error);
}

TEST(Lattice, SubsetKeepsSpacing) {
  const Params p{0.5, 2.0, 1};
  const auto dom = build_lattice(intervals({{0.0, 1.0}}), 0.125, p);
  const std::vector<std::size_t> pick = {0, 1, 5, 6};
  const auto sub = dom.subset(pick);
  EXPECT_EQ(sub.size(), 4u);
  EXPECT_EQ(connected_components(sub), 2);
  EXPECT_DOUBLE_EQ(sub.coordinate(2)[0], dom.coordinate(5)[0]);
}

TEST(Params, Validation) {
  EXPECT_THROW(validate(Params{1.5, 2.0, 1}), Error);
  EXPECT_THROW(validate(Params{0.0, 2.0, 1}), Error);
  EXPECT_THROW(validate(Params{0.5, 1.0, 1}), Error);
  EXPECT_THROW(validate(Params{0.5, 2.0, 3}), Error);
  EXPECT_NO_THROW(validate(Params{0.5, 2.0, 2}));
  try {
    validate(Params{1.5, 2.0, 1});
  } catch (const Error& e) {
    EXPECT_NE(std::string(e.what()).find("0<s<1"), std::string::npos);
  }
}
