#include <vector>

#include "doctest.h"
#include "hubmodel/types.hpp"
#include "support/helpers.hpp"

using namespace hubmodel;
using testutil::make_data;

TEST_CASE("grouped data validates its buffer") {
  CHECK_NOTHROW(GroupedData(2, 3, {1, 0, 1, 0, 0, 1}));
  CHECK_THROWS_AS(GroupedData(2, 3, {1, 0, 1}), InvalidInputError);
  CHECK_THROWS_AS(GroupedData(1, 3, {1, 2, 0}), InvalidInputError);
  CHECK_THROWS_AS(GroupedData(1, 0, {}), InvalidInputError);
}

TEST_CASE("params validation") {
  SUBCASE("valid asymmetric") {
    CHECK_NOTHROW(make_params(Variant::asymmetric, 2, 3, {0.4, 0.6},
                              {1, 0.2, 0.3, 0.1, 1, 0.5}));
  }
  SUBCASE("valid null, free row 0") {
    CHECK_NOTHROW(make_params(Variant::null_component, 1, 2, {0.3, 0.7},
                              {0.1, 0.9, 1, 0.5}));
  }
  SUBCASE("weights must sum to one") {
    CHECK_THROWS_AS(make_params(Variant::asymmetric, 1, 2, {0.9}, {1, 0.5}),
                    InvalidInputError);
  }
  SUBCASE("forced unit diagonal") {
    CHECK_THROWS_AS(
        make_params(Variant::asymmetric, 2, 2, {0.5, 0.5}, {1, 0, 0, 0.9}),
        InvalidInputError);
    CHECK_THROWS_AS(make_params(Variant::null_component, 1, 2, {0.5, 0.5},
                                {0.1, 0.1, 0.9, 0.5}),
                    InvalidInputError);
  }
  SUBCASE("entries inside the unit interval") {
    CHECK_THROWS_AS(
        make_params(Variant::asymmetric, 1, 2, {1.0}, {1, 1.0001}),
        InvalidInputError);
    CHECK_THROWS_AS(make_params(Variant::asymmetric, 1, 2, {1.0}, {1, -0.1}),
                    InvalidInputError);
  }
  SUBCASE("shape checks") {
    CHECK_THROWS_AS(make_params(Variant::asymmetric, 2, 1, {0.5, 0.5}, {1, 1}),
                    InvalidInputError);
    CHECK_THROWS_AS(make_params(Variant::asymmetric, 1, 2, {1.0}, {1}),
                    InvalidInputError);
  }
}

TEST_CASE("label conventions") {
  CHECK(hub_column(Variant::asymmetric, 0) == 0);
  CHECK(hub_column(Variant::asymmetric, 3) == 3);
  CHECK(hub_column(Variant::null_component, 0) == -1);
  CHECK(hub_column(Variant::null_component, 3) == 2);

  CHECK(to_external_label(Variant::asymmetric, 0) == 1);
  CHECK(to_internal_label(Variant::asymmetric, 1) == 0);
  CHECK(to_external_label(Variant::null_component, 0) == 0);
  CHECK(to_internal_label(Variant::null_component, 2) == 2);

  CHECK_NOTHROW(validate_labels({0, 1}, 2, Variant::asymmetric));
  CHECK_THROWS_AS(validate_labels({2}, 2, Variant::asymmetric),
                  InvalidInputError);
  CHECK_NOTHROW(validate_labels({0, 2}, 2, Variant::null_component));
  CHECK_THROWS_AS(validate_labels({3}, 2, Variant::null_component),
                  InvalidInputError);
  CHECK_THROWS_AS(validate_labels({-1}, 2, Variant::null_component),
                  InvalidInputError);
}

TEST_CASE("feasibility scan names the first offender") {
  const GroupedData g = make_data({{1, 0, 1}, {0, 1, 1}, {1, 1, 0}});
  CHECK(!first_infeasible_group(g, {0, 1, 0}, Variant::asymmetric));
  auto bad = first_infeasible_group(g, {1, 1, 0}, Variant::asymmetric);
  REQUIRE(bad.has_value());
  CHECK(*bad == 0);
  // label 0 is always feasible under the null variant
  CHECK(!first_infeasible_group(g, {0, 0, 0}, Variant::null_component));
  auto bad2 = first_infeasible_group(g, {1, 1, 1}, Variant::null_component);
  REQUIRE(bad2.has_value());
  CHECK(*bad2 == 1);
}

TEST_CASE("variant names round-trip") {
  CHECK(parse_variant(variant_name(Variant::asymmetric)) ==
        Variant::asymmetric);
  CHECK(parse_variant(variant_name(Variant::null_component)) ==
        Variant::null_component);
  CHECK(parse_variant("null_component") == Variant::null_component);
  CHECK_THROWS_AS(parse_variant("bogus"), InvalidInputError);
}
