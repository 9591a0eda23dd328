#include <gtest/gtest.h>

#include "endospin/units.hpp"
#include "gen.hpp"
#include "oracles.hpp"

using namespace endospin;
using namespace endospin::units;

TEST(Units, KelvinToMegahertzAnchor) {
  EXPECT_NEAR(kelvin_to_mhz(0.0175), 364.64, 0.01);
  EXPECT_NEAR(kelvin_to_mhz(0.0175), oracle::k_to_mhz(0.0175), 1e-12);
}

TEST(Units, FieldToMegahertzAnchor) {
  const auto q = convert({0.8, Unit::millitesla}, Unit::megahertz, 2.0);
  EXPECT_NEAR(q.value, 2.0 * oracle::muB_over_h * 0.8e-3 / 1e6, 1e-6);
  EXPECT_NEAR(q.value, 22.39, 0.05);
}

TEST(Units, ZeemanUsesGFactor) {
  EXPECT_DOUBLE_EQ(field_to_zeeman(1.0, 2.0), 2.0 * kBohrOverBoltzmann);
  EXPECT_THROW(field_to_zeeman(1.0, 0.0), PhysicsError);
  EXPECT_THROW(field_to_zeeman(1.0, -2.0), PhysicsError);
}

TEST(Units, ConstantsConsistent) {
  // mu_B / h must equal (mu_B / k_B)(k_B / h) to CODATA precision.
  EXPECT_NEAR(kBohrOverBoltzmann * kBoltzmannOverPlanckHz / kBohrOverPlanckHz, 1.0, 1e-9);
  EXPECT_NEAR(kBoltzmannOverHbar, oracle::kB_over_hbar(), 1.0);
}

TEST(Units, ParseUnit) {
  EXPECT_EQ(parse_unit("K"), Unit::kelvin);
  EXPECT_EQ(parse_unit("mhz"), Unit::megahertz);
  EXPECT_EQ(parse_unit("MT"), Unit::millitesla);
  EXPECT_EQ(parse_unit("tesla"), Unit::tesla);
  EXPECT_EQ(parse_unit("ns"), Unit::nanosecond);
  EXPECT_FALSE(parse_unit("furlong").has_value());
}

TEST(Units, IncompatibleDimensions) {
  try {
    convert({1.0, Unit::second}, Unit::kelvin);
    FAIL();
  } catch (const PhysicsError& e) {
    EXPECT_EQ(e.code(), Errc::incompatible_units);
  }
  EXPECT_THROW(convert({1.0, Unit::tesla}, Unit::nanosecond), PhysicsError);
}

TEST(Units, SameDimensionScaling) {
  EXPECT_DOUBLE_EQ(convert({5.0, Unit::millitesla}, Unit::tesla).value, 5e-3);
  EXPECT_NEAR(convert({70.0, Unit::nanosecond}, Unit::second).value, 7e-8, 1e-20);
}

TEST(UnitsProperty, RoundTripsAcrossAllPairs) {
  gen::Rng rng(11);
  const Unit all[] = {Unit::kelvin, Unit::megahertz, Unit::tesla, Unit::millitesla};
  for (int i = 0; i < 2000; ++i) {
    const double v = gen::uniform(rng, -1e3, 1e3);
    const double g = gen::uniform(rng, 0.5, 4.0);
    const Unit a = all[gen::integer(rng, 0, 3)], b = all[gen::integer(rng, 0, 3)];
    const double there = convert({v, a}, b, g).value;
    const double back = convert({there, b}, a, g).value;
    ASSERT_NEAR(back, v, 1e-12 * std::max(1.0, std::abs(v)));
  }
}

TEST(UnitsProperty, ConversionIsLinear) {
  gen::Rng rng(12);
  for (int i = 0; i < 500; ++i) {
    const double x = gen::uniform(rng, -10, 10), y = gen::uniform(rng, -10, 10);
    ASSERT_NEAR(kelvin_to_mhz(x + y), kelvin_to_mhz(x) + kelvin_to_mhz(y), 1e-9);
    ASSERT_NEAR(mhz_to_kelvin(kelvin_to_mhz(x)), x, 1e-13);
  }
}
