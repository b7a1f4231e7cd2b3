#pragma once

namespace bazi::calendrics::detail {

struct SolarState {
  double lambda_deg;      // apparent geocentric ecliptic longitude
  double beta_deg;        // geocentric ecliptic latitude
  double eps_true_deg;    // true obliquity
  double dpsi_deg;        // nutation in longitude
  double radius_au;
};

// Evaluates the truncated VSOP87 Earth series plus IAU 1980 nutation and
// aberration at a TT Julian date.
SolarState solar_state_tt(double jd_tt);

// Geometric mean longitude of the sun (degrees), jme = TT Julian millennia.
double sun_mean_longitude_deg(double jme);

}  // namespace bazi::calendrics::detail
