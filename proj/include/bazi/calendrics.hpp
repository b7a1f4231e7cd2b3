#pragma once

#include <string>

#include "bazi/errors.hpp"

namespace bazi::calendrics {

// Supported calendar window. Births outside it are hard errors; term lookups
// are allowed one year earlier because charts for January 1900 need the
// preceding winter's jie boundaries.
inline constexpr int kMinYear = 1900;
inline constexpr int kMaxYear = 2100;

struct CivilDateTime {
  int year = 2000;
  int month = 1;  // 1-12
  int day = 1;    // 1-31
  int hour = 0;   // 0-23
  int minute = 0; // 0-59
  int utc_offset_minutes = 0;  // e.g. +480 for UTC+8

  void validate() const;  // throws ValidationError on malformed fields
  std::string iso_local() const;        // "1966-10-18T23:15"
  std::string iso_with_offset() const;  // "1966-10-18T23:15+08:00"

  bool operator==(const CivilDateTime&) const = default;
};

struct GeoLocation {
  double longitude_deg_east = 0.0;  // [-180, 180]
  double latitude_deg_north = 0.0;  // [-90, 90]; metadata only

  void validate() const;
};

// Physical birth instant plus the corrected local wall reading that drives
// day/hour pillar boundaries.
struct SolarInstant {
  double jd_utc = 0.0;
  CivilDateTime local_true_solar;
};

struct SolarTerm {
  int index = 0;  // 0 = Lichun
  double target_longitude_deg = 315.0;  // (315 + 15*index) mod 360
  SolarInstant instant;
};

enum class SolarTimeMode {
  Off,                      // wall clock used as-is
  LongitudeOnly,            // 4 min/deg correction to the zone meridian
  LongitudeAndEquationOfTime,
};

// Gregorian (proleptic) <-> astronomical Julian Date, minute precision.
double to_julian_date(const CivilDateTime& civil);
CivilDateTime from_julian_date(double jd_utc, int utc_offset_minutes);

// Julian Day Number of a calendar day (the JD at that day's noon).
long long julian_day_number(int year, int month, int day);

bool is_valid_gregorian_date(int year, int month, int day);

// Apparent geocentric solar ecliptic longitude in [0, 360) degrees.
double apparent_solar_longitude(double jd_utc);

// Instant when the apparent longitude reaches (315 + 15*index) mod 360.
// Terms 22/23 of a year fall in January of the following year.
SolarTerm solar_term_instant(int gregorian_year, int term_index);

// Apparent minus mean solar time, minutes, bounded by +-20.
double equation_of_time(double jd_utc);

// Longitude component of the wall-clock correction: 4 min/deg times the
// offset from the zone meridian (utc_offset_minutes / 4 degrees east).
double longitude_correction_minutes(double longitude_deg_east, int utc_offset_minutes);

SolarInstant true_solar_time(const CivilDateTime& civil, const GeoLocation& loc,
                             SolarTimeMode mode = SolarTimeMode::LongitudeAndEquationOfTime);

// TT - UTC seconds, Espenak-Meeus polynomial fit.
double delta_t_seconds(double year_fraction);

const char* term_pinyin(int index);
const char* term_glyph(int index);

}  // namespace bazi::calendrics
