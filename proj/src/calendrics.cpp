#include "bazi/calendrics.hpp"

#include <array>
#include <cmath>
#include <cstdio>

#include "solar_series.hpp"

namespace bazi::calendrics {
namespace {

constexpr double kMinuteDays = 1.0 / 1440.0;
constexpr double kMeanMotionDegPerDay = 0.9856473;

// Longitude evaluations are permitted slightly past the civil window so that
// the jie boundaries flanking it stay reachable.
constexpr double kJdSlackDays = 400.0;

bool is_leap(int year) {
  return (year % 4 == 0 && year % 100 != 0) || year % 400 == 0;
}

int days_in_month(int year, int month) {
  static constexpr std::array<int, 12> kDays = {31, 28, 31, 30, 31, 30, 31, 31, 30, 31, 30, 31};
  if (month == 2 && is_leap(year)) return 29;
  return kDays[static_cast<std::size_t>(month - 1)];
}

double jd_window_min() {
  return static_cast<double>(julian_day_number(kMinYear - 2, 1, 1));
}

double jd_window_max() {
  return static_cast<double>(julian_day_number(kMaxYear + 2, 1, 1));
}

void check_jd_window(double jd) {
  if (jd < jd_window_min() || jd > jd_window_max()) {
    throw RangeError("Julian date " + std::to_string(jd) + " outside supported window " +
                     std::to_string(kMinYear) + "-" + std::to_string(kMaxYear));
  }
}

double year_fraction(double jd_utc) {
  CivilDateTime c = from_julian_date(jd_utc, 0);
  return c.year + (c.month - 0.5) / 12.0;
}

double wrap180(double deg) {
  deg = std::fmod(deg + 180.0, 360.0);
  if (deg < 0) deg += 360.0;
  return deg - 180.0;
}

constexpr const char* kTermPinyin[24] = {
    "Lichun", "Yushui", "Jingzhe", "Chunfen", "Qingming", "Guyu",
    "Lixia", "Xiaoman", "Mangzhong", "Xiazhi", "Xiaoshu", "Dashu",
    "Liqiu", "Chushu", "Bailu", "Qiufen", "Hanlu", "Shuangjiang",
    "Lidong", "Xiaoxue", "Daxue", "Dongzhi", "Xiaohan", "Dahan"};

constexpr const char* kTermGlyph[24] = {
    "立春", "雨水", "惊蛰", "春分", "清明", "谷雨", "立夏", "小满",
    "芒种", "夏至", "小暑", "大暑", "立秋", "处暑", "白露", "秋分",
    "寒露", "霜降", "立冬", "小雪", "大雪", "冬至", "小寒", "大寒"};

}  // namespace

void CivilDateTime::validate() const {
  if (!is_valid_gregorian_date(year, month, day)) {
    throw ValidationError("invalid calendar date " + std::to_string(year) + "-" +
                          std::to_string(month) + "-" + std::to_string(day));
  }
  if (hour < 0 || hour > 23 || minute < 0 || minute > 59) {
    throw ValidationError("invalid time of day " + std::to_string(hour) + ":" +
                          std::to_string(minute));
  }
  if (utc_offset_minutes < -840 || utc_offset_minutes > 840) {
    throw ValidationError("utc offset out of range: " + std::to_string(utc_offset_minutes));
  }
}

std::string CivilDateTime::iso_local() const {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%04d-%02d-%02dT%02d:%02d", year, month, day, hour, minute);
  return buf;
}

std::string CivilDateTime::iso_with_offset() const {
  const int off = utc_offset_minutes;
  char buf[16];
  std::snprintf(buf, sizeof(buf), "%c%02d:%02d", off < 0 ? '-' : '+', std::abs(off) / 60,
                std::abs(off) % 60);
  return iso_local() + buf;
}

void GeoLocation::validate() const {
  if (longitude_deg_east < -180.0 || longitude_deg_east > 180.0) {
    throw ValidationError("longitude out of range: " + std::to_string(longitude_deg_east));
  }
  if (latitude_deg_north < -90.0 || latitude_deg_north > 90.0) {
    throw ValidationError("latitude out of range: " + std::to_string(latitude_deg_north));
  }
}

bool is_valid_gregorian_date(int year, int month, int day) {
  if (month < 1 || month > 12 || day < 1) return false;
  return day <= days_in_month(year, month);
}

long long julian_day_number(int year, int month, int day) {
  // Fliegel & Van Flandern, proleptic Gregorian.
  const long long y = year, m = month, d = day;
  return d - 32075 + 1461 * (y + 4800 + (m - 14) / 12) / 4 +
         367 * (m - 2 - (m - 14) / 12 * 12) / 12 -
         3 * ((y + 4900 + (m - 14) / 12) / 100) / 4;
}

double to_julian_date(const CivilDateTime& civil) {
  civil.validate();
  const double jdn = static_cast<double>(julian_day_number(civil.year, civil.month, civil.day));
  const double day_fraction = (civil.hour - 12.0) / 24.0 + civil.minute / 1440.0;
  return jdn + day_fraction - civil.utc_offset_minutes * kMinuteDays;
}

CivilDateTime from_julian_date(double jd_utc, int utc_offset_minutes) {
  // Round the local instant to the nearest minute before splitting fields.
  const double local = jd_utc + utc_offset_minutes * kMinuteDays;
  const double rounded = std::floor(local * 1440.0 + 0.5) / 1440.0;

  long long z = static_cast<long long>(std::floor(rounded + 0.5));
  double f = rounded + 0.5 - static_cast<double>(z);

  // Richards-style inverse of the Gregorian JDN formula.
  long long a = z + 68569;
  long long b = 4 * a / 146097;
  a -= (146097 * b + 3) / 4;
  long long c = 4000 * (a + 1) / 1461001;
  a -= 1461 * c / 4 - 31;
  long long d = 80 * a / 2447;
  const int day = static_cast<int>(a - 2447 * d / 80);
  a = d / 11;
  const int month = static_cast<int>(d + 2 - 12 * a);
  const int year = static_cast<int>(100 * (b - 49) + c + a);

  int total_minutes = static_cast<int>(std::floor(f * 1440.0 + 0.5));
  if (total_minutes >= 1440) total_minutes = 1439;  // guard against float edge

  CivilDateTime out;
  out.year = year;
  out.month = month;
  out.day = day;
  out.hour = total_minutes / 60;
  out.minute = total_minutes % 60;
  out.utc_offset_minutes = utc_offset_minutes;
  return out;
}

double delta_t_seconds(double y) {
  // Espenak & Meeus polynomial fits, 1900-2150 pieces.
  if (y < 1900 - 2 || y >= 2150) {
    throw RangeError("delta-T fit evaluated outside 1900-2150: " + std::to_string(y));
  }
  if (y < 1920) {
    const double t = y - 1900;
    return -2.79 + 1.494119 * t - 0.0598939 * t * t + 0.0061966 * t * t * t -
           0.000197 * t * t * t * t;
  }
  if (y < 1941) {
    const double t = y - 1920;
    return 21.20 + 0.84493 * t - 0.076100 * t * t + 0.0020936 * t * t * t;
  }
  if (y < 1961) {
    const double t = y - 1950;
    return 29.07 + 0.407 * t - t * t / 233 + t * t * t / 2547;
  }
  if (y < 1986) {
    const double t = y - 1975;
    return 45.45 + 1.067 * t - t * t / 260 - t * t * t / 718;
  }
  if (y < 2005) {
    const double t = y - 2000;
    return 63.86 + 0.3345 * t - 0.060374 * t * t + 0.0017275 * t * t * t +
           0.000651814 * t * t * t * t + 0.00002373599 * t * t * t * t * t;
  }
  if (y < 2050) {
    const double t = y - 2000;
    return 62.92 + 0.32217 * t + 0.005589 * t * t;
  }
  const double u = (y - 1820) / 100;
  return -20 + 32 * u * u - 0.5628 * (2150 - y);
}

double apparent_solar_longitude(double jd_utc) {
  check_jd_window(jd_utc);
  const double jd_tt = jd_utc + delta_t_seconds(year_fraction(jd_utc)) / 86400.0;
  return detail::solar_state_tt(jd_tt).lambda_deg;
}

SolarTerm solar_term_instant(int gregorian_year, int term_index) {
  if (term_index < 0 || term_index > 23) {
    throw ValidationError("term index out of range: " + std::to_string(term_index));
  }
  if (gregorian_year < kMinYear - 1 || gregorian_year > kMaxYear) {
    throw RangeError("year outside supported window: " + std::to_string(gregorian_year));
  }

  const double target = std::fmod(315.0 + 15.0 * term_index, 360.0);
  const double guess =
      static_cast<double>(julian_day_number(gregorian_year, 2, 4)) + 15.2184 * term_index;

  // Bracket the crossing, then refine with a secant/bisection hybrid. The
  // wrapped difference is monotone inside any bracket narrower than ~180 deg
  // of solar motion, so a 40-day bracket is safe.
  double lo = guess - 20.0, hi = guess + 20.0;
  auto residual = [&](double jd) { return wrap180(apparent_solar_longitude(jd) - target); };
  double flo = residual(lo), fhi = residual(hi);
  if (flo > 0 || fhi < 0) {
    lo -= 10.0;
    hi += 10.0;
    flo = residual(lo);
    fhi = residual(hi);
    if (flo > 0 || fhi < 0) {
      throw NumericalError("failed to bracket solar term " + std::to_string(term_index) +
                           " of " + std::to_string(gregorian_year));
    }
  }

  double jd = guess;
  double f = residual(jd);
  constexpr int kMaxIterations = 80;
  constexpr double kToleranceDays = 1e-8;
  int iteration = 0;
  for (; iteration < kMaxIterations; ++iteration) {
    if (std::abs(f) < kToleranceDays * kMeanMotionDegPerDay) break;
    double next = jd - f / kMeanMotionDegPerDay;
    if (next <= lo || next >= hi) next = 0.5 * (lo + hi);
    const double fnext = residual(next);
    if (fnext > 0) {
      hi = next;
      fhi = fnext;
    } else {
      lo = next;
      flo = fnext;
    }
    jd = next;
    f = fnext;
    if (hi - lo < kToleranceDays) break;
  }
  if (iteration == kMaxIterations) {
    throw NumericalError("solar-term refinement did not converge for term " +
                         std::to_string(term_index) + " of " + std::to_string(gregorian_year));
  }

  SolarTerm term;
  term.index = term_index;
  term.target_longitude_deg = target;
  term.instant.jd_utc = jd;
  term.instant.local_true_solar = from_julian_date(jd, 0);
  return term;
}

double equation_of_time(double jd_utc) {
  check_jd_window(jd_utc);
  const double jd_tt = jd_utc + delta_t_seconds(year_fraction(jd_utc)) / 86400.0;
  const auto state = detail::solar_state_tt(jd_tt);
  const double jme = (jd_tt - 2451545.0) / 365250.0;

  const double deg = 1.0 / 57.29577951308232;
  const double lambda = state.lambda_deg * deg;
  const double beta = state.beta_deg * deg;
  const double eps = state.eps_true_deg * deg;
  double alpha = std::atan2(std::sin(lambda) * std::cos(eps) - std::tan(beta) * std::sin(eps),
                            std::cos(lambda)) /
                 deg;
  if (alpha < 0) alpha += 360.0;

  double e = detail::sun_mean_longitude_deg(jme) - 0.0057183 - alpha +
             state.dpsi_deg * std::cos(eps);
  e = wrap180(e);
  return e * 4.0;  // degrees to minutes of time
}

double longitude_correction_minutes(double longitude_deg_east, int utc_offset_minutes) {
  const double zone_meridian = utc_offset_minutes / 4.0;
  return 4.0 * (longitude_deg_east - zone_meridian);
}

SolarInstant true_solar_time(const CivilDateTime& civil, const GeoLocation& loc,
                             SolarTimeMode mode) {
  civil.validate();
  loc.validate();
  if (civil.year < kMinYear || civil.year > kMaxYear) {
    throw RangeError("birth year outside supported window: " + std::to_string(civil.year));
  }

  const double jd_utc = to_julian_date(civil);
  double correction_min = 0.0;
  if (mode != SolarTimeMode::Off) {
    correction_min += longitude_correction_minutes(loc.longitude_deg_east,
                                                   civil.utc_offset_minutes);
  }
  if (mode == SolarTimeMode::LongitudeAndEquationOfTime) {
    correction_min += equation_of_time(jd_utc);
  }

  SolarInstant out;
  out.jd_utc = jd_utc;
  out.local_true_solar =
      from_julian_date(jd_utc + correction_min * kMinuteDays, civil.utc_offset_minutes);
  return out;
}

const char* term_pinyin(int index) { return kTermPinyin[index]; }
const char* term_glyph(int index) { return kTermGlyph[index]; }

}  // namespace bazi::calendrics
