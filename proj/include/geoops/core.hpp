#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

namespace geoops {

inline constexpr double kPi = 3.14159265358979323846264338327950288;

/// Machine-readable failure codes carried by GeoError and validity verdicts.
enum class ErrorCode {
  PARAM_OUT_OF_RANGE,
  PARSE_ERROR,
  TOO_FEW_POINTS,
  NON_TRIANGULAR_FACE,
  ORDER_TOO_LARGE,
  NOT_WATERTIGHT,
  ZERO_MEASURE,
  ASSUMPTION_VIOLATED,
  DEGENERATE_POINT,
  HAS_BOUNDARY,
  ZERO_PERIMETER,
  MULTI_LOOP_SECTION,
  MISSING_COMPONENT,
  DEGENERATE_DATA,
  DIMENSION_MISMATCH,
  ZERO_VARIANCE,
  ZERO_VECTOR,
  NEGATIVE_QUALITY,
  ILL_CONDITIONED,
  NAN_INPUT,
  DECODE_FAIL,
  IO_ERROR,
  INVALID_ARGUMENT,
};

inline const char* to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::PARAM_OUT_OF_RANGE: return "PARAM_OUT_OF_RANGE";
    case ErrorCode::PARSE_ERROR: return "PARSE_ERROR";
    case ErrorCode::TOO_FEW_POINTS: return "TOO_FEW_POINTS";
    case ErrorCode::NON_TRIANGULAR_FACE: return "NON_TRIANGULAR_FACE";
    case ErrorCode::ORDER_TOO_LARGE: return "ORDER_TOO_LARGE";
    case ErrorCode::NOT_WATERTIGHT: return "NOT_WATERTIGHT";
    case ErrorCode::ZERO_MEASURE: return "ZERO_MEASURE";
    case ErrorCode::ASSUMPTION_VIOLATED: return "ASSUMPTION_VIOLATED";
    case ErrorCode::DEGENERATE_POINT: return "DEGENERATE_POINT";
    case ErrorCode::HAS_BOUNDARY: return "HAS_BOUNDARY";
    case ErrorCode::ZERO_PERIMETER: return "ZERO_PERIMETER";
    case ErrorCode::MULTI_LOOP_SECTION: return "MULTI_LOOP_SECTION";
    case ErrorCode::MISSING_COMPONENT: return "MISSING_COMPONENT";
    case ErrorCode::DEGENERATE_DATA: return "DEGENERATE_DATA";
    case ErrorCode::DIMENSION_MISMATCH: return "DIMENSION_MISMATCH";
    case ErrorCode::ZERO_VARIANCE: return "ZERO_VARIANCE";
    case ErrorCode::ZERO_VECTOR: return "ZERO_VECTOR";
    case ErrorCode::NEGATIVE_QUALITY: return "NEGATIVE_QUALITY";
    case ErrorCode::ILL_CONDITIONED: return "ILL_CONDITIONED";
    case ErrorCode::NAN_INPUT: return "NAN_INPUT";
    case ErrorCode::DECODE_FAIL: return "DECODE_FAIL";
    case ErrorCode::IO_ERROR: return "IO_ERROR";
    case ErrorCode::INVALID_ARGUMENT: return "INVALID_ARGUMENT";
  }
  return "UNKNOWN";
}

/// Exception type used across the library. `line` is meaningful for parse
/// errors only (0 otherwise).
class GeoError : public std::runtime_error {
 public:
  GeoError(ErrorCode code, const std::string& what, std::size_t line = 0)
      : std::runtime_error(std::string(to_string(code)) + ": " + what),
        code_(code),
        line_(line) {}

  ErrorCode code() const noexcept { return code_; }
  std::size_t line() const noexcept { return line_; }

 private:
  ErrorCode code_;
  std::size_t line_;
};

struct Vec2 {
  double x = 0.0;
  double y = 0.0;

  Vec2() = default;
  Vec2(double x_, double y_) : x(x_), y(y_) {}

  Vec2 operator+(const Vec2& o) const { return {x + o.x, y + o.y}; }
  Vec2 operator-(const Vec2& o) const { return {x - o.x, y - o.y}; }
  Vec2 operator*(double s) const { return {x * s, y * s}; }
  Vec2 operator/(double s) const { return {x / s, y / s}; }

  double dot(const Vec2& o) const { return x * o.x + y * o.y; }
  double cross(const Vec2& o) const { return x * o.y - y * o.x; }
  double norm() const { return std::hypot(x, y); }
  double squared_norm() const { return x * x + y * y; }
};

inline Vec2 operator*(double s, const Vec2& v) { return v * s; }

struct Vec3 {
  double x = 0.0;
  double y = 0.0;
  double z = 0.0;

  Vec3() = default;
  Vec3(double x_, double y_, double z_) : x(x_), y(y_), z(z_) {}

  Vec3 operator+(const Vec3& o) const { return {x + o.x, y + o.y, z + o.z}; }
  Vec3 operator-(const Vec3& o) const { return {x - o.x, y - o.y, z - o.z}; }
  Vec3 operator*(double s) const { return {x * s, y * s, z * s}; }
  Vec3 operator/(double s) const { return {x / s, y / s, z / s}; }

  double dot(const Vec3& o) const { return x * o.x + y * o.y + z * o.z; }
  Vec3 cross(const Vec3& o) const {
    return {y * o.z - z * o.y, z * o.x - x * o.z, x * o.y - y * o.x};
  }
  double norm() const { return std::sqrt(x * x + y * y + z * z); }
  double squared_norm() const { return x * x + y * y + z * z; }

  double operator[](int i) const { return i == 0 ? x : (i == 1 ? y : z); }
};

inline Vec3 operator*(double s, const Vec3& v) { return v * s; }

/// Deterministic 64-bit generator (splitmix64). The standard engines are
/// portable but the standard distributions are not; batch reproducibility
/// requires every random draw to go through this class.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next_u64() {
    std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ull);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
  }

  /// Uniform double in [0, 1).
  double uniform01() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

  /// Uniform integer in [0, n). Rejection sampling keeps the draw unbiased.
  std::uint64_t uniform_int(std::uint64_t n) {
    const std::uint64_t limit = UINT64_MAX - UINT64_MAX % n;
    std::uint64_t v = next_u64();
    while (v >= limit) v = next_u64();
    return v % n;
  }

  template <typename T>
  void shuffle(std::vector<T>& items) {
    for (std::size_t i = items.size(); i > 1; --i) {
      std::size_t j = static_cast<std::size_t>(uniform_int(i));
      std::swap(items[i - 1], items[j]);
    }
  }

  /// Derive an independent stream; used where one seed must fan out into
  /// several reproducible sub-streams.
  Rng spawn(std::uint64_t salt) {
    return Rng(next_u64() ^ (0xA0761D6478BD642Full * (salt + 1)));
  }

 private:
  std::uint64_t state_;
};

/// Shortest-width formatting that round-trips a double exactly; all text
/// emitters use this so reruns stay byte-identical.
inline std::string format_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

/// Binomial coefficient as double; exact for the small orders used here.
inline double binomial(int n, int k) {
  if (k < 0 || k > n) return 0.0;
  k = std::min(k, n - k);
  double result = 1.0;
  for (int i = 1; i <= k; ++i) result = result * (n - k + i) / i;
  return std::round(result);
}

inline bool is_power_of_two(std::size_t n) { return n != 0 && (n & (n - 1)) == 0; }

/// Ordered parallel map: fn(i) runs once per index and writes only to
/// slot-indexed state, so results cannot depend on scheduling.
template <typename Fn>
void parallel_for(std::size_t n, std::size_t jobs, Fn&& fn) {
  jobs = std::max<std::size_t>(1, std::min(jobs, n == 0 ? 1 : n));
  if (jobs == 1) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::vector<std::thread> workers;
  workers.reserve(jobs);
  for (std::size_t w = 0; w < jobs; ++w) {
    workers.emplace_back([&fn, w, n, jobs] {
      for (std::size_t i = w; i < n; i += jobs) fn(i);
    });
  }
  for (std::thread& worker : workers) worker.join();
}

}  // namespace geoops
