#pragma once

#include <array>
#include <cmath>
#include <complex>
#include <stdexcept>
#include <string>

namespace hypx {

using cplx = std::complex<double>;

struct Vec2 {
    double x = 0.0;
    double y = 0.0;
};

inline Vec2 operator+(Vec2 a, Vec2 b) { return {a.x + b.x, a.y + b.y}; }
inline Vec2 operator-(Vec2 a, Vec2 b) { return {a.x - b.x, a.y - b.y}; }
inline Vec2 operator*(double s, Vec2 a) { return {s * a.x, s * a.y}; }
inline double dot(Vec2 a, Vec2 b) { return a.x * b.x + a.y * b.y; }
inline double norm(Vec2 a) { return std::hypot(a.x, a.y); }
inline double sup_norm(Vec2 a) { return std::max(std::fabs(a.x), std::fabs(a.y)); }

using Vec3 = std::array<double, 3>;

// Row-major 2x2 matrix.
struct Mat2 {
    double a11 = 1.0, a12 = 0.0, a21 = 0.0, a22 = 1.0;
    double det() const { return a11 * a22 - a12 * a21; }
    Vec2 apply(Vec2 v) const { return {a11 * v.x + a12 * v.y, a21 * v.x + a22 * v.y}; }
    Mat2 transpose() const { return {a11, a21, a12, a22}; }
};

inline Mat2 operator*(const Mat2& p, const Mat2& q) {
    return {p.a11 * q.a11 + p.a12 * q.a21, p.a11 * q.a12 + p.a12 * q.a22,
            p.a21 * q.a11 + p.a22 * q.a21, p.a21 * q.a12 + p.a22 * q.a22};
}

enum class ErrorCode {
    OrderExceeded,
    Domain,
    UnknownName,
    ParamRange,
    NonpositiveH,
    NoConvergence,
    SeparatedPair,
    NotSeparated,
    MismatchedGrid,
    ResolutionInsufficient,
    LevelExceedsMax,
    SlopeBoundViolated,
    ThickeningExceedsInterval,
    KTooSmall,
    HypothesisViolated,
    InvalidParam,
    TolNotMet,
    RTooSmall,
    ConfigParse,
};

const char* error_name(ErrorCode c);

class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& what)
        : std::runtime_error(std::string(error_name(code)) + ": " + what), code_(code) {}
    ErrorCode code() const { return code_; }

private:
    ErrorCode code_;
};

// Closed square [xlo,xhi] x [ylo,yhi].
struct Box {
    double xlo = -1.0, xhi = 1.0, ylo = -1.0, yhi = 1.0;
    bool contains(Vec2 z, double tol = 0.0) const {
        return z.x >= xlo - tol && z.x <= xhi + tol && z.y >= ylo - tol && z.y <= yhi + tol;
    }
    double area() const { return std::max(0.0, xhi - xlo) * std::max(0.0, yhi - ylo); }
};

}  // namespace hypx
