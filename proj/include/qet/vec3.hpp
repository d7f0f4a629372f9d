#pragma once

#include <array>
#include <cmath>
#include <complex>

namespace qet {

using Complex = std::complex<double>;

struct Vec3 {
    double x{0}, y{0}, z{0};

    constexpr double operator[](int i) const { return i == 0 ? x : (i == 1 ? y : z); }
    constexpr double& operator[](int i) { return i == 0 ? x : (i == 1 ? y : z); }

    constexpr Vec3& operator+=(const Vec3& o) { x += o.x; y += o.y; z += o.z; return *this; }
    constexpr Vec3& operator-=(const Vec3& o) { x -= o.x; y -= o.y; z -= o.z; return *this; }
    constexpr Vec3& operator*=(double s) { x *= s; y *= s; z *= s; return *this; }

    friend constexpr bool operator==(const Vec3&, const Vec3&) = default;
};

constexpr Vec3 operator+(Vec3 a, const Vec3& b) { return a += b; }
constexpr Vec3 operator-(Vec3 a, const Vec3& b) { return a -= b; }
constexpr Vec3 operator-(const Vec3& a) { return {-a.x, -a.y, -a.z}; }
constexpr Vec3 operator*(Vec3 a, double s) { return a *= s; }
constexpr Vec3 operator*(double s, Vec3 a) { return a *= s; }

constexpr double dot(const Vec3& a, const Vec3& b) { return a.x * b.x + a.y * b.y + a.z * b.z; }
constexpr Vec3 cross(const Vec3& a, const Vec3& b) {
    return {a.y * b.z - a.z * b.y, a.z * b.x - a.x * b.z, a.x * b.y - a.y * b.x};
}
inline double norm(const Vec3& a) { return std::sqrt(dot(a, a)); }
constexpr double norm2(const Vec3& a) { return dot(a, a); }

// Complex 3-vector; used for spectral amplitudes.
struct CVec3 {
    Complex x{}, y{}, z{};

    constexpr Complex operator[](int i) const { return i == 0 ? x : (i == 1 ? y : z); }
    constexpr Complex& operator[](int i) { return i == 0 ? x : (i == 1 ? y : z); }

    CVec3& operator+=(const CVec3& o) { x += o.x; y += o.y; z += o.z; return *this; }
    CVec3& operator-=(const CVec3& o) { x -= o.x; y -= o.y; z -= o.z; return *this; }
    CVec3& operator*=(Complex s) { x *= s; y *= s; z *= s; return *this; }
};

inline CVec3 operator+(CVec3 a, const CVec3& b) { return a += b; }
inline CVec3 operator-(CVec3 a, const CVec3& b) { return a -= b; }
inline CVec3 operator*(CVec3 a, Complex s) { return a *= s; }
inline CVec3 operator*(Complex s, CVec3 a) { return a *= s; }

inline CVec3 to_complex(const Vec3& v) { return {v.x, v.y, v.z}; }
inline CVec3 conj(const CVec3& a) { return {std::conj(a.x), std::conj(a.y), std::conj(a.z)}; }

// Hermitian product a^* . b
inline Complex hdot(const CVec3& a, const CVec3& b) {
    return std::conj(a.x) * b.x + std::conj(a.y) * b.y + std::conj(a.z) * b.z;
}
// Bilinear product a . b (no conjugation)
inline Complex bdot(const CVec3& a, const CVec3& b) { return a.x * b.x + a.y * b.y + a.z * b.z; }
inline Complex bdot(const Vec3& a, const CVec3& b) { return a.x * b.x + a.y * b.y + a.z * b.z; }
inline double norm2(const CVec3& a) { return std::real(hdot(a, a)); }
inline double norm(const CVec3& a) { return std::sqrt(norm2(a)); }
inline CVec3 cross(const Vec3& a, const CVec3& b) {
    return {a.y * b.z - a.z * b.y, a.z * b.x - a.x * b.z, a.x * b.y - a.y * b.x};
}
inline Vec3 real(const CVec3& a) { return {a.x.real(), a.y.real(), a.z.real()}; }

}  // namespace qet
