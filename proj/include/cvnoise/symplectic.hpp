#pragma once

// Single-qumode Gaussian unitaries in the Heisenberg picture. Matrices act on
// the column (q, p); displacements are kept separately and composed affinely.

#include <Eigen/Dense>

namespace cvnoise {

using Mat2 = Eigen::Matrix2d;
using Vec2 = Eigen::Vector2d;

struct Symplectic2 {
    Mat2 m = Mat2::Identity();
    Vec2 d = Vec2::Zero();

    Symplectic2() = default;
    explicit Symplectic2(const Mat2& matrix, const Vec2& displacement = Vec2::Zero())
        : m(matrix), d(displacement) {}

    double det() const { return m.determinant(); }
    bool is_symplectic(double tol = 1e-12) const;
    Symplectic2 inverse() const;
    Vec2 apply(const Vec2& x) const { return m * x + d; }
};

// (a ∘ b)(x) = a(b(x)).
Symplectic2 compose(const Symplectic2& a, const Symplectic2& b);
inline Symplectic2 operator*(const Symplectic2& a, const Symplectic2& b) { return compose(a, b); }

enum class GateKind { Squeeze, Shear, Rotation, Fourier, Displacement };

Symplectic2 make_gate(GateKind kind, double param = 0.0);
Symplectic2 make_displacement(const Vec2& shift);

Mat2 squeeze(double s);     // diag(s, 1/s)
Mat2 shear(double sigma);   // [[1,0],[sigma,1]]
Mat2 rotation(double theta);
Mat2 fourier();             // rotation(pi/2)

// Inverse of a determinant-one 2x2 matrix via its adjugate.
Mat2 inverse_unimodular(const Mat2& a);

struct EulerDecomposition {
    double theta = 0.0;
    double eta = 1.0;
    double phi = 0.0;

    Mat2 recompose() const { return rotation(theta) * squeeze(eta) * rotation(phi); }
};

// a = R(theta) S(eta) R(phi) with eta >= 1 and both angles in (-pi, pi].
EulerDecomposition euler_decompose(const Mat2& a);

// Angle reduction helpers.
double wrap_pi(double angle);       // into (-pi, pi]
double wrap_half_pi(double angle);  // into (-pi/2, pi/2] (period pi)

}  // namespace cvnoise
