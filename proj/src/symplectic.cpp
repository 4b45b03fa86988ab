#include "cvnoise/symplectic.hpp"

#include <cmath>
#include <numbers>

#include "cvnoise/errors.hpp"

namespace cvnoise {

const char* to_string(ErrorKind kind) noexcept {
    switch (kind) {
        case ErrorKind::InvalidParameter: return "invalid-parameter";
        case ErrorKind::UnsupportedBasis: return "unsupported-basis";
        case ErrorKind::DegenerateMeasurement: return "degenerate-measurement";
        case ErrorKind::UnreachableGate: return "unreachable-gate";
        case ErrorKind::IndexOutOfRange: return "index-out-of-range";
    }
    return "error";
}

bool Symplectic2::is_symplectic(double tol) const {
    return m.allFinite() && std::abs(m.determinant() - 1.0) < tol;
}

Symplectic2 Symplectic2::inverse() const {
    const Mat2 mi = inverse_unimodular(m);
    return Symplectic2(mi, -(mi * d));
}

Symplectic2 compose(const Symplectic2& a, const Symplectic2& b) {
    return Symplectic2(a.m * b.m, a.m * b.d + a.d);
}

Mat2 squeeze(double s) {
    Mat2 r;
    r << s, 0.0, 0.0, 1.0 / s;
    return r;
}

Mat2 shear(double sigma) {
    Mat2 r;
    r << 1.0, 0.0, sigma, 1.0;
    return r;
}

Mat2 rotation(double theta) {
    const double c = std::cos(theta), s = std::sin(theta);
    Mat2 r;
    r << c, -s, s, c;
    return r;
}

Mat2 fourier() {
    Mat2 r;
    r << 0.0, -1.0, 1.0, 0.0;
    return r;
}

Mat2 inverse_unimodular(const Mat2& a) {
    Mat2 r;
    r << a(1, 1), -a(0, 1), -a(1, 0), a(0, 0);
    return r;
}

Symplectic2 make_gate(GateKind kind, double param) {
    if (!std::isfinite(param)) raise(ErrorKind::InvalidParameter, "gate parameter is not finite");
    switch (kind) {
        case GateKind::Squeeze:
            if (param == 0.0) raise(ErrorKind::InvalidParameter, "squeeze factor must be nonzero");
            return Symplectic2(squeeze(param));
        case GateKind::Shear: return Symplectic2(shear(param));
        case GateKind::Rotation: return Symplectic2(rotation(param));
        case GateKind::Fourier: return Symplectic2(fourier());
        case GateKind::Displacement:
            raise(ErrorKind::InvalidParameter, "displacement needs a 2-vector; use make_displacement");
    }
    raise(ErrorKind::InvalidParameter, "unknown gate kind");
}

Symplectic2 make_displacement(const Vec2& shift) {
    if (!shift.allFinite()) raise(ErrorKind::InvalidParameter, "displacement is not finite");
    return Symplectic2(Mat2::Identity(), shift);
}

double wrap_pi(double angle) {
    constexpr double pi = std::numbers::pi;
    double r = std::remainder(angle, 2.0 * pi);  // [-pi, pi]
    if (r <= -pi) r += 2.0 * pi;
    return r;
}

double wrap_half_pi(double angle) {
    constexpr double pi = std::numbers::pi;
    double r = std::remainder(angle, pi);  // [-pi/2, pi/2]
    if (r <= -pi / 2) r += pi;
    return r;
}

EulerDecomposition euler_decompose(const Mat2& a) {
    // Split a into a rotation-like part (p, q) and a reflection-like part (r, s):
    //   a = [[p + r, s - q], [q + s, p - r]].
    // For R(theta) S(eta) R(phi) the first part has modulus (eta + 1/eta)/2 and
    // angle theta + phi, the second modulus (eta - 1/eta)/2 and angle theta - phi.
    const double p = 0.5 * (a(0, 0) + a(1, 1));
    const double q = 0.5 * (a(1, 0) - a(0, 1));
    const double r = 0.5 * (a(0, 0) - a(1, 1));
    const double s = 0.5 * (a(1, 0) + a(0, 1));
    const double rot = std::hypot(p, q);
    const double refl = std::hypot(r, s);

    const double sum = std::atan2(q, p);
    const double diff = refl > 0.0 ? std::atan2(s, r) : sum;  // pure rotation: phi = 0

    EulerDecomposition e;
    e.eta = rot + refl;
    e.theta = wrap_pi(0.5 * (sum + diff));
    e.phi = wrap_pi(0.5 * (sum - diff));
    return e;
}

}  // namespace cvnoise
