#include "cvnoise/protocols.hpp"

#include <cmath>
#include <numbers>

#include "cvnoise/errors.hpp"

namespace cvnoise {

namespace {

constexpr double kHalfPi = std::numbers::pi / 2.0;

double max_abs(const Mat2& a) { return a.cwiseAbs().maxCoeff(); }

}  // namespace

const char* to_string(Protocol p) noexcept {
    switch (p) {
        case Protocol::Cvw: return "cvw";
        case Protocol::Macronode: return "macronode";
        case Protocol::Dictionary: return "dictionary";
    }
    return "?";
}

Protocol parse_protocol(const std::string& text) {
    if (text == "cvw") return Protocol::Cvw;
    if (text == "macronode") return Protocol::Macronode;
    if (text == "dictionary") return Protocol::Dictionary;
    raise(ErrorKind::InvalidParameter, "unknown protocol '" + text + "'");
}

HomodyneBasis HomodyneBasis::from_shear(double sigma) {
    if (!std::isfinite(sigma)) return HomodyneBasis{kHalfPi};
    return HomodyneBasis{std::atan(sigma)};
}

double HomodyneBasis::sigma() const { return std::tan(theta); }
double HomodyneBasis::rescale() const { return 1.0 / std::cos(theta); }
bool HomodyneBasis::is_q_measurement() const { return std::abs(std::cos(theta)) < 1e-15; }

bool MacronodeBasis::degenerate(double tol) const { return std::abs(std::sin(theta_a - theta_b)) < tol; }

ProtocolParams params_for(Protocol p, const DrwParams& drw) {
    if (p == Protocol::Cvw) return ProtocolParams{drw.g_d, drw.eps_d};
    return ProtocolParams{drw.t, drw.eps_d};
}

std::vector<double> MeasurementPlan::angles() const {
    std::vector<double> out;
    if (protocol == Protocol::Macronode) {
        for (const auto& b : macronode) {
            out.push_back(b.theta_a);
            out.push_back(b.theta_b);
        }
    } else {
        for (const auto& b : homodyne) out.push_back(b.theta);
    }
    return out;
}

Mat2 cvw_step_gate(double sigma, double g) {
    Mat2 u;
    u << -sigma / g, -1.0 / g, g, 0.0;
    return u;
}

Mat2 cvw_step_gate(const HomodyneBasis& basis, const WireParams& wire) {
    if (basis.is_q_measurement())
        raise(ErrorKind::UnsupportedBasis, "q-measurement removes a cvw node instead of teleporting");
    return cvw_step_gate(basis.sigma(), wire.g);
}

Mat2 macronode_step_gate(const MacronodeBasis& basis, double t) {
    if (!(t > 0.0 && t <= 1.0)) raise(ErrorKind::InvalidParameter, "t must lie in (0, 1]");
    if (basis.degenerate())
        raise(ErrorKind::DegenerateMeasurement, "macronode arms measure parallel quadratures");
    // R(x) S(tan y) R(x) with x = (a+b)/2, y = (a-b)/2, multiplied out.
    const double sa = std::sin(basis.theta_a), ca = std::cos(basis.theta_a);
    const double sb = std::sin(basis.theta_b), cb = std::cos(basis.theta_b);
    const double inv_d = 1.0 / std::sin(basis.theta_a - basis.theta_b);
    const double s_sum = std::sin(basis.theta_a + basis.theta_b);
    Mat2 m;
    m << -2.0 * sa * sb * inv_d, -s_sum * inv_d, s_sum * inv_d, 2.0 * ca * cb * inv_d;
    return squeeze(1.0 / t) * m;
}

Mat2 macronode_step_gate_product(const MacronodeBasis& basis, double t) {
    const double tp = basis.theta_plus(), tm = basis.theta_minus();
    return squeeze(1.0 / t) * rotation(tp) * squeeze(std::tan(tm)) * rotation(tp);
}

Mat2 dictionary_step_gate(const HomodyneBasis& basis, double t) {
    return macronode_step_gate(MacronodeBasis{kHalfPi, basis.theta}, t);
}

std::vector<Mat2> step_gates(const MeasurementPlan& plan) {
    std::vector<Mat2> out;
    out.reserve(plan.size());
    switch (plan.protocol) {
        case Protocol::Cvw:
            for (const auto& b : plan.homodyne) out.push_back(cvw_step_gate(b, WireParams{plan.params.coupling, plan.params.epsilon}));
            break;
        case Protocol::Dictionary:
            for (const auto& b : plan.homodyne) out.push_back(dictionary_step_gate(b, plan.params.coupling));
            break;
        case Protocol::Macronode:
            for (const auto& b : plan.macronode) out.push_back(macronode_step_gate(b, plan.params.coupling));
            break;
    }
    return out;
}

Mat2 realized_gate(const MeasurementPlan& plan) {
    Mat2 e = Mat2::Identity();
    for (const auto& u : step_gates(plan)) e = u * e;
    return e;
}

std::pair<double, double> theta_primed(const MacronodeBasis& basis, double t) {
    // arctan(tan(theta) / t^2) on the principal branch, finite at theta = pi/2.
    auto squash = [t](double theta) {
        return wrap_half_pi(std::atan2(std::sin(theta), t * t * std::cos(theta)));
    };
    const double xa = squash(basis.theta_a), xb = squash(basis.theta_b);
    return {0.5 * (xa + xb), 0.5 * (xa - xb)};
}

std::vector<double> solve_cvw_shears3(const Mat2& target, double g) {
    // U2 U1 has bottom-right entry -1, so the 3-chain's (1,1) entry fixes sigma3;
    // the remaining two shears are read off U3^{-1} target.
    const double pivot = target(1, 1);
    if (std::abs(pivot) <= 1e-14 * std::max(1.0, max_abs(target)))
        raise(ErrorKind::UnreachableGate, "three-step chain singular: target(1,1) = " + std::to_string(pivot));
    const double s3 = g * (1.0 - g * target(0, 1)) / pivot;
    const Mat2 x = inverse_unimodular(cvw_step_gate(s3, g)) * target;
    return {-x(1, 0), g * g * x(0, 1), s3};
}

MeasurementPlan solve_cvw_plan(const Mat2& target, int n, const WireParams& wire, double free_theta) {
    MeasurementPlan plan;
    plan.protocol = Protocol::Cvw;
    plan.params = ProtocolParams{wire.g, wire.epsilon};
    std::vector<double> shears;
    if (n == 3) {
        shears = solve_cvw_shears3(target, wire.g);
    } else if (n == 4) {
        const HomodyneBasis first = HomodyneBasis::from_theta(free_theta);
        if (first.is_q_measurement()) raise(ErrorKind::UnsupportedBasis, "free angle is a q-measurement");
        const double s1 = first.sigma();
        shears = solve_cvw_shears3(target * inverse_unimodular(cvw_step_gate(s1, wire.g)), wire.g);
        shears.insert(shears.begin(), s1);
    } else {
        raise(ErrorKind::InvalidParameter, "cvw solver supports n = 3 or 4");
    }
    for (double s : shears) plan.homodyne.push_back(HomodyneBasis::from_shear(s));
    return plan;
}

MeasurementPlan dictionary_from_cvw(const MeasurementPlan& cvw_plan, const ProtocolParams& dual) {
    if (cvw_plan.protocol != Protocol::Cvw) raise(ErrorKind::InvalidParameter, "dictionary translation needs a cvw plan");
    MeasurementPlan out;
    out.protocol = Protocol::Dictionary;
    out.params = dual;
    for (const auto& b : cvw_plan.homodyne) out.homodyne.push_back(HomodyneBasis::from_shear(0.5 * b.sigma()));
    return out;
}

MeasurementPlan dictionary_from_cvw(const MeasurementPlan& cvw_plan, const DrwParams& drw) {
    return dictionary_from_cvw(cvw_plan, params_for(Protocol::Dictionary, drw));
}

MeasurementPlan solve_dictionary_plan(const Mat2& target, int n, const ProtocolParams& params, double free_theta) {
    // A dictionary step with b-arm shear s acts as a cvw step with g = t and shear 2s.
    const double first_cvw_theta = std::atan(2.0 * std::tan(free_theta));
    const MeasurementPlan cvw = solve_cvw_plan(target, n, WireParams{params.coupling, params.epsilon}, first_cvw_theta);
    MeasurementPlan out = dictionary_from_cvw(cvw, params);
    if (n == 4) out.homodyne.front() = HomodyneBasis::from_theta(free_theta);
    return out;
}

MeasurementPlan solve_dictionary_plan(const Mat2& target, int n, const DrwParams& drw, double free_theta) {
    return solve_dictionary_plan(target, n, params_for(Protocol::Dictionary, drw), free_theta);
}

Mat2 macronode_constraint_form(const Mat2& target, double t) {
    // V2 = target V1^{-1} is a macronode gate iff S(t) target M1^{-1} S(t) has
    // antisymmetric off-diagonal. M1^{-1} is, up to a scalar,
    //   ca cb diag(2,0) + (sa cb + ca sb) J + sa sb diag(0,-2).
    const Mat2 st = squeeze(t);
    const Mat2 left = st * target;
    auto offsym = [&](const Mat2& n) {
        const Mat2 x = left * n * st;
        return x(0, 1) + x(1, 0);
    };
    Mat2 cc, jj, ss;
    cc << 2.0, 0.0, 0.0, 0.0;
    jj << 0.0, 1.0, -1.0, 0.0;
    ss << 0.0, 0.0, 0.0, -2.0;
    const double j = offsym(jj);
    Mat2 form;
    form << offsym(cc), j, j, offsym(ss);
    return form;
}

MacronodeBasis complete_macronode_step(const Mat2& target, const MacronodeBasis& first, double t) {
    const Mat2 v1 = macronode_step_gate(first, t);
    const Mat2 m2 = squeeze(t) * target * inverse_unimodular(v1);
    if (std::abs(m2(0, 1) + m2(1, 0)) > 1e-8 * std::max(1.0, max_abs(m2)))
        raise(ErrorKind::UnreachableGate, "first macronode basis leaves a remainder outside the macronode family");
    // m2 = R(x) S(k) R(x): trace and antisymmetric part give 2x, the diagonal
    // difference gives k - 1/k.
    const double x = 0.5 * std::atan2(m2(1, 0) - m2(0, 1), m2(0, 0) + m2(1, 1));
    const double d = m2(0, 0) - m2(1, 1);
    const double root = std::sqrt(d * d + 4.0);
    const double k = d >= 0.0 ? 0.5 * (d + root) : 2.0 / (root - d);
    const double y = std::atan(k);
    return MacronodeBasis::canonical(x + y, x - y);
}

MeasurementPlan solve_macronode_plan(const Mat2& target, const ProtocolParams& params, const MacronodeFreeMode& mode) {
    const double t = params.coupling;
    MeasurementPlan plan;
    plan.protocol = Protocol::Macronode;
    plan.params = params;

    MacronodeBasis first;
    switch (mode.kind) {
        case MacronodeFreeMode::Kind::CanonicalPi4: {
            const EulerDecomposition e = euler_decompose(target);
            const double half_sum = 0.5 * (e.phi - e.theta);
            first = MacronodeBasis::canonical(half_sum + std::numbers::pi / 4, half_sum - std::numbers::pi / 4);
            const double arm = std::atan(e.eta);
            auto raw = [t](double primed) {
                return std::atan2(t * t * std::sin(primed), std::cos(primed));
            };
            const MacronodeBasis second = MacronodeBasis::canonical(raw(e.theta + arm), raw(e.theta - arm));
            plan.macronode = {first, second};
            return plan;
        }
        case MacronodeFreeMode::Kind::Free: {
            const Mat2 form = macronode_constraint_form(target, t);
            const double fixed = wrap_half_pi(mode.theta);
            const Vec2 u(std::cos(fixed), std::sin(fixed));
            const Vec2 w = form * u;  // form is symmetric
            if (w.norm() <= 1e-13 * std::max(1.0, max_abs(form)))
                raise(ErrorKind::DegenerateMeasurement, "fixed arm does not determine its partner for this target");
            const double partner = wrap_half_pi(std::atan2(-w(0), w(1)));
            first = mode.arm == FreeArm::A ? MacronodeBasis{fixed, partner} : MacronodeBasis{partner, fixed};
            break;
        }
        case MacronodeFreeMode::Kind::FreeBoth: {
            first = MacronodeBasis::canonical(mode.theta, mode.theta_other);
            const Mat2 form = macronode_constraint_form(target, t);
            const Vec2 a(std::cos(first.theta_a), std::sin(first.theta_a));
            const Vec2 b(std::cos(first.theta_b), std::sin(first.theta_b));
            if (std::abs(a.dot(form * b)) > 1e-10 * std::max(1.0, max_abs(form)))
                raise(ErrorKind::UnreachableGate, "first macronode basis violates the two-step constraint");
            break;
        }
    }
    plan.macronode = {first, complete_macronode_step(target, first, t)};
    return plan;
}

MeasurementPlan solve_macronode_plan(const Mat2& target, const DrwParams& drw, const MacronodeFreeMode& mode) {
    return solve_macronode_plan(target, params_for(Protocol::Macronode, drw), mode);
}

CorrectionDisplacement cvw_correction(double m, double g) { return CorrectionDisplacement{-m / g, 0.0}; }

Mat2 macronode_correction_matrix(const MacronodeBasis& basis, double t) {
    if (basis.degenerate())
        raise(ErrorKind::DegenerateMeasurement, "macronode arms measure parallel quadratures");
    const double sa = std::sin(basis.theta_a), ca = std::cos(basis.theta_a);
    const double sb = std::sin(basis.theta_b), cb = std::cos(basis.theta_b);
    const double d = std::sin(basis.theta_a - basis.theta_b);
    const double r2 = std::numbers::sqrt2;
    Mat2 c;
    c << r2 * sb / (t * d), r2 * sa / (t * d), -r2 * t * cb / d, -r2 * t * ca / d;
    return c;
}

CorrectionDisplacement macronode_correction(const MacronodeBasis& basis, double m_a, double m_b, double t) {
    const Vec2 shift = macronode_correction_matrix(basis, t) * Vec2(m_a, m_b);
    return CorrectionDisplacement{shift(0), shift(1)};
}

CorrectionDisplacement macronode_correction_printed(const MacronodeBasis& basis, double m_a, double m_b, double t) {
    const double sa = std::sin(basis.theta_a), ca = std::cos(basis.theta_a);
    const double sb = std::sin(basis.theta_b), cb = std::cos(basis.theta_b);
    const double sm = std::sin(basis.theta_minus());
    if (std::abs(sm) < 1e-12) raise(ErrorKind::DegenerateMeasurement, "sin(theta_minus) vanishes");
    const double r2 = std::numbers::sqrt2;
    return CorrectionDisplacement{r2 * (m_b * sa + m_a * sb) / (t * sm), -t * r2 * (m_b * ca + m_a * cb) / sm};
}

CorrectionDisplacement dictionary_correction_printed(double theta_b, double m_a, double m_b, double t) {
    const double r2 = std::numbers::sqrt2;
    const double c = std::cos(theta_b);
    if (std::abs(c) < 1e-15) raise(ErrorKind::DegenerateMeasurement, "b-arm measures q with the a-arm");
    return CorrectionDisplacement{(r2 * m_b + r2 * std::sin(theta_b) * m_a) / (t * c), -t * r2 * m_a};
}

}  // namespace cvnoise
