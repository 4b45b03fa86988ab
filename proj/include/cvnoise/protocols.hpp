#pragma once

// Per-step gate models, plan solvers and correction displacements for the
// single-rail wire (cvw), the dual-rail macronode protocol, and its
// dictionary restriction (a-arm fixed at pi/2).

#include <string>
#include <utility>
#include <vector>

#include "cvnoise/symplectic.hpp"
#include "cvnoise/wire_model.hpp"

namespace cvnoise {

enum class Protocol { Cvw, Macronode, Dictionary };

const char* to_string(Protocol p) noexcept;
Protocol parse_protocol(const std::string& text);

// Homodyne basis measuring cos(theta) p + sin(theta) q. theta lives in
// (-pi/2, pi/2]; theta = pi/2 is the q-measurement.
struct HomodyneBasis {
    double theta = 0.0;

    static HomodyneBasis from_theta(double theta) { return HomodyneBasis{wrap_half_pi(theta)}; }
    static HomodyneBasis from_shear(double sigma);

    double sigma() const;    // tan(theta)
    double rescale() const;  // sec(theta): raw outcome * rescale = outcome of p + sigma q
    bool is_q_measurement() const;
};

struct MacronodeBasis {
    double theta_a = 0.0;
    double theta_b = 0.0;

    static MacronodeBasis canonical(double theta_a, double theta_b) {
        return MacronodeBasis{wrap_half_pi(theta_a), wrap_half_pi(theta_b)};
    }

    double theta_plus() const { return 0.5 * (theta_a + theta_b); }
    double theta_minus() const { return 0.5 * (theta_a - theta_b); }
    bool degenerate(double tol = 1e-12) const;
};

// coupling is the cvw edge weight g, or t = tanh(2 alpha) for the dual-rail
// protocols; epsilon is the self-loop weight entering the noise kernel.
struct ProtocolParams {
    double coupling = 1.0;
    double epsilon = 0.1;
};

// Comparison convention: cvw on (t/2, eps_d), dual-rail on (t, eps_d).
ProtocolParams params_for(Protocol p, const DrwParams& drw);

struct MeasurementPlan {
    Protocol protocol = Protocol::Cvw;
    ProtocolParams params;
    std::vector<HomodyneBasis> homodyne;     // cvw steps, or dictionary b-arm angles
    std::vector<MacronodeBasis> macronode;   // macronode steps

    std::size_t size() const { return protocol == Protocol::Macronode ? macronode.size() : homodyne.size(); }
    // Basis angles flattened in step order ((a, b) pairs for macronode steps).
    std::vector<double> angles() const;
};

// Step gates.
Mat2 cvw_step_gate(const HomodyneBasis& basis, const WireParams& wire);
Mat2 cvw_step_gate(double sigma, double g);
Mat2 macronode_step_gate(const MacronodeBasis& basis, double t);
Mat2 macronode_step_gate_product(const MacronodeBasis& basis, double t);  // four-factor reference
Mat2 dictionary_step_gate(const HomodyneBasis& basis, double t);

std::vector<Mat2> step_gates(const MeasurementPlan& plan);
Mat2 realized_gate(const MeasurementPlan& plan);

// Angles with V S(1/t) = R(theta'_+) S(tan theta'_-) R(theta'_+).
std::pair<double, double> theta_primed(const MacronodeBasis& basis, double t);

// Shear sequence for an n = 3 cvw chain realizing target; unique when it exists.
std::vector<double> solve_cvw_shears3(const Mat2& target, double g);

MeasurementPlan solve_cvw_plan(const Mat2& target, int n, const WireParams& wire, double free_theta = 0.0);
// Dictionary plan realizing target; for n = 4 free_theta is the first b-arm angle.
MeasurementPlan solve_dictionary_plan(const Mat2& target, int n, const DrwParams& drw, double free_theta = 0.0);
MeasurementPlan solve_dictionary_plan(const Mat2& target, int n, const ProtocolParams& params, double free_theta = 0.0);

enum class FreeArm { A, B };

struct MacronodeFreeMode {
    enum class Kind { CanonicalPi4, Free, FreeBoth } kind = Kind::CanonicalPi4;
    FreeArm arm = FreeArm::A;   // for Kind::Free: which first-step angle is fixed
    double theta = 0.0;         // first-step angle on `arm`
    double theta_other = 0.0;   // for Kind::FreeBoth: the other first-step angle

    static MacronodeFreeMode canonical() { return {}; }
    static MacronodeFreeMode free(double theta, FreeArm arm = FreeArm::A) { return {Kind::Free, arm, theta, 0.0}; }
    static MacronodeFreeMode free_both(double theta_a, double theta_b) {
        return {Kind::FreeBoth, FreeArm::A, theta_a, theta_b};
    }
};

// Feasibility of a two-macronode plan as a bilinear form in the first-step
// arms: (cos a, sin a) C (cos b, sin b)^T = 0. C is symmetric.
Mat2 macronode_constraint_form(const Mat2& target, double t);

MeasurementPlan solve_macronode_plan(const Mat2& target, const ProtocolParams& params, const MacronodeFreeMode& mode);
MeasurementPlan solve_macronode_plan(const Mat2& target, const DrwParams& drw, const MacronodeFreeMode& mode);

// Second-macronode basis given the first, so that V2 V1 = target.
MacronodeBasis complete_macronode_step(const Mat2& target, const MacronodeBasis& first, double t);

// sigma -> sigma/2 on the b-arm, a-arm fixed at pi/2, coupling g -> t.
MeasurementPlan dictionary_from_cvw(const MeasurementPlan& cvw_plan, const DrwParams& drw);
MeasurementPlan dictionary_from_cvw(const MeasurementPlan& cvw_plan, const ProtocolParams& dual);

struct CorrectionDisplacement {
    double dq = 0.0;
    double dp = 0.0;
};

// m is the outcome of p + sigma q (raw outcome times basis.rescale()).
CorrectionDisplacement cvw_correction(double m, double g);
// Raw outcomes of cos(theta) p + sin(theta) q on the two arms.
CorrectionDisplacement macronode_correction(const MacronodeBasis& basis, double m_a, double m_b, double t);
// Transcribed closed forms kept for comparison only.
CorrectionDisplacement macronode_correction_printed(const MacronodeBasis& basis, double m_a, double m_b, double t);
CorrectionDisplacement dictionary_correction_printed(double theta_b, double m_a, double m_b, double t);

// Outcome-to-shift coefficient matrix of macronode_correction: (dq, dp) = C (m_a, m_b).
Mat2 macronode_correction_matrix(const MacronodeBasis& basis, double t);

}  // namespace cvnoise
