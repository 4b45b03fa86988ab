#pragma once

// Finite-squeezing noise accumulated by a measurement plan, its scalar
// variance, minimization over free angles, rotation sweeps and bound checks.

#include <cstdint>
#include <vector>

#include "cvnoise/minimize.hpp"
#include "cvnoise/protocols.hpp"
#include "cvnoise/sampling.hpp"

namespace cvnoise {

enum class Execution { Serial, Parallel };

struct NoiseKernel {
    Mat2 matrix = Mat2::Zero();

    static NoiseKernel cvw(double epsilon);        // diag(0, eps)
    static NoiseKernel cvw_upper(double epsilon);  // diag(eps, 0), the Fourier-conjugate kernel
    static NoiseKernel macronode(double epsilon, double t);  // diag(eps/t^2, eps)

    bool valid(double tol = 1e-14) const;
};

NoiseKernel kernel_for(Protocol protocol, const ProtocolParams& params);

struct SigmaAccumulation {
    Mat2 sigma_before = Mat2::Zero();  // noise before the realized gate
    Mat2 sigma_after = Mat2::Zero();   // noise after the realized gate
    std::vector<Mat2> per_step_terms;  // contributions to sigma_before
    Mat2 realized = Mat2::Identity();
};

SigmaAccumulation accumulate_sigma(const std::vector<Mat2>& gates, const Mat2& kernel);
SigmaAccumulation accumulate_sigma(const MeasurementPlan& plan);

// Half the trace of sigma_before.
double scalar_variance(const SigmaAccumulation& acc);
// Same value without materializing the accumulation; +inf for singular plans.
double plan_scalar_variance(const MeasurementPlan& plan);

struct SvReport {
    double sv = 0.0;
    MeasurementPlan plan;
    bool minimized = false;
    double free_theta_opt = 0.0;
    std::size_t objective_evals = 0;
};

SvReport scalar_variance_report(const MeasurementPlan& plan);

// Minimum scalar variance over plans of n steps realizing target.
// cvw and dictionary: n = 3 (unique plan) or n = 4 (one free angle).
// macronode: n = 2, optimized over the genuine free first-step angle.
SvReport min_scalar_variance(const Mat2& target, Protocol protocol, const ProtocolParams& params, int n,
                             const GridGoldenOptions& opt = {});

// Canonical theta_1- = pi/4 two-macronode plan; an upper bound on the minimum.
SvReport canonical_macronode_sv(const Mat2& target, const ProtocolParams& params);

// Per-step terms f_i of the weight-one remodeled chain for an even-length cvw plan.
std::vector<double> sv_g_decomposition(const MeasurementPlan& cvw_plan);
// sum_k (f_{2k-1} / g^2 + f_{2k}): reproduces the scalar variance.
double remodeled_sv(const std::vector<double>& f, double g);
// sum_k (f_{2k-1} + f_{2k} / g^2): the transcribed weighting, kept for comparison.
double remodeled_sv_printed(const std::vector<double>& f, double g);

// Sweep over target rotations R(theta).
std::vector<double> rotation_grid(int points);  // 2 pi (k+1)/(points+1), k = 0..points-1
double rotation_sv(Protocol protocol, int n, const ProtocolParams& params, double theta);

struct SweepPoint {
    double theta = 0.0;
    double sv = 0.0;
};

std::vector<SweepPoint> rotation_sweep(Protocol protocol, int n, const ProtocolParams& params,
                                       const std::vector<double>& thetas, Execution exec = Execution::Parallel);

// Protocol comparisons on random gates.
struct BoundOptions {
    std::size_t samples = 1000;
    std::uint64_t seed = 42;
    DrwParams drw;
    double eta_override = 0.0;  // > 0: keep sampled angles, replace eta
    bool check_floor = true;
    double tolerance = 1e-9;
    Execution exec = Execution::Parallel;
};

struct BoundRecord {
    GateSample gate;
    double cvw4 = 0.0;
    double dict4 = 0.0;
    double macro_canonical = 0.0;
    double macro_min = 0.0;
    double floor = 0.0;
    bool viol_cvw_bound = false;
    bool viol_dict_bound = false;
    bool viol_floor = false;       // any protocol at or below the floor
    bool viol_half_floor = false;  // any protocol at or below half the floor
};

struct BoundReport {
    std::vector<BoundRecord> records;
    double required_cvw_margin = 0.0;   // 3 eps/t^2
    double required_dict_margin = 0.0;  // eps (1 + 2 sqrt2 t)/t^2
    std::size_t cvw_bound_violations = 0;
    std::size_t dict_bound_violations = 0;
    std::size_t floor_violations = 0;
    std::size_t half_floor_violations = 0;
    double min_cvw_margin = 0.0;
    double min_dict_margin = 0.0;
    double min_floor_ratio = 0.0;  // min over gates and protocols of sv / floor
};

// eps (eta^2 + eta^-2) min{1, g^-2}
double squeezing_floor(double eta, const ProtocolParams& params);

BoundRecord evaluate_bounds(const GateSample& gate, const DrwParams& drw, bool check_floor, double tol);
BoundReport bound_suite(const BoundOptions& opt);

}  // namespace cvnoise
