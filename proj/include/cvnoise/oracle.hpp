#pragma once

// Brute-force covariance simulator of the wire circuits. Quadrature ordering
// is (q_0..q_{n-1}, p_0..p_{n-1}); vacuum covariance is I/2.

#include <cstdint>
#include <optional>
#include <variant>
#include <vector>

#include <Eigen/Dense>

#include "cvnoise/noise_engine.hpp"
#include "cvnoise/protocols.hpp"
#include "cvnoise/rng.hpp"

namespace cvnoise::oracle {

// Extended precision: the noise-before convention subtracts the propagated
// input covariance and conjugates by the inverse gate, which cancels digits
// on long chains.
using Real = long double;
using VecX = Eigen::Matrix<Real, Eigen::Dynamic, 1>;
using MatX = Eigen::Matrix<Real, Eigen::Dynamic, Eigen::Dynamic>;

struct GaussianState {
    VecX mean;
    MatX cov;
    std::vector<int> labels;  // stable mode identity across measurements

    int n_modes() const { return static_cast<int>(labels.size()); }
    int index_of(int label) const;
    Mat2 mode_cov(int mode) const;
    Vec2 mode_mean(int mode) const;
};

GaussianState vacuum(int n_modes, int first_label = 0);
GaussianState single_mode(const Mat2& cov, const Vec2& mean = Vec2::Zero(), int label = 0);
GaussianState tensor(const GaussianState& a, const GaussianState& b);

struct Squeeze {
    int mode;
    double s;
};
struct Cz {
    int i, j;
    double g;
};
struct BeamSplitter5050 {
    int i, j;
};
struct SingleMode {
    int mode;
    Mat2 m;
};
struct Displace {
    int mode;
    double u, v;
};
using GaussianOp = std::variant<Squeeze, Cz, BeamSplitter5050, SingleMode, Displace>;

// 2n x 2n Heisenberg matrix of op (identity for displacements).
MatX op_matrix(int n_modes, const GaussianOp& op);
GaussianState apply_gaussian(const GaussianState& state, const GaussianOp& op);

std::vector<double> symplectic_eigenvalues(const MatX& cov);

// Row vector h with h.x = cos(theta) p_mode + sin(theta) q_mode.
VecX quadrature_row(int n_modes, int mode, double theta);

struct HomodyneResult {
    GaussianState state;  // measured mode removed
    double outcome = 0.0;
    double marginal_mean = 0.0;
    double marginal_var = 0.0;
};

// Conditional Gaussian update. Without a supplied outcome one is drawn from
// the marginal using rng at the given counter.
HomodyneResult homodyne(const GaussianState& state, int mode, double theta, std::optional<double> outcome,
                        const CounterRng* rng = nullptr, std::uint64_t counter = 0);

// One protocol step as a circuit on [logical, resources...].
struct StepCircuit {
    int n_modes = 0;
    std::vector<int> resource_modes;           // start in vacuum, squeezed by the first ops
    std::vector<GaussianOp> ops;
    std::vector<std::pair<int, double>> measurements;  // (mode, theta)
    int output = 0;
};

StepCircuit cvw_step_circuit(const HomodyneBasis& basis, double g, double epsilon);
StepCircuit macronode_step_circuit(const MacronodeBasis& basis, double t, double epsilon);
std::vector<StepCircuit> plan_circuits(const MeasurementPlan& plan);

// Linear (Heisenberg) analysis of one step: output and outcomes as linear
// functions of the step's initial quadratures, and the correction that
// removes every anti-squeezed resource quadrature from the output.
struct StepLinearMap {
    MatX outcomes;    // k x 2n, raw outcome rows
    MatX output;      // 2 x 2n, uncorrected output rows
    Eigen::Matrix<Real, 2, Eigen::Dynamic> correction;  // shift = correction * raw outcomes
    MatX corrected;   // 2 x 2n, output rows after correction
    Mat2 gate;        // corrected output on the logical input quadratures
    double residual = 0.0;  // max |coefficient| left on anti-squeezed quadratures
    Mat2 noise_after; // covariance added on the output by resource quadratures
};

StepLinearMap analyze_step(const StepCircuit& c);

enum class Averaging { Analytic, MonteCarlo };

struct ChannelEstimate {
    Mat2 realized_gate = Mat2::Identity();
    Mat2 output_cov = Mat2::Zero();       // averaged over outcomes
    Mat2 added_cov_after = Mat2::Zero();  // output_cov - E cov_in E^T
    Mat2 added_cov = Mat2::Zero();        // E^{-1} added_cov_after E^{-T}
    Mat2 conditional_cov = Mat2::Zero();  // outcome-independent part
    Mat2 mean_spread = Mat2::Zero();      // covariance of corrected conditional means
    double correction_residual = 0.0;
    std::size_t samples = 0;
};

ChannelEstimate run_channel(const MeasurementPlan& plan, const Mat2& input_cov, Averaging averaging,
                            std::size_t samples = 0, std::uint64_t seed = 0, Execution exec = Execution::Parallel);

// Deferred-measurement evaluation: logical output for explicit values of the
// input quadratures and of each step's resource vacuum quadratures
// (q then p per resource mode).
Vec2 corrected_output_sample(const MeasurementPlan& plan, const Vec2& input, const std::vector<VecX>& resource_values);

// Oracle-vs-formula comparison over random plans: protocol cycles
// cvw / macronode / dictionary with up to 6 / 3 / 4 steps, cvw on random
// (g, eps), dual-rail protocols on random alpha. kernel_scale multiplies the
// formula side (1 in normal use; other values are a negative control).
struct EquivalenceOptions {
    std::size_t plans = 200;
    std::uint64_t seed = 42;
    std::size_t mc_samples = 0;  // > 0 adds a Monte Carlo run per plan
    double kernel_scale = 1.0;
    Execution exec = Execution::Parallel;
};

struct EquivalenceReport {
    std::size_t plans = 0;
    double max_abs_dev = 0.0;   // max |added_cov - sigma_before / 2|
    double max_gate_dev = 0.0;  // max |realized - (-1)^{dual steps} formula gate|
    double max_residual = 0.0;
    double max_mc_z = 0.0;      // max |MC - analytic| / standard error
};

MeasurementPlan equivalence_plan(std::size_t index, std::uint64_t seed);
EquivalenceReport oracle_equivalence(const EquivalenceOptions& opt);

// Largest entrywise |mc - analytic| over the outcome-spread standard error.
double monte_carlo_z(const ChannelEstimate& mc, const ChannelEstimate& analytic);

}  // namespace cvnoise::oracle
