#include "cvnoise/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "cvnoise/errors.hpp"
#include "cvnoise/sampling.hpp"

namespace cvnoise::oracle {

namespace {

using Mat2R = Eigen::Matrix<Real, 2, 2>;
using Vec2R = Eigen::Matrix<Real, 2, 1>;

void check_mode(int n, int mode) {
    if (mode < 0 || mode >= n) raise(ErrorKind::IndexOutOfRange, "mode " + std::to_string(mode) + " outside register");
}

MatX remove_mode(const MatX& a, int n, int mode, bool rows, bool cols) {
    std::vector<int> keep;
    for (int i = 0; i < 2 * n; ++i)
        if (i != mode && i != n + mode) keep.push_back(i);
    const int r = rows ? static_cast<int>(keep.size()) : static_cast<int>(a.rows());
    const int c = cols ? static_cast<int>(keep.size()) : static_cast<int>(a.cols());
    MatX out(r, c);
    for (int i = 0; i < r; ++i)
        for (int j = 0; j < c; ++j) out(i, j) = a(rows ? keep[i] : i, cols ? keep[j] : j);
    return out;
}

Mat2R block_of(const MatX& cov, int n, int mode) {
    Mat2R m;
    m << cov(mode, mode), cov(mode, n + mode), cov(n + mode, mode), cov(n + mode, n + mode);
    return m;
}

}  // namespace

int GaussianState::index_of(int label) const {
    const auto it = std::find(labels.begin(), labels.end(), label);
    if (it == labels.end()) raise(ErrorKind::IndexOutOfRange, "no mode with label " + std::to_string(label));
    return static_cast<int>(it - labels.begin());
}

Mat2 GaussianState::mode_cov(int mode) const {
    check_mode(n_modes(), mode);
    return block_of(cov, n_modes(), mode).cast<double>();
}

Vec2 GaussianState::mode_mean(int mode) const {
    check_mode(n_modes(), mode);
    return Vec2(static_cast<double>(mean(mode)), static_cast<double>(mean(n_modes() + mode)));
}

GaussianState vacuum(int n_modes, int first_label) {
    if (n_modes < 1) raise(ErrorKind::InvalidParameter, "register needs at least one mode");
    GaussianState s;
    s.mean = VecX::Zero(2 * n_modes);
    s.cov = 0.5 * MatX::Identity(2 * n_modes, 2 * n_modes);
    for (int i = 0; i < n_modes; ++i) s.labels.push_back(first_label + i);
    return s;
}

GaussianState single_mode(const Mat2& cov, const Vec2& mean, int label) {
    GaussianState s;
    s.mean = mean.cast<Real>();
    s.cov = cov.cast<Real>();
    s.labels = {label};
    return s;
}

GaussianState tensor(const GaussianState& a, const GaussianState& b) {
    const int na = a.n_modes(), nb = b.n_modes(), n = na + nb;
    GaussianState s;
    s.mean = VecX::Zero(2 * n);
    s.cov = MatX::Zero(2 * n, 2 * n);
    // Map local index (block, mode) to the combined ordering.
    auto ia = [&](int i) { return i < na ? i : n + (i - na); };
    auto ib = [&](int i) { return i < nb ? na + i : n + na + (i - nb); };
    for (int i = 0; i < 2 * na; ++i) {
        s.mean(ia(i)) = a.mean(i);
        for (int j = 0; j < 2 * na; ++j) s.cov(ia(i), ia(j)) = a.cov(i, j);
    }
    for (int i = 0; i < 2 * nb; ++i) {
        s.mean(ib(i)) = b.mean(i);
        for (int j = 0; j < 2 * nb; ++j) s.cov(ib(i), ib(j)) = b.cov(i, j);
    }
    s.labels = a.labels;
    s.labels.insert(s.labels.end(), b.labels.begin(), b.labels.end());
    return s;
}

MatX op_matrix(int n, const GaussianOp& op) {
    MatX t = MatX::Identity(2 * n, 2 * n);
    std::visit(
        [&](const auto& o) {
            using T = std::decay_t<decltype(o)>;
            if constexpr (std::is_same_v<T, Squeeze>) {
                check_mode(n, o.mode);
                if (o.s == 0.0 || !std::isfinite(o.s)) raise(ErrorKind::InvalidParameter, "bad squeeze factor");
                t(o.mode, o.mode) = o.s;
                t(n + o.mode, n + o.mode) = 1.0 / o.s;
            } else if constexpr (std::is_same_v<T, Cz>) {
                check_mode(n, o.i);
                check_mode(n, o.j);
                t(n + o.i, o.j) += o.g;
                t(n + o.j, o.i) += o.g;
            } else if constexpr (std::is_same_v<T, BeamSplitter5050>) {
                check_mode(n, o.i);
                check_mode(n, o.j);
                const Real h = std::sqrt(Real(0.5));
                for (int off : {0, n}) {
                    t(off + o.i, off + o.i) = h;
                    t(off + o.i, off + o.j) = h;
                    t(off + o.j, off + o.i) = h;
                    t(off + o.j, off + o.j) = -h;
                }
            } else if constexpr (std::is_same_v<T, SingleMode>) {
                check_mode(n, o.mode);
                t(o.mode, o.mode) = o.m(0, 0);
                t(o.mode, n + o.mode) = o.m(0, 1);
                t(n + o.mode, o.mode) = o.m(1, 0);
                t(n + o.mode, n + o.mode) = o.m(1, 1);
            } else {
                check_mode(n, o.mode);
            }
        },
        op);
    return t;
}

GaussianState apply_gaussian(const GaussianState& state, const GaussianOp& op) {
    const int n = state.n_modes();
    const MatX t = op_matrix(n, op);
    GaussianState out = state;
    out.mean = t * state.mean;
    out.cov = t * state.cov * t.transpose();
    if (const auto* d = std::get_if<Displace>(&op)) {
        out.mean(d->mode) += d->u;
        out.mean(n + d->mode) += d->v;
    }
    return out;
}

std::vector<double> symplectic_eigenvalues(const MatX& cov) {
    const int n = static_cast<int>(cov.rows()) / 2;
    MatX omega = MatX::Zero(2 * n, 2 * n);
    omega.topRightCorner(n, n) = MatX::Identity(n, n);
    omega.bottomLeftCorner(n, n) = -MatX::Identity(n, n);
    Eigen::EigenSolver<MatX> es(omega * cov, false);
    std::vector<double> mags;
    for (int i = 0; i < 2 * n; ++i) mags.push_back(std::abs(es.eigenvalues()(i).imag()));
    std::sort(mags.begin(), mags.end());
    std::vector<double> out;
    for (int i = 0; i < 2 * n; i += 2) out.push_back(0.5 * (mags[i] + mags[i + 1]));
    return out;
}

VecX quadrature_row(int n, int mode, double theta) {
    check_mode(n, mode);
    VecX h = VecX::Zero(2 * n);
    h(mode) = std::sin(static_cast<Real>(theta));
    h(n + mode) = std::cos(static_cast<Real>(theta));
    return h;
}

HomodyneResult homodyne(const GaussianState& state, int mode, double theta, std::optional<double> outcome,
                        const CounterRng* rng, std::uint64_t counter) {
    const int n = state.n_modes();
    const VecX h = quadrature_row(n, mode, theta);
    const VecX sh = state.cov * h;
    const double var = static_cast<double>(h.dot(sh));
    // Rank-one pseudoinverse with cutoff.
    if (!(var > 1e-12)) raise(ErrorKind::DegenerateMeasurement, "measured quadrature has zero variance");
    HomodyneResult r;
    r.marginal_mean = static_cast<double>(h.dot(state.mean));
    r.marginal_var = var;
    if (outcome) {
        r.outcome = *outcome;
    } else {
        if (rng == nullptr) raise(ErrorKind::InvalidParameter, "homodyne sampling needs a generator");
        r.outcome = r.marginal_mean + std::sqrt(var) * rng->normal(counter);
    }
    const VecX mean = state.mean + sh * ((r.outcome - r.marginal_mean) / var);
    const MatX cov = state.cov - sh * sh.transpose() / var;
    r.state.mean = remove_mode(mean, n, mode, true, false);
    r.state.cov = remove_mode(cov, n, mode, true, true);
    r.state.labels = state.labels;
    r.state.labels.erase(r.state.labels.begin() + mode);
    return r;
}

StepCircuit cvw_step_circuit(const HomodyneBasis& basis, double g, double epsilon) {
    if (basis.is_q_measurement()) raise(ErrorKind::UnsupportedBasis, "q-measurement on a cvw node");
    StepCircuit c;
    c.n_modes = 2;
    c.resource_modes = {1};
    const double s = 1.0 / std::sqrt(epsilon);
    c.ops = {Squeeze{1, s}, Cz{0, 1, g}};
    c.measurements = {{0, basis.theta}};
    c.output = 1;
    return c;
}

StepCircuit macronode_step_circuit(const MacronodeBasis& basis, double t, double epsilon) {
    // Mode 0: logical (+) mode of the current macronode; mode 1: its (-) mode;
    // mode 2: the (+) mode of the next macronode. The beamsplitter maps the
    // distributed pair (0, 1) onto the physical arms a, b.
    StepCircuit c;
    c.n_modes = 3;
    c.resource_modes = {1, 2};
    const double s = 1.0 / std::sqrt(epsilon);
    c.ops = {Squeeze{1, s}, Squeeze{2, s}, Cz{1, 2, t}, BeamSplitter5050{0, 1}};
    c.measurements = {{0, basis.theta_a}, {1, basis.theta_b}};
    c.output = 2;
    return c;
}

std::vector<StepCircuit> plan_circuits(const MeasurementPlan& plan) {
    std::vector<StepCircuit> out;
    const double x = plan.params.coupling, eps = plan.params.epsilon;
    switch (plan.protocol) {
        case Protocol::Cvw:
            for (const auto& b : plan.homodyne) out.push_back(cvw_step_circuit(b, x, eps));
            break;
        case Protocol::Dictionary:
            for (const auto& b : plan.homodyne)
                out.push_back(macronode_step_circuit(MacronodeBasis{std::numbers::pi / 2, b.theta}, x, eps));
            break;
        case Protocol::Macronode:
            for (const auto& b : plan.macronode) out.push_back(macronode_step_circuit(b, x, eps));
            break;
    }
    return out;
}

StepLinearMap analyze_step(const StepCircuit& c) {
    const int n = c.n_modes;
    MatX t = MatX::Identity(2 * n, 2 * n);
    for (const auto& op : c.ops) t = op_matrix(n, op) * t;

    const int k = static_cast<int>(c.measurements.size());
    if (k != static_cast<int>(c.resource_modes.size()))
        raise(ErrorKind::InvalidParameter, "step needs one measurement per anti-squeezed resource quadrature");
    StepLinearMap m;
    m.outcomes.resize(k, 2 * n);
    for (int i = 0; i < k; ++i)
        m.outcomes.row(i) = quadrature_row(n, c.measurements[i].first, c.measurements[i].second).transpose() * t;
    m.output.resize(2, 2 * n);
    m.output.row(0) = t.row(c.output);
    m.output.row(1) = t.row(n + c.output);

    MatX cm(k, k), co(2, k);
    for (int j = 0; j < k; ++j) {
        cm.col(j) = m.outcomes.col(c.resource_modes[j]);
        co.col(j) = m.output.col(c.resource_modes[j]);
    }
    Eigen::FullPivLU<MatX> lu(cm);
    if (!lu.isInvertible()) raise(ErrorKind::DegenerateMeasurement, "outcomes do not resolve the resource quadratures");
    const MatX b = co * lu.inverse();
    m.correction = -b;
    m.corrected = m.output - b * m.outcomes;

    m.gate << static_cast<double>(m.corrected(0, 0)), static_cast<double>(m.corrected(0, n)),
        static_cast<double>(m.corrected(1, 0)), static_cast<double>(m.corrected(1, n));
    for (int j : c.resource_modes)
        m.residual = std::max(m.residual, static_cast<double>(m.corrected.col(j).cwiseAbs().maxCoeff()));

    // Resource vacuum quadratures each carry variance 1/2.
    MatX noise(2, 2 * n - 2);
    int col = 0;
    for (int i = 0; i < 2 * n; ++i)
        if (i != 0 && i != n) noise.col(col++) = m.corrected.col(i);
    m.noise_after = (0.5L * noise * noise.transpose()).cast<double>();
    return m;
}

namespace {

struct StepRun {
    StepCircuit circuit;
    StepLinearMap map;
    Mat2R gate;  // map.gate before rounding to double
};

std::vector<StepRun> prepare(const MeasurementPlan& plan) {
    std::vector<StepRun> steps;
    for (auto& c : plan_circuits(plan)) {
        StepLinearMap m = analyze_step(c);
        const int n = c.n_modes;
        Mat2R g;
        g << m.corrected(0, 0), m.corrected(0, n), m.corrected(1, 0), m.corrected(1, n);
        steps.push_back(StepRun{std::move(c), std::move(m), g});
    }
    return steps;
}

GaussianState step_input(const Mat2R& cov, const Vec2R& mean, const StepCircuit& c) {
    GaussianState in;
    in.mean = mean;
    in.cov = cov;
    in.labels = {0};
    return tensor(in, vacuum(c.n_modes - 1, 1));
}

GaussianState run_ops(GaussianState s, const StepCircuit& c) {
    for (const auto& op : c.ops) s = apply_gaussian(s, op);
    return s;
}

// Outcome-averaged moments of one step applied to a single-mode Gaussian whose
// mean is itself random with covariance spread_in. Covariances are carried as
// square-root factors (cov = F F^T): conditioning on a homodyne outcome projects
// the factor, which avoids subtracting the large anti-squeezed variances.
struct AveragedStep {
    MatX factor;  // 2 x m, conditional covariance factor on the output mode
    Mat2R spread;
    Vec2R mean;
};

AveragedStep average_step(const StepRun& step, const MatX& factor_in, const Mat2R& spread_in, const Vec2R& mean_in) {
    const StepCircuit& c = step.circuit;
    const int n = c.n_modes;
    MatX t = MatX::Identity(2 * n, 2 * n);
    for (const auto& op : c.ops) t = op_matrix(n, op) * t;

    const int m_in = static_cast<int>(factor_in.cols());
    MatX b = MatX::Zero(2 * n, m_in + 2 * (n - 1));
    b.row(0).head(m_in) = factor_in.row(0);
    b.row(n).head(m_in) = factor_in.row(1);
    const Real vac = std::sqrt(Real(0.5));
    int col = m_in;
    for (int i = 0; i < 2 * n; ++i)
        if (i != 0 && i != n) b(i, col++) = vac;
    MatX a = t * b;

    // Sequential conditioning in the full register; measured modes are only
    // dropped at the end, so gains stay in one coordinate system.
    const int k = static_cast<int>(c.measurements.size());
    MatX gains(2 * n, k);
    VecX var(k);
    MatX h(k, 2 * n);
    for (int j = 0; j < k; ++j) {
        h.row(j) = quadrature_row(n, c.measurements[j].first, c.measurements[j].second).transpose();
        const VecX w = a.transpose() * h.row(j).transpose();
        var(j) = w.squaredNorm();
        if (!(var(j) > 1e-12)) raise(ErrorKind::DegenerateMeasurement, "measured quadrature has zero variance");
        const VecX aw = a * w;
        gains.col(j) = aw / var(j);
        a -= aw * (w.transpose() / var(j));
    }
    // Outcome j = h_j mu_j + e_j with mu_j = mu_0 + sum_{i<j} gain_i e_i.
    MatX outcome_coef = MatX::Zero(k, k);
    for (int j = 0; j < k; ++j) {
        outcome_coef(j, j) = 1.0;
        for (int i = 0; i < j; ++i) outcome_coef(j, i) = h.row(j).dot(gains.col(i));
    }
    MatX out_rows = MatX::Zero(2, 2 * n);
    out_rows(0, c.output) = 1.0;
    out_rows(1, n + c.output) = 1.0;
    const MatX& corr = step.map.correction;

    // Corrected output mean = (P_out + corr H) T_in mean_in + D e.
    const MatX d = out_rows * gains + corr * outcome_coef;
    MatX t_in(2 * n, 2);
    t_in.col(0) = t.col(0);
    t_in.col(1) = t.col(n);
    const Mat2R lin = (out_rows + corr * h) * t_in;

    AveragedStep r;
    r.factor.resize(2, a.cols());
    r.factor.row(0) = a.row(c.output);
    r.factor.row(1) = a.row(n + c.output);
    r.spread = lin * spread_in * lin.transpose() + d * var.asDiagonal() * d.transpose();
    r.mean = lin * mean_in;
    return r;
}

// One Monte Carlo history; returns the final conditional mean and covariance.
std::pair<Vec2R, Mat2R> sample_history(const std::vector<StepRun>& steps, const Mat2R& input_cov,
                                       const CounterRng& rng) {
    Mat2R cov = input_cov;
    Vec2R mean = Vec2R::Zero();
    std::uint64_t counter = 0;
    for (const auto& st : steps) {
        const StepCircuit& c = st.circuit;
        GaussianState s = run_ops(step_input(cov, mean, c), c);
        std::vector<double> outcomes;
        for (const auto& [mode_index, theta] : c.measurements) {
            // mode_index refers to the step's initial labelling.
            HomodyneResult r = homodyne(s, s.index_of(mode_index), theta, std::nullopt, &rng, counter++);
            outcomes.push_back(r.outcome);
            s = std::move(r.state);
        }
        const int out = s.index_of(c.output);
        const int m = s.n_modes();
        Vec2R shift = Vec2R::Zero();
        for (std::size_t j = 0; j < outcomes.size(); ++j) shift += st.map.correction.col(j) * Real(outcomes[j]);
        s.mean(out) += shift(0);
        s.mean(m + out) += shift(1);
        cov = block_of(s.cov, m, out);
        mean = Vec2R(s.mean(out), s.mean(m + out));
    }
    return {mean, cov};
}

}  // namespace

ChannelEstimate run_channel(const MeasurementPlan& plan, const Mat2& input_cov, Averaging averaging,
                            std::size_t samples, std::uint64_t seed, Execution exec) {
    const std::vector<StepRun> steps = prepare(plan);
    ChannelEstimate est;
    Mat2R e = Mat2R::Identity();
    for (const auto& st : steps) {
        e = st.gate * e;
        est.correction_residual = std::max(est.correction_residual, st.map.residual);
    }
    const Mat2R in = input_cov.cast<Real>();
    Mat2R cond, spread;

    if (averaging == Averaging::Analytic) {
        const Eigen::SelfAdjointEigenSolver<Mat2R> es(in);
        MatX factor = es.eigenvectors() * es.eigenvalues().cwiseMax(Real(0)).cwiseSqrt().asDiagonal();
        spread = Mat2R::Zero();
        Vec2R mean = Vec2R::Zero();
        for (const auto& st : steps) {
            AveragedStep a = average_step(st, factor, spread, mean);
            factor = std::move(a.factor);
            spread = a.spread;
            mean = a.mean;
        }
        cond = factor * factor.transpose();
    } else {
        if (samples < 2) raise(ErrorKind::InvalidParameter, "Monte Carlo averaging needs at least 2 samples");
        const CounterRng root(seed);
        std::vector<Vec2R> means(samples);
        std::vector<Mat2R> covs(samples);
        const long count = static_cast<long>(samples);
        if (exec == Execution::Parallel) {
#pragma omp parallel for schedule(static)
            for (long i = 0; i < count; ++i) std::tie(means[i], covs[i]) = sample_history(steps, in, root.split(i));
        } else {
            for (long i = 0; i < count; ++i) std::tie(means[i], covs[i]) = sample_history(steps, in, root.split(i));
        }
        Vec2R mu = Vec2R::Zero();
        for (const auto& m : means) mu += m;
        mu /= static_cast<Real>(samples);
        spread = Mat2R::Zero();
        for (const auto& m : means) spread += (m - mu) * (m - mu).transpose();
        spread /= static_cast<Real>(samples - 1);
        cond = Mat2R::Zero();
        for (const auto& c : covs) cond += c;
        cond /= static_cast<Real>(samples);
        est.samples = samples;
    }
    const Mat2R out = cond + spread;
    const Mat2R after = out - e * in * e.transpose();
    Mat2R ei;
    ei << e(1, 1), -e(0, 1), -e(1, 0), e(0, 0);
    est.realized_gate = e.cast<double>();
    est.conditional_cov = cond.cast<double>();
    est.mean_spread = spread.cast<double>();
    est.output_cov = out.cast<double>();
    est.added_cov_after = after.cast<double>();
    est.added_cov = (ei * after * ei.transpose()).cast<double>();
    return est;
}

Vec2 corrected_output_sample(const MeasurementPlan& plan, const Vec2& input, const std::vector<VecX>& resource_values) {
    const std::vector<StepRun> steps = prepare(plan);
    if (resource_values.size() != steps.size()) raise(ErrorKind::InvalidParameter, "need resource values for every step");
    Vec2R x = input.cast<Real>();
    for (std::size_t i = 0; i < steps.size(); ++i) {
        const StepCircuit& c = steps[i].circuit;
        const int n = c.n_modes;
        const VecX& r = resource_values[i];
        if (r.size() != 2 * static_cast<int>(c.resource_modes.size()))
            raise(ErrorKind::InvalidParameter, "need (q, p) for every resource mode");
        VecX full = VecX::Zero(2 * n);
        full(0) = x(0);
        full(n) = x(1);
        for (std::size_t j = 0; j < c.resource_modes.size(); ++j) {
            full(c.resource_modes[j]) = r(2 * j);
            full(n + c.resource_modes[j]) = r(2 * j + 1);
        }
        x = steps[i].map.corrected * full;
    }
    return x.cast<double>();
}

MeasurementPlan equivalence_plan(std::size_t index, std::uint64_t seed) {
    CounterRng rng = CounterRng(seed).split(index);
    const Protocol protocol = index % 3 == 0 ? Protocol::Cvw : (index % 3 == 1 ? Protocol::Macronode : Protocol::Dictionary);
    const int max_steps = protocol == Protocol::Cvw ? 6 : (protocol == Protocol::Macronode ? 3 : 4);
    const int n = 1 + static_cast<int>(rng.next_uniform() * max_steps);
    ProtocolParams params;
    if (protocol == Protocol::Cvw) {
        params.coupling = rng.next_uniform(0.3, 1.5);
        params.epsilon = rng.next_uniform(0.01, 0.5);
    } else {
        params = params_for(protocol, drw_params(rng.next_uniform(0.3, 1.5)));
    }
    return random_plan(protocol, std::min(n, max_steps), params, rng.split(1));
}

double monte_carlo_z(const ChannelEstimate& mc, const ChannelEstimate& analytic) {
    const Mat2& c = analytic.mean_spread;
    const double n = static_cast<double>(mc.samples);
    double z = 0.0;
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j) {
            const double diff = std::abs(mc.output_cov(i, j) - analytic.output_cov(i, j));
            const double se = std::sqrt((c(i, i) * c(j, j) + c(i, j) * c(i, j)) / n);
            const double floor = 1e-10 * std::max(1.0, std::abs(analytic.output_cov(i, j)));
            if (diff <= floor) continue;
            z = std::max(z, se > 0.0 ? diff / se : std::numeric_limits<double>::infinity());
        }
    return z;
}

EquivalenceReport oracle_equivalence(const EquivalenceOptions& opt) {
    EquivalenceReport rep;
    rep.plans = opt.plans;
    std::vector<EquivalenceReport> per(opt.plans);
    const long count = static_cast<long>(opt.plans);
    auto one = [&](long i) {
        const MeasurementPlan plan = equivalence_plan(static_cast<std::size_t>(i), opt.seed);
        // A legal, non-vacuum input: squeezed and rotated thermal state.
        CounterRng rng = CounterRng(opt.seed ^ 0x5eedULL).split(static_cast<std::uint64_t>(i));
        const Mat2 r = rotation(rng.next_uniform(0.0, std::numbers::pi)) * squeeze(rng.next_uniform(0.5, 2.0));
        const Mat2 input = rng.next_uniform(0.5, 1.5) * r * r.transpose();

        SigmaAccumulation acc = accumulate_sigma(plan);
        const Mat2 formula = 0.5 * opt.kernel_scale * acc.sigma_before;
        const ChannelEstimate an = run_channel(plan, input, Averaging::Analytic, 0, 0, Execution::Serial);
        const double sign = (plan.protocol != Protocol::Cvw && plan.size() % 2 == 1) ? -1.0 : 1.0;
        EquivalenceReport& e = per[i];
        e.max_abs_dev = (an.added_cov - formula).cwiseAbs().maxCoeff();
        e.max_gate_dev = (an.realized_gate - sign * acc.realized).cwiseAbs().maxCoeff();
        e.max_residual = an.correction_residual;
        if (opt.mc_samples > 0) {
            const ChannelEstimate mc =
                run_channel(plan, input, Averaging::MonteCarlo, opt.mc_samples, opt.seed + i, Execution::Serial);
            e.max_mc_z = monte_carlo_z(mc, an);
        }
    };
    if (opt.exec == Execution::Parallel) {
#pragma omp parallel for schedule(dynamic, 1)
        for (long i = 0; i < count; ++i) one(i);
    } else {
        for (long i = 0; i < count; ++i) one(i);
    }
    for (const auto& e : per) {
        rep.max_abs_dev = std::max(rep.max_abs_dev, e.max_abs_dev);
        rep.max_gate_dev = std::max(rep.max_gate_dev, e.max_gate_dev);
        rep.max_residual = std::max(rep.max_residual, e.max_residual);
        rep.max_mc_z = std::max(rep.max_mc_z, e.max_mc_z);
    }
    return rep;
}

}  // namespace cvnoise::oracle
