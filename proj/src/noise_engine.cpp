#include "cvnoise/noise_engine.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "cvnoise/errors.hpp"

namespace cvnoise {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Half-trace contribution of C^{-1} K C^{-T} for diagonal K.
double half_trace_term(const Mat2& cumulative, double k00, double k11) {
    const Mat2 ci = inverse_unimodular(cumulative);
    return 0.5 * (k00 * ci.col(0).squaredNorm() + k11 * ci.col(1).squaredNorm());
}

double sv_of_gates(const std::vector<Mat2>& gates, const Mat2& kernel) {
    Mat2 c = Mat2::Identity();
    double sv = 0.0;
    for (const auto& g : gates) {
        c = g * c;
        sv += half_trace_term(c, kernel(0, 0), kernel(1, 1));
    }
    return std::isfinite(sv) ? sv : kInf;
}

// Objective wrapper: solver failures at isolated angles are +inf.
template <typename F>
double guarded(F&& f) {
    try {
        return f();
    } catch (const Error&) {
        return kInf;
    }
}

}  // namespace

NoiseKernel NoiseKernel::cvw(double epsilon) {
    NoiseKernel k;
    k.matrix << 0.0, 0.0, 0.0, epsilon;
    return k;
}

NoiseKernel NoiseKernel::cvw_upper(double epsilon) {
    NoiseKernel k;
    k.matrix << epsilon, 0.0, 0.0, 0.0;
    return k;
}

NoiseKernel NoiseKernel::macronode(double epsilon, double t) {
    NoiseKernel k;
    k.matrix << epsilon / (t * t), 0.0, 0.0, epsilon;
    return k;
}

bool NoiseKernel::valid(double tol) const {
    if (std::abs(matrix(0, 1) - matrix(1, 0)) > tol) return false;
    Eigen::SelfAdjointEigenSolver<Mat2> es(matrix);
    return es.eigenvalues().minCoeff() >= -tol;
}

NoiseKernel kernel_for(Protocol protocol, const ProtocolParams& params) {
    if (protocol == Protocol::Cvw) return NoiseKernel::cvw(params.epsilon);
    return NoiseKernel::macronode(params.epsilon, params.coupling);
}

SigmaAccumulation accumulate_sigma(const std::vector<Mat2>& gates, const Mat2& kernel) {
    SigmaAccumulation acc;
    Mat2 c = Mat2::Identity();
    for (const auto& g : gates) {
        if (!g.allFinite() || std::abs(g.determinant()) < 1e-300)
            raise(ErrorKind::DegenerateMeasurement, "singular step gate");
        c = g * c;
        const Mat2 ci = inverse_unimodular(c);
        acc.per_step_terms.push_back(ci * kernel * ci.transpose());
        acc.sigma_before += acc.per_step_terms.back();
    }
    acc.realized = c;
    // Noise after the gate: each kernel is pushed through the remaining steps.
    Mat2 tail = Mat2::Identity();
    for (auto it = gates.rbegin(); it != gates.rend(); ++it) {
        acc.sigma_after += tail * kernel * tail.transpose();
        tail = tail * (*it);
    }
    return acc;
}

SigmaAccumulation accumulate_sigma(const MeasurementPlan& plan) {
    return accumulate_sigma(step_gates(plan), kernel_for(plan.protocol, plan.params).matrix);
}

double scalar_variance(const SigmaAccumulation& acc) { return 0.5 * acc.sigma_before.trace(); }

double plan_scalar_variance(const MeasurementPlan& plan) {
    return guarded([&] { return sv_of_gates(step_gates(plan), kernel_for(plan.protocol, plan.params).matrix); });
}

SvReport scalar_variance_report(const MeasurementPlan& plan) {
    SvReport r;
    r.plan = plan;
    r.sv = scalar_variance(accumulate_sigma(plan));
    r.objective_evals = 1;
    return r;
}

SvReport canonical_macronode_sv(const Mat2& target, const ProtocolParams& params) {
    return scalar_variance_report(solve_macronode_plan(target, params, MacronodeFreeMode::canonical()));
}

namespace {

SvReport min_homodyne_protocol(const Mat2& target, Protocol protocol, const ProtocolParams& params, int n,
                               const GridGoldenOptions& opt) {
    auto plan_at = [&](double theta) {
        if (protocol == Protocol::Cvw)
            return solve_cvw_plan(target, n, WireParams{params.coupling, params.epsilon}, theta);
        return solve_dictionary_plan(target, n, params, theta);
    };
    if (n == 3) {
        SvReport r = scalar_variance_report(plan_at(0.0));
        return r;
    }
    if (n != 4) raise(ErrorKind::InvalidParameter, "homodyne protocols support n = 3 or 4");
    const MinimizeResult m =
        minimize_periodic([&](double th) { return guarded([&] { return plan_scalar_variance(plan_at(th)); }); }, opt);
    if (!std::isfinite(m.value)) raise(ErrorKind::UnreachableGate, "no feasible four-step plan on the search grid");
    SvReport r;
    r.plan = plan_at(m.argmin);
    r.sv = m.value;
    r.minimized = true;
    r.free_theta_opt = m.argmin;
    r.objective_evals = m.evals;
    return r;
}

SvReport min_macronode(const Mat2& target, const ProtocolParams& params, const GridGoldenOptions& opt) {
    const Mat2 form = macronode_constraint_form(target, params.coupling);
    const double scale = std::max(1.0, (squeeze(params.coupling) * target * squeeze(params.coupling)).cwiseAbs().maxCoeff());
    SvReport best;
    best.sv = kInf;
    best.minimized = true;

    auto consider = [&](const MinimizeResult& m, const MacronodeFreeMode& mode) {
        best.objective_evals += m.evals;
        if (m.value < best.sv) {
            best.sv = m.value;
            best.free_theta_opt = m.argmin;
            best.plan = solve_macronode_plan(target, params, mode);
        }
    };

    if (form.cwiseAbs().maxCoeff() <= 1e-12 * scale) {
        // Constraint vanishes identically: both first-step arms are free.
        std::size_t inner_evals = 0;
        auto inner = [&](double a) {
            const MinimizeResult m = minimize_periodic(
                [&](double b) {
                    return guarded([&] {
                        return plan_scalar_variance(solve_macronode_plan(target, params, MacronodeFreeMode::free_both(a, b)));
                    });
                },
                opt);
            inner_evals += m.evals;
            return m;
        };
        const MinimizeResult outer = minimize_periodic([&](double a) { return inner(a).value; }, opt);
        const MinimizeResult at = inner(outer.argmin);
        MinimizeResult total = at;
        total.evals = inner_evals;
        consider(total, MacronodeFreeMode::free_both(outer.argmin, at.argmin));
        best.free_theta_opt = outer.argmin;
    } else {
        for (FreeArm arm : {FreeArm::A, FreeArm::B}) {
            auto f = [&](double th) {
                return guarded([&] {
                    return plan_scalar_variance(solve_macronode_plan(target, params, MacronodeFreeMode::free(th, arm)));
                });
            };
            const MinimizeResult m = minimize_periodic(f, opt);
            if (std::isfinite(m.value)) consider(m, MacronodeFreeMode::free(m.argmin, arm));
        }
    }
    if (!std::isfinite(best.sv)) raise(ErrorKind::UnreachableGate, "no feasible two-macronode plan on the search grid");
    return best;
}

}  // namespace

SvReport min_scalar_variance(const Mat2& target, Protocol protocol, const ProtocolParams& params, int n,
                             const GridGoldenOptions& opt) {
    if (std::abs(target.determinant() - 1.0) > 1e-9) raise(ErrorKind::InvalidParameter, "target is not symplectic");
    if (protocol == Protocol::Macronode) {
        if (n != 2) raise(ErrorKind::InvalidParameter, "macronode minimization supports n = 2");
        return min_macronode(target, params, opt);
    }
    return min_homodyne_protocol(target, protocol, params, n, opt);
}

std::vector<double> sv_g_decomposition(const MeasurementPlan& cvw_plan) {
    if (cvw_plan.protocol != Protocol::Cvw) raise(ErrorKind::InvalidParameter, "decomposition is defined for cvw plans");
    const std::size_t n = cvw_plan.homodyne.size();
    if (n == 0 || n % 2 != 0) raise(ErrorKind::InvalidParameter, "decomposition needs an even number of steps");
    const double g = cvw_plan.params.coupling;
    const RemodeledWire rw = remodel(WireParams{g, cvw_plan.params.epsilon}, RemodelMode::AlternatingSelfLoop);
    const double eps = cvw_plan.params.epsilon;
    std::vector<double> f;
    f.reserve(n);
    Mat2 c = Mat2::Identity();
    for (std::size_t j = 1; j <= n; ++j) {
        const double sigma = cvw_plan.homodyne[j - 1].sigma() * rw.shear_rescale(static_cast<int>(j));
        c = fourier() * shear(sigma) * c;
        f.push_back(half_trace_term(c, 0.0, eps));
    }
    return f;
}

double remodeled_sv(const std::vector<double>& f, double g) {
    double s = 0.0;
    for (std::size_t i = 0; i < f.size(); ++i) s += (i % 2 == 0) ? f[i] / (g * g) : f[i];
    return s;
}

double remodeled_sv_printed(const std::vector<double>& f, double g) {
    double s = 0.0;
    for (std::size_t i = 0; i < f.size(); ++i) s += (i % 2 == 0) ? f[i] : f[i] / (g * g);
    return s;
}

std::vector<double> rotation_grid(int points) {
    if (points < 2) raise(ErrorKind::InvalidParameter, "grid needs at least 2 points");
    std::vector<double> out(points);
    for (int k = 0; k < points; ++k) out[k] = 2.0 * std::numbers::pi * (k + 1) / (points + 1);
    return out;
}

double rotation_sv(Protocol protocol, int n, const ProtocolParams& params, double theta) {
    const Mat2 target = rotation(theta);
    return guarded([&] {
        if (protocol == Protocol::Macronode) {
            if (n != 2) raise(ErrorKind::InvalidParameter, "macronode rotation sweep uses the canonical n = 2 plan");
            return canonical_macronode_sv(target, params).sv;
        }
        return min_scalar_variance(target, protocol, params, n).sv;
    });
}

std::vector<SweepPoint> rotation_sweep(Protocol protocol, int n, const ProtocolParams& params,
                                       const std::vector<double>& thetas, Execution exec) {
    if (protocol == Protocol::Macronode && n != 2)
        raise(ErrorKind::InvalidParameter, "macronode rotation sweep uses n = 2");
    if (protocol != Protocol::Macronode && n != 3 && n != 4)
        raise(ErrorKind::InvalidParameter, "rotation sweep supports n = 3 or 4");
    std::vector<SweepPoint> out(thetas.size());
    const long count = static_cast<long>(thetas.size());
    if (exec == Execution::Parallel) {
#pragma omp parallel for schedule(dynamic, 4)
        for (long i = 0; i < count; ++i) out[i] = SweepPoint{thetas[i], rotation_sv(protocol, n, params, thetas[i])};
    } else {
        for (long i = 0; i < count; ++i) out[i] = SweepPoint{thetas[i], rotation_sv(protocol, n, params, thetas[i])};
    }
    return out;
}

double squeezing_floor(double eta, const ProtocolParams& params) {
    const double g = params.coupling;
    return params.epsilon * (eta * eta + 1.0 / (eta * eta)) * std::min(1.0, 1.0 / (g * g));
}

BoundRecord evaluate_bounds(const GateSample& gate, const DrwParams& drw, bool check_floor, double tol) {
    const Mat2 e = gate.gate();
    const ProtocolParams cvw = params_for(Protocol::Cvw, drw);
    const ProtocolParams dual = params_for(Protocol::Dictionary, drw);
    const double t2 = drw.t * drw.t;

    BoundRecord r;
    r.gate = gate;
    r.cvw4 = min_scalar_variance(e, Protocol::Cvw, cvw, 4).sv;
    r.dict4 = min_scalar_variance(e, Protocol::Dictionary, dual, 4).sv;
    r.macro_canonical = canonical_macronode_sv(e, dual).sv;
    r.viol_cvw_bound = r.cvw4 - r.macro_canonical < 3.0 * drw.eps_d / t2 - tol;
    r.viol_dict_bound = r.dict4 - r.macro_canonical < drw.eps_d * (1.0 + 2.0 * std::numbers::sqrt2 * drw.t) / t2 - tol;
    if (check_floor) {
        r.macro_min = min_scalar_variance(e, Protocol::Macronode, dual, 2).sv;
        const double f_cvw = squeezing_floor(gate.eta, cvw);
        const double f_dual = squeezing_floor(gate.eta, dual);
        r.floor = std::max(f_cvw, f_dual);
        r.viol_floor = r.cvw4 <= f_cvw - tol || r.dict4 <= f_dual - tol || r.macro_min <= f_dual - tol;
        r.viol_half_floor =
            r.cvw4 <= 0.5 * f_cvw - tol || r.dict4 <= 0.5 * f_dual - tol || r.macro_min <= 0.5 * f_dual - tol;
    }
    return r;
}

BoundReport bound_suite(const BoundOptions& opt) {
    if (opt.samples == 0) raise(ErrorKind::InvalidParameter, "bound suite needs at least one sample");
    const CounterRng root(opt.seed);
    BoundReport rep;
    rep.records.resize(opt.samples);
    const long count = static_cast<long>(opt.samples);
    auto one = [&](long i) {
        GateSample g = random_gate(root.split(static_cast<std::uint64_t>(i)));
        if (opt.eta_override > 0.0) g.eta = opt.eta_override;
        rep.records[i] = evaluate_bounds(g, opt.drw, opt.check_floor, opt.tolerance);
    };
    if (opt.exec == Execution::Parallel) {
#pragma omp parallel for schedule(dynamic, 1)
        for (long i = 0; i < count; ++i) one(i);
    } else {
        for (long i = 0; i < count; ++i) one(i);
    }

    const double t2 = opt.drw.t * opt.drw.t;
    rep.required_cvw_margin = 3.0 * opt.drw.eps_d / t2;
    rep.required_dict_margin = opt.drw.eps_d * (1.0 + 2.0 * std::numbers::sqrt2 * opt.drw.t) / t2;
    rep.min_cvw_margin = rep.min_dict_margin = rep.min_floor_ratio = kInf;
    const ProtocolParams cvw = params_for(Protocol::Cvw, opt.drw);
    const ProtocolParams dual = params_for(Protocol::Dictionary, opt.drw);
    for (const auto& r : rep.records) {
        rep.cvw_bound_violations += r.viol_cvw_bound;
        rep.dict_bound_violations += r.viol_dict_bound;
        rep.floor_violations += r.viol_floor;
        rep.half_floor_violations += r.viol_half_floor;
        rep.min_cvw_margin = std::min(rep.min_cvw_margin, r.cvw4 - r.macro_canonical);
        rep.min_dict_margin = std::min(rep.min_dict_margin, r.dict4 - r.macro_canonical);
        if (opt.check_floor) {
            const double fc = squeezing_floor(r.gate.eta, cvw), fd = squeezing_floor(r.gate.eta, dual);
            rep.min_floor_ratio = std::min({rep.min_floor_ratio, r.cvw4 / fc, r.dict4 / fd, r.macro_min / fd});
        }
    }
    return rep;
}

}  // namespace cvnoise
