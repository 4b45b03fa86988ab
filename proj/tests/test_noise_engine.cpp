#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "cvnoise/errors.hpp"
#include "cvnoise/noise_engine.hpp"

using namespace cvnoise;
using std::numbers::pi;

namespace {

double maxabs(const Mat2& a) { return a.cwiseAbs().maxCoeff(); }

// Independent route: propagate the noise forward in the output frame,
// N <- U N U^T + K per step, then pull it back through the realized gate.
Mat2 sigma_before_forward(const MeasurementPlan& plan) {
    const Mat2 k = kernel_for(plan.protocol, plan.params).matrix;
    Mat2 n = Mat2::Zero(), e = Mat2::Identity();
    for (const Mat2& u : step_gates(plan)) {
        n = u * n * u.transpose() + k;
        e = u * e;
    }
    const Mat2 ei = e.inverse();
    return ei * n * ei.transpose();
}

MeasurementPlan plan_of(Protocol p, int n, std::uint64_t seed, const ProtocolParams& params) {
    return random_plan(p, n, params, CounterRng(seed));
}

}  // namespace

TEST_CASE("noise kernels") {
    CHECK(maxabs(NoiseKernel::cvw(0.3).matrix - Eigen::Vector2d(0.0, 0.3).asDiagonal().toDenseMatrix()) == 0.0);
    const Mat2 m = NoiseKernel::macronode(0.3, 0.5).matrix;
    CHECK(m(0, 0) == doctest::Approx(1.2));
    CHECK(m(1, 1) == doctest::Approx(0.3));
    CHECK(m(0, 1) == 0.0);
    CHECK(NoiseKernel::cvw_upper(0.2).matrix(0, 0) == doctest::Approx(0.2));
    CHECK(NoiseKernel::cvw(0.2).valid());
    NoiseKernel bad;
    bad.matrix << -1.0, 0.0, 0.0, 1.0;
    CHECK_FALSE(bad.valid());
}

TEST_CASE("one cvw step in closed form") {
    // U^{-1} K U^{-T} = eps (1/g, -sigma/g)(1/g, -sigma/g)^T.
    const double g = 0.7, eps = 0.15, sigma = 0.4;
    MeasurementPlan p;
    p.protocol = Protocol::Cvw;
    p.params = ProtocolParams{g, eps};
    p.homodyne = {HomodyneBasis::from_shear(sigma)};
    const SigmaAccumulation acc = accumulate_sigma(p);
    Mat2 ref;
    ref << 1.0 / (g * g), -sigma / (g * g), -sigma / (g * g), sigma * sigma / (g * g);
    CHECK(maxabs(acc.sigma_before - eps * ref) < 1e-14);
    CHECK(scalar_variance(acc) == doctest::Approx(0.5 * eps * (1 + sigma * sigma) / (g * g)));
}

TEST_CASE("sigma accumulation matches the forward recursion") {
    const DrwParams drw = drw_params(0.7);
    for (auto proto : {Protocol::Cvw, Protocol::Macronode, Protocol::Dictionary})
        for (int n = 1; n <= 5; ++n)
            for (std::uint64_t s = 0; s < 20; ++s) {
                const MeasurementPlan plan = plan_of(proto, n, 1000 * n + s, params_for(proto, drw));
                const SigmaAccumulation acc = accumulate_sigma(plan);
                const Mat2 ref = sigma_before_forward(plan);
                CHECK(maxabs(acc.sigma_before - ref) <= 1e-10 * std::max(1.0, maxabs(ref)));
                Mat2 sum = Mat2::Zero();
                for (const auto& t : acc.per_step_terms) sum += t;
                CHECK(maxabs(sum - acc.sigma_before) <= 1e-12 * std::max(1.0, maxabs(ref)));
                const Mat2 after = acc.realized * acc.sigma_before * acc.realized.transpose();
                CHECK(maxabs(acc.sigma_after - after) <= 1e-9 * std::max(1.0, maxabs(after)));
                CHECK(plan_scalar_variance(plan) == doctest::Approx(scalar_variance(acc)).epsilon(1e-12));
            }
}

TEST_CASE("sigma is symmetric positive semidefinite and linear in epsilon") {
    for (std::uint64_t s = 0; s < 50; ++s) {
        MeasurementPlan plan = plan_of(Protocol::Cvw, 4, s, ProtocolParams{0.8, 0.1});
        const Mat2 a = accumulate_sigma(plan).sigma_before;
        CHECK(std::abs(a(0, 1) - a(1, 0)) <= 1e-12 * maxabs(a));
        Eigen::SelfAdjointEigenSolver<Mat2> es(a);
        CHECK(es.eigenvalues()(0) >= -1e-12 * maxabs(a));
        plan.params.epsilon = 0.2;
        CHECK(maxabs(accumulate_sigma(plan).sigma_before - 2.0 * a) == 0.0);
    }
}

TEST_CASE("identity gate closed forms") {
    // Single-rail (4 + t^2)/t^2 and dictionary 2(1 + t^2)/t^2, in units of eps_D.
    for (double alpha : {0.3, 0.5756, 1.0}) {
        const DrwParams d = drw_params(alpha);
        const double t2 = d.t * d.t;
        const SvReport c = min_scalar_variance(Mat2::Identity(), Protocol::Cvw, params_for(Protocol::Cvw, d), 4);
        const SvReport r = min_scalar_variance(Mat2::Identity(), Protocol::Dictionary, params_for(Protocol::Dictionary, d), 4);
        CHECK(c.sv == doctest::Approx(d.eps_d * (4 + t2) / t2).epsilon(1e-10));
        CHECK(r.sv == doctest::Approx(2 * d.eps_d * (1 + t2) / t2).epsilon(1e-10));
        CHECK(c.minimized);
    }
}

TEST_CASE("canonical macronode plan is angle independent for rotations") {
    const DrwParams d = drw_params(0.5756);
    const ProtocolParams p = params_for(Protocol::Macronode, d);
    const double ref = d.eps_d * (1 + d.t * d.t) / (d.t * d.t);
    for (double th = 0.05; th < 2 * pi; th += 0.3) CHECK(canonical_macronode_sv(rotation(th), p).sv == doctest::Approx(ref).epsilon(1e-12));
}

TEST_CASE("four-step minimum agrees with a dense scan") {
    std::mt19937_64 gen(31);
    std::uniform_real_distribution<double> ang(0.0, 2 * pi), sq(1.0 / 3.0, 3.0);
    const DrwParams d = drw_params(0.5756);
    for (auto proto : {Protocol::Cvw, Protocol::Dictionary}) {
        const ProtocolParams p = params_for(proto, d);
        for (int i = 0; i < 5; ++i) {
            const Mat2 target = rotation(ang(gen)) * squeeze(sq(gen)) * rotation(ang(gen));
            const SvReport rep = min_scalar_variance(target, proto, p, 4);
            double scan = INFINITY;
            for (int k = 0; k < 20000; ++k) {
                const double th = -pi / 2 + pi * (k + 0.5) / 20000;
                try {
                    const MeasurementPlan plan = proto == Protocol::Cvw ? solve_cvw_plan(target, 4, WireParams{p.coupling, p.epsilon}, th)
                                                                        : solve_dictionary_plan(target, 4, p, th);
                    scan = std::min(scan, plan_scalar_variance(plan));
                } catch (const Error&) {
                }
            }
            CHECK(rep.sv <= scan * (1 + 1e-12));
            CHECK(rep.sv >= scan * (1 - 1e-4));
            CHECK(maxabs(realized_gate(rep.plan) - target) < 1e-8 * std::max(1.0, maxabs(target)));
        }
    }
}

TEST_CASE("macronode minimum agrees with a dense scan on both arms") {
    std::mt19937_64 gen(37);
    std::uniform_real_distribution<double> ang(0.0, 2 * pi), sq(1.0 / 3.0, 3.0);
    const DrwParams d = drw_params(0.5756);
    const ProtocolParams p = params_for(Protocol::Macronode, d);
    for (int i = 0; i < 5; ++i) {
        const Mat2 target = rotation(ang(gen)) * squeeze(sq(gen)) * rotation(ang(gen));
        const SvReport rep = min_scalar_variance(target, Protocol::Macronode, p, 2);
        double scan = INFINITY;
        for (auto arm : {FreeArm::A, FreeArm::B})
            for (int k = 0; k < 20000; ++k) {
                const double th = -pi / 2 + pi * (k + 0.5) / 20000;
                try {
                    scan = std::min(scan, plan_scalar_variance(solve_macronode_plan(target, p, MacronodeFreeMode::free(th, arm))));
                } catch (const Error&) {
                }
            }
        CHECK(rep.sv <= scan * (1 + 1e-12));
        CHECK(rep.sv >= scan * (1 - 1e-4));
        CHECK(rep.sv <= canonical_macronode_sv(target, p).sv * (1 + 1e-12));
    }
}

TEST_CASE("the unique three-step plan") {
    const DrwParams d = drw_params(0.5756);
    const Mat2 target = rotation(2.0) * squeeze(1.5);
    const SvReport rep = min_scalar_variance(target, Protocol::Cvw, params_for(Protocol::Cvw, d), 3);
    CHECK_FALSE(rep.minimized);
    CHECK(rep.sv == doctest::Approx(plan_scalar_variance(solve_cvw_plan(target, 3, d.cvw_wire()))));
}

TEST_CASE("invalid minimization requests") {
    const ProtocolParams p{0.5, 0.1};
    CHECK_THROWS_AS(min_scalar_variance(2.0 * Mat2::Identity(), Protocol::Cvw, p, 4), Error);
    CHECK_THROWS_AS(min_scalar_variance(Mat2::Identity(), Protocol::Cvw, p, 5), Error);
    CHECK_THROWS_AS(min_scalar_variance(Mat2::Identity(), Protocol::Macronode, p, 3), Error);
}

TEST_CASE("degenerate plans have infinite scalar variance") {
    MeasurementPlan m;
    m.protocol = Protocol::Macronode;
    m.params = ProtocolParams{0.5, 0.1};
    m.macronode = {MacronodeBasis{0.2, 0.2}};
    CHECK(std::isinf(plan_scalar_variance(m)));
}

TEST_CASE("remodeled decomposition") {
    for (std::uint64_t s = 0; s < 30; ++s) {
        const double g = 0.3 + 0.04 * static_cast<double>(s);
        const MeasurementPlan plan = plan_of(Protocol::Cvw, 2 + 2 * static_cast<int>(s % 3), s, ProtocolParams{g, 0.2});
        const auto f = sv_g_decomposition(plan);
        CHECK(f.size() == plan.size());
        const double sv = plan_scalar_variance(plan);
        CHECK(std::abs(remodeled_sv(f, g) - sv) <= 1e-10 * std::max(1.0, sv));
    }
    // The swapped weighting only agrees at unit weight.
    const MeasurementPlan unit = plan_of(Protocol::Cvw, 4, 3, ProtocolParams{1.0, 0.2});
    const auto fu = sv_g_decomposition(unit);
    CHECK(remodeled_sv_printed(fu, 1.0) == doctest::Approx(remodeled_sv(fu, 1.0)));
    CHECK_THROWS_AS(sv_g_decomposition(plan_of(Protocol::Cvw, 3, 1, ProtocolParams{0.5, 0.1})), Error);
}

TEST_CASE("rotation grid") {
    const auto g = rotation_grid(629);
    REQUIRE(g.size() == 629);
    CHECK(g.front() == doctest::Approx(2 * pi / 630));
    CHECK(g.back() == doctest::Approx(2 * pi * 629 / 630));
    for (double th : g) {
        CHECK(th > 0.0);
        CHECK(th < 2 * pi);
        CHECK(std::abs(th - pi / 2) > 1e-6);
    }
    CHECK_THROWS_AS(rotation_grid(1), Error);
}

TEST_CASE("serial and parallel sweeps are identical") {
    const DrwParams d = drw_params(0.5756);
    for (auto proto : {Protocol::Cvw, Protocol::Dictionary}) {
        const auto thetas = rotation_grid(63);
        const auto a = rotation_sweep(proto, 4, params_for(proto, d), thetas, Execution::Serial);
        const auto b = rotation_sweep(proto, 4, params_for(proto, d), thetas, Execution::Parallel);
        REQUIRE(a.size() == b.size());
        for (std::size_t i = 0; i < a.size(); ++i) {
            CHECK(a[i].theta == b[i].theta);
            CHECK(a[i].sv == b[i].sv);
        }
    }
}

TEST_CASE("bound suite is deterministic and schedule independent") {
    BoundOptions opt;
    opt.samples = 40;
    opt.seed = 9;
    opt.drw = drw_params(0.5756);
    opt.exec = Execution::Serial;
    const BoundReport a = bound_suite(opt);
    opt.exec = Execution::Parallel;
    const BoundReport b = bound_suite(opt);
    REQUIRE(a.records.size() == 40);
    std::size_t v53 = 0, vd = 0, vf = 0;
    for (std::size_t i = 0; i < a.records.size(); ++i) {
        CHECK(a.records[i].cvw4 == b.records[i].cvw4);
        CHECK(a.records[i].macro_min == b.records[i].macro_min);
        CHECK(a.records[i].gate.theta == b.records[i].gate.theta);
        v53 += a.records[i].viol_cvw_bound;
        vd += a.records[i].viol_dict_bound;
        vf += a.records[i].viol_floor;
        CHECK(a.records[i].macro_min <= a.records[i].macro_canonical * (1 + 1e-12));
    }
    CHECK(v53 == a.cvw_bound_violations);
    CHECK(vd == a.dict_bound_violations);
    CHECK(vf == a.floor_violations);
    const double t2 = opt.drw.t * opt.drw.t;
    CHECK(a.required_cvw_margin == doctest::Approx(3 * opt.drw.eps_d / t2));
    CHECK(a.required_dict_margin == doctest::Approx(opt.drw.eps_d * (1 + 2 * std::sqrt(2.0) * opt.drw.t) / t2));
    opt.samples = 0;
    CHECK_THROWS_AS(bound_suite(opt), Error);
}

TEST_CASE("eta override keeps the sampled angles") {
    BoundOptions opt;
    opt.samples = 5;
    opt.drw = drw_params(0.5756);
    opt.check_floor = false;
    const BoundReport a = bound_suite(opt);
    opt.eta_override = 5.0;
    const BoundReport b = bound_suite(opt);
    for (std::size_t i = 0; i < 5; ++i) {
        CHECK(b.records[i].gate.eta == 5.0);
        CHECK(b.records[i].gate.theta == a.records[i].gate.theta);
        CHECK(b.records[i].gate.phi == a.records[i].gate.phi);
    }
}

TEST_CASE("squeezing floor") {
    const ProtocolParams weak{0.5, 0.2}, strong{2.0, 0.2};
    CHECK(squeezing_floor(2.0, weak) == doctest::Approx(0.2 * 4.25));
    CHECK(squeezing_floor(2.0, strong) == doctest::Approx(0.2 * 4.25 / 4.0));
}

TEST_CASE("periodic minimizer") {
    const auto f = [](double x) { return 2.0 - std::cos(2.0 * (x - 0.3)) + 0.1 * std::cos(4.0 * x); };
    const MinimizeResult r = minimize_periodic(f);
    double best = INFINITY, arg = 0;
    for (int k = 0; k < 200000; ++k) {
        const double x = -pi / 2 + pi * k / 200000.0;
        if (f(x) < best) best = f(x), arg = x;
    }
    CHECK(r.value <= best + 1e-14);
    CHECK(r.argmin == doctest::Approx(arg).epsilon(1e-4));
    const MinimizeResult inf = minimize_periodic([](double x) { return x < 0 ? std::nan("") : x; });
    CHECK(inf.value == doctest::Approx(0.0).epsilon(1e-9));
}

TEST_CASE("counter-based generator") {
    const CounterRng a(42), b(42);
    CHECK(a.bits(17) == b.bits(17));
    CHECK(a.split(3).bits(0) == b.split(3).bits(0));
    CHECK(a.split(3).bits(0) != a.split(4).bits(0));
    CHECK(CounterRng(43).bits(0) != a.bits(0));
    double sum = 0, sq = 0, lo = 1, hi = 0;
    const int n = 200000;
    for (int i = 0; i < n; ++i) {
        const double u = a.uniform(i);
        lo = std::min(lo, u);
        hi = std::max(hi, u);
        const double z = a.normal(i);
        sum += z;
        sq += z * z;
    }
    CHECK(lo >= 0.0);
    CHECK(hi < 1.0);
    CHECK(std::abs(sum / n) < 5.0 / std::sqrt(n));
    CHECK(std::abs(sq / n - 1.0) < 5.0 * std::sqrt(2.0 / n));
    CounterRng s(5);
    const double first = s.next_uniform();
    CHECK(first == CounterRng(5).uniform(0));
}

TEST_CASE("random gates and plans") {
    for (std::uint64_t i = 0; i < 200; ++i) {
        const GateSample g = random_gate(CounterRng(1).split(i));
        CHECK(g.eta >= 1.0 / 3.0);
        CHECK(g.eta <= 3.0);
        CHECK(g.theta >= 0.0);
        CHECK(g.theta < 2 * pi);
        CHECK(g.gate().determinant() == doctest::Approx(1.0));
        const MeasurementPlan m = random_plan(Protocol::Macronode, 3, ProtocolParams{0.5, 0.1}, CounterRng(2).split(i));
        for (const auto& b : m.macronode) CHECK(std::abs(std::sin(b.theta_a - b.theta_b)) >= 0.2);
    }
}
