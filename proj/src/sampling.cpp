#include "cvnoise/sampling.hpp"

#include <cmath>
#include <numbers>

namespace cvnoise {

GateSample random_gate(CounterRng rng, double eta_lo, double eta_hi) {
    GateSample s;
    s.theta = rng.next_uniform(0.0, 2.0 * std::numbers::pi);
    s.eta = rng.next_uniform(eta_lo, eta_hi);
    s.phi = rng.next_uniform(0.0, 2.0 * std::numbers::pi);
    return s;
}

MeasurementPlan random_plan(Protocol protocol, int n, const ProtocolParams& params, CounterRng rng,
                            const PlanSampling& opt) {
    MeasurementPlan plan;
    plan.protocol = protocol;
    plan.params = params;
    for (int i = 0; i < n; ++i) {
        if (protocol == Protocol::Macronode) {
            const double half = std::numbers::pi / 2;
            for (;;) {
                const double a = rng.next_uniform(-half, half);
                const double b = rng.next_uniform(-half, half);
                if (std::abs(std::sin(a - b)) >= opt.min_gap) {
                    plan.macronode.push_back(MacronodeBasis::canonical(a, b));
                    break;
                }
            }
        } else {
            plan.homodyne.push_back(HomodyneBasis::from_theta(rng.next_uniform(-opt.max_angle, opt.max_angle)));
        }
    }
    return plan;
}

}  // namespace cvnoise
