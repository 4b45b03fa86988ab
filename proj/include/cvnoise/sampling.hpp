#pragma once

#include <cstdint>

#include "cvnoise/protocols.hpp"
#include "cvnoise/rng.hpp"

namespace cvnoise {

struct GateSample {
    double theta = 0.0;
    double eta = 1.0;
    double phi = 0.0;

    Mat2 gate() const { return rotation(theta) * squeeze(eta) * rotation(phi); }
};

// theta, phi uniform on [0, 2 pi), eta uniform on [eta_lo, eta_hi].
GateSample random_gate(CounterRng rng, double eta_lo = 1.0 / 3.0, double eta_hi = 3.0);

// Random plan of n steps. cvw and dictionary angles are drawn from
// [-max_angle, max_angle]; macronode arm pairs keep |sin(a - b)| >= min_gap.
struct PlanSampling {
    double max_angle = 1.2;
    double min_gap = 0.2;
};

MeasurementPlan random_plan(Protocol protocol, int n, const ProtocolParams& params, CounterRng rng,
                            const PlanSampling& opt = {});

}  // namespace cvnoise
