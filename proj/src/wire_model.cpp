#include "cvnoise/wire_model.hpp"

#include <cmath>
#include <numbers>

#include "cvnoise/errors.hpp"

namespace cvnoise {

WireParams WireParams::make(double g, double epsilon) {
    if (!std::isfinite(g) || g == 0.0) raise(ErrorKind::InvalidParameter, "edge weight g must be finite and nonzero");
    if (!std::isfinite(epsilon) || epsilon <= 0.0) raise(ErrorKind::InvalidParameter, "self-loop epsilon must be positive");
    return WireParams{g, epsilon};
}

DrwParams drw_params(double alpha) {
    if (!std::isfinite(alpha) || alpha <= 0.0) raise(ErrorKind::InvalidParameter, "alpha must be positive and finite");
    DrwParams p;
    p.alpha = alpha;
    p.t = std::tanh(2.0 * alpha);
    p.g_d = 0.5 * p.t;
    p.eps_d = 1.0 / std::cosh(2.0 * alpha);
    return p;
}

double db_to_alpha(double db) {
    if (!std::isfinite(db) || db <= 0.0) raise(ErrorKind::InvalidParameter, "squeezing in dB must be positive");
    return db * std::numbers::ln10 / 20.0;
}

const char* to_string(RemodelMode mode) noexcept {
    return mode == RemodelMode::AlternatingSelfLoop ? "alternating" : "uniform";
}

RemodelMode parse_remodel_mode(const std::string& text) {
    if (text == "alternating" || text == "alternating-selfloop") return RemodelMode::AlternatingSelfLoop;
    if (text == "uniform" || text == "uniform-rescaled") return RemodelMode::UniformRescaled;
    raise(ErrorKind::InvalidParameter, "unknown remodel mode '" + text + "'");
}

RemodeledWire remodel(const WireParams& w, RemodelMode mode) {
    const WireParams v = WireParams::make(w.g, w.epsilon);
    RemodeledWire r;
    r.mode = mode;
    if (mode == RemodelMode::AlternatingSelfLoop) {
        r.epsilon_odd = v.epsilon;
        r.epsilon_even = v.epsilon / (v.g * v.g);
        r.input_rescale = 1.0;
        r.shear_rescale_odd = 1.0;
        r.shear_rescale_even = 1.0 / (v.g * v.g);
    } else {
        r.epsilon_odd = r.epsilon_even = v.epsilon / v.g;
        r.input_rescale = 1.0 / v.g;
        r.shear_rescale_odd = r.shear_rescale_even = 1.0 / v.g;
    }
    return r;
}

}  // namespace cvnoise
