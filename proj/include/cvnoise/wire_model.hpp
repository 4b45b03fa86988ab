#pragma once

#include <string>

namespace cvnoise {

// Uniformly weighted wire: edge weight g between neighbours, self-loop
// weight epsilon on every node.
struct WireParams {
    double g = 1.0;
    double epsilon = 0.1;

    static WireParams make(double g, double epsilon);
};

// Wire parameters derived from a dual-rail resource with squeezing alpha.
struct DrwParams {
    double alpha = 0.0;
    double g_d = 0.0;    // tanh(2 alpha) / 2
    double eps_d = 0.0;  // sech(2 alpha)
    double t = 0.0;      // tanh(2 alpha)

    // The equivalent single-rail wire (g_d, eps_d).
    WireParams cvw_wire() const { return WireParams{g_d, eps_d}; }
};

DrwParams drw_params(double alpha);
double db_to_alpha(double db);

enum class RemodelMode { AlternatingSelfLoop, UniformRescaled };

const char* to_string(RemodelMode mode) noexcept;
RemodelMode parse_remodel_mode(const std::string& text);

// Weight-one description of a weight-g wire.
//
// Alternating: odd nodes keep epsilon, even nodes carry epsilon/g^2 and their
// shear parameters are multiplied by 1/g^2.
// Uniform: every node carries epsilon/g, every shear is multiplied by 1/g and
// the input self-loop weight is multiplied by 1/g.
struct RemodeledWire {
    RemodelMode mode = RemodelMode::AlternatingSelfLoop;
    double epsilon_odd = 0.0;
    double epsilon_even = 0.0;
    double input_rescale = 1.0;
    double shear_rescale_odd = 1.0;
    double shear_rescale_even = 1.0;

    // Multiplier for the shear of step j (1-based).
    double shear_rescale(int step) const { return step % 2 == 1 ? shear_rescale_odd : shear_rescale_even; }
};

RemodeledWire remodel(const WireParams& w, RemodelMode mode);

}  // namespace cvnoise
