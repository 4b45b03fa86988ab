#pragma once

#include <cstddef>
#include <functional>

namespace cvnoise {

struct GridGoldenOptions {
    int grid = 720;           // points over one period
    int brackets = 3;         // best grid points refined
    double tolerance = 1e-10; // final bracket width, radians
    double lo = -1.5707963267948966;
    double period = 3.141592653589793;
};

struct MinimizeResult {
    double value = 0.0;
    double argmin = 0.0;
    std::size_t evals = 0;
};

// Global minimum of a periodic objective: uniform grid, then golden-section
// refinement of +-one grid step around each of the best grid points.
// Non-finite objective values are treated as +inf.
MinimizeResult minimize_periodic(const std::function<double(double)>& f, const GridGoldenOptions& opt = {});

}  // namespace cvnoise
