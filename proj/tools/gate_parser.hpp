#pragma once

// Gate text for the CLI: a product of named factors such as
// "R(pi/3)S(2)R(-0.5)" (R rotation, S squeeze, P shear, F Fourier, I identity),
// or four row-major matrix entries "a,b,c,d".

#include <string>

#include "cvnoise/symplectic.hpp"

namespace cvnoise::cli {

// Evaluates +, -, *, /, parentheses, decimal numbers and `pi`.
double parse_expression(const std::string& text);

// Throws cvnoise::Error(InvalidParameter) on malformed text or when the
// entries form has |det - 1| > tol; the message then names the determinant.
Mat2 parse_gate(const std::string& text, double tol = 1e-9);

}  // namespace cvnoise::cli
