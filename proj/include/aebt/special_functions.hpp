#pragma once

namespace aebt {

// Digamma psi(x) for x > 0; relative error <= 1e-12.
double digamma(double x);

// log Gamma(x) for x > 0.
double log_gamma(double x);

}  // namespace aebt
