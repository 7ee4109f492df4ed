#pragma once

#include "tempus/trajectory.hpp"

namespace tempus {

// The four reference systems of the taxonomy (one degree of freedom each).

// (a) harmonic oscillator, H = p^2/2 + K^2 q^2 / 2.
DynamicalSystem harmonic_oscillator(double k_freq = 1.0);

// (b) pendulum, H = p^2/2 + (K^2/2) cos(theta). Librations around theta = pi
// are closed; orbits above the separatrix run away in theta.
DynamicalSystem pendulum(double k_freq = 1.0);

// (c) modified oscillator with K = K+ for p >= 0 and K = K- for p < 0.
// Not time-reversal invariant for K+ != K-, yet every orbit is closed.
DynamicalSystem modified_oscillator(double k_plus = 1.0, double k_minus = 2.0);

// (d) damped oscillator, qdd = -K^2 q - A^2 qd. The origin is an attractor.
DynamicalSystem damped_oscillator(double k_freq = 1.0, double a_damp = 1.0);

}  // namespace tempus
