#include "tempus/systems.hpp"

#include <cmath>

namespace tempus {

DynamicalSystem harmonic_oscillator(double k_freq) {
    DynamicalSystem sys;
    sys.dim = 2;
    sys.name = "harmonic";
    double k2 = k_freq * k_freq;
    sys.vector_field = [k2](double, const std::vector<double>& x, std::vector<double>& dx) {
        dx[0] = x[1];
        dx[1] = -k2 * x[0];
    };
    sys.hamiltonian = [k2](const std::vector<double>& x) {
        return 0.5 * x[1] * x[1] + 0.5 * k2 * x[0] * x[0];
    };
    return sys;
}

DynamicalSystem pendulum(double k_freq) {
    DynamicalSystem sys;
    sys.dim = 2;
    sys.name = "pendulum";
    double k2 = k_freq * k_freq;
    sys.vector_field = [k2](double, const std::vector<double>& x, std::vector<double>& dx) {
        dx[0] = x[1];
        dx[1] = 0.5 * k2 * std::sin(x[0]);
    };
    sys.hamiltonian = [k2](const std::vector<double>& x) {
        return 0.5 * x[1] * x[1] + 0.5 * k2 * std::cos(x[0]);
    };
    sys.angle_indices = {0};
    return sys;
}

DynamicalSystem modified_oscillator(double k_plus, double k_minus) {
    DynamicalSystem sys;
    sys.dim = 2;
    sys.name = "modified";
    double kp2 = k_plus * k_plus;
    double km2 = k_minus * k_minus;
    sys.vector_field = [kp2, km2](double, const std::vector<double>& x, std::vector<double>& dx) {
        double k2 = (x[1] >= 0.0) ? kp2 : km2;
        dx[0] = x[1];
        dx[1] = -k2 * x[0];
    };
    // The field parameter jumps at p = 0; the integrator splits steps there
    // and freezes the branch per substep.
    sys.event = [](const std::vector<double>& x) { return x[1]; };
    sys.sided_field = [kp2, km2](int side, double, const std::vector<double>& x,
                                 std::vector<double>& dx) {
        double k2 = (side >= 0) ? kp2 : km2;
        dx[0] = x[1];
        dx[1] = -k2 * x[0];
    };
    return sys;
}

DynamicalSystem damped_oscillator(double k_freq, double a_damp) {
    DynamicalSystem sys;
    sys.dim = 2;
    sys.name = "damped";
    double k2 = k_freq * k_freq;
    double a2 = a_damp * a_damp;
    sys.vector_field = [k2, a2](double, const std::vector<double>& x, std::vector<double>& dx) {
        dx[0] = x[1];
        dx[1] = -k2 * x[0] - a2 * x[1];
    };
    return sys;
}

}  // namespace tempus
