#pragma once

#include <cmath>
#include <complex>
#include <stdexcept>
#include <string>
#include <vector>

namespace slag {

using cplx = std::complex<double>;

inline constexpr double pi = 3.14159265358979323846;

// Error categories. The CLI maps domain/validation/parse/not_found to exit
// code 1 and leaves usage errors (thrown by the flag parser) at exit code 2.
struct error : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct parse_error : error {
    using error::error;
};
struct validation_error : error {
    using error::error;
};
struct not_found_error : error {
    using error::error;
};
struct domain_error : error {
    using error::error;
};

// Neumaier-compensated sum of products a_i*b_i, with the products split
// exactly via fma. Used where |sum| << sum of |terms| (e.g. |z|^2 - 1 on
// the quadric).
inline double compensated_dot_minus(const std::vector<double>& a,
                                    const std::vector<double>& b,
                                    double subtract) {
    double s = -subtract, comp = 0.0;
    auto add = [&](double x) {
        double t = s + x;
        if (std::abs(s) >= std::abs(x))
            comp += (s - t) + x;
        else
            comp += (x - t) + s;
        s = t;
    };
    for (size_t i = 0; i < a.size(); ++i) {
        double hi = a[i] * b[i];
        double lo = std::fma(a[i], b[i], -hi);
        add(hi);
        add(lo);
    }
    return s + comp;
}

// sum a_i^2 - sum b_i^2 in one compensated accumulation, so the result is
// accurate relative to the (possibly tiny) difference rather than to the
// individual sums
inline double compensated_squares_diff(const std::vector<double>& a,
                                       const std::vector<double>& b) {
    double s = 0.0, comp = 0.0;
    auto add = [&](double x) {
        double t = s + x;
        if (std::abs(s) >= std::abs(x))
            comp += (s - t) + x;
        else
            comp += (x - t) + s;
        s = t;
    };
    for (size_t i = 0; i < a.size(); ++i) {
        double hi = a[i] * a[i];
        double lo = std::fma(a[i], a[i], -hi);
        add(hi);
        add(lo);
    }
    for (size_t i = 0; i < b.size(); ++i) {
        double hi = b[i] * b[i];
        double lo = std::fma(b[i], b[i], -hi);
        add(-hi);
        add(-lo);
    }
    return s + comp;
}

inline double reduce_angle(double theta) {
    // reduce to (-pi, pi]
    double t = std::remainder(theta, 2.0 * pi);
    if (t <= -pi) t += 2.0 * pi;
    return t;
}

}  // namespace slag
