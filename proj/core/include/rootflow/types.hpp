#pragma once

#include <complex>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

namespace rootflow {

using Complex = std::complex<double>;
using CVec = std::vector<Complex>;

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

/// Two tracked points came closer than the configured collision threshold.
/// Right-hand sides refuse to evaluate inside the collision zone; stepping
/// around near-collisions is the solver's responsibility.
class collision_error : public std::runtime_error {
public:
    collision_error(const std::string& what, int first, int second, double distance,
                    double time = kNaN)
        : std::runtime_error(what), first_(first), second_(second),
          distance_(distance), time_(time) {}

    int first() const noexcept { return first_; }
    int second() const noexcept { return second_; }
    double distance() const noexcept { return distance_; }
    /// NaN when the failure is not tied to a specific time.
    double time() const noexcept { return time_; }

private:
    int first_;
    int second_;
    double distance_;
    double time_;
};

/// A solve engine failed (root tracking diverged, step underflow, an
/// internal consistency check tripped).  Carries the failure time.
class solve_error : public std::runtime_error {
public:
    solve_error(const std::string& what, double time = kNaN)
        : std::runtime_error(what), time_(time) {}

    double time() const noexcept { return time_; }

private:
    double time_;
};

/// Malformed experiment configuration (CLI / JSON front end).
class config_error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

}  // namespace rootflow
