#pragma once

#include <array>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

namespace skewlab {

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Raised when an operation needs an inverse the system does not have.
struct NonInvertibleError : Error {
    using Error::Error;
};

struct KindMismatchError : Error {
    using Error::Error;
};

struct CirclePoint {
    double x = 0.0;  // reduced into [0,1)
};

struct OdometerPoint {
    std::vector<std::uint8_t> digits;  // least-significant first, values in {0,1}
};

struct TorusPoint {
    double x = 0.0;
    double y = 0.0;
};

using BasePoint = std::variant<CirclePoint, OdometerPoint, TorusPoint>;

/// Reduce into [0,1).
double wrap_unit(double x);

enum class BaseKind { rotation, doubling, odometer, torus_skew };

std::string to_string(BaseKind k);

/// A concrete compact base (A, f) with declared property metadata.
/// Flags are set from known theory at construction, never computed.
class BaseSystem {
public:
    static BaseSystem rotation(double alpha);
    static BaseSystem doubling();
    static BaseSystem odometer(int depth);
    static BaseSystem torus_skew(double alpha);

    BaseKind kind() const { return kind_; }
    double alpha() const { return alpha_; }
    int depth() const { return depth_; }

    bool minimal() const { return minimal_; }
    bool uniquely_ergodic() const { return uniquely_ergodic_; }
    bool mixing() const { return mixing_; }
    bool invertible() const { return kind_ != BaseKind::doubling; }

    BasePoint apply(const BasePoint& a, std::int64_t n) const;
    double distance(const BasePoint& a, const BasePoint& b) const;
    std::vector<BasePoint> sample_measure(std::size_t count, std::uint64_t seed) const;

    /// Canonical origin point (0, all-zero digits, or (0,0)).
    BasePoint origin() const;

    /// Throws KindMismatchError unless the point matches this system's kind.
    void check_point(const BasePoint& a) const;

private:
    BaseSystem() = default;

    BaseKind kind_ = BaseKind::rotation;
    double alpha_ = 0.0;
    int depth_ = 0;
    bool minimal_ = false;
    bool uniquely_ergodic_ = false;
    bool mixing_ = false;
};

/// Default rotation angle, (sqrt 5 - 1)/2.
double golden_alpha();

}  // namespace skewlab
