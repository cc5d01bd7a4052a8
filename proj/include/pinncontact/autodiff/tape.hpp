#pragma once

#include <cmath>
#include <cstdint>
#include <span>
#include <vector>

namespace pinncontact::autodiff {

class Tape;

/// Handle to a node on a Tape. Constants carry no node (index == npos) and
/// never receive adjoints.
struct Var {
    static constexpr std::uint32_t npos = 0xffffffffu;

    Tape* tape = nullptr;
    std::uint32_t index = npos;
    double value = 0.0;

    Var() = default;
    Var(double v) : value(v) {} // NOLINT(google-explicit-constructor)

    bool is_constant() const { return index == npos; }
};

/// Reverse-mode scalar tape. Every node has at most two parents, which covers
/// the operation set used by the loss heads: arithmetic, square, guarded sqrt,
/// tanh.
class Tape {
public:
    /// Denominator guard for sqrt at the origin. Only the partial derivative
    /// is affected; forward values stay exact.
    static constexpr double sqrt_guard = 1e-12;

    Var variable(double v);

    Var unary(const Var& a, double value, double da);
    Var binary(const Var& a, const Var& b, double value, double da, double db);

    /// Clears all nodes; handles obtained earlier become dangling.
    void clear();
    std::size_t size() const { return nodes_.size(); }

    /// Seeds the adjoint of each listed node and sweeps the tape backwards.
    /// The returned vector is indexed by node index.
    const std::vector<double>& backward(std::span<const Var> outputs, std::span<const double> seeds);
    const std::vector<double>& backward(const Var& output);

    double adjoint(const Var& v) const;

private:
    struct Node {
        std::uint32_t lhs;
        std::uint32_t rhs;
        double dlhs;
        double drhs;
    };
    std::vector<Node> nodes_;
    std::vector<double> adjoints_;
};

Var operator+(const Var& a, const Var& b);
Var operator-(const Var& a, const Var& b);
Var operator*(const Var& a, const Var& b);
Var operator/(const Var& a, const Var& b);
Var operator-(const Var& a);

inline Var& operator+=(Var& a, const Var& b) { return a = a + b; }
inline Var& operator-=(Var& a, const Var& b) { return a = a - b; }
inline Var& operator*=(Var& a, const Var& b) { return a = a * b; }

Var square(const Var& a);
Var sqrt(const Var& a);
Var tanh(const Var& a);

inline double value_of(double v) { return v; }
inline double value_of(const Var& v) { return v.value; }

inline double square(double a) { return a * a; }

/// Square root whose derivative is finite at zero; see Tape::sqrt_guard.
inline double guarded_sqrt(double a) { return std::sqrt(a); }
inline Var guarded_sqrt(const Var& a) { return sqrt(a); }

} // namespace pinncontact::autodiff
