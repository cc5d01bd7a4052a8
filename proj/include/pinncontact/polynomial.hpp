#pragma once

#include <vector>

#include "pinncontact/types.hpp"

namespace pinncontact {

/// Polynomial in (x, y, z) stored as a list of monomials.
class Polynomial {
public:
    struct Term {
        double coefficient;
        unsigned px;
        unsigned py;
        unsigned pz;
    };

    Polynomial() = default;
    static Polynomial constant(double c);
    /// The coordinate x_axis (0, 1 or 2).
    static Polynomial coordinate(std::size_t axis);

    double operator()(const Vec3& x) const;
    Vec3 gradient(const Vec3& x) const;

    const std::vector<Term>& terms() const { return terms_; }
    bool is_zero() const { return terms_.empty(); }

    friend Polynomial operator+(const Polynomial& a, const Polynomial& b);
    friend Polynomial operator-(const Polynomial& a, const Polynomial& b);
    friend Polynomial operator*(const Polynomial& a, const Polynomial& b);
    friend Polynomial operator*(double s, const Polynomial& a);

private:
    void add_term(const Term& t);
    std::vector<Term> terms_;
};

} // namespace pinncontact
