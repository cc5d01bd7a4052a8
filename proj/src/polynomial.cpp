#include "pinncontact/polynomial.hpp"

#include <cmath>

namespace pinncontact {

namespace {

double ipow(double base, unsigned e) {
    double r = 1.0;
    for (unsigned k = 0; k < e; ++k) {
        r *= base;
    }
    return r;
}

} // namespace

Polynomial Polynomial::constant(double c) {
    Polynomial p;
    p.add_term({c, 0, 0, 0});
    return p;
}

Polynomial Polynomial::coordinate(std::size_t axis) {
    Polynomial p;
    p.add_term({1.0, axis == 0 ? 1u : 0u, axis == 1 ? 1u : 0u, axis == 2 ? 1u : 0u});
    return p;
}

void Polynomial::add_term(const Term& t) {
    if (t.coefficient == 0.0) {
        return;
    }
    for (auto it = terms_.begin(); it != terms_.end(); ++it) {
        if (it->px == t.px && it->py == t.py && it->pz == t.pz) {
            it->coefficient += t.coefficient;
            if (it->coefficient == 0.0) {
                terms_.erase(it);
            }
            return;
        }
    }
    terms_.push_back(t);
}

double Polynomial::operator()(const Vec3& x) const {
    double v = 0.0;
    for (const auto& t : terms_) {
        v += t.coefficient * ipow(x[0], t.px) * ipow(x[1], t.py) * ipow(x[2], t.pz);
    }
    return v;
}

Vec3 Polynomial::gradient(const Vec3& x) const {
    Vec3 g{0.0, 0.0, 0.0};
    for (const auto& t : terms_) {
        const double fx = ipow(x[0], t.px);
        const double fy = ipow(x[1], t.py);
        const double fz = ipow(x[2], t.pz);
        if (t.px > 0) {
            g[0] += t.coefficient * t.px * ipow(x[0], t.px - 1) * fy * fz;
        }
        if (t.py > 0) {
            g[1] += t.coefficient * t.py * fx * ipow(x[1], t.py - 1) * fz;
        }
        if (t.pz > 0) {
            g[2] += t.coefficient * t.pz * fx * fy * ipow(x[2], t.pz - 1);
        }
    }
    return g;
}

Polynomial operator+(const Polynomial& a, const Polynomial& b) {
    Polynomial r = a;
    for (const auto& t : b.terms_) {
        r.add_term(t);
    }
    return r;
}

Polynomial operator-(const Polynomial& a, const Polynomial& b) {
    return a + (-1.0) * b;
}

Polynomial operator*(const Polynomial& a, const Polynomial& b) {
    Polynomial r;
    for (const auto& s : a.terms_) {
        for (const auto& t : b.terms_) {
            r.add_term({s.coefficient * t.coefficient, s.px + t.px, s.py + t.py, s.pz + t.pz});
        }
    }
    return r;
}

Polynomial operator*(double s, const Polynomial& a) {
    Polynomial r;
    for (const auto& t : a.terms_) {
        r.add_term({s * t.coefficient, t.px, t.py, t.pz});
    }
    return r;
}

} // namespace pinncontact
