#include "pinncontact/autodiff/tape.hpp"

#include <algorithm>

#include "pinncontact/error.hpp"

namespace pinncontact::autodiff {

Var Tape::variable(double v) {
    Var out;
    out.tape = this;
    out.index = static_cast<std::uint32_t>(nodes_.size());
    out.value = v;
    nodes_.push_back({Var::npos, Var::npos, 0.0, 0.0});
    return out;
}

Var Tape::unary(const Var& a, double value, double da) {
    if (a.is_constant()) {
        return Var(value);
    }
    Var out;
    out.tape = this;
    out.index = static_cast<std::uint32_t>(nodes_.size());
    out.value = value;
    nodes_.push_back({a.index, Var::npos, da, 0.0});
    return out;
}

Var Tape::binary(const Var& a, const Var& b, double value, double da, double db) {
    if (a.is_constant()) {
        return unary(b, value, db);
    }
    if (b.is_constant()) {
        return unary(a, value, da);
    }
    Var out;
    out.tape = this;
    out.index = static_cast<std::uint32_t>(nodes_.size());
    out.value = value;
    nodes_.push_back({a.index, b.index, da, db});
    return out;
}

void Tape::clear() {
    nodes_.clear();
}

const std::vector<double>& Tape::backward(std::span<const Var> outputs, std::span<const double> seeds) {
    if (outputs.size() != seeds.size()) {
        throw ConfigurationError("tape backward: outputs and seeds differ in length");
    }
    adjoints_.assign(nodes_.size(), 0.0);
    std::uint32_t top = 0;
    for (std::size_t k = 0; k < outputs.size(); ++k) {
        if (outputs[k].is_constant()) {
            continue;
        }
        if (outputs[k].tape != this) {
            throw ConfigurationError("tape backward: output recorded on another tape");
        }
        adjoints_[outputs[k].index] += seeds[k];
        top = std::max(top, outputs[k].index + 1);
    }
    for (std::uint32_t i = top; i-- > 0;) {
        const double g = adjoints_[i];
        if (g == 0.0) {
            continue;
        }
        const Node& n = nodes_[i];
        if (n.lhs != Var::npos) {
            adjoints_[n.lhs] += g * n.dlhs;
        }
        if (n.rhs != Var::npos) {
            adjoints_[n.rhs] += g * n.drhs;
        }
    }
    return adjoints_;
}

const std::vector<double>& Tape::backward(const Var& output) {
    const double one = 1.0;
    return backward(std::span<const Var>(&output, 1), std::span<const double>(&one, 1));
}

double Tape::adjoint(const Var& v) const {
    if (v.is_constant() || v.index >= adjoints_.size()) {
        return 0.0;
    }
    return adjoints_[v.index];
}

namespace {

Tape* tape_of(const Var& a, const Var& b) {
    return a.tape != nullptr ? a.tape : b.tape;
}

} // namespace

Var operator+(const Var& a, const Var& b) {
    Tape* t = tape_of(a, b);
    if (t == nullptr) {
        return Var(a.value + b.value);
    }
    return t->binary(a, b, a.value + b.value, 1.0, 1.0);
}

Var operator-(const Var& a, const Var& b) {
    Tape* t = tape_of(a, b);
    if (t == nullptr) {
        return Var(a.value - b.value);
    }
    return t->binary(a, b, a.value - b.value, 1.0, -1.0);
}

Var operator*(const Var& a, const Var& b) {
    Tape* t = tape_of(a, b);
    if (t == nullptr) {
        return Var(a.value * b.value);
    }
    return t->binary(a, b, a.value * b.value, b.value, a.value);
}

Var operator/(const Var& a, const Var& b) {
    Tape* t = tape_of(a, b);
    const double q = a.value / b.value;
    if (t == nullptr) {
        return Var(q);
    }
    return t->binary(a, b, q, 1.0 / b.value, -q / b.value);
}

Var operator-(const Var& a) {
    if (a.tape == nullptr) {
        return Var(-a.value);
    }
    return a.tape->unary(a, -a.value, -1.0);
}

Var square(const Var& a) {
    if (a.tape == nullptr) {
        return Var(a.value * a.value);
    }
    return a.tape->unary(a, a.value * a.value, 2.0 * a.value);
}

Var sqrt(const Var& a) {
    if (a.value < 0.0) {
        throw DomainError("sqrt of a negative value on the tape");
    }
    const double r = std::sqrt(a.value);
    if (a.tape == nullptr) {
        return Var(r);
    }
    const double denom = a.value == 0.0 ? std::sqrt(a.value + Tape::sqrt_guard * Tape::sqrt_guard) : r;
    return a.tape->unary(a, r, 0.5 / denom);
}

Var tanh(const Var& a) {
    const double t = std::tanh(a.value);
    if (a.tape == nullptr) {
        return Var(t);
    }
    return a.tape->unary(a, t, 1.0 - t * t);
}

} // namespace pinncontact::autodiff
