#include "qlab/net/activation.hpp"

#include <cmath>

#include "qlab/common/error.hpp"

namespace qlab::net {

namespace {

constexpr double kInvSqrt2 = 0.70710678118654752440;
constexpr double kInvSqrt2Pi = 0.39894228040143267794;

double sigmoid(double u) {
    if (u >= 0.0) return 1.0 / (1.0 + std::exp(-u));
    const double e = std::exp(u);
    return e / (1.0 + e);
}

double normal_cdf(double u) { return 0.5 * (1.0 + std::erf(u * kInvSqrt2)); }
double normal_pdf(double u) { return kInvSqrt2Pi * std::exp(-0.5 * u * u); }

}  // namespace

double activation_value(ActivationKind k, double u) {
    switch (k) {
        case ActivationKind::Sigmoid: return sigmoid(u);
        case ActivationKind::Tanh: return std::tanh(u);
        case ActivationKind::Gelu: return u * normal_cdf(u);
        case ActivationKind::Silu: return u * sigmoid(u);
    }
    throw InputError("unknown activation kind");
}

double activation_derivative(ActivationKind k, double u) {
    switch (k) {
        case ActivationKind::Sigmoid: {
            const double s = sigmoid(u);
            return s * (1.0 - s);
        }
        case ActivationKind::Tanh: {
            const double t = std::tanh(u);
            return 1.0 - t * t;
        }
        case ActivationKind::Gelu:
            return normal_cdf(u) + u * normal_pdf(u);
        case ActivationKind::Silu: {
            const double s = sigmoid(u);
            return s * (1.0 + u * (1.0 - s));
        }
    }
    throw InputError("unknown activation kind");
}

bool is_squashing(ActivationKind k) {
    return k == ActivationKind::Sigmoid || k == ActivationKind::Tanh;
}

double squashing_bound(ActivationKind k) {
    if (!is_squashing(k))
        throw InputError("squashing_bound: " + activation_name(k) + " is not squashing");
    return 1.0;
}

ActivationKind parse_activation(const std::string& name) {
    if (name == "sigmoid") return ActivationKind::Sigmoid;
    if (name == "tanh") return ActivationKind::Tanh;
    if (name == "gelu") return ActivationKind::Gelu;
    if (name == "silu") return ActivationKind::Silu;
    throw InputError("unknown activation '" + name + "' (expected sigmoid|tanh|gelu|silu)");
}

std::string activation_name(ActivationKind k) {
    switch (k) {
        case ActivationKind::Sigmoid: return "sigmoid";
        case ActivationKind::Tanh: return "tanh";
        case ActivationKind::Gelu: return "gelu";
        case ActivationKind::Silu: return "silu";
    }
    return "?";
}

}  // namespace qlab::net
