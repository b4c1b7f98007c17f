#pragma once

#include <string>

namespace qlab::net {

// GELU/SiLU use the exact Gaussian-CDF / logistic forms (no tanh shortcut).
enum class ActivationKind { Sigmoid, Tanh, Gelu, Silu };

double activation_value(ActivationKind k, double u);
double activation_derivative(ActivationKind k, double u);

// Squashing kinds are bounded by c = 1 in absolute value.
bool is_squashing(ActivationKind k);
double squashing_bound(ActivationKind k);  // c; InputError for non-squashing kinds

ActivationKind parse_activation(const std::string& name);
std::string activation_name(ActivationKind k);

}  // namespace qlab::net
