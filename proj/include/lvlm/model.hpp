#pragma once

#include <variant>

#include "lvlm/discrete_model.hpp"
#include "lvlm/real_model.hpp"

namespace lvlm {

using Model = std::variant<DiscreteModel, RealModel>;

// Variant-dispatching front ends. A discrete model needs a symbol lattice and
// a real model a vector lattice; anything else is an InputError.
Decoding decode(const Model& model, const Observation& obs);
double evaluate(const Model& model, const Observation& obs);

std::size_t num_states(const Model& model);
std::size_t model_dims(const Model& model);
// Symbol alphabet size (discrete) or observation dimension (real).
std::size_t observation_size(const Model& model);
const Eigen::MatrixXd& adjacency(const Model& model);
const Radii& radii(const Model& model);
const char* variant_name(const Model& model);

}  // namespace lvlm
