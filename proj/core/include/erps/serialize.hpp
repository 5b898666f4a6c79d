#pragma once

#include <nlohmann/json.hpp>

#include "erps/composite.hpp"
#include "erps/constraints.hpp"
#include "erps/engine.hpp"

namespace erps::io {

using nlohmann::json;

// Throw Error("InvalidDocument", ...) on malformed input.

json field_to_json(const FiniteField& field);
FiniteField field_from_json(const json& j);

json element_to_json(const FiniteField& field, FieldElement x);
FieldElement element_from_json(const FiniteField& field, const json& j);

/// Coefficient array for finite slopes, the string "inf" for the vertical striation.
json slope_to_json(const PhaseSpace& space, std::size_t striation);
std::size_t striation_from_json(const PhaseSpace& space, const json& j);

json symplectic_to_json(const FiniteField& field, const SymplecticMatrix& s);
SymplecticMatrix symplectic_from_json(const FiniteField& field, const json& j);

/// Nested arrays of [re, im] pairs.
json matrix_to_json(const ComplexMatrix& m);
ComplexMatrix matrix_from_json(const json& j);

json channel_to_json(const Channel& channel);
/// Accepts {"kraus": [...]} or {"unitary": matrix}.
Channel channel_from_json(const json& j);

/// {field, state, channels, effect}; the state may be a density matrix or
/// {"ket": [[re, im], ...]}. A missing effect means the identity.
json spec_to_json(const ExperimentSpec& spec);
ExperimentSpec spec_from_json(const json& j);

json quasi_to_json(const FiniteField& field, const StateQuasi& q);
json quasi_to_json(const FiniteField& field, const ChannelQuasi& q);
json quasi_to_json(const FiniteField& field, const MeasQuasi& q);

json restricted_to_json(const PhaseSpace& space, const RestrictedState& r);
json restricted_to_json(const PhaseSpace& space, const RestrictedChannel& r);
json restricted_to_json(const PhaseSpace& space, const RestrictedMeasurement& r);

RestrictedState restricted_state_from_json(const PhaseSpace& space, const json& j);
RestrictedChannel restricted_channel_from_json(const PhaseSpace& space, const json& j);
RestrictedMeasurement restricted_measurement_from_json(const PhaseSpace& space, const json& j);

enum class FamilyKind { State, Channel, Measurement };

/// {field, kind, members}.
json family_to_json(const PhaseSpace& space, std::span<const RestrictedState> members);
json family_to_json(const PhaseSpace& space, std::span<const RestrictedChannel> members);
json family_to_json(const PhaseSpace& space, std::span<const RestrictedMeasurement> members);

FamilyKind family_kind(const json& j);
std::vector<RestrictedState> state_family_from_json(const PhaseSpace& space, const json& j);
std::vector<RestrictedChannel> channel_family_from_json(const PhaseSpace& space, const json& j);
std::vector<RestrictedMeasurement> measurement_family_from_json(const PhaseSpace& space, const json& j);

json report_to_json(const PhaseSpace& space, const SymplecticSet& set, const PredictionReport& report);
json constraint_to_json(const ConstraintReport& report);
json mrs_to_json(const FiniteField& field, const MrsResult& result, bool certified);
json decomposition_to_json(const ParticleDecomposition& dec);

std::string to_string(FrameworkMode mode);
std::string to_string(FrameworkFilter filter);
FrameworkMode mode_from_string(const std::string& s);
FrameworkFilter filter_from_string(const std::string& s);

}  // namespace erps::io
