#pragma once

#include <optional>
#include <span>
#include <vector>

#include "erps/restricted.hpp"

namespace erps {

/// Preparation, a chain of unital channels, and one POVM element.
struct ExperimentSpec {
    FiniteField field;
    ComplexMatrix state;
    std::vector<Channel> channels;
    ComplexMatrix effect;
};

/// Framework (B', S_n … S_1, B). `channels` holds indices into the
/// symplectic set of the run, S_1 first.
struct Framework {
    std::size_t prep = 0;
    std::vector<std::size_t> channels;
    std::size_t meas = 0;

    friend bool operator==(const Framework&, const Framework&) = default;
};

enum class FrameworkFilter { Coherent, All };

/// The symplectic set used for channel frameworks, with its redundancy factor.
struct SymplecticSet {
    FrameworkMode mode = FrameworkMode::FullGroup;
    std::vector<SymplecticMatrix> matrices;
    std::uint32_t redundancy = 1;
};

/// Full legal set, or a minimal reconstructing set (throws MrsUnavailable
/// when the search does not produce one).
SymplecticSet symplectic_set(const FiniteField& field, FrameworkMode mode, const MrsOptions& mrs = {});

/// All frameworks in enumeration order: B outer, then S_1 … S_n, then B'.
std::vector<Framework> enumerate_frameworks(const PhaseSpace& space, const SymplecticSet& set, std::size_t n_channels,
                                            FrameworkFilter filter);
std::uint64_t framework_count(std::size_t num_striations, std::size_t set_size, std::size_t n_channels,
                              FrameworkFilter filter);

/// Striation reached from `prep` by applying the framework's channels in order.
std::size_t coherent_measurement(const PhaseSpace& space, const SymplecticSet& set, std::size_t prep,
                                 std::span<const std::size_t> channels);

struct EngineOptions {
    FrameworkMode mode = FrameworkMode::FullGroup;
    FrameworkFilter filter = FrameworkFilter::Coherent;
    /// Keep the per-framework table in the report.
    bool record_frameworks = false;
    /// Refuse to record more rows than this.
    std::uint64_t record_limit = 1'000'000;
    unsigned threads = 1;
    MrsOptions mrs;
};

/// |ΔR^F| at or below this is counted as a vanishing contribution.
inline constexpr double kNonzeroContribution = 1e-13;

struct FrameworkContribution {
    Framework framework;
    double delta = 0.0;      ///< ΔR^F
    double classical = 0.0;  ///< R^F
    bool coherent = false;
};

struct PredictionReport {
    double probability = 0.0;  ///< clamped to [0, 1]
    double raw = 0.0;
    double delta_sum = 0.0;  ///< (1/Z^n) Σ_F ΔR^F
    double offset = 0.0;     ///< (1/d) tr E
    std::uint32_t redundancy = 1;
    std::size_t n_channels = 0;
    FrameworkMode mode = FrameworkMode::FullGroup;
    FrameworkFilter filter = FrameworkFilter::Coherent;
    std::uint64_t frameworks = 0;
    std::uint64_t nonzero_contributors = 0;
    double max_incoherent = 0.0;  ///< largest |ΔR^F| among incoherent frameworks
    std::vector<FrameworkContribution> table;
};

/// Quasi and restricted descriptions of one experiment, ready for
/// framework evaluation.
class PreparedExperiment {
public:
    PreparedExperiment(const ExperimentSpec& spec, FrameworkMode mode, const MrsOptions& mrs = {});

    const OperatorBasis& basis() const { return *basis_; }
    const PhaseSpace& space() const { return basis_->space(); }
    const SymplecticSet& set() const { return set_; }
    std::size_t n_channels() const { return channel_quasi_.size(); }

    const StateQuasi& state_quasi() const { return state_quasi_; }
    const std::vector<ChannelQuasi>& channel_quasi() const { return channel_quasi_; }
    const MeasQuasi& measurement_quasi() const { return meas_quasi_; }
    const std::vector<RestrictedState>& restricted_states() const { return states_; }
    /// restricted_channels()[k][s]: channel k under set element s.
    const std::vector<std::vector<RestrictedChannel>>& restricted_channels() const { return channels_; }
    const std::vector<RestrictedMeasurement>& restricted_measurements() const { return measurements_; }

    /// Smallest value seen in any restricted object before clamping.
    double min_restricted_raw() const;

    /// Distribution over phase space after preparing in B and applying the
    /// framework's channels: Σ R^{S_n} … R^{S_1} R^B.
    std::vector<double> premeasurement(std::size_t prep, std::span<const std::size_t> channels) const;
    /// R^F by ordinary classical probability over phase points.
    double classical_predict(const Framework& fw) const;
    /// ΔR^F as the product of nonrandom parts, summed over phase points.
    double delta_point_level(const Framework& fw) const;

    PredictionReport predict(const EngineOptions& options) const;

private:
    OperatorBasisPtr basis_;
    SymplecticSet set_;
    StateQuasi state_quasi_;
    std::vector<ChannelQuasi> channel_quasi_;
    MeasQuasi meas_quasi_;
    std::vector<RestrictedState> states_;
    std::vector<std::vector<RestrictedChannel>> channels_;
    std::vector<RestrictedMeasurement> measurements_;
};

double classical_predict(const Framework& fw, const ExperimentSpec& spec, FrameworkMode mode = FrameworkMode::FullGroup);
PredictionReport quantum_predict(const ExperimentSpec& spec, const EngineOptions& options = {});

struct CoherenceCheck {
    double coherent_sum = 0.0;
    double all_sum = 0.0;
    double deviation = 0.0;
    double max_incoherent = 0.0;
};

CoherenceCheck coherence_equivalence_check(const PreparedExperiment& experiment, unsigned threads = 1);
CoherenceCheck coherence_equivalence_check(const ExperimentSpec& spec, FrameworkMode mode);

/// Deterministic pairwise summation.
double pairwise_sum(std::span<const double> values);

}  // namespace erps
