#include "erps/serialize.hpp"

#include "erps/error.hpp"

namespace erps::io {

namespace {

[[noreturn]] void invalid(const std::string& what) { throw Error("InvalidDocument", what); }

const json& member(const json& j, const char* key) {
    if (!j.is_object() || !j.contains(key)) invalid(std::string("missing key '") + key + "'");
    return j.at(key);
}

template <typename T>
T get(const json& j, const char* what) {
    try {
        return j.get<T>();
    } catch (const json::exception&) {
        invalid(std::string("malformed ") + what);
    }
}

std::vector<double> number_array(const json& j, const char* what) { return get<std::vector<double>>(j, what); }

json field_header(const PhaseSpace& space) { return field_to_json(space.field()); }

void require_field(const PhaseSpace& space, const json& j) {
    if (j.contains("field") && !(field_from_json(j.at("field")) == space.field())) {
        invalid("document belongs to a different field");
    }
}

void require_size(std::size_t got, std::size_t want, const char* what) {
    if (got != want) invalid(std::string(what) + " has the wrong length");
}

}  // namespace

json field_to_json(const FiniteField& field) {
    return {{"p", field.characteristic()}, {"n", field.degree()}, {"modulus", field.modulus()}};
}

FiniteField field_from_json(const json& j) {
    const auto p = get<std::uint32_t>(member(j, "p"), "field.p");
    const auto n = j.contains("n") ? get<std::uint32_t>(j.at("n"), "field.n") : 1U;
    std::optional<Polynomial> modulus;
    if (j.contains("modulus") && !j.at("modulus").is_null()) modulus = get<Polynomial>(j.at("modulus"), "field.modulus");
    return FiniteField::create(p, n, modulus);
}

json element_to_json(const FiniteField& field, FieldElement x) { return field.coeffs(x); }

FieldElement element_from_json(const FiniteField& field, const json& j) {
    if (j.is_number_integer()) return field.from_int(j.get<std::int64_t>());
    const auto coeffs = get<std::vector<std::uint32_t>>(j, "field element");
    if (coeffs.size() != field.degree()) invalid("field element has the wrong number of coefficients");
    return field.from_coeffs(coeffs);
}

json slope_to_json(const PhaseSpace& space, std::size_t striation) {
    const Slope slope = space.slope(striation);
    if (slope.infinite) return "inf";
    return element_to_json(space.field(), slope.value);
}

std::size_t striation_from_json(const PhaseSpace& space, const json& j) {
    if (j.is_string()) {
        if (j.get<std::string>() != "inf") invalid("slope label must be a coefficient array or \"inf\"");
        return space.striation_index(Slope::vertical());
    }
    return space.striation_index(Slope::finite(element_from_json(space.field(), j)));
}

json symplectic_to_json(const FiniteField& field, const SymplecticMatrix& s) {
    return {{"v", element_to_json(field, s.v)},
            {"x", element_to_json(field, s.x)},
            {"y", element_to_json(field, s.y)},
            {"z", element_to_json(field, s.z)}};
}

SymplecticMatrix symplectic_from_json(const FiniteField& field, const json& j) {
    return {element_from_json(field, member(j, "v")), element_from_json(field, member(j, "x")),
            element_from_json(field, member(j, "y")), element_from_json(field, member(j, "z"))};
}

json matrix_to_json(const ComplexMatrix& m) {
    json rows = json::array();
    for (Eigen::Index r = 0; r < m.rows(); ++r) {
        json row = json::array();
        for (Eigen::Index c = 0; c < m.cols(); ++c) row.push_back({m(r, c).real(), m(r, c).imag()});
        rows.push_back(std::move(row));
    }
    return rows;
}

namespace {

Complex complex_from_json(const json& j) {
    if (j.is_number()) return {j.get<double>(), 0.0};
    const auto pair = get<std::vector<double>>(j, "complex entry");
    if (pair.size() != 2) invalid("complex entries are [re, im] pairs");
    return {pair[0], pair[1]};
}

}  // namespace

ComplexMatrix matrix_from_json(const json& j) {
    if (!j.is_array() || j.empty() || !j.front().is_array()) invalid("matrix must be a nested array");
    const auto rows = static_cast<Eigen::Index>(j.size());
    const auto cols = static_cast<Eigen::Index>(j.front().size());
    ComplexMatrix m(rows, cols);
    for (Eigen::Index r = 0; r < rows; ++r) {
        const auto& row = j[static_cast<std::size_t>(r)];
        if (!row.is_array() || static_cast<Eigen::Index>(row.size()) != cols) invalid("matrix rows differ in length");
        for (Eigen::Index c = 0; c < cols; ++c) m(r, c) = complex_from_json(row[static_cast<std::size_t>(c)]);
    }
    return m;
}

json channel_to_json(const Channel& channel) {
    json kraus = json::array();
    for (const auto& k : channel.kraus) kraus.push_back(matrix_to_json(k));
    return {{"kraus", std::move(kraus)}};
}

Channel channel_from_json(const json& j) {
    if (j.is_object() && j.contains("unitary")) return unitary_channel(matrix_from_json(j.at("unitary")));
    Channel channel;
    for (const auto& k : member(j, "kraus")) channel.kraus.push_back(matrix_from_json(k));
    return channel;
}

json spec_to_json(const ExperimentSpec& spec) {
    json channels = json::array();
    for (const auto& c : spec.channels) channels.push_back(channel_to_json(c));
    return {{"field", field_to_json(spec.field)},
            {"state", matrix_to_json(spec.state)},
            {"channels", std::move(channels)},
            {"effect", matrix_to_json(spec.effect)}};
}

ExperimentSpec spec_from_json(const json& j) {
    ExperimentSpec spec{field_from_json(member(j, "field")), {}, {}, {}};
    const auto& state = member(j, "state");
    if (state.is_object() && state.contains("ket")) {
        const auto& ket = state.at("ket");
        if (!ket.is_array()) invalid("ket must be an array");
        Eigen::VectorXcd v(static_cast<Eigen::Index>(ket.size()));
        for (std::size_t k = 0; k < ket.size(); ++k) v(static_cast<Eigen::Index>(k)) = complex_from_json(ket[k]);
        spec.state = v * v.adjoint();
    } else {
        spec.state = matrix_from_json(state);
    }
    if (j.contains("channels")) {
        for (const auto& c : j.at("channels")) spec.channels.push_back(channel_from_json(c));
    }
    const auto dim = static_cast<Eigen::Index>(spec.field.order());
    spec.effect = j.contains("effect") ? matrix_from_json(j.at("effect")) : ComplexMatrix::Identity(dim, dim);
    return spec;
}

json quasi_to_json(const FiniteField& field, const StateQuasi& q) {
    return {{"field", field_to_json(field)}, {"kind", "state-quasi"}, {"order", "enumeration"}, {"values", q.values}};
}

json quasi_to_json(const FiniteField& field, const ChannelQuasi& q) {
    return {{"field", field_to_json(field)},
            {"kind", "channel-quasi"},
            {"order", "enumeration"},
            {"layout", "row-major, beta rows"},
            {"values", q.values}};
}

json quasi_to_json(const FiniteField& field, const MeasQuasi& q) {
    return {{"field", field_to_json(field)},
            {"kind", "measurement-quasi"},
            {"order", "enumeration"},
            {"trace_effect", q.trace_effect},
            {"values", q.values}};
}

json restricted_to_json(const PhaseSpace& space, const RestrictedState& r) {
    return {{"kind", "restricted-state"},
            {"slope", slope_to_json(space, r.striation)},
            {"lines", r.lines},
            {"values", r.values},
            {"min_raw", r.min_raw}};
}

json restricted_to_json(const PhaseSpace& space, const RestrictedChannel& r) {
    return {{"kind", "restricted-channel"},
            {"symplectic", symplectic_to_json(space.field(), r.symplectic)},
            {"values", r.class_dist},
            {"min_raw", r.min_raw}};
}

json restricted_to_json(const PhaseSpace& space, const RestrictedMeasurement& r) {
    return {{"kind", "restricted-measurement"},
            {"slope", slope_to_json(space, r.striation)},
            {"lines", r.lines},
            {"values", r.values},
            {"trace_effect", r.trace_effect},
            {"min_raw", r.min_raw}};
}

RestrictedState restricted_state_from_json(const PhaseSpace& space, const json& j) {
    RestrictedState r;
    r.striation = striation_from_json(space, member(j, "slope"));
    r.values = number_array(member(j, "values"), "values");
    require_size(r.values.size(), space.num_points(), "values");
    r.lines.assign(space.dim(), 0.0);
    for (std::size_t c = 0; c < space.dim(); ++c) {
        for (auto pt : space.points_on(r.striation, c)) r.lines[c] += r.values[pt];
    }
    r.min_raw = *std::min_element(r.lines.begin(), r.lines.end());
    return r;
}

RestrictedChannel restricted_channel_from_json(const PhaseSpace& space, const json& j) {
    RestrictedChannel r;
    r.symplectic = symplectic_from_json(space.field(), member(j, "symplectic"));
    r.class_dist = number_array(member(j, "values"), "values");
    require_size(r.class_dist.size(), space.num_points(), "values");
    r.min_raw = *std::min_element(r.class_dist.begin(), r.class_dist.end());
    return r;
}

RestrictedMeasurement restricted_measurement_from_json(const PhaseSpace& space, const json& j) {
    RestrictedMeasurement r;
    r.striation = striation_from_json(space, member(j, "slope"));
    r.values = number_array(member(j, "values"), "values");
    require_size(r.values.size(), space.num_points(), "values");
    r.trace_effect = get<double>(member(j, "trace_effect"), "trace_effect");
    r.lines.assign(space.dim(), 0.0);
    for (std::size_t c = 0; c < space.dim(); ++c) r.lines[c] = r.values[space.points_on(r.striation, c).front()];
    r.min_raw = *std::min_element(r.lines.begin(), r.lines.end());
    return r;
}

namespace {

template <typename Member>
json family_json(const PhaseSpace& space, std::span<const Member> members, const char* kind) {
    json list = json::array();
    for (const auto& m : members) list.push_back(restricted_to_json(space, m));
    return {{"field", field_header(space)}, {"kind", kind}, {"members", std::move(list)}};
}

template <typename Member, typename Parse>
std::vector<Member> family_from(const PhaseSpace& space, const json& j, FamilyKind want, Parse parse) {
    if (family_kind(j) != want) invalid("family has a different kind");
    require_field(space, j);
    std::vector<Member> out;
    for (const auto& m : member(j, "members")) out.push_back(parse(space, m));
    return out;
}

}  // namespace

json family_to_json(const PhaseSpace& space, std::span<const RestrictedState> members) {
    return family_json(space, members, "restricted-state-family");
}
json family_to_json(const PhaseSpace& space, std::span<const RestrictedChannel> members) {
    return family_json(space, members, "restricted-channel-family");
}
json family_to_json(const PhaseSpace& space, std::span<const RestrictedMeasurement> members) {
    return family_json(space, members, "restricted-measurement-family");
}

FamilyKind family_kind(const json& j) {
    const auto kind = get<std::string>(member(j, "kind"), "kind");
    if (kind == "restricted-state-family") return FamilyKind::State;
    if (kind == "restricted-channel-family") return FamilyKind::Channel;
    if (kind == "restricted-measurement-family") return FamilyKind::Measurement;
    invalid("unknown family kind '" + kind + "'");
}

std::vector<RestrictedState> state_family_from_json(const PhaseSpace& space, const json& j) {
    return family_from<RestrictedState>(space, j, FamilyKind::State, restricted_state_from_json);
}
std::vector<RestrictedChannel> channel_family_from_json(const PhaseSpace& space, const json& j) {
    return family_from<RestrictedChannel>(space, j, FamilyKind::Channel, restricted_channel_from_json);
}
std::vector<RestrictedMeasurement> measurement_family_from_json(const PhaseSpace& space, const json& j) {
    return family_from<RestrictedMeasurement>(space, j, FamilyKind::Measurement, restricted_measurement_from_json);
}

json report_to_json(const PhaseSpace& space, const SymplecticSet& set, const PredictionReport& report) {
    json out = {{"probability", report.probability},
                {"raw", report.raw},
                {"delta_sum", report.delta_sum},
                {"offset", report.offset},
                {"redundancy", report.redundancy},
                {"n_channels", report.n_channels},
                {"mode", to_string(report.mode)},
                {"filter", to_string(report.filter)},
                {"frameworks", report.frameworks},
                {"nonzero_contributors", report.nonzero_contributors},
                {"max_incoherent", report.max_incoherent}};
    if (!report.table.empty()) {
        json symplectics = json::array();
        for (const auto& s : set.matrices) symplectics.push_back(symplectic_to_json(space.field(), s));
        out["symplectic_set"] = std::move(symplectics);
        json rows = json::array();
        for (const auto& row : report.table) {
            rows.push_back({{"prep", slope_to_json(space, row.framework.prep)},
                            {"channels", row.framework.channels},
                            {"meas", slope_to_json(space, row.framework.meas)},
                            {"coherent", row.coherent},
                            {"classical", row.classical},
                            {"delta", row.delta}});
        }
        out["table"] = std::move(rows);
    }
    return out;
}

json constraint_to_json(const ConstraintReport& report) {
    return {{"check", report.check},
            {"pass", report.pass},
            {"max_residual", report.max_residual},
            {"tolerance", report.tolerance},
            {"samples", report.samples}};
}

json mrs_to_json(const FiniteField& field, const MrsResult& result, bool certified) {
    json matrices = json::array();
    for (const auto& s : result.matrices) matrices.push_back(symplectic_to_json(field, s));
    return {{"field", field_to_json(field)},
            {"found", result.found},
            {"budget_exhausted", result.budget_exhausted},
            {"nodes", result.nodes},
            {"certified", certified},
            {"matrices", std::move(matrices)}};
}

json decomposition_to_json(const ParticleDecomposition& dec) {
    json basis = json::array();
    for (auto e : dec.q_basis().elements) basis.push_back(element_to_json(dec.field(), e));
    return {{"r", dec.base().order()}, {"n", dec.particles()}, {"q_basis", std::move(basis)}};
}

std::string to_string(FrameworkMode mode) { return mode == FrameworkMode::Mrs ? "mrs" : "full"; }
std::string to_string(FrameworkFilter filter) { return filter == FrameworkFilter::All ? "all" : "coherent"; }

FrameworkMode mode_from_string(const std::string& s) {
    if (s == "full") return FrameworkMode::FullGroup;
    if (s == "mrs") return FrameworkMode::Mrs;
    throw Error("InvalidArgument", "mode must be 'full' or 'mrs'");
}

FrameworkFilter filter_from_string(const std::string& s) {
    if (s == "coherent") return FrameworkFilter::Coherent;
    if (s == "all") return FrameworkFilter::All;
    throw Error("InvalidArgument", "filter must be 'coherent' or 'all'");
}

}  // namespace erps::io
