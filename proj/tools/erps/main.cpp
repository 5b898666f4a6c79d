#include <cmath>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "erps/error.hpp"
#include "erps/examples.hpp"
#include "erps/serialize.hpp"
#include "format.hpp"

#ifndef ERPS_VERSION
#define ERPS_VERSION "unknown"
#endif

namespace {

using namespace erps;
using cli::json;

constexpr int kExitValidation = 2;
constexpr int kExitSearchExhausted = 3;

struct Common {
    std::string format = "json";
    std::string mode = "full";
    std::string filter = "coherent";
    unsigned threads = 1;
};

struct RunManifest {
    explicit RunManifest(std::string name) : command(std::move(name)) {}

    std::string command;
    json field;
    json inputs = json::array();
    json flags = json::object();
    std::uint64_t seed = 0;

    json to_json() const {
        return {{"command", command}, {"field", field},  {"inputs", inputs},
                {"flags", flags},     {"seed", seed},    {"version", ERPS_VERSION}};
    }
    void add_input(const std::string& path) { inputs.push_back({{"path", path}, {"sha256", cli::sha256_file(path)}}); }
};

json read_json(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error("IoError", "cannot open '" + path + "'");
    try {
        return json::parse(in);
    } catch (const json::parse_error& e) {
        throw Error("InvalidDocument", path + ": " + e.what());
    }
}

void emit(const Common& common, const RunManifest& manifest, const json& result, const std::string& table) {
    if (common.format == "table") {
        std::cout << "# erps " << manifest.command << " (version " << ERPS_VERSION << ")\n";
        for (const auto& input : manifest.inputs) {
            std::cout << "# input " << input["path"].get<std::string>() << " sha256=" << input["sha256"].get<std::string>()
                      << '\n';
        }
        std::cout << table;
        return;
    }
    std::cout << json{{"manifest", manifest.to_json()}, {"result", result}}.dump(2) << '\n';
}

std::string labelled(const std::string& name, double value) {
    std::string out = name + " = " + cli::decimal(value);
    if (auto exact = cli::exact_sqrt3(value)) out += "  [" + *exact + "]";
    return out + '\n';
}

std::string slope_label(const PhaseSpace& space, std::size_t striation) {
    const Slope slope = space.slope(striation);
    return slope.infinite ? "inf" : space.field().format(slope.value);
}

EngineOptions engine_options(const Common& common) {
    EngineOptions options;
    options.mode = io::mode_from_string(common.mode);
    options.filter = io::filter_from_string(common.filter);
    options.threads = common.threads;
    return options;
}

// predict ---------------------------------------------------------------

int cmd_predict(const Common& common, const std::string& path, bool report_table) {
    RunManifest manifest{"predict"};
    manifest.add_input(path);
    const ExperimentSpec spec = io::spec_from_json(read_json(path));
    manifest.field = io::field_to_json(spec.field);
    manifest.flags = {{"mode", common.mode}, {"filter", common.filter}, {"report", report_table}};

    EngineOptions options = engine_options(common);
    options.record_frameworks = report_table;
    const PreparedExperiment experiment(spec, options.mode, options.mrs);
    const PredictionReport report = experiment.predict(options);

    std::ostringstream table;
    table << labelled("P(E)", report.probability) << labelled("delta_sum", report.delta_sum)
          << labelled("offset", report.offset) << "frameworks = " << report.frameworks
          << "\nnonzero_contributors = " << report.nonzero_contributors << '\n';
    if (report_table) {
        table << "\n  prep  channels  meas  coherent  classical  delta\n";
        for (const auto& row : report.table) {
            if (std::abs(row.delta) <= kNonzeroContribution) continue;
            table << "  " << slope_label(experiment.space(), row.framework.prep) << "  [";
            for (std::size_t k = 0; k < row.framework.channels.size(); ++k) {
                table << (k ? "," : "") << row.framework.channels[k];
            }
            table << "]  " << slope_label(experiment.space(), row.framework.meas) << "  " << row.coherent << "  "
                  << cli::decimal(row.classical) << "  " << cli::decimal(row.delta) << '\n';
        }
    }
    emit(common, manifest, io::report_to_json(experiment.space(), experiment.set(), report), table.str());
    return 0;
}

// decompose -------------------------------------------------------------

int cmd_decompose(const Common& common, const std::string& path, const std::string& what) {
    RunManifest manifest{"decompose"};
    manifest.add_input(path);
    const ExperimentSpec spec = io::spec_from_json(read_json(path));
    manifest.field = io::field_to_json(spec.field);
    manifest.flags = {{"what", what}, {"mode", common.mode}};
    const auto basis = operator_basis(spec.field);
    const auto& space = basis->space();

    json result;
    std::ostringstream table;
    if (what == "state") {
        const auto q = wigner_of_state(*basis, spec.state);
        const auto family = restrict_state_all(space, q);
        result = {{"quasi", io::quasi_to_json(spec.field, q)},
                  {"family", io::family_to_json(space, std::span<const RestrictedState>(family))}};
        table << "Wigner function\n" << cli::grid_to_table(examples::phase_grid(space, q.values), 1.0);
        for (const auto& r : family) {
            table << "R^B, slope " << slope_label(space, r.striation) << '\n'
                  << cli::grid_to_table(examples::phase_grid(space, r.values), 1.0);
        }
    } else if (what == "channel") {
        const auto set = symplectic_set(spec.field, io::mode_from_string(common.mode));
        json families = json::array();
        json quasis = json::array();
        for (std::size_t k = 0; k < spec.channels.size(); ++k) {
            const auto q = quasi_of_channel(*basis, spec.channels[k]);
            const auto family = restrict_channel_all(space, q, set.matrices);
            quasis.push_back(io::quasi_to_json(spec.field, q));
            families.push_back(io::family_to_json(space, std::span<const RestrictedChannel>(family)));
            table << "channel " << k << ": transition quasiprobabilities\n"
                  << cli::grid_to_table(examples::transition_matrix(q), 1.0);
            for (std::size_t s = 0; s < family.size(); ++s) {
                table << "R^S, set element " << s << '\n'
                      << cli::grid_to_table(examples::transition_matrix(space, family[s]), 1.0);
            }
        }
        result = {{"quasi", quasis}, {"families", families}};
    } else if (what == "measurement") {
        const auto q = quasi_of_measurement(*basis, spec.effect);
        const auto family = restrict_measurement_all(space, q);
        result = {{"quasi", io::quasi_to_json(spec.field, q)},
                  {"family", io::family_to_json(space, std::span<const RestrictedMeasurement>(family))}};
        table << "Q(E|alpha)\n" << cli::grid_to_table(examples::phase_grid(space, q.values), 1.0);
        for (const auto& r : family) {
            table << "R^B(E), slope " << slope_label(space, r.striation) << '\n'
                  << cli::grid_to_table(examples::phase_grid(space, r.values), 1.0);
        }
    } else {
        throw Error("InvalidArgument", "--what must be state, channel or measurement");
    }
    emit(common, manifest, result, table.str());
    return 0;
}

// reconstruct -----------------------------------------------------------

int cmd_reconstruct(const Common& common, const std::string& path) {
    RunManifest manifest{"reconstruct"};
    manifest.add_input(path);
    const json doc = read_json(path);
    const FiniteField field = io::field_from_json(doc.at("field"));
    manifest.field = io::field_to_json(field);
    const auto basis = operator_basis(field);
    const auto& space = basis->space();

    json result;
    std::ostringstream table;
    ValidationReport validation;
    switch (io::family_kind(doc)) {
        case io::FamilyKind::State: {
            const auto q = reconstruct_state(space, io::state_family_from_json(space, doc));
            const ComplexMatrix w = state_from_wigner(*basis, q);
            validation = validate_state(w);
            result = {{"kind", "state"}, {"quasi", io::quasi_to_json(field, q)}, {"matrix", io::matrix_to_json(w)}};
            break;
        }
        case io::FamilyKind::Channel: {
            const auto q = reconstruct_channel(space, io::channel_family_from_json(space, doc));
            const ComplexMatrix choi = choi_from_quasi(*basis, q);
            validation = validate_state(choi / static_cast<double>(field.order()));
            validation.kind = ObjectKind::Channel;
            result = {{"kind", "channel"}, {"quasi", io::quasi_to_json(field, q)}, {"choi", io::matrix_to_json(choi)}};
            break;
        }
        case io::FamilyKind::Measurement: {
            const auto q = reconstruct_measurement(space, io::measurement_family_from_json(space, doc));
            const ComplexMatrix e = effect_from_quasi(*basis, q);
            validation = validate_effect(e);
            result = {{"kind", "measurement"}, {"quasi", io::quasi_to_json(field, q)}, {"matrix", io::matrix_to_json(e)}};
            break;
        }
    }
    result["validation"] = {{"valid", validation.valid()}, {"summary", validation.summary()}};
    table << "kind = " << result["kind"].get<std::string>() << "\nvalid = " << validation.valid() << '\n'
          << validation.summary() << '\n';
    emit(common, manifest, result, table.str());
    return validation.valid() ? 0 : kExitValidation;
}

// check -----------------------------------------------------------------

int cmd_check(const Common& common, const std::vector<std::string>& paths, const ConstraintOptions& options) {
    RunManifest manifest{"check"};
    manifest.seed = options.seed;
    manifest.flags = {{"tolerance", options.tolerance}, {"samples", options.samples}};
    json reports = json::array();
    std::ostringstream table;
    bool all_pass = true;
    for (const auto& path : paths) {
        manifest.add_input(path);
        const json doc = read_json(path);
        const FiniteField field = io::field_from_json(doc.at("field"));
        manifest.field = io::field_to_json(field);
        const auto basis = operator_basis(field);
        const auto& space = basis->space();
        ConstraintReport report;
        switch (io::family_kind(doc)) {
            case io::FamilyKind::State:
                report = check_pure_state(*basis, io::state_family_from_json(space, doc), options);
                break;
            case io::FamilyKind::Channel:
                report = check_unitary_channel(*basis, io::channel_family_from_json(space, doc), options);
                break;
            case io::FamilyKind::Measurement:
                report = check_pure_measurement(*basis, io::measurement_family_from_json(space, doc), options);
                break;
        }
        all_pass = all_pass && report.pass;
        reports.push_back(io::constraint_to_json(report));
        table << path << ": " << report.check << (report.pass ? " PASS" : " FAIL")
              << "  max_residual=" << cli::decimal(report.max_residual) << "  samples=" << report.samples << '\n';
    }
    emit(common, manifest, reports, table.str());
    return all_pass ? 0 : kExitValidation;
}

// mrs -------------------------------------------------------------------

std::pair<std::uint32_t, std::uint32_t> split_order(std::uint32_t d) {
    for (std::uint32_t p = 2; p <= d; ++p) {
        if (d % p != 0) continue;
        std::uint32_t n = 0;
        std::uint32_t rest = d;
        while (rest % p == 0) {
            rest /= p;
            ++n;
        }
        if (rest != 1) break;
        return {p, n};
    }
    throw Error("NonPrimeCharacteristic", "dimension must be a prime power");
}

int cmd_mrs(const Common& common, std::uint32_t d, double budget) {
    const auto [p, n] = split_order(d);
    const FiniteField field = FiniteField::create(p, n);
    RunManifest manifest{"mrs"};
    manifest.field = io::field_to_json(field);
    manifest.flags = {{"budget", budget}};
    MrsOptions options;
    options.node_budget = static_cast<std::uint64_t>(budget);
    options.cache_dir = default_cache_dir();
    const MrsResult found = minimal_reconstructing_set(field, options);
    const bool certified = found.found && verify_mrs(field, found.matrices);
    json result = io::mrs_to_json(field, found, certified);
    std::ostringstream table;
    if (found.found) {
        table << "found " << found.matrices.size() << " matrices, certified=" << certified << '\n';
        for (const auto& s : found.matrices) {
            table << "  [[" << field.format(s.v) << ", " << field.format(s.x) << "], [" << field.format(s.y) << ", "
                  << field.format(s.z) << "]]\n";
        }
    } else {
        result["error"] = {{"code", "NotFound"},
                           {"message", found.budget_exhausted ? "node budget exhausted" : "search space exhausted"}};
        table << "NotFound (" << (found.budget_exhausted ? "budget exhausted" : "search space exhausted")
              << ", nodes=" << found.nodes << ")\n";
    }
    emit(common, manifest, result, table.str());
    return found.found ? 0 : kExitSearchExhausted;
}

// ptrace ----------------------------------------------------------------

int cmd_ptrace(const Common& common, const std::string& path, const std::string& basis_text, std::uint32_t sub_degree,
               std::size_t particle) {
    RunManifest manifest{"ptrace"};
    manifest.add_input(path);
    const ExperimentSpec spec = io::spec_from_json(read_json(path));
    manifest.field = io::field_to_json(spec.field);
    manifest.flags = {{"basis", basis_text}, {"sub_degree", sub_degree}, {"particle", particle}};

    std::vector<FieldElement> q_basis = polynomial_basis(spec.field, sub_degree).elements;
    if (!basis_text.empty()) {
        q_basis.clear();
        json parsed;
        try {
            parsed = json::parse(basis_text);
        } catch (const json::parse_error& e) {
            throw Error("InvalidArgument", std::string("--basis: ") + e.what());
        }
        for (const auto& e : parsed) q_basis.push_back(io::element_from_json(spec.field, e));
    }
    q_basis = ParticleDecomposition::basis_with_particle_first(q_basis, particle);
    const ParticleDecomposition dec(spec.field, sub_degree, q_basis);

    const auto basis = operator_basis(spec.field);
    const auto& space = basis->space();
    const auto q = wigner_of_state(*basis, spec.state);
    const auto reduced_q = partial_trace_wigner(dec, q);
    const auto reduced = partial_trace_restricted(dec, space, restrict_state_all(space, q));
    const ComplexMatrix reduced_w = partial_trace_density(dec, spec.state);

    json classes = json::array();
    std::ostringstream table;
    table << "slope classification (large striation -> particle striation)\n";
    for (std::size_t s = 0; s < space.num_striations(); ++s) {
        const auto cls = classify_slope(dec, space, s);
        json coeffs = json::array();
        for (auto c : cls.coefficients) coeffs.push_back(io::element_to_json(dec.base(), c));
        const char* kind = cls.kind == SlopeClass::Kind::MapsToSlope     ? "maps-to-slope"
                           : cls.kind == SlopeClass::Kind::InfiniteSlope ? "infinite"
                                                                         : "uniform";
        json entry = {{"slope", io::slope_to_json(space, s)}, {"kind", kind}, {"coefficients", coeffs}};
        if (cls.kind != SlopeClass::Kind::UniformCovering) entry["particle_striation"] = cls.base_striation;
        classes.push_back(std::move(entry));
        table << "  " << slope_label(space, s) << " -> " << kind << '\n';
    }
    const PhaseSpace small(dec.base());
    table << "particle Wigner function\n" << cli::grid_to_table(examples::phase_grid(small, reduced_q.values), 1.0);
    for (const auto& r : reduced) {
        table << "particle R^B, slope " << slope_label(small, r.striation) << '\n'
              << cli::grid_to_table(examples::phase_grid(small, r.values), 1.0);
    }
    json result = {{"decomposition", io::decomposition_to_json(dec)},
                   {"classification", classes},
                   {"quasi", io::quasi_to_json(dec.base(), reduced_q)},
                   {"family", io::family_to_json(small, std::span<const RestrictedState>(reduced))},
                   {"density", io::matrix_to_json(reduced_w)}};
    emit(common, manifest, result, table.str());
    return 0;
}

// example ---------------------------------------------------------------

json annotated(const examples::Grid& grid, double scale, std::ostringstream& table, const std::string& title) {
    table << title << '\n' << cli::grid_to_table(grid, scale);
    json out = cli::grid_to_json(grid, scale);
    out["title"] = title;
    return out;
}

int example_mach_zehnder(const Common& common) {
    RunManifest manifest{"example mach-zehnder"};
    const ExperimentSpec spec = examples::mach_zehnder();
    manifest.field = io::field_to_json(spec.field);
    const PreparedExperiment experiment(spec, FrameworkMode::FullGroup);
    const auto& space = experiment.space();
    const char* striation_names[] = {"X", "Y", "Z"};
    const char* symplectic_names[] = {"I", "R", "L"};

    std::ostringstream table;
    json steps = json::array();
    steps.push_back(annotated(examples::phase_grid(space, experiment.state_quasi().values), 8.0, table,
                              "Wigner function Q(alpha|w)"));
    for (const auto& r : experiment.restricted_states()) {
        const std::string name = striation_names[r.striation];
        json step = annotated(examples::phase_grid(space, r.values), 8.0, table, "R^" + name + "(alpha|w)");
        step["marginal"] = r.lines;
        steps.push_back(std::move(step));
    }
    steps.push_back(annotated(examples::transition_matrix(experiment.channel_quasi().front()), 4.0, table,
                              "Q_U(beta|alpha), rows beta"));
    for (std::size_t s = 0; s < experiment.set().matrices.size(); ++s) {
        steps.push_back(annotated(examples::transition_matrix(space, experiment.restricted_channels()[0][s]), 8.0, table,
                                  std::string("R^") + symplectic_names[s] + "_U(beta|alpha)"));
    }
    json premeasurement = json::array();
    for (std::size_t b = 0; b < space.num_striations(); ++b) {
        for (std::size_t s = 0; s < experiment.set().matrices.size(); ++s) {
            const std::size_t chain[] = {s};
            const auto dist = experiment.premeasurement(b, chain);
            const bool uniform = std::all_of(dist.begin(), dist.end(), [](double v) { return std::abs(v - 0.25) < 1e-12; });
            if (uniform) continue;
            const double left = dist[space.index({FieldElement{0}, FieldElement{0}})] +
                                dist[space.index({FieldElement{0}, FieldElement{1}})];
            json step = annotated(examples::phase_grid(space, dist), 16.0, table,
                                  std::string("R^") + symplectic_names[s] + " R^" + striation_names[b]);
            step["left_line"] = left;
            table << labelled("  left line", left);
            premeasurement.push_back(std::move(step));
        }
    }
    steps.push_back(annotated(examples::phase_grid(space, experiment.measurement_quasi().values), 1.0, table, "Q(E|beta)"));
    for (const auto& r : experiment.restricted_measurements()) {
        steps.push_back(annotated(examples::phase_grid(space, r.values), 2.0, table,
                                  std::string("R^") + striation_names[r.striation] + "(E|beta)"));
    }
    EngineOptions options;
    options.record_frameworks = true;
    const PredictionReport report = experiment.predict(options);
    table << labelled("delta_sum", report.delta_sum) << labelled("P(E)", report.probability);

    json result = {{"steps", steps},
                   {"premeasurement", premeasurement},
                   {"report", io::report_to_json(space, experiment.set(), report)},
                   {"born", born_hilbert(spec.state, spec.channels, spec.effect)}};
    emit(common, manifest, result, table.str());
    return 0;
}

int example_two_qutrit(const Common& common) {
    RunManifest manifest{"example two-qutrit"};
    const FiniteField field = examples::two_qutrit_field();
    manifest.field = io::field_to_json(field);
    const auto basis = operator_basis(field);
    const auto& space = basis->space();
    const ParticleDecomposition dec(field);
    const ComplexMatrix w = examples::two_qutrit_state();

    std::ostringstream table;
    json steps = json::array();
    const auto q = wigner_of_state(*basis, w);
    steps.push_back(annotated(examples::particle_grid(dec, space, q.values), 72.0, table, "Wigner function"));
    const std::size_t slope_two = space.striation_index(Slope::finite(field.from_int(2)));
    const auto r = restrict_state(space, q, slope_two);
    steps.push_back(annotated(examples::particle_grid(dec, space, r.values), 72.0, table, "R^B, slope 2"));

    const auto cls = classify_slope(dec, space, slope_two);
    json coeffs = json::array();
    for (auto c : cls.coefficients) coeffs.push_back(dec.base().prime_value(c));
    table << "slope 2 expands with coefficients";
    for (const auto& c : coeffs) table << ' ' << c.get<std::uint32_t>();
    table << "; particle slope " << cls.base_striation << '\n';

    const PhaseSpace small(dec.base());
    const auto reduced = sum_to_first_particle(dec, r.values);
    steps.push_back(annotated(examples::phase_grid(small, reduced), 12.0, table, "particle-1 R^B1"));
    const auto direct = restrict_state(small, wigner_of_state(*operator_basis(dec.base()), partial_trace_density(dec, w)),
                                       cls.base_striation);
    double deviation = 0.0;
    for (std::size_t k = 0; k < reduced.size(); ++k) deviation = std::max(deviation, std::abs(reduced[k] - direct.values[k]));
    table << "deviation from direct partial trace = " << cli::decimal(deviation) << '\n';

    json result = {{"steps", steps},
                   {"classification", {{"coefficients", coeffs}, {"particle_striation", cls.base_striation}}},
                   {"partial_trace_deviation", deviation}};
    emit(common, manifest, result, table.str());
    return 0;
}

int cmd_example(const Common& common, const std::string& name) {
    if (name == "mach-zehnder") return example_mach_zehnder(common);
    if (name == "two-qutrit") return example_two_qutrit(common);
    throw Error("InvalidArgument", "unknown example '" + name + "'");
}

void print_error(const Error& e) {
    std::cout << json{{"error", {{"code", e.code()}, {"message", e.what()}}}}.dump(2) << '\n';
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Epistemically restricted phase-space simulator"};
    app.require_subcommand(1);
    app.set_version_flag("--version", ERPS_VERSION);

    Common common;
    const auto add_common = [&](CLI::App* sub) {
        sub->add_option("--format", common.format, "Output format")->check(CLI::IsMember({"json", "table"}));
    };
    const auto add_mode = [&](CLI::App* sub) {
        sub->add_option("--mode", common.mode, "Symplectic set: full group or minimal reconstructing set")
            ->check(CLI::IsMember({"full", "mrs"}));
    };

    std::string spec_path;
    bool report_table = false;
    auto* predict = app.add_subcommand("predict", "Outcome probability from the framework sum");
    predict->add_option("spec", spec_path, "Experiment spec (JSON)")->required()->check(CLI::ExistingFile);
    add_mode(predict);
    predict->add_option("--filter", common.filter, "Framework filter")->check(CLI::IsMember({"coherent", "all"}));
    predict->add_flag("--report", report_table, "Include the per-framework table");
    predict->add_option("--threads", common.threads, "Worker threads")->check(CLI::PositiveNumber);
    add_common(predict);

    std::string what = "state";
    auto* decompose = app.add_subcommand("decompose", "Restricted families of a spec's objects");
    decompose->add_option("spec", spec_path, "Experiment spec (JSON)")->required()->check(CLI::ExistingFile);
    decompose->add_option("--what", what, "Object to decompose")->check(CLI::IsMember({"state", "channel", "measurement"}));
    add_mode(decompose);
    add_common(decompose);

    std::string family_path;
    auto* reconstruct = app.add_subcommand("reconstruct", "Operator-level object from a restricted family");
    reconstruct->add_option("family", family_path, "Family document (JSON)")->required()->check(CLI::ExistingFile);
    add_common(reconstruct);

    std::vector<std::string> family_paths;
    ConstraintOptions constraint_options;
    auto* check = app.add_subcommand("check", "Purity and unitarity constraints on restricted families");
    check->add_option("families", family_paths, "Family documents (JSON)")->required()->check(CLI::ExistingFile);
    check->add_option("--tolerance", constraint_options.tolerance, "Residual tolerance");
    check->add_option("--samples", constraint_options.samples, "Sampled triples for the unitarity check");
    check->add_option("--seed", constraint_options.seed, "Sampling seed");
    add_common(check);

    std::uint32_t order = 0;
    double budget = 1e8;
    auto* mrs = app.add_subcommand("mrs", "Search for a minimal reconstructing set");
    mrs->add_option("d", order, "Dimension (prime power)")->required();
    mrs->add_option("--budget", budget, "Search node budget");
    add_common(mrs);

    std::string basis_text;
    std::uint32_t sub_degree = 1;
    std::size_t particle = 0;
    auto* ptrace = app.add_subcommand("ptrace", "Single-particle description of a composite state");
    ptrace->add_option("spec", spec_path, "Experiment spec (JSON)")->required()->check(CLI::ExistingFile);
    ptrace->add_option("--basis", basis_text, "Field basis as JSON coefficient arrays");
    ptrace->add_option("--sub-degree", sub_degree, "Degree of the particle field over F_p");
    ptrace->add_option("--particle", particle, "Particle to keep (zero-based)");
    add_common(ptrace);

    std::string example_name;
    auto* example = app.add_subcommand("example", "Annotated walkthrough of a built-in example");
    example->add_option("name", example_name, "Example name")
        ->required()
        ->check(CLI::IsMember({"mach-zehnder", "two-qutrit"}));
    add_common(example);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : kExitValidation;
    }

    try {
        if (*predict) return cmd_predict(common, spec_path, report_table);
        if (*decompose) return cmd_decompose(common, spec_path, what);
        if (*reconstruct) return cmd_reconstruct(common, family_path);
        if (*check) return cmd_check(common, family_paths, constraint_options);
        if (*mrs) return cmd_mrs(common, order, budget);
        if (*ptrace) return cmd_ptrace(common, spec_path, basis_text, sub_degree, particle);
        if (*example) return cmd_example(common, example_name);
    } catch (const Error& e) {
        print_error(e);
        return kExitValidation;
    }
    return 0;
}
