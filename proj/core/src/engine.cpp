#include "erps/engine.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>
#include <thread>

#include "erps/error.hpp"

namespace erps {

double pairwise_sum(std::span<const double> values) {
    if (values.size() <= 8) {
        double s = 0.0;
        for (double v : values) s += v;
        return s;
    }
    const std::size_t half = values.size() / 2;
    return pairwise_sum(values.first(half)) + pairwise_sum(values.subspan(half));
}

SymplecticSet symplectic_set(const FiniteField& field, FrameworkMode mode, const MrsOptions& mrs) {
    SymplecticSet set;
    set.mode = mode;
    if (mode == FrameworkMode::FullGroup) {
        set.matrices = legal_symplectics(field);
    } else {
        auto result = minimal_reconstructing_set(field, mrs);
        if (!result.found) {
            throw Error("MrsUnavailable", "no minimal reconstructing set is available for d = " +
                                              std::to_string(field.order()));
        }
        set.matrices = std::move(result.matrices);
    }
    set.redundancy = redundancy_factor(field, mode);
    return set;
}

std::uint64_t framework_count(std::size_t num_striations, std::size_t set_size, std::size_t n_channels,
                              FrameworkFilter filter) {
    std::uint64_t count = num_striations;
    for (std::size_t k = 0; k < n_channels; ++k) count *= set_size;
    return filter == FrameworkFilter::All ? count * num_striations : count;
}

std::size_t coherent_measurement(const PhaseSpace& space, const SymplecticSet& set, std::size_t prep,
                                 std::span<const std::size_t> channels) {
    std::size_t b = prep;
    for (auto s : channels) b = apply_striation_image(space, set.matrices.at(s), b).striation;
    return b;
}

std::vector<Framework> enumerate_frameworks(const PhaseSpace& space, const SymplecticSet& set, std::size_t n_channels,
                                            FrameworkFilter filter) {
    std::vector<Framework> out;
    const std::size_t m = set.matrices.size();
    std::vector<std::size_t> chain(n_channels, 0);
    for (std::size_t b = 0; b < space.num_striations(); ++b) {
        std::fill(chain.begin(), chain.end(), 0);
        while (true) {
            if (filter == FrameworkFilter::Coherent) {
                out.push_back({b, chain, coherent_measurement(space, set, b, chain)});
            } else {
                for (std::size_t bp = 0; bp < space.num_striations(); ++bp) out.push_back({b, chain, bp});
            }
            // Odometer increment with the last channel varying fastest.
            std::size_t k = n_channels;
            while (k > 0 && ++chain[k - 1] == m) chain[--k] = 0;
            if (k == 0) break;
        }
    }
    return out;
}

PreparedExperiment::PreparedExperiment(const ExperimentSpec& spec, FrameworkMode mode, const MrsOptions& mrs)
    : basis_(operator_basis(spec.field)), set_(symplectic_set(spec.field, mode, mrs)) {
    const auto& sp = basis_->space();
    state_quasi_ = wigner_of_state(*basis_, spec.state);
    for (const auto& ch : spec.channels) channel_quasi_.push_back(quasi_of_channel(*basis_, ch));
    meas_quasi_ = quasi_of_measurement(*basis_, spec.effect);
    states_ = restrict_state_all(sp, state_quasi_);
    for (const auto& q : channel_quasi_) channels_.push_back(restrict_channel_all(sp, q, set_.matrices));
    measurements_ = restrict_measurement_all(sp, meas_quasi_);
}

double PreparedExperiment::min_restricted_raw() const {
    double m = std::numeric_limits<double>::infinity();
    for (const auto& r : states_) m = std::min(m, r.min_raw);
    for (const auto& family : channels_) {
        for (const auto& r : family) m = std::min(m, r.min_raw);
    }
    for (const auto& r : measurements_) m = std::min(m, r.min_raw);
    return m;
}

namespace {

std::vector<double> push_through(const PhaseSpace& space, const std::vector<double>& dist,
                                 const std::vector<double>& class_dist, const SymplecticMatrix& s) {
    const auto perm = point_permutation(space, s);
    std::vector<double> out(dist.size(), 0.0);
    for (std::size_t a = 0; a < dist.size(); ++a) {
        if (dist[a] == 0.0) continue;
        for (std::size_t delta = 0; delta < dist.size(); ++delta) {
            out[space.add_index(perm[a], delta)] += class_dist[delta] * dist[a];
        }
    }
    return out;
}

double dot(const std::vector<double>& a, const std::vector<double>& b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

}  // namespace

std::vector<double> PreparedExperiment::premeasurement(std::size_t prep, std::span<const std::size_t> chain) const {
    if (chain.size() != n_channels()) throw Error("InvalidFramework", "framework has the wrong number of channels");
    std::vector<double> dist = states_.at(prep).values;
    for (std::size_t k = 0; k < chain.size(); ++k) {
        const auto& r = channels_[k].at(chain[k]);
        dist = push_through(space(), dist, r.class_dist, r.symplectic);
    }
    return dist;
}

double PreparedExperiment::classical_predict(const Framework& fw) const {
    return dot(measurements_.at(fw.meas).values, premeasurement(fw.prep, fw.channels));
}

double PreparedExperiment::delta_point_level(const Framework& fw) const {
    if (fw.channels.size() != n_channels()) throw Error("InvalidFramework", "framework has the wrong number of channels");
    std::vector<double> dist = nonrandom(states_.at(fw.prep)).values;
    for (std::size_t k = 0; k < fw.channels.size(); ++k) {
        const auto r = nonrandom(channels_[k].at(fw.channels[k]));
        dist = push_through(space(), dist, r.class_dist, r.symplectic);
    }
    return dot(nonrandom(measurements_.at(fw.meas)).values, dist);
}

namespace {

// Line-level tables for the framework sum. Every intermediate distribution
// is constant on the lines of the current striation, so it is stored as one
// value per line (the per-point value). A channel step with S maps the lines
// of B onto those of SB and convolves with the line sums of the class
// distribution along SB.
struct ChainTables {
    std::size_t d = 0;
    std::size_t striations = 0;
    std::size_t set_size = 0;
    std::vector<std::size_t> image;          // [s][B] -> striation index of SB
    std::vector<std::size_t> intercept_map;  // [s][B][c] -> intercept in SB
    std::vector<std::size_t> sub;            // [a][b] -> a − b on intercepts
    std::vector<double> start;               // [B][c]
    std::vector<double> kernel;              // [k][s][B'][c]
    std::vector<double> profile;             // [Bn][B'][L]

    double kernel_at(std::size_t k, std::size_t s, std::size_t b, std::size_t c) const {
        return kernel[((k * set_size + s) * striations + b) * d + c];
    }
};

ChainTables build_tables(const PreparedExperiment& ex, bool nonrandom_part) {
    const auto& space = ex.space();
    const auto& set = ex.set().matrices;
    ChainTables t;
    t.d = space.dim();
    t.striations = space.num_striations();
    t.set_size = set.size();
    const std::size_t d = t.d;

    t.image.resize(t.set_size * t.striations);
    t.intercept_map.resize(t.set_size * t.striations * d);
    for (std::size_t s = 0; s < t.set_size; ++s) {
        for (std::size_t b = 0; b < t.striations; ++b) {
            const auto img = apply_striation_image(space, set[s], b);
            t.image[s * t.striations + b] = img.striation;
            std::copy(img.intercept_map.begin(), img.intercept_map.end(),
                      t.intercept_map.begin() + static_cast<std::ptrdiff_t>((s * t.striations + b) * d));
        }
    }
    t.sub.resize(d * d);
    const auto& f = space.field();
    for (std::uint32_t a = 0; a < d; ++a) {
        for (std::uint32_t b = 0; b < d; ++b) t.sub[a * d + b] = f.sub(FieldElement{a}, FieldElement{b}).index;
    }

    const double inv_d = 1.0 / static_cast<double>(d);
    const double inv_d2 = inv_d * inv_d;
    t.start.resize(t.striations * d);
    for (std::size_t b = 0; b < t.striations; ++b) {
        for (std::size_t c = 0; c < d; ++c) {
            const double p = ex.restricted_states()[b].lines[c];
            t.start[b * d + c] = (nonrandom_part ? p - inv_d : p) * inv_d;
        }
    }

    const std::size_t n = ex.n_channels();
    t.kernel.assign(n * t.set_size * t.striations * d, 0.0);
    for (std::size_t k = 0; k < n; ++k) {
        for (std::size_t s = 0; s < t.set_size; ++s) {
            const auto& cd = ex.restricted_channels()[k][s].class_dist;
            for (std::size_t b = 0; b < t.striations; ++b) {
                for (std::size_t c = 0; c < d; ++c) {
                    double sum = 0.0;
                    for (auto pt : space.points_on(b, c)) sum += nonrandom_part ? cd[pt] - inv_d2 : cd[pt];
                    t.kernel[((k * t.set_size + s) * t.striations + b) * d + c] = sum;
                }
            }
        }
    }

    t.profile.assign(t.striations * t.striations * d, 0.0);
    for (std::size_t bn = 0; bn < t.striations; ++bn) {
        for (std::size_t bp = 0; bp < t.striations; ++bp) {
            const auto& meas = ex.restricted_measurements()[bp];
            const double offset = nonrandom_part ? meas.trace_effect * inv_d : 0.0;
            for (std::size_t l = 0; l < d; ++l) {
                double sum = 0.0;
                for (auto pt : space.points_on(bn, l)) sum += meas.values[pt] - offset;
                t.profile[(bn * t.striations + bp) * d + l] = sum;
            }
        }
    }
    return t;
}

struct BlockResult {
    double sum = 0.0;
    std::uint64_t nonzero = 0;
    double max_incoherent = 0.0;
    std::vector<FrameworkContribution> rows;
};

class ChainEvaluator {
public:
    ChainEvaluator(const ChainTables& delta, const ChainTables* full, std::size_t n_channels, FrameworkFilter filter)
        : delta_(delta), full_(full), n_(n_channels), filter_(filter), chain_(n_channels, 0) {
        const std::size_t d = delta.d;
        g_.assign((n_channels + 1) * d, 0.0);
        if (full_ != nullptr) h_.assign((n_channels + 1) * d, 0.0);
        striation_.assign(n_channels + 1, 0);
    }

    // Evaluates every framework whose prefix (B, S_1 … S_depth) is fixed.
    void run_block(std::size_t prep, std::span<const std::size_t> prefix, std::vector<double>& buffer,
                   BlockResult& out) {
        const std::size_t d = delta_.d;
        striation_[0] = prep;
        std::copy_n(delta_.start.begin() + static_cast<std::ptrdiff_t>(prep * d), d, g_.begin());
        if (full_ != nullptr) std::copy_n(full_->start.begin() + static_cast<std::ptrdiff_t>(prep * d), d, h_.begin());
        for (std::size_t k = 0; k < prefix.size(); ++k) {
            chain_[k] = prefix[k];
            step(k, prefix[k]);
        }
        buffer.clear();
        descend(prefix.size(), buffer, out);
        out.sum = pairwise_sum(buffer);
    }

private:
    void step(std::size_t k, std::size_t s) {
        const std::size_t d = delta_.d;
        const std::size_t b = striation_[k];
        const std::size_t b_next = delta_.image[s * delta_.striations + b];
        striation_[k + 1] = b_next;
        const std::size_t* map = &delta_.intercept_map[(s * delta_.striations + b) * d];
        convolve(delta_, k, s, b_next, map, &g_[k * d], &g_[(k + 1) * d]);
        if (full_ != nullptr) convolve(*full_, k, s, b_next, map, &h_[k * d], &h_[(k + 1) * d]);
    }

    static void convolve(const ChainTables& t, std::size_t k, std::size_t s, std::size_t b_next,
                         const std::size_t* map, const double* in, double* out) {
        const std::size_t d = t.d;
        const double* ker = &t.kernel[((k * t.set_size + s) * t.striations + b_next) * d];
        for (std::size_t l = 0; l < d; ++l) {
            const std::size_t* sub_row = &t.sub[l * d];
            double acc = 0.0;
            for (std::size_t c = 0; c < d; ++c) acc += in[c] * ker[sub_row[map[c]]];
            out[l] = acc;
        }
    }

    static double finish(const ChainTables& t, const double* g, std::size_t bn, std::size_t bp) {
        const double* prof = &t.profile[(bn * t.striations + bp) * t.d];
        double acc = 0.0;
        for (std::size_t l = 0; l < t.d; ++l) acc += g[l] * prof[l];
        return acc;
    }

    void descend(std::size_t depth, std::vector<double>& buffer, BlockResult& out) {
        if (depth == n_) {
            emit(buffer, out);
            return;
        }
        for (std::size_t s = 0; s < delta_.set_size; ++s) {
            chain_[depth] = s;
            step(depth, s);
            descend(depth + 1, buffer, out);
        }
    }

    void emit(std::vector<double>& buffer, BlockResult& out) {
        const std::size_t d = delta_.d;
        const std::size_t bn = striation_[n_];
        const double* g = &g_[n_ * d];
        auto record = [&](std::size_t bp, double value) {
            buffer.push_back(value);
            if (std::abs(value) > kNonzeroContribution) ++out.nonzero;
            if (bp != bn) out.max_incoherent = std::max(out.max_incoherent, std::abs(value));
            if (full_ != nullptr) {
                out.rows.push_back({Framework{striation_[0], chain_, bp}, value, finish(*full_, &h_[n_ * d], bn, bp),
                                    bp == bn});
            }
        };
        if (filter_ == FrameworkFilter::Coherent) {
            record(bn, finish(delta_, g, bn, bn));
        } else {
            for (std::size_t bp = 0; bp < delta_.striations; ++bp) record(bp, finish(delta_, g, bn, bp));
        }
    }

    const ChainTables& delta_;
    const ChainTables* full_;
    std::size_t n_;
    FrameworkFilter filter_;
    std::vector<std::size_t> chain_;
    std::vector<double> g_;
    std::vector<double> h_;
    std::vector<std::size_t> striation_;
};

// Frameworks are grouped into blocks sharing (B, S_1 … S_depth); the depth is
// chosen so each block holds a bounded number of leaves. Block sums are then
// combined pairwise, which keeps the result independent of thread count.
std::size_t block_depth(std::size_t n_channels, std::size_t set_size, std::size_t striations) {
    constexpr std::size_t kMaxLeaves = 1U << 16;
    std::size_t depth = 0;
    std::size_t leaves = striations;
    for (std::size_t k = 0; k < n_channels; ++k) leaves *= set_size;
    while (depth < n_channels && leaves > kMaxLeaves) {
        leaves /= set_size;
        ++depth;
    }
    return depth;
}

}  // namespace

PredictionReport PreparedExperiment::predict(const EngineOptions& options) const {
    const std::size_t n = n_channels();
    const std::size_t striations = space().num_striations();
    const std::size_t m = set_.matrices.size();

    PredictionReport report;
    report.n_channels = n;
    report.mode = set_.mode;
    report.filter = options.filter;
    report.redundancy = n == 0 ? 1 : set_.redundancy;
    report.frameworks = framework_count(striations, m, n, options.filter);
    report.offset = meas_quasi_.trace_effect / space().dim();
    if (options.record_frameworks && report.frameworks > options.record_limit) {
        throw Error("ReportTooLarge", "per-framework table would have " + std::to_string(report.frameworks) +
                                          " rows; raise the record limit or disable recording");
    }

    const ChainTables delta = build_tables(*this, true);
    std::optional<ChainTables> full;
    if (options.record_frameworks) full = build_tables(*this, false);

    const std::size_t depth = block_depth(n, m, striations);
    std::uint64_t blocks = striations;
    for (std::size_t k = 0; k < depth; ++k) blocks *= m;
    std::vector<BlockResult> results(blocks);

    std::atomic<std::uint64_t> next{0};
    auto worker = [&] {
        ChainEvaluator eval(delta, full ? &*full : nullptr, n, options.filter);
        std::vector<double> buffer;
        std::vector<std::size_t> prefix(depth);
        for (std::uint64_t block = next++; block < blocks; block = next++) {
            std::uint64_t rest = block;
            for (std::size_t k = depth; k > 0; --k) {
                prefix[k - 1] = rest % m;
                rest /= m;
            }
            eval.run_block(static_cast<std::size_t>(rest), prefix, buffer, results[block]);
        }
    };
    const unsigned threads = std::max(1U, std::min<unsigned>(options.threads, static_cast<unsigned>(blocks)));
    if (threads == 1) {
        worker();
    } else {
        std::vector<std::jthread> pool;
        for (unsigned t = 0; t < threads; ++t) pool.emplace_back(worker);
    }

    std::vector<double> sums(blocks);
    for (std::uint64_t b = 0; b < blocks; ++b) {
        sums[b] = results[b].sum;
        report.nonzero_contributors += results[b].nonzero;
        report.max_incoherent = std::max(report.max_incoherent, results[b].max_incoherent);
        if (options.record_frameworks) {
            std::move(results[b].rows.begin(), results[b].rows.end(), std::back_inserter(report.table));
        }
    }
    double z_power = 1.0;
    for (std::size_t k = 0; k < n; ++k) z_power *= set_.redundancy;
    report.delta_sum = pairwise_sum(sums) / z_power;
    report.raw = report.delta_sum + report.offset;
    report.probability = std::clamp(report.raw, 0.0, 1.0);
    return report;
}

double classical_predict(const Framework& fw, const ExperimentSpec& spec, FrameworkMode mode) {
    return PreparedExperiment(spec, mode).classical_predict(fw);
}

PredictionReport quantum_predict(const ExperimentSpec& spec, const EngineOptions& options) {
    return PreparedExperiment(spec, options.mode, options.mrs).predict(options);
}

CoherenceCheck coherence_equivalence_check(const PreparedExperiment& experiment, unsigned threads) {
    EngineOptions opts;
    opts.threads = threads;
    opts.filter = FrameworkFilter::Coherent;
    const auto coherent = experiment.predict(opts);
    opts.filter = FrameworkFilter::All;
    const auto all = experiment.predict(opts);
    return {coherent.delta_sum, all.delta_sum, std::abs(all.delta_sum - coherent.delta_sum), all.max_incoherent};
}

CoherenceCheck coherence_equivalence_check(const ExperimentSpec& spec, FrameworkMode mode) {
    return coherence_equivalence_check(PreparedExperiment(spec, mode));
}

}  // namespace erps
