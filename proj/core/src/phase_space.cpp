#include "erps/phase_space.hpp"

#include <algorithm>
#include <bit>
#include <cstdlib>
#include <fstream>
#include <map>
#include <mutex>
#include <sstream>

#include <nlohmann/json.hpp>

#include "erps/error.hpp"

namespace erps {

FieldElement determinant(const FiniteField& field, const SymplecticMatrix& s) {
    return field.sub(field.mul(s.v, s.z), field.mul(s.x, s.y));
}

SymplecticMatrix multiply(const FiniteField& f, const SymplecticMatrix& a, const SymplecticMatrix& b) {
    return {f.add(f.mul(a.v, b.v), f.mul(a.x, b.y)), f.add(f.mul(a.v, b.x), f.mul(a.x, b.z)),
            f.add(f.mul(a.y, b.v), f.mul(a.z, b.y)), f.add(f.mul(a.y, b.x), f.mul(a.z, b.z))};
}

SymplecticMatrix identity_symplectic(const FiniteField& field) {
    return {field.one(), field.zero(), field.zero(), field.one()};
}

SymplecticMatrix inverse(const FiniteField& f, const SymplecticMatrix& s) {
    const FieldElement det = determinant(f, s);
    if (det == f.zero()) throw Error("SingularMatrix", "matrix is not invertible");
    const FieldElement k = f.inv(det);
    return {f.mul(k, s.z), f.mul(k, f.neg(s.x)), f.mul(k, f.neg(s.y)), f.mul(k, s.v)};
}

PhasePoint apply(const FiniteField& f, const SymplecticMatrix& s, PhasePoint a) {
    return {f.add(f.mul(s.v, a.q), f.mul(s.x, a.p)), f.add(f.mul(s.y, a.q), f.mul(s.z, a.p))};
}

FieldElement symplectic_product(const FiniteField& f, PhasePoint alpha, PhasePoint beta) {
    return f.sub(f.mul(alpha.p, beta.q), f.mul(alpha.q, beta.p));
}

PhaseSpace::PhaseSpace(FiniteField field) : field_(std::move(field)), dim_(field_.order()) {
    const std::size_t n = num_points();
    const std::size_t d = dim_;
    add_table_.resize(n * n);
    sub_table_.resize(n * n);
    for (std::size_t a = 0; a < n; ++a) {
        const PhasePoint pa = point(a);
        for (std::size_t b = 0; b < n; ++b) {
            const PhasePoint pb = point(b);
            add_table_[a * n + b] = index({field_.add(pa.q, pb.q), field_.add(pa.p, pb.p)});
            sub_table_[a * n + b] = index({field_.sub(pa.q, pb.q), field_.sub(pa.p, pb.p)});
        }
    }

    line_of_.resize(num_striations() * n);
    points_on_.resize(num_striations() * n);
    for (std::size_t s = 0; s < num_striations(); ++s) {
        std::vector<std::size_t> fill(d, 0);
        for (std::size_t a = 0; a < n; ++a) {
            const PhasePoint pa = point(a);
            const std::size_t c =
                s == d ? pa.q.index : field_.sub(pa.p, field_.mul(FieldElement{static_cast<std::uint32_t>(s)}, pa.q)).index;
            line_of_[s * n + a] = c;
            points_on_[(s * d + c) * d + fill[c]++] = a;
        }
    }
}

Slope PhaseSpace::slope(std::size_t striation) const {
    if (striation > dim_) throw Error("InvalidStriation", "striation index out of range");
    if (striation == dim_) return Slope::vertical();
    return Slope::finite(FieldElement{static_cast<std::uint32_t>(striation)});
}

std::size_t PhaseSpace::striation_index(Slope s) const {
    if (s.infinite) return dim_;
    if (s.value.index >= dim_) throw Error("InvalidStriation", "slope is not a field element");
    return s.value.index;
}

Line PhaseSpace::line(std::size_t striation, std::size_t intercept) const {
    const FieldElement c{static_cast<std::uint32_t>(intercept)};
    if (striation == dim_) return {field_.one(), field_.zero(), c};
    return {field_.neg(FieldElement{static_cast<std::uint32_t>(striation)}), field_.one(), c};
}

StriationImage apply_striation_image(const PhaseSpace& space, const SymplecticMatrix& s, std::size_t striation) {
    const auto& f = space.field();
    const std::uint32_t d = space.dim();
    // Direction of the striation's lines and its image.
    const PhasePoint dir = striation == d ? PhasePoint{f.zero(), f.one()}
                                          : PhasePoint{f.one(), FieldElement{static_cast<std::uint32_t>(striation)}};
    const PhasePoint img = apply(f, s, dir);
    StriationImage out;
    out.striation = img.q == f.zero() ? d : f.div(img.p, img.q).index;
    out.intercept_map.resize(d);
    for (std::uint32_t c = 0; c < d; ++c) {
        const FieldElement ce{c};
        const PhasePoint base = striation == d ? PhasePoint{ce, f.zero()} : PhasePoint{f.zero(), ce};
        out.intercept_map[c] = space.line_of(out.striation, space.index(apply(f, s, base)));
    }
    return out;
}

std::vector<std::size_t> point_permutation(const PhaseSpace& space, const SymplecticMatrix& s) {
    std::vector<std::size_t> perm(space.num_points());
    for (std::size_t a = 0; a < perm.size(); ++a) {
        perm[a] = space.index(apply(space.field(), s, space.point(a)));
    }
    return perm;
}

std::vector<SymplecticMatrix> symplectic_group(const FiniteField& field) {
    std::vector<SymplecticMatrix> group;
    const auto els = field.elements();
    for (auto v : els) {
        for (auto x : els) {
            for (auto y : els) {
                for (auto z : els) {
                    SymplecticMatrix s{v, x, y, z};
                    if (determinant(field, s) == field.one()) group.push_back(s);
                }
            }
        }
    }
    return group;
}

namespace {

std::vector<SymplecticMatrix> qubit_legal(const FiniteField& f) {
    const auto o = f.one();
    const auto z = f.zero();
    return {{o, z, z, o}, {z, o, o, o}, {o, o, o, z}};
}

}  // namespace

std::vector<SymplecticMatrix> legal_symplectics(const FiniteField& field) {
    if (field.order() == 2) return qubit_legal(field);
    return symplectic_group(field);
}

bool is_legal(const FiniteField& field, const SymplecticMatrix& s) {
    if (field.order() == 2) {
        const auto legal = qubit_legal(field);
        return std::find(legal.begin(), legal.end(), s) != legal.end();
    }
    return determinant(field, s) == field.one();
}

std::uint32_t redundancy_factor(const FiniteField& field, FrameworkMode mode) {
    if (mode == FrameworkMode::Mrs || field.order() == 2) return 1;
    return field.order();
}

std::size_t symplectic_orbit_count(const FiniteField& field, PhasePoint mu, PhasePoint nu,
                                   std::span<const SymplecticMatrix> set) {
    const PhasePoint origin{field.zero(), field.zero()};
    if (mu == origin || nu == origin) throw Error("ZeroPointArgument", "orbit count requires nonzero points");
    return static_cast<std::size_t>(
        std::count_if(set.begin(), set.end(), [&](const auto& s) { return apply(field, s, mu) == nu; }));
}

bool verify_mrs(const FiniteField& field, std::span<const SymplecticMatrix> set) {
    const std::size_t d = field.order();
    if (set.size() != d * d - 1) return false;
    for (const auto& s : set) {
        if (!is_legal(field, s)) return false;
    }
    for (std::size_t i = 0; i < set.size(); ++i) {
        for (std::size_t j = i + 1; j < set.size(); ++j) {
            const SymplecticMatrix diff{field.sub(set[i].v, set[j].v), field.sub(set[i].x, set[j].x),
                                        field.sub(set[i].y, set[j].y), field.sub(set[i].z, set[j].z)};
            if (determinant(field, diff) == field.zero()) return false;
        }
    }
    return true;
}

std::filesystem::path default_cache_dir() {
    const char* env = std::getenv("ERPS_CACHE_DIR");
    return env == nullptr ? std::filesystem::path{} : std::filesystem::path{env};
}

namespace {

constexpr int kCacheVersion = 1;

std::string field_key(const FiniteField& field) {
    std::ostringstream os;
    os << "p" << field.characteristic() << "_n" << field.degree() << "_m";
    for (auto c : field.modulus()) os << c;
    return os.str();
}

std::mutex g_cache_mutex;
std::map<std::string, std::vector<SymplecticMatrix>>& memory_cache() {
    static std::map<std::string, std::vector<SymplecticMatrix>> cache;
    return cache;
}

std::filesystem::path cache_file(const std::filesystem::path& dir, const FiniteField& field) {
    return dir / ("mrs_v" + std::to_string(kCacheVersion) + "_" + field_key(field) + ".json");
}

std::optional<std::vector<SymplecticMatrix>> load_cached(const std::filesystem::path& file,
                                                         const FiniteField& field) {
    std::ifstream in(file);
    if (!in) return std::nullopt;
    try {
        const auto doc = nlohmann::json::parse(in);
        if (doc.at("version").get<int>() != kCacheVersion || doc.at("p").get<std::uint32_t>() != field.characteristic() ||
            doc.at("n").get<std::uint32_t>() != field.degree() || doc.at("modulus").get<Polynomial>() != field.modulus()) {
            return std::nullopt;
        }
        std::vector<SymplecticMatrix> set;
        for (const auto& m : doc.at("matrices")) {
            auto entry = [&](const char* key) {
                return field.from_coeffs(m.at(key).get<std::vector<std::uint32_t>>());
            };
            set.push_back({entry("v"), entry("x"), entry("y"), entry("z")});
        }
        if (!verify_mrs(field, set)) {
            emit_diagnostic("ignoring MRS cache entry that fails verification: " + file.string());
            return std::nullopt;
        }
        return set;
    } catch (const std::exception& e) {
        emit_diagnostic("ignoring unreadable MRS cache entry " + file.string() + ": " + e.what());
        return std::nullopt;
    }
}

void store_cached(const std::filesystem::path& file, const FiniteField& field,
                  const std::vector<SymplecticMatrix>& set) {
    nlohmann::json doc;
    doc["version"] = kCacheVersion;
    doc["p"] = field.characteristic();
    doc["n"] = field.degree();
    doc["modulus"] = field.modulus();
    auto& mats = doc["matrices"] = nlohmann::json::array();
    for (const auto& s : set) {
        mats.push_back({{"v", field.coeffs(s.v)}, {"x", field.coeffs(s.x)}, {"y", field.coeffs(s.y)},
                        {"z", field.coeffs(s.z)}});
    }
    std::error_code ec;
    std::filesystem::create_directories(file.parent_path(), ec);
    const auto tmp = file.string() + ".tmp";
    {
        std::ofstream out(tmp);
        if (!out) return;
        out << doc.dump(1) << '\n';
    }
    std::filesystem::rename(tmp, file, ec);
    if (ec) emit_diagnostic("could not write MRS cache " + file.string() + ": " + ec.message());
}

// Sharply transitive search: the set must send e1 = (1, 0) to every nonzero
// point exactly once, so each nonzero target picks one of its d
// determinant-one matrices with that first column. Domains are per-target
// bitmasks over those d candidates, narrowed by forward checking.
class MrsSearch {
public:
    MrsSearch(const FiniteField& field, std::uint64_t budget) : field_(field), budget_(budget) {
        const std::uint32_t d = field.order();
        targets_ = d * d - 1;
        const auto els = field.elements();
        for (std::uint32_t q = 0; q < d; ++q) {
            for (std::uint32_t p = 0; p < d; ++p) {
                if (q == 0 && p == 0) continue;
                const FieldElement v{q};
                const FieldElement y{p};
                std::vector<SymplecticMatrix> options;
                for (auto free : els) {
                    SymplecticMatrix s{};
                    if (v != field.zero()) {
                        s = {v, free, y, field.div(field.add(field.one(), field.mul(free, y)), v)};
                    } else {
                        s = {v, field.neg(field.inv(y)), y, free};
                    }
                    options.push_back(s);
                }
                std::uint32_t legal_mask = 0;
                for (std::size_t c = 0; c < options.size(); ++c) {
                    if (is_legal(field, options[c])) legal_mask |= 1U << c;
                }
                candidates_.push_back(std::move(options));
                initial_.push_back(legal_mask);
            }
        }
        const std::size_t total = static_cast<std::size_t>(targets_) * d;
        compat_.assign(total * targets_, 0);
        for (std::size_t a = 0; a < total; ++a) {
            const auto& sa = candidate(a);
            for (std::uint32_t t = 0; t < targets_; ++t) {
                std::uint32_t mask = 0;
                for (std::uint32_t c = 0; c < d; ++c) {
                    const auto& sb = candidates_[t][c];
                    const SymplecticMatrix diff{field.sub(sa.v, sb.v), field.sub(sa.x, sb.x), field.sub(sa.y, sb.y),
                                                field.sub(sa.z, sb.z)};
                    if (determinant(field, diff) != field.zero()) mask |= 1U << c;
                }
                compat_[a * targets_ + t] = mask;
            }
        }
    }

    MrsResult run() {
        MrsResult result;
        const std::uint32_t d = field_.order();
        std::vector<std::uint32_t> domains = initial_;
        std::vector<int> chosen(targets_, -1);

        // Pin the identity on target e1.
        // Targets are nonzero points in index order, so point k is target k - 1.
        const std::uint32_t e1_target = field_.one().index * d - 1;
        const auto id = identity_symplectic(field_);
        int id_choice = -1;
        for (std::uint32_t c = 0; c < d; ++c) {
            if (candidates_[e1_target][c] == id) id_choice = static_cast<int>(c);
        }
        ++nodes_;
        if (assign(domains, chosen, e1_target, static_cast<std::uint32_t>(id_choice)) && dfs(domains, chosen, 1)) {
            result.found = true;
            for (std::uint32_t t = 0; t < targets_; ++t) {
                result.matrices.push_back(candidates_[t][static_cast<std::size_t>(chosen[t])]);
            }
            std::stable_partition(result.matrices.begin(), result.matrices.end(),
                                  [&](const auto& s) { return s == id; });
        }
        result.budget_exhausted = exhausted_;
        result.nodes = nodes_;
        return result;
    }

private:
    const SymplecticMatrix& candidate(std::size_t flat) const {
        const std::uint32_t d = field_.order();
        return candidates_[flat / d][flat % d];
    }

    bool assign(std::vector<std::uint32_t>& domains, std::vector<int>& chosen, std::uint32_t target,
                std::uint32_t choice) const {
        chosen[target] = static_cast<int>(choice);
        domains[target] = 1U << choice;
        const std::size_t row = (static_cast<std::size_t>(target) * field_.order() + choice) * targets_;
        for (std::uint32_t t = 0; t < targets_; ++t) {
            if (chosen[t] >= 0) continue;
            domains[t] &= compat_[row + t];
            if (domains[t] == 0) return false;
        }
        return true;
    }

    bool dfs(std::vector<std::uint32_t>& domains, std::vector<int>& chosen, std::uint32_t depth) {
        if (depth == targets_) return true;
        // Most constrained unassigned target first.
        std::uint32_t best = targets_;
        int best_size = 64;
        for (std::uint32_t t = 0; t < targets_; ++t) {
            if (chosen[t] >= 0) continue;
            const int size = std::popcount(domains[t]);
            if (size < best_size) {
                best_size = size;
                best = t;
            }
        }
        for (std::uint32_t mask = domains[best]; mask != 0; mask &= mask - 1) {
            if (nodes_ >= budget_) {
                exhausted_ = true;
                return false;
            }
            ++nodes_;
            const auto choice = static_cast<std::uint32_t>(std::countr_zero(mask));
            auto next = domains;
            if (assign(next, chosen, best, choice) && dfs(next, chosen, depth + 1)) {
                domains = std::move(next);
                return true;
            }
            chosen[best] = -1;
            if (exhausted_) return false;
        }
        return false;
    }

    const FiniteField& field_;
    std::uint64_t budget_;
    std::uint64_t nodes_ = 0;
    bool exhausted_ = false;
    std::uint32_t targets_ = 0;
    std::vector<std::vector<SymplecticMatrix>> candidates_;
    std::vector<std::uint32_t> initial_;
    std::vector<std::uint32_t> compat_;
};

}  // namespace

MrsResult minimal_reconstructing_set(const FiniteField& field, const MrsOptions& options) {
    const std::string key = field_key(field);
    {
        std::lock_guard lock(g_cache_mutex);
        if (auto it = memory_cache().find(key); it != memory_cache().end()) {
            return {true, false, 0, it->second};
        }
    }
    if (!options.cache_dir.empty()) {
        if (auto cached = load_cached(cache_file(options.cache_dir, field), field)) {
            std::lock_guard lock(g_cache_mutex);
            memory_cache()[key] = *cached;
            return {true, false, 0, std::move(*cached)};
        }
    }

    MrsResult result = MrsSearch(field, options.node_budget).run();
    if (result.found) {
        if (!verify_mrs(field, result.matrices)) {
            throw Error("MrsCertificateFailure", "search produced a set that fails verification");
        }
        std::lock_guard lock(g_cache_mutex);
        memory_cache()[key] = result.matrices;
        if (!options.cache_dir.empty()) store_cached(cache_file(options.cache_dir, field), field, result.matrices);
    }
    return result;
}

double transition_coincidence(const PhaseSpace& space, std::span<const SymplecticMatrix> set,
                              std::uint32_t redundancy, PhasePoint alpha, PhasePoint alpha2, PhasePoint beta,
                              PhasePoint beta2) {
    const auto& f = space.field();
    std::size_t hits = 0;
    for (const auto& s : set) {
        // Σ_δ [β = Sα + δ][β' = Sα' + δ] is 1 exactly when β − Sα = β' − Sα'.
        const auto a = space.sub_index(space.index(beta), space.index(apply(f, s, alpha)));
        const auto b = space.sub_index(space.index(beta2), space.index(apply(f, s, alpha2)));
        if (a == b) ++hits;
    }
    const double d2 = static_cast<double>(space.num_points());
    return static_cast<double>(hits) / (static_cast<double>(redundancy) * d2);
}

}  // namespace erps
