#include "format.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iomanip>
#include <iterator>
#include <numeric>
#include <sstream>

#include <openssl/evp.h>

#include "erps/error.hpp"

namespace erps::cli {

std::string decimal(double x) {
    if (std::abs(x) < 5e-15) x = 0.0;
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.12g", x);
    return buf;
}

double rounded(double x) { return std::stod(decimal(x)); }

std::optional<std::string> exact_sqrt3(double x) {
    constexpr int kMaxDenominator = 144;
    constexpr double kTolerance = 1e-11;
    const double root3 = std::sqrt(3.0);
    for (int c = 1; c <= kMaxDenominator; ++c) {
        const double target = x * c;
        for (int mag = 0; mag <= 2 * c; ++mag) {
            for (int b : {mag, -mag}) {
                const double a = std::round(target - b * root3);
                if (std::abs(target - a - b * root3) > kTolerance * c * std::max(1.0, std::abs(x))) continue;
                const auto ai = static_cast<long>(a);
                const long g = std::gcd(std::gcd(std::labs(ai), static_cast<long>(std::abs(b))), static_cast<long>(c));
                const long an = ai / g;
                const long bn = b / g;
                const long cn = c / g;
                std::ostringstream out;
                if (bn == 0) {
                    out << an;
                    if (cn != 1) out << '/' << cn;
                    return out.str();
                }
                const std::string surd = (std::labs(bn) == 1 ? std::string() : std::to_string(std::labs(bn))) + "√3";
                if (an == 0) {
                    out << (bn < 0 ? "-" : "") << surd;
                    if (cn != 1) out << '/' << cn;
                    return out.str();
                }
                if (cn == 1) {
                    out << an << (bn < 0 ? "-" : "+") << surd;
                } else {
                    out << '(' << an << (bn < 0 ? "-" : "+") << surd << ")/" << cn;
                }
                return out.str();
            }
        }
    }
    return std::nullopt;
}

json grid_to_json(const Grid& grid, double scale) {
    json values = json::array();
    json exact = json::array();
    for (const auto& row : grid) {
        json vrow = json::array();
        json erow = json::array();
        for (double v : row) {
            vrow.push_back(rounded(v * scale));
            const auto e = exact_sqrt3(v);
            erow.push_back(e ? json(*e) : json(nullptr));
        }
        values.push_back(std::move(vrow));
        exact.push_back(std::move(erow));
    }
    return {{"scale", scale}, {"values", std::move(values)}, {"exact", std::move(exact)}};
}

std::string grid_to_table(const Grid& grid, double scale) {
    std::vector<std::vector<std::string>> cells;
    std::size_t width = 1;
    for (const auto& row : grid) {
        auto& out = cells.emplace_back();
        for (double v : row) {
            out.push_back(decimal(v * scale));
            const double scaled = v * scale;
            if (std::abs(scaled - std::round(scaled)) > 1e-9) {
                if (auto e = exact_sqrt3(v)) out.back() += " [" + *e + "]";
            }
            width = std::max(width, out.back().size());
        }
    }
    std::ostringstream os;
    if (scale != 1.0) os << "  x 1/" << decimal(scale) << '\n';
    for (const auto& row : cells) {
        os << ' ';
        for (const auto& cell : row) os << ' ' << std::setw(static_cast<int>(width)) << cell;
        os << '\n';
    }
    return os.str();
}

std::string sha256_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error("IoError", "cannot read '" + path + "'");
    const std::string bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    unsigned char digest[EVP_MAX_MD_SIZE];
    unsigned int length = 0;
    EVP_Digest(bytes.data(), bytes.size(), digest, &length, EVP_sha256(), nullptr);
    std::ostringstream hex;
    for (unsigned int k = 0; k < length; ++k) hex << std::hex << std::setw(2) << std::setfill('0') << int{digest[k]};
    return hex.str();
}

}  // namespace erps::cli
