// SPDX-License-Identifier: Apache-2.0
//
// grassq: quantization on real and complex Grassmann manifolds
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
// ------------------------------------------------------------------------

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "grassq/codebook.hpp"

namespace grassq {

namespace {

constexpr const char* kMagic = "GRASSQ-CB v1";

void write_le_double(std::ostream& out, double v) {
    std::uint64_t bits = 0;
    std::memcpy(&bits, &v, sizeof(bits));
    char buf[8];
    for (int i = 0; i < 8; ++i) buf[i] = static_cast<char>((bits >> (8 * i)) & 0xFF);
    out.write(buf, 8);
}

bool read_le_double(std::istream& in, double& v) {
    char buf[8];
    in.read(buf, 8);
    if (in.gcount() != 8) return false;
    std::uint64_t bits = 0;
    for (int i = 0; i < 8; ++i)
        bits |= static_cast<std::uint64_t>(static_cast<unsigned char>(buf[i])) << (8 * i);
    std::memcpy(&v, &bits, sizeof(v));
    return true;
}

std::string format_double(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

// "key=value" with the expected key, or ParseError.
std::string expect_token(const std::string& token, const std::string& key, int line) {
    const std::string prefix = key + "=";
    if (token.rfind(prefix, 0) != 0) {
        throw ParseError("codebook parse error at line " + std::to_string(line) +
                         ": expected '" + key + "=', got '" + token + "'");
    }
    return token.substr(prefix.size());
}

std::int64_t parse_int(const std::string& s, const std::string& key, int line) {
    try {
        std::size_t pos = 0;
        const std::int64_t v = std::stoll(s, &pos);
        if (pos != s.size()) throw std::invalid_argument(s);
        return v;
    } catch (const std::exception&) {
        throw ParseError("codebook parse error at line " + std::to_string(line) +
                         ": bad integer for '" + key + "': '" + s + "'");
    }
}

}  // namespace

void save_codebook(const Codebook& codebook, const std::filesystem::path& path) {
    const std::string& designer = codebook.meta().designer;
    if (designer.empty() ||
        designer.find_first_of(" \t\n=") != std::string::npos) {
        throw ArgumentError("designer must be a nonempty token without spaces or '='");
    }
    std::ofstream out(path, std::ios::binary);
    if (!out) throw ArgumentError("cannot open '" + path.string() + "' for writing");

    out << kMagic << "\n";
    out << "field=" << field_code(codebook.field()) << " n=" << codebook.n()
        << " p=" << codebook.p() << " K=" << codebook.size() << " designer=" << designer
        << " seed=" << codebook.meta().seed
        << " mindist=" << format_double(codebook.meta().min_distance) << "\n";

    const bool complex_payload = codebook.field() == Field::Complex;
    for (std::int64_t k = 0; k < codebook.size(); ++k) {
        const Eigen::MatrixXcd& basis = codebook.entry(k).basis();
        for (int r = 0; r < codebook.n(); ++r) {
            for (int c = 0; c < codebook.p(); ++c) {
                write_le_double(out, basis(r, c).real());
                if (complex_payload) write_le_double(out, basis(r, c).imag());
            }
        }
    }
    if (!out) throw ArgumentError("write to '" + path.string() + "' failed");
}

Codebook load_codebook(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ParseError("cannot open '" + path.string() + "'");

    std::string line1;
    if (!std::getline(in, line1) || line1 != kMagic) {
        throw ParseError("codebook parse error at line 1: expected '" + std::string(kMagic) +
                         "'");
    }
    std::string line2;
    if (!std::getline(in, line2)) {
        throw ParseError("codebook parse error at line 2: missing header");
    }

    std::istringstream header(line2);
    std::vector<std::string> tokens;
    for (std::string tok; header >> tok;) tokens.push_back(tok);
    if (tokens.size() != 7) {
        throw ParseError("codebook parse error at line 2: expected 7 fields, got " +
                         std::to_string(tokens.size()));
    }
    const std::string field_s = expect_token(tokens[0], "field", 2);
    if (field_s.size() != 1 || (field_s[0] != 'R' && field_s[0] != 'C')) {
        throw ParseError("codebook parse error at line 2: field must be R or C");
    }
    const Field field = field_from_code(field_s[0]);
    const std::int64_t n = parse_int(expect_token(tokens[1], "n", 2), "n", 2);
    const std::int64_t p = parse_int(expect_token(tokens[2], "p", 2), "p", 2);
    const std::int64_t K = parse_int(expect_token(tokens[3], "K", 2), "K", 2);
    const std::string designer = expect_token(tokens[4], "designer", 2);
    const std::string seed_s = expect_token(tokens[5], "seed", 2);
    const std::string mindist_s = expect_token(tokens[6], "mindist", 2);
    if (n < 1 || p < 1 || p > n) {
        throw ParseError("codebook parse error at line 2: invalid dimensions n=" +
                         std::to_string(n) + " p=" + std::to_string(p));
    }
    if (K < 1) throw ParseError("codebook parse error at line 2: invalid K");

    std::uint64_t seed = 0;
    try {
        std::size_t pos = 0;
        seed = std::stoull(seed_s, &pos);
        if (pos != seed_s.size()) throw std::invalid_argument(seed_s);
    } catch (const std::exception&) {
        throw ParseError("codebook parse error at line 2: bad seed '" + seed_s + "'");
    }
    double mindist = 0.0;
    try {
        std::size_t pos = 0;
        mindist = std::stod(mindist_s, &pos);
        if (pos != mindist_s.size()) throw std::invalid_argument(mindist_s);
    } catch (const std::exception&) {
        throw ParseError("codebook parse error at line 2: bad mindist '" + mindist_s + "'");
    }

    const bool complex_payload = field == Field::Complex;
    const std::int64_t doubles_per_entry = n * p * (complex_payload ? 2 : 1);
    const std::int64_t payload_start = in.tellg();

    std::vector<Subspace> entries;
    entries.reserve(static_cast<std::size_t>(K));
    std::int64_t doubles_read = 0;
    for (std::int64_t k = 0; k < K; ++k) {
        Eigen::MatrixXcd basis(n, p);
        for (std::int64_t r = 0; r < n; ++r) {
            for (std::int64_t c = 0; c < p; ++c) {
                double re = 0.0;
                double im = 0.0;
                if (!read_le_double(in, re) ||
                    (complex_payload && !read_le_double(in, im))) {
                    throw ParseError(
                        "codebook parse error: truncated payload at byte offset " +
                        std::to_string(payload_start + 8 * doubles_read) + " (expected " +
                        std::to_string(K * doubles_per_entry) + " doubles)");
                }
                doubles_read += complex_payload ? 2 : 1;
                basis(r, c) = {re, im};
            }
        }
        const double defect = orthonormality_defect(basis);
        if (!(defect <= kOrthonormalTol)) {
            throw ValidationError("codebook entry " + std::to_string(k) +
                                  " is not orthonormal (defect " + std::to_string(defect) +
                                  ")");
        }
        entries.push_back(Subspace::from_orthonormal(std::move(basis), field));
    }
    char extra = 0;
    if (in.read(&extra, 1), in.gcount() != 0) {
        throw ParseError("codebook parse error: trailing data after payload");
    }

    CodebookMeta meta;
    meta.designer = designer;
    meta.seed = seed;
    meta.iterations = 0;
    Codebook cb = Codebook::from_entries(std::move(entries), std::move(meta));
    if (std::abs(cb.meta().min_distance - mindist) > 1e-9) {
        throw ValidationError("stored mindist " + format_double(mindist) +
                              " does not match recomputed " +
                              format_double(cb.meta().min_distance));
    }
    return cb;
}

}  // namespace grassq
