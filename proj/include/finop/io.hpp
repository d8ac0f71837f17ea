#pragma once

#include <cstdint>
#include <fstream>
#include <sstream>
#include <string>

#include <json.hpp>

#include "finop/brownian.hpp"
#include "finop/commutant.hpp"
#include "finop/cpmap.hpp"
#include "finop/gns.hpp"
#include "finop/group.hpp"
#include "finop/haar.hpp"
#include "finop/spectral.hpp"

namespace finop {

using json = nlohmann::ordered_json;

// ---- matrices ---------------------------------------------------------------
// {"rows": n, "cols": m, "data": [[re, im], ...]} row-major; real entries may
// be written as plain numbers.

inline json matrix_to_json(const Matrix& m) {
    json j;
    j["rows"] = m.rows();
    j["cols"] = m.cols();
    json data = json::array();
    for (std::size_t i = 0; i < m.rows(); ++i)
        for (std::size_t k = 0; k < m.cols(); ++k) {
            const cplx z = m(i, k);
            if (std::imag(z) == 0.0)
                data.push_back(std::real(z));
            else
                data.push_back(json::array({std::real(z), std::imag(z)}));
        }
    j["data"] = std::move(data);
    return j;
}

inline Matrix matrix_from_json(const json& j) {
    if (!j.is_object() || !j.contains("rows") || !j.contains("cols") || !j.contains("data"))
        raise(errc::parse_error, "matrix JSON needs rows, cols, data");
    const auto rows = j["rows"].get<std::size_t>();
    const auto cols = j["cols"].get<std::size_t>();
    const json& data = j["data"];
    if (!data.is_array() || data.size() != rows * cols)
        raise(errc::parse_error, "matrix data length mismatch");
    Matrix m(rows, cols);
    for (std::size_t k = 0; k < rows * cols; ++k) {
        const json& e = data[k];
        cplx z;
        if (e.is_number())
            z = cplx(e.get<double>(), 0.0);
        else if (e.is_array() && e.size() == 2)
            z = cplx(e[0].get<double>(), e[1].get<double>());
        else
            raise(errc::parse_error, "matrix entry must be a number or [re, im]");
        m(k / cols, k % cols) = z;
    }
    return m;
}

inline std::vector<Matrix> matrix_list_from_json(const json& j) {
    if (!j.is_array()) raise(errc::parse_error, "expected an array of matrices");
    std::vector<Matrix> out;
    for (const json& e : j) out.push_back(matrix_from_json(e));
    return out;
}

inline json matrix_list_to_json(const std::vector<Matrix>& ms) {
    json arr = json::array();
    for (const Matrix& m : ms) arr.push_back(matrix_to_json(m));
    return arr;
}

// ---- module payloads --------------------------------------------------------

inline json spectral_to_json(const SpectralData& s) {
    json j;
    j["eigenvalues"] = s.eigenvalues;
    j["multiplicities"] = s.multiplicities;
    j["projections"] = matrix_list_to_json(s.projections);
    return j;
}

inline SpectralData spectral_from_json(const json& j) {
    SpectralData s;
    s.eigenvalues = j.at("eigenvalues").get<std::vector<double>>();
    s.multiplicities = j.at("multiplicities").get<std::vector<std::size_t>>();
    s.projections = matrix_list_from_json(j.at("projections"));
    return s;
}

inline json commutant_to_json(const CommutantReport& rep) {
    json j;
    j["dimension"] = rep.dimension;
    j["is_abelian"] = rep.is_abelian;
    if (rep.matrix_block_size)
        j["matrix_block_size"] = *rep.matrix_block_size;
    else
        j["matrix_block_size"] = nullptr;
    j["basis"] = matrix_list_to_json(rep.basis);
    return j;
}

inline json algebra_to_json(const StarAlgebra& a) {
    json j;
    j["ambient_dim"] = a.ambient_dim;
    j["basis"] = matrix_list_to_json(a.basis);
    return j;
}

inline StarAlgebra algebra_from_json(const json& j) {
    StarAlgebra a;
    a.ambient_dim = j.at("ambient_dim").get<std::size_t>();
    a.basis = matrix_list_from_json(j.at("basis"));
    return a;
}

inline json state_to_json(const State& s) {
    json j;
    j["density"] = matrix_to_json(s.density);
    return j;
}

inline json cpmap_to_json(const CPMap& m) {
    json j;
    j["in_dim"] = m.in_dim();
    j["out_dim"] = m.out_dim();
    if (m.has_kraus())
        j["kraus"] = matrix_list_to_json(m.kraus());
    else
        j["choi"] = matrix_to_json(m.choi());
    return j;
}

inline CPMap cpmap_from_json(const json& j) {
    const auto in = j.at("in_dim").get<std::size_t>();
    const auto out = j.at("out_dim").get<std::size_t>();
    if (j.contains("kraus")) return CPMap::from_kraus(in, out, matrix_list_from_json(j["kraus"]));
    if (j.contains("choi")) return CPMap::from_choi(in, out, matrix_from_json(j["choi"]));
    raise(errc::parse_error, "CP map JSON needs kraus or choi");
}

inline json group_to_json(const FiniteGroup& g) {
    json j;
    j["order"] = g.order;
    j["mult"] = g.mult;
    if (!g.labels.empty()) j["labels"] = g.labels;
    return j;
}

inline FiniteGroup group_from_json(const json& j) {
    auto table = j.at("mult").get<std::vector<std::vector<std::size_t>>>();
    std::vector<std::string> labels;
    if (j.contains("labels")) labels = j["labels"].get<std::vector<std::string>>();
    FiniteGroup g = FiniteGroup::from_table(std::move(table), std::move(labels));
    if (j.contains("order") && j["order"].get<std::size_t>() != g.order)
        raise(errc::parse_error, "declared order disagrees with the table");
    return g;
}

inline json file_to_json(const std::string& path) {
    std::ifstream in(path);
    if (!in) raise(errc::parse_error, "cannot open " + path);
    json j;
    try {
        in >> j;
    } catch (const std::exception& e) {
        raise(errc::parse_error, std::string("invalid JSON in ") + path + ": " + e.what());
    }
    return j;
}

// ---- digest -----------------------------------------------------------------

// FNV-1a, 64 bit: platform-independent fingerprint of command + inputs.
class Digest {
  public:
    Digest& feed(const std::string& text) {
        for (unsigned char c : text) {
            state_ ^= static_cast<std::uint64_t>(c);
            state_ *= 0x100000001b3ull;
        }
        return *this;
    }

    std::string hex() const {
        static const char* digits = "0123456789abcdef";
        std::string out(16, '0');
        std::uint64_t v = state_;
        for (int i = 15; i >= 0; --i) {
            out[static_cast<std::size_t>(i)] = digits[v & 0xf];
            v >>= 4;
        }
        return out;
    }

  private:
    std::uint64_t state_ = 0xcbf29ce484222325ull;
};

}  // namespace finop
