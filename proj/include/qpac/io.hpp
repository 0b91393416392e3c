#pragma once

#include <fstream>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "qpac/channels.hpp"

namespace qpac {

using json = nlohmann::json;

// {"d1": int, "d2": int, "concepts": [[matrix, ...], ...]}, matrix a d2 x d2
// array of [re, im] pairs. nlohmann emits shortest round-trip doubles, which
// meets the full-precision requirement.
inline json class_to_json(const ConceptClass& c) {
    json concepts = json::array();
    for (std::size_t i = 0; i < c.size(); ++i) {
        json outs = json::array();
        for (const auto& out : c[i].outputs()) {
            json mat = json::array();
            for (Eigen::Index r = 0; r < out.dim(); ++r) {
                json row = json::array();
                for (Eigen::Index col = 0; col < out.dim(); ++col)
                    row.push_back({out.mat()(r, col).real(), out.mat()(r, col).imag()});
                mat.push_back(std::move(row));
            }
            outs.push_back(std::move(mat));
        }
        concepts.push_back(std::move(outs));
    }
    return json{{"d1", c.in_dim()}, {"d2", static_cast<int>(c.out_dim())},
                {"concepts", std::move(concepts)}};
}

inline ConceptClass class_from_json(const json& j) {
    if (!j.is_object() || !j.contains("d1") || !j.contains("d2") || !j.contains("concepts"))
        throw ParseError("concept-class file missing d1/d2/concepts");
    int d1 = j.at("d1").get<int>();
    int d2 = j.at("d2").get<int>();
    const json& concepts = j.at("concepts");
    if (!concepts.is_array() || concepts.empty())
        throw ParseError("concepts must be a non-empty array");
    std::vector<ChannelConcept> out;
    for (std::size_t i = 0; i < concepts.size(); ++i) {
        const json& outs = concepts[i];
        if (!outs.is_array() || outs.size() != static_cast<std::size_t>(d1))
            throw ParseError("concept " + std::to_string(i) + " needs d1 output matrices");
        std::vector<DensityMatrix> mats;
        for (const json& mat : outs) {
            if (!mat.is_array() || mat.size() != static_cast<std::size_t>(d2))
                throw ParseError("concept " + std::to_string(i) + " has a non-d2 matrix");
            ComplexMatrix m(d2, d2);
            for (int r = 0; r < d2; ++r) {
                const json& row = mat[r];
                if (!row.is_array() || row.size() != static_cast<std::size_t>(d2))
                    throw ParseError("concept " + std::to_string(i) + " has a ragged matrix");
                for (int c = 0; c < d2; ++c) {
                    const json& cell = row[c];
                    if (!cell.is_array() || cell.size() != 2)
                        throw ParseError("matrix entries must be [re, im] pairs");
                    m(r, c) = std::complex<double>(cell[0].get<double>(), cell[1].get<double>());
                }
            }
            try {
                mats.push_back(DensityMatrix(std::move(m)));
            } catch (const Error& e) {
                throw InvariantViolation("concept " + std::to_string(i) +
                                         " fails density-matrix validation: " + e.what());
            }
        }
        out.push_back(ChannelConcept(d1, std::move(mats)));
    }
    return ConceptClass(std::move(out));
}

inline void save_class(const ConceptClass& c, const std::string& path) {
    std::ofstream f(path);
    if (!f) throw Error("cannot open " + path + " for writing");
    f << class_to_json(c).dump(2) << "\n";
}

inline ConceptClass load_class(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw ParseError("cannot open " + path);
    json j;
    try {
        f >> j;
    } catch (const json::exception& e) {
        throw ParseError(std::string("invalid JSON: ") + e.what());
    }
    return class_from_json(j);
}

}  // namespace qpac
