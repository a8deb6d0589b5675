#pragma once

#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "nccalc/cmat.hpp"
#include "nccalc/errors.hpp"
#include "nccalc/tuple.hpp"

namespace nccalc {

using json = nlohmann::ordered_json;

/// Interchange format: {"n": int, "re": [[..]], "im": [[..]]}, row-major.
inline json mat_to_json(const CMat& m) {
    json j;
    j["n"] = m.rows();
    if (m.rows() != m.cols()) j["cols"] = m.cols();
    auto re = json::array(), im = json::array();
    for (int i = 0; i < m.rows(); ++i) {
        auto rrow = json::array(), irow = json::array();
        for (int jj = 0; jj < m.cols(); ++jj) {
            rrow.push_back(m(i, jj).real());
            irow.push_back(m(i, jj).imag());
        }
        re.push_back(std::move(rrow));
        im.push_back(std::move(irow));
    }
    j["re"] = std::move(re);
    j["im"] = std::move(im);
    return j;
}

inline CMat mat_from_json(const json& j) {
    if (!j.is_object() || !j.contains("n") || !j.contains("re") || !j.contains("im"))
        raise(ErrKind::IoError, "matrix JSON needs fields n, re, im");
    const int rows = j.at("n").get<int>();
    const int cols = j.contains("cols") ? j.at("cols").get<int>() : rows;
    const auto& re = j.at("re");
    const auto& im = j.at("im");
    if (!re.is_array() || !im.is_array() || static_cast<int>(re.size()) != rows ||
        static_cast<int>(im.size()) != rows)
        raise(ErrKind::IoError, "matrix JSON row count mismatch");
    CMat m(rows, cols);
    for (int i = 0; i < rows; ++i) {
        const auto& rrow = re.at(i);
        const auto& irow = im.at(i);
        if (static_cast<int>(rrow.size()) != cols || static_cast<int>(irow.size()) != cols)
            raise(ErrKind::IoError, "matrix JSON column count mismatch");
        for (int jj = 0; jj < cols; ++jj)
            m(i, jj) = Complex(rrow.at(jj).get<double>(), irow.at(jj).get<double>());
    }
    if (!m.finite()) raise(ErrKind::IoError, "matrix JSON contains non-finite entries");
    return m;
}

inline json tuple_to_json(const MatTuple& t) {
    auto arr = json::array();
    for (const auto& m : t.mats) arr.push_back(mat_to_json(m));
    return arr;
}

inline MatTuple tuple_from_json(const json& j) {
    if (j.is_object()) return MatTuple({mat_from_json(j)});  // single matrix = 1-tuple
    if (!j.is_array() || j.empty()) raise(ErrKind::IoError, "tuple JSON must be a nonempty array");
    std::vector<CMat> mats;
    for (const auto& e : j) mats.push_back(mat_from_json(e));
    return MatTuple(std::move(mats));
}

/// HermPoint as {"A": [mats...], "B": [mats...]}.
inline json herm_point_to_json(const HermPoint& p) {
    json j;
    j["A"] = tuple_to_json(p.a());
    j["B"] = tuple_to_json(p.b());
    return j;
}

inline HermPoint herm_point_from_json(const json& j, double herm_tol = HermPoint::kDefaultHermTol) {
    if (!j.is_object() || !j.contains("A") || !j.contains("B"))
        raise(ErrKind::IoError, "HermPoint JSON needs fields A and B");
    return HermPoint(tuple_from_json(j.at("A")), tuple_from_json(j.at("B")), herm_tol);
}

inline json load_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) raise(ErrKind::IoError, "cannot open '" + path + "'");
    json j;
    try {
        in >> j;
    } catch (const std::exception& e) {
        raise(ErrKind::IoError, "malformed JSON in '" + path + "': " + e.what());
    }
    return j;
}

inline void save_json_file(const std::string& path, const json& j) {
    std::ofstream out(path);
    if (!out) raise(ErrKind::IoError, "cannot write '" + path + "'");
    out << j.dump(2) << "\n";
}

}  // namespace nccalc
