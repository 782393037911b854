#pragma once

#include <fstream>
#include <string>

#include <json.hpp>

#include "lazyens/errors.hpp"
#include "lazyens/matrix.hpp"

namespace lazyens {

/// Matrix wire schema: {"n": int, "re": [[..]], "im": [[..]]}, row-major.
/// "im" may be omitted for a real matrix.
inline nlohmann::json matrix_to_json(const ComplexMatrix& m) {
    const std::size_t n = m.dim();
    nlohmann::json re = nlohmann::json::array();
    nlohmann::json im = nlohmann::json::array();
    for (std::size_t i = 0; i < n; ++i) {
        nlohmann::json re_row = nlohmann::json::array();
        nlohmann::json im_row = nlohmann::json::array();
        for (std::size_t j = 0; j < n; ++j) {
            re_row.push_back(m(i, j).real());
            im_row.push_back(m(i, j).imag());
        }
        re.push_back(std::move(re_row));
        im.push_back(std::move(im_row));
    }
    return nlohmann::json{{"n", n}, {"re", std::move(re)}, {"im", std::move(im)}};
}

namespace detail {

inline void parse_part(const nlohmann::json& j, const std::string& field, std::size_t n,
                       bool imaginary, ComplexMatrix& out) {
    const nlohmann::json& part = j.at(field);
    if (!part.is_array() || part.size() != n)
        throw Error(ErrorCode::bad_input,
                    "field '" + field + "' must be an array of " + std::to_string(n) + " rows");
    for (std::size_t i = 0; i < n; ++i) {
        const nlohmann::json& row = part[i];
        if (!row.is_array() || row.size() != n)
            throw Error(ErrorCode::bad_input, "field '" + field + "' row " + std::to_string(i) +
                                                  " must hold " + std::to_string(n) + " numbers");
        for (std::size_t jj = 0; jj < n; ++jj) {
            if (!row[jj].is_number())
                throw Error(ErrorCode::bad_input, "field '" + field + "' entry (" +
                                                      std::to_string(i) + "," +
                                                      std::to_string(jj) + ") is not a number");
            const double v = row[jj].get<double>();
            if (imaginary)
                out(i, jj) = Complex(out(i, jj).real(), v);
            else
                out(i, jj) = Complex(v, out(i, jj).imag());
        }
    }
}

}  // namespace detail

inline ComplexMatrix matrix_from_json(const nlohmann::json& j) {
    if (!j.is_object()) throw Error(ErrorCode::bad_input, "matrix JSON must be an object");
    if (!j.contains("n")) throw Error(ErrorCode::bad_input, "missing field 'n'");
    if (!j["n"].is_number_integer() || j["n"].get<long long>() < 1)
        throw Error(ErrorCode::bad_input, "field 'n' must be a positive integer");
    const auto n = j["n"].get<std::size_t>();
    if (n > 4096) throw Error(ErrorCode::bad_input, "field 'n' unreasonably large");
    if (!j.contains("re")) throw Error(ErrorCode::bad_input, "missing field 're'");

    ComplexMatrix m(n);
    detail::parse_part(j, "re", n, /*imaginary=*/false, m);
    if (j.contains("im")) detail::parse_part(j, "im", n, /*imaginary=*/true, m);
    return m;
}

inline ComplexMatrix load_matrix_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error(ErrorCode::bad_input, "cannot open '" + path + "'");
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception& e) {
        throw Error(ErrorCode::bad_input, "'" + path + "' is not valid JSON: " + e.what());
    }
    return matrix_from_json(j);
}

}  // namespace lazyens
