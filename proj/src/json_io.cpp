#include <presym/json_io.hpp>

#include <cinttypes>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace presym {

nlohmann::json matrix_to_json(const RationalMatrix& m) {
    nlohmann::json entries = nlohmann::json::array();
    for (std::size_t i = 0; i < m.rows(); ++i)
        for (std::size_t j = 0; j < m.cols(); ++j)
            if (m(i, j) != Rational(0))
                entries.push_back({i, j, format_rational(m(i, j))});
    return {{"rows", m.rows()}, {"cols", m.cols()}, {"entries", entries}};
}

RationalMatrix matrix_from_json(const nlohmann::json& j) {
    const auto rows = j.at("rows").get<std::size_t>();
    const auto cols = j.at("cols").get<std::size_t>();
    RationalMatrix m(rows, cols);
    for (const auto& e : j.at("entries")) {
        if (!e.is_array() || e.size() != 3)
            throw std::invalid_argument("matrix JSON: entry must be [i, j, value]");
        const auto i = e.at(0).get<std::size_t>();
        const auto c = e.at(1).get<std::size_t>();
        if (i >= rows || c >= cols)
            throw std::invalid_argument("matrix JSON: entry index out of range");
        m(i, c) = parse_rational(e.at(2).get<std::string>());
    }
    return m;
}

nlohmann::json matrix_to_json(const FloatMatrix& m) {
    nlohmann::json entries = nlohmann::json::array();
    char buf[64];
    for (std::size_t i = 0; i < m.rows(); ++i)
        for (std::size_t j = 0; j < m.cols(); ++j)
            if (m(i, j) != 0.0) {
                std::snprintf(buf, sizeof buf, "%.17g", m(i, j));
                entries.push_back({i, j, std::string(buf)});
            }
    return {{"rows", m.rows()}, {"cols", m.cols()}, {"entries", entries}};
}

nlohmann::json form_to_json(const RationalMatrix& m, std::size_t rank,
                            const std::string& spec_hash) {
    nlohmann::json j = matrix_to_json(m);
    j["dim"] = m.rows();
    j["rank"] = rank;
    j["spec_hash"] = spec_hash;
    return j;
}

std::string spec_hash_hex(const nlohmann::json& canonical_spec_doc) {
    const std::string s = canonical_spec_doc.dump();
    std::uint64_t h = 1469598103934665603ULL; // FNV-1a 64-bit
    for (unsigned char c : s) {
        h ^= c;
        h *= 1099511628211ULL;
    }
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016" PRIx64, h);
    return std::string(buf);
}

std::string read_text_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open file: " + path);
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

void write_text_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write file: " + path);
    out << content;
}

} // namespace presym
