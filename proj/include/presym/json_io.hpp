#ifndef PRESYM_JSON_IO_HPP
#define PRESYM_JSON_IO_HPP

#include <presym/matrix.hpp>

#include <nlohmann/json.hpp>

#include <string>

namespace presym {

/*
 * Shared matrix JSON form:
 *   {"rows": n, "cols": m, "entries": [[i, j, "p/q"], ...]}
 * zero entries omitted, indices 0-based, rationals as strings "p/q" or "p".
 */
nlohmann::json matrix_to_json(const RationalMatrix& m);
RationalMatrix matrix_from_json(const nlohmann::json& j);

// Float matrices serialize with 17 significant digits (lossless binary64).
nlohmann::json matrix_to_json(const FloatMatrix& m);

// Form file = matrix JSON plus {"dim": D, "rank": R, "spec_hash": hex}.
nlohmann::json form_to_json(const RationalMatrix& m, std::size_t rank,
                            const std::string& spec_hash);

// Stable hex fingerprint of a canonical spec document (FNV-1a over the
// compact serialization); used to tie form files to their spec.
std::string spec_hash_hex(const nlohmann::json& canonical_spec_doc);

std::string read_text_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& content);

} // namespace presym

#endif // PRESYM_JSON_IO_HPP
