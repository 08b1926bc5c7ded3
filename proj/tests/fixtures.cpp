#include "fixtures.hpp"

#include <stdexcept>

namespace fixtures {

std::vector<JordanSpec> small_real_corpus() {
    // the 9 block types (size, eig) with size <= 3, eig in {-1,0,1}
    std::vector<std::pair<std::size_t, int>> types;
    for (std::size_t n = 1; n <= 3; ++n)
        for (int e : {-1, 0, 1}) types.emplace_back(n, e);

    std::vector<JordanSpec> corpus;
    // multisets of types with total size <= 6 (non-decreasing type index)
    std::vector<std::pair<std::size_t, int>> current;
    auto rec = [&](auto&& self, std::size_t first, std::size_t total) -> void {
        if (!current.empty()) {
            JordanSpec s;
            for (const auto& [n, e] : current)
                s.real_blocks.push_back({n, Rational(e)});
            try {
                corpus.push_back(presym::canonical_order(s));
            } catch (const std::invalid_argument&) {
                // abelian specs are rejected by design
            }
        }
        for (std::size_t t = first; t < types.size(); ++t) {
            if (total + types[t].first > 6) continue;
            current.push_back(types[t]);
            self(self, t, total + types[t].first);
            current.pop_back();
        }
    };
    rec(rec, 0, 0);
    return corpus;
}

} // namespace fixtures
