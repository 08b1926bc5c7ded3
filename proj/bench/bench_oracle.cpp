/*
 * Timing comparison of the parallel and serial generic-rank sampling paths.
 * The two must agree exactly; the parallel path distributes trials over
 * OpenMP threads when available.
 */

#include <presym/jordan.hpp>
#include <presym/oracle.hpp>

#include <chrono>
#include <cstdio>
#include <string>
#include <vector>

using namespace presym;

namespace {

JordanSpec real_spec(std::vector<std::pair<std::size_t, int>> blocks) {
    JordanSpec s;
    for (auto [n, e] : blocks) s.real_blocks.push_back({n, Rational(e)});
    return canonical_order(s);
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
        .count();
}

} // namespace

int main(int argc, char** argv) {
    const std::size_t trials = argc > 1 ? std::stoul(argv[1]) : 200;
    const std::vector<JordanSpec> corpus{
        real_spec({{3, 1}, {2, -1}}),
        real_spec({{3, 0}, {2, 0}, {2, 0}}),
        real_spec({{4, 0}, {4, 0}, {3, 0}}),
        real_spec({{3, 0}, {3, 0}, {3, 0}, {2, 0}, {2, 0}}),
    };
    std::printf("%-28s %8s %10s %10s %8s\n", "spec", "trials", "serial[s]",
                "parallel[s]", "speedup");
    bool ok = true;
    for (const JordanSpec& spec : corpus) {
        auto t0 = std::chrono::steady_clock::now();
        const std::size_t rs = generic_rank_serial(spec, trials, 0);
        const double ts = seconds_since(t0);
        t0 = std::chrono::steady_clock::now();
        const std::size_t rp = generic_rank(spec, trials, 0);
        const double tp = seconds_since(t0);
        if (rs != rp) ok = false;
        std::printf("%-28s %8zu %10.3f %10.3f %8.2f%s\n",
                    spec_label(spec).c_str(), trials, ts, tp,
                    tp > 0 ? ts / tp : 0.0, rs == rp ? "" : "  RANK MISMATCH");
    }
    return ok ? 0 : 1;
}
