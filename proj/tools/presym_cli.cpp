#include <presym/constructor.hpp>
#include <presym/jordan.hpp>
#include <presym/json_io.hpp>
#include <presym/oracle.hpp>
#include <presym/rank_existence.hpp>
#include <presym/reducer.hpp>

#include <CLI11.hpp>

#include <cstdint>
#include <iostream>
#include <sstream>
#include <string>

namespace {

using namespace presym;
using nlohmann::json;

/*
 * Exit code contract: 0 success, 2 mathematical rejection (nonexistent rank,
 * failed closedness, off-grid snap, guard limits), 1 I/O and parse errors.
 */
constexpr int kOk = 0;
constexpr int kIo = 1;
constexpr int kRejected = 2;

struct LoadedSpec {
    JordanSpec spec;
    json doc;         // canonical serialization
    std::string hash; // stable fingerprint of the canonical doc
};

json spec_to_json(const JordanSpec& spec) {
    json doc = json::object();
    if (!spec.real_blocks.empty()) {
        doc["real_blocks"] = json::array();
        for (const auto& b : spec.real_blocks)
            doc["real_blocks"].push_back(
                {{"size", b.size}, {"eig", format_rational(b.eig)}});
    }
    if (!spec.complex_blocks.empty()) {
        doc["complex_blocks"] = json::array();
        for (const auto& b : spec.complex_blocks)
            doc["complex_blocks"].push_back({{"half_size", b.half_size},
                                             {"re", format_rational(b.re)},
                                             {"im", format_rational(b.im)}});
    }
    return doc;
}

LoadedSpec load_spec(const std::string& path) {
    LoadedSpec out;
    std::string text;
    try {
        text = read_text_file(path);
    } catch (const std::exception& e) {
        throw std::runtime_error(e.what());
    }
    // parse errors are I/O-level failures, not mathematical rejections
    try {
        out.spec = parse_spec(text);
    } catch (const std::invalid_argument& e) {
        throw std::runtime_error(std::string("spec file ") + path + ": " +
                                 e.what());
    }
    out.doc = spec_to_json(out.spec);
    out.hash = spec_hash_hex(out.doc);
    return out;
}

RationalMatrix load_form(const std::string& path) {
    json doc;
    try {
        doc = json::parse(read_text_file(path));
    } catch (const std::exception& e) {
        throw std::runtime_error(std::string("form file ") + path + ": " +
                                 e.what());
    }
    return matrix_from_json(doc);
}

void emit(const json& doc, const std::string& format,
          const std::string& pretty_text) {
    if (format == "pretty" && !pretty_text.empty())
        std::cout << pretty_text;
    else
        std::cout << doc.dump(2) << "\n";
}

json pairs_to_json(const std::vector<std::pair<std::size_t, std::size_t>>& ps) {
    json a = json::array();
    for (const auto& [i, j] : ps) a.push_back({i, j});
    return a;
}

int run_analyze(const LoadedSpec& ls, bool with_oracle, std::size_t trials,
                std::uint64_t seed, const std::string& format) {
    const JordanSpec& spec = ls.spec;
    const std::size_t n = spec.n_total(), d = spec.dim();
    const std::size_t rr = max_rank_real(spec), rc = max_rank_complex(spec);
    const SymplecticVerdict sv = symplectic_admissible(spec);

    json doc;
    doc["spec"] = ls.doc;
    doc["spec_hash"] = ls.hash;
    doc["label"] = spec_label(spec);
    doc["N"] = n;
    doc["D"] = d;
    doc["max_rank_real"] = rr;
    doc["max_rank_complex"] = rc;
    doc["existence"] = json::array();
    std::set<std::size_t> oracle_set;
    if (with_oracle) {
        // witness of rank R or R-2 on the Lyapunov side
        oracle_set = achievable_ranks(spec);
    }
    for (std::size_t r = 0; r <= d; r += 2) {
        json row;
        row["rank"] = r;
        row["formula"] = exists_presymplectic(spec, r);
        if (with_oracle)
            row["oracle"] = (r == 0) || oracle_set.count(r) ||
                            (r >= 2 && oracle_set.count(r - 2));
        doc["existence"].push_back(std::move(row));
    }
    doc["symplectic"] = {{"admissible", sv.admissible},
                         {"clause", sv.describe()}};
    doc["trials"] = trials;
    doc["seed"] = seed;

    std::ostringstream os;
    os << "spec " << spec_label(spec) << "  N=" << n << " D=" << d << "\n"
       << "max rank: real " << rr << ", complex " << rc << "\n"
       << "rank  formula" << (with_oracle ? "  oracle" : "") << "\n";
    for (const auto& row : doc["existence"]) {
        os << "  " << row["rank"].get<std::size_t>() << "     "
           << (row["formula"].get<bool>() ? "yes" : "no");
        if (with_oracle)
            os << "      " << (row["oracle"].get<bool>() ? "yes" : "no");
        os << "\n";
    }
    os << "symplectic: " << (sv.admissible ? "yes" : "no") << " ("
       << sv.describe() << ")\n";
    emit(doc, format, os.str());
    return kOk;
}

int run_construct(const LoadedSpec& ls, long long rank_flag, std::uint64_t seed,
                  const std::string& format) {
    const JordanSpec& spec = ls.spec;
    const std::size_t d = spec.dim();
    if (rank_flag < 0) throw std::domain_error("rank must be nonnegative");
    const std::size_t r = static_cast<std::size_t>(rank_flag);
    if (r > d) throw std::domain_error("rank exceeds dimension");
    if (r % 2 != 0) throw std::domain_error("rank must be even");

    const StructuredSolution top = construct_max(spec);
    LiftedForm form{RationalMatrix(0, 0), 0, true, 0};
    bool built = false;
    if (r <= top.rank) {
        try {
            const StructuredSolution sol = lower_rank(top, r, spec);
            form = lift(sol, r, spec, seed);
            built = true;
        } catch (const std::domain_error&) {
            // no structured witness of rank r itself; fall through to r-2
        }
    }
    if (!built && r >= 2 && r - 2 <= top.rank) {
        const StructuredSolution sol = lower_rank(top, r - 2, spec);
        form = lift(sol, r, spec, seed);
        built = true;
    }
    if (!built)
        throw std::domain_error("no closed 2-form of the requested rank");

    json doc = form_to_json(form.matrix, form.rank, ls.hash);
    doc["v_in_image"] = form.v_in_image;
    doc["seed"] = seed;
    emit(doc, format, "");
    return kOk;
}

int run_check(const LoadedSpec& ls, const std::string& form_path,
              const std::string& format) {
    const RationalMatrix form = load_form(form_path);
    const JordanSpec& spec = ls.spec;
    json doc;
    doc["dim_matches"] = (form.rows() == spec.dim() && form.cols() == spec.dim());
    bool ok = doc["dim_matches"].get<bool>();
    if (ok) {
        const bool skew = skew_check(form);
        const ClosedCheck cc = check_closed(form, spec);
        const std::size_t rk = rank(form);
        doc["skew"] = skew;
        doc["closed"] = cc.closed;
        doc["rank"] = rk;
        ok = skew && cc.closed;
    }
    doc["ok"] = ok;
    std::ostringstream os;
    os << (ok ? "check passed" : "check FAILED") << "\n" << doc.dump(2) << "\n";
    emit(doc, format, os.str());
    return ok ? kOk : kRejected;
}

int run_reduce(const LoadedSpec& ls, const std::string& form_path, double tol,
               bool with_trace, const std::string& format) {
    const RationalMatrix form = load_form(form_path);
    const ModuliResult mr = moduli_class(form, ls.spec, tol);
    json doc;
    doc["class"] = {{"rank", mr.cls.rank},
                    {"pairs", pairs_to_json(mr.cls.pairs)},
                    {"key", mr.cls.key()}};
    doc["permutation"] = mr.perm_d.images;
    doc["rank"] = mr.reduction.rank;
    doc["residual"] = mr.reduction.residual;
    doc["canonical_minor"] = matrix_to_json(mr.reduction.a_skew);
    if (with_trace) doc["trace"] = json::parse(trace_to_json(mr.reduction));
    std::ostringstream os;
    os << "class " << mr.cls.key() << " residual " << mr.reduction.residual
       << " steps " << mr.reduction.steps.size() << "\n";
    emit(doc, format, os.str());
    return kOk;
}

int run_moduli(const LoadedSpec& ls, const std::string& form_path, double tol,
               const std::string& format) {
    const RationalMatrix form = load_form(form_path);
    const ModuliResult mr = moduli_class(form, ls.spec, tol);
    json doc;
    doc["rank"] = mr.cls.rank;
    doc["pairs"] = pairs_to_json(mr.cls.pairs);
    doc["key"] = mr.cls.key();
    emit(doc, format, doc["key"].get<std::string>() + "\n");
    return kOk;
}

int run_oracle(const LoadedSpec& ls, std::size_t trials, std::uint64_t seed,
               const std::string& format) {
    const auto reports = errata_report({ls.spec}, trials, seed);
    const OracleReport& rep = reports.at(0);
    json doc;
    doc["spec"] = rep.spec_label;
    doc["basis_dim"] = rep.basis_dim;
    doc["generic_rank"] = rep.generic_rank;
    doc["formula_rank"] = rep.formula_rank;
    doc["agreement"] = rep.agreement;
    doc["achievable"] = rep.achievable;
    doc["closure_ok"] = rep.closure_ok;
    doc["trials"] = rep.trials;
    doc["seed"] = rep.seed;
    if (rep.witness) doc["witness"] = matrix_to_json(*rep.witness);
    std::ostringstream os;
    os << rep.spec_label << ": formula " << rep.formula_rank << ", oracle "
       << rep.generic_rank << (rep.agreement ? " (agree)" : " (DISAGREE)")
       << "\n";
    emit(doc, format, os.str());
    return kOk;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"structured skew-form toolkit: rank analysis, construction, "
                 "validation and canonical reduction of closed 2-forms "
                 "attached to a real Jordan form"};
    app.require_subcommand(1);

    std::string spec_path, form_path, format = "json";
    long long rank_flag = -1;
    std::uint64_t seed = 0;
    std::size_t trials = 25;
    double tol = 1e-9;
    bool with_oracle = false, with_trace = false;

    auto add_common = [&](CLI::App* sub, bool needs_form) {
        sub->add_option("spec", spec_path, "spec JSON file")->required();
        if (needs_form)
            sub->add_option("form", form_path, "form JSON file")->required();
        sub->add_option("--format", format, "json or pretty");
        sub->add_option("--seed", seed, "RNG seed (default 0)");
    };

    auto* analyze = app.add_subcommand("analyze", "rank existence report");
    add_common(analyze, false);
    analyze->add_flag("--oracle", with_oracle, "add oracle existence column");
    analyze->add_option("--trials", trials, "oracle trials (default 25)");

    auto* construct = app.add_subcommand("construct", "emit a closed 2-form");
    add_common(construct, false);
    construct->add_option("--rank", rank_flag, "target rank")->required();

    auto* check = app.add_subcommand("check", "validate a form file");
    add_common(check, true);

    auto* reduce = app.add_subcommand("reduce", "canonical reduction + trace");
    add_common(reduce, true);
    reduce->add_option("--tol", tol, "snap tolerance (default 1e-9)");
    reduce->add_flag("--trace", with_trace, "include the congruence trace");

    auto* moduli = app.add_subcommand("moduli", "normalized permutation class");
    add_common(moduli, true);
    moduli->add_option("--tol", tol, "snap tolerance (default 1e-9)");

    auto* oracle = app.add_subcommand("oracle", "dense-backend report");
    add_common(oracle, false);
    oracle->add_option("--trials", trials, "sampling trials (default 25)");

    CLI11_PARSE(app, argc, argv);

    try {
        const LoadedSpec ls = load_spec(spec_path);
        if (app.got_subcommand(analyze))
            return run_analyze(ls, with_oracle, trials, seed, format);
        if (app.got_subcommand(construct))
            return run_construct(ls, rank_flag, seed, format);
        if (app.got_subcommand(check)) return run_check(ls, form_path, format);
        if (app.got_subcommand(reduce))
            return run_reduce(ls, form_path, tol, with_trace, format);
        if (app.got_subcommand(moduli))
            return run_moduli(ls, form_path, tol, format);
        if (app.got_subcommand(oracle))
            return run_oracle(ls, trials, seed, format);
    } catch (const std::domain_error& e) {
        std::cerr << "rejected: " << e.what() << "\n";
        return kRejected;
    } catch (const std::invalid_argument& e) {
        std::cerr << "rejected: " << e.what() << "\n";
        return kRejected;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kIo;
    }
    return kIo;
}
