// mcb_cli.cpp
// Command-line surface: load/generate states, evaluate bounds, run the
// validation suites, sweep the example families and emit CSV/JSON.
//
// Exit codes: 0 ok, 2 input error, 3 theorem not applicable to the input,
// 4 numeric failure. Identical invocations produce byte-identical output
// in the default deterministic mode.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <functional>
#include <iostream>
#include <limits>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "mcb/mcb.hpp"

namespace {

constexpr const char* kToolVersion = "1.0.0";
constexpr int kExitOk = 0;
constexpr int kExitInput = 2;
constexpr int kExitNotApplicable = 3;
constexpr int kExitNumeric = 4;

std::string fmt12(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.12g", v);
    return buf;
}

std::string fmt17(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

std::string json_escape(const std::string& s) {
    std::string out;
    out.reserve(s.size());
    for (char ch : s) {
        switch (ch) {
            case '"': out += "\\\""; break;
            case '\\': out += "\\\\"; break;
            case '\n': out += "\\n"; break;
            case '\t': out += "\\t"; break;
            default:
                if (static_cast<unsigned char>(ch) < 0x20) {
                    char buf[8];
                    std::snprintf(buf, sizeof(buf), "\\u%04x", ch);
                    out += buf;
                } else {
                    out += ch;
                }
        }
    }
    return out;
}

void write_text(const std::string& path, const std::string& text) {
    if (path.empty() || path == "-") {
        std::cout << text;
        return;
    }
    std::ofstream out(path, std::ios::binary);
    if (!out) throw mcb::parse_error("cannot open output file for writing", path);
    out << text;
    if (!out) throw mcb::parse_error("write failed", path);
}

std::string read_bytes(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw mcb::parse_error("cannot open file", path);
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return buffer.str();
}

mcb::CoefficientMode parse_mode(const std::string& s) {
    if (s == "paper") return mcb::CoefficientMode::paper;
    if (s == "conservative") return mcb::CoefficientMode::conservative;
    throw mcb::domain_error("unknown coefficient mode: " + s);
}

mcb::SubEvaluator parse_sub_eval(const std::string& s) {
    if (s == "pure-exact") return mcb::SubEvaluator::pure_exact;
    if (s == "thm2") return mcb::SubEvaluator::thm2;
    if (s == "zero") return mcb::SubEvaluator::zero;
    throw mcb::domain_error("unknown substate evaluator: " + s);
}

mcb::DensityMatrix family_state(const std::string& family, double x) {
    if (family == "example1") return mcb::ggz_family(x);
    if (family == "example2")
        return mcb::example2_family(x, mcb::Example2Support::full24);
    if (family == "example2-embedded16")
        return mcb::example2_family(x, mcb::Example2Support::embedded16);
    throw mcb::domain_error("unknown family: " + family);
}

// ---------------------------------------------------------------------------
// bound

struct BoundOptions {
    std::string input;
    std::string output;
    int theorem = 0;
    int s = 2;
    std::string sub_eval = "thm2";
    std::string coeff_mode = "conservative";
    bool thm3_allow_n4 = false;
    mcb::ExecPolicy policy = mcb::ExecPolicy::deterministic;
};

int run_bound(const BoundOptions& opt) {
    const std::string bytes = read_bytes(opt.input);
    mcb::StateVariant loaded = mcb::parse_state(bytes);

    mcb::DensityMatrix rho = std::visit(
        [](auto&& state) -> mcb::DensityMatrix {
            using T = std::decay_t<decltype(state)>;
            if constexpr (std::is_same_v<T, mcb::PureState>) {
                if (!state.is_normalized())
                    throw mcb::domain_error(
                        "pure input state is not normalized; bounds need trace 1");
                return mcb::to_density(state);
            } else {
                return state;
            }
        },
        loaded);

    const int n = rho.party_count();
    const bool applicable =
        (opt.theorem == 1 && n == 3) || (opt.theorem == 2 && n == 4) ||
        (opt.theorem == 3 && (n >= 5 || (n == 4 && opt.thm3_allow_n4))) ||
        (opt.theorem == 4 && n == 4);
    if (!applicable) {
        std::cerr << "error: theorem " << opt.theorem << " is not applicable to a " << n
                  << "-party state\n";
        return kExitNotApplicable;
    }

    const mcb::CoefficientMode mode = parse_mode(opt.coeff_mode);
    mcb::BoundReport report;
    switch (opt.theorem) {
        case 1: report = mcb::thm1_bound(rho, opt.policy); break;
        case 2: report = mcb::thm2_bound(rho, mode, opt.policy); break;
        case 3: report = mcb::thm3_bound(rho, opt.thm3_allow_n4, opt.policy); break;
        case 4:
            report = mcb::thm4_bound(rho, opt.s, parse_sub_eval(opt.sub_eval), mode,
                                     opt.policy);
            break;
        default: throw mcb::domain_error("theorem must be 1, 2, 3 or 4");
    }

    char digest[24];
    std::snprintf(digest, sizeof(digest), "%016llx",
                  static_cast<unsigned long long>(mcb::fnv1a64(bytes)));

    std::string doc = "{\"format\":\"mcb-result/1\",\"tool\":\"mcb\",\"version\":\"";
    doc += kToolVersion;
    doc += "\",\"input\":\"" + json_escape(opt.input) + "\"";
    doc += ",\"input_digest\":\"" + std::string(digest) + "\"";
    doc += ",\"theorem\":\"" + report.theorem + "\"";
    doc += ",\"bound\":" + fmt17(report.bound);
    doc += ",\"bound_squared\":" + fmt17(report.bound_squared);
    doc += ",\"substates_evaluated\":" + std::to_string(report.substates_evaluated);
    if (report.coefficient_mode)
        doc += ",\"coefficient_mode\":\"" + std::string(to_string(*report.coefficient_mode)) +
               "\"";
    if (report.sub_evaluator)
        doc += ",\"sub_evaluator\":\"" + std::string(to_string(*report.sub_evaluator)) + "\"";
    if (opt.theorem == 4) doc += ",\"s\":" + std::to_string(opt.s);
    doc += ",\"notes\":\"" + json_escape(report.notes) + "\"}\n";
    write_text(opt.output, doc);
    return kExitOk;
}

// ---------------------------------------------------------------------------
// sweep

struct SweepOptions {
    std::string family;
    double from = 0.0;
    double to = 1.0;
    double step = 0.05;
    std::vector<int> theorems;
    int s = 2;
    std::string sub_eval = "thm2";
    std::string coeff_mode;  // empty: emit both thm2 modes
    std::string output;
    mcb::ExecPolicy policy = mcb::ExecPolicy::deterministic;
};

int run_sweep(const SweepOptions& opt) {
    if (!(opt.from >= 0.0 && opt.to <= 1.0 && opt.from <= opt.to))
        throw mcb::domain_error("sweep range must satisfy 0 <= from <= to <= 1");
    if (!(opt.step > 0.0)) throw mcb::domain_error("sweep step must be positive");

    std::vector<int> theorems = opt.theorems;
    if (theorems.empty())
        theorems = (opt.family == "example1") ? std::vector<int>{1} : std::vector<int>{2, 4};
    std::sort(theorems.begin(), theorems.end());
    theorems.erase(std::unique(theorems.begin(), theorems.end()), theorems.end());

    const int family_parties = opt.family == "example1" ? 3 : 4;
    for (int t : theorems) {
        const bool ok = (t == 1 && family_parties == 3) ||
                        ((t == 2 || t == 4) && family_parties == 4);
        if (!ok) {
            std::cerr << "error: theorem " << t << " is not applicable to family "
                      << opt.family << "\n";
            return kExitNotApplicable;
        }
    }

    struct Column {
        std::string name;
        int theorem;
        mcb::CoefficientMode mode;
    };
    std::vector<Column> columns;
    for (int t : theorems) {
        if (t == 1) {
            columns.push_back({"thm1", 1, mcb::CoefficientMode::conservative});
        } else if (t == 2) {
            if (opt.coeff_mode.empty()) {
                columns.push_back({"thm2_paper", 2, mcb::CoefficientMode::paper});
                columns.push_back(
                    {"thm2_conservative", 2, mcb::CoefficientMode::conservative});
            } else {
                const auto mode = parse_mode(opt.coeff_mode);
                columns.push_back(
                    {std::string("thm2_") + to_string(mode), 2, mode});
            }
        } else if (t == 4) {
            const auto mode =
                opt.coeff_mode.empty() ? mcb::CoefficientMode::conservative
                                       : parse_mode(opt.coeff_mode);
            columns.push_back({"thm4_s" + std::to_string(opt.s) + "_" + opt.sub_eval, 4, mode});
        }
    }

    const bool example1 = opt.family == "example1";
    const bool emit_example1_form = example1;
    const bool emit_example2_form = !example1;

    std::string csv;
    if (example1 &&
        std::find(theorems.begin(), theorems.end(), 1) != theorems.end()) {
        csv += "# note: the thm1 column is 0 at every x for this family (all of its "
               "two-qubit substate reductions are diagonal), while the "
               "paper_formula_example1 transcription is positive for 0 <= x < 9/11; "
               "both columns are emitted for comparison.\n";
    }
    csv += "x";
    for (const auto& col : columns) csv += "," + col.name;
    if (emit_example1_form) csv += ",paper_formula_example1";
    if (emit_example2_form) csv += ",paper_formula_example2,paper_formula_ref23";
    csv += "\n";

    const auto rows =
        static_cast<std::int64_t>(std::floor((opt.to - opt.from) / opt.step + 1e-9)) + 1;
    const mcb::SubEvaluator sub_eval = parse_sub_eval(opt.sub_eval);
    for (std::int64_t i = 0; i < rows; ++i) {
        const double x = std::min(opt.from + static_cast<double>(i) * opt.step, 1.0);
        const mcb::DensityMatrix rho = family_state(opt.family, x);
        csv += fmt12(x);
        for (const auto& col : columns) {
            mcb::BoundReport report;
            if (col.theorem == 1)
                report = mcb::thm1_bound(rho, opt.policy);
            else if (col.theorem == 2)
                report = mcb::thm2_bound(rho, col.mode, opt.policy);
            else
                report = mcb::thm4_bound(rho, opt.s, sub_eval, col.mode, opt.policy);
            csv += "," + fmt12(report.bound);
        }
        const mcb::ClosedForms forms = mcb::paper_closed_forms(x);
        if (emit_example1_form) csv += "," + fmt12(forms.example1_bound);
        if (emit_example2_form)
            csv += "," + fmt12(forms.example2_bound) + "," + fmt12(forms.ref23_bound);
        csv += "\n";
    }
    write_text(opt.output, csv);
    return kExitOk;
}

// ---------------------------------------------------------------------------
// validate

struct Check {
    std::string name;
    double value = 0.0;
    double threshold = 0.0;
    bool pass = false;  // value >= threshold
};

void run_pure_formula_checks(std::uint64_t seed, int samples, std::vector<Check>& checks) {
    double c3_resid = 0.0, c4_resid = 0.0, cn_resid = 0.0, purity_resid = 0.0;
    for (int k = 0; k < samples; ++k) {
        const auto s3 = mcb::random_pure(mcb::DimensionVector({3, 3, 3}),
                                         mcb::detail::mix_seed(seed, k));
        c3_resid = std::max(c3_resid, std::abs(mcb::c3_squared_coefficients(s3) -
                                               mcb::concurrence_pure(s3).squared));
        const auto s4 = mcb::random_pure(mcb::DimensionVector({2, 2, 2, 3}),
                                         mcb::detail::mix_seed(seed ^ 0x11, k));
        c4_resid = std::max(c4_resid, std::abs(mcb::c4_squared_coefficients(s4) -
                                               mcb::concurrence_pure(s4).squared));
        purity_resid = std::max(purity_resid, mcb::purity_identity_residual(s4));
        const auto s5 = mcb::random_pure(mcb::DimensionVector({2, 2, 2, 2, 2}),
                                         mcb::detail::mix_seed(seed ^ 0x22, k));
        cn_resid = std::max(cn_resid, std::abs(mcb::cN_squared_coefficients(s5) -
                                               mcb::concurrence_pure(s5).squared));
    }
    // Margin form: threshold - residual >= 0.
    checks.push_back({"c3_vs_subset_purities_margin", 1e-8 - c3_resid, 0.0, false});
    checks.push_back({"c4_vs_subset_purities_margin", 1e-8 - c4_resid, 0.0, false});
    checks.push_back({"cn_vs_subset_purities_margin", 1e-8 - cn_resid, 0.0, false});
    checks.push_back({"four_partite_purity_identities_margin", 1e-10 - purity_resid, 0.0, false});
}

void run_monogamy_checks(std::uint64_t seed, int samples, std::vector<Check>& checks) {
    checks.push_back(
        {"monogamy_min_margin", mcb::min_monogamy_margin(seed, samples), -1e-8, false});
}

void run_projection_checks(std::uint64_t seed, int samples, std::vector<Check>& checks) {
    checks.push_back({"tripartite_projection_min_margin",
                      mcb::min_tripartite_projection_margin(seed, samples), -1e-8, false});
    checks.push_back({"bipartite_projection_min_margin",
                      mcb::min_bipartite_projection_margin(seed, samples), -1e-8, false});
    checks.push_back({"four_partite_projection_min_margin",
                      mcb::min_four_partite_projection_margin(seed, samples), -1e-8, false});
}

void run_sandwich_checks(std::uint64_t seed, int samples, mcb::ExecPolicy policy,
                         std::vector<Check>& checks) {
    constexpr int kRoofTrials = 200;
    struct Config {
        std::string name;
        std::vector<int> dims;
        int rank;
        std::function<mcb::BoundReport(const mcb::DensityMatrix&)> eval;
    };
    const std::vector<Config> configs{
        {"thm1_222", {2, 2, 2}, 0,
         [&](const mcb::DensityMatrix& rho) { return mcb::thm1_bound(rho, policy); }},
        {"thm1_333", {3, 3, 3}, 8,
         [&](const mcb::DensityMatrix& rho) { return mcb::thm1_bound(rho, policy); }},
        {"thm2_paper_2222", {2, 2, 2, 2}, 0,
         [&](const mcb::DensityMatrix& rho) {
             return mcb::thm2_bound(rho, mcb::CoefficientMode::paper, policy);
         }},
        {"thm2_conservative_2222", {2, 2, 2, 2}, 0,
         [&](const mcb::DensityMatrix& rho) {
             return mcb::thm2_bound(rho, mcb::CoefficientMode::conservative, policy);
         }},
        {"thm4_s2_2223", {2, 2, 2, 3}, 8,
         [&](const mcb::DensityMatrix& rho) {
             return mcb::thm4_bound(rho, 2, mcb::SubEvaluator::thm2,
                                    mcb::CoefficientMode::conservative, policy);
         }},
        {"thm3_22222", {2, 2, 2, 2, 2}, 8,
         [&](const mcb::DensityMatrix& rho) { return mcb::thm3_bound(rho, false, policy); }},
    };
    for (const auto& cfg : configs) {
        const mcb::DimensionVector dims(cfg.dims);
        double worst = std::numeric_limits<double>::infinity();
        for (int k = 0; k < samples; ++k) {
            const auto rho =
                mcb::random_density(dims, mcb::detail::mix_seed(seed, k), cfg.rank);
            const double bound = cfg.eval(rho).bound;
            const double roof =
                mcb::convex_roof_upper(rho, kRoofTrials, mcb::detail::mix_seed(seed ^ 0x33, k));
            worst = std::min(worst, roof - bound);
        }
        checks.push_back({"sandwich_" + cfg.name + "_min_margin", worst, -1e-6, false});
    }
}

struct ValidateOptions {
    std::string suite;
    std::uint64_t seed = 7;
    std::optional<int> samples;
    std::string output;
    mcb::ExecPolicy policy = mcb::ExecPolicy::deterministic;
};

int run_validate(const ValidateOptions& opt) {
    std::vector<Check> checks;
    const bool all = opt.suite == "all";
    if (opt.suite == "pure-formulas" || all)
        run_pure_formula_checks(opt.seed, opt.samples.value_or(100), checks);
    if (opt.suite == "monogamy" || all)
        run_monogamy_checks(opt.seed, opt.samples.value_or(1000), checks);
    if (opt.suite == "projections" || all)
        run_projection_checks(opt.seed, opt.samples.value_or(200), checks);
    if (opt.suite == "sandwich" || all)
        run_sandwich_checks(opt.seed, opt.samples.value_or(50), opt.policy, checks);
    if (checks.empty()) throw mcb::domain_error("unknown suite: " + opt.suite);

    bool all_pass = true;
    std::string doc = "{\"format\":\"mcb-validate/1\",\"suite\":\"" + opt.suite + "\"";
    doc += ",\"seed\":" + std::to_string(opt.seed);
    doc += ",\"checks\":[";
    for (std::size_t i = 0; i < checks.size(); ++i) {
        Check& c = checks[i];
        c.pass = c.value >= c.threshold;
        all_pass = all_pass && c.pass;
        if (i) doc += ",";
        doc += "{\"name\":\"" + c.name + "\",\"min_margin\":" + fmt17(c.value) +
               ",\"threshold\":" + fmt17(c.threshold) +
               ",\"pass\":" + (c.pass ? "true" : "false") + "}";
    }
    doc += "],\"pass\":";
    doc += all_pass ? "true" : "false";
    doc += "}\n";
    write_text(opt.output, doc);
    return all_pass ? kExitOk : 1;
}

// ---------------------------------------------------------------------------
// gen

struct GenOptions {
    std::string family;
    double x = 0.0;
    std::string output;
};

int run_gen(const GenOptions& opt) {
    const mcb::DensityMatrix rho = family_state(opt.family, opt.x);
    const std::string text = mcb::serialize_state(rho);
    write_text(opt.output, text);
    return kExitOk;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"certified lower bounds of multipartite concurrence from projected substates"};
    app.require_subcommand(1);
    app.set_version_flag("--version", std::string("mcb ") + kToolVersion);

    std::string parallel = "det";
    app.add_option("--parallel", parallel, "substate reduction: det (default) or fast")
        ->check(CLI::IsMember({"det", "fast"}));

    BoundOptions bound_opt;
    auto* bound = app.add_subcommand("bound", "evaluate a lower bound on a state file");
    bound->add_option("--in", bound_opt.input, "input mcb-state/1 file")->required();
    bound->add_option("--out", bound_opt.output, "result JSON path (default stdout)");
    bound->add_option("--theorem", bound_opt.theorem, "which bound to evaluate")
        ->required()
        ->check(CLI::IsMember({1, 2, 3, 4}));
    bound->add_option("--s", bound_opt.s, "substate size for theorem 4 (default 2)");
    bound->add_option("--sub-eval", bound_opt.sub_eval,
                      "theorem-4 substate evaluator: pure-exact, thm2 (default), zero")
        ->check(CLI::IsMember({"pure-exact", "thm2", "zero"}));
    bound->add_option("--coeff-mode", bound_opt.coeff_mode,
                      "theorem-2 denominators: paper or conservative (default)")
        ->check(CLI::IsMember({"paper", "conservative"}));
    bound->add_flag("--thm3-allow-n4", bound_opt.thm3_allow_n4,
                    "expert: extend theorem 3 to 4-party states");

    SweepOptions sweep_opt;
    auto* sweep = app.add_subcommand("sweep", "evaluate bounds over an example family grid");
    sweep->add_option("--family", sweep_opt.family, "example1, example2, example2-embedded16")
        ->required()
        ->check(CLI::IsMember({"example1", "example2", "example2-embedded16"}));
    sweep->add_option("--from", sweep_opt.from, "grid start (default 0)");
    sweep->add_option("--to", sweep_opt.to, "grid end (default 1)");
    sweep->add_option("--step", sweep_opt.step, "grid step (default 0.05)");
    sweep->add_option("--theorem", sweep_opt.theorems,
                      "theorems to evaluate (repeatable; default per family)");
    sweep->add_option("--s", sweep_opt.s, "substate size for theorem 4 (default 2)");
    sweep->add_option("--sub-eval", sweep_opt.sub_eval,
                      "theorem-4 substate evaluator (default thm2)")
        ->check(CLI::IsMember({"pure-exact", "thm2", "zero"}));
    sweep->add_option("--coeff-mode", sweep_opt.coeff_mode,
                      "restrict theorem 2 to one mode (default: emit both)")
        ->check(CLI::IsMember({"paper", "conservative"}));
    sweep->add_option("--out", sweep_opt.output, "CSV path (default stdout)");

    ValidateOptions validate_opt;
    auto* validate = app.add_subcommand("validate", "run the invariant suites");
    validate->add_option("--suite", validate_opt.suite,
                         "pure-formulas, monogamy, projections, sandwich, all")
        ->required()
        ->check(CLI::IsMember({"pure-formulas", "monogamy", "projections", "sandwich", "all"}));
    int samples_flag = -1;
    validate->add_option("--samples", samples_flag, "sample count override");
    validate->add_option("--seed", validate_opt.seed, "RNG seed (default 7)");
    validate->add_option("--out", validate_opt.output, "report JSON path (default stdout)");

    GenOptions gen_opt;
    auto* gen = app.add_subcommand("gen", "write an example-family state file");
    gen->add_option("--family", gen_opt.family, "example1, example2, example2-embedded16")
        ->required()
        ->check(CLI::IsMember({"example1", "example2", "example2-embedded16"}));
    gen->add_option("--x", gen_opt.x, "family parameter in [0,1]")->required();
    gen->add_option("--out", gen_opt.output, "state file path (default stdout)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForVersion& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitInput;
    }

    const mcb::ExecPolicy policy =
        parallel == "fast" ? mcb::ExecPolicy::parallel : mcb::ExecPolicy::deterministic;
    bound_opt.policy = policy;
    sweep_opt.policy = policy;
    validate_opt.policy = policy;
    if (samples_flag > 0) validate_opt.samples = samples_flag;

    try {
        if (bound->parsed()) return run_bound(bound_opt);
        if (sweep->parsed()) return run_sweep(sweep_opt);
        if (validate->parsed()) return run_validate(validate_opt);
        if (gen->parsed()) return run_gen(gen_opt);
        std::cerr << "error: no subcommand\n";
        return kExitInput;
    } catch (const mcb::applicability_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitNotApplicable;
    } catch (const mcb::numeric_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitNumeric;
    } catch (const mcb::error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitInput;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitInput;
    }
}
