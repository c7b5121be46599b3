#include <CLI11.hpp>

#include <chrono>
#include <fstream>
#include <iostream>

#include <crsym/report.hpp>

using namespace crsym;

namespace {

void print_systems(std::ostream& os, const CRModelPtr& model, int t, bool cumulative) {
    Ansatz a = build_ansatz(model, t, cumulative);
    auto polys = tangency_polynomials(model, a);
    LinearSystem sys = extract_linear_system(model, a, polys);
    os << "ansatz for weight " << t << (cumulative ? " (cumulative)" : "") << ":\n";
    const auto& T = *model->table();
    for (size_t s = 0; s < a.slots.size(); ++s) {
        const auto& slot = a.slots[s];
        os << "  " << (s < T.n() ? "Z^" + std::to_string(s + 1)
                                 : "W^" + std::to_string(s - T.n() + 1))
           << " =";
        if (slot.monomials.empty()) os << " 0";
        for (size_t i = 0; i < slot.monomials.size(); ++i) {
            CRPoly mono = CRPoly::term(
                model->table(), slot.monomials[i],
                CoeffScalar::constant(T.params(), GaussRational(rat(1))));
            os << (i ? " + " : " ") << a.unknown_name(slot.first_unknown + i);
            if (!mono_is_one(slot.monomials[i])) os << "*" << mono.str();
        }
        os << "\n";
    }
    for (size_t j = 0; j < T.k(); ++j) {
        os << "Sys^{" << t << "," << (j + 1) << "}:\n";
        bool any = false;
        for (const auto& row : sys.display_rows) {
            if (row.eq_index != j) continue;
            os << "  " << format_complex_row(a, row) << "\n";
            any = true;
        }
        if (!any) os << "  (empty)\n";
    }
}

int run_cgs(const std::string& path, const std::string& format, size_t max_branches,
            size_t max_depth) {
    std::ifstream in(path);
    if (!in) {
        std::cerr << "cannot open " << path << "\n";
        return 1;
    }
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(in, nullptr, true, true);
    } catch (const nlohmann::json::parse_error& e) {
        std::cerr << "JSON parse error in " << path << ": " << e.what() << "\n";
        return 1;
    }
    std::vector<std::string> vars, params;
    try {
        vars = doc.at("variables").get<std::vector<std::string>>();
        if (doc.contains("parameters"))
            params = doc.at("parameters").get<std::vector<std::string>>();
        auto names = vars;
        names.insert(names.end(), params.begin(), params.end());
        RingPtr ring = make_ring(names, vars.size());
        std::vector<QPoly> gens;
        for (const auto& s : doc.at("polys").get<std::vector<std::string>>())
            gens.push_back(parse_qpoly(s, ring));
        CGSOptions opts;
        opts.max_branches = max_branches;
        opts.max_depth = max_depth;
        auto cgs = comprehensive_groebner_system(gens, ring, opts);
        if (format == "json") {
            OrderedJson out;
            out["branches"] = OrderedJson::array();
            for (const auto& tr : cgs) {
                OrderedJson b;
                b["null"] = OrderedJson::array();
                for (const auto& e : tr.null_conditions) b["null"].push_back(e.str());
                b["nonnull"] = OrderedJson::array();
                for (const auto& n : tr.nonnull_conditions) b["nonnull"].push_back(n.str());
                b["basis"] = OrderedJson::array();
                for (const auto& g : tr.basis) b["basis"].push_back(g.str());
                out["branches"].push_back(std::move(b));
            }
            std::cout << out.dump(2) << "\n";
        } else {
            std::cout << "comprehensive Groebner system: " << cgs.size() << " branches\n";
            for (size_t i = 0; i < cgs.size(); ++i) {
                const auto& tr = cgs[i];
                auto join = [](const std::vector<QPoly>& v) {
                    std::string s;
                    for (const auto& p : v) s += (s.empty() ? "" : ", ") + p.str();
                    return s.empty() ? "(none)" : s;
                };
                std::cout << "branch " << (i + 1) << ":\n";
                std::cout << "  E: " << join(tr.null_conditions) << "\n";
                std::cout << "  N: " << join(tr.nonnull_conditions) << "\n";
                std::cout << "  G: " << join(tr.basis) << "\n";
            }
        }
        return 0;
    } catch (const ParseError& e) {
        std::cerr << "expression error in " << path << ": " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"graded Lie algebras of infinitesimal CR-automorphisms of weighted "
                 "homogeneous CR models"};
    app.require_subcommand(0, 1);

    std::string model_path;
    std::optional<int> component_t, upto_t;
    bool full = false;
    std::optional<int> max_weight;
    bool assume_fundamental = false, check_fund_flag = false, show_systems = false;
    bool timing = false;
    std::string format = "text";

    app.add_option("model", model_path, "model JSON file");
    auto* opt_component = app.add_option("--component", component_t,
                                         "compute the single component g_t");
    auto* opt_upto = app.add_option("--up-to", upto_t, "compute g^{(t)} cumulatively");
    auto* opt_full = app.add_flag("--full", full, "compute the whole graded algebra (default)");
    opt_component->excludes(opt_upto)->excludes(opt_full);
    opt_upto->excludes(opt_full);
    app.add_option("--max-weight", max_weight,
                   "compute g_0..g_N unconditionally (no termination rule)");
    app.add_flag("--assume-fundamental", assume_fundamental,
                 "trust fundamentality instead of checking it");
    app.add_flag("--check-fundamental", check_fund_flag,
                 "verify fundamentality of the negative part (default)");
    app.add_flag("--show-systems", show_systems, "print the Sys^{t,j} equation systems");
    app.add_flag("--timing", timing, "include wall-clock timing in the report");
    app.add_option("--format", format, "output format")
        ->check(CLI::IsMember({"text", "json"}));

    auto* cgs_cmd = app.add_subcommand("cgs", "comprehensive Groebner system of a "
                                              "parametric polynomial system");
    std::string cgs_path;
    size_t max_branches = 64, max_depth = 32;
    cgs_cmd->add_option("input", cgs_path, "input JSON: {variables, parameters, polys}")
        ->required();
    cgs_cmd->add_option("--max-branches", max_branches, "branch cap");
    cgs_cmd->add_option("--max-depth", max_depth, "recursion depth cap");
    std::string cgs_format = "text";
    cgs_cmd->add_option("--format", cgs_format, "output format")
        ->check(CLI::IsMember({"text", "json"}));

    CLI11_PARSE(app, argc, argv);

    if (cgs_cmd->parsed()) return run_cgs(cgs_path, cgs_format, max_branches, max_depth);

    if (model_path.empty()) {
        std::cerr << "a model file is required (see --help)\n";
        return 1;
    }

    CRModelPtr model;
    try {
        model = model_from_file(model_path);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    bool fatal = false;
    for (const auto& v : model->validate()) {
        fatal = fatal || v.fatal;
        std::cerr << (v.fatal ? "violation: " : "warning: ") << v.message << "\n";
    }
    if (fatal) return 1;

    if (component_t && *component_t < -model->rho())
        std::cerr << "warning: weight " << *component_t
                  << " is below the minimal weight -" << model->rho()
                  << "; the component is empty\n";

    auto t0 = std::chrono::steady_clock::now();
    Report report;
    try {
        if (component_t || upto_t) {
            int t = component_t ? *component_t : *upto_t;
            bool cumulative = upto_t.has_value();
            report.mode = cumulative ? "cumulative" : "component";
            report.weight = t;
            if (show_systems && format == "text") print_systems(std::cout, model, t, cumulative);
            auto res = compute_component(model, t, {}, {}, cumulative);
            for (size_t b = 0; b < res.tree.branches.size(); ++b) {
                const Branch& br = res.tree.branches[b];
                BranchAlgebra alg;
                alg.null_conditions = br.null_conditions;
                alg.null_basis = br.null_basis;
                alg.nonnull_conditions = br.nonnull_conditions;
                alg.rho = model->rho();
                std::vector<VectorField> gens = res.generators[b];
                std::erase_if(gens, [](const VectorField& g) { return g.is_zero(); });
                if (cumulative) {
                    // split into homogeneous parts, one component per weight
                    std::map<int, std::vector<VectorField>> split;
                    for (const auto& g : gens)
                        for (auto& [w, part] : decompose_by_weight(g))
                            split[w].push_back(part);
                    BranchView view{model->table()->params(), br.null_basis,
                                    br.nonnull_conditions};
                    for (auto& [w, fields] : split) {
                        auto basis = span_basis(fields, view);
                        if (!basis.empty()) alg.components[w] = std::move(basis);
                    }
                } else if (!gens.empty()) {
                    alg.components[t] = std::move(gens);
                }
                int varrho = -1;
                for (const auto& [w, fields] : alg.components)
                    if (w >= 0 && !fields.empty()) varrho = std::max(varrho, w);
                alg.varrho = varrho;
                alg.rigid = varrho <= 0;
                report.branches.push_back(report_branch(alg, model->table()));
            }
        } else {
            report.mode = "full";
            AlgebraOptions opts;
            opts.max_weight = max_weight;
            opts.assume_fundamental = assume_fundamental;
            opts.run_fundamental_check = !assume_fundamental;
            auto algs = compute_full_algebra(model, opts);
            if (show_systems && format == "text") {
                int top = 0;
                for (const auto& g : algs)
                    for (const auto& [w, gens] : g.components) top = std::max(top, w);
                for (int t = -model->rho(); t <= top; ++t)
                    print_systems(std::cout, model, t, false);
            }
            for (const auto& g : algs) report.branches.push_back(report_branch(g, model->table()));
        }
    } catch (const std::runtime_error& e) {
        std::string msg = e.what();
        std::cerr << "error: " << msg << "\n";
        return msg.find("termination not reached") != std::string::npos ? 2 : 1;
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << "\n";
        return 1;
    }
    if (timing) {
        auto t1 = std::chrono::steady_clock::now();
        report.timing_ms =
            std::chrono::duration_cast<std::chrono::milliseconds>(t1 - t0).count();
    }
    std::cout << (format == "json" ? emit_json(report) : emit_text(report));
    return 0;
}
