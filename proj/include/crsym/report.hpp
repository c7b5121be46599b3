#pragma once

#include <json.hpp>

#include "liealg.hpp"

namespace crsym {

using OrderedJson = nlohmann::ordered_json;

/// Serialized form of one computed branch. Everything is kept as canonical
/// strings so that emit/parse round-trips are lossless.
struct ReportBranch {
    std::vector<std::string> null_conditions;
    std::vector<std::string> nonnull_conditions;
    // weight -> generators -> (variable name -> coefficient polynomial)
    std::map<int, std::vector<std::map<std::string, std::string>>> components;
    std::map<int, size_t> dims;
    int rho = 0;
    int varrho = -1;
    bool rigid = false;
    bool fundamental = false;
    // ([i, j], entries): [X_i, X_j] = sum c * X_m, indices 1-based
    std::vector<std::pair<std::pair<size_t, size_t>,
                          std::vector<std::pair<size_t, std::string>>>>
        structure;
    std::vector<std::string> notes;

    bool operator==(const ReportBranch&) const = default;
};

struct Report {
    std::string mode;          // full | component | cumulative
    std::optional<int> weight; // for component / cumulative modes
    std::vector<ReportBranch> branches;
    std::optional<long> timing_ms;  // present only when timing was requested

    bool operator==(const Report&) const = default;
};

inline std::string frac_string(const QPoly& num, const QPoly& den) {
    if (den.is_constant()) {
        Rational d = den.constant_value();
        if (d == 1) return num.str();
        QPoly scaled = num;
        scaled.scale(Rational(1) / d);
        return scaled.str();
    }
    return "(" + num.str() + ")/(" + den.str() + ")";
}

inline ReportBranch report_branch(const BranchAlgebra& alg, const VarTablePtr& table) {
    ReportBranch out;
    for (const auto& e : alg.null_conditions) out.null_conditions.push_back(e.str());
    for (const auto& n : alg.nonnull_conditions) out.nonnull_conditions.push_back(n.str());
    for (const auto& [t, gens] : alg.components) {
        out.dims[t] = gens.size();
        auto& list = out.components[t];
        for (const auto& g : gens) {
            std::map<std::string, std::string> coeffs;
            for (size_t s = 0; s < g.coeffs.size(); ++s)
                if (!g.coeffs[s].is_zero())
                    coeffs.emplace(table->name(g.slot_var(s)), g.coeffs[s].str());
            list.push_back(std::move(coeffs));
        }
    }
    out.rho = alg.rho;
    out.varrho = alg.varrho;
    out.rigid = alg.rigid;
    out.fundamental = alg.fundamental;
    for (const auto& [key, entries] : alg.structure) {
        std::vector<std::pair<size_t, std::string>> terms;
        for (const auto& e : entries)
            terms.emplace_back(e.m + 1, frac_string(e.num, e.den));
        out.structure.push_back({{key.first + 1, key.second + 1}, std::move(terms)});
    }
    out.notes = alg.notes;
    return out;
}

inline OrderedJson to_json(const Report& r) {
    OrderedJson doc;
    doc["mode"] = r.mode;
    if (r.weight) doc["weight"] = *r.weight;
    doc["branches"] = OrderedJson::array();
    for (const auto& br : r.branches) {
        OrderedJson b;
        b["null"] = br.null_conditions;
        b["nonnull"] = br.nonnull_conditions;
        OrderedJson comps = OrderedJson::object();
        for (const auto& [t, gens] : br.components) {
            OrderedJson list = OrderedJson::array();
            for (const auto& g : gens) {
                OrderedJson gen;
                OrderedJson coeffs = OrderedJson::object();
                for (const auto& [var, poly] : g) coeffs[var] = poly;
                gen["coeffs"] = std::move(coeffs);
                list.push_back(std::move(gen));
            }
            comps[std::to_string(t)] = std::move(list);
        }
        b["components"] = std::move(comps);
        OrderedJson dims = OrderedJson::object();
        for (const auto& [t, d] : br.dims) dims[std::to_string(t)] = d;
        b["dims"] = std::move(dims);
        b["rho"] = br.rho;
        b["varrho"] = br.varrho;
        b["rigid"] = br.rigid;
        b["fundamental"] = br.fundamental;
        OrderedJson st = OrderedJson::array();
        for (const auto& [ij, terms] : br.structure) {
            OrderedJson entry = OrderedJson::array();
            entry.push_back(ij.first);
            entry.push_back(ij.second);
            OrderedJson tl = OrderedJson::array();
            for (const auto& [m, c] : terms) {
                OrderedJson term;
                term["m"] = m;
                term["c"] = c;
                tl.push_back(std::move(term));
            }
            entry.push_back(std::move(tl));
            st.push_back(std::move(entry));
        }
        b["structure"] = std::move(st);
        if (!br.notes.empty()) b["notes"] = br.notes;
        doc["branches"].push_back(std::move(b));
    }
    if (r.timing_ms) doc["timing_ms"] = *r.timing_ms;
    return doc;
}

inline Report report_from_json(const OrderedJson& doc) {
    Report r;
    r.mode = doc.at("mode").get<std::string>();
    if (doc.contains("weight")) r.weight = doc.at("weight").get<int>();
    for (const auto& b : doc.at("branches")) {
        ReportBranch br;
        br.null_conditions = b.at("null").get<std::vector<std::string>>();
        br.nonnull_conditions = b.at("nonnull").get<std::vector<std::string>>();
        for (const auto& [key, list] : b.at("components").items()) {
            int t = std::stoi(key);
            for (const auto& gen : list) {
                std::map<std::string, std::string> coeffs;
                for (const auto& [var, poly] : gen.at("coeffs").items())
                    coeffs.emplace(var, poly.get<std::string>());
                br.components[t].push_back(std::move(coeffs));
            }
        }
        for (const auto& [key, d] : b.at("dims").items())
            br.dims[std::stoi(key)] = d.get<size_t>();
        br.rho = b.at("rho").get<int>();
        br.varrho = b.at("varrho").get<int>();
        br.rigid = b.at("rigid").get<bool>();
        br.fundamental = b.at("fundamental").get<bool>();
        for (const auto& entry : b.at("structure")) {
            std::pair<size_t, size_t> ij = {entry.at(0).get<size_t>(), entry.at(1).get<size_t>()};
            std::vector<std::pair<size_t, std::string>> terms;
            for (const auto& term : entry.at(2))
                terms.emplace_back(term.at("m").get<size_t>(), term.at("c").get<std::string>());
            br.structure.push_back({ij, std::move(terms)});
        }
        if (b.contains("notes")) br.notes = b.at("notes").get<std::vector<std::string>>();
        r.branches.push_back(std::move(br));
    }
    if (doc.contains("timing_ms")) r.timing_ms = doc.at("timing_ms").get<long>();
    return r;
}

inline std::string emit_json(const Report& r) { return to_json(r).dump(2) + "\n"; }

/// Plain-text rendering: generators in d-notation, one component per block,
/// the commutator table in X_i terms.
inline std::string emit_text(const Report& r) {
    std::ostringstream os;
    os << "mode: " << r.mode;
    if (r.weight) os << " (weight " << *r.weight << ")";
    os << "\n";
    for (size_t bi = 0; bi < r.branches.size(); ++bi) {
        const ReportBranch& br = r.branches[bi];
        os << "branch " << (bi + 1) << " of " << r.branches.size() << ":\n";
        auto join = [](const std::vector<std::string>& v) {
            std::string s;
            for (const auto& x : v) s += (s.empty() ? "" : ", ") + x;
            return s.empty() ? "(none)" : s;
        };
        os << "  null conditions:    " << join(br.null_conditions) << "\n";
        os << "  nonnull conditions: " << join(br.nonnull_conditions) << "\n";
        size_t dim = 0;
        for (const auto& [t, d] : br.dims) dim += d;
        os << "  dim = " << dim << ", rho = " << br.rho << ", varrho = " << br.varrho;
        if (br.varrho < 0) os << " (no nonnegative part)";
        os << "\n";
        os << "  rigid = " << (br.rigid ? "yes" : "no")
           << ", fundamental = " << (br.fundamental ? "yes" : "no") << "\n";
        size_t index = 1;
        for (const auto& [t, gens] : br.components) {
            os << "  g_{" << t << "} (dim " << gens.size() << "):\n";
            for (const auto& g : gens) {
                os << "    X" << index++ << " = ";
                bool first = true;
                for (const auto& [var, poly] : g) {
                    std::string piece =
                        (poly.find('+') != std::string::npos ||
                         poly.find('-', 1) != std::string::npos)
                            ? "(" + poly + ")"
                            : poly;
                    if (piece == "1")
                        piece = "";
                    else if (piece == "-1")
                        piece = "-";
                    else
                        piece += "*";
                    std::string term = piece + "d_" + var;
                    if (!first && term[0] != '-') os << "+";
                    os << term;
                    first = false;
                }
                os << "\n";
            }
        }
        if (!br.structure.empty()) {
            os << "  nonzero commutators:\n";
            for (const auto& [ij, terms] : br.structure) {
                os << "    [X" << ij.first << ", X" << ij.second << "] = ";
                bool first = true;
                for (const auto& [m, c] : terms) {
                    std::string piece = c == "1" ? "" : (c == "-1" ? "-" : c + "*");
                    if (piece.find('/') != std::string::npos ||
                        piece.find('+') != std::string::npos)
                        piece = "(" + c + ")*";
                    std::string term = piece + "X" + std::to_string(m);
                    if (!first && term[0] != '-') os << "+";
                    os << term;
                    first = false;
                }
                os << "\n";
            }
        }
        for (const auto& n : br.notes) os << "  note: " << n << "\n";
    }
    return os.str();
}

}  // namespace crsym
