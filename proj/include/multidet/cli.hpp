#pragma once

#include <CLI11.hpp>

#include <chrono>
#include <cstdlib>
#include <iomanip>
#include <iostream>

#include "multidet/acceptance.hpp"

namespace multidet {

/** Command names with their help lines. */
inline const std::vector<std::pair<std::string, std::string>>& cli_command_table() {
    static const std::vector<std::pair<std::string, std::string>> c{
        {"validate-picard", "antisymmetry and order compatibility of c"},
        {"check-cube", "cube validity and higher coherence"},
        {"check-cubical-relations", "face and degeneracy identities"},
        {"qhomology", "homology of the cubical complex of a group"},
        {"validate-presentation", "structural validation of presentations"},
        {"check-verdier", "3x3 diagrams against their certificates"},
        {"oct-to-2cube", "build and check the 2-cube of an octahedron"},
        {"check-multiexact", "triangulated or Picard functors"},
        {"check-verdier-admission", "Verdier structures of a functor in several variables"},
        {"check-det", "determinant axioms"},
        {"check-multidet", "determinant axioms in several variables"},
        {"check-cubical-det", "cubical form of the determinant axioms"},
        {"cross-check", "axiomatic against cubical verdicts"},
        {"sum-dets", "sum of two determinants"},
        {"compose-det", "pull a determinant back along a functor"},
        {"check-det-morphism", "morphisms of determinants"},
        {"check-factorization", "factorization through a universal determinant"},
        {"validate-catring", "categorical ring axioms, pi0 and pi1"},
        {"k0-ring", "K0 ring and its Euler map"},
        {"selftest", "run the acceptance suite"},
        {"emit-workspace", "canonical JSON of the loaded workspace"}};
    return c;
}

inline bool is_command(const std::string& name) {
    const auto& t = cli_command_table();
    return std::any_of(t.begin(), t.end(), [&](const auto& c) { return c.first == name; });
}

struct CliOptions {
    std::vector<std::string> inputs, ids;
    std::string format = "text";
    std::uint64_t seed = 42;
    bool timing = false;
    std::string group, functor, det, nine, octahedron, output;
    std::size_t max_level = 3, max_dim = 3, samples = 1000, random = 0;
    long battery_total = 0;
    std::vector<int> only;
};

namespace cli {

inline std::optional<std::uint64_t> env_budget() {
    if (const char* v = std::getenv("MULTIDET_BUDGET"); v && *v) return std::strtoull(v, nullptr, 10);
    return std::nullopt;
}

inline EnumerationBudget enumeration_budget(const CliOptions& o) {
    EnumerationBudget b;
    b.seed = o.seed;
    if (auto e = env_budget()) b.tuple_budget = *e;
    return b;
}

/** Entries named by --id, or all of them when none is given. */
template <class Map>
std::vector<std::string> selected(const Map& m, const CliOptions& o, const char* kind) {
    std::vector<std::string> out;
    if (o.ids.empty()) {
        for (const auto& [id, _] : m) out.push_back(id);
        if (out.empty()) throw Error("UnresolvedReference", std::string("no ") + kind + " in the workspace");
        return out;
    }
    for (const auto& id : o.ids) {
        if (!m.contains(id)) throw Error("UnresolvedReference", std::string("unknown ") + kind + " \"" + id + "\"");
        out.push_back(id);
    }
    return out;
}

/** Merges per-entry reports, prefixing check names only when there are several. */
template <class Fn>
Report for_each_selected(const std::string& command, const std::vector<std::string>& ids, Fn&& fn) {
    Report r(command);
    for (const auto& id : ids) {
        Report sub = fn(id);
        r.merge(sub, ids.size() > 1 ? id + ":" : "");
        for (const auto& [k, v] : sub.extra()) r.extra()[ids.size() > 1 ? id + ":" + k : k] = v;
    }
    return r;
}

inline std::string coords_string(std::span<const Coord> x) { return format_coords(x); }

inline Report qhomology(const CliOptions& o) {
    if (o.group.empty()) throw Error("MissingArgument", "qhomology needs --group");
    auto A = FGAbelianGroup::parse(o.group);
    Report r("qhomology");
    QCheckOptions q;
    q.max_level = o.max_level + 1;
    q.seed = o.seed;
    r.merge(check_qcomplex(A, q));
    for (std::size_t k = 0; k <= o.max_level; ++k) r.extra()["H" + std::to_string(k)] = q_homology(A, k).to_string();
    return r;
}

inline Report check_verdier_cmd(const Workspace& W, const CliOptions& o) {
    return for_each_selected("check-verdier", selected(W.presentations, o, "presentation"), [&](const std::string& id) {
        const auto& T = *W.presentations.at(id);
        Report r;
        if (!o.nine.empty()) {
            auto k = T.find_nine(o.nine);
            if (!k) throw Error("UnresolvedReference", "unknown nine-diagram \"" + o.nine + "\"");
            r.merge(check_verdier(T, *k));
            return r;
        }
        for (Id k = 0; k < T.nine_diagrams.size(); ++k) {
            if (!T.nine_diagrams[k].certificate) {
                r.skip("verdier", T.nine_diagrams[k].id, "no certificate");
                continue;
            }
            r.merge(check_verdier(T, k));
        }
        return r;
    });
}

inline Report oct_to_2cube(const Workspace& W, const CliOptions& o) {
    if (o.ids.size() != 1 || o.octahedron.empty())
        throw Error("MissingArgument", "oct-to-2cube needs one --id and --octahedron");
    TriangPresentation T = *jsonio::lookup(W.presentations, o.ids[0], "presentation");
    auto oct = T.find_octahedron_id(o.octahedron);
    if (!oct) throw Error("UnresolvedReference", "unknown octahedron \"" + o.octahedron + "\"");
    Id k = octahedron_to_2cube(T, *oct);
    Report r("oct-to-2cube");
    r.merge(check_verdier(T, k));
    const auto& N = T.nine_diagrams[k];
    for (int i = 0; i < 3; ++i) {
        std::string row;
        for (int j = 0; j < 3; ++j) row += (j ? " " : "") + T.objects[N.grid[i][j]];
        r.extra()["grid" + std::to_string(i)] = row;
        r.extra()["row" + std::to_string(i)] = T.triangles[N.rows[i]].id;
        r.extra()["col" + std::to_string(i)] = T.triangles[N.cols[i]].id;
    }
    r.extra()["certificate"] = T.objects[N.certificate->A] + ": " + T.octahedra[N.certificate->oct[0]].id + ", " +
                               T.octahedra[N.certificate->oct[1]].id + ", " + T.octahedra[N.certificate->oct[2]].id;
    return r;
}

inline Report check_multiexact_cmd(const Workspace& W, const CliOptions& o) {
    std::vector<std::string> ids = o.ids;
    if (ids.empty()) {
        for (const auto& [id, _] : W.functors) ids.push_back(id);
        for (const auto& [id, _] : W.picard_functors) ids.push_back(id);
        if (ids.empty()) throw Error("UnresolvedReference", "no functor in the workspace");
    }
    return for_each_selected("check-multiexact", ids, [&](const std::string& id) {
        if (auto it = W.functors.find(id); it != W.functors.end()) return check_multiexact_tri_functor(*it->second);
        return check_multiexact_picard_functor(jsonio::lookup(W.picard_functors, id, "functor"), enumeration_budget(o));
    });
}

inline Report cross_check(const Workspace& W, const CliOptions& o) {
    return for_each_selected("cross-check", selected(W.determinants, o, "determinant"), [&](const std::string& id) {
        const auto& D = W.determinants.at(id);
        Report r = cross_check_definitions(D);
        if (o.random) {
            std::mt19937_64 rng(o.seed);
            std::size_t valid = 0;
            for (std::size_t k = 0; k < o.random; ++k) {
                auto X = random_determinant(D, rng);
                auto a = validate_multideterminant(X), c = validate_cubical_determinant(X);
                bool av = a.status() == Status::valid, cv = c.status() == Status::valid;
                valid += av;
                r.check("random-consistency", av == cv, "instance " + std::to_string(k),
                        std::string("axiomatic ") + to_string(a.status()) + ", cubical " + to_string(c.status()));
            }
            r.extra()["random-valid"] = std::to_string(valid) + "/" + std::to_string(o.random);
        }
        return r;
    });
}

/** Workspace holding one determinant and what it references, for --output. */
inline Workspace single_det_workspace(const Workspace& W, const DeterminantData& D, const std::string& id) {
    Workspace out;
    for (const auto& s : D.sources()) {
        auto sid = jsonio::find_presentation_id(W, *s);
        out.presentations[sid] = W.presentations.at(sid);
        if (auto b = W.builtin.find("presentations"); b != W.builtin.end() && b->second.contains(sid))
            out.builtin["presentations"][sid] = b->second.at(sid);
    }
    std::string pid = "target";
    for (const auto& [k, p] : W.picard)
        if (*p == D.P()) pid = k;
    out.picard[pid] = D.target();
    out.determinants.emplace(id, D);
    return out;
}

inline void write_output(const std::string& path, const json& doc) {
    std::ofstream f(path);
    if (!f) throw Error("IOError", "cannot write " + path);
    f << doc.dump(2) << "\n";
}

inline Report sum_dets(const Workspace& W, const CliOptions& o) {
    if (o.ids.size() != 2) throw Error("MissingArgument", "sum-dets needs two --id");
    const auto& a = jsonio::lookup(W.determinants, o.ids[0], "determinant");
    const auto& b = jsonio::lookup(W.determinants, o.ids[1], "determinant");
    auto S = sum_determinants(a, b);
    Report r = validate_multideterminant(S);
    r.set_command("sum-dets");
    r.extra()["summands"] = o.ids[0] + " + " + o.ids[1];
    if (!o.output.empty()) write_output(o.output, emit_workspace(single_det_workspace(W, S, o.ids[0] + "+" + o.ids[1])));
    return r;
}

inline Report compose_det(const Workspace& W, const CliOptions& o) {
    if (o.functor.empty()) throw Error("MissingArgument", "compose-det needs --functor");
    const auto& F = *jsonio::lookup(W.functors, o.functor, "functor");
    Report r("compose-det");
    DeterminantData det = [&] {
        if (o.det.empty() || o.det == "euler") return euler_determinant(F.target);
        const auto& D = jsonio::lookup(W.determinants, o.det, "determinant");
        if (D.slots() != 1 || !DeterminantData::same_presentation(D.source(0), *F.target))
            throw Error("MismatchedSignature", "determinant \"" + o.det + "\" is not on the functor's target");
        return D;
    }();
    r.merge(check_functor_verdier_admission(F), "admission:");
    auto C = compose_with_multiexact(det, F);
    r.merge(validate_multideterminant(C));
    r.extra()["composite"] = (o.det.empty() ? std::string("euler") : o.det) + " after " + o.functor;
    return r;
}

inline Report validate_catring(const Workspace& W, const CliOptions& o) {
    return for_each_selected("validate-catring", selected(W.catrings, o, "categorical ring"), [&](const std::string& id) {
        const auto& R = W.catrings.at(id);
        Report r = validate_categorical_ring(R, enumeration_budget(o));
        if (!r.ok()) return r;
        auto p0 = pi0_ring(R);
        auto p1 = pi1_bimodule(R, enumeration_budget(o));
        r.extra()["pi0"] = p0.additive.to_string() + ", unit " + coords_string(p0.unit);
        r.extra()["pi1"] = p1.module.to_string() + (p1.sigma_determined ? ", actions fixed by sigma" : "");
        r.pass_many("sigma-agreement", p1.sigma_checks);
        return r;
    });
}

inline Report k0_ring(const Workspace& W, const CliOptions& o) {
    Report r("k0-ring");
    std::shared_ptr<const TriFunctorData> F;
    PresentationPtr T;
    if (!o.functor.empty()) {
        F = jsonio::lookup(W.functors, o.functor, "functor");
        T = F->sources.at(0);
    } else {
        auto ids = selected(W.presentations, o, "presentation");
        if (ids.size() != 1) throw Error("MissingArgument", "k0-ring needs --functor or a single --id");
        T = W.presentations.at(ids[0]);
        if (!T->builtin.contains("generator") || T->builtin.at("generator") != "graded-lines")
            throw Error("MissingArgument", "k0-ring without --functor needs a graded-lines presentation");
        GradedTensorOptions g;
        g.max_battery_total = o.battery_total;
        F = std::make_shared<const TriFunctorData>(graded_tensor_bifunctor(T, g));
    }
    auto K = compute_k0_ring(*T, *F);
    r.merge(K.report);
    for (const auto& [k, v] : K.report.extra()) r.extra()[k] = v;
    if (T->builtin.contains("generator") && T->builtin.at("generator") == "graded-lines") {
        auto w = window_of(*T);
        std::vector<Coord> chi(T->objects.size());
        for (Id g = 0; g < chi.size(); ++g) chi[g] = w.euler(g);
        r.merge(check_k0_ring_map(K, chi), "euler-map:");
    }
    return r;
}

inline Report dispatch(const std::string& cmd, const Workspace& W, const CliOptions& o) {
    auto each = [&](const auto& m, const char* kind, auto&& fn) {
        return for_each_selected(cmd, selected(m, o, kind), [&](const std::string& id) { return fn(m.at(id)); });
    };
    if (cmd == "validate-picard") return each(W.picard, "Picard groupoid", [](const auto& P) { return validate_picard(*P); });
    if (cmd == "check-cube")
        return each(W.cubes, "cube", [](const Cube& S) {
            Report r = validate_cube(S);
            if (r.ok() && S.dim() >= 2) r.merge(check_higher_coherence(S), "coherence:");
            return r;
        });
    if (cmd == "check-cubical-relations") {
        RelationBudget b;
        b.max_dim = o.max_dim;
        b.samples = o.samples;
        b.seed = o.seed;
        if (auto e = env_budget()) b.exhaustive_cap = *e;
        if (!o.group.empty()) {
            Report r = check_cubical_relations(PicardPresentation::discrete(FGAbelianGroup::parse(o.group)), b);
            r.set_command(cmd);
            return r;
        }
        return each(W.picard, "Picard groupoid", [&](const auto& P) { return check_cubical_relations(*P, b); });
    }
    if (cmd == "qhomology") return qhomology(o);
    if (cmd == "validate-presentation")
        return for_each_selected(cmd, selected(W.presentations, o, "presentation"), [&](const std::string& id) {
            auto it = W.structural.find(id);
            return it != W.structural.end() ? it->second : validate_presentation(*W.presentations.at(id));
        });
    if (cmd == "check-verdier") return check_verdier_cmd(W, o);
    if (cmd == "oct-to-2cube") return oct_to_2cube(W, o);
    if (cmd == "check-multiexact") return check_multiexact_cmd(W, o);
    if (cmd == "check-verdier-admission")
        return each(W.functors, "functor", [](const auto& F) { return check_functor_verdier_admission(*F); });
    if (cmd == "check-det") return each(W.determinants, "determinant", validate_determinant);
    if (cmd == "check-multidet") return each(W.determinants, "determinant", validate_multideterminant);
    if (cmd == "check-cubical-det") return each(W.determinants, "determinant", validate_cubical_determinant);
    if (cmd == "cross-check") return cross_check(W, o);
    if (cmd == "sum-dets") return sum_dets(W, o);
    if (cmd == "compose-det") return compose_det(W, o);
    if (cmd == "check-det-morphism")
        return for_each_selected(cmd, selected(W.morphisms, o, "morphism"), [&](const std::string& id) {
            const auto& m = W.morphisms.at(id);
            return check_det_morphism({W.determinants.at(m.from), W.determinants.at(m.to), m.theta});
        });
    if (cmd == "check-factorization")
        return for_each_selected(cmd, selected(W.factorizations, o, "factorization"), [&](const std::string& id) {
            const auto& f = W.factorizations.at(id);
            return check_universal_factorization(W.determinants.at(f.universal), W.determinants.at(f.det),
                                                 W.picard_functors.at(f.functor), f.alpha);
        });
    if (cmd == "validate-catring") return validate_catring(W, o);
    if (cmd == "k0-ring") return k0_ring(W, o);
    throw Error("UnknownCommand", cmd);
}

inline void print_text(std::ostream& out, const Report& r, std::optional<double> seconds) {
    out << r.command() << ": " << to_string(r.status()) << "\n";
    std::size_t w = 5;
    for (const auto& [k, _] : r.tallies()) w = std::max(w, k.size());
    if (!r.tallies().empty())
        out << "  " << std::left << std::setw(static_cast<int>(w)) << "check" << "  evaluated  failed  untestable\n";
    for (const auto& [k, t] : r.tallies())
        out << "  " << std::left << std::setw(static_cast<int>(w)) << k << std::right << "  " << std::setw(9) << t.total
            << "  " << std::setw(6) << t.failed << "  " << std::setw(10) << t.skipped << "\n";
    for (const auto& it : r.sorted_items()) {
        out << "  " << to_string(it.verdict) << " " << it.check;
        if (!it.location.empty()) out << " @ " << it.location;
        if (!it.detail.empty()) out << ": " << it.detail;
        out << "\n";
    }
    for (const auto& [k, v] : r.extra()) out << "  " << k << " = " << v << "\n";
    if (seconds) out << "  time " << std::fixed << std::setprecision(3) << *seconds << " s\n";
}

inline int emit(std::ostream& out, const Report& r, const CliOptions& o, double seconds) {
    if (o.format == "json") {
        auto j = report_json(r);
        if (o.timing) j["seconds"] = seconds;
        out << j.dump(2) << "\n";
    } else {
        print_text(out, r, o.timing ? std::optional<double>(seconds) : std::nullopt);
    }
    return exit_code(r);
}

inline int selftest(std::ostream& out, const CliOptions& o) {
    AcceptanceOptions a;
    a.seed = o.seed;
    a.only.insert(o.only.begin(), o.only.end());
    auto results = run_acceptance(a);
    bool all = std::all_of(results.begin(), results.end(), [](const auto& c) { return c.pass(); });
    if (o.format == "json") {
        out << acceptance_json(results, o.seed, o.timing).dump(2) << "\n";
    } else {
        for (const auto& c : results) {
            out << (c.pass() ? "PASS" : "FAIL") << " " << c.number << " " << c.title;
            if (o.timing) out << " (" << std::fixed << std::setprecision(1) << c.seconds << " s)";
            out << "\n";
            if (!c.pass())
                for (const auto& it : c.report.sorted_items())
                    if (it.verdict == Verdict::fail) out << "    " << it.check << " @ " << it.location << " " << it.detail << "\n";
        }
    }
    return all ? 0 : 1;
}

} // namespace cli

/** Entry point; returns the process exit code. */
inline int run_cli(int argc, const char* const* argv, std::ostream& out = std::cout, std::ostream& err = std::cerr) {
    CliOptions o;
    CLI::App app{"Checks determinant functors on finite presentations of triangulated categories", "multidet"};
    app.require_subcommand(1);
    app.fallthrough();
    app.add_option("-i,--input", o.inputs, "workspace JSON file (repeatable)");
    app.add_option("--id", o.ids, "entry to check (repeatable; default: all of the relevant kind)");
    app.add_option("--format", o.format, "text or json")->check(CLI::IsMember({"text", "json"}));
    app.add_option("--seed", o.seed, "seed for sampled and randomized checks");
    app.add_flag("--timing", o.timing, "report wall time");
    for (const auto& [c, help] : cli_command_table()) {
        auto* sub = app.add_subcommand(c, help);
        if (c == "qhomology" || c == "check-cubical-relations")
            sub->add_option("--group", o.group, "finite abelian group, e.g. Z/2+Z/4");
        if (c == "qhomology") sub->add_option("--max-level", o.max_level, "highest homology degree");
        if (c == "check-cubical-relations") {
            sub->add_option("--max-dim", o.max_dim, "highest cube dimension");
            sub->add_option("--samples", o.samples, "sampled cubes when enumeration is not possible");
        }
        if (c == "check-verdier") sub->add_option("--nine", o.nine, "single nine-diagram id");
        if (c == "oct-to-2cube") sub->add_option("--octahedron", o.octahedron, "octahedron id")->required();
        if (c == "compose-det" || c == "k0-ring") sub->add_option("--functor", o.functor, "triangulated functor id");
        if (c == "compose-det") sub->add_option("--det", o.det, "determinant on the functor's target (default euler)");
        if (c == "k0-ring")
            sub->add_option("--battery-total", o.battery_total, "battery bound for the generated tensor");
        if (c == "cross-check") sub->add_option("--random", o.random, "also compare verdicts on random instances");
        if (c == "sum-dets" || c == "emit-workspace") sub->add_option("-o,--output", o.output, "write JSON here");
        if (c == "selftest") sub->add_option("--only", o.only, "criterion numbers to run");
    }
    // unknown commands get their own error kind rather than a usage error
    for (int k = 1; k < argc; ++k) {
        std::string a = argv[k];
        if (a.empty() || a[0] == '-') {
            static const std::set<std::string> valued{"-i", "--input", "--id", "--format", "--seed"};
            if (valued.contains(a)) ++k;
            continue;
        }
        if (!is_command(a)) {
            err << "UnknownCommand: " << a << "\n";
            return 2;
        }
        break;
    }
    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e, out, err);
        return code == 0 ? 0 : 2;
    }
    const std::string cmd = app.get_subcommands().front()->get_name();
    auto t0 = std::chrono::steady_clock::now();
    Report r(cmd);
    try {
        if (cmd == "selftest") return cli::selftest(out, o);
        Workspace W = load_workspace(o.inputs);
        if (cmd == "emit-workspace") {
            auto doc = emit_workspace(W);
            if (o.output.empty()) out << doc.dump(2) << "\n";
            else cli::write_output(o.output, doc);
            return 0;
        }
        r = cli::dispatch(cmd, W, o);
        r.set_command(cmd);
    } catch (const Error& e) {
        r = Report(cmd);
        r.set_error(e.kind(), e.message());
    }
    double s = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return cli::emit(out, r, o, s);
}

} // namespace multidet
