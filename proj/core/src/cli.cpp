#include "kreeb/cli.hpp"

#include <fstream>
#include <random>
#include <sstream>

#include <json.hpp>

#include "kreeb/errors.hpp"

namespace kreeb {

namespace {

using ordered_json = nlohmann::ordered_json;

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw SchemaError("cannot read file '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::string eta_string(const std::optional<EtaLocator>& eta) {
    if (!eta) return "none";
    std::string kind = eta->kind == EtaLocator::Kind::DirectZ ? "Z" : "wreath k";
    if (eta->factor_index < 0) return kind + " (whole expression)";
    return kind + " (factor " + std::to_string(eta->factor_index) + ")";
}

std::string h1_string(const Homology& h) {
    if (h.rank == 0 && h.torsion.empty()) return "0";
    std::string s;
    if (h.rank > 0) s = h.rank == 1 ? "Z" : "Z^" + std::to_string(h.rank);
    for (const auto& d : h.torsion) {
        if (!s.empty()) s += " + ";
        s += "Z/" + d.get_str();
    }
    return s;
}

std::string torus_name(std::size_t rank) {
    if (rank == 0) return "point";
    if (rank == 1) return "S^1";
    return "T^" + std::to_string(rank);
}

std::string histogram_string(const std::map<long long, long long>& hist) {
    std::string s = "{";
    bool first = true;
    for (const auto& [ord, count] : hist) {
        if (!first) s += ", ";
        first = false;
        s += std::to_string(ord) + ":" + std::to_string(count);
    }
    return s + "}";
}

std::string factors_string(const std::vector<long long>& fs) {
    std::string s = "[";
    for (std::size_t i = 0; i < fs.size(); ++i) {
        if (i) s += ",";
        s += std::to_string(fs[i]);
    }
    return s + "]";
}

Report build_report(const std::string& command, const ProblemInstance& instance,
                    const AnalysisResult& analysis) {
    Report r;
    r.command = command;
    r.surface = instance.surface;
    r.warnings = analysis.warnings;
    r.generic = analysis.generic;
    for (std::size_t i = 0; i < analysis.pieces.size(); ++i) {
        const PieceResult& piece = analysis.pieces[i];
        Report::Piece p;
        p.index = i;
        p.kind = instance.pieces[i].kind == PieceKind::Disk ? "disk" : "cylinder";
        p.vertices = instance.pieces[i].vertex_count();
        p.source = show(piece.source);
        p.target = show(piece.target);
        p.target_order = order(piece.target).get_str();
        p.p = piece.p;
        p.eta = eta_string(piece.eta);
        r.pieces.push_back(std::move(p));
    }

    r.has_global = true;
    r.source = show(analysis.source);
    r.target = show(analysis.target);
    r.target_name = friendly_name(analysis.target);
    r.target_order = order(analysis.target).get_str();
    r.p = analysis.p;
    if (!analysis.certification_skipped) {
        for (const auto& gen : generating_set(analysis.target))
            r.generators.push_back(Report::Generator{
                show_element(gen), show(analysis.action.evaluate(gen))});
        r.freeness_status = "certified";
        r.free = analysis.freeness.free;
        r.elements_checked = analysis.freeness.items.size();
        r.is_torus = analysis.is_torus;
    } else {
        r.freeness_status = "skipped";
    }
    r.pi1 = analysis.pi1;
    r.h1 = analysis.h1;
    r.description = analysis.verdict;
    if (analysis.certification_skipped)
        r.display = analysis.verdict + " (uncertified: order exceeds cap)";
    else if (analysis.is_torus && analysis.h1)
        r.display = analysis.verdict + " ~ " + torus_name(analysis.h1->rank);
    else
        r.display = analysis.verdict;
    return r;
}

void add_oracle_section(Report& report, std::size_t piece_index,
                        const OracleReport& oracle) {
    Report::OracleSection s;
    s.piece = piece_index;
    s.count = oracle.automorphism_count.get_str();
    s.histogram = histogram_string(oracle.histogram);
    s.abelianization = factors_string(oracle.abelianization);
    s.match = oracle.match;
    s.mismatches = oracle.mismatches;
    report.oracle.push_back(std::move(s));
}

// --- rendering ---------------------------------------------------------------

std::string surface_string(const SurfaceDescriptor& s) {
    std::string out = "genus " + std::to_string(s.genus) + ", boundary " +
                      std::to_string(s.boundary) + ", ";
    out += s.orientable ? "orientable" : "non-orientable";
    out += ", target ";
    out += s.target == TargetSpace::Line ? "line" : "circle";
    return out;
}

}  // namespace

std::string render_text(const Report& report) {
    std::ostringstream out;
    out << "kreeb " << report.command << " report\n";
    out << "surface: " << surface_string(report.surface) << "\n";
    for (const auto& w : report.warnings) out << "warning: " << w << "\n";
    out << "generic: " << (report.generic ? "yes" : "no") << "\n";
    for (const auto& p : report.pieces) {
        out << "\npiece " << p.index << ": " << p.kind << ", " << p.vertices
            << " vertices\n";
        out << "  source:  " << p.source << "\n";
        out << "  target:  " << p.target << "  (order " << p.target_order << ")\n";
        out << "  p:       " << p.p << "\n";
        out << "  eta:     " << p.eta << "\n";
    }
    if (report.has_global) {
        out << "\nglobal result\n";
        out << "  source:  " << report.source << "\n";
        out << "  G:       " << report.target << "  =  " << report.target_name
            << "  (order " << report.target_order << ")\n";
        out << "  p:       " << report.p << "\n";
        if (!report.generators.empty()) {
            out << "  action generators:\n";
            for (const auto& g : report.generators)
                out << "    " << g.element << "  ->  " << g.map << "\n";
        }
        if (report.freeness_status == "certified")
            out << "  freeness: certified " << (report.free ? "free" : "NOT FREE")
                << " (" << report.elements_checked
                << " non-identity elements checked)\n";
        else
            out << "  freeness: skipped (order exceeds cap)\n";
        if (report.pi1)
            out << "  pi1(T^p/G): lattice rank " << report.pi1->lattice_rank
                << ", deck group order " << report.pi1->deck_order.get_str() << "\n";
        if (report.h1) out << "  H1: " << h1_string(*report.h1) << "\n";
        out << "  homotopy type: " << report.display << "\n";
    }
    if (report.verification) {
        out << "\nverification: " << (report.verification->passed ? "PASS" : "FAIL")
            << "\n";
        for (const auto& c : report.verification->checks) out << "  " << c << "\n";
        for (const auto& f : report.verification->failures)
            out << "  failure: " << f << "\n";
    }
    for (const auto& s : report.oracle) {
        out << "\noracle piece " << s.piece << ": "
            << (s.match ? "MATCH" : "MISMATCH") << "\n";
        out << "  automorphisms: " << s.count << "\n";
        out << "  order histogram: " << s.histogram << "\n";
        out << "  abelianization: " << s.abelianization << "\n";
        for (const auto& m : s.mismatches) out << "  mismatch: " << m << "\n";
    }
    return out.str();
}

std::string render_machine(const Report& report) {
    ordered_json doc;
    doc["schema_version"] = 1;
    doc["command"] = report.command;
    {
        ordered_json s;
        s["genus"] = report.surface.genus;
        s["boundary"] = report.surface.boundary;
        s["orientable"] = report.surface.orientable;
        s["target"] = report.surface.target == TargetSpace::Line ? "line" : "circle";
        doc["surface"] = std::move(s);
    }
    doc["warnings"] = report.warnings;
    doc["generic"] = report.generic;
    {
        ordered_json pieces = ordered_json::array();
        for (const auto& p : report.pieces) {
            ordered_json jp;
            jp["index"] = p.index;
            jp["kind"] = p.kind;
            jp["vertices"] = p.vertices;
            jp["source"] = p.source;
            jp["target"] = p.target;
            jp["target_order"] = p.target_order;
            jp["p"] = p.p;
            jp["eta"] = p.eta;
            pieces.push_back(std::move(jp));
        }
        doc["pieces"] = std::move(pieces);
    }
    if (report.has_global) {
        ordered_json g;
        g["source"] = report.source;
        g["target"] = report.target;
        g["target_name"] = report.target_name;
        g["target_order"] = report.target_order;
        g["p"] = report.p;
        ordered_json gens = ordered_json::array();
        for (const auto& gen : report.generators) {
            ordered_json jg;
            jg["element"] = gen.element;
            jg["map"] = gen.map;
            gens.push_back(std::move(jg));
        }
        g["generators"] = std::move(gens);
        {
            ordered_json f;
            f["status"] = report.freeness_status;
            if (report.freeness_status == "certified") {
                f["free"] = report.free;
                f["elements_checked"] = report.elements_checked;
            }
            g["freeness"] = std::move(f);
        }
        if (report.pi1) {
            ordered_json p1;
            p1["lattice_rank"] = report.pi1->lattice_rank;
            p1["deck_order"] = report.pi1->deck_order.get_str();
            g["pi1"] = std::move(p1);
        } else {
            g["pi1"] = nullptr;
        }
        if (report.h1) {
            ordered_json h;
            h["rank"] = report.h1->rank;
            ordered_json tor = ordered_json::array();
            for (const auto& d : report.h1->torsion) tor.push_back(d.get_str());
            h["torsion"] = std::move(tor);
            g["h1"] = std::move(h);
        } else {
            g["h1"] = nullptr;
        }
        {
            ordered_json v;
            v["is_torus"] = report.freeness_status == "certified" ? ordered_json(report.is_torus)
                                                                  : ordered_json(nullptr);
            v["description"] = report.description;
            v["display"] = report.display;
            g["verdict"] = std::move(v);
        }
        doc["global"] = std::move(g);
    }
    if (report.verification) {
        ordered_json v;
        v["passed"] = report.verification->passed;
        v["checks"] = report.verification->checks;
        v["failures"] = report.verification->failures;
        doc["verification"] = std::move(v);
    }
    if (!report.oracle.empty()) {
        ordered_json sections = ordered_json::array();
        for (const auto& s : report.oracle) {
            ordered_json js;
            js["piece"] = s.piece;
            js["automorphisms"] = s.count;
            js["order_histogram"] = s.histogram;
            js["abelianization"] = s.abelianization;
            js["match"] = s.match;
            js["mismatches"] = s.mismatches;
            sections.push_back(std::move(js));
        }
        doc["oracle"] = std::move(sections);
    }
    return doc.dump(2) + "\n";
}

// --- verification suite --------------------------------------------------------

namespace {

struct MapProvider {
    bool fault_trans = false;

    AffineTorusMap get(const TorusAction& action, const Element& g) const {
        AffineTorusMap m = action.evaluate(g);
        if (fault_trans && m.dim() > 0) m.trans[0] = mod1(m.trans[0] + make_rat(1, 7));
        return m;
    }
};

struct VerifyState {
    std::vector<std::string> checks;
    std::vector<std::string> failures;

    void pass(const std::string& line) { checks.push_back(line + ": PASS"); }
    void fail(const std::string& line, const std::string& detail) {
        checks.push_back(line + ": FAIL");
        failures.push_back(detail);
    }
    void outcome(bool ok, const std::string& line, const std::string& detail) {
        if (ok)
            pass(line);
        else
            fail(line, detail);
    }
};

void verify_action_axioms(VerifyState& state, const TorusAction& action,
                          const MapProvider& provider, const Caps& caps,
                          const std::string& label) {
    const FiniteExpr& group = action.group();
    std::vector<Element> elems = enumerate(group, caps);
    bool ok = true;
    std::string detail;
    AffineTorusMap id_map = provider.get(action, identity(group));
    if (!id_map.is_identity()) {
        ok = false;
        detail = label + ": evaluate(identity) is " + show(id_map);
    }
    std::size_t pairs = 0;
    for (const auto& g : elems) {
        if (!ok) break;
        AffineTorusMap mg = provider.get(action, g);
        for (const auto& h : elems) {
            AffineTorusMap composed = compose(mg, provider.get(action, h));
            AffineTorusMap direct = provider.get(action, mul(group, g, h));
            ++pairs;
            if (!(composed == direct)) {
                ok = false;
                detail = label + ": evaluate(g)evaluate(h) != evaluate(gh) for g = " +
                         show_element(g) + ", h = " + show_element(h);
                break;
            }
        }
    }
    state.outcome(ok, label + ": action axioms (" + std::to_string(pairs) + " pairs)",
                  detail);
}

void verify_structural_form(VerifyState& state, const TorusAction& action,
                            const MapProvider& provider, const Caps& caps,
                            std::uint64_t seed, const std::string& label) {
    std::mt19937_64 rng(seed ^ 0x9e3779b97f4a7c15ull);
    std::vector<Element> elems = enumerate(action.group(), caps);
    bool ok = true;
    std::string detail;
    std::size_t evals = 0;
    for (const auto& g : elems) {
        AffineTorusMap m = provider.get(action, g);
        for (int trial = 0; trial < 4 && ok; ++trial) {
            std::vector<Rat> coords;
            for (std::size_t i = 0; i < action.dimension(); ++i)
                coords.push_back(make_rat(static_cast<long long>(rng() % 24), 24));
            TorusPoint x = TorusPoint::reduced(std::move(coords));
            ++evals;
            if (!(apply(m, x) == action.apply_direct(g, x))) {
                ok = false;
                detail = label + ": composed map and direct application disagree for " +
                         show_element(g) + " at " + show(x);
            }
        }
        if (!ok) break;
    }
    state.outcome(ok, label + ": permutation-plus-translation form (" +
                          std::to_string(evals) + " point evaluations)",
                  detail);
}

void verify_freeness(VerifyState& state, const TorusAction& action,
                     const MapProvider& provider, const Caps& caps,
                     const std::string& label) {
    std::vector<Element> elems = enumerate(action.group(), caps);
    const Element e = identity(action.group());
    bool ok = true;
    std::string detail;
    std::size_t checked = 0, grid_skipped = 0;
    for (const auto& g : elems) {
        if (g == e) continue;
        AffineTorusMap m = provider.get(action, g);
        auto cycle_hit = fixed_point(m);
        std::optional<TorusPoint> grid_hit;
        bool have_grid = true;
        try {
            grid_hit = grid_fixed_point_scan(m, caps);
        } catch (const CapExceeded&) {
            have_grid = false;
            ++grid_skipped;
        }
        ++checked;
        if (cycle_hit) {
            ok = false;
            detail = label + ": element " + show_element(g) + " fixes " +
                     show(*cycle_hit);
            break;
        }
        if (have_grid && grid_hit) {
            ok = false;
            detail = label + ": grid scan found fixed point " + show(*grid_hit) +
                     " for " + show_element(g) + " but the cycle criterion missed it";
            break;
        }
    }
    std::string line = label + ": freeness, cycle criterion + grid scan (" +
                       std::to_string(checked) + " elements";
    if (grid_skipped) line += ", " + std::to_string(grid_skipped) + " grids over cap";
    line += ")";
    state.outcome(ok, line, detail);
}

std::vector<Element> piece_source_samples(const PieceResult& piece, const Caps& caps) {
    std::vector<Element> lifts;
    for (const auto& t : enumerate(piece.target, caps))
        lifts.push_back(piece.hom.lift(t));
    if (!piece.eta) return lifts;
    Element ghat = eta_generator(piece);
    Element ghat_inv = inverse(piece.source, ghat);
    std::vector<Element> out;
    for (const auto& base : lifts) {
        out.push_back(base);
        out.push_back(mul(piece.source, base, ghat));
        out.push_back(mul(piece.source, mul(piece.source, base, ghat), ghat));
        out.push_back(mul(piece.source, base, ghat_inv));
    }
    return out;
}

void verify_lambda(VerifyState& state, const PieceResult& piece, const Caps& caps,
                   std::size_t index) {
    const std::string label = "piece " + std::to_string(index);
    std::vector<Element> targets = enumerate(piece.target, caps);
    bool ok = true;
    std::string detail;
    for (const auto& t : targets)
        if (!(piece.hom.eval(piece.hom.lift(t)) == t)) {
            ok = false;
            detail = label + ": section failed at " + show_element(t);
            break;
        }
    state.outcome(ok, label + ": lambda surjectivity via section (" +
                          std::to_string(targets.size()) + " elements)",
                  detail);

    std::vector<Element> samples = piece_source_samples(piece, caps);
    std::size_t stride = 1;
    while (samples.size() * samples.size() / (stride * stride) > 20000) ++stride;
    ok = true;
    std::size_t pairs = 0;
    for (std::size_t i = 0; i < samples.size() && ok; i += stride)
        for (std::size_t j = 0; j < samples.size(); j += stride) {
            Element product = mul(piece.source, samples[i], samples[j]);
            ++pairs;
            if (!(piece.hom.eval(product) ==
                  mul(piece.target, piece.hom.eval(samples[i]),
                      piece.hom.eval(samples[j])))) {
                ok = false;
                detail = label + ": lambda(ab) != lambda(a)lambda(b) for a = " +
                         show_element(samples[i]) + ", b = " + show_element(samples[j]);
                break;
            }
        }
    state.outcome(ok, label + ": lambda homomorphism (" + std::to_string(pairs) +
                          " pairs)",
                  detail);
}

void verify_eta(VerifyState& state, const PieceResult& piece, const Caps& caps,
                std::size_t index) {
    if (!piece.eta) return;
    const std::string label = "piece " + std::to_string(index);
    bool ok = true;
    std::string detail;
    if (eta_eval(piece, identity(piece.source)) != 0) {
        ok = false;
        detail = label + ": eta(identity) != 0";
    }
    Element ghat = eta_generator(piece);
    if (ok && eta_eval(piece, ghat) != 1) {
        ok = false;
        detail = label + ": eta(ghat) != 1";
    }
    if (ok) {
        std::vector<Element> samples = piece_source_samples(piece, caps);
        for (std::size_t i = 0; i < samples.size() && ok; ++i)
            for (std::size_t j = 0; j < samples.size(); ++j) {
                long long sum = eta_eval(piece, samples[i]) + eta_eval(piece, samples[j]);
                if (eta_eval(piece, mul(piece.source, samples[i], samples[j])) != sum) {
                    ok = false;
                    detail = label + ": eta is not additive at " +
                             show_element(samples[i]) + ", " + show_element(samples[j]);
                    break;
                }
            }
    }
    state.outcome(ok, label + ": eta (identity, generator witness, additivity)", detail);
}

void verify_recursion_arithmetic(VerifyState& state, const AnalysisResult& analysis,
                                 const Caps& caps) {
    bool ok = true;
    std::string detail;
    std::size_t sum = 0;
    for (const auto& piece : analysis.pieces) {
        sum += piece.p;
        if (piece.p != piece.action.dimension()) {
            ok = false;
            detail = "piece p != action dimension";
        }
        Int expected = order(piece.target);
        if (Int(static_cast<unsigned long>(enumerate(piece.target, caps).size())) !=
            expected) {
            ok = false;
            detail = "piece |G| != enumeration count";
        }
    }
    if (sum != analysis.p || analysis.p != analysis.action.dimension()) {
        ok = false;
        detail = "global p != sum of piece p or != action dimension";
    }
    Int prod = 1;
    for (const auto& piece : analysis.pieces) prod *= order(piece.target);
    if (prod != order(analysis.target)) {
        ok = false;
        detail = "global |G| != product of piece orders";
    }
    state.outcome(ok, "recursion arithmetic (p sums, order products)", detail);
}

}  // namespace

// --- commands -------------------------------------------------------------------

namespace {

struct Loaded {
    ProblemInstance instance;
    AnalysisResult analysis;
};

Loaded load_and_analyze(const std::string& path, const CliOptions& options) {
    Loaded loaded;
    loaded.instance = parse_instance(read_file(path));
    loaded.analysis = analyze_instance(loaded.instance, options.caps());
    return loaded;
}

std::string render(const Report& report, const CliOptions& options) {
    return options.format == "machine" ? render_machine(report) : render_text(report);
}

template <typename Fn>
CmdResult guarded(Fn&& fn) {
    try {
        return fn();
    } catch (const SchemaError& e) {
        return {kExitValidation, "", std::string("schema error: ") + e.what()};
    } catch (const InvariantViolation& e) {
        return {kExitValidation, "", std::string("invariant violation: ") + e.what()};
    } catch (const UnsupportedSurface& e) {
        return {kExitUnsupportedSurface, "",
                std::string("unsupported surface: ") + e.what()};
    } catch (const CapExceeded& e) {
        return {kExitCapExceeded, "", std::string("cap exceeded: ") + e.what()};
    } catch (const Error& e) {
        return {kExitInternal, "", std::string("error: ") + e.what()};
    }
}

}  // namespace

CmdResult run_analyze(const std::string& path, const CliOptions& options) {
    return guarded([&]() -> CmdResult {
        Loaded loaded = load_and_analyze(path, options);
        Report report = build_report("analyze", loaded.instance, loaded.analysis);
        int code = loaded.analysis.certification_skipped ? kExitCapExceeded : kExitOk;
        std::string diag = loaded.analysis.certification_skipped
                               ? "certification skipped: group order exceeds cap"
                               : "";
        return {code, render(report, options), diag};
    });
}

CmdResult run_verify(const std::string& path, const CliOptions& options) {
    return guarded([&]() -> CmdResult {
        Loaded loaded = load_and_analyze(path, options);
        if (loaded.analysis.certification_skipped)
            return {kExitCapExceeded, "",
                    "cap exceeded: group too large for verification"};
        const Caps caps = options.caps();
        Report report = build_report("verify", loaded.instance, loaded.analysis);

        MapProvider provider;
        provider.fault_trans = options.inject_fault == "trans";

        VerifyState state;
        verify_action_axioms(state, loaded.analysis.action, provider, caps, "global");
        verify_structural_form(state, loaded.analysis.action, provider, caps,
                               options.seed, "global");
        verify_freeness(state, loaded.analysis.action, provider, caps, "global");
        for (std::size_t i = 0; i < loaded.analysis.pieces.size(); ++i) {
            const PieceResult& piece = loaded.analysis.pieces[i];
            verify_action_axioms(state, piece.action, provider, caps,
                                 "piece " + std::to_string(i));
            verify_lambda(state, piece, caps, i);
            verify_eta(state, piece, caps, i);
        }
        verify_recursion_arithmetic(state, loaded.analysis, caps);

        if (!options.skip_oracle) {
            for (std::size_t i = 0; i < loaded.analysis.pieces.size(); ++i) {
                PieceResult piece = loaded.analysis.pieces[i];
                if (i == 0 && options.inject_fault == "target")
                    piece.target = FiniteExpr::cyclic(3);
                OracleReport oracle = compare(piece, loaded.instance.pieces[i], caps);
                add_oracle_section(report, i, oracle);
                if (!oracle.match)
                    state.fail("piece " + std::to_string(i) + ": oracle comparison",
                               "oracle mismatch on piece " + std::to_string(i));
                else
                    state.pass("piece " + std::to_string(i) + ": oracle comparison");
            }
        }

        Report::Verification verification;
        verification.passed = state.failures.empty();
        verification.checks = std::move(state.checks);
        verification.failures = std::move(state.failures);
        report.verification = std::move(verification);

        int code = report.verification->passed ? kExitOk : kExitCheckFailed;
        std::string diag =
            report.verification->passed ? "" : "verification failed";
        return {code, render(report, options), diag};
    });
}

CmdResult run_oracle(const std::string& path, const CliOptions& options) {
    return guarded([&]() -> CmdResult {
        const Caps caps = options.caps();
        ProblemInstance instance = parse_instance(read_file(path));
        Report report;
        report.command = "oracle";
        report.surface = instance.surface;
        report.warnings = instance.warnings;
        report.generic = generic_check(instance);

        bool all_match = true;
        for (std::size_t i = 0; i < instance.pieces.size(); ++i) {
            PieceResult piece = analyze_piece(instance.pieces[i], caps);
            Report::Piece p;
            p.index = i;
            p.kind = instance.pieces[i].kind == PieceKind::Disk ? "disk" : "cylinder";
            p.vertices = instance.pieces[i].vertex_count();
            p.source = show(piece.source);
            p.target = show(piece.target);
            p.target_order = order(piece.target).get_str();
            p.p = piece.p;
            p.eta = eta_string(piece.eta);
            report.pieces.push_back(std::move(p));

            if (i == 0 && options.inject_fault == "target")
                piece.target = FiniteExpr::cyclic(3);
            OracleReport oracle = compare(piece, instance.pieces[i], caps);
            all_match = all_match && oracle.match;
            add_oracle_section(report, i, oracle);
        }
        int code = all_match ? kExitOk : kExitCheckFailed;
        return {code, render(report, options), all_match ? "" : "oracle mismatch"};
    });
}

}  // namespace kreeb
