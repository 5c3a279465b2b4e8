#include "cli.hpp"

#include <CLI11.hpp>

#include <cmath>
#include <cstdint>
#include <fstream>
#include <iomanip>
#include <map>
#include <memory>
#include <optional>
#include <random>
#include <sstream>

#include "qknots/braid.hpp"
#include "qknots/bracket.hpp"
#include "qknots/diagram.hpp"
#include "qknots/entangle.hpp"
#include "qknots/errors.hpp"
#include "qknots/link_pattern.hpp"
#include "qknots/moves.hpp"
#include "qknots/pd_io.hpp"
#include "qknots/quantum_knot.hpp"
#include "qknots/tensor_net.hpp"
#include "qknots/yang_baxter.hpp"

namespace qknots::cli {

namespace {

using nlohmann::json;

constexpr const char* kDiagramGrammar = R"(Diagram files (.pd):
  diagram  := { item }
  item     := "X[" a "," b "," c "," d "]"   crossing; slot 0 = incoming under-strand, counterclockwise
            | "O[" k "]"                     k crossing-free circles
            | "orient:" { "+a" | "-a" }      reverse (-) the component through arc a
            | "#" ...                        comment to end of line
Braid files (.braid), also accepted wherever a diagram is expected:
  "n=" k ":" { "s" i [ "^-1" ] }             closure of the braid on k strands)";

constexpr const char* kStateGrammar = R"(State files (.state):
  line := bits re [im]      amplitude of basis state |bits>, qubit 0 = leftmost bit
        | "ghz" n           the n-qubit GHZ state (only entry)
        | "#" ...           comment
Unlisted basis states have amplitude 0. Matrices: "a,b;c,d", entries like 1, -0.5, 2i, 0.5-0.5i.)";

constexpr const char* kLinkGrammar = R"(Probabilistic links (.problink): a diagram file plus
  "influence:" { c ":" x }  cutting component c flips crossing x with probability 1/2
Crossing x must not involve component c. Ids are 0-based.)";

constexpr const char* kNetGrammar = R"(Network files (JSON):
  {"nodes": [{"id": 0, "kind": "tensor", "shape": [2, 2], "dirs": "oi",
              "entries": [[re, im], ...]}],           row-major over ports
   "edges": [[[node, port], [node, port]], ...],
   "free_ends": [[node, port], ...]}
"dirs" marks each port out (o) or in (i); default: first half out. Every port is in
exactly one edge or free end. Commands that produce networks always write JSON.)";

struct Globals {
    std::string format = "text";
    std::string output;
    int crossing_cap = kDefaultCrossingCap;
    int flat_node_cap = kDefaultFlatNodeCap;
    int qubit_cap = kDefaultQubitCap;
    int component_cap = kDefaultComponentCap;
    std::size_t net_budget = kDefaultContractionBudget;
    int net_node_cap = kDefaultNodeCap;
    bool frontier = false;
    bool serial = false;
};

std::string fmt12(double v) {
    if (v == 0.0) v = 0.0;  // no "-0"
    std::ostringstream os;
    os << std::setprecision(12) << v;
    return os.str();
}

std::string fmtc(Complex z) {
    if (std::abs(z.imag()) < 5e-13 * std::max(1.0, std::abs(z.real()))) return fmt12(z.real());
    return fmt12(z.real()) + (z.imag() < 0 ? "-" : "+") + fmt12(std::abs(z.imag())) + "i";
}

json rounded(const json& j) {
    if (j.is_number_float()) {
        const double v = j.get<double>();
        if (!std::isfinite(v)) return j;
        const double r = std::stod(fmt12(v));
        return r == 0.0 ? json(0.0) : json(r);
    }
    if (j.is_array() || j.is_object()) {
        json c = j;
        for (auto& el : c) el = rounded(el);
        return c;
    }
    return j;
}

json cjson(Complex z) { return json{{"re", z.real()}, {"im", z.imag()}}; }

class Output {
public:
    Output(const Globals& g, std::ostream& out) : g_(g), out_(out) {}

    std::ostream& stream() {
        if (g_.output.empty()) return out_;
        if (!file_) {
            file_ = std::make_unique<std::ofstream>(g_.output);
            if (!*file_) throw InputError("cannot write output file '" + g_.output + "'");
        }
        return *file_;
    }

    /// Report: rounded JSON or the text form.
    void report(const json& j, const std::string& text) {
        if (g_.format == "json")
            stream() << rounded(j).dump(2) << "\n";
        else
            stream() << text << (text.empty() || text.back() != '\n' ? "\n" : "");
    }

    /// Data files (networks) keep full precision in every format.
    void data(const json& j) { stream() << j.dump(2) << "\n"; }

private:
    const Globals& g_;
    std::ostream& out_;
    std::unique_ptr<std::ofstream> file_;
};

std::string read_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw InputError("cannot open '" + path + "'");
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

template <class F>
auto in_file(const std::string& path, F&& f) {
    try {
        return f();
    } catch (const CapExceeded&) {
        throw;
    } catch (const InputError& e) {
        throw InputError(path + ": " + e.what());
    }
}

bool looks_like_braid(const std::string& text) {
    std::istringstream in(text);
    std::string line;
    while (std::getline(in, line)) {
        if (auto h = line.find('#'); h != std::string::npos) line.resize(h);
        const auto p = line.find_first_not_of(" \t\r");
        if (p == std::string::npos) continue;
        return line.compare(p, 2, "n=") == 0;
    }
    return false;
}

BraidWord load_braid(const std::string& path) {
    const std::string text = read_file(path);
    return in_file(path, [&] { return parse_braid(text); });
}

LinkDiagram load_link(const std::string& path) {
    const std::string text = read_file(path);
    return in_file(path, [&] { return looks_like_braid(text) ? braid_closure(parse_braid(text)) : parse_pd(text); });
}

PureState load_state(const std::string& path, int qubit_cap) {
    const std::string text = read_file(path);
    return in_file(path, [&] { return parse_state(text, qubit_cap); });
}

NetworkGraph load_network(const std::string& path) {
    const std::string text = read_file(path);
    return in_file(path, [&] {
        try {
            return json::parse(text).get<NetworkGraph>();
        } catch (const json::exception& e) {
            throw InputError(std::string("invalid network JSON: ") + e.what());
        }
    });
}

BracketOptions bracket_opts(const Globals& g) {
    BracketOptions o;
    o.crossing_cap = g.crossing_cap;
    o.parallel = !g.serial;
    o.frontier_fallback = g.frontier;
    return o;
}

PatternOptions pattern_opts(const Globals& g) {
    PatternOptions o;
    o.bracket = bracket_opts(g);
    o.component_cap = g.component_cap;
    return o;
}

ContractOptions contract_opts(const Globals& g) {
    ContractOptions o;
    o.budget = g.net_budget;
    o.node_cap = g.net_node_cap;
    o.parallel = !g.serial;
    return o;
}

QuantumKnot load_flat(const std::string& path, const Globals& g) {
    const FlatDiagram f = flatten(load_link(path));
    FlatOptions o;
    o.node_cap = g.flat_node_cap;
    o.parallel = !g.serial;
    o.bracket = bracket_opts(g);
    return from_flat_diagram(f, {}, o);
}

PureState normalized_for_pattern(const PureState& s) { return s.is_normalized() ? s : s.normalized(); }

std::string yes_no(bool b) { return b ? "yes" : "no"; }

std::string pattern_text(const std::vector<PatternRow>& rows) {
    std::ostringstream os;
    for (const auto& r : rows)
        for (const auto& b : r.branches) {
            os << "qubit " << r.qubit << "  outcome " << b.outcome << "  p=" << fmt12(b.probability) << "  ";
            os << (b.defined ? (b.entangled ? "entangled" : "unentangled") : "undefined");
            if (b.near_threshold) os << "  (near rank threshold)";
            os << "\n";
        }
    return os.str();
}

std::string match_text(const MatchReport& r) {
    std::ostringstream os;
    for (const auto& e : r.entries)
        os << "component " << e.component << " <-> qubit " << e.qubit << "  P(linked)=" << fmt12(e.link_linked)
           << "  P(entangled)=" << fmt12(e.state_entangled) << "  " << (e.match ? "match" : "MISMATCH") << "\n";
    os << "full match: " << yes_no(r.full_match) << "\n";
    os << "note: " << r.caveat << "\n";
    return os.str();
}

std::string choice_text(const std::vector<std::uint8_t>& choices) {
    std::string s;
    for (auto c : choices) s += c ? 'B' : 'A';
    return s;
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    Globals g;
    CLI::App app{"Quantum knots, link patterns and tensor networks", "qknots"};
    app.fallthrough();
    app.require_subcommand(1);
    app.set_config("--config", "", "INI/TOML file with option defaults (command-line flags override)");
    app.add_option("--format", g.format, "Report format")->check(CLI::IsMember({"text", "json"}))->capture_default_str();
    app.add_option("-o,--output", g.output, "Write the report to this file instead of standard output");
    app.add_option("--crossing-cap", g.crossing_cap, "Largest diagram the bracket state sum accepts")
        ->envname("QKNOTS_CROSSING_CAP")
        ->check(CLI::Range(1, kMaxStateSumCrossings))
        ->capture_default_str();
    app.add_option("--flat-node-cap", g.flat_node_cap, "Largest flat diagram resolved into a quantum knot")
        ->envname("QKNOTS_FLAT_NODE_CAP")
        ->check(CLI::Range(1, 24))
        ->capture_default_str();
    app.add_option("--qubit-cap", g.qubit_cap, "Largest state accepted")
        ->envname("QKNOTS_QUBIT_CAP")
        ->check(CLI::Range(1, 30))
        ->capture_default_str();
    app.add_option("--component-cap", g.component_cap, "Most components for link patterns")
        ->envname("QKNOTS_COMPONENT_CAP")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    app.add_option("--net-budget", g.net_budget, "Largest intermediate tensor (entries) during contraction")
        ->envname("QKNOTS_NET_BUDGET")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    app.add_option("--net-node-cap", g.net_node_cap, "Most nodes in a contracted network")
        ->envname("QKNOTS_NET_NODE_CAP")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    app.add_flag("--frontier", g.frontier, "Use the frontier bracket engine above the crossing cap")
        ->envname("QKNOTS_FRONTIER");
    app.add_flag("--serial", g.serial, "Run the serial reference kernels");
    app.footer(std::string("Exit status: 0 ok, 2 input error, 3 cap exceeded, 1 internal error.\n"
                           "Environment: QKNOTS_CROSSING_CAP QKNOTS_FLAT_NODE_CAP QKNOTS_QUBIT_CAP "
                           "QKNOTS_COMPONENT_CAP QKNOTS_NET_BUDGET QKNOTS_NET_NODE_CAP QKNOTS_FRONTIER\n\n") +
               kDiagramGrammar + "\n\n" + kStateGrammar + "\n\n" + kLinkGrammar + "\n\n" + kNetGrammar);

    Output o(g, out);
    int status = kExitOk;

    // ---- knot
    auto* knot = app.add_subcommand("knot", "Classical diagrams and the bracket")->require_subcommand(1);
    knot->footer(kDiagramGrammar);
    std::string file;
    std::optional<int> apply_site;

    auto* kparse = knot->add_subcommand("parse", "Parse a diagram or braid and describe it");
    kparse->add_option("file", file, "Diagram or braid file")->required();
    kparse->callback([&] {
        const LinkDiagram d = load_link(file);
        json j;
        j["diagram"] = d;
        j["pd"] = to_pd_text(d);
        j["crossings"] = d.crossing_count();
        j["components"] = d.component_count();
        j["writhe"] = writhe(d);
        j["linking_matrix"] = linking_matrix(d);
        std::ostringstream t;
        t << "crossings: " << d.crossing_count() << "\ncomponents: " << d.component_count()
          << "\nwrithe: " << writhe(d) << "\npd: " << to_pd_text(d) << "\n";
        if (d.component_count() > 1) {
            t << "linking matrix:\n";
            for (const auto& row : linking_matrix(d)) {
                for (std::size_t k = 0; k < row.size(); ++k) t << (k ? " " : "  ") << row[k];
                t << "\n";
            }
        }
        o.report(j, t.str());
    });

    auto* kbracket = knot->add_subcommand("bracket", "Kauffman bracket (unknot = 1)");
    kbracket->add_option("file", file, "Diagram or braid file")->required();
    kbracket->callback([&] {
        const LinkDiagram d = load_link(file);
        const LaurentPoly p = bracket(d, bracket_opts(g));
        o.report(json{{"bracket", p.to_string()}, {"terms", p}, {"crossings", d.crossing_count()}}, p.to_string());
    });

    auto* kjones = knot->add_subcommand("jones", "Writhe-normalized bracket and the Jones polynomial");
    kjones->add_option("file", file, "Diagram or braid file")->required();
    kjones->callback([&] {
        const LinkDiagram d = load_link(file);
        const LaurentPoly p = normalized_invariant(d, bracket_opts(g));
        o.report(json{{"normalized", p.to_string()}, {"jones", jones_text(p)}, {"writhe", writhe(d)}},
                 "normalized: " + p.to_string() + "\njones: " + jones_text(p));
    });

    auto* kmoves = knot->add_subcommand("moves", "List Reidemeister move sites, or apply one");
    kmoves->add_option("file", file, "Diagram or braid file")->required();
    kmoves->add_option("--apply", apply_site, "Apply the site with this index and print the new diagram");
    kmoves->callback([&] {
        const LinkDiagram d = load_link(file);
        const auto sites = enumerate_sites(d);
        if (apply_site) {
            if (*apply_site < 0 || *apply_site >= static_cast<int>(sites.size()))
                throw InputError("site index " + std::to_string(*apply_site) + " out of range (" +
                                 std::to_string(sites.size()) + " sites)");
            const auto& s = sites[*apply_site];
            const LinkDiagram r = apply_reidemeister(d, s);
            json j{{"move", describe(s)}, {"pd", to_pd_text(r)}, {"writhe_change", writhe_change(d, s)}};
            j["diagram"] = r;
            o.report(j, describe(s) + "\n" + to_pd_text(r));
            return;
        }
        json arr = json::array();
        std::ostringstream t;
        for (std::size_t i = 0; i < sites.size(); ++i) {
            arr.push_back({{"index", i}, {"move", describe(sites[i])}});
            t << i << ": " << describe(sites[i]) << "\n";
        }
        o.report(json{{"sites", arr}}, t.str());
    });

    // ---- qknot
    auto* qknot = app.add_subcommand("qknot", "Quantum knots from flat diagrams")->require_subcommand(1);
    qknot->footer(kDiagramGrammar);
    std::string flat;
    std::uint64_t seed = 0;
    std::size_t samples = 1;

    auto* qresolve = qknot->add_subcommand("resolve", "Resolve every node of a flat diagram into a superposition");
    qresolve->add_option("--flat", flat, "Diagram file; over/under data is ignored")->required();
    qresolve->callback([&] {
        const QuantumKnot q = load_flat(flat, g);
        std::ostringstream t;
        for (const auto& [key, term] : q.terms())
            t << class_name(key) << "  amplitude " << fmtc(term.amplitude) << "  p=" << fmt12(std::norm(term.amplitude))
              << "  " << to_pd_text(term.representative) << "\n";
        o.report(json(q), t.str());
    });

    auto* qdist = qknot->add_subcommand("dist", "Outcome distribution of a measurement");
    qdist->add_option("--flat", flat, "Diagram file; over/under data is ignored")->required();
    qdist->callback([&] {
        const QuantumKnot q = load_flat(flat, g);
        std::map<std::string, double> byname;
        for (const auto& [key, p] : q.outcome_distribution()) byname[class_name(key)] = p;
        json j = byname;
        std::ostringstream t;
        for (const auto& [name, p] : byname) t << name << " " << fmt12(p) << "\n";
        o.report(json{{"distribution", j}}, t.str());
    });

    auto* qmeasure = qknot->add_subcommand("measure", "Sample measurement outcomes");
    qmeasure->add_option("--flat", flat, "Diagram file; over/under data is ignored")->required();
    qmeasure->add_option("--seed", seed, "64-bit seed")->required();
    qmeasure->add_option("--samples", samples, "Number of samples; sample i uses the i-th draw of mt19937_64(seed)")
        ->check(CLI::Range(std::size_t{1}, std::size_t{10000000}));
    qmeasure->callback([&] {
        const QuantumKnot q = load_flat(flat, g);
        if (samples == 1) {
            const auto m = measure(q, seed);
            json j{{"rng", kRngAlgorithm}, {"seed", seed}, {"outcome", class_name(m.key)}, {"key", m.key},
                   {"probability", m.probability}};
            const auto& rep = m.collapsed.terms().begin()->second.representative;
            j["representative"] = to_pd_text(rep);
            o.report(j, class_name(m.key) + "  p=" + fmt12(m.probability) + "  " + to_pd_text(rep));
            return;
        }
        std::mt19937_64 stream(seed);
        std::map<KnotClassKey, std::size_t> counts;
        for (const auto& [key, p] : q.outcome_distribution()) counts[key] = 0;
        for (std::size_t i = 0; i < samples; ++i) ++counts[measure(q, stream()).key];
        json c = json::object(), f = json::object();
        std::ostringstream t;
        for (const auto& [key, n] : counts) {
            c[class_name(key)] = n;
            f[class_name(key)] = static_cast<double>(n) / static_cast<double>(samples);
            t << class_name(key) << " " << n << " " << fmt12(static_cast<double>(n) / samples) << "\n";
        }
        o.report(json{{"rng", kRngAlgorithm}, {"seed", seed}, {"samples", samples}, {"counts", c}, {"frequencies", f}},
                 t.str());
    });

    auto* qexpand = qknot->add_subcommand("expand", "Smoothing states of a diagram with their weights");
    qexpand->add_option("file", file, "Diagram or braid file")->required();
    qexpand->callback([&] {
        const LinkDiagram d = load_link(file);
        const auto states = internal_state_expansion(d, g.crossing_cap);
        json arr = json::array();
        std::ostringstream t;
        LaurentPoly sum;
        for (const auto& [s, w] : states) {
            arr.push_back({{"choices", choice_text(s.choices)}, {"loops", s.loop_count}, {"weight", w.to_string()}});
            t << (s.choices.empty() ? "-" : choice_text(s.choices)) << "  loops " << s.loop_count << "  "
              << w.to_string() << "\n";
            sum += w;
        }
        t << "sum: " << sum.to_string() << "\n";
        o.report(json{{"states", arr}, {"sum", sum.to_string()}}, t.str());
    });

    // ---- state
    auto* state = app.add_subcommand("state", "Qubit states and entanglement patterns")->require_subcommand(1);
    state->footer(kStateGrammar);
    int qubit = 0, bit = 0;
    std::string matrix;
    bool then_pattern = false;

    auto* spattern = state->add_subcommand("pattern", "Entanglement of the rest after measuring each qubit");
    spattern->add_option("file", file, "State file")->required();
    spattern->callback([&] {
        const PureState in = load_state(file, g.qubit_cap);
        const auto rows = entanglement_pattern(normalized_for_pattern(in));
        json j{{"qubits", in.qubit_count()}, {"input_normalized", in.is_normalized()}, {"rows", rows}};
        o.report(j, pattern_text(rows));
    });

    auto* sproject = state->add_subcommand("project", "Measure one qubit with a given result");
    sproject->add_option("file", file, "State file")->required();
    sproject->add_option("--qubit", qubit, "Qubit index (0 = leftmost)")->required();
    sproject->add_option("--bit", bit, "Measured value")->required()->check(CLI::Range(0, 1));
    sproject->callback([&] {
        const PureState in = normalized_for_pattern(load_state(file, g.qubit_cap));
        const auto b = project_qubit(in, qubit, bit);
        json j{{"qubit", qubit}, {"outcome", bit}, {"probability", b.probability}, {"defined", b.defined}};
        std::ostringstream t;
        t << "probability: " << fmt12(b.probability) << "\n";
        if (b.defined) {
            const bool ent = !is_fully_product(b.residual);
            j["residual"] = b.residual;
            j["residual_entangled"] = ent;
            t << "residual: " << b.residual.to_string() << "\nresidual: " << (ent ? "entangled" : "unentangled")
              << "\n";
        }
        o.report(j, t.str());
    });

    auto* sbasis = state->add_subcommand("basis-change", "Apply a 2x2 matrix to one qubit");
    sbasis->add_option("file", file, "State file")->required();
    sbasis->add_option("--qubit", qubit, "Qubit index (0 = leftmost)")->required();
    sbasis->add_option("--matrix", matrix, "\"a,b;c,d\"")->required();
    sbasis->add_flag("--pattern", then_pattern, "Print the entanglement pattern of the result instead of the state");
    sbasis->callback([&] {
        const PureState in = load_state(file, g.qubit_cap);
        const Eigen::Matrix2cd m = in_file("--matrix", [&] { return parse_matrix2(matrix); });
        const PureState r = apply_local_basis_change(in, qubit, m);
        if (then_pattern) {
            const auto rows = entanglement_pattern(normalized_for_pattern(r));
            o.report(json{{"qubits", r.qubit_count()}, {"input_normalized", r.is_normalized()}, {"rows", rows}},
                     pattern_text(rows));
            return;
        }
        o.report(json{{"state", r}}, to_state_text(r));
    });

    // ---- link
    auto* link = app.add_subcommand("link", "Link patterns, Brunnian checks and probabilistic links")
                     ->require_subcommand(1);
    link->footer(std::string(kDiagramGrammar) + "\n\n" + kLinkGrammar);
    std::string braid_word, state_file;
    int component = 0;
    bool permute = false;

    auto* lpattern = link->add_subcommand("pattern", "Linked/unlinked after deleting each component");
    lpattern->add_option("file", file, "Diagram or braid file")->required();
    lpattern->callback([&] {
        const LinkPattern p = link_pattern(load_link(file), pattern_opts(g));
        std::ostringstream t;
        t << "full link: " << (p.full_linked ? "linked" : "unlinked") << "\n";
        for (int c = 0; c < p.component_count; ++c)
            t << "delete " << c << ": " << (p.remainder_linked[c] ? "linked" : "unlinked") << "\n";
        o.report(json(p), t.str());
    });

    auto* lbrunnian = link->add_subcommand("brunnian", "Brunnian check (bracket based)");
    lbrunnian->add_option("file", file, "Diagram or braid file")->required();
    lbrunnian->callback([&] {
        const LinkDiagram d = load_link(file);
        const BrunnianVerdict v = is_brunnian(d, pattern_opts(g));
        o.report(json{{"verdict", to_string(v)}, {"components", d.component_count()}}, to_string(v));
        if (v == BrunnianVerdict::indeterminate && d.component_count() >= 3) status = kExitCap;
    });

    auto* ltemplate = link->add_subcommand("template", "Weave a new strand into a Brunnian braid");
    ltemplate->add_option("file", file, "Braid file (or use --braid)");
    ltemplate->add_option("--braid", braid_word, "Braid word, e.g. \"n=3: s1 s2^-1 s1 s2^-1 s1 s2^-1\"");
    ltemplate->callback([&] {
        if (file.empty() == braid_word.empty()) throw InputError("give exactly one of a braid file or --braid");
        const BraidWord b = file.empty() ? in_file("--braid", [&] { return parse_braid(braid_word); }) : load_braid(file);
        const BraidWord t = brunnian_template(b, pattern_opts(g));
        o.report(json{{"input", b.to_string()}, {"output", t.to_string()}, {"verdict", "brunnian"}},
                 t.to_string());
    });

    auto* lcut = link->add_subcommand("cutprob", "Cut one component of a probabilistic link");
    lcut->add_option("file", file, "Probabilistic link file")->required();
    lcut->add_option("--component", component, "Component to cut")->required();
    lcut->add_option("--seed", seed, "64-bit seed")->required();
    lcut->callback([&] {
        const std::string text = read_file(file);
        const ProbabilisticLink p = in_file(file, [&] { return parse_problink(text); });
        const CutResult r = cut_probabilistic(p, component, seed);
        const bool linked = !is_bracket_trivial(r.remainder, bracket_opts(g));
        const CutDistribution dist = cut_distribution(p, component, pattern_opts(g));
        json j{{"rng", kRngAlgorithm},
               {"seed", seed},
               {"component", component},
               {"crossing", r.crossing},
               {"switched", r.switched},
               {"remainder", to_pd_text(r.remainder)},
               {"remainder_linked", linked},
               {"distribution", {{"linked", dist.linked}, {"unlinked", dist.unlinked}}}};
        std::ostringstream t;
        t << "crossing " << r.crossing << (r.switched ? " switched" : " kept") << "\nremainder: "
          << (linked ? "linked" : "unlinked") << "  " << to_pd_text(r.remainder) << "\ndistribution: linked "
          << fmt12(dist.linked) << ", unlinked " << fmt12(dist.unlinked) << "\n";
        o.report(j, t.str());
    });

    auto* lmatch = link->add_subcommand("match", "Compare a link's deletion pattern with a state's pattern");
    lmatch->add_option("link", file, "Diagram, braid or probabilistic link file")->required();
    lmatch->add_option("state", state_file, "State file")->required();
    lmatch->add_flag("--permute", permute, "Search every component-to-qubit pairing");
    lmatch->callback([&] {
        const std::string text = read_file(file);
        const PureState s = normalized_for_pattern(load_state(state_file, g.qubit_cap));
        const auto rows = entanglement_pattern(s);
        MatchOptions mo;
        mo.permutation_search = permute;
        MatchReport r;
        if (text.find("influence:") != std::string::npos) {
            const ProbabilisticLink p = in_file(file, [&] { return parse_problink(text); });
            r = aravind_match(p, rows, mo, pattern_opts(g));
        } else {
            r = aravind_match(link_pattern(load_link(file), pattern_opts(g)), rows, mo);
        }
        o.report(json(r), match_text(r));
    });

    // ---- net
    auto* net = app.add_subcommand("net", "Tensor networks")->require_subcommand(1);
    net->footer(kNetGrammar);
    int edge = 0, a_index = 0, b_index = 0;
    std::string ket, bra, r_spec = "default";

    auto* neval = net->add_subcommand("eval", "Contract a network");
    neval->add_option("file", file, "Network JSON")->required();
    neval->callback([&] {
        const Tensor t = contract(load_network(file), contract_opts(g));
        json j = t;
        std::ostringstream s;
        if (t.dims.empty()) {
            j["value"] = cjson(t.data.front());
            s << fmtc(t.data.front()) << "\n";
        } else {
            s << "shape:";
            for (int d : t.dims) s << " " << d;
            s << "\n";
            std::vector<int> idx(t.dims.size(), 0);
            for (const auto& z : t.data) {
                for (std::size_t k = 0; k < idx.size(); ++k) s << (k ? "," : "") << idx[k];
                s << ": " << fmtc(z) << "\n";
                for (std::size_t k = idx.size(); k-- > 0;) {
                    if (++idx[k] < t.dims[k]) break;
                    idx[k] = 0;
                }
            }
        }
        o.report(j, s.str());
    });

    auto* ncut = net->add_subcommand("cut", "Cut an edge, optionally inserting a ket and a bra");
    ncut->add_option("file", file, "Network JSON")->required();
    ncut->add_option("--edge", edge, "Edge index")->required();
    ncut->add_option("--ket", ket, "Ket entries for the input end, e.g. \"1,0\"");
    ncut->add_option("--bra", bra, "Bra entries for the output end, used as given");
    ncut->callback([&] {
        const NetworkGraph n = load_network(file);
        if (ket.empty() != bra.empty()) throw InputError("--ket and --bra go together");
        if (ket.empty()) {
            o.data(json(cut_edge(n, edge)));
            return;
        }
        DensityInsertion rho;
        rho.ket = in_file("--ket", [&] { return parse_complex_list(ket); });
        rho.bra = in_file("--bra", [&] { return parse_complex_list(bra); });
        o.data(json(insert_ketbra(n, edge, rho)));
    });

    auto* ndouble = net->add_subcommand("double", "Network times its conjugate, joined at the insertions");
    ndouble->add_option("file", file, "Closed network JSON with one ket and one bra")->required();
    ndouble->callback([&] { o.data(json(double_network(load_network(file)))); });

    auto resolve_braid = [&] {
        if (file.empty() == braid_word.empty()) throw InputError("give exactly one of a braid file or --word");
        return file.empty() ? in_file("--word", [&] { return parse_braid(braid_word); }) : load_braid(file);
    };
    auto load_r = [&] { return in_file("--r", [&] { return load_crossing_tensor(r_spec); }); };

    auto* nbraid = net->add_subcommand("from-braid", "Network of a braid closure with a crossing tensor");
    nbraid->add_option("file", file, "Braid file (or use --word)");
    nbraid->add_option("--word", braid_word, "Braid word");
    nbraid->add_option("--r", r_spec, "default | identity | swap | JSON file {\"d\":k,\"entries\":[[re,im],...]}")
        ->capture_default_str();
    nbraid->callback([&] {
        const BraidNetwork bn = link_to_network(resolve_braid(), load_r());
        json j = bn.graph;
        j["closure_edges"] = bn.closure_edges;
        o.data(j);
    });

    auto* nmeasure = net->add_subcommand("measure", "Insert |b><a| on a component of a braid-closure network");
    nmeasure->add_option("file", file, "Braid file (or use --word)");
    nmeasure->add_option("--word", braid_word, "Braid word");
    nmeasure->add_option("--r", r_spec, "Crossing tensor (as for from-braid)")->capture_default_str();
    nmeasure->add_option("--component", component, "Component to cut")->required();
    nmeasure->add_option("--a", a_index, "Basis index of the bra <a|")->required();
    nmeasure->add_option("--b", b_index, "Basis index of the ket |b>")->required();
    nmeasure->callback([&] {
        const BraidNetwork bn = link_to_network(resolve_braid(), load_r());
        const auto m =
            measure_component(bn, component, DensityInsertion::basis(bn.crossing.d, a_index, b_index), contract_opts(g));
        std::ostringstream t;
        t << "value: " << fmtc(m.value) << "\nuncut: " << fmtc(m.uncut) << "\ndeleted: "
          << (m.deleted ? fmtc(*m.deleted) : std::string("n/a")) << "\n";
        o.report(json(m), t.str());
    });

    try {
        app.parse(argc, argv);
    } catch (const CLI::Success& e) {
        return app.exit(e, out, err);
    } catch (const CLI::ParseError& e) {
        app.exit(e, out, err);
        return kExitInput;
    } catch (const CapExceeded& e) {
        err << "error: cap exceeded: " << e.what() << "\n";
        return kExitCap;
    } catch (const InputError& e) {
        err << "error: " << e.what() << "\n";
        return kExitInput;
    } catch (const PreconditionError& e) {
        err << "error: " << e.what() << "\n";
        return kExitInput;
    } catch (const std::exception& e) {
        err << "internal error: " << e.what() << "\n";
        return kExitInternal;
    }
    return status;
}

}  // namespace qknots::cli
