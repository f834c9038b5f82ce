// somlc: train self-organising maps on labeled vectors, check strict,
// defeasible, fuzzy and probabilistic statements against the trained map's
// interpretations, extract weighted knowledge bases, and trace how the set
// of satisfied axioms evolves during training.

#include <cmath>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "somlc/somlc.hpp"

using namespace somlc;

namespace {

struct TrainOptions {
    std::string input;
    std::string grid = "8x8";
    std::size_t epochs = 10;
    std::uint64_t seed = 1;
    double lr0 = 0.5, lr_decay = 2.0, sigma0 = 0.0, sigma_decay = 2.0, init_margin = 0.25;
    bool shuffle = false;
};

std::pair<std::size_t, std::size_t> parse_grid(const std::string& text) {
    const auto x = text.find('x');
    if (x == std::string::npos || x == 0 || x + 1 == text.size()) {
        throw ConfigError("grid must look like ROWSxCOLS, e.g. 8x8");
    }
    try {
        return {std::stoul(text.substr(0, x)), std::stoul(text.substr(x + 1))};
    } catch (const std::exception&) {
        throw ConfigError("grid must look like ROWSxCOLS, e.g. 8x8");
    }
}

SomConfig make_config(const TrainOptions& opt, std::size_t dim) {
    SomConfig c;
    std::tie(c.rows, c.cols) = parse_grid(opt.grid);
    c.dim = dim;
    c.epochs = opt.epochs;
    c.seed = opt.seed;
    c.lr0 = opt.lr0;
    c.lr_decay = opt.lr_decay;
    c.sigma0 =
        opt.sigma0 > 0.0 ? opt.sigma0 : static_cast<double>(std::max(c.rows, c.cols)) / 2.0;
    c.sigma_decay = opt.sigma_decay;
    c.init_margin = opt.init_margin;
    c.shuffle = opt.shuffle;
    return c;
}

void add_train_flags(CLI::App* cmd, TrainOptions& opt) {
    cmd->add_option("--input", opt.input, "stimulus CSV (id,category,f1,...)")->required();
    cmd->add_option("--grid", opt.grid, "grid size ROWSxCOLS");
    cmd->add_option("--epochs", opt.epochs, "training epochs");
    cmd->add_option("--seed", opt.seed, "PRNG seed");
    cmd->add_option("--lr0", opt.lr0, "initial learning rate in (0,1]");
    cmd->add_option("--lr-decay", opt.lr_decay, "learning-rate decay");
    cmd->add_option("--sigma0", opt.sigma0, "initial neighborhood radius (default: max(grid)/2)");
    cmd->add_option("--sigma-decay", opt.sigma_decay, "neighborhood decay");
    cmd->add_option("--init-margin", opt.init_margin, "outside-band width as a span fraction");
    cmd->add_flag("--shuffle", opt.shuffle, "seeded per-epoch shuffle");
}

void print_category_summary(const SomMap& map, const std::vector<Stimulus>& data,
                            std::ostream& out) {
    auto stats = category_stats(map, data);
    std::map<std::string, std::size_t> counts;
    for (const Stimulus& s : data) ++counts[s.category];
    for (const auto& [name, st] : stats) {
        out << "category " << name << ": exemplars=" << counts[name]
            << " bmus=" << st.bmu_vectors.size() << " d_max=" << format_double(st.d_max) << "\n";
    }
}

// ---------------------------------------------------------------------------
// query evaluation

enum class Strictness { FastWithFallback, FastOnly, ExactOnly };

struct QueryContext {
    SomMap map;
    std::vector<Stimulus> stimuli;
    std::vector<Stimulus> probes;
    std::vector<std::pair<std::string, std::string>> overrides;
    FuzzyLogic logic = FuzzyLogic::Zadeh;
    Strictness strictness = Strictness::FastWithFallback;
    std::optional<std::map<std::string, double>> masses;  // empty -> uniform

    std::optional<CwmModel> cwm;
    std::optional<FuzzyModel> fuzzy;
    std::optional<ProbModel> prob;

    const CwmModel& cwm_model() {
        if (!cwm) cwm = build_cwm(map, stimuli, probes, overrides);
        return *cwm;
    }
    const FuzzyModel& fuzzy_model() {
        if (!fuzzy) fuzzy = build_fuzzy(map, stimuli, probes, logic);
        return *fuzzy;
    }
    const ProbModel& prob_model() {
        if (!prob) {
            prob = masses ? ProbModel::with_masses(fuzzy_model(), *masses)
                          : ProbModel::uniform(fuzzy_model());
        }
        return *prob;
    }
};

struct Outcome {
    std::string verdict;  // ok | no | val | err
    std::optional<double> value;
    std::string method;
    std::string note;
    std::optional<std::string> witness;
    std::optional<std::string> counterexample;
    std::optional<double> plaus;
    std::string error;
};

const char* method_name(CheckMethod m) {
    switch (m) {
        case CheckMethod::General: return "general";
        case CheckMethod::FastExact: return "fast-exact";
        case CheckMethod::FastSufficient: return "fast-sufficient";
    }
    return "?";
}

Outcome from_check(const CheckResult& r) {
    Outcome o;
    o.verdict = r.holds ? "ok" : "no";
    o.method = method_name(r.method);
    o.counterexample = r.counterexample;
    o.plaus = r.plausibility;
    return o;
}

bool is_category(const Concept& c) { return c.kind() == Concept::Kind::Atom; }

Outcome eval_strict(QueryContext& ctx, const StrictInclusion& a) {
    const CwmModel& m = ctx.cwm_model();
    const bool atomic = is_category(a.lhs) && is_category(a.rhs);
    if (ctx.strictness == Strictness::ExactOnly || !atomic) {
        Outcome o = from_check(check_strict_general(m, a.lhs, a.rhs));
        if (!atomic && ctx.strictness != Strictness::ExactOnly) o.note = "auto-exact";
        return o;
    }
    const CheckResult fast = check_strict_fast(m, a.lhs.atom_name(), a.rhs.atom_name());
    if (fast.holds || ctx.strictness == Strictness::FastOnly) {
        Outcome o = from_check(fast);
        if (!fast.holds) o.note = "sufficient condition failed; rerun with --exact to confirm";
        return o;
    }
    Outcome o = from_check(check_strict_general(m, a.lhs, a.rhs));
    o.note = "fast inconclusive, fell back to exact";
    return o;
}

Outcome eval_defeasible(QueryContext& ctx, const DefeasibleInclusion& a) {
    const CwmModel& m = ctx.cwm_model();
    const bool atomic = is_category(a.lhs) && is_category(a.rhs);
    if (atomic && ctx.strictness != Strictness::ExactOnly) {
        return from_check(check_typ_fast(m, a.lhs.atom_name(), a.rhs.atom_name()));
    }
    Outcome o = from_check(check_typ_general(m, a.lhs, a.rhs));
    if (!atomic && ctx.strictness == Strictness::FastOnly) o.note = "auto-exact";
    if (atomic) {
        // attach the category pair's plausibility degree even on the exact path
        o.plaus = check_typ_fast(m, a.lhs.atom_name(), a.rhs.atom_name()).plausibility;
    }
    return o;
}

Outcome eval_query(QueryContext& ctx, const Query& query) {
    return std::visit(
        [&](const auto& q) -> Outcome {
            using T = std::decay_t<decltype(q)>;
            Outcome o;
            if constexpr (std::is_same_v<T, CheckAxiomQuery>) {
                if (const auto* s = std::get_if<StrictInclusion>(&q.axiom)) {
                    return eval_strict(ctx, *s);
                }
                if (const auto* d = std::get_if<DefeasibleInclusion>(&q.axiom)) {
                    return eval_defeasible(ctx, *d);
                }
                const FuzzyVerdict v = check_fuzzy_axiom(ctx.fuzzy_model(), q.axiom);
                o.verdict = v.holds ? "ok" : "no";
                o.value = v.degree;
                o.method = "fuzzy";
                o.witness = v.witness;
            } else if constexpr (std::is_same_v<T, ProbQuery>) {
                o.verdict = "val";
                o.value = prob(ctx.prob_model(), q.c);
            } else if constexpr (std::is_same_v<T, CondProbQuery>) {
                o.verdict = "val";
                o.value = cond_prob(ctx.prob_model(), q.c, q.given);
            } else if constexpr (std::is_same_v<T, ProbGivenElementQuery>) {
                o.verdict = "val";
                o.value = prob_given_element(ctx.prob_model(), q.c, q.element);
            } else if constexpr (std::is_same_v<T, LikelihoodQuery>) {
                o.verdict = "val";
                o.value = likelihood(ctx.prob_model(), q.element, q.c);
            } else if constexpr (std::is_same_v<T, InclusionDegreeQuery>) {
                const DegreeResult d = inclusion_degree(ctx.fuzzy_model(), q.lhs, q.rhs);
                o.verdict = "val";
                o.value = d.degree;
                o.witness = d.witness;
            } else if constexpr (std::is_same_v<T, MembershipQuery>) {
                o.verdict = "val";
                o.value = membership(ctx.fuzzy_model(), q.c, q.element);
            } else if constexpr (std::is_same_v<T, PlausibilityQuery>) {
                const auto& space = ctx.cwm_model().space();
                o.verdict = "val";
                o.value = plausibility(space.stats(q.src), space.stats(q.dst));
            }
            return o;
        },
        query);
}

struct ReportLine {
    std::size_t line_no = 0;
    std::string text;
    Outcome outcome;
};

std::string render_text_report(const std::vector<ReportLine>& lines) {
    std::ostringstream out;
    std::size_t ok = 0, no = 0, val = 0, err = 0;
    for (const ReportLine& l : lines) {
        out << l.outcome.verdict << "\t" << l.text << "\t";
        std::vector<std::string> extras;
        if (l.outcome.value) extras.push_back("value=" + format_double(*l.outcome.value));
        if (!l.outcome.method.empty()) extras.push_back("method=" + l.outcome.method);
        if (l.outcome.witness) extras.push_back("witness=" + *l.outcome.witness);
        if (l.outcome.counterexample) {
            extras.push_back("counterexample=" + *l.outcome.counterexample);
        }
        if (l.outcome.plaus) extras.push_back("plausibility=" + format_double(*l.outcome.plaus));
        if (!l.outcome.note.empty()) extras.push_back("note=\"" + l.outcome.note + "\"");
        if (!l.outcome.error.empty()) extras.push_back(l.outcome.error);
        for (std::size_t i = 0; i < extras.size(); ++i) out << (i ? " " : "") << extras[i];
        out << "\n";
        if (l.outcome.verdict == "ok") ++ok;
        else if (l.outcome.verdict == "no") ++no;
        else if (l.outcome.verdict == "val") ++val;
        else ++err;
    }
    out << "# queries=" << lines.size() << " ok=" << ok << " no=" << no << " val=" << val
        << " err=" << err << "\n";
    return out.str();
}

std::string render_json_report(const std::vector<ReportLine>& lines) {
    nlohmann::json arr = nlohmann::json::array();
    std::size_t err = 0;
    for (const ReportLine& l : lines) {
        nlohmann::json j;
        j["line"] = l.line_no;
        j["query"] = l.text;
        j["verdict"] = l.outcome.verdict;
        if (l.outcome.value) j["value"] = *l.outcome.value;
        if (!l.outcome.method.empty()) j["method"] = l.outcome.method;
        if (l.outcome.witness) j["witness"] = *l.outcome.witness;
        if (l.outcome.counterexample) j["counterexample"] = *l.outcome.counterexample;
        if (l.outcome.plaus) j["plausibility"] = *l.outcome.plaus;
        if (!l.outcome.note.empty()) j["note"] = l.outcome.note;
        if (!l.outcome.error.empty()) j["error"] = l.outcome.error;
        arr.push_back(std::move(j));
        if (l.outcome.verdict == "err") ++err;
    }
    nlohmann::json report;
    report["queries"] = std::move(arr);
    report["errors"] = err;
    return report.dump(2) + "\n";
}

int run_queries(QueryContext& ctx, const std::string& queries_path, const std::string& format) {
    std::ifstream qin(queries_path);
    if (!qin) throw ConfigError("cannot open '" + queries_path + "'");
    std::vector<ReportLine> lines;
    for (ParsedLine& p : parse_query_lines(qin)) {
        ReportLine line{p.line_no, p.text, {}};
        if (!p.query) {
            line.outcome.verdict = "err";
            line.outcome.error = p.error;
        } else {
            try {
                line.outcome = eval_query(ctx, *p.query);
            } catch (const Error& e) {
                line.outcome.verdict = "err";
                line.outcome.error = e.what();
            }
        }
        lines.push_back(std::move(line));
    }
    std::cout << (format == "json" ? render_json_report(lines) : render_text_report(lines));
    for (const ReportLine& l : lines) {
        if (l.outcome.verdict == "err") return 1;
    }
    return 0;
}

std::map<std::string, double> read_mass_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open '" + path + "'");
    std::string line;
    if (!std::getline(in, line) || detail::trim(line) != "id,mass") {
        throw ParseError("distribution file must start with the header 'id,mass'", 1, 1);
    }
    std::map<std::string, double> masses;
    std::size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        std::string body = detail::trim(line);
        if (body.empty()) continue;
        auto fields = detail::split_csv_line(body);
        if (fields.size() != 2) throw ParseError("expected 'id,mass'", line_no, 1);
        masses[detail::trim(fields[0])] =
            detail::parse_double(detail::trim(fields[1]), line_no, 2);
    }
    return masses;
}

void write_text_file(const std::string& path, const std::string& content) {
    if (path.empty() || path == "-") {
        std::cout << content;
        return;
    }
    std::ofstream out(path);
    if (!out) throw ConfigError("cannot write '" + path + "'");
    out << content;
}

void emit_membership_csv(const FuzzyModel& model, const std::string& path) {
    std::ostringstream out;
    out << "id,category,membership\n";
    const auto& sp = model.space();
    for (std::size_t e = 0; e < sp.size(); ++e) {
        for (const std::string& cat : sp.category_names()) {
            out << sp.domain()[e].id << "," << cat << ","
                << format_double(membership_at(model, Concept::atom(cat), e)) << "\n";
        }
    }
    write_text_file(path, out.str());
}

struct ConsumerOptions {
    std::string model, input, queries, probes, spec, format = "text";
    std::string logic = "zadeh";
};

QueryContext load_context(const ConsumerOptions& opt) {
    QueryContext ctx;
    ctx.map = load_map_file(opt.model);
    ctx.stimuli = read_stimulus_csv_file(opt.input);
    if (!opt.probes.empty()) ctx.probes = read_stimulus_csv_file(opt.probes);
    if (!opt.spec.empty()) {
        std::ifstream sin(opt.spec);
        if (!sin) throw ConfigError("cannot open '" + opt.spec + "'");
        ctx.overrides = read_specificity_file(sin);
    }
    ctx.logic = ConnectiveFamily::from_name(opt.logic).logic;
    return ctx;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"self-organising maps with preferential, fuzzy and probabilistic semantics"};
    app.require_subcommand(1);
    app.footer(
        "Query files hold one statement per line; '#' starts a comment.\n"
        "Concept grammar:\n"
        "  concept := or ; or := and (\"or\" and)* ; and := unary (\"and\" unary)*\n"
        "  unary   := \"not\" unary | \"top\" | \"bot\" | IDENT | \"(\" concept \")\"\n"
        "Statements:\n"
        "  C <= D                 strict inclusion\n"
        "  T(C) <= D              defeasible (typicality) inclusion\n"
        "  C <= D >= 0.7          fuzzy inclusion (also <=, >, <)\n"
        "  C(a) >= 0.7            fuzzy assertion about element a\n"
        "  P(C), P(C | D)         probability / conditional probability\n"
        "  P(C | elem:ID)         probability of C given an element\n"
        "  P(elem:ID | C)         likelihood of an element given C\n"
        "  deg(C <= D)            fuzzy inclusion degree with witness\n"
        "  mem(C, elem:ID)        membership degree\n"
        "  plaus(Ci, Cj)          plausibility of T(Ci) <= Cj");

    TrainOptions train_opt;
    std::string train_out;
    CLI::App* cmd_train = app.add_subcommand("train", "train a map and serialize it");
    add_train_flags(cmd_train, train_opt);
    cmd_train->add_option("--out", train_out, "output map file")->required();

    ConsumerOptions check_opt;
    std::string check_mode = "pref";
    bool flag_fast = false, flag_exact = false;
    std::string membership_csv;
    CLI::App* cmd_check = app.add_subcommand("check", "run a query file against the model");
    cmd_check->add_option("--model", check_opt.model, "trained map file")->required();
    cmd_check->add_option("--input", check_opt.input, "training stimulus CSV")->required();
    cmd_check->add_option("--queries", check_opt.queries, "query file")->required();
    cmd_check->add_option("--mode", check_mode, "pref|fuzzy: interpretation built eagerly")
        ->check(CLI::IsMember({"pref", "fuzzy"}));
    cmd_check->add_option("--logic", check_opt.logic, "zadeh|goedel|lukasiewicz|product");
    cmd_check->add_flag("--fast", flag_fast, "category-level conditions only");
    cmd_check->add_flag("--exact", flag_exact, "extension-based checking only");
    cmd_check->add_option("--probes", check_opt.probes, "probe CSV (empty category column)");
    cmd_check->add_option("--spec", check_opt.spec, "specificity override file");
    cmd_check->add_option("--format", check_opt.format, "text|json")
        ->check(CLI::IsMember({"text", "json"}));
    cmd_check->add_option("--emit-membership-csv", membership_csv,
                          "dump per-element atom memberships");

    ConsumerOptions extract_opt;
    double threshold = 0.0;
    std::string extract_out;
    CLI::App* cmd_extract = app.add_subcommand("extract", "extract the weighted knowledge base");
    cmd_extract->add_option("--model", extract_opt.model, "trained map file")->required();
    cmd_extract->add_option("--input", extract_opt.input, "training stimulus CSV")->required();
    cmd_extract->add_option("--threshold", threshold, "minimal plausibility in [0,1]")
        ->check(CLI::Range(0.0, 1.0));
    cmd_extract->add_option("--spec", extract_opt.spec, "specificity override file");
    cmd_extract->add_option("--out", extract_out, "output file (default: stdout)");

    ConsumerOptions prob_opt;
    std::string dist = "uniform";
    CLI::App* cmd_prob = app.add_subcommand("prob", "probability queries over the fuzzy model");
    cmd_prob->add_option("--model", prob_opt.model, "trained map file")->required();
    cmd_prob->add_option("--input", prob_opt.input, "training stimulus CSV")->required();
    cmd_prob->add_option("--queries", prob_opt.queries, "query file")->required();
    cmd_prob->add_option("--dist", dist, "uniform | mass CSV path");
    cmd_prob->add_option("--logic", prob_opt.logic, "zadeh|lukasiewicz");
    cmd_prob->add_option("--probes", prob_opt.probes, "probe CSV");
    cmd_prob->add_option("--format", prob_opt.format, "text|json")
        ->check(CLI::IsMember({"text", "json"}));

    TrainOptions trace_opt;
    std::uint64_t every = 1;
    std::string trace_out, trace_format = "text";
    CLI::App* cmd_trace = app.add_subcommand("trace", "belief-change trace during training");
    add_train_flags(cmd_trace, trace_opt);
    cmd_trace->add_option("--every", every, "snapshot cadence in steps")->required();
    cmd_trace->add_option("--out", trace_out, "output file (default: stdout)");
    cmd_trace->add_option("--format", trace_format, "text|json")
        ->check(CLI::IsMember({"text", "json"}));

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    try {
        if (*cmd_train) {
            auto data = read_stimulus_csv_file(train_opt.input);
            if (data.empty()) throw ConfigError("no stimuli in '" + train_opt.input + "'");
            for (const Stimulus& s : data) {
                if (s.is_probe()) {
                    throw ConfigError("stimulus '" + s.id + "' has an empty category field");
                }
            }
            SomMap map =
                init_map(make_config(train_opt, data.front().vector.size()), data_range_of(data));
            train(map, data);
            save_map_file(map, train_out);
            std::cout << "map: " << map.config.rows << "x" << map.config.cols << ", dim "
                      << map.config.dim << ", trained_steps " << map.trained_steps
                      << ", saved to " << train_out << "\n";
            print_category_summary(map, data, std::cout);
            return 0;
        }

        if (*cmd_check) {
            if (flag_fast && flag_exact) throw ConfigError("--fast and --exact are exclusive");
            QueryContext ctx = load_context(check_opt);
            ctx.strictness = flag_exact  ? Strictness::ExactOnly
                             : flag_fast ? Strictness::FastOnly
                                         : Strictness::FastWithFallback;
            if (check_mode == "pref") {
                ctx.cwm_model();
            } else {
                ctx.fuzzy_model();
            }
            if (!membership_csv.empty()) emit_membership_csv(ctx.fuzzy_model(), membership_csv);
            return run_queries(ctx, check_opt.queries, check_opt.format);
        }

        if (*cmd_extract) {
            QueryContext ctx = load_context(extract_opt);
            write_text_file(extract_out, format_kb(extract_kb(ctx.cwm_model(), threshold)));
            return 0;
        }

        if (*cmd_prob) {
            QueryContext ctx = load_context(prob_opt);
            if (dist != "uniform") {
                ctx.masses = read_mass_csv(dist);
                ctx.prob_model();
                if (std::abs(ctx.prob->raw_mass_sum() - 1.0) > 1e-6) {
                    std::cerr << "somlc: warning: masses in '" << dist << "' sum to "
                              << format_double(ctx.prob->raw_mass_sum())
                              << "; renormalized to 1\n";
                }
            }
            return run_queries(ctx, prob_opt.queries, prob_opt.format);
        }

        if (*cmd_trace) {
            auto data = read_stimulus_csv_file(trace_opt.input);
            if (data.empty()) throw ConfigError("no stimuli in '" + trace_opt.input + "'");
            auto snaps =
                run_trace(make_config(trace_opt, data.front().vector.size()), data, every);
            write_text_file(trace_out, trace_format == "json" ? format_trace_json(snaps)
                                                              : format_trace_text(snaps));
            return 0;
        }
    } catch (const Error& e) {
        std::cerr << "somlc: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "somlc: " << e.what() << "\n";
        return 2;
    }
    return 0;
}
