#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "tes/specio.hpp"

namespace {

using namespace tes;
using namespace tes::specio;

int fail_usage(const std::string& msg) {
    std::cerr << "error: " << msg << "\n";
    return 1;
}

std::optional<std::string> read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) return std::nullopt;
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

void print_diagnostics(const std::vector<Diagnostic>& diags, const std::string& path) {
    for (const auto& d : diags) std::cerr << path << ":" << diagnostic_str(d) << "\n";
}

int emit(const ExecOutcome& outcome, const std::string& out_path, const std::string& path) {
    if (!out_path.empty()) {
        std::ofstream out(out_path, std::ios::binary);
        if (!out) return fail_usage("cannot write to " + out_path);
        out << outcome.output;
    } else {
        std::cout << outcome.output;
    }
    print_diagnostics(outcome.diagnostics, path);
    return outcome.exit_code;
}

// Parse "sync", "rf", or "rf(<rational>)" into a signature reference.
std::optional<SigRef> parse_sig_flag(const std::string& s) {
    if (s == "sync") return SigRef{"sync", Rational(1)};
    if (s == "rf") return SigRef{"rf", Rational(1)};
    if (s.rfind("rf(", 0) == 0 && s.back() == ')') {
        std::string body = s.substr(3, s.size() - 4);
        auto slash = body.find('/');
        try {
            if (slash == std::string::npos) return SigRef{"rf", Rational(std::stoll(body))};
            return SigRef{"rf", Rational(std::stoll(body.substr(0, slash)),
                                         std::stoll(body.substr(slash + 1)))};
        } catch (const std::exception&) {
            return std::nullopt;
        }
    }
    return std::nullopt;
}

std::optional<Choice> parse_choice_flag(const std::string& s) {
    if (s == "theorem1") return Choice::theorem1_lower_bound;
    if (s == "theorem2") return Choice::theorem2_union;
    if (s == "greatest") return Choice::greatest;
    if (s == "first") return Choice::pick_first_canonical;
    if (s == "cost") return Choice::cost_ranked;
    return std::nullopt;
}

std::optional<Rational> parse_rational_flag(const std::string& s) {
    try {
        auto slash = s.find('/');
        if (slash == std::string::npos) return Rational(std::stoll(s));
        return Rational(std::stoll(s.substr(0, slash)), std::stoll(s.substr(slash + 1)));
    } catch (const std::exception&) {
        return std::nullopt;
    }
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"component-algebra engine for finite-horizon timed-event streams"};
    app.require_subcommand(1);

    std::string format = "text";
    std::string out_path;
    unsigned long long max_universe = 1000000;
    std::size_t max_subset_base = 20;
    app.add_option("--format", format, "output format: text or json")
        ->check(CLI::IsMember({"text", "json"}));
    app.add_option("--out", out_path, "write results to a file instead of stdout");
    app.add_option("--max-universe", max_universe,
                   "refuse candidate universes larger than this (default 1000000)");
    app.add_option("--max-subset-base", max_subset_base,
                   "refuse subset enumeration over sets larger than this (default 20)");

    std::string file, left, right, under = "sync", over, choose = "first", as_name;
    std::vector<std::string> on_names;

    auto* cmd_check = app.add_subcommand("check", "parse and validate a document");
    cmd_check->add_option("file", file)->required();

    auto* cmd_run = app.add_subcommand("run", "execute every query in a document");
    cmd_run->add_option("file", file)->required();

    auto* cmd_product = app.add_subcommand("product", "product of two declared components");
    cmd_product->add_option("file", file)->required();
    cmd_product->add_option("left", left)->required();
    cmd_product->add_option("right", right)->required();
    cmd_product->add_option("--under", under, "signature: sync, rf, rf(<period>)");
    cmd_product->add_option("--as", as_name, "name for the result");

    auto* cmd_divide = app.add_subcommand("divide", "divide one component by another");
    cmd_divide->add_option("file", file)->required();
    cmd_divide->add_option("dividend", left)->required();
    cmd_divide->add_option("divisor", right)->required();
    cmd_divide->add_option("--under", under, "signature");
    cmd_divide->add_option("--over", over, "declared candidate universe")->required();
    cmd_divide->add_option("--choose", choose, "theorem1, first, or cost");

    auto* cmd_conform = app.add_subcommand("conform", "synthesize a conformance coordinator");
    cmd_conform->add_option("file", file)->required();
    cmd_conform->add_option("spec", left)->required();
    cmd_conform->add_option("plant", right)->required();
    cmd_conform->add_option("--under", under, "signature");
    cmd_conform->add_option("--over", over, "declared candidate universe")->required();
    cmd_conform->add_option("--choose", choose, "theorem2, greatest, or first");

    auto* cmd_laws = app.add_subcommand("laws", "check product laws on declared witnesses");
    cmd_laws->add_option("file", file)->required();
    cmd_laws->add_option("--under", under, "signature");
    cmd_laws->add_option("--on", on_names, "witness component names")->required();

    std::string scen_name, horizon_flag, period_flag = "1", report_path;
    long long seed = 0;
    auto* cmd_scenario = app.add_subcommand("scenario", "run a case study");
    cmd_scenario->add_option("name", scen_name, "grid-division, update, or sort")->required();
    cmd_scenario->add_option("--horizon", horizon_flag, "scenario horizon (rational)");
    cmd_scenario->add_option("--period", period_flag, "robot period (rational)");
    cmd_scenario->add_option("--seed", seed, "accepted for reproducibility; runs are deterministic");
    cmd_scenario->add_option("--report", report_path, "write the report to a file");

    CLI11_PARSE(app, argc, argv);

    ExecOptions opt;
    opt.json = format == "json";
    opt.max_universe = max_universe;
    opt.max_subset_base = max_subset_base;

    if (cmd_scenario->parsed()) {
        QueryScenario q;
        q.which = scen_name;
        if (q.which != "grid-division" && q.which != "update" && q.which != "sort")
            return fail_usage("unknown scenario '" + scen_name + "'");
        if (!horizon_flag.empty()) {
            auto h = parse_rational_flag(horizon_flag);
            if (!h) return fail_usage("bad --horizon value");
            q.params.emplace_back("horizon", *h);
        }
        auto p = parse_rational_flag(period_flag);
        if (!p) return fail_usage("bad --period value");
        q.params.emplace_back("period", *p);
        q.params.emplace_back("seed", Rational(seed));
        SpecDocument doc;
        doc.queries.push_back(q);
        ExecOutcome outcome = run_document(doc, opt);
        return emit(outcome, report_path.empty() ? out_path : report_path, "<scenario>");
    }

    auto source = read_file(file);
    if (!source) return fail_usage("cannot read " + file);
    ParseResult parsed = parse(*source);
    if (!parsed.ok()) {
        print_diagnostics(parsed.diagnostics, file);
        return 1;
    }
    SpecDocument doc = *parsed.document;

    if (cmd_check->parsed()) {
        std::cout << "ok: " << doc.components.size() << " components, "
                  << doc.universes.size() << " universes, " << doc.queries.size()
                  << " queries\n";
        return 0;
    }

    if (!cmd_run->parsed()) {
        // Single-query subcommands replace the document's query list.
        doc.queries.clear();
        auto sig = parse_sig_flag(under);
        if (!sig) return fail_usage("bad --under value '" + under + "'");
        auto have = [&](const std::string& n) {
            for (const auto& c : doc.components)
                if (c.name == n) return true;
            return false;
        };
        auto have_universe = [&](const std::string& n) {
            for (const auto& u : doc.universes)
                if (u.name == n) return true;
            return false;
        };
        if (cmd_product->parsed()) {
            if (!have(left) || !have(right)) return fail_usage("unknown component name");
            QueryProduct q{left, right, *sig,
                           as_name.empty() ? std::nullopt : std::optional(as_name)};
            doc.queries.push_back(q);
        } else if (cmd_divide->parsed() || cmd_conform->parsed()) {
            if (!have(left) || !have(right)) return fail_usage("unknown component name");
            if (!have_universe(over)) return fail_usage("unknown universe name");
            auto ch = parse_choice_flag(choose);
            if (!ch) return fail_usage("bad --choose value '" + choose + "'");
            if (cmd_divide->parsed())
                doc.queries.push_back(QueryDivide{left, right, *sig, over, *ch});
            else
                doc.queries.push_back(QueryConform{left, right, *sig, over, *ch});
        } else if (cmd_laws->parsed()) {
            for (const auto& n : on_names)
                if (!have(n)) return fail_usage("unknown component name '" + n + "'");
            doc.queries.push_back(QueryLaws{*sig, on_names});
        }
    }

    ExecOutcome outcome = run_document(doc, opt);
    return emit(outcome, out_path, file);
}
