#include "tes/specio.hpp"

#include <algorithm>
#include <cctype>
#include <map>
#include <sstream>

#include "tes/algebra.hpp"
#include "tes/signature.hpp"

#include <json.hpp>

namespace tes::specio {

std::string diagnostic_str(const Diagnostic& d) {
    std::string out = std::to_string(d.line) + ":" + std::to_string(d.col) + ": " +
                      (d.severity == Diagnostic::Severity::error ? "error: " : "warning: ") +
                      d.message;
    if (d.hint) out += " (" + *d.hint + ")";
    return out;
}

namespace {

// ---------------------------------------------------------------- lexing

struct Token {
    enum class Kind { name, number, punct, end };
    Kind kind = Kind::end;
    std::string text;
    std::size_t line = 1, col = 1;
    std::size_t offset = 0;  // byte offset, for adjacency checks
};

struct ParseError {
    std::size_t line, col;
    std::string message;
    std::optional<std::string> hint;
};

std::vector<Token> lex(const std::string& src) {
    std::vector<Token> out;
    std::size_t line = 1, col = 1;
    std::size_t i = 0;
    auto advance = [&](std::size_t n) {
        for (std::size_t k = 0; k < n; ++k) {
            if (src[i + k] == '\n') { ++line; col = 1; } else ++col;
        }
        i += n;
    };
    while (i < src.size()) {
        char c = src[i];
        if (c == '#') {
            while (i < src.size() && src[i] != '\n') advance(1);
            continue;
        }
        if (std::isspace(static_cast<unsigned char>(c))) { advance(1); continue; }
        Token t;
        t.line = line;
        t.col = col;
        t.offset = i;
        if (std::isalpha(static_cast<unsigned char>(c))) {
            std::size_t j = i;
            while (j < src.size() && (std::isalnum(static_cast<unsigned char>(src[j])) ||
                                      src[j] == '_' || src[j] == '-')) {
                // A name may contain '-' (scenario names) but must not eat
                // a following punctuation run.
                ++j;
            }
            while (j > i && src[j - 1] == '-') --j;  // trailing '-' is punctuation
            t.kind = Token::Kind::name;
            t.text = src.substr(i, j - i);
            advance(j - i);
        } else if (std::isdigit(static_cast<unsigned char>(c))) {
            std::size_t j = i;
            while (j < src.size() && std::isdigit(static_cast<unsigned char>(src[j]))) ++j;
            if (j + 1 < src.size() && src[j] == '.' && src[j + 1] != '.') {
                ++j;
                while (j < src.size() && std::isdigit(static_cast<unsigned char>(src[j]))) ++j;
            }
            t.kind = Token::Kind::number;
            t.text = src.substr(i, j - i);
            advance(j - i);
        } else if (i + 1 < src.size() && c == '.' && src[i + 1] == '.') {
            t.kind = Token::Kind::punct;
            t.text = "..";
            advance(2);
        } else {
            t.kind = Token::Kind::punct;
            t.text = std::string(1, c);
            advance(1);
        }
        out.push_back(std::move(t));
    }
    Token end;
    end.kind = Token::Kind::end;
    end.line = line;
    end.col = col;
    end.offset = src.size();
    out.push_back(end);
    return out;
}

// ---------------------------------------------------------------- parsing

const std::vector<std::string>& top_keywords() {
    static const std::vector<std::string> kw{"component", "universe", "product",
                                             "divide",    "conform",  "laws",
                                             "scenario"};
    return kw;
}

class Parser {
public:
    explicit Parser(const std::string& src) : tokens_(lex(src)) {}

    SpecDocument parse_document() {
        SpecDocument doc;
        while (peek().kind != Token::Kind::end) {
            const Token& t = peek();
            if (t.text == "component") {
                doc.components.push_back(parse_component());
            } else if (t.text == "universe") {
                doc.universes.push_back(parse_universe());
            } else if (t.text == "product") {
                doc.queries.push_back(parse_product());
            } else if (t.text == "divide") {
                doc.queries.push_back(parse_divide());
            } else if (t.text == "conform") {
                doc.queries.push_back(parse_conform());
            } else if (t.text == "laws") {
                doc.queries.push_back(parse_laws());
            } else if (t.text == "scenario") {
                doc.queries.push_back(parse_scenario());
            } else {
                fail("expected a declaration or query, found '" + t.text + "'",
                     "top-level keywords are: component, universe, product, divide, "
                     "conform, laws, scenario");
            }
            check_references(doc);
        }
        return doc;
    }

private:
    std::vector<Token> tokens_;
    std::size_t pos_ = 0;
    std::map<std::string, bool> seen_components_, seen_universes_;

    const Token& peek(std::size_t ahead = 0) const {
        std::size_t i = std::min(pos_ + ahead, tokens_.size() - 1);
        return tokens_[i];
    }
    const Token& next() {
        const Token& t = tokens_[pos_];
        if (pos_ + 1 < tokens_.size()) ++pos_;
        return t;
    }
    [[noreturn]] void fail(const std::string& msg,
                           std::optional<std::string> hint = std::nullopt) const {
        const Token& t = peek();
        throw ParseError{t.line, t.col, msg, std::move(hint)};
    }
    void expect_punct(const std::string& p) {
        if (peek().kind != Token::Kind::punct || peek().text != p)
            fail("expected '" + p + "', found '" + peek().text + "'");
        next();
    }
    void expect_keyword(const std::string& k) {
        if (peek().kind != Token::Kind::name || peek().text != k)
            fail("expected '" + k + "', found '" + peek().text + "'");
        next();
    }
    std::string expect_name() {
        if (peek().kind != Token::Kind::name)
            fail("expected a name, found '" + peek().text + "'");
        return next().text;
    }
    bool at_punct(const std::string& p) const {
        return peek().kind == Token::Kind::punct && peek().text == p;
    }

    std::int64_t parse_int() {
        bool neg = false;
        if (at_punct("-")) { next(); neg = true; }
        if (peek().kind != Token::Kind::number || peek().text.find('.') != std::string::npos)
            fail("expected an integer, found '" + peek().text + "'");
        std::int64_t v = std::stoll(next().text);
        return neg ? -v : v;
    }

    Rational decimal_to_rational(const std::string& text) {
        auto dot = text.find('.');
        if (dot == std::string::npos) return Rational(std::stoll(text));
        std::string whole = text.substr(0, dot);
        std::string frac = text.substr(dot + 1);
        std::int64_t den = 1;
        for (std::size_t k = 0; k < frac.size(); ++k) den *= 10;
        std::int64_t num = std::stoll(whole) * den + (frac.empty() ? 0 : std::stoll(frac));
        return Rational(num, den);
    }

    Rational parse_rational() {
        bool neg = false;
        if (at_punct("-")) { next(); neg = true; }
        if (peek().kind != Token::Kind::number)
            fail("expected a number, found '" + peek().text + "'");
        std::string first = next().text;
        Rational r = decimal_to_rational(first);
        if (at_punct("/")) {
            if (first.find('.') != std::string::npos)
                fail("a fraction must have integer numerator and denominator");
            next();
            if (peek().kind != Token::Kind::number ||
                peek().text.find('.') != std::string::npos)
                fail("expected an integer denominator");
            std::int64_t den = std::stoll(next().text);
            r = Rational(std::stoll(first), den);
        }
        return neg ? -r : r;
    }

    Atom parse_atom() {
        if (at_punct("(")) {  // coordinate (x;y)
            next();
            Rational x = parse_rational();
            expect_punct(";");
            Rational y = parse_rational();
            expect_punct(")");
            return Coord{x, y};
        }
        if (peek().kind == Token::Kind::name) return next().text;
        // Plain integers stay integer atoms; fractions and decimals are
        // rational atoms, so the two shapes round-trip distinctly.
        bool neg = at_punct("-");
        std::size_t save = pos_;
        if (neg) next();
        if (peek().kind == Token::Kind::number && peek().text.find('.') == std::string::npos &&
            !(peek(1).kind == Token::Kind::punct && peek(1).text == "/" &&
              peek(2).kind == Token::Kind::number)) {
            std::int64_t v = std::stoll(next().text);
            return neg ? -v : v;
        }
        pos_ = save;
        return parse_rational();
    }

    Event parse_event() {
        if (at_punct("(")) {  // position event (x;y)_i
            next();
            Rational x = parse_rational();
            expect_punct(";");
            Rational y = parse_rational();
            expect_punct(")");
            expect_punct("_");
            std::int64_t id = parse_int();
            return Event::position(Coord{x, y}, id);
        }
        if (peek().kind != Token::Kind::name && peek().kind != Token::Kind::number)
            fail("expected an event, found '" + peek().text + "'");
        Token head = next();
        std::vector<Atom> args;
        // An argument list must start immediately after the event name;
        // "a (1;0)_2" is an event followed by a position event.
        if (at_punct("(") && peek().offset == head.offset + head.text.size()) {
            next();
            if (!at_punct(")")) {
                args.push_back(parse_atom());
                while (at_punct(",")) {
                    next();
                    args.push_back(parse_atom());
                }
            }
            expect_punct(")");
        }
        return Event::named(head.text, std::move(args));
    }

    EventSet parse_interface_block() {
        expect_keyword("interface");
        expect_punct("{");
        EventSet events;
        if (!at_punct("}")) {
            events.insert(parse_event());
            while (at_punct(",")) {
                next();
                events.insert(parse_event());
            }
        }
        expect_punct("}");
        return events;
    }

    ComponentDecl parse_component() {
        expect_keyword("component");
        Token name_tok = peek();
        std::string name = expect_name();
        if (seen_components_.count(name))
            throw ParseError{name_tok.line, name_tok.col,
                             "duplicate component name '" + name + "'", std::nullopt};
        seen_components_[name] = true;
        expect_punct("{");
        EventSet interface = parse_interface_block();
        expect_keyword("horizon");
        Token hor_tok = peek();
        Rational horizon = parse_rational();
        Behavior behavior;
        while (peek().kind == Token::Kind::name && peek().text == "tes") {
            Token tes_tok = peek();
            next();
            expect_punct("{");
            std::vector<Observation> obs;
            if (!at_punct("}")) {
                obs.push_back(parse_observation());
                while (at_punct(",")) {
                    next();
                    obs.push_back(parse_observation());
                }
            }
            expect_punct("}");
            try {
                behavior.insert(Tes(std::move(obs), horizon));
            } catch (const std::invalid_argument& e) {
                throw ParseError{tes_tok.line, tes_tok.col, e.what(), std::nullopt};
            }
        }
        expect_punct("}");
        try {
            return ComponentDecl{name, Component(std::move(interface), std::move(behavior),
                                                 horizon)};
        } catch (const std::invalid_argument& e) {
            throw ParseError{hor_tok.line, hor_tok.col, e.what(), std::nullopt};
        }
    }

    Observation parse_observation() {
        expect_punct("(");
        Rational t = parse_rational();
        expect_punct(":");
        EventSet events;
        while (!at_punct(")")) events.insert(parse_event());
        expect_punct(")");
        return Observation{std::move(events), t};
    }

    UniverseDecl parse_universe() {
        expect_keyword("universe");
        Token name_tok = peek();
        UniverseDecl u;
        u.name = expect_name();
        if (seen_universes_.count(u.name))
            throw ParseError{name_tok.line, name_tok.col,
                             "duplicate universe name '" + u.name + "'", std::nullopt};
        seen_universes_[u.name] = true;
        expect_punct("{");
        u.interface = parse_interface_block();
        expect_keyword("grid");
        u.grid_lo = parse_rational();
        expect_punct("..");
        u.grid_hi = parse_rational();
        expect_keyword("step");
        u.grid_step = parse_rational();
        if (!(u.grid_step > Rational(0))) fail("grid step must be positive");
        expect_keyword("maxobs");
        std::int64_t m = parse_int();
        if (m < 0) fail("maxobs must be nonnegative");
        u.max_obs = static_cast<std::size_t>(m);
        expect_punct("}");
        return u;
    }

    SigRef parse_sig() {
        Token t = peek();
        std::string name = expect_name();
        if (name != "sync" && name != "rf")
            throw ParseError{t.line, t.col, "unknown signature '" + name + "'",
                             "available signatures: sync, rf, rf(<period>)"};
        SigRef s{name, Rational(1)};
        if (name == "rf" && at_punct("(")) {
            next();
            s.period = parse_rational();
            expect_punct(")");
        }
        return s;
    }

    Choice parse_choice() {
        Token t = peek();
        std::string c = expect_name();
        if (c == "theorem1") return Choice::theorem1_lower_bound;
        if (c == "theorem2") return Choice::theorem2_union;
        if (c == "greatest") return Choice::greatest;
        if (c == "first") return Choice::pick_first_canonical;
        if (c == "cost") return Choice::cost_ranked;
        throw ParseError{t.line, t.col, "unknown choice '" + c + "'",
                         "available choices: theorem1, theorem2, greatest, first, cost"};
    }

    Query parse_product() {
        expect_keyword("product");
        QueryProduct q;
        q.left = expect_name();
        q.right = expect_name();
        expect_keyword("under");
        q.sig = parse_sig();
        if (peek().kind == Token::Kind::name && peek().text == "as") {
            next();
            q.as_name = expect_name();
            if (seen_components_.count(*q.as_name))
                fail("duplicate component name '" + *q.as_name + "'");
            seen_components_[*q.as_name] = true;
        }
        return q;
    }

    Query parse_divide() {
        expect_keyword("divide");
        QueryDivide q;
        q.dividend = expect_name();
        expect_keyword("by");
        q.divisor = expect_name();
        expect_keyword("under");
        q.sig = parse_sig();
        expect_keyword("over");
        q.universe = expect_name();
        expect_keyword("choose");
        q.choice = parse_choice();
        return q;
    }

    Query parse_conform() {
        expect_keyword("conform");
        QueryConform q;
        q.spec = expect_name();
        expect_keyword("to");
        q.plant = expect_name();
        expect_keyword("under");
        q.sig = parse_sig();
        expect_keyword("over");
        q.universe = expect_name();
        expect_keyword("choose");
        q.choice = parse_choice();
        return q;
    }

    Query parse_laws() {
        expect_keyword("laws");
        QueryLaws q;
        q.sig = parse_sig();
        expect_keyword("on");
        expect_punct("{");
        q.witnesses.push_back(expect_name());
        while (at_punct(",")) {
            next();
            q.witnesses.push_back(expect_name());
        }
        expect_punct("}");
        return q;
    }

    Query parse_scenario() {
        expect_keyword("scenario");
        QueryScenario q;
        Token t = peek();
        q.which = expect_name();
        if (q.which != "grid-division" && q.which != "update" && q.which != "sort")
            throw ParseError{t.line, t.col, "unknown scenario '" + q.which + "'",
                             "available scenarios: grid-division, update, sort"};
        while (peek().kind == Token::Kind::name &&
               std::find(top_keywords().begin(), top_keywords().end(), peek().text) ==
                   top_keywords().end()) {
            std::string key = expect_name();
            q.params.emplace_back(key, parse_rational());
        }
        return q;
    }

    // Every query must reference only names declared before it.
    void check_references(const SpecDocument& doc) {
        if (doc.queries.empty()) return;
        const Query& q = doc.queries.back();
        auto need_component = [&](const std::string& n) {
            if (!seen_components_.count(n))
                fail_at_prev("unknown component '" + n + "'");
        };
        auto need_universe = [&](const std::string& n) {
            if (!seen_universes_.count(n)) fail_at_prev("unknown universe '" + n + "'");
        };
        if (auto* p = std::get_if<QueryProduct>(&q)) {
            need_component(p->left);
            need_component(p->right);
        } else if (auto* d = std::get_if<QueryDivide>(&q)) {
            need_component(d->dividend);
            need_component(d->divisor);
            need_universe(d->universe);
        } else if (auto* c = std::get_if<QueryConform>(&q)) {
            need_component(c->spec);
            need_component(c->plant);
            need_universe(c->universe);
        } else if (auto* l = std::get_if<QueryLaws>(&q)) {
            for (const auto& w : l->witnesses) need_component(w);
        }
    }

    [[noreturn]] void fail_at_prev(const std::string& msg) const {
        const Token& t = tokens_[pos_ > 0 ? pos_ - 1 : 0];
        throw ParseError{t.line, t.col, msg, std::nullopt};
    }
};

// ------------------------------------------------------------ serializing

std::string atom_dsl(const Atom& a) {
    struct V {
        std::string operator()(std::int64_t i) const { return std::to_string(i); }
        std::string operator()(const Rational& r) const {
            // Always keep the denominator so rational atoms reparse as
            // rationals, not integers.
            return std::to_string(r.num()) + "/" + std::to_string(r.den());
        }
        std::string operator()(const std::string& s) const { return s; }
        std::string operator()(const Coord& c) const {
            return "(" + c.x.str() + ";" + c.y.str() + ")";
        }
    };
    return std::visit(V{}, a);
}

std::string event_dsl(const Event& e) {
    if (e.is_position())
        return "(" + e.coord().x.str() + ";" + e.coord().y.str() + ")_" +
               std::to_string(e.object_id());
    if (e.args().empty()) return e.name();
    std::string out = e.name() + "(";
    bool first = true;
    for (const auto& a : e.args()) {
        if (!first) out += ",";
        first = false;
        out += atom_dsl(a);
    }
    return out + ")";
}

std::string interface_dsl(const EventSet& s) {
    std::string out = "interface {";
    bool first = true;
    for (const auto& e : s) {
        if (!first) out += ", ";
        first = false;
        out += event_dsl(e);
    }
    return out + "}";
}

std::string sig_dsl(const SigRef& s) {
    if (s.name == "rf" && s.period != Rational(1)) return "rf(" + s.period.str() + ")";
    return s.name;
}

std::string choice_dsl(Choice c) {
    switch (c) {
        case Choice::theorem1_lower_bound: return "theorem1";
        case Choice::theorem2_union: return "theorem2";
        case Choice::greatest: return "greatest";
        case Choice::pick_first_canonical: return "first";
        case Choice::cost_ranked: return "cost";
    }
    return "first";
}

}  // namespace

ParseResult parse(const std::string& source) {
    ParseResult result;
    try {
        Parser p(source);
        result.document = p.parse_document();
    } catch (const ParseError& e) {
        result.diagnostics.push_back(
            Diagnostic{Diagnostic::Severity::error, e.line, e.col, e.message, e.hint});
    }
    return result;
}

std::string serialize_document(const SpecDocument& doc) {
    std::ostringstream out;
    for (const auto& c : doc.components) {
        out << "component " << c.name << " {\n";
        out << "  " << interface_dsl(c.component.interface()) << "\n";
        out << "  horizon " << c.component.horizon().str() << "\n";
        for (const auto& sigma : c.component.behavior()) {
            out << "  tes {";
            bool first = true;
            for (const auto& o : sigma.observations()) {
                out << (first ? " " : ", ") << "(" << o.time.str() << ":";
                first = false;
                for (const auto& e : o.observable) out << " " << event_dsl(e);
                out << ")";
            }
            out << (sigma.observations().empty() ? "}" : " }") << "\n";
        }
        out << "}\n";
    }
    for (const auto& u : doc.universes) {
        out << "universe " << u.name << " {\n";
        out << "  " << interface_dsl(u.interface) << "\n";
        out << "  grid " << u.grid_lo.str() << " .. " << u.grid_hi.str() << " step "
            << u.grid_step.str() << " maxobs " << u.max_obs << "\n";
        out << "}\n";
    }
    for (const auto& q : doc.queries) {
        if (auto* p = std::get_if<QueryProduct>(&q)) {
            out << "product " << p->left << " " << p->right << " under " << sig_dsl(p->sig);
            if (p->as_name) out << " as " << *p->as_name;
            out << "\n";
        } else if (auto* d = std::get_if<QueryDivide>(&q)) {
            out << "divide " << d->dividend << " by " << d->divisor << " under "
                << sig_dsl(d->sig) << " over " << d->universe << " choose "
                << choice_dsl(d->choice) << "\n";
        } else if (auto* c = std::get_if<QueryConform>(&q)) {
            out << "conform " << c->spec << " to " << c->plant << " under " << sig_dsl(c->sig)
                << " over " << c->universe << " choose " << choice_dsl(c->choice) << "\n";
        } else if (auto* l = std::get_if<QueryLaws>(&q)) {
            out << "laws " << sig_dsl(l->sig) << " on {";
            bool first = true;
            for (const auto& w : l->witnesses) {
                if (!first) out << ", ";
                first = false;
                out << w;
            }
            out << "}\n";
        } else if (auto* s = std::get_if<QueryScenario>(&q)) {
            out << "scenario " << s->which;
            for (const auto& [k, v] : s->params) out << " " << k << " " << v.str();
            out << "\n";
        }
    }
    return out.str();
}

std::string render_tes(const Tes& sigma, const std::string& indent) {
    if (sigma.observations().empty()) return indent + "<>\n";
    std::ostringstream out;
    for (const auto& o : sigma.observations())
        out << indent << o.time.str() << ": " << event_set_str(o.observable) << "\n";
    return out.str();
}

std::string render_component(const Component& c, const std::string& indent) {
    std::ostringstream out;
    out << indent << "interface: " << event_set_str(c.interface()) << "\n";
    out << indent << "horizon: " << c.horizon().str() << "\n";
    if (c.behavior().empty()) {
        out << indent << "behavior: {}\n";
        return out.str();
    }
    out << indent << "behavior (" << c.behavior().size() << "):\n";
    for (const auto& sigma : c.behavior()) {
        out << indent << "  tes:" << (sigma.observations().empty() ? " <>" : "") << "\n";
        if (!sigma.observations().empty()) out << render_tes(sigma, indent + "    ");
    }
    return out.str();
}

// -------------------------------------------------------------- executing

namespace {

using json = nlohmann::ordered_json;

json tes_to_json(const Tes& sigma) {
    json arr = json::array();
    for (const auto& o : sigma.observations()) {
        json events = json::array();
        for (const auto& e : o.observable) events.push_back(event_str(e));
        arr.push_back({{"time", o.time.str()}, {"observable", events}});
    }
    return arr;
}

json component_to_json(const Component& c) {
    json interface = json::array();
    for (const auto& e : c.interface()) interface.push_back(event_str(e));
    json behavior = json::array();
    for (const auto& sigma : c.behavior()) behavior.push_back(tes_to_json(sigma));
    return {{"interface", interface}, {"horizon", c.horizon().str()}, {"behavior", behavior}};
}

InteractionSignature make_sig(const SigRef& ref) {
    if (ref.name == "rf") return rf_signature(ref.period);
    return sync_signature();
}

CandidateUniverse make_universe(const UniverseDecl& u, const Rational& horizon) {
    CandidateUniverse out;
    out.interface = u.interface;
    out.max_obs_size = u.max_obs;
    out.horizon = horizon;
    for (Rational t = u.grid_lo; t <= u.grid_hi; t = t + u.grid_step) out.grid.insert(t);
    return out;
}

struct QueryFailure {
    int exit_code;
    std::string message;
};

std::string query_label(const Query& q) {
    if (auto* p = std::get_if<QueryProduct>(&q))
        return "product " + p->left + " " + p->right;
    if (auto* d = std::get_if<QueryDivide>(&q))
        return "divide " + d->dividend + " by " + d->divisor;
    if (auto* c = std::get_if<QueryConform>(&q))
        return "conform " + c->spec + " to " + c->plant;
    if (std::get_if<QueryLaws>(&q)) return "laws";
    if (auto* s = std::get_if<QueryScenario>(&q)) return "scenario " + s->which;
    return "query";
}

scenario::CaseReport run_scenario(const QueryScenario& q) {
    Rational horizon(0), period(1);
    bool have_horizon = false;
    for (const auto& [k, v] : q.params) {
        if (k == "horizon") { horizon = v; have_horizon = true; }
        else if (k == "period") period = v;
        else if (k == "seed") { /* accepted for reproducibility; runs are deterministic */ }
        else throw QueryFailure{1, "unknown scenario parameter '" + k + "'"};
    }
    if (q.which == "grid-division") return scenario::run_case_grid_division();
    if (q.which == "update")
        return scenario::run_case_update(period, have_horizon ? horizon : Rational(10) * period);
    return scenario::run_case_sort(period, have_horizon ? horizon : Rational(6) * period);
}

}  // namespace

ExecOutcome run_document(const SpecDocument& doc, const ExecOptions& opt) {
    ExecOutcome outcome;
    std::map<std::string, Component> env;
    for (const auto& c : doc.components) env[c.name] = c.component;
    std::map<std::string, UniverseDecl> universes;
    for (const auto& u : doc.universes) universes[u.name] = u;

    std::ostringstream text;
    json results = json::array();

    for (const auto& q : doc.queries) {
        std::string label = query_label(q);
        try {
            if (auto* p = std::get_if<QueryProduct>(&q)) {
                Component r = product(env.at(p->left), env.at(p->right), make_sig(p->sig));
                if (p->as_name) env[*p->as_name] = r;
                text << "== " << label << " ==\n" << render_component(r) << "\n";
                json j{{"query", "product"}, {"left", p->left}, {"right", p->right},
                       {"signature", sig_dsl(p->sig)}, {"component", component_to_json(r)}};
                if (p->as_name) j["as"] = *p->as_name;
                results.push_back(std::move(j));
            } else if (auto* d = std::get_if<QueryDivide>(&q)) {
                const Component& a = env.at(d->dividend);
                QuotientQuery qq{a,
                                 env.at(d->divisor),
                                 make_sig(d->sig),
                                 make_universe(universes.at(d->universe), a.horizon()),
                                 Side::commutative,
                                 opt.max_universe,
                                 opt.max_subset_base};
                QuotientResult res = enumerate_quotients(qq);
                text << "== " << label << " ==\n";
                text << "sound-maximal: " << res.sound_maximal.size()
                     << " (contributing " << res.contributing.size() << ", vacuous "
                     << res.vacuous_count << ")\n";
                text << "quotients: " << res.quotients.size() << "\n";
                text << "divisible: " << (res.divisible ? "true" : "false") << "\n";
                if (!res.divisible)
                    throw QueryFailure{1, "no quotient exists at the requested interface"};
                Component chosen = divide(qq, d->choice);
                text << "chosen (" << choice_dsl(d->choice) << "):\n"
                     << render_component(chosen, "  ") << "\n";
                results.push_back({{"query", "divide"},
                                   {"dividend", d->dividend},
                                   {"divisor", d->divisor},
                                   {"signature", sig_dsl(d->sig)},
                                   {"universe", d->universe},
                                   {"choice", choice_dsl(d->choice)},
                                   {"sound_maximal", res.sound_maximal.size()},
                                   {"contributing", res.contributing.size()},
                                   {"vacuous", res.vacuous_count},
                                   {"quotients", res.quotients.size()},
                                   {"chosen", component_to_json(chosen)}});
            } else if (auto* c = std::get_if<QueryConform>(&q)) {
                const Component& a = env.at(c->spec);
                ConformanceQuery cq{a,
                                    env.at(c->plant),
                                    make_sig(c->sig),
                                    make_universe(universes.at(c->universe), a.horizon()),
                                    Side::commutative,
                                    opt.max_universe,
                                    opt.max_subset_base};
                ConformanceResult res = enumerate_coordinators(cq);
                text << "== " << label << " ==\n";
                text << "sound-maximal: " << res.sound_maximal.size() << "\n";
                text << "coordinators: " << res.coordinators.size()
                     << (res.enumerated ? "" : " (greatest only; subset bound exceeded)")
                     << "\n";
                if (!res.greatest)
                    throw QueryFailure{1, "no coordinator exists at the requested interface"};
                Component chosen = principal_coordinator(cq, c->choice);
                text << "chosen (" << choice_dsl(c->choice) << "):\n"
                     << render_component(chosen, "  ") << "\n";
                results.push_back({{"query", "conform"},
                                   {"spec", c->spec},
                                   {"plant", c->plant},
                                   {"signature", sig_dsl(c->sig)},
                                   {"universe", c->universe},
                                   {"choice", choice_dsl(c->choice)},
                                   {"sound_maximal", res.sound_maximal.size()},
                                   {"coordinators", res.coordinators.size()},
                                   {"chosen", component_to_json(chosen)}});
            } else if (auto* l = std::get_if<QueryLaws>(&q)) {
                std::vector<Component> witnesses;
                for (const auto& w : l->witnesses) witnesses.push_back(env.at(w));
                text << "== " << label << " " << sig_dsl(l->sig) << " ==\n";
                json jlaws = json::array();
                bool all_pass = true;
                for (Law law : {Law::commutative, Law::associative, Law::idempotent,
                                Law::monotonic}) {
                    ProductLawReport rep = check_law(law, make_sig(l->sig), witnesses);
                    text << "law " << law_name(law) << ": "
                         << (rep.passed() ? "pass" : "FAIL") << " ("
                         << rep.witnesses_checked << " witnesses)\n";
                    json jl{{"law", law_name(law)},
                            {"passed", rep.passed()},
                            {"witnesses_checked", rep.witnesses_checked}};
                    if (!rep.passed()) {
                        all_pass = false;
                        text << "counterexample:\n";
                        json cj = json::array();
                        for (const auto& comp : *rep.counterexample) {
                            text << render_component(comp, "  ") << "  --\n";
                            cj.push_back(component_to_json(comp));
                        }
                        jl["counterexample"] = std::move(cj);
                    }
                    jlaws.push_back(std::move(jl));
                }
                results.push_back({{"query", "laws"},
                                   {"signature", sig_dsl(l->sig)},
                                   {"laws", std::move(jlaws)}});
                if (!all_pass) outcome.exit_code = std::max(outcome.exit_code, 1);
                text << "\n";
            } else if (auto* s = std::get_if<QueryScenario>(&q)) {
                scenario::CaseReport rep = run_scenario(*s);
                text << "== " << label << " ==\n";
                json jchecks = json::array();
                for (const auto& ch : rep.checks) {
                    text << "check " << ch.name << ": " << (ch.passed ? "pass" : "FAIL")
                         << "\n";
                    jchecks.push_back({{"name", ch.name}, {"passed", ch.passed}});
                }
                if (!rep.details.empty()) text << "details: " << rep.details << "\n";
                text << (rep.passed() ? "case passed" : "case FAILED") << "\n\n";
                results.push_back({{"query", "scenario"},
                                   {"case", rep.name},
                                   {"passed", rep.passed()},
                                   {"checks", std::move(jchecks)},
                                   {"details", rep.details}});
                if (!rep.passed()) outcome.exit_code = std::max(outcome.exit_code, 1);
            }
        } catch (const QueryFailure& f) {
            outcome.diagnostics.push_back(Diagnostic{
                Diagnostic::Severity::error, 1, 1, label + ": " + f.message, std::nullopt});
            outcome.exit_code = std::max(outcome.exit_code, f.exit_code);
        } catch (const UniverseTooLarge& e) {
            outcome.diagnostics.push_back(
                Diagnostic{Diagnostic::Severity::error, 1, 1,
                           label + ": " + e.what(),
                           "raise --max-universe or shrink the universe declaration"});
            outcome.exit_code = std::max(outcome.exit_code, 2);
        } catch (const SubsetBoundExceeded& e) {
            outcome.diagnostics.push_back(
                Diagnostic{Diagnostic::Severity::error, 1, 1, label + ": " + e.what(),
                           "raise --max-subset-base or shrink the candidate pool"});
            outcome.exit_code = std::max(outcome.exit_code, 2);
        } catch (const NotDivisible& e) {
            outcome.diagnostics.push_back(Diagnostic{Diagnostic::Severity::error, 1, 1,
                                                     label + ": " + e.what(), std::nullopt});
            outcome.exit_code = std::max(outcome.exit_code, 1);
        } catch (const NoCoordinator& e) {
            outcome.diagnostics.push_back(Diagnostic{Diagnostic::Severity::error, 1, 1,
                                                     label + ": " + e.what(), std::nullopt});
            outcome.exit_code = std::max(outcome.exit_code, 1);
        } catch (const std::invalid_argument& e) {
            outcome.diagnostics.push_back(Diagnostic{Diagnostic::Severity::error, 1, 1,
                                                     label + ": " + e.what(), std::nullopt});
            outcome.exit_code = std::max(outcome.exit_code, 1);
        }
    }

    if (opt.json) {
        json top{{"schema", 1}, {"results", std::move(results)}};
        if (!outcome.diagnostics.empty()) {
            json diags = json::array();
            for (const auto& d : outcome.diagnostics) diags.push_back(diagnostic_str(d));
            top["diagnostics"] = std::move(diags);
        }
        outcome.output = top.dump(2) + "\n";
    } else {
        outcome.output = text.str();
    }
    return outcome;
}

}  // namespace tes::specio
