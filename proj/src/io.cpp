#include "thickpave/io.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <map>
#include <sstream>
#include <stdexcept>

#include "json.hpp"

#include "thickpave/errors.hpp"

namespace thickpave {

namespace {

const char* kReservedFunctions[] = {"sin", "cos", "sqrt", "sqr"};

bool is_reserved(const std::string& name) {
    for (const char* f : kReservedFunctions)
        if (name == f) return true;
    return false;
}

bool valid_ident(const std::string& name) {
    if (name.empty()) return false;
    if (!std::isalpha(static_cast<unsigned char>(name[0])) && name[0] != '_') return false;
    for (char c : name)
        if (!std::isalnum(static_cast<unsigned char>(c)) && c != '_') return false;
    return true;
}

struct Line {
    int number;
    std::string text;
};

std::vector<Line> split_lines(const std::string& text) {
    std::vector<Line> lines;
    std::istringstream in(text);
    std::string raw;
    int number = 0;
    while (std::getline(in, raw)) {
        ++number;
        auto hash = raw.find('#');
        if (hash != std::string::npos) raw.erase(hash);
        auto begin = raw.find_first_not_of(" \t\r");
        if (begin == std::string::npos) continue;
        auto end = raw.find_last_not_of(" \t\r");
        lines.push_back({number, raw.substr(begin, end - begin + 1)});
    }
    return lines;
}

std::vector<std::string> split_words(const std::string& s) {
    std::vector<std::string> out;
    std::istringstream in(s);
    std::string w;
    while (in >> w) out.push_back(w);
    return out;
}

[[noreturn]] void fail(int line, int col, const std::string& msg) {
    throw ParseError(line, col, msg);
}

// Parses "[lo,hi]" starting at pos; advances pos past the bracket. Bounds
// must be finite.
Interval parse_bracket_interval(const std::string& s, std::size_t& pos, int line) {
    auto skip = [&] {
        while (pos < s.size() && (s[pos] == ' ' || s[pos] == '\t')) ++pos;
    };
    auto number = [&] {
        char* end = nullptr;
        double v = std::strtod(s.c_str() + pos, &end);
        if (end == s.c_str() + pos || !std::isfinite(v))
            fail(line, static_cast<int>(pos) + 1, "expected a finite number");
        pos = static_cast<std::size_t>(end - s.c_str());
        return v;
    };
    skip();
    if (pos >= s.size() || s[pos] != '[')
        fail(line, static_cast<int>(pos) + 1, "expected '['");
    ++pos;
    double lo = number();
    skip();
    if (pos >= s.size() || s[pos] != ',')
        fail(line, static_cast<int>(pos) + 1, "expected ','");
    ++pos;
    double hi = number();
    skip();
    if (pos >= s.size() || s[pos] != ']')
        fail(line, static_cast<int>(pos) + 1, "expected ']'");
    ++pos;
    return Interval(lo, hi);
}

// Splits "( e1 , e2 , ... )" on top-level commas.
std::vector<std::string> split_tuple(const std::string& s, int line) {
    auto open = s.find('(');
    if (open == std::string::npos) fail(line, 1, "expected '(' starting the component list");
    auto close = s.rfind(')');
    if (close == std::string::npos || close < open)
        fail(line, static_cast<int>(s.size()), "expected ')' closing the component list");
    std::vector<std::string> parts;
    int depth = 0;
    std::size_t start = open + 1;
    for (std::size_t i = open + 1; i < close; ++i) {
        if (s[i] == '(') ++depth;
        else if (s[i] == ')') --depth;
        else if (s[i] == ',' && depth == 0) {
            parts.push_back(s.substr(start, i - start));
            start = i + 1;
        }
    }
    parts.push_back(s.substr(start, close - start));
    return parts;
}

struct NamedSet {
    Expr constraint;
    int line;
};

// Recursive-descent parser for the region line. '&' over '|', '!' only in
// front of a set name.
struct RegionParser {
    const std::string& s;
    int line;
    const std::map<std::string, NamedSet>& sets;
    const Box& param_box;
    std::size_t pos = 0;

    void skip() {
        while (pos < s.size() && (s[pos] == ' ' || s[pos] == '\t')) ++pos;
    }

    char peek() {
        skip();
        return pos < s.size() ? s[pos] : '\0';
    }

    RegionPtr parse() {
        RegionPtr r = parse_or();
        if (peek() != '\0')
            fail(line, static_cast<int>(pos) + 1, "trailing input after region expression");
        return r;
    }

    RegionPtr parse_or() {
        std::vector<RegionPtr> children{parse_and()};
        while (peek() == '|') {
            ++pos;
            children.push_back(parse_and());
        }
        return region_or(std::move(children));
    }

    RegionPtr parse_and() {
        std::vector<RegionPtr> children{parse_atom()};
        while (peek() == '&') {
            ++pos;
            children.push_back(parse_atom());
        }
        return region_and(std::move(children));
    }

    RegionPtr parse_atom() {
        char c = peek();
        if (c == '(') {
            ++pos;
            RegionPtr r = parse_or();
            if (peek() != ')')
                fail(line, static_cast<int>(pos) + 1, "expected ')'");
            ++pos;
            return r;
        }
        bool negate = false;
        if (c == '!') {
            ++pos;
            negate = true;
            if (peek() == '(' || peek() == '!')
                fail(line, static_cast<int>(pos) + 1,
                     "'!' applies only to set names, not composite regions");
        }
        std::size_t at = pos;
        std::string name = read_name();
        auto it = sets.find(name);
        if (it == sets.end())
            fail(line, static_cast<int>(at) + 1, "unknown set '" + name + "'");
        Expr c_expr = it->second.constraint;
        if (negate) return region_leaf("!" + name, neg(c_expr), param_box);
        return region_leaf(name, c_expr, param_box);
    }

    std::string read_name() {
        skip();
        std::size_t start = pos;
        while (pos < s.size() &&
               (std::isalnum(static_cast<unsigned char>(s[pos])) || s[pos] == '_'))
            ++pos;
        if (pos == start)
            fail(line, static_cast<int>(pos) + 1, "expected a set name");
        return s.substr(start, pos - start);
    }
};

} // namespace

SystemDef parse_system(const std::string& text) {
    std::vector<Line> lines = split_lines(text);

    SystemDef sys;
    std::vector<Interval> param_intervals;

    // Pass 1: declarations.
    for (const auto& ln : lines) {
        std::istringstream in(ln.text);
        std::string head;
        in >> head;
        if (head == "state") {
            std::string name;
            while (in >> name) {
                if (!valid_ident(name) || is_reserved(name))
                    fail(ln.number, 1, "invalid state name '" + name + "'");
                if (sys.decl.is_declared(name))
                    fail(ln.number, 1, "duplicate declaration of '" + name + "'");
                sys.decl.states.push_back(name);
            }
            if (sys.decl.states.empty())
                fail(ln.number, 1, "state line declares no variables");
        } else if (head == "param") {
            std::string name, kw;
            in >> name >> kw;
            if (!valid_ident(name) || is_reserved(name))
                fail(ln.number, 1, "invalid parameter name '" + name + "'");
            if (sys.decl.is_declared(name))
                fail(ln.number, 1, "duplicate declaration of '" + name + "'");
            if (kw != "in") fail(ln.number, 1, "expected 'in' after the parameter name");
            std::string rest;
            std::getline(in, rest);
            std::size_t pos = 0;
            Interval iv = parse_bracket_interval(rest, pos, ln.number);
            if (iv.is_empty())
                fail(ln.number, 1, "empty parameter interval for '" + name + "'");
            sys.decl.params.push_back(name);
            param_intervals.push_back(iv);
        }
    }
    sys.param_box = Box(param_intervals);

    // Pass 2: everything that references the declarations.
    std::map<std::string, NamedSet> sets;
    bool have_field_a = false, have_field_b = false;
    bool have_region = false, have_domain = false, have_epsilon = false;
    std::string region_text;
    int region_line = 0;

    for (const auto& ln : lines) {
        auto words = split_words(ln.text);
        const std::string& head = words[0];
        if (head == "state" || head == "param") continue;

        if (head == "field") {
            if (words.size() < 2 || (words[1] != "a" && words[1] != "b"))
                fail(ln.number, 1, "expected 'field a :' or 'field b :'");
            bool is_a = words[1] == "a";
            if ((is_a && have_field_a) || (!is_a && have_field_b))
                fail(ln.number, 1, "duplicate field definition");
            auto colon = ln.text.find(':');
            if (colon == std::string::npos) fail(ln.number, 1, "expected ':' in field line");
            auto parts = split_tuple(ln.text.substr(colon + 1), ln.number);
            if (parts.size() != sys.decl.states.size())
                fail(ln.number, 1,
                     "field " + words[1] + " has " + std::to_string(parts.size()) +
                         " components for " + std::to_string(sys.decl.states.size()) +
                         " state variables");
            std::vector<Expr> comps;
            for (const auto& part : parts)
                comps.push_back(parse_expr(part, sys.decl, ln.number));
            (is_a ? sys.field_a : sys.field_b) = std::move(comps);
            (is_a ? have_field_a : have_field_b) = true;
        } else if (head == "set") {
            auto assign = ln.text.find(":=");
            if (assign == std::string::npos) fail(ln.number, 1, "expected ':=' in set line");
            auto name_words = split_words(ln.text.substr(3, assign - 3));
            if (name_words.size() != 1 || !valid_ident(name_words[0]) ||
                is_reserved(name_words[0]))
                fail(ln.number, 1, "expected a single set name before ':='");
            const std::string& name = name_words[0];
            if (sets.count(name) || sys.decl.is_declared(name))
                fail(ln.number, 1, "duplicate name '" + name + "'");
            std::string rhs = ln.text.substr(assign + 2);
            auto le = rhs.rfind("<=");
            if (le == std::string::npos)
                fail(ln.number, 1, "set definition must end with '<= 0'");
            auto zero_words = split_words(rhs.substr(le + 2));
            if (zero_words.size() != 1 || (zero_words[0] != "0" && zero_words[0] != "0.0"))
                fail(ln.number, 1, "set definition must compare against 0");
            Expr c = parse_expr(rhs.substr(0, le), sys.decl, ln.number);
            sets.emplace(name, NamedSet{c, ln.number});
        } else if (head == "region") {
            if (have_region) fail(ln.number, 1, "duplicate region line");
            auto assign = ln.text.find(":=");
            if (assign == std::string::npos)
                fail(ln.number, 1, "expected ':=' in region line");
            region_text = ln.text.substr(assign + 2);
            region_line = ln.number;
            have_region = true;
        } else if (head == "domain") {
            if (have_domain) fail(ln.number, 1, "duplicate domain line");
            std::string rest = ln.text.substr(6);
            std::vector<Interval> dims;
            std::size_t pos = 0;
            for (;;) {
                dims.push_back(parse_bracket_interval(rest, pos, ln.number));
                while (pos < rest.size() && (rest[pos] == ' ' || rest[pos] == '\t')) ++pos;
                if (pos >= rest.size()) break;
                if (rest[pos] != 'x')
                    fail(ln.number, static_cast<int>(pos) + 1,
                         "expected 'x' between domain intervals");
                ++pos;
            }
            if (dims.size() != sys.decl.states.size())
                fail(ln.number, 1, "domain has " + std::to_string(dims.size()) +
                                       " components for " +
                                       std::to_string(sys.decl.states.size()) +
                                       " state variables");
            sys.domain = Box(std::move(dims));
            if (sys.domain.is_empty()) fail(ln.number, 1, "domain box is empty");
            have_domain = true;
        } else if (head == "epsilon") {
            if (have_epsilon) fail(ln.number, 1, "duplicate epsilon line");
            if (words.size() != 2) fail(ln.number, 1, "expected 'epsilon <value>'");
            char* end = nullptr;
            sys.epsilon = std::strtod(words[1].c_str(), &end);
            if (*end != '\0' || !(sys.epsilon > 0.0))
                fail(ln.number, 1, "epsilon must be a positive number");
            have_epsilon = true;
        } else {
            fail(ln.number, 1, "unknown directive '" + head + "'");
        }
    }

    if (sys.decl.states.empty()) fail(1, 1, "missing 'state' declaration");
    if (!have_field_a) fail(1, 1, "missing 'field a' definition");
    if (!have_field_b) fail(1, 1, "missing 'field b' definition");
    if (!have_region) fail(1, 1, "missing 'region' line");
    if (!have_domain) fail(1, 1, "missing 'domain' line");
    if (!have_epsilon) fail(1, 1, "missing 'epsilon' line");

    RegionParser rp{region_text, region_line, sets, sys.param_box};
    sys.region = rp.parse();
    return sys;
}

// ---------------------------------------------------------------------------
// JSON
// ---------------------------------------------------------------------------

namespace {

std::string num17(double v) {
    if (!std::isfinite(v))
        throw std::invalid_argument("write_paving: non-finite bound cannot be serialized");
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

void append_box(std::string& out, const Box& box) {
    out += '[';
    for (std::size_t i = 0; i < box.size(); ++i) {
        if (i) out += ',';
        out += '[';
        out += num17(box[i].lo());
        out += ',';
        out += num17(box[i].hi());
        out += ']';
    }
    out += ']';
}

} // namespace

std::string write_paving(const Paving& paving) {
    std::string out;
    out.reserve(64 + paving.entries.size() * 64);
    out += "{\"domain\":";
    append_box(out, paving.domain);
    out += ",\"epsilon\":";
    out += num17(paving.epsilon);
    out += ",\"entries\":[";
    for (std::size_t i = 0; i < paving.entries.size(); ++i) {
        if (i) out += ',';
        out += "{\"box\":";
        append_box(out, paving.entries[i].box);
        out += ",\"class\":\"";
        out += box_class_name(paving.entries[i].cls);
        out += "\"}";
    }
    out += "],\"counts\":{";
    for (std::size_t c = 0; c < 4; ++c) {
        if (c) out += ',';
        out += '"';
        out += box_class_name(static_cast<BoxClass>(c));
        out += "\":";
        out += std::to_string(paving.meta.counts[c]);
    }
    out += "},\"meta\":{\"bisections\":";
    out += std::to_string(paving.meta.bisections);
    out += "}}";
    return out;
}

Paving read_paving(const std::string& json_text) {
    nlohmann::json doc = nlohmann::json::parse(json_text);

    auto to_box = [](const nlohmann::json& j) {
        std::vector<Interval> comps;
        for (const auto& pair : j) {
            if (!pair.is_array() || pair.size() != 2)
                throw std::invalid_argument("read_paving: malformed box component");
            comps.emplace_back(pair[0].get<double>(), pair[1].get<double>());
        }
        return Box(std::move(comps));
    };

    Paving paving;
    paving.domain = to_box(doc.at("domain"));
    paving.epsilon = doc.at("epsilon").get<double>();
    for (const auto& je : doc.at("entries")) {
        auto cls = box_class_from_name(je.at("class").get<std::string>());
        if (!cls) throw std::invalid_argument("read_paving: unknown entry class");
        paving.entries.push_back({to_box(je.at("box")), *cls});
    }
    for (const auto& e : paving.entries)
        ++paving.meta.counts[static_cast<std::size_t>(e.cls)];
    if (doc.contains("meta") && doc["meta"].contains("bisections"))
        paving.meta.bisections = doc["meta"]["bisections"].get<std::uint64_t>();
    return paving;
}

// ---------------------------------------------------------------------------
// SVG
// ---------------------------------------------------------------------------

std::string render_svg(const Paving& paving, const StyleMap& style) {
    if (paving.domain.size() != 2)
        throw std::invalid_argument("render_svg: only 2-D pavings are supported");

    const Interval& dx = paving.domain[0];
    const Interval& dy = paving.domain[1];
    double wx = dx.width();
    double wy = dy.width();
    int img_w = style.image_size;
    int img_h = wx > 0.0 ? static_cast<int>(std::lround(img_w * wy / wx)) : img_w;
    if (img_h <= 0) img_h = 1;

    // World y grows upward; SVG y grows downward. Mirroring about the
    // domain's horizontal midline keeps the viewBox equal to the domain.
    auto flip_y = [&](double y_hi) { return dy.lo() + dy.hi() - y_hi; };

    std::string out;
    out.reserve(128 + paving.entries.size() * 96);
    out += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" +
           std::to_string(img_w) + "\" height=\"" + std::to_string(img_h) +
           "\" viewBox=\"" + num17(dx.lo()) + " " + num17(dy.lo()) + " " +
           num17(wx) + " " + num17(wy) + "\">\n";
    for (const auto& e : paving.entries) {
        const Box& b = e.box;
        out += "<rect x=\"" + num17(b[0].lo()) + "\" y=\"" + num17(flip_y(b[1].hi())) +
               "\" width=\"" + num17(b[0].width()) + "\" height=\"" +
               num17(b[1].width()) + "\" fill=\"" +
               style.fill[static_cast<std::size_t>(e.cls)] +
               "\" shape-rendering=\"crispEdges\"/>\n";
    }
    out += "<rect x=\"" + num17(dx.lo()) + "\" y=\"" + num17(dy.lo()) + "\" width=\"" +
           num17(wx) + "\" height=\"" + num17(wy) +
           "\" fill=\"none\" stroke=\"black\" stroke-width=\"" +
           num17(style.stroke_width > 0.0 ? style.stroke_width : wx / 400.0) + "\"/>\n";
    out += "</svg>\n";
    return out;
}

} // namespace thickpave
