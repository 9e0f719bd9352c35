#include "cgo/script.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

namespace cgo::script {

namespace {

std::string trim(std::string_view s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string_view::npos) return {};
    const auto e = s.find_last_not_of(" \t\r");
    return std::string(s.substr(b, e - b + 1));
}

std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> out;
    std::string cur;
    for (char c : s) {
        if (c == sep) {
            out.push_back(trim(cur));
            cur.clear();
        } else {
            cur += c;
        }
    }
    out.push_back(trim(cur));
    return out;
}

std::vector<std::string> split_list(const std::string& s) {
    const std::string t = trim(s);
    if (t.empty() || t == "-") return {};
    return split(t, ',');
}

std::string fmt_number(double v) {
    std::array<char, 64> buf{};
    auto res = std::to_chars(buf.data(), buf.data() + buf.size(), v);
    return std::string(buf.data(), res.ptr);
}

double parse_number(const std::string& text, std::size_t line) {
    double v = 0.0;
    const char* first = text.data();
    const char* last = text.data() + text.size();
    if (!text.empty() && *first == '+') ++first;
    auto res = std::from_chars(first, last, v);
    if (text.empty() || res.ec != std::errc() || res.ptr != last) {
        throw ParseError(line, "expected a number, got '" + text + "'");
    }
    return v;
}

std::int64_t parse_integer(const std::string& text, std::size_t line) {
    const double v = parse_number(text, line);
    if (v != std::floor(v) || std::abs(v) > 9e15) throw ParseError(line, "expected an integer, got '" + text + "'");
    return static_cast<std::int64_t>(v);
}

struct Call {
    std::string name;
    std::vector<std::pair<std::string, std::string>> args;
};

// KIND or KIND(key=value, ...)
Call parse_call(const std::string& text, std::size_t line) {
    Call c;
    const auto open = text.find('(');
    if (open == std::string::npos) {
        c.name = trim(text);
        if (c.name.empty()) throw ParseError(line, "missing rule name");
        return c;
    }
    if (text.back() != ')') throw ParseError(line, "unbalanced parentheses in '" + text + "'");
    c.name = trim(text.substr(0, open));
    const std::string inner = trim(text.substr(open + 1, text.size() - open - 2));
    if (inner.empty()) return c;
    for (const auto& part : split(inner, ',')) {
        const auto eq = part.find('=');
        if (eq == std::string::npos) throw ParseError(line, "expected key=value, got '" + part + "'");
        c.args.emplace_back(trim(part.substr(0, eq)), trim(part.substr(eq + 1)));
    }
    return c;
}

toolbox::RuleInstance parse_rule(const std::string& text, std::size_t line) {
    Call c = parse_call(text, line);
    auto kind = toolbox::kind_from_name(c.name);
    if (!kind) throw ParseError(line, "unknown rule kind '" + c.name + "'");
    const auto& schema = toolbox::param_schema(*kind);
    std::vector<std::pair<std::string, double>> params;
    for (const auto& [k, v] : c.args) {
        auto spec = std::find_if(schema.begin(), schema.end(), [&](const auto& s) { return s.key == k; });
        if (spec != schema.end() && spec->type == toolbox::ParamType::boolean) {
            if (v == "TRUE") {
                params.emplace_back(k, 1.0);
            } else if (v == "FALSE") {
                params.emplace_back(k, 0.0);
            } else {
                throw ParseError(line, c.name + ": " + k + " must be TRUE or FALSE");
            }
        } else {
            params.emplace_back(k, parse_number(v, line));
        }
    }
    try {
        return toolbox::make_rule(*kind, params);
    } catch (const std::invalid_argument& e) {
        throw ParseError(line, e.what());
    }
}

std::string format_rule(const toolbox::RuleInstance& r) {
    std::string s = toolbox::kind_name(r.kind);
    if (r.params.empty()) return s;
    const auto& schema = toolbox::param_schema(r.kind);
    s += "(";
    for (std::size_t i = 0; i < r.params.size(); ++i) {
        if (i) s += ", ";
        const bool boolean = i < schema.size() && schema[i].type == toolbox::ParamType::boolean;
        s += r.params[i].first + "=" +
             (boolean ? std::string(r.params[i].second != 0.0 ? "TRUE" : "FALSE") : fmt_number(r.params[i].second));
    }
    return s + ")";
}

quality::FacilitatorConfig parse_comparator(const std::string& text, std::size_t line) {
    Call c = parse_call(text, line);
    quality::FacilitatorConfig cfg;
    try {
        cfg.rule = quality::rule_from_name(c.name);
    } catch (const std::invalid_argument& e) {
        throw ParseError(line, e.what());
    }
    std::vector<std::pair<std::string, double*>> allowed;
    switch (cfg.rule) {
        case quality::ComparatorRule::O: break;
        case quality::ComparatorRule::P: allowed = {{"C_AP", &cfg.c_ap}}; break;
        case quality::ComparatorRule::S: allowed = {{"C_PF", &cfg.c_pf}}; break;
        case quality::ComparatorRule::RS: allowed = {{"C_ER", &cfg.c_er}}; break;
        case quality::ComparatorRule::O3R:
            allowed = {{"C_RRE", &cfg.c_rre}, {"C_RNU", &cfg.c_rnu}, {"C_RTU", &cfg.c_rtu}};
            break;
    }
    for (const auto& [k, v] : c.args) {
        auto it = std::find_if(allowed.begin(), allowed.end(), [&](const auto& a) { return a.first == k; });
        if (it == allowed.end()) throw ParseError(line, "comparator " + c.name + " has no parameter " + k);
        *it->second = parse_number(v, line);
    }
    return cfg;
}

std::string format_comparator(const quality::FacilitatorConfig& cfg) {
    const std::string name = quality::rule_name(cfg.rule);
    switch (cfg.rule) {
        case quality::ComparatorRule::O: return name;
        case quality::ComparatorRule::P: return name + "(C_AP=" + fmt_number(cfg.c_ap) + ")";
        case quality::ComparatorRule::S: return name + "(C_PF=" + fmt_number(cfg.c_pf) + ")";
        case quality::ComparatorRule::RS: return name + "(C_ER=" + fmt_number(cfg.c_er) + ")";
        case quality::ComparatorRule::O3R:
            return name + "(C_RRE=" + fmt_number(cfg.c_rre) + ", C_RNU=" + fmt_number(cfg.c_rnu) +
                   ", C_RTU=" + fmt_number(cfg.c_rtu) + ")";
    }
    return name;
}

// "$x_GR[4*N]" -> name and size
std::pair<std::string, std::optional<memory::SetSize>> parse_chunk_decl(const std::string& text, std::size_t line) {
    const auto open = text.find('[');
    if (open == std::string::npos) return {text, std::nullopt};
    if (text.back() != ']') throw ParseError(line, "malformed size in '" + text + "'");
    std::string name = trim(text.substr(0, open));
    std::string expr = trim(text.substr(open + 1, text.size() - open - 2));
    memory::SetSize size;
    if (expr == "N") {
        size.factor = 1;
        size.times_agents = true;
    } else if (const auto star = expr.find('*'); star != std::string::npos) {
        if (trim(expr.substr(star + 1)) != "N") throw ParseError(line, "size must be k, N or k*N");
        size.factor = parse_integer(trim(expr.substr(0, star)), line);
        size.times_agents = true;
    } else {
        size.factor = parse_integer(expr, line);
    }
    if (size.factor < 1) throw ParseError(line, "set size must be positive");
    return {name, size};
}

std::string format_size(const memory::SetSize& s) {
    if (!s.times_agents) return "[" + std::to_string(s.factor) + "]";
    if (s.factor == 1) return "[N]";
    return "[" + std::to_string(s.factor) + "*N]";
}

std::string join(const std::vector<std::string>& v) {
    if (v.empty()) return "-";
    std::string s;
    for (std::size_t i = 0; i < v.size(); ++i) s += (i ? ", " : "") + v[i];
    return s;
}

void check_name(const std::string& name, std::size_t line) {
    if (name.empty()) throw ParseError(line, "empty name");
    for (char c : name) {
        if (!(std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '$' || c == '.' || c == '-' ||
              c == '#')) {
            throw ParseError(line, "invalid character in name '" + name + "'");
        }
    }
}

}  // namespace

const GenerativeRow* Script::find_generator(const std::string& id) const {
    for (const auto& g : generators) {
        if (g.id == id) return &g;
    }
    return nullptr;
}

const Case* Script::find_case(const std::string& id) const {
    for (const auto& c : cases) {
        if (c.id == id) return &c;
    }
    return nullptr;
}

Script parse(const std::string& text) {
    Script s;
    enum class Section { none, params, spec_f, spec_mp, spec_g, spec_mm } section = Section::none;
    std::istringstream in(text);
    std::string raw;
    std::size_t line = 0;
    while (std::getline(in, raw)) {
        ++line;
        const std::string l = trim(raw);
        if (l.empty() || l.front() == '#') continue;
        if (l.front() == '[') {
            if (l.back() != ']') throw ParseError(line, "malformed section header");
            const std::string head = trim(l.substr(1, l.size() - 2));
            if (head == "params") {
                section = Section::params;
            } else if (head == "spec-f") {
                section = Section::spec_f;
            } else if (head == "spec-mp") {
                section = Section::spec_mp;
            } else if (head == "spec-g") {
                section = Section::spec_g;
            } else if (head.rfind("spec-mm", 0) == 0) {
                const std::string id = trim(head.substr(7));
                if (id.empty() || id.front() != '#') throw ParseError(line, "case id must start with '#'");
                check_name(id, line);
                section = Section::spec_mm;
                s.cases.push_back({id, {}});
            } else {
                throw ParseError(line, "unknown section '" + head + "'");
            }
            continue;
        }
        switch (section) {
            case Section::none:
                throw ParseError(line, "content outside of a section");
            case Section::params:
            case Section::spec_f: {
                const auto eq = l.find('=');
                if (eq == std::string::npos) throw ParseError(line, "expected key = value");
                const std::string key = trim(l.substr(0, eq));
                const std::string value = trim(l.substr(eq + 1));
                if (section == Section::params) {
                    if (key == "N") {
                        s.agents = parse_integer(value, line);
                    } else if (key == "T") {
                        s.cycles = parse_integer(value, line);
                    } else if (key == "eps_h") {
                        s.eps_h = parse_number(value, line);
                    } else {
                        throw ParseError(line, "unknown parameter '" + key + "'");
                    }
                } else if (key == "comparator") {
                    s.facilitator.config = parse_comparator(value, line);
                } else if (key == "feedback") {
                    check_name(value, line);
                    s.facilitator.feedback = value;
                } else {
                    throw ParseError(line, "unknown facilitator key '" + key + "'");
                }
                break;
            }
            case Section::spec_mp: {
                auto f = split(l, '|');
                auto mem = memory::memory_from_name(f[0]);
                if (!mem) throw ParseError(line, "unknown memory '" + f[0] + "'");
                if (*mem == memory::MemoryId::M_G) {
                    if (f.size() != 2) throw ParseError(line, "M_G declaration takes one chunk name");
                    check_name(f[1], line);
                    s.protocol.generative.push_back(f[1]);
                    break;
                }
                if (f.size() != 5) throw ParseError(line, "protocol row needs 5 fields");
                memory::ProtocolRow r;
                r.memory = *mem;
                auto [name, size] = parse_chunk_decl(f[1], line);
                check_name(name, line);
                r.chunk = name;
                r.size = size;
                if (f[2] != "-") r.init_rule = parse_rule(f[2], line);
                if (f[3] != "-") r.update_rule = parse_rule(f[3], line);
                check_name(f[4], line);
                r.source = f[4];
                s.protocol.rows.push_back(std::move(r));
                break;
            }
            case Section::spec_g: {
                auto f = split(l, '|');
                if (f.size() != 4) throw ParseError(line, "generative row needs 4 fields");
                GenerativeRow g;
                check_name(f[0], line);
                g.id = f[0];
                g.rule = parse_rule(f[1], line);
                g.inputs = split_list(f[2]);
                for (const auto& n : g.inputs) check_name(n, line);
                check_name(f[3], line);
                g.output = f[3];
                s.generators.push_back(std::move(g));
                break;
            }
            case Section::spec_mm: {
                auto f = split(l, '|');
                if (f.size() != 3) throw ParseError(line, "executive row needs 3 fields");
                ExecutiveRow r;
                check_name(f[0], line);
                r.generator = f[0];
                r.updates = split_list(f[1]);
                for (const auto& n : r.updates) check_name(n, line);
                r.weight = parse_number(f[2], line);
                s.cases.back().rows.push_back(std::move(r));
                break;
            }
        }
    }
    return s;
}

Script load(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open script '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse(ss.str());
}

std::string serialize(const Script& s) {
    std::ostringstream out;
    out << "[params]\nN = " << s.agents << "\nT = " << s.cycles << "\n";
    if (s.eps_h) out << "eps_h = " << fmt_number(*s.eps_h) << "\n";
    out << "\n[spec-f]\ncomparator = " << format_comparator(s.facilitator.config) << "\n";
    if (!s.facilitator.feedback.empty()) out << "feedback = " << s.facilitator.feedback << "\n";
    out << "\n[spec-mp]\n";
    for (const auto& g : s.protocol.generative) out << "M_G | " << g << "\n";
    for (const auto& r : s.protocol.rows) {
        out << memory::memory_name(r.memory) << " | " << r.chunk << (r.size ? format_size(*r.size) : "") << " | "
            << (r.init_rule ? format_rule(*r.init_rule) : "-") << " | "
            << (r.update_rule ? format_rule(*r.update_rule) : "-") << " | " << r.source << "\n";
    }
    out << "\n[spec-g]\n";
    for (const auto& g : s.generators) {
        out << g.id << " | " << format_rule(g.rule) << " | " << join(g.inputs) << " | " << g.output << "\n";
    }
    for (const auto& c : s.cases) {
        out << "\n[spec-mm " << c.id << "]\n";
        for (const auto& r : c.rows) {
            out << r.generator << " | " << join(r.updates) << " | " << fmt_number(r.weight) << "\n";
        }
    }
    return out.str();
}

namespace {

enum class Slot { state, set };

// Input signature of each generating rule.
std::vector<Slot> signature(toolbox::RuleKind kind) {
    switch (kind) {
        case toolbox::RuleKind::ge_random: return {};
        case toolbox::RuleKind::ge_de: return {Slot::state, Slot::set};
        case toolbox::RuleKind::ge_ps: return {Slot::state, Slot::state, Slot::state, Slot::set};
        case toolbox::RuleKind::ge_sc: return {Slot::state, Slot::set};
        default: return {};
    }
}

bool contains(const std::vector<std::string>& v, const std::string& x) {
    return std::find(v.begin(), v.end(), x) != v.end();
}

}  // namespace

std::vector<Diagnostic> validate(const Script& s) {
    std::vector<Diagnostic> out = memory::validate_protocol(s.protocol);
    const auto& proto = s.protocol;

    if (s.agents < 1) out.push_back({"parameter-range", "params", "N must be at least 1"});
    if (s.cycles < 1) out.push_back({"parameter-range", "params", "T must be at least 1"});
    if (s.eps_h && !(*s.eps_h > 0.0)) out.push_back({"parameter-range", "params", "eps_h must be positive"});

    const auto& fc = s.facilitator.config;
    if (fc.c_ap < 0 || fc.c_pf < 0 || fc.c_pf > 1 || fc.c_er < 0 || fc.c_rre < 0 || fc.c_rnu < 0 ||
        fc.c_rnu > 1 || fc.c_rtu < 0 || fc.c_rtu > 1) {
        out.push_back({"parameter-range", "spec-f", "comparator setting parameter out of range"});
    }
    if (fc.rule == quality::ComparatorRule::O3R) {
        const auto* fb = proto.find(s.facilitator.feedback);
        if (!fb || (fb->memory != memory::MemoryId::M_SG && fb->memory != memory::MemoryId::M_SD)) {
            out.push_back({"feedback-chunk", "spec-f",
                           "feedback '" + s.facilitator.feedback + "' must name a shared state set"});
        }
    }

    std::vector<memory::Diagnostic> ignore;
    const auto graph = memory::build_updatable_graph(proto, &ignore);
    const bool acyclic = memory::check_forest(graph.nodes.size(), graph.edges).empty();

    for (std::size_t i = 0; i < s.generators.size(); ++i) {
        const auto& g = s.generators[i];
        const std::string loc = "spec-g " + g.id;
        for (std::size_t j = 0; j < i; ++j) {
            if (s.generators[j].id == g.id) out.push_back({"duplicate-generator", loc, "generator id used twice"});
        }
        if (toolbox::family(g.rule.kind) != toolbox::RuleFamily::generating) {
            out.push_back({"type-compatibility", loc, toolbox::kind_name(g.rule.kind) + " is not a generating rule"});
            continue;
        }
        if (!proto.is_generative(g.output)) {
            out.push_back({"generative-output", loc, "output '" + g.output + "' is not an M_G chunk"});
        }
        bool members_ok = true;
        for (const auto& n : g.inputs) {
            const auto* r = proto.find(n);
            if (!r) {
                out.push_back({"generative-membership", loc, "input '" + n + "' is not in M_A or M_S"});
                members_ok = false;
            }
        }
        const auto sig = signature(g.rule.kind);
        bool linkage_ok = sig.size() == g.inputs.size();
        for (std::size_t k = 0; linkage_ok && k < sig.size(); ++k) {
            linkage_ok = memory::is_set_name(g.inputs[k]) == (sig[k] == Slot::set);
        }
        if (!linkage_ok) {
            out.push_back({"parameter-linkage", loc,
                           "inputs do not match the parameter list of " + toolbox::kind_name(g.rule.kind)});
        }
        if (members_ok && acyclic && proto.is_generative(g.output)) {
            // the inputs plus the output must form one connected subtree rooted at the output
            std::vector<std::string> members = g.inputs;
            members.push_back(g.output);
            for (const auto& n : g.inputs) {
                const auto idx = graph.index_of(n);
                const auto parent = idx ? graph.parent_of(*idx) : std::nullopt;
                if (!parent || !contains(members, graph.nodes[*parent])) {
                    out.push_back({"updatable-subtree", loc,
                                   "input '" + n + "' is not connected to " + g.output + " within the input list"});
                }
            }
        }
    }

    for (std::size_t ci = 0; ci < s.cases.size(); ++ci) {
        const auto& c = s.cases[ci];
        const std::string cloc = "spec-mm " + c.id;
        for (std::size_t j = 0; j < ci; ++j) {
            if (s.cases[j].id == c.id) out.push_back({"duplicate-case", cloc, "case id used twice"});
        }
        double total = 0.0;
        std::vector<std::string> e_igm;
        for (const auto& r : c.rows) {
            const auto* g = s.find_generator(r.generator);
            if (!g) {
                out.push_back({"unknown-generator", cloc, "row references unknown generator '" + r.generator + "'"});
                continue;
            }
            if (!(r.weight >= 0.0) || !std::isfinite(r.weight)) {
                out.push_back({"weight-range", cloc + " " + r.generator, "C_W must be a non-negative number"});
                continue;
            }
            total += r.weight;
            if (r.weight == 0.0) continue;
            for (const auto& n : g->inputs) {
                if (proto.is_genuine(n) && !contains(e_igm, n)) e_igm.push_back(n);
            }
        }
        if (!(total > 0.0)) out.push_back({"zero-total-weight", cloc, "no row has a positive C_W"});
        for (const auto& r : c.rows) {
            const auto* g = s.find_generator(r.generator);
            if (!g || !(r.weight > 0.0)) continue;
            const std::string rloc = cloc + " " + r.generator;
            for (std::size_t k = 0; k < r.updates.size(); ++k) {
                for (std::size_t j = 0; j < k; ++j) {
                    if (r.updates[j] == r.updates[k]) {
                        out.push_back({"update-list-duplicate", rloc, "'" + r.updates[k] + "' listed twice"});
                    }
                }
            }
            for (const auto& n : g->inputs) {
                if (proto.is_genuine(n) && !contains(r.updates, n)) {
                    out.push_back({"update-list-coverage", rloc,
                                   "genuine input '" + n + "' is missing from the updating list"});
                }
            }
            for (const auto& n : r.updates) {
                if (!contains(e_igm, n)) {
                    out.push_back({"update-list-scope", rloc,
                                   "'" + n + "' is not a genuine input of any active generator in the case"});
                }
            }
        }
    }
    return out;
}

void require_valid(const Script& script) {
    const auto diags = validate(script);
    if (diags.empty()) return;
    std::string msg = "invalid script:";
    for (const auto& d : diags) msg += "\n  " + memory::format(d);
    throw std::invalid_argument(msg);
}

RunnableCase resolve_case(const Script& script, const std::string& case_id) {
    const Case* c = script.find_case(case_id);
    if (!c) {
        std::string ids;
        for (const auto& k : script.cases) ids += (ids.empty() ? "" : ", ") + k.id;
        throw std::out_of_range("unknown case '" + case_id + "'; available: " + ids);
    }
    RunnableCase rc;
    rc.id = c->id;
    double total = 0.0;
    for (const auto& r : c->rows) {
        if (r.weight > 0.0) total += r.weight;
    }
    if (!(total > 0.0)) throw std::invalid_argument("case " + case_id + " has no row with positive C_W");
    double acc = 0.0;
    for (const auto& r : c->rows) {
        if (!(r.weight > 0.0)) continue;
        const auto* g = script.find_generator(r.generator);
        if (!g) throw std::invalid_argument("case " + case_id + " references unknown generator " + r.generator);
        acc += r.weight;
        rc.rows.push_back({g, r.updates, r.weight, r.weight / total, acc / total});
    }
    rc.rows.back().cumulative = 1.0;
    return rc;
}

}  // namespace cgo::script
