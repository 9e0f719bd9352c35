#include "cgo/memory.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>

namespace cgo::memory {

std::string memory_name(MemoryId id) {
    switch (id) {
        case MemoryId::M_A: return "M_A";
        case MemoryId::M_SG: return "M_SG";
        case MemoryId::M_SD: return "M_SD";
        case MemoryId::M_G: return "M_G";
    }
    return "?";
}

std::optional<MemoryId> memory_from_name(const std::string& name) {
    if (name == "M_A") return MemoryId::M_A;
    if (name == "M_SG") return MemoryId::M_SG;
    if (name == "M_SD") return MemoryId::M_SD;
    if (name == "M_G") return MemoryId::M_G;
    return std::nullopt;
}

bool is_set_name(const std::string& chunk) { return !chunk.empty() && chunk.front() == '$'; }

const ProtocolRow* Protocol::find(const std::string& chunk) const {
    for (const auto& r : rows) {
        if (r.chunk == chunk) return &r;
    }
    return nullptr;
}

bool Protocol::is_generative(const std::string& chunk) const {
    return std::find(generative.begin(), generative.end(), chunk) != generative.end();
}

bool Protocol::is_genuine(const std::string& chunk) const {
    const auto* r = find(chunk);
    return r && (r->memory == MemoryId::M_A || r->memory == MemoryId::M_SG);
}

std::string format(const Diagnostic& d) {
    std::string s = "[" + d.rule + "]";
    if (!d.location.empty()) s += " " + d.location + ":";
    return s + " " + d.message;
}

std::optional<std::size_t> UpdatableGraph::index_of(const std::string& name) const {
    auto it = std::find(nodes.begin(), nodes.end(), name);
    if (it == nodes.end()) return std::nullopt;
    return static_cast<std::size_t>(it - nodes.begin());
}

std::optional<std::size_t> UpdatableGraph::parent_of(std::size_t node) const {
    for (const auto& [p, c] : edges) {
        if (c == node) return p;
    }
    return std::nullopt;
}

std::vector<std::size_t> UpdatableGraph::children_of(std::size_t node) const {
    std::vector<std::size_t> out;
    for (const auto& [p, c] : edges) {
        if (p == node) out.push_back(c);
    }
    return out;
}

std::size_t UpdatableGraph::root_of(std::size_t node) const {
    std::size_t cur = node;
    for (std::size_t steps = 0; steps <= nodes.size(); ++steps) {
        auto p = parent_of(cur);
        if (!p) return cur;
        cur = *p;
    }
    throw std::logic_error("root_of: graph contains a cycle");
}

UpdatableGraph build_updatable_graph(const Protocol& protocol, std::vector<Diagnostic>* diagnostics) {
    UpdatableGraph g;
    auto add = [&](const std::string& n) {
        if (!g.index_of(n)) g.nodes.push_back(n);
    };
    for (const auto& n : protocol.generative) add(n);
    for (const auto& r : protocol.rows) add(r.chunk);
    for (std::size_t i = 0; i < protocol.rows.size(); ++i) {
        const auto& r = protocol.rows[i];
        auto src = g.index_of(r.source);
        if (!src) {
            if (diagnostics) {
                diagnostics->push_back({"dangling-source", "spec-mp row " + std::to_string(i + 1),
                                        "update source '" + r.source + "' of " + r.chunk + " names no chunk"});
            }
            continue;
        }
        g.edges.emplace_back(*src, *g.index_of(r.chunk));
    }
    std::vector<int> indeg(g.nodes.size(), 0);
    for (const auto& e : g.edges) ++indeg[e.second];
    for (std::size_t v = 0; v < g.nodes.size(); ++v) {
        if (indeg[v] == 0) g.roots.push_back(v);
    }
    return g;
}

std::vector<Diagnostic> check_forest(std::size_t node_count,
                                     const std::vector<std::pair<std::size_t, std::size_t>>& edges,
                                     const std::vector<std::string>& names) {
    auto label = [&](std::size_t v) { return v < names.size() ? names[v] : "#" + std::to_string(v); };
    std::vector<Diagnostic> out;
    std::vector<std::vector<std::size_t>> adj(node_count);
    std::vector<int> indeg(node_count, 0);
    for (const auto& [p, c] : edges) {
        if (p >= node_count || c >= node_count) throw std::out_of_range("check_forest: edge endpoint out of range");
        adj[p].push_back(c);
        ++indeg[c];
    }
    for (std::size_t v = 0; v < node_count; ++v) {
        if (indeg[v] > 1) {
            out.push_back({"multiple-parents", label(v), "chunk has " + std::to_string(indeg[v]) + " update sources"});
        }
    }
    // v lies on a directed cycle iff v is reachable from one of its successors
    std::string on_cycle;
    for (std::size_t v = 0; v < node_count; ++v) {
        std::vector<char> seen(node_count, 0);
        std::vector<std::size_t> stack(adj[v].begin(), adj[v].end());
        bool found = false;
        while (!stack.empty() && !found) {
            const std::size_t u = stack.back();
            stack.pop_back();
            if (u == v) {
                found = true;
            } else if (!seen[u]) {
                seen[u] = 1;
                stack.insert(stack.end(), adj[u].begin(), adj[u].end());
            }
        }
        if (found) on_cycle += (on_cycle.empty() ? "" : ", ") + label(v);
    }
    if (!on_cycle.empty()) {
        out.push_back({"cycle", "updatable graph", "chunks on a directed cycle: " + on_cycle});
    }
    return out;
}

namespace {

bool has_family(const std::optional<toolbox::RuleInstance>& r, toolbox::RuleFamily f) {
    return r && toolbox::family(r->kind) == f;
}

}  // namespace

std::vector<Diagnostic> validate_protocol(const Protocol& protocol) {
    std::vector<Diagnostic> out;
    auto row_loc = [](std::size_t i) { return "spec-mp row " + std::to_string(i + 1); };

    std::vector<std::string> seen;
    auto check_unique = [&](const std::string& name, const std::string& loc) {
        if (std::find(seen.begin(), seen.end(), name) != seen.end()) {
            out.push_back({"duplicate-chunk", loc, "chunk name '" + name + "' is declared more than once"});
        } else {
            seen.push_back(name);
        }
    };
    for (const auto& g : protocol.generative) {
        check_unique(g, "M_G");
        if (is_set_name(g)) {
            out.push_back({"solution-property", "M_G", "generative chunk '" + g + "' must be a single state"});
        }
    }
    for (std::size_t i = 0; i < protocol.rows.size(); ++i) check_unique(protocol.rows[i].chunk, row_loc(i));

    for (std::size_t i = 0; i < protocol.rows.size(); ++i) {
        const auto& r = protocol.rows[i];
        const std::string loc = row_loc(i);
        const bool set = is_set_name(r.chunk);
        switch (r.memory) {
            case MemoryId::M_G:
                out.push_back({"type-compatibility", loc, "M_G chunks are declared without a protocol row"});
                continue;
            case MemoryId::M_SD: {
                if (r.init_rule || r.update_rule) {
                    out.push_back({"type-compatibility", loc, "dependent chunk " + r.chunk + " takes no rules"});
                }
                if (!set) out.push_back({"type-compatibility", loc, "dependent chunk " + r.chunk + " must be a set"});
                if (r.size) out.push_back({"type-compatibility", loc, "dependent chunk " + r.chunk + " has no size"});
                const auto* src = protocol.find(r.source);
                if ((src && src->memory != MemoryId::M_A) || (!src && protocol.is_generative(r.source))) {
                    out.push_back({"source-memory", loc, "dependent chunk must reference an M_A chunk"});
                }
                continue;
            }
            case MemoryId::M_A:
                if (set) out.push_back({"type-compatibility", loc, "M_A chunk " + r.chunk + " must be a single state"});
                if (r.size) out.push_back({"type-compatibility", loc, "M_A chunk " + r.chunk + " has no size"});
                break;
            case MemoryId::M_SG:
                if (!set) out.push_back({"type-compatibility", loc, "M_SG chunk " + r.chunk + " must be a set"});
                if (!r.size || r.size->factor < 1) {
                    out.push_back({"type-compatibility", loc, "M_SG chunk " + r.chunk + " needs a positive size"});
                }
                break;
        }
        if (!has_family(r.init_rule, toolbox::RuleFamily::initializing)) {
            out.push_back({"type-compatibility", loc, r.chunk + " needs an initializing rule"});
        }
        if (!has_family(r.update_rule, toolbox::RuleFamily::updating)) {
            out.push_back({"type-compatibility", loc, r.chunk + " needs an updating rule"});
        } else {
            const bool set_rule = r.update_rule->kind == toolbox::RuleKind::ue_tournament;
            if (set_rule != set) {
                out.push_back({"type-compatibility", loc,
                               toolbox::kind_name(r.update_rule->kind) + " cannot update " + r.chunk});
            }
        }
        const auto* src = protocol.find(r.source);
        if (src && src->memory != MemoryId::M_A) {
            out.push_back({"source-memory", loc, "update source of " + r.chunk + " must lie in M_A or M_G"});
        }
    }

    std::vector<Diagnostic> graph_diags;
    auto graph = build_updatable_graph(protocol, &graph_diags);
    out.insert(out.end(), graph_diags.begin(), graph_diags.end());
    auto forest = check_forest(graph.nodes.size(), graph.edges, graph.nodes);
    out.insert(out.end(), forest.begin(), forest.end());

    for (std::size_t v : graph.roots) {
        const std::string& n = graph.nodes[v];
        const auto* row = protocol.find(n);
        const bool dangling = row && !graph.index_of(row->source);
        if (!protocol.is_generative(n) && !dangling) {
            out.push_back({"root-not-generative", n, "tree root is not an M_G chunk"});
        }
    }
    for (const auto& r : protocol.rows) {
        if (r.memory != MemoryId::M_SG && r.memory != MemoryId::M_SD) continue;
        auto idx = graph.index_of(r.chunk);
        if (idx && !graph.children_of(*idx).empty()) {
            out.push_back({"shared-chunk-not-leaf", r.chunk, "shared chunk is used as an update source"});
        }
    }
    return out;
}

MemorySystem::MemorySystem(const Protocol& protocol, const problem::ConstrainedProblem& problem,
                           std::size_t agents)
    : problem_(&problem), rows_(protocol.rows), agents_(agents) {
    if (agents == 0) throw std::invalid_argument("MemorySystem: at least one agent is required");
    auto diags = validate_protocol(protocol);
    if (!diags.empty()) {
        throw std::invalid_argument("MemorySystem: invalid protocol: " + format(diags.front()));
    }
    constexpr std::size_t none = static_cast<std::size_t>(-1);
    for (const auto& g : protocol.generative) {
        chunks_.push_back({g, MemoryId::M_G, false, none, generated_.size(), none});
        generated_.emplace_back();
    }
    for (std::size_t i = 0; i < rows_.size(); ++i) {
        const auto& r = rows_[i];
        ChunkInfo info{r.chunk, r.memory, is_set_name(r.chunk), i, none, none};
        if (r.memory == MemoryId::M_A) {
            info.slot = agent_cells_.size();
            agent_cells_.emplace_back(agents);
            agent_buffers_.emplace_back(agents);
            agent_rows_.push_back(i);
        } else if (r.memory == MemoryId::M_SG) {
            info.slot = shared_cells_.size();
            shared_cells_.emplace_back();
            shared_buffers_.emplace_back();
            shared_sizes_.push_back(r.size->resolve(agents));
            shared_rows_.push_back(i);
        }
        chunks_.push_back(info);
    }
    for (auto& c : chunks_) {
        if (c.memory == MemoryId::M_G) continue;
        c.source = chunk(rows_[c.row].source);
        if (c.memory == MemoryId::M_SD) c.slot = chunks_[c.source].slot;
    }
}

std::size_t MemorySystem::chunk(const std::string& name) const {
    for (std::size_t i = 0; i < chunks_.size(); ++i) {
        if (chunks_[i].name == name) return i;
    }
    throw std::out_of_range("unknown chunk '" + name + "'");
}

void MemorySystem::initialize(RandomSource& rng, problem::NfeCounter& nfe) {
    for (std::size_t a = 0; a < agents_; ++a) {
        for (std::size_t k = 0; k < agent_rows_.size(); ++k) {
            agent_cells_[k][a] = toolbox::ie_random(*problem_, 1, rng, nfe).front();
        }
    }
    for (std::size_t k = 0; k < shared_rows_.size(); ++k) {
        shared_cells_[k] = toolbox::ie_random(*problem_, shared_sizes_[k], rng, nfe);
    }
}

const State& MemorySystem::agent_state(std::size_t agent, std::size_t c) const {
    const auto& info = chunks_[c];
    if (info.memory != MemoryId::M_A) throw std::invalid_argument(info.name + " is not an M_A chunk");
    return agent_cells_[info.slot][agent];
}

std::span<const State> MemorySystem::set_view(std::size_t c) const {
    const auto& info = chunks_[c];
    if (info.memory == MemoryId::M_SG) return shared_cells_[info.slot];
    if (info.memory == MemoryId::M_SD) return agent_cells_[info.slot];
    throw std::invalid_argument(info.name + " is not a shared set");
}

void MemorySystem::put_generated(std::size_t c, State s) {
    const auto& info = chunks_[c];
    if (info.memory != MemoryId::M_G) throw std::invalid_argument(info.name + " is not an M_G chunk");
    generated_[info.slot] = std::move(s);
}

const State& MemorySystem::generated(std::size_t c) const {
    const auto& g = generated_[chunks_[c].slot];
    if (!g) throw std::runtime_error("generative chunk " + chunks_[c].name + " is empty");
    return *g;
}

void MemorySystem::clear_generated() {
    for (auto& g : generated_) g.reset();
}

void MemorySystem::submit(std::size_t agent, std::span<const std::size_t> updates) {
    for (std::size_t c : updates) {
        const auto& info = chunks_[c];
        const auto& src = chunks_[info.source];
        const State& value = src.memory == MemoryId::M_G ? generated(info.source) : agent_cells_[src.slot][agent];
        if (info.memory == MemoryId::M_A) {
            agent_buffers_[info.slot][agent] = value;
        } else if (info.memory == MemoryId::M_SG) {
            shared_buffers_[info.slot].push_back(value);
        } else {
            throw std::invalid_argument("submit: " + info.name + " is not a genuine chunk");
        }
    }
}

void MemorySystem::flush(const quality::Comparator& cmp, RandomSource& rng) {
    for (std::size_t k = 0; k < shared_rows_.size(); ++k) {
        auto& buf = shared_buffers_[k];
        if (!buf.empty()) {
            const auto& rule = *rows_[shared_rows_[k]].update_rule;
            toolbox::ue_tournament_replace(shared_cells_[k], buf, static_cast<int>(rule.param("C_NTW")), cmp, rng);
            buf.clear();
        }
    }
    for (std::size_t a = 0; a < agents_; ++a) {
        for (std::size_t k = 0; k < agent_rows_.size(); ++k) {
            auto& buf = agent_buffers_[k][a];
            if (!buf) continue;
            const auto& rule = *rows_[agent_rows_[k]].update_rule;
            if (rule.kind == toolbox::RuleKind::ue_greedy) {
                toolbox::ue_greedy(agent_cells_[k][a], *buf, cmp);
            } else {
                toolbox::ue_direct(agent_cells_[k][a], *buf);
            }
            buf.reset();
        }
    }
}

const std::optional<State>& MemorySystem::agent_buffer(std::size_t agent, std::size_t c) const {
    const auto& info = chunks_[c];
    if (info.memory != MemoryId::M_A) throw std::invalid_argument(info.name + " is not an M_A chunk");
    return agent_buffers_[info.slot][agent];
}

const StateSet& MemorySystem::shared_buffer(std::size_t c) const {
    const auto& info = chunks_[c];
    if (info.memory != MemoryId::M_SG) throw std::invalid_argument(info.name + " is not an M_SG chunk");
    return shared_buffers_[info.slot];
}

}  // namespace cgo::memory
