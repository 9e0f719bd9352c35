#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "cgo/problem.hpp"
#include "cgo/quality.hpp"
#include "cgo/rng.hpp"
#include "cgo/state.hpp"
#include "cgo/toolbox.hpp"

namespace cgo::memory {

enum class MemoryId { M_A, M_SG, M_SD, M_G };

std::string memory_name(MemoryId id);
std::optional<MemoryId> memory_from_name(const std::string& name);

/// Chunk names starting with '$' hold state sets, all others single states.
bool is_set_name(const std::string& chunk);

/// Size of a shared state set: factor, optionally multiplied by N.
struct SetSize {
    std::int64_t factor = 1;
    bool times_agents = false;

    std::size_t resolve(std::size_t agents) const {
        return static_cast<std::size_t>(factor) * (times_agents ? agents : 1);
    }
    friend bool operator==(const SetSize&, const SetSize&) = default;
};

struct ProtocolRow {
    MemoryId memory = MemoryId::M_A;
    std::string chunk;
    std::optional<SetSize> size;
    std::optional<toolbox::RuleInstance> init_rule;
    std::optional<toolbox::RuleInstance> update_rule;
    std::string source;

    friend bool operator==(const ProtocolRow&, const ProtocolRow&) = default;
};

/// Memory protocol: the generative buffer chunks plus the table rows.
struct Protocol {
    std::vector<std::string> generative;
    std::vector<ProtocolRow> rows;

    const ProtocolRow* find(const std::string& chunk) const;
    bool is_generative(const std::string& chunk) const;
    /// Genuine chunks are M_A and M_SG rows.
    bool is_genuine(const std::string& chunk) const;

    friend bool operator==(const Protocol&, const Protocol&) = default;
};

struct Diagnostic {
    /// Short rule id such as "duplicate-chunk" or "cycle".
    std::string rule;
    std::string location;
    std::string message;
};

std::string format(const Diagnostic& d);

struct UpdatableGraph {
    std::vector<std::string> nodes;
    /// (parent, child) index pairs, one per protocol row with a known source.
    std::vector<std::pair<std::size_t, std::size_t>> edges;
    std::vector<std::size_t> roots;

    std::optional<std::size_t> index_of(const std::string& name) const;
    std::optional<std::size_t> parent_of(std::size_t node) const;
    std::vector<std::size_t> children_of(std::size_t node) const;
    /// Root of the tree containing `node`.
    std::size_t root_of(std::size_t node) const;
};

/// Builds the graph; sources that name no chunk are reported as
/// "dangling-source" and get no edge.
UpdatableGraph build_updatable_graph(const Protocol& protocol, std::vector<Diagnostic>* diagnostics = nullptr);

/// Forest check on an arbitrary digraph: reports "multiple-parents" for any
/// node with in-degree above one and "cycle" for nodes on a directed cycle.
std::vector<Diagnostic> check_forest(std::size_t node_count,
                                     const std::vector<std::pair<std::size_t, std::size_t>>& edges,
                                     const std::vector<std::string>& names = {});

/// All violations of the protocol table, empty when valid.
std::vector<Diagnostic> validate_protocol(const Protocol& protocol);

/// Runtime storage for one run: LTM cells, the generative buffer and the
/// update buffers.
class MemorySystem {
public:
    MemorySystem(const Protocol& protocol, const problem::ConstrainedProblem& problem, std::size_t agents);

    std::size_t agents() const { return agents_; }

    /// Chunk index by name; throws std::out_of_range when unknown.
    std::size_t chunk(const std::string& name) const;
    const std::string& chunk_name(std::size_t c) const { return chunks_[c].name; }
    MemoryId memory_of(std::size_t c) const { return chunks_[c].memory; }
    bool is_set(std::size_t c) const { return chunks_[c].is_set; }

    /// B_INI and B_CO: draws every genuine cell with its init rule.
    void initialize(RandomSource& rng, problem::NfeCounter& nfe);

    /// Current LTM state of an M_A chunk for one agent.
    const State& agent_state(std::size_t agent, std::size_t c) const;
    /// M_SG contents or the M_SD view over all agents.
    std::span<const State> set_view(std::size_t c) const;

    /// Places the freshly generated chunk of the acting agent.
    void put_generated(std::size_t c, State s);
    const State& generated(std::size_t c) const;
    void clear_generated();

    /// B_SUB: clones each update source into the matching buffer.
    void submit(std::size_t agent, std::span<const std::size_t> updates);

    /// B_USG then B_UA for agents in id order; clears all buffers.
    void flush(const quality::Comparator& cmp, RandomSource& rng);

    const std::optional<State>& agent_buffer(std::size_t agent, std::size_t c) const;
    const StateSet& shared_buffer(std::size_t c) const;

private:
    struct ChunkInfo {
        std::string name;
        MemoryId memory;
        bool is_set;
        std::size_t row;
        std::size_t slot;
        std::size_t source;
    };

    const problem::ConstrainedProblem* problem_;
    std::vector<ProtocolRow> rows_;
    std::size_t agents_;
    std::vector<ChunkInfo> chunks_;
    std::vector<std::vector<State>> agent_cells_;
    std::vector<StateSet> shared_cells_;
    std::vector<std::optional<State>> generated_;
    std::vector<std::vector<std::optional<State>>> agent_buffers_;
    std::vector<StateSet> shared_buffers_;
    std::vector<std::size_t> shared_sizes_;
    std::vector<std::size_t> agent_rows_;
    std::vector<std::size_t> shared_rows_;
};

}  // namespace cgo::memory
