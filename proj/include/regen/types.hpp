#pragma once

// Shared storage-node types. Node ids are 1-based throughout, matching how
// clusters are laid out on disk (node_1 .. node_n).

#include <cstddef>
#include <cstdint>
#include <vector>

namespace regen {

// The symbols one node stores for one chunk.
struct NodeState {
    uint32_t node = 0;  // 1-based id
    bool alive = true;
    std::vector<uint32_t> symbols;  // exactly alpha entries when alive
};

// Record of one regeneration: who helped and how much moved.
struct RepairTranscript {
    uint32_t failed = 0;
    std::vector<uint32_t> helpers;
    std::vector<size_t> per_helper_symbols;  // aligned with helpers
    size_t total_symbols = 0;
    size_t symbol_bytes = 1;  // wire width of one symbol
};

}  // namespace regen
