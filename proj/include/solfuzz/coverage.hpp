// Edge coverage: control transfers hash into a power-of-two table of 8-bit
// per-execution hit counters; a global seen set accumulates across the
// campaign and novelty (edges never seen before) drives input scheduling.
#pragma once

#include "solfuzz/vm.hpp"

namespace solfuzz {

class CoverageMap {
  public:
    explicit CoverageMap(size_t size = 65536);

    size_t size() const { return counters_.size(); }

    static uint64_t index(uint64_t src_pc, uint64_t dst_pc, size_t size) {
        return (src_pc + dst_pc) % size;
    }

    void begin_execution();
    void record(uint64_t src_pc, uint64_t dst_pc) {
        uint8_t& c = counters_[index(src_pc, dst_pc, counters_.size())];
        if (c != 0xFF) c++;
    }
    // Folds this execution's edges into the seen set; returns how many were new.
    uint64_t finish_execution();

    uint64_t seen_count() const { return seen_count_; }
    bool seen(uint64_t idx) const { return seen_[idx] != 0; }
    const std::vector<uint8_t>& counters() const { return counters_; }

  private:
    std::vector<uint8_t> counters_;
    std::vector<uint8_t> seen_;
    uint64_t seen_count_ = 0;
};

// Attach to the top-level VM only: nested invokes share program ids and pcs,
// which would alias edges across programs.
struct CoverageHook : VmHooks {
    CoverageMap* map;
    explicit CoverageHook(CoverageMap* m) : map(m) {}
    void on_control_transfer(const Vm&, uint64_t src_pc, uint64_t dst_pc) override {
        map->record(src_pc, dst_pc);
    }
};

}  // namespace solfuzz
