#include "solfuzz/coverage.hpp"

namespace solfuzz {

CoverageMap::CoverageMap(size_t size) {
    if (size == 0 || (size & (size - 1)) != 0)
        throw ConfigError("coverage map size must be a power of two");
    counters_.assign(size, 0);
    seen_.assign(size, 0);
}

void CoverageMap::begin_execution() { std::fill(counters_.begin(), counters_.end(), 0); }

uint64_t CoverageMap::finish_execution() {
    uint64_t fresh = 0;
    for (size_t i = 0; i < counters_.size(); i++) {
        if (counters_[i] && !seen_[i]) {
            seen_[i] = 1;
            fresh++;
        }
    }
    seen_count_ += fresh;
    return fresh;
}

}  // namespace solfuzz
