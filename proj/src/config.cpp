#include "qseq/config.hpp"

namespace qseq {

namespace {
std::atomic<int> g_dimension_cap{4096};
}

int dimension_cap() { return g_dimension_cap.load(std::memory_order_relaxed); }

void set_dimension_cap(int cap) {
  g_dimension_cap.store(cap, std::memory_order_relaxed);
}

}  // namespace qseq
