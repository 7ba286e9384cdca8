#pragma once

#include <ostream>

#include "tamperlab/cid.hpp"

namespace tamperlab::cid {
inline void PrintTo(const Edge& e, std::ostream* os) {
  *os << e.from << (e.kind == EdgeKind::Causal ? "->" : "~>") << e.to;
}
inline void PrintTo(Incentive c, std::ostream* os) { *os << to_string(c); }
}  // namespace tamperlab::cid
