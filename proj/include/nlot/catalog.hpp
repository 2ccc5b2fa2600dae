#pragma once

#include "nlot/protocol.hpp"

namespace nlot {

// ============================================================================
// The eight single-copy reductions, by stable name:
//
//   pr-from-ot  (0 bits)   ok-from-pr  (0 bits)   ok-from-ot  (0 bits)
//   ot-from-pr  (1 bit)    pr-from-ok  (2 bits)   ot-from-ok  (3 bits)
//   ot-from-to  (1 bit)    ok-from-ko  (0 bits)
// ============================================================================

ProtocolSpec pr_from_ot();
ProtocolSpec ok_from_pr();
ProtocolSpec ok_from_ot();
ProtocolSpec ot_from_pr();
ProtocolSpec pr_from_ok();
ProtocolSpec ot_from_ok();
ProtocolSpec ot_from_to();
ProtocolSpec ok_from_ko();

/// All eight, in the order above.
const std::vector<ProtocolSpec>& catalog();

const std::vector<std::string>& catalog_names();

/// Throws StructuralError for unknown names.
const ProtocolSpec& find_protocol(std::string_view name);

}  // namespace nlot
