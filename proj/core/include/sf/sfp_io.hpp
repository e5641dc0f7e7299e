#pragma once

#include <iosfwd>
#include <string>

#include "sf/instance.hpp"

namespace sf {

/// Reads the SFP text format (UTF-8, line oriented, `#` comments):
///
///   SFP 1
///   NODES <n>
///   EDGE <u> <v> <w>     one per edge, 1-based ids, w >= 1 integer
///   DEMAND <s> <t>       one per demand
///   END
///
/// Optional `# label <i> <name>` comment lines carry per-vertex names.
/// Errors are reported with the offending line number.
Instance parse_instance(std::istream& in);
Instance parse_instance_text(const std::string& text);
Instance load_instance(const std::string& path);

/// Canonical writer: EDGE lines sorted by (u,v), DEMAND lines by (s,t),
/// byte-identical across runs. parse(write(x)) equals x structurally.
void write_instance(const Instance& inst, std::ostream& out);
std::string write_instance_text(const Instance& inst);
void save_instance(const Instance& inst, const std::string& path);

}  // namespace sf
