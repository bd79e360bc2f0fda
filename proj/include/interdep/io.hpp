#pragma once

#include <filesystem>
#include <iosfwd>
#include <stdexcept>
#include <string>
#include <vector>

#include "interdep/cascade.hpp"
#include "interdep/net_core.hpp"

namespace interdep {

/// Load/save failure. Messages start with "<file>:<line>:" when a specific
/// input line is at fault.
class IoError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct LoadedTopology {
    InterSystem system;
    std::vector<std::string> warnings;  // collapsed duplicate edges / arcs
};

// File layouts (UTF-8 CSV with a header row; blank lines and '#' comments are
// skipped):
//   nodes.csv  side,index,role,x,y        (x,y optional)
//   edges.csv  side,index_a,index_b
//   deps.csv   arc_type,src_side,src_index,dst_side,dst_index
//              arc_type in {ctrl,energy,info,dep}
LoadedTopology load_topology(const std::filesystem::path& nodes_csv,
                             const std::filesystem::path& edges_csv,
                             const std::filesystem::path& deps_csv);
LoadedTopology load_topology(const std::filesystem::path& dir);

/// Writes nodes.csv, edges.csv and deps.csv into `dir` (created if needed).
void save_topology(const InterSystem& system, const std::filesystem::path& dir);
void write_nodes_csv(std::ostream& out, const InterSystem& system);
void write_edges_csv(std::ostream& out, const InterSystem& system);
void write_deps_csv(std::ostream& out, const InterSystem& system);

/// events.csv: round,side,index,role,reason
void write_events_csv(std::ostream& out, const InterSystem& system, const CascadeReport& report);

/// Target lists: side,index
void write_targets_csv(std::ostream& out, const std::vector<NodeId>& targets);
std::vector<NodeId> read_targets_csv(const std::filesystem::path& file);

/// Parses "power:3,comm:0" style node lists.
std::vector<NodeId> parse_node_list(const std::string& text);

/// Shortest representation that reads back to the same double.
std::string format_double(double v);

}  // namespace interdep
