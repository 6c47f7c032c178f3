#pragma once

#include "waitnet/model.hpp"
#include "waitnet/scta.hpp"
#include "waitnet/stateclass.hpp"

#include <string>
#include <string_view>

namespace waitnet {

// Line-oriented net format:
//   net <id>
//   place <id> [init <nat>]
//   ctrl <id> [init <nat>]
//   trans <id> [label <sym> | eps] interval [<rat>,<rat>|inf]
//   arc <place> -> <trans> [weight <nat>]
//   arc <trans> -> <place> [weight <nat>]
// '#' starts a comment.  Declarations may appear in any order.
Net parse_net(std::string_view text);
Net load_net(const std::string& path);  // also throws Error when unreadable

std::string print_net(const Net& net);

std::string scg_to_dot(const Net& net, const StateClassGraph& g);
std::string scg_to_json(const Net& net, const StateClassGraph& g);
std::string ta_to_dot(const Net& net, const TimedAutomaton& ta);
std::string ta_to_json(const Net& net, const TimedAutomaton& ta);
std::string constraint_graph_to_dot(const Net& net, const FiringDomain& d);

}  // namespace waitnet
