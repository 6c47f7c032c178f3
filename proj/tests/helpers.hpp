#pragma once

#include "waitnet/textio.hpp"

#include <string>
#include <vector>

inline waitnet::Net fixture(const std::string& name) {
    return waitnet::load_net(std::string(NETS_DIR) + "/" + name + ".wnet");
}

inline std::vector<std::string> bounded_fixtures() {
    return {"offer", "offer_expiry", "kernel", "race", "ta_split", "ta_split_eps",
            "deadline20", "noninjective", "alternator"};
}

inline int tid(const waitnet::Net& n, const char* id) { return n.find_transition(id); }
inline int pid(const waitnet::Net& n, const char* id) { return n.find_place(id); }

inline waitnet::Rational R(long a, long b = 1) { return waitnet::Rational(a, b); }
