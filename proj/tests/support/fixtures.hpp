// Machines used throughout the tests, built directly rather than parsed.

#pragma once

#include <fsmviz/core.hpp>

#include <string>

namespace fsmviz::testing {

inline const std::string machines_dir = FSMVIZ_MACHINES_DIR;

// {EMP} U aa* U ab*
inline Nfa lndfa()
{
    return make_ndfa({"S", "A", "B", "F"}, {'a', 'b'}, "S", {"A", "B", "F"},
                     {{"S", 'a', "A"}, {"S", 'a', "B"}, {"S", eps, "F"}, {"A", 'b', "A"}, {"B", 'a', "B"}});
}

// (aba U ab)*
inline Nfa nd()
{
    return make_ndfa({"S", "A", "B", "C", "D", "E"}, {'a', 'b'}, "S", {"S"},
                     {{"S", 'a', "A"},
                      {"S", 'a', "B"},
                      {"A", 'b', "C"},
                      {"B", 'b', "D"},
                      {"C", 'a', "E"},
                      {"D", eps, "S"},
                      {"E", eps, "S"}});
}

// Hand-built dfa for (aba U ab)*
inline Dfa d()
{
    return make_dfa({"S", "A", "B", "C", "ds"}, {'a', 'b'}, "S", {"S", "B", "C"},
                    {{"S", 'a', "A"},
                     {"S", 'b', "ds"},
                     {"A", 'a', "ds"},
                     {"A", 'b', "B"},
                     {"B", 'a', "C"},
                     {"B", 'b', "ds"},
                     {"C", 'a', "A"},
                     {"C", 'b', "B"},
                     {"ds", 'a', "ds"},
                     {"ds", 'b', "ds"}},
                    true);
}

// aa* U ab*, with S -eps-> F and F not final
inline Nfa aa_ab()
{
    return make_ndfa({"S", "A", "B", "F"}, {'a', 'b'}, "S", {"A", "B"},
                     {{"S", 'a', "A"}, {"S", 'a', "B"}, {"S", eps, "F"}, {"A", 'a', "A"}, {"B", 'b', "B"}});
}

} // namespace fsmviz::testing
