#pragma once

#include "qknots/braid.hpp"
#include "qknots/diagram.hpp"
#include "qknots/pd_io.hpp"

namespace fixtures {

// Right-handed trefoil, all crossings positive.
inline qknots::LinkDiagram right_trefoil() { return qknots::parse_pd("X[1,5,2,4] X[3,1,4,6] X[5,3,6,2]"); }
inline qknots::LinkDiagram left_trefoil() { return qknots::parse_pd("X[1,4,2,5] X[3,6,4,1] X[5,2,6,3]"); }
// Planar Hopf link, linking number -1.
inline qknots::LinkDiagram hopf() { return qknots::parse_pd("X[4,1,3,2] X[2,3,1,4]"); }
inline qknots::LinkDiagram positive_hopf() { return qknots::braid_closure(qknots::parse_braid("n=2: s1 s1")); }
inline qknots::BraidWord borromean_braid() { return qknots::parse_braid("n=3: s1 s2^-1 s1 s2^-1 s1 s2^-1"); }
inline qknots::LinkDiagram borromean() { return qknots::braid_closure(borromean_braid()); }
inline qknots::LinkDiagram figure_eight() { return qknots::braid_closure(qknots::parse_braid("n=3: s1 s2^-1 s1 s2^-1")); }

}  // namespace fixtures
