#pragma once

#include "varstab/graphder.hpp"
#include "varstab/io.hpp"
#include "varstab/oracle.hpp"
#include "varstab/verdict.hpp"

namespace varstab {

json to_json(const IndexSet& J);
json to_json(const Certificate& c);
/// {"condition", "status", "reason", "certificate", "strata", "prerequisites"}
json to_json(const Verdict& v);
json to_json(const DerivSet& d);
json to_json(const SolutionPieces& S);
json to_json(const RatioTable& t);
json to_json(const CalmnessReport& r);

}  // namespace varstab
