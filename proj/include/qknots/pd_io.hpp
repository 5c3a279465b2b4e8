#pragma once

#include <string>

#include <json.hpp>

#include "qknots/diagram.hpp"

namespace qknots {

/// Parses diagram text.
///
///     diagram  := { item }
///     item     := crossing | circles | orient | comment
///     crossing := "X[" int "," int "," int "," int "]"   (PD tuple, slot 0 = incoming under)
///     circles  := "O[" int "]"                             (k crossing-free circles)
///     orient   := "orient:" { ("+" | "-") int }            (rest of the line)
///     comment  := "#" ... end of line
///
/// Items are separated by whitespace or commas. `-a` in an orient header reverses
/// the component containing arc a; `+a` keeps the default direction. Throws
/// ParseError (with line/column/token) for malformed text and InputError for
/// structurally invalid diagrams.
LinkDiagram parse_pd(const std::string& text);

/// Text form accepted by parse_pd; emits an orient header only when needed to
/// reproduce the diagram's orientation.
std::string to_pd_text(const LinkDiagram& d);

void to_json(nlohmann::json& j, const LinkDiagram& d);
void from_json(const nlohmann::json& j, LinkDiagram& d);

}  // namespace qknots
