#pragma once

#include "core/variety.hpp"

#include <string>

namespace betaforms {

// .variety files: UTF-8 key-value sections. Grammar (# starts a comment):
//
//   [variety]
//   name = S4
//   variables = x y z
//   equations = x*y - z^4
//   dimension = 2
//   normal = true
//   pole-variables = z
//   eliminated = z
//   singular-locus = x; y; z
//   [parametrization]          (optional)
//   parameters = a b
//   x = a^4
//   y = b^4
//   z = a*b
//   [deck]                     (optional)
//   order = 4
//   weights = 1 -1
//   [L-presentation]           (optional; one line per degree)
//   q2 = dx^dy/z^3
//   [alpha-seeds]              (optional)
//   q1 = x*dy/z^2
//   [golden]                   (optional; raw strings, '|' starts a comment)
//   alpha1_extra = x*dy/z^2
//
// Multiple values on one line are separated by ';'.
VarietyPtr load_variety_text(const std::string& text, const std::string& origin = "<string>");
VarietyPtr load_variety_file(const std::string& path);

std::string save_variety_text(const Variety& v);
void save_variety_file(const Variety& v, const std::string& path);

std::string variety_to_json(const Variety& v);

} // namespace betaforms
