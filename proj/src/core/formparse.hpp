#pragma once

#include "core/forms.hpp"

#include <stdexcept>
#include <string>

namespace betaforms {

// Error with a caret position into the offending text.
class FormParseError : public std::runtime_error {
public:
    FormParseError(const std::string& msg, size_t pos, const std::string& text);
    size_t position() const { return pos_; }

private:
    size_t pos_;
};

// Parses the form expression grammar against a chart: signed sums of terms
// like  c * m / n * dX ^ dY  with rational c and monomials m, n. '*' is the
// graded product, '/' divides by a scalar monomial or rational, '^' is an
// integer power after a scalar and the wedge between differentials.
// Whitespace-insensitive.
DiffForm parse_form(const std::string& text, const Chart& chart);

// Canonical rendering; parse_form(print_form(f)) == f.
std::string print_form(const DiffForm& f, const Chart& chart);

} // namespace betaforms
