#pragma once

#include "flexitex/store.hpp"

#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace flexitex {

class NTriplesError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// One line per triple, sorted, canonical escaping; integers are typed
/// xsd:integer literals.
std::string write_ntriples(const std::vector<Triple>& triples);

/// Parses N-Triples as produced by write_ntriples (plus blank lines and
/// comments). Throws NTriplesError with the line number on malformed input.
std::vector<Triple> read_ntriples(std::string_view text);

}  // namespace flexitex
